//! Independent brute-force cross-checks of the main density pipeline.
//!
//! Everything here is deliberately duplicated rather than shared: densities
//! are recounted by literal subset enumeration with a separate isomorphism
//! routine, so a bug in the main path cannot vacuously confirm itself.  The
//! module also validates the chain rule exhaustively on small orders and
//! exercises the vertex blow-up construction, which preserves
//! triangle-freeness while squaring the vertex count — the mechanism that
//! turns a density bound into a statement about arbitrarily large digraphs.

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{density, rat, AlgebraError, Rational};
use crate::digraph::{Digraph, DigraphError, MAX_ENUMERATION_ORDER, MAX_VERTICES};
use crate::flags::{type_empty, type_point, Basis, Flag, FlagError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("flags have different types")]
    TypeMismatch,
    #[error("flag of order {inner} cannot be measured inside a flag of order {outer}")]
    OrderViolation { inner: usize, outer: usize },
    #[error("blow-up of an order-{0} digraph would exceed 64 vertices")]
    SizeCapExceeded(usize),
    #[error("wide digraph supports at most 64 vertices, got {0}")]
    TooWide(usize),
    #[error("edge ({0}, {1}) is invalid here (out of range, loop, or counter-parallel)")]
    InvalidEdge(usize, usize),
    #[error("exhaustive checks support host order ≤ {max}, got {got}")]
    OrderCap { got: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] DigraphError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Adjacency-mask digraph without the 8-vertex cap of [`Digraph`] — big
/// enough to hold any blow-up this crate can produce (≤ 64 vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WideDigraph {
    n: usize,
    out: Vec<u64>,
}

impl WideDigraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<WideDigraph, OracleError> {
        if n > 64 {
            return Err(OracleError::TooWide(n));
        }
        let mut out = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v || out[v] >> u & 1 == 1 {
                return Err(OracleError::InvalidEdge(u, v));
            }
            out[u] |= 1 << v;
        }
        Ok(WideDigraph { n, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u] >> v & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn is_triangle_free(&self) -> bool {
        for u in 0..self.n {
            let mut outs = self.out[u];
            while outs != 0 {
                let v = outs.trailing_zeros() as usize;
                outs &= outs - 1;
                let mut seconds = self.out[v];
                while seconds != 0 {
                    let w = seconds.trailing_zeros() as usize;
                    seconds &= seconds - 1;
                    if self.out[w] >> u & 1 == 1 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Vertex blow-up: every host vertex becomes a full copy of the host, and
/// every host edge (u, v) becomes the complete directed bipartite graph from
/// copy u to copy v.  Vertex (v, w) keeps its within-copy out-edges on top of
/// its cross-copy ones, so the minimum out-degree works out to
/// `δ⁺(D)·(n+1)` exactly — the often-quoted `δ⁺(D)·n` is the asymptotic
/// shorthand, off by the within-copy share `δ⁺(D)`.
pub fn blow_up(d: &Digraph) -> Result<WideDigraph, OracleError> {
    let n = d.n();
    if n * n > 64 {
        return Err(OracleError::SizeCapExceeded(n));
    }
    let mut edges = Vec::new();
    let index = |copy: usize, inner: usize| copy * n + inner;
    for copy in 0..n {
        for (a, b) in d.edges() {
            edges.push((index(copy, a), index(copy, b)));
        }
    }
    for (u, v) in d.edges() {
        for a in 0..n {
            for b in 0..n {
                edges.push((index(u, a), index(v, b)));
            }
        }
    }
    WideDigraph::new(n * n, &edges)
}

fn induced_edges(host: &Digraph, verts: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate() {
            if i != j && host.has_edge(u, v) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Label-respecting isomorphism between a candidate (vertices `0..n`, labels
/// at positions `0..k` in order) and a target flag — its own permutation
/// scan, independent of the canonical forms used by the main path.
fn sigma_equivalent(n: usize, edges: &[(usize, usize)], k: usize, target: &Flag) -> bool {
    if target.order() != n || edges.len() != target.graph().edge_count() {
        return false;
    }
    let target_labels = target.labels();
    let target_graph = target.graph();
    let target_rest: Vec<usize> = (0..n).filter(|v| !target_labels.contains(v)).collect();
    let has = |a: usize, b: usize| edges.contains(&(a, b));
    for perm in target_rest.iter().copied().permutations(target_rest.len()) {
        let mut map = vec![usize::MAX; n];
        map[..k].copy_from_slice(&target_labels);
        for (c, t) in (k..n).zip(&perm) {
            map[c] = *t;
        }
        let preserved = (0..n).all(|a| {
            (0..n).all(|b| a == b || has(a, b) == target_graph.has_edge(map[a], map[b]))
        });
        if preserved {
            return true;
        }
    }
    false
}

/// Density by definition: enumerate every extension of the labeled part of
/// `host` and count the ones inducing `inner`.  Same contract as the main
/// density operator, shared code limited to the digraph accessors.
pub fn brute_density(inner: &Flag, host: &Flag) -> Result<Rational, OracleError> {
    if inner.type_digraph() != host.type_digraph() {
        return Err(OracleError::TypeMismatch);
    }
    let k = inner.type_order();
    let (inner_order, host_order) = (inner.order(), host.order());
    if inner_order > host_order {
        return Err(OracleError::OrderViolation {
            inner: inner_order,
            outer: host_order,
        });
    }
    let labels = host.labels();
    let free: Vec<usize> = (0..host_order).filter(|v| !labels.contains(v)).collect();
    let mut hits: i64 = 0;
    let mut total: i64 = 0;
    for subset in free.iter().copied().combinations(inner_order - k) {
        total += 1;
        let mut verts = labels.clone();
        verts.extend(subset);
        let edges = induced_edges(host.graph(), &verts);
        if sigma_equivalent(inner_order, &edges, k, inner) {
            hits += 1;
        }
    }
    Ok(rat(hits, total))
}

/// How hosts for randomized checks are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerationMethod {
    /// Enumerate every flag up to the configured order.
    Exhaustive,
    /// Sample uniformly random 2-cycle-free orientations, rejecting any with
    /// a directed triangle.
    RandomOrientation,
}

/// Deterministic configuration for the randomized/exhaustive check runners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomDigraphSpec {
    /// Maximum host order.
    pub order: usize,
    pub seed: u64,
    pub method: GenerationMethod,
}

/// Uniformly random triangle-free digraph on `n` vertices by rejection over
/// the 3^C(n,2) two-cycle-free orientations.
pub fn random_triangle_free(
    n: usize,
    rng: &mut (impl Rng + ?Sized),
) -> Result<Digraph, OracleError> {
    if n > MAX_VERTICES {
        return Err(OracleError::Graph(DigraphError::TooManyVertices(n)));
    }
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match rng.gen_range(0..3u8) {
                    0 => {}
                    1 => edges.push((i, j)),
                    _ => edges.push((j, i)),
                }
            }
        }
        let d = Digraph::new(n, &edges)?;
        if d.is_triangle_free() {
            return Ok(d);
        }
    }
}

/// Outcome of one oracle run in the common report shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub config: serde_json::Value,
    pub trials: usize,
    pub violations: Vec<serde_json::Value>,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "trials": self.trials,
            "violations": self.violations,
            "seed": self.seed,
            "notes": self.notes,
        })
    }
}

/// The five types of order ≤ 2 used by the exhaustive checks.
fn small_types() -> Vec<Digraph> {
    vec![
        type_empty(),
        type_point(),
        Digraph::new(2, &[]).expect("two-vertex type"),
        Digraph::new(2, &[(0, 1)]).expect("edge type"),
        Digraph::new(2, &[(1, 0)]).expect("reversed edge type"),
    ]
}

fn type_name(sigma: &Digraph) -> String {
    format!("{sigma}")
}

/// Checks `p(F′;F) = Σ_{F̃} p(F′;F̃)·p(F̃;F)` for one configuration,
/// appending violations and returning how many identities were tested.
fn check_chain_identity(
    sigma: &Digraph,
    inner_order: usize,
    mid_order: usize,
    hosts: &[Flag],
    violations: &mut Vec<serde_json::Value>,
) -> Result<usize, OracleError> {
    let inners = Basis::of(sigma, inner_order)?;
    let mids = Basis::of(sigma, mid_order)?;
    let inner_to_mid: Vec<Vec<Rational>> = inners
        .members()
        .iter()
        .map(|fp| {
            mids.members()
                .iter()
                .map(|fm| density(fp, fm))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut checked = 0;
    for host in hosts {
        let mid_in_host: Vec<Rational> = mids
            .members()
            .iter()
            .map(|fm| density(fm, host))
            .collect::<Result<Vec<_>, _>>()?;
        for (fp, row) in inners.members().iter().zip(&inner_to_mid) {
            let lhs = density(fp, host)?;
            let rhs: Rational = row
                .iter()
                .zip(&mid_in_host)
                .map(|(a, b)| a * b)
                .sum();
            checked += 1;
            if lhs != rhs {
                violations.push(serde_json::json!({
                    "sigma": type_name(sigma),
                    "inner": format!("{fp}"),
                    "mid_order": mid_order,
                    "host": format!("{host}"),
                    "lhs": lhs.to_string(),
                    "rhs": rhs.to_string(),
                }));
            }
        }
    }
    Ok(checked)
}

/// Validates the density chain rule across intermediate orders.  The
/// exhaustive method covers every type of order ≤ 2 and every order chain
/// `k ≤ l′ ≤ l̃ ≤ l ≤ spec.order`; the random method samples hosts (up to
/// order 5) instead of enumerating them.
pub fn chain_rule_check(
    spec: &RandomDigraphSpec,
    trials: usize,
) -> Result<OracleReport, OracleError> {
    if spec.order > MAX_ENUMERATION_ORDER {
        return Err(OracleError::OrderCap {
            got: spec.order,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    let mut violations = Vec::new();
    let mut checked = 0usize;
    match spec.method {
        GenerationMethod::Exhaustive => {
            for sigma in small_types() {
                let k = sigma.n();
                for host_order in k..=spec.order {
                    let hosts = Basis::of(&sigma, host_order)?.members().to_vec();
                    for mid_order in k..=host_order {
                        for inner_order in k..=mid_order {
                            checked += check_chain_identity(
                                &sigma,
                                inner_order,
                                mid_order,
                                &hosts,
                                &mut violations,
                            )?;
                        }
                    }
                }
            }
        }
        GenerationMethod::RandomOrientation => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let types = small_types();
            for _ in 0..trials {
                let sigma = &types[rng.gen_range(0..types.len())];
                let k = sigma.n();
                let host_order = rng.gen_range(k.max(1)..=spec.order.max(k.max(1)));
                // Keep enumerated bases at order ≤ 4; only hosts go higher.
                let mid_cap = host_order.min(4).max(k);
                let mid_order = rng.gen_range(k..=mid_cap);
                let inner_order = rng.gen_range(k..=mid_order);
                let host = loop {
                    let d = random_triangle_free(host_order, &mut rng)?;
                    let assignments: Vec<Vec<usize>> = (0..host_order)
                        .permutations(k)
                        .filter(|theta| {
                            d.induced_subgraph(theta)
                                .map(|induced| induced == *sigma)
                                .unwrap_or(false)
                        })
                        .collect();
                    if !assignments.is_empty() {
                        let theta = &assignments[rng.gen_range(0..assignments.len())];
                        break Flag::new(d, theta)?;
                    }
                };
                checked += check_chain_identity(
                    sigma,
                    inner_order,
                    mid_order,
                    std::slice::from_ref(&host),
                    &mut violations,
                )?;
            }
        }
    }
    Ok(OracleReport {
        config: serde_json::json!({
            "check": "chain-rule",
            "method": format!("{:?}", spec.method),
            "max_order": spec.order,
        }),
        trials: checked,
        violations,
        seed: spec.seed,
        notes: vec![],
    })
}

/// Compares [`brute_density`] against the main density operator: always on
/// the full grid of order-3 unlabeled classes × order-4 basis flags, plus
/// `extra_trials` random pairs with labeled types.
pub fn density_agreement_check(
    spec: &RandomDigraphSpec,
    extra_trials: usize,
) -> Result<OracleReport, OracleError> {
    let mut violations = Vec::new();
    let mut compared = 0usize;
    let empty = type_empty();
    let order3 = Basis::of(&empty, 3)?;
    let order4 = Basis::of(&empty, 4)?;
    let mut compare = |inner: &Flag, host: &Flag| -> Result<(), OracleError> {
        let fast = density(inner, host)?;
        let slow = brute_density(inner, host)?;
        compared += 1;
        if fast != slow {
            violations.push(serde_json::json!({
                "inner": format!("{inner}"),
                "host": format!("{host}"),
                "main": fast.to_string(),
                "oracle": slow.to_string(),
            }));
        }
        Ok(())
    };
    for inner in order3.members() {
        for host in order4.members() {
            compare(inner, host)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let types = small_types();
    for _ in 0..extra_trials {
        let sigma = &types[rng.gen_range(0..types.len())];
        let k = sigma.n();
        let host_order = rng.gen_range(k.max(2)..=spec.order.max(k.max(2)));
        let inner_order = rng.gen_range(k..=host_order);
        let members = Basis::of(sigma, inner_order)?;
        let inner = &members.members()[rng.gen_range(0..members.len())];
        let host = loop {
            let d = random_triangle_free(host_order, &mut rng)?;
            let assignments: Vec<Vec<usize>> = (0..host_order)
                .permutations(k)
                .filter(|theta| {
                    d.induced_subgraph(theta)
                        .map(|induced| induced == *sigma)
                        .unwrap_or(false)
                })
                .collect();
            if !assignments.is_empty() {
                let theta = &assignments[rng.gen_range(0..assignments.len())];
                break Flag::new(d, theta)?;
            }
        };
        compare(inner, &host)?;
    }
    Ok(OracleReport {
        config: serde_json::json!({
            "check": "density-agreement",
            "grid": "order-3 classes × order-4 classes",
            "extra_trials": extra_trials,
            "max_order": spec.order,
        }),
        trials: compared,
        violations,
        seed: spec.seed,
        notes: vec![],
    })
}

/// Blows up random triangle-free digraphs and checks the construction's
/// invariants: n² vertices, triangle-freeness preserved, and the measured
/// minimum out-degree law.
pub fn blow_up_check(
    spec: &RandomDigraphSpec,
    trials: usize,
) -> Result<OracleReport, OracleError> {
    if spec.order > MAX_VERTICES {
        return Err(OracleError::OrderCap {
            got: spec.order,
            max: MAX_VERTICES,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut violations = Vec::new();
    let mut refined_hits = 0usize;
    let mut coarse_hits = 0usize;
    for _ in 0..trials {
        let n = rng.gen_range(1..=spec.order.max(1));
        let d = random_triangle_free(n, &mut rng)?;
        let blown = blow_up(&d)?;
        if blown.n() != n * n {
            violations.push(serde_json::json!({
                "input": format!("{d}"),
                "problem": "vertex count",
                "got": blown.n(),
                "expected": n * n,
            }));
        }
        if !blown.is_triangle_free() {
            violations.push(serde_json::json!({
                "input": format!("{d}"),
                "problem": "triangle introduced",
            }));
        }
        let delta = (0..n).map(|v| d.out_degree(v)).min().unwrap_or(0);
        let measured = blown.min_out_degree();
        if measured == delta * (n + 1) {
            refined_hits += 1;
        }
        if measured == delta * n {
            coarse_hits += 1;
        }
        if measured != delta * (n + 1) && measured != delta * n {
            violations.push(serde_json::json!({
                "input": format!("{d}"),
                "problem": "min out-degree matches neither formula",
                "measured": measured,
            }));
        }
    }
    Ok(OracleReport {
        config: serde_json::json!({
            "check": "blow-up",
            "max_order": spec.order,
        }),
        trials,
        violations,
        seed: spec.seed,
        notes: vec![
            format!(
                "measured δ⁺(D⁽²⁾) = δ⁺(D)·(n+1) in {refined_hits}/{trials} trials \
                 (within-copy out-edges included)"
            ),
            format!(
                "asymptotic shorthand δ⁺(D)·n matched in {coarse_hits}/{trials} trials \
                 (exactly when δ⁺(D) = 0)"
            ),
        ],
    })
}

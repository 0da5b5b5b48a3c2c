//! Labeled flags, flag isomorphism, flag enumeration, and the shipped bases.
//!
//! A *type* of order `k` is a triangle-free digraph on the vertex set
//! `0..k`; it is represented here by a plain [`Digraph`].  A *σ-flag* is a
//! digraph together with an injective label sequence whose induced subgraph,
//! read in label order, equals σ exactly (not just up to isomorphism — the
//! vertex names of a type are significant).  Two flags of the same type are
//! isomorphic when some digraph isomorphism maps the i-th label of one to the
//! i-th label of the other.
//!
//! The three bases that index every table in this crate — `K` (order 3 over
//! the two-label edge type), `L` (order 3 over the one-label point type) and
//! `H` (order 4, unlabeled) — are built from [`crate::tables`] so that their
//! member order matches the reference tables; enumeration is compared against
//! them in tests rather than trusted for ordering.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use thiserror::Error;

use crate::digraph::{enumerate_triangle_free, Digraph, DigraphError};
use crate::tables;

/// Errors from flag construction, enumeration, and basis lookups.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlagError {
    #[error(transparent)]
    Graph(#[from] DigraphError),
    #[error("label {label} out of range for a graph on {n} vertices")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("label {0} repeated")]
    DuplicateLabel(usize),
    #[error("flags have different types")]
    TypeMismatch,
    #[error("flag order {flag_order} below its type order {type_order}")]
    OrderBelowType { flag_order: usize, type_order: usize },
    #[error("no flag named `{0}`")]
    UnknownName(String),
    #[error("flag does not belong to the basis")]
    NotInBasis,
}

/// A labeled flag: a triangle-free digraph plus an injective label sequence.
///
/// `labels[i]` is the vertex carrying label `i`; the induced subgraph on the
/// labels, in label order, is the flag's type.  An empty label sequence gives
/// an unlabeled graph, and a fully labeled flag with `labels = [0, 1, .., n-1]`
/// represents a type itself (this doubles as the unit element of its algebra).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Flag {
    graph: Digraph,
    labels: Vec<u8>,
}

impl Flag {
    pub fn new(graph: Digraph, labels: &[usize]) -> Result<Flag, FlagError> {
        let n = graph.n();
        let mut seen = vec![false; n];
        for &v in labels {
            if v >= n {
                return Err(FlagError::LabelOutOfRange { label: v, n });
            }
            if seen[v] {
                return Err(FlagError::DuplicateLabel(v));
            }
            seen[v] = true;
        }
        Ok(Flag {
            graph,
            labels: labels.iter().map(|&v| v as u8).collect(),
        })
    }

    /// The flag with no labels at all (a plain unlabeled digraph).
    pub fn unlabeled(graph: Digraph) -> Flag {
        Flag {
            graph,
            labels: Vec::new(),
        }
    }

    /// The unit flag of a type: every vertex labeled by itself.
    pub fn unit_of_type(sigma: &Digraph) -> Flag {
        Flag {
            graph: *sigma,
            labels: (0..sigma.n() as u8).collect(),
        }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    /// Vertices carrying labels, in label order.
    pub fn labels(&self) -> Vec<usize> {
        self.labels.iter().map(|&v| v as usize).collect()
    }

    /// Number of vertices of the underlying graph.
    pub fn order(&self) -> usize {
        self.graph.n()
    }

    /// Number of labels (the order of the flag's type).
    pub fn type_order(&self) -> usize {
        self.labels.len()
    }

    /// The type: the induced subgraph on the labels, read in label order.
    pub fn type_digraph(&self) -> Digraph {
        let verts = self.labels();
        self.graph
            .induced_subgraph(&verts)
            .expect("flag labels are valid vertices")
    }

    /// Canonical representative of this flag's isomorphism class: labels are
    /// moved to `0..k` in label order, and the remaining vertices are permuted
    /// to minimize the adjacency encoding.  Two flags of the same type are
    /// isomorphic exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Flag {
        let n = self.order();
        let k = self.type_order();
        let mut perm = vec![usize::MAX; n];
        for (i, &v) in self.labels.iter().enumerate() {
            perm[v as usize] = i;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| perm[v] == usize::MAX).collect();
        let mut best: Option<Digraph> = None;
        for assignment in (k..n).permutations(n - k) {
            for (&v, &slot) in rest.iter().zip(assignment.iter()) {
                perm[v] = slot;
            }
            let candidate = self.graph.permuted(&perm);
            if best.map_or(true, |b| candidate.sort_key() < b.sort_key()) {
                best = Some(candidate);
            }
        }
        // n == k leaves nothing to permute; the loop above still runs once
        // with the empty assignment, so `best` is always set.
        Flag {
            graph: best.expect("at least one permutation"),
            labels: (0..k as u8).collect(),
        }
    }
}

impl PartialOrd for Flag {
    fn partial_cmp(&self, other: &Flag) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Flag {
    fn cmp(&self, other: &Flag) -> std::cmp::Ordering {
        (self.graph.sort_key(), &self.labels).cmp(&(other.graph.sort_key(), &other.labels))
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};labels:", self.graph)?;
        for (i, v) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Whether two flags of the same type are isomorphic (an isomorphism of the
/// underlying graphs matching up labels pointwise).  Flags of different types
/// are not comparable and produce an error rather than `false`.
pub fn flags_isomorphic(a: &Flag, b: &Flag) -> Result<bool, FlagError> {
    if a.type_digraph() != b.type_digraph() {
        return Err(FlagError::TypeMismatch);
    }
    Ok(a.order() == b.order() && a.canonical() == b.canonical())
}

/// All σ-flags of order `l` up to flag isomorphism, as canonical
/// representatives in a deterministic (sorted) order.
pub fn enumerate_flags(sigma: &Digraph, l: usize) -> Result<Vec<Flag>, FlagError> {
    let k = sigma.n();
    if l < k {
        return Err(FlagError::OrderBelowType {
            flag_order: l,
            type_order: k,
        });
    }
    let mut seen = BTreeSet::new();
    for d in enumerate_triangle_free(l).map_err(FlagError::Graph)? {
        for theta in (0..l).permutations(k) {
            let induced = d
                .induced_subgraph(&theta)
                .expect("vertices drawn from 0..l");
            if induced != *sigma {
                continue;
            }
            let flag = Flag::new(d, &theta).expect("distinct vertices");
            seen.insert(flag.canonical());
        }
    }
    Ok(seen.into_iter().collect())
}

/// The three shipped basis registries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BasisName {
    /// Order-4 unlabeled graphs `H_0..H_31`.
    H,
    /// Order-3 flags over the two-label edge type, `K_0..K_7`.
    K,
    /// Order-3 flags over the one-label point type, `L_0..L_13`.
    L,
}

impl fmt::Display for BasisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisName::H => write!(f, "H"),
            BasisName::K => write!(f, "K"),
            BasisName::L => write!(f, "L"),
        }
    }
}

/// An ordered basis of all σ-flags of a fixed order, with canonical members.
///
/// For the three shipped (σ, order) pairs the member order is the reference
/// table order from [`crate::tables`]; anything else is sorted enumeration
/// order.  Construction is cached process-wide, so bases are built once and
/// shared.
#[derive(Debug, PartialEq, Eq)]
pub struct Basis {
    sigma: Digraph,
    order: usize,
    name: Option<BasisName>,
    members: Vec<Flag>,
}

fn basis_cache() -> &'static Mutex<HashMap<(Digraph, usize), Arc<Basis>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Digraph, usize), Arc<Basis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Basis {
    /// The basis of all σ-flags of order `l` (cached).
    pub fn of(sigma: &Digraph, l: usize) -> Result<Arc<Basis>, FlagError> {
        let key = (*sigma, l);
        if let Some(b) = basis_cache().lock().unwrap().get(&key) {
            return Ok(Arc::clone(b));
        }
        let built = Arc::new(Self::build(sigma, l)?);
        let mut cache = basis_cache().lock().unwrap();
        Ok(Arc::clone(cache.entry(key).or_insert(built)))
    }

    /// One of the three shipped registries, in reference table order.
    pub fn named(name: BasisName) -> Arc<Basis> {
        let (sigma, l) = match name {
            BasisName::H => (type_empty(), 4),
            BasisName::K => (type_beta(), 3),
            BasisName::L => (type_point(), 3),
        };
        Basis::of(&sigma, l).expect("shipped registries are valid")
    }

    fn build(sigma: &Digraph, l: usize) -> Result<Basis, FlagError> {
        let registry: Option<(BasisName, Vec<Flag>)> = if *sigma == type_empty() && l == 4 {
            Some((BasisName::H, table_flags(&tables::H_EDGES, 4, 0)?))
        } else if *sigma == type_beta() && l == 3 {
            Some((BasisName::K, table_flags(&tables::K_EDGES, 3, 2)?))
        } else if *sigma == type_point() && l == 3 {
            Some((BasisName::L, table_flags(&tables::L_EDGES, 3, 1)?))
        } else {
            None
        };
        let (name, members) = match registry {
            Some((name, members)) => (Some(name), members),
            None => (None, enumerate_flags(sigma, l)?),
        };
        let distinct: BTreeSet<&Flag> = members.iter().collect();
        assert_eq!(
            distinct.len(),
            members.len(),
            "basis members must be pairwise non-isomorphic"
        );
        Ok(Basis {
            sigma: *sigma,
            order: l,
            name,
            members,
        })
    }

    pub fn sigma(&self) -> &Digraph {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<BasisName> {
        self.name
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Canonical members in basis order.
    pub fn members(&self) -> &[Flag] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Flag {
        &self.members[i]
    }

    /// The unique basis index whose member is isomorphic to `f`.
    pub fn index_of(&self, f: &Flag) -> Result<usize, FlagError> {
        if f.type_digraph() != self.sigma {
            return Err(FlagError::TypeMismatch);
        }
        if f.order() != self.order {
            return Err(FlagError::NotInBasis);
        }
        let canon = f.canonical();
        self.members
            .iter()
            .position(|m| *m == canon)
            .ok_or(FlagError::NotInBasis)
    }

    /// Machine-readable dump (`[{index, edges, labels}, ..]`) for external
    /// cross-checking.
    pub fn describe(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.members
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    serde_json::json!({
                        "index": i,
                        "edges": m.graph().edges(),
                        "labels": m.labels(),
                    })
                })
                .collect(),
        )
    }
}

fn table_flags(
    edge_lists: &[&[(usize, usize)]],
    n: usize,
    k: usize,
) -> Result<Vec<Flag>, FlagError> {
    let labels: Vec<usize> = (0..k).collect();
    edge_lists
        .iter()
        .map(|edges| {
            let graph = Digraph::new(n, edges).map_err(FlagError::Graph)?;
            Ok(Flag::new(graph, &labels)?.canonical())
        })
        .collect()
}

fn digraph(n: usize, edges: &[(usize, usize)]) -> Digraph {
    Digraph::new(n, edges).expect("builtin digraph is valid")
}

/// The empty type of order 0 (the type of unlabeled graphs).
pub fn type_empty() -> Digraph {
    digraph(0, &[])
}

/// The one-vertex type.
pub fn type_point() -> Digraph {
    digraph(1, &[])
}

/// The two-label edge type β (edge from label 0 to label 1).
pub fn type_beta() -> Digraph {
    digraph(2, &[(0, 1)])
}

/// The transitive triangle-free type `T` of order 3: vertex 1 beats 0 and 2,
/// vertex 2 beats 0.
pub fn type_t() -> Digraph {
    digraph(3, &[(1, 0), (2, 0), (1, 2)])
}

/// The in-star type `V` of order 3: vertices 1 and 2 both beat vertex 0.
pub fn type_v() -> Digraph {
    digraph(3, &[(1, 0), (2, 0)])
}

/// The σ-flag of order `|σ| + 1` whose extra vertex receives an edge from
/// every labeled vertex (the common out-neighbor extension used by the
/// induction identities).
pub fn sink_extension(sigma: &Digraph) -> Flag {
    let k = sigma.n();
    let mut edges = sigma.edges();
    for v in 0..k {
        edges.push((v, k));
    }
    let graph = Digraph::new(k + 1, &edges).expect("adding a common out-neighbor stays valid");
    let labels: Vec<usize> = (0..k).collect();
    Flag::new(graph, &labels).expect("labels are the original vertices")
}

/// Look up one of the built-in flags and types by name.
///
/// Accepted names (ASCII, case-insensitive): `rho` (unlabeled edge), `alpha`
/// (one-label edge, label on the tail), `beta` (two-label edge), `gamma`
/// (one-label non-edge), `kappa` (unlabeled out-fork), `chi` (one-label
/// out-fork, label on the center), `T` and `V` (order-3 types, as fully
/// labeled unit flags), `F0T` / `F0V` (their common out-neighbor extensions).
pub fn named_flag(name: &str) -> Result<Flag, FlagError> {
    let edge = digraph(2, &[(0, 1)]);
    let nonedge = digraph(2, &[]);
    let fork = digraph(3, &[(0, 1), (0, 2)]);
    match name.trim().to_ascii_lowercase().as_str() {
        "rho" => Ok(Flag::unlabeled(edge)),
        "alpha" => Flag::new(edge, &[0]),
        "beta" => Ok(Flag::unit_of_type(&edge)),
        "gamma" => Flag::new(nonedge, &[0]),
        "kappa" => Ok(Flag::unlabeled(fork)),
        "chi" => Flag::new(fork, &[0]),
        "t" => Ok(Flag::unit_of_type(&type_t())),
        "v" => Ok(Flag::unit_of_type(&type_v())),
        "f0t" | "f0(t)" => Ok(sink_extension(&type_t())),
        "f0v" | "f0(v)" => Ok(sink_extension(&type_v())),
        _ => Err(FlagError::UnknownName(name.to_string())),
    }
}

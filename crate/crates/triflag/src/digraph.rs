//! Small digraphs without loops or counter-parallel edges: representation,
//! isomorphism testing, canonical forms and exhaustive enumeration of the
//! triangle-free ones.
//!
//! Everything here is sized for exhaustive small-order work (at most eight
//! vertices), so adjacency lives in a single `u64` bitmask and isomorphism is
//! settled by brute force over vertex permutations.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

/// Hard cap on the number of vertices; adjacency is packed into a `u64`.
pub const MAX_VERTICES: usize = 8;

/// Largest order for which [`enumerate_triangle_free`] is supported.
pub const MAX_ENUMERATION_ORDER: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigraphError {
    #[error("vertex count {0} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0} is not allowed")]
    Loop(usize),
    #[error("edges {0}->{1} and {1}->{0} form a counter-parallel pair")]
    CounterParallel(usize, usize),
    #[error("vertex {0} listed twice in subset")]
    DuplicateVertex(usize),
    #[error("enumeration order {0} exceeds the supported maximum of {MAX_ENUMERATION_ORDER}")]
    OrderTooLarge(usize),
    #[error("malformed digraph text: {0}")]
    Parse(String),
}

/// A digraph on `n <= 8` vertices with no loops and no counter-parallel edge
/// pairs (`u->v` and `v->u` never both present).  Vertices are `0..n`.
///
/// The adjacency matrix is packed into `adj`: bit `u * 8 + v` is set iff the
/// edge `u->v` is present.  The type is `Copy` and all operations are cheap,
/// which keeps brute-force permutation scans simple.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: u8,
    adj: u64,
}

impl Digraph {
    /// The digraph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, DigraphError> {
        if n > MAX_VERTICES {
            return Err(DigraphError::TooManyVertices(n));
        }
        Ok(Digraph { n: n as u8, adj: 0 })
    }

    /// Builds a digraph from an edge list, rejecting out-of-range endpoints,
    /// loops and counter-parallel pairs.  Duplicate edges are harmless.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, DigraphError> {
        let mut g = Digraph::empty(n)?;
        for &(u, v) in edges {
            if u >= n {
                return Err(DigraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(DigraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(DigraphError::Loop(u));
            }
            if g.has_edge(v, u) {
                return Err(DigraphError::CounterParallel(u, v));
            }
            g.adj |= 1u64 << (u * 8 + v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n() && v < self.n());
        self.adj & (1u64 << (u * 8 + v)) != 0
    }

    /// Edges in lexicographic order of `(u, v)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones() as usize
    }

    pub fn out_degree(&self, u: usize) -> usize {
        let row = (self.adj >> (u * 8)) & 0xff;
        row.count_ones() as usize
    }

    /// True iff the digraph contains no directed triangle `u->v->w->u`.
    pub fn is_triangle_free(&self) -> bool {
        let n = self.n();
        for u in 0..n {
            for v in 0..n {
                if u == v || !self.has_edge(u, v) {
                    continue;
                }
                for w in 0..n {
                    if w != u && w != v && self.has_edge(v, w) && self.has_edge(w, u) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The subgraph induced by the vertex sequence `verts`, relabeled so that
    /// `verts[i]` becomes vertex `i` (order preserved).
    pub fn induced_subgraph(&self, verts: &[usize]) -> Result<Self, DigraphError> {
        let n = self.n();
        for (i, &v) in verts.iter().enumerate() {
            if v >= n {
                return Err(DigraphError::VertexOutOfRange { vertex: v, n });
            }
            if verts[..i].contains(&v) {
                return Err(DigraphError::DuplicateVertex(v));
            }
        }
        let mut g = Digraph::empty(verts.len())?;
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if i != j && self.has_edge(u, v) {
                    g.adj |= 1u64 << (i * 8 + j);
                }
            }
        }
        Ok(g)
    }

    /// The image of the digraph under the vertex permutation `perm`, where
    /// vertex `u` is renamed `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n());
        let mut g = Digraph {
            n: self.n,
            adj: 0,
        };
        for (u, v) in self.edges() {
            g.adj |= 1u64 << (perm[u] * 8 + perm[v]);
        }
        g
    }

    /// Packs the off-diagonal adjacency entries, row by row, into a single
    /// integer with the first entry in the most significant position, so that
    /// integer comparison agrees with lexicographic comparison of the
    /// row-major adjacency bit string.
    pub fn packed_key(&self) -> u64 {
        let n = self.n();
        let bits = n * n.saturating_sub(1);
        if bits == 0 {
            return 0;
        }
        let mut key = 0u64;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    key = (key << 1) | u64::from(self.has_edge(u, v));
                }
            }
        }
        // Left-align so the first pair occupies the most significant position.
        key << (64 - bits)
    }

    /// The lexicographically minimal relabeling of the digraph: the permuted
    /// copy whose row-major adjacency bit string is smallest.  Two digraphs
    /// are isomorphic iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Self {
        let n = self.n();
        if n <= 1 {
            return *self;
        }
        let mut best = *self;
        let mut best_key = self.packed_key();
        for perm in (0..n).permutations(n) {
            let cand = self.permuted(&perm);
            let key = cand.packed_key();
            if key < best_key {
                best_key = key;
                best = cand;
            }
        }
        best
    }

    pub fn are_isomorphic(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Number of vertex permutations mapping the digraph onto itself.
    pub fn automorphism_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .permutations(n)
            .filter(|perm| self.permuted(perm) == *self)
            .count()
    }

    /// Total order used for deterministic enumeration output: order first,
    /// then the row-major adjacency bit string.
    pub fn sort_key(&self) -> (u8, u64) {
        (self.n, self.packed_key())
    }
}

impl PartialOrd for Digraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Digraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Digraph {
    /// Text encoding `n:<count>;edges:<u>-><v>,...` with edges in
    /// lexicographic order (`n:3;edges:0->1,2->1` for example).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n:{};edges:", self.n())?;
        for (i, (u, v)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}->{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph({self})")
    }
}

impl FromStr for Digraph {
    type Err = DigraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || DigraphError::Parse(s.to_string());
        let rest = s.strip_prefix("n:").ok_or_else(malformed)?;
        let (count, edges_part) = rest.split_once(";edges:").ok_or_else(malformed)?;
        let n: usize = count.trim().parse().map_err(|_| malformed())?;
        let mut edges = Vec::new();
        let edges_part = edges_part.trim();
        if !edges_part.is_empty() {
            for item in edges_part.split(',') {
                let (u, v) = item.trim().split_once("->").ok_or_else(malformed)?;
                let u: usize = u.trim().parse().map_err(|_| malformed())?;
                let v: usize = v.trim().parse().map_err(|_| malformed())?;
                edges.push((u, v));
            }
        }
        Digraph::new(n, &edges)
    }
}

/// All isomorphism classes of triangle-free digraphs on `n` vertices
/// (`n <= 5`), as canonical forms sorted by [`Digraph::sort_key`].
///
/// Works by brute force: every assignment of {absent, forward, backward} to
/// the vertex pairs is generated (3^(n choose 2) labeled digraphs, 59049 at
/// n = 5), triangle-containing ones are discarded and the rest are collapsed
/// to canonical forms.
pub fn enumerate_triangle_free(n: usize) -> Result<Vec<Digraph>, DigraphError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(DigraphError::OrderTooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut classes = BTreeSet::new();
    let total = 3usize.pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut g = Digraph::empty(n)?;
        for &(u, v) in &pairs {
            match code % 3 {
                1 => g.adj |= 1u64 << (u * 8 + v),
                2 => g.adj |= 1u64 << (v * 8 + u),
                _ => {}
            }
            code /= 3;
        }
        if g.is_triangle_free() {
            classes.insert(g.canonical_form());
        }
    }
    Ok(classes.into_iter().collect())
}

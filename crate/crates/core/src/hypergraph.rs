//! The k-uniform hypergraph type and its basic operations.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::combinatorics::binom;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// Largest vertex count for which edges also get a `u128` bitmask.
pub const MASK_LIMIT: usize = 128;

/// A sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    /// Build from arbitrary order; rejects repeated vertices.
    pub fn new(mut members: Vec<Vertex>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("repeated vertex in {members:?}")));
        }
        Ok(VertexSet(members))
    }

    /// Build from a list that is already strictly ascending.
    pub fn from_sorted(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub fn range(lo: Vertex, hi: Vertex) -> Self {
        VertexSet((lo..hi).collect())
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_mask(mask: u128) -> Self {
        VertexSet((0..128).filter(|&v| mask >> v & 1 == 1).collect())
    }

    pub fn mask(&self) -> u128 {
        self.0.iter().fold(0u128, |m, &v| m | 1u128 << v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        sorted_disjoint(&self.0, &other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let set: BTreeSet<Vertex> = self.iter().chain(other.iter()).collect();
        VertexSet(set.into_iter().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    /// `{0..n} \ self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        VertexSet((0..n as Vertex).filter(|&v| !self.contains(v)).collect())
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v as usize >= n => Err(Error::domain(format!(
                "vertex {v} out of range for n = {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl From<VertexSet> for Vec<Vertex> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

pub(crate) fn sorted_disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

pub(crate) fn sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut j = 0;
    for &v in small {
        while j < big.len() && big[j] < v {
            j += 1;
        }
        if j == big.len() || big[j] != v {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn edge_mask(edge: &[Vertex]) -> u128 {
    edge.iter().fold(0u128, |m, &v| m | 1u128 << v)
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept sorted ascending and in lexicographic order. For `n <= 128`
/// every edge also carries a bitmask used by the solvers.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<Vertex>>,
    masks: Option<Vec<u128>>,
    name: Option<String>,
}

// Equality ignores the display name.
impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("name", &self.name)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Hypergraph {
    /// Validating constructor: every edge must be strictly ascending, in range, of size `k`,
    /// and edges must be distinct. Edge order in the input is irrelevant.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("uniformity k must be positive"));
        }
        for e in &edges {
            if e.len() != k {
                return Err(Error::domain(format!(
                    "edge {e:?} has {} vertices, expected k = {k}",
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!(
                    "edge {e:?} is not strictly ascending"
                )));
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::domain(format!(
                        "edge {e:?} has vertex {v} >= n = {n}"
                    )));
                }
            }
        }
        let mut edges = edges;
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_canonical(n, k, edges))
    }

    /// Trusted constructor for generators that already emit sorted, unique, valid edges.
    pub(crate) fn from_canonical(n: usize, k: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let masks = (n <= MASK_LIMIT).then(|| edges.iter().map(|e| edge_mask(e)).collect());
        Hypergraph {
            n,
            k,
            edges,
            masks,
            name: None,
        }
    }

    /// Build from edges in any order, dropping duplicates. For generators only.
    pub(crate) fn from_edge_set(n: usize, k: usize, edges: BTreeSet<Vec<Vertex>>) -> Self {
        Self::from_canonical(n, k, edges.into_iter().collect())
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self::from_canonical(n, k, Vec::new())
    }

    /// The complete k-graph `K_n^k`.
    pub fn complete(n: usize, k: usize) -> Self {
        let edges = (0..n as Vertex).combinations(k).collect();
        Self::from_canonical(n, k, edges).with_name(format!("K_{n}^{k}"))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    /// Number of edges `e(H)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge bitmasks, present only when `n <= 128`.
    pub fn masks(&self) -> Option<&[u128]> {
        self.masks.as_deref()
    }

    pub(crate) fn require_masks(&self, what: &str) -> Result<&[u128]> {
        self.masks().ok_or_else(|| {
            Error::size(format!(
                "{what} needs n <= {MASK_LIMIT}, got n = {}",
                self.n
            ))
        })
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.edges
            .binary_search_by(|e| e.as_slice().cmp(edge))
            .is_ok()
    }

    fn check_set(&self, t: &VertexSet) -> Result<()> {
        t.check_within(self.n)
    }

    /// `d_H(T)`: number of edges containing `T`.
    pub fn degree(&self, t: &VertexSet) -> Result<usize> {
        self.check_set(t)?;
        if t.len() > self.k {
            return Err(Error::domain("set larger than uniformity"));
        }
        Ok(self.degree_unchecked(t.as_slice()))
    }

    pub(crate) fn degree_unchecked(&self, t: &[Vertex]) -> usize {
        if let Some(masks) = &self.masks {
            let tm = edge_mask(t);
            masks.iter().filter(|&&m| m & tm == tm).count()
        } else {
            self.edges.iter().filter(|e| sorted_subset(t, e)).count()
        }
    }

    /// `δ_l(H)`: minimum degree over all l-subsets of the vertex set.
    pub fn min_degree(&self, l: usize) -> Result<usize> {
        if l > self.k {
            return Err(Error::domain(format!("l = {l} exceeds k = {}", self.k)));
        }
        if l > self.n {
            return Err(Error::domain(format!("l = {l} exceeds n = {}", self.n)));
        }
        if l == 0 {
            return Ok(self.edge_count());
        }
        // Count degrees of every l-subset by expanding each edge, then take the minimum
        // over all C(n, l) subsets (unseen ones have degree 0).
        let total = binom(self.n as u64, l as u64);
        let mut counts: std::collections::HashMap<Vec<Vertex>, usize> = Default::default();
        for e in &self.edges {
            for t in e.iter().copied().combinations(l) {
                *counts.entry(t).or_default() += 1;
            }
        }
        if (counts.len() as u128) < total {
            return Ok(0);
        }
        Ok(counts.values().copied().min().unwrap_or(0))
    }

    /// Maximum degree over all l-subsets, `Δ_l(H)`.
    pub fn max_degree(&self, l: usize) -> Result<usize> {
        if l > self.k {
            return Err(Error::domain(format!("l = {l} exceeds k = {}", self.k)));
        }
        if l == 0 {
            return Ok(self.edge_count());
        }
        let mut counts: std::collections::HashMap<Vec<Vertex>, usize> = Default::default();
        for e in &self.edges {
            for t in e.iter().copied().combinations(l) {
                *counts.entry(t).or_default() += 1;
            }
        }
        Ok(counts.values().copied().max().unwrap_or(0))
    }

    /// Vertex degrees `d_H(v)` for every `v`.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for e in &self.edges {
            for &v in e {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// The link `N_H(S)` as a `(k - |S|)`-graph on the same vertex indexing.
    pub fn link(&self, s: &VertexSet) -> Result<Hypergraph> {
        self.check_set(s)?;
        if s.len() >= self.k {
            return Err(Error::domain(format!(
                "link needs |S| < k, got |S| = {} with k = {}",
                s.len(),
                self.k
            )));
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| sorted_subset(s.as_slice(), e))
            .map(|e| e.iter().copied().filter(|&v| !s.contains(v)).collect())
            .collect();
        Ok(Hypergraph::from_canonical(self.n, self.k - s.len(), edges))
    }

    /// `H[S]`, relabeled to `0..|S|` preserving order.
    pub fn induced(&self, s: &VertexSet) -> Result<Relabeled> {
        self.check_set(s)?;
        let mut new_index = vec![u32::MAX; self.n];
        for (i, v) in s.iter().enumerate() {
            new_index[v as usize] = i as Vertex;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_index[v as usize] != u32::MAX))
            .map(|e| e.iter().map(|&v| new_index[v as usize]).collect())
            .collect();
        // Order-preserving relabeling keeps lexicographic edge order.
        Ok(Relabeled {
            graph: Hypergraph::from_canonical(s.len(), self.k, edges),
            original: s.as_slice().to_vec(),
        })
    }

    /// `H - S`, relabeled; equals `induced` on the complement of `S`.
    pub fn remove(&self, s: &VertexSet) -> Result<Relabeled> {
        self.check_set(s)?;
        self.induced(&s.complement(self.n))
    }

    /// Edges fully inside `S`, in original labels.
    pub fn edges_within(&self, s: &VertexSet) -> Vec<Vec<Vertex>> {
        self.edges
            .iter()
            .filter(|e| sorted_subset(e, s.as_slice()))
            .cloned()
            .collect()
    }

    /// Whether `S` spans no edge.
    pub fn is_independent(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        if s.len() < self.k {
            return Ok(true);
        }
        Ok(!self.edges.iter().any(|e| sorted_subset(e, s.as_slice())))
    }

    /// Union of edge sets on the same vertex set.
    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::domain("union needs equal n and k"));
        }
        let set: BTreeSet<Vec<Vertex>> =
            self.edges.iter().chain(other.edges.iter()).cloned().collect();
        Ok(Hypergraph::from_edge_set(self.n, self.k, set))
    }

    /// Apply a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::domain("permutation length differs from n"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p as usize >= self.n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::domain("not a permutation"));
            }
        }
        let set: BTreeSet<Vec<Vertex>> = self
            .edges
            .iter()
            .map(|e| {
                let mut f: Vec<Vertex> = e.iter().map(|&v| perm[v as usize]).collect();
                f.sort_unstable();
                f
            })
            .collect();
        Ok(Hypergraph::from_edge_set(self.n, self.k, set))
    }

    /// Maximum pair codegree `Δ_2(H)`; zero when `k < 2`.
    pub fn max_codegree(&self) -> usize {
        if self.k < 2 {
            return 0;
        }
        self.max_degree(2).unwrap_or(0)
    }
}

/// A subgraph with the map from its labels back to the host's labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeled {
    pub graph: Hypergraph,
    /// `original[i]` is the host vertex relabeled to `i`.
    pub original: Vec<Vertex>,
}

impl Relabeled {
    pub fn lift(&self, local: &[Vertex]) -> Vec<Vertex> {
        local.iter().map(|&v| self.original[v as usize]).collect()
    }

    pub fn lift_set(&self, local: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(self.lift(local.as_slice()))
    }
}

/// Membership queries for an edge system that may be too large to materialize.
pub trait EdgeOracle {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    /// `edge` is sorted ascending with `k` distinct members.
    fn contains(&self, edge: &[Vertex]) -> bool;
}

impl EdgeOracle for Hypergraph {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, edge: &[Vertex]) -> bool {
        self.contains_edge(edge)
    }
}

/// `K_n^k` without storing its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteOracle {
    pub n: usize,
    pub k: usize,
}

impl EdgeOracle for CompleteOracle {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, edge: &[Vertex]) -> bool {
        edge.len() == self.k
    }
}

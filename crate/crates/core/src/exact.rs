//! Exact solvers used as ground truth: matching number, independence number and the
//! Berge deficiency certificate for graphs.
//!
//! All three work on `u128` vertex masks and therefore need `n <= 128`.
//!
//! Witness order. `max_matching` branches on the least vertex not yet covered or
//! skipped: first every edge through it that avoids the partial matching, in
//! lexicographic edge order, then the branch leaving it uncovered. The returned
//! witness is the first maximum matching reached in that order. `independence_number`
//! decides vertices in index order, trying inclusion before exclusion.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Guard, Result};
use crate::hypergraph::{edge_mask, Hypergraph, Vertex, VertexSet};

/// A set of pairwise disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Matching {
    edges: Vec<Vec<Vertex>>,
}

impl Matching {
    /// Wrap a list of edges; disjointness is checked by [`validate_matching`], not here.
    pub fn new(mut edges: Vec<Vec<Vertex>>) -> Self {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `V(M)`.
    pub fn vertices(&self) -> VertexSet {
        let mut all: Vec<Vertex> = self.edges.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        VertexSet::from_sorted(all)
    }

    pub fn extend(&mut self, other: Matching) {
        self.edges.extend(other.edges);
        self.edges.sort_unstable();
    }

    pub fn into_edges(self) -> Vec<Vec<Vertex>> {
        self.edges
    }
}

/// True iff every member is an edge of `h` and members are pairwise disjoint.
pub fn validate_matching(h: &Hypergraph, m: &Matching) -> bool {
    let mut seen = std::collections::HashSet::new();
    m.edges()
        .iter()
        .all(|e| h.contains_edge(e) && e.iter().all(|&v| seen.insert(v)))
}

struct MatchingSearch<'a> {
    /// Edge masks through each vertex, in lexicographic edge order.
    through: Vec<Vec<(u128, usize)>>,
    edges: &'a [Vec<Vertex>],
    k: u32,
    cap: usize,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl MatchingSearch<'_> {
    fn run(&mut self, open: u128) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() == self.cap || open == 0 {
            return;
        }
        let bound = self.current.len() + (open.count_ones() / self.k) as usize;
        if bound <= self.best.len() {
            return;
        }
        let v = open.trailing_zeros() as usize;
        for idx in 0..self.through[v].len() {
            let (mask, e) = self.through[v][idx];
            if mask & open == mask {
                self.current.push(e);
                self.run(open & !mask);
                self.current.pop();
                if self.best.len() == self.cap {
                    return;
                }
            }
        }
        self.run(open & !(1u128 << v));
    }
}

/// Maximum matching with a deterministic witness; see the module docs for the order.
pub fn max_matching(h: &Hypergraph) -> Result<Matching> {
    let masks = h.require_masks("max_matching")?;
    let n = h.n();
    let mut through = vec![Vec::new(); n];
    for (i, (e, &m)) in h.edges().iter().zip(masks).enumerate() {
        for &v in e {
            through[v as usize].push((m, i));
        }
    }
    let mut search = MatchingSearch {
        through,
        edges: h.edges(),
        k: h.k() as u32,
        cap: n / h.k(),
        current: Vec::new(),
        best: Vec::new(),
    };
    let open = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    search.run(open);
    let edges = search.best.iter().map(|&i| search.edges[i].clone()).collect();
    Ok(Matching::new(edges))
}

/// `ν(H)`.
pub fn matching_number(h: &Hypergraph) -> Result<usize> {
    Ok(max_matching(h)?.size())
}

/// A maximal matching built greedily in lexicographic edge order.
pub fn greedy_matching(h: &Hypergraph) -> Matching {
    let mut used = std::collections::HashSet::new();
    let mut out = Vec::new();
    for e in h.edges() {
        if e.iter().all(|v| !used.contains(v)) {
            used.extend(e.iter().copied());
            out.push(e.clone());
        }
    }
    Matching::new(out)
}

struct IndependentSearch {
    /// For vertex v: masks of `e \ {v}` for edges whose largest vertex is v.
    closing: Vec<Vec<u128>>,
    n: usize,
    best: u128,
    best_len: u32,
}

impl IndependentSearch {
    fn run(&mut self, v: usize, chosen: u128) {
        let len = chosen.count_ones();
        if len > self.best_len {
            self.best = chosen;
            self.best_len = len;
        }
        if v == self.n || len as usize + (self.n - v) <= self.best_len as usize {
            return;
        }
        let blocked = self.closing[v].iter().any(|&rest| rest & chosen == rest);
        if !blocked {
            self.run(v + 1, chosen | 1u128 << v);
        }
        self.run(v + 1, chosen);
    }
}

/// `α(H)` with a witness of maximum size.
pub fn independence_number(h: &Hypergraph) -> Result<VertexSet> {
    let masks = h.require_masks("independence_number")?;
    let mut closing = vec![Vec::new(); h.n()];
    for (e, &m) in h.edges().iter().zip(masks) {
        let top = *e.last().expect("k >= 1");
        closing[top as usize].push(m & !(1u128 << top));
    }
    let mut search = IndependentSearch {
        closing,
        n: h.n(),
        best: 0,
        best_len: 0,
    };
    search.run(0, 0);
    Ok(VertexSet::from_mask(search.best))
}

/// Minimizer of the Berge–Tutte value `(n − c_o(G − W) + |W|) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BergeCertificate {
    pub w: VertexSet,
    pub odd_components: usize,
    pub value: usize,
}

/// Exhaustive limit for [`berge_deficiency`].
pub const BERGE_LIMIT: usize = 24;

/// Number of odd components of `G − W`.
pub fn odd_components(g: &Hypergraph, w: u128) -> usize {
    let n = g.n();
    let mut adj = vec![0u128; n];
    for e in g.edges() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        adj[a] |= 1u128 << b;
        adj[b] |= 1u128 << a;
    }
    odd_components_adj(&adj, n, w)
}

fn odd_components_adj(adj: &[u128], n: usize, w: u128) -> usize {
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut left = all & !w;
    let mut odd = 0;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u128 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & left & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        if comp.count_ones() % 2 == 1 {
            odd += 1;
        }
    }
    odd
}

/// Exact Berge–Tutte minimization over all `W ⊆ V(G)`, enumerated by size then
/// lexicographically. Stops at the first `W` whose value equals the size of a greedy
/// maximal matching, since no value can go below a matching size.
pub fn berge_deficiency(g: &Hypergraph) -> Result<BergeCertificate> {
    berge_deficiency_guarded(g, Guard::Enforce)
}

pub fn berge_deficiency_guarded(g: &Hypergraph, guard: Guard) -> Result<BergeCertificate> {
    if g.k() != 2 {
        return Err(Error::domain(format!("berge requires k=2, got k = {}", g.k())));
    }
    guard.check("berge_deficiency", g.n(), BERGE_LIMIT)?;
    g.require_masks("berge_deficiency")?;
    let n = g.n();
    let mut adj = vec![0u128; n];
    for e in g.edges() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        adj[a] |= 1u128 << b;
        adj[b] |= 1u128 << a;
    }
    let lower = greedy_matching(g).size();
    let mut best: Option<BergeCertificate> = None;
    for size in 0..=n {
        for w in (0..n as Vertex).combinations(size) {
            let wm = edge_mask(&w);
            let odd = odd_components_adj(&adj, n, wm);
            let value = (n + size - odd) / 2;
            if best.as_ref().map_or(true, |b| value < b.value) {
                best = Some(BergeCertificate {
                    w: VertexSet::from_sorted(w),
                    odd_components: odd,
                    value,
                });
                if value == lower {
                    return Ok(best.expect("just set"));
                }
            }
        }
    }
    Ok(best.expect("W = ∅ is always evaluated"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space_barrier, fano};

    fn graph(n: usize, edges: &[[Vertex; 2]]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    /// Matching number by trying every subset of edges.
    fn brute_nu(h: &Hypergraph) -> usize {
        let e = h.edges();
        let mut best = 0;
        for mask in 0u32..(1 << e.len()) {
            let chosen: Vec<&Vec<Vertex>> =
                (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| &e[i]).collect();
            let mut seen = std::collections::HashSet::new();
            if chosen.iter().all(|f| f.iter().all(|&v| seen.insert(v))) {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn fano_values() {
        let f = fano();
        let m = max_matching(&f).unwrap();
        assert_eq!(m.size(), 1);
        assert_eq!(m.edges(), &[vec![0, 1, 2]]);
        // every pair of lines intersects
        assert_eq!(brute_nu(&f), 1);
        assert_eq!(independence_number(&f).unwrap().len(), 4);
    }

    #[test]
    fn complete_values() {
        assert_eq!(matching_number(&Hypergraph::complete(7, 3)).unwrap(), 2);
        for n in 3..9 {
            for k in 2..4 {
                let h = Hypergraph::complete(n, k);
                assert_eq!(independence_number(&h).unwrap().len(), k - 1);
            }
        }
    }

    #[test]
    fn barrier_values() {
        let h = build_space_barrier(9, 3, 3, 2).unwrap();
        assert_eq!(matching_number(&h).unwrap(), 2);
        let a = independence_number(&h).unwrap();
        assert_eq!(a, VertexSet::range(2, 9));
    }

    #[test]
    fn witness_is_first_in_branch_order() {
        let h = Hypergraph::complete(6, 3);
        let m = max_matching(&h).unwrap();
        assert_eq!(m.edges(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(m, max_matching(&h).unwrap());
    }

    #[test]
    fn validates() {
        let h = Hypergraph::complete(6, 3);
        assert!(validate_matching(&h, &Matching::default()));
        assert!(validate_matching(&h, &Matching::new(vec![vec![0, 1, 2], vec![3, 4, 5]])));
        assert!(!validate_matching(&h, &Matching::new(vec![vec![0, 1, 2], vec![2, 3, 4]])));
        let f = fano();
        assert!(!validate_matching(&f, &Matching::new(vec![vec![0, 1, 3]])));
    }

    #[test]
    fn berge_examples() {
        let k4 = Hypergraph::complete(4, 2);
        let c = berge_deficiency(&k4).unwrap();
        assert_eq!((c.w.len(), c.odd_components, c.value), (0, 0, 2));

        let tri = Hypergraph::complete(3, 2);
        let c = berge_deficiency(&tri).unwrap();
        assert_eq!((c.w.len(), c.odd_components, c.value), (0, 1, 1));

        let star = graph(4, &[[0, 1], [0, 2], [0, 3]]);
        let c = berge_deficiency(&star).unwrap();
        assert_eq!(c.w.as_slice(), &[0]);
        assert_eq!((c.odd_components, c.value), (3, 1));
    }

    #[test]
    fn berge_errors() {
        assert!(matches!(berge_deficiency(&fano()), Err(Error::Domain(_))));
        let big = Hypergraph::empty(25, 2);
        assert!(matches!(berge_deficiency(&big), Err(Error::Size(_))));
        assert!(berge_deficiency_guarded(&Hypergraph::complete(25, 2), Guard::Force).is_ok());
    }

    #[test]
    fn path_needs_nonempty_w_to_certify() {
        // path on 5 vertices minus nothing: ν = 2, W = ∅ gives (5 - 1)/2 = 2
        let p = graph(5, &[[0, 1], [1, 2], [2, 3], [3, 4]]);
        assert_eq!(berge_deficiency(&p).unwrap().value, 2);
        // two triangles joined at a vertex (bowtie): n = 5, ν = 2
        let bow = graph(5, &[[0, 1], [0, 2], [1, 2], [2, 3], [2, 4], [3, 4]]);
        assert_eq!(berge_deficiency(&bow).unwrap().value, brute_nu(&bow));
    }

    #[test]
    fn matching_against_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..8);
            let k = rng.gen_range(2..4);
            let edges: Vec<Vec<Vertex>> = (0..n as Vertex)
                .combinations(k)
                .filter(|_| rng.gen_bool(0.3))
                .take(16)
                .collect();
            let h = Hypergraph::new(n, k, edges).unwrap();
            let m = max_matching(&h).unwrap();
            assert!(validate_matching(&h, &m));
            assert_eq!(m.size(), brute_nu(&h));
            let a = independence_number(&h).unwrap();
            assert!(h.is_independent(&a).unwrap());
            // brute-force α
            let brute_alpha = (0u32..1 << n)
                .filter(|&mask| {
                    let s = VertexSet::from_mask(mask as u128);
                    h.is_independent(&s).unwrap()
                })
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            assert_eq!(a.len(), brute_alpha);
        }
    }
}

//! Extremal constructions and the degree threshold they attain.

use itertools::Itertools;

use crate::combinatorics::{binom, binom_checked};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};

/// A partition `V = U ∪ W` together with the intersection cap `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionBarrier {
    pub u: VertexSet,
    pub w: VertexSet,
    pub s: usize,
    pub k: usize,
}

impl PartitionBarrier {
    pub fn new(n: usize, k: usize, s: usize, w: VertexSet) -> Result<Self> {
        if s < 1 || s > k {
            return Err(Error::domain(format!("s = {s} must lie in [1, {k}]")));
        }
        w.check_within(n)?;
        Ok(PartitionBarrier {
            u: w.complement(n),
            w,
            s,
            k,
        })
    }

    /// The lowest `m` vertices form `W`.
    pub fn canonical(n: usize, k: usize, s: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::domain(format!("m = {m} exceeds n = {n}")));
        }
        Self::new(n, k, s, VertexSet::range(0, m as Vertex))
    }

    pub fn n(&self) -> usize {
        self.u.len() + self.w.len()
    }

    /// Whether `edge` meets `W` at least once and at most `s` times.
    pub fn admits(&self, edge: &[Vertex]) -> bool {
        let hits = edge.iter().filter(|&&v| self.w.contains(v)).count();
        (1..=self.s).contains(&hits)
    }

    /// Closed form `Σ_{i=1..s} C(m, i) C(n - m, k - i)`.
    pub fn edge_count(&self) -> u128 {
        let m = self.w.len() as u64;
        let rest = self.u.len() as u64;
        (1..=self.s as u64)
            .map(|i| binom(m, i) * binom(rest, self.k as u64 - i))
            .sum()
    }

    pub fn build(&self) -> Hypergraph {
        let n = self.n();
        let edges = (0..n as Vertex)
            .combinations(self.k)
            .filter(|e| self.admits(e))
            .collect();
        Hypergraph::from_canonical(n, self.k, edges).with_name(format!(
            "space-barrier n={n} k={} s={} |W|={}",
            self.k,
            self.s,
            self.w.len()
        ))
    }
}

/// `H^s_k(U, W)` with `W = {0, …, m−1}`.
pub fn build_space_barrier(n: usize, k: usize, s: usize, m: usize) -> Result<Hypergraph> {
    if k < 1 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(PartitionBarrier::canonical(n, k, s, m)?.build())
}

/// `C(n−l, k−l) − C(n−l−m, k−l)`: the minimum l-degree of `H^k_k(U, W)` with `|W| = m`.
pub fn threshold_formula(n: usize, k: usize, l: usize, m: usize) -> Result<u128> {
    if l >= k || k > n {
        return Err(Error::domain(format!(
            "need 0 <= l < k <= n, got l = {l}, k = {k}, n = {n}"
        )));
    }
    if m > n - l {
        return Err(Error::domain(format!("m = {m} exceeds n - l = {}", n - l)));
    }
    Ok(threshold_unchecked(n, k, l, m))
}

/// Threshold with the `C(a, b) = 0` for `a < b` convention and no range checks.
pub(crate) fn threshold_unchecked(n: usize, k: usize, l: usize, m: usize) -> u128 {
    let top = n.saturating_sub(l) as u64;
    let kl = (k - l) as u64;
    let all = binom_checked(top, kl).expect("threshold overflows u128");
    let rest = if n < l + m {
        0
    } else {
        binom((n - l - m) as u64, kl)
    };
    all - rest
}

/// Parity construction: the k-sets `f` of `A ∪ B` with `|f ∩ A| ≢ |A| (mod 2)`,
/// where `A` is the first `na` vertices.
pub fn build_parity(na: usize, nb: usize, k: usize) -> Result<Hypergraph> {
    let n = na + nb;
    if k < 1 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= na + nb, got k = {k}")));
    }
    let edges = (0..n as Vertex)
        .combinations(k)
        .filter(|e| {
            let in_a = e.iter().filter(|&&v| (v as usize) < na).count();
            in_a % 2 != na % 2
        })
        .collect();
    Ok(Hypergraph::from_canonical(n, k, edges).with_name(format!("parity |A|={na} |B|={nb} k={k}")))
}

/// Whether the parity construction is forced to miss a perfect matching: `k | n` and
/// `n/k` edges whose A-intersections all have the wrong parity cannot sum to `|A|`.
pub fn parity_obstructs(na: usize, nb: usize, k: usize) -> bool {
    let n = na + nb;
    if k == 0 || n % k != 0 {
        return false;
    }
    let edges = n / k;
    // Each edge meets A in a number of parity (|A| + 1) mod 2.
    (edges * (na + 1)) % 2 != na % 2
}

/// `K_n^k` minus every edge inside the first `n − n/k + 1` vertices.
pub fn build_clique_minus(n: usize, k: usize) -> Result<Hypergraph> {
    if k == 0 || n % k != 0 {
        return Err(Error::domain(format!("k = {k} must divide n = {n}")));
    }
    let core = n - n / k + 1;
    let edges = (0..n as Vertex)
        .combinations(k)
        .filter(|e| e.iter().any(|&v| v as usize >= core))
        .collect();
    Ok(Hypergraph::from_canonical(n, k, edges).with_name(format!("clique-minus n={n} k={k}")))
}

/// The Fano plane on points `0..7`.
pub fn fano() -> Hypergraph {
    let lines = vec![
        vec![0, 1, 2],
        vec![0, 3, 4],
        vec![0, 5, 6],
        vec![1, 3, 5],
        vec![1, 4, 6],
        vec![2, 3, 6],
        vec![2, 4, 5],
    ];
    Hypergraph::new(7, 3, lines)
        .expect("Fano lines are valid")
        .with_name("fano")
}

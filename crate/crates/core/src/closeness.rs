//! Distance to a space barrier, vertex goodness, best-partition search and the
//! `(F, ε)`-density check on large vertex subsets.
//!
//! Closeness is one-sided: only barrier edges missing from `H` count.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binom, ceil_nonneg, factorial, int, pow_int, Rational};
use crate::constructions::PartitionBarrier;
use crate::error::{Error, Guard, Result};
use crate::hypergraph::{sorted_subset, Hypergraph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosenessReport {
    /// `|E(barrier) \ E(H)|`.
    pub deficit: u128,
    /// `deficit / n^k`.
    pub epsilon_effective: Rational,
    /// `|N_barrier(v) \ N_H(v)|` for every vertex.
    pub per_vertex_deficits: Vec<u128>,
}

fn barrier_vertex_degree(n: usize, k: usize, s: usize, m: usize, in_w: bool) -> u128 {
    let (m, rest, k, s) = (m as u64, (n - m) as u64, k as u64, s as u64);
    if in_w {
        (0..s).map(|j| binom(m - 1, j) * binom(rest, k - 1 - j)).sum()
    } else if rest == 0 {
        0
    } else {
        (1..=s.min(k - 1))
            .map(|i| binom(m, i) * binom(rest - 1, k - 1 - i))
            .sum()
    }
}

fn check_parameters(h: &Hypergraph, m: usize, s: usize, w: &VertexSet) -> Result<PartitionBarrier> {
    if w.len() != m {
        return Err(Error::domain(format!("|W| = {} but m = {m}", w.len())));
    }
    if s < 1 || s > h.k() {
        return Err(Error::domain(format!("s = {s} must lie in [1, {}]", h.k())));
    }
    PartitionBarrier::new(h.n(), h.k(), s, w.clone())
}

/// Deficit of `H` against `H^s_k(V \ W, W)`.
pub fn barrier_deficit(h: &Hypergraph, m: usize, s: usize, w: &VertexSet) -> Result<ClosenessReport> {
    let barrier = check_parameters(h, m, s, w)?;
    let (n, k) = (h.n(), h.k());
    let mut per_vertex: Vec<u128> = (0..n as Vertex)
        .map(|v| barrier_vertex_degree(n, k, s, m, w.contains(v)))
        .collect();
    let mut present = 0u128;
    for e in h.edges().iter().filter(|e| barrier.admits(e)) {
        present += 1;
        for &v in e {
            per_vertex[v as usize] -= 1;
        }
    }
    let deficit = barrier.edge_count() - present;
    Ok(ClosenessReport {
        epsilon_effective: if n == 0 {
            int(0)
        } else {
            Rational::new(BigInt::from(deficit), pow_int(n, k).to_integer())
        },
        deficit,
        per_vertex_deficits: per_vertex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub good: VertexSet,
    pub bad: VertexSet,
    pub epsilon_effective: Rational,
    /// `k · ε_eff · n / α`.
    pub bad_bound: Rational,
    pub bound_holds: bool,
}

/// `v` is α-good iff its barrier deficit is at most `α n^{k−1}`.
pub fn classify_good(
    h: &Hypergraph,
    m: usize,
    s: usize,
    w: &VertexSet,
    alpha: &Rational,
) -> Result<GoodnessReport> {
    if !alpha.is_positive() {
        return Err(Error::domain("alpha must be positive"));
    }
    let report = barrier_deficit(h, m, s, w)?;
    let (n, k) = (h.n(), h.k());
    let limit = alpha * pow_int(n, k - 1);
    let (bad, good): (Vec<Vertex>, Vec<Vertex>) = (0..n as Vertex)
        .partition(|&v| int(report.per_vertex_deficits[v as usize]) > limit);
    let bad_bound = int(k as u64) * &report.epsilon_effective * int(n as u64) / alpha;
    Ok(GoodnessReport {
        bound_holds: int(bad.len() as u64) <= bad_bound,
        good: VertexSet::from_sorted(good),
        bad: VertexSet::from_sorted(bad),
        epsilon_effective: report.epsilon_effective,
        bad_bound,
    })
}

/// Largest `n` scanned exhaustively by [`closest_partition`].
pub const CLOSEST_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSearch {
    pub w: VertexSet,
    pub deficit: u128,
    /// `false` for the local-search heuristic, whose answer is not certified optimal.
    pub exhaustive: bool,
}

fn present_count(h: &Hypergraph, s: usize, in_w: &[bool]) -> u128 {
    h.edges()
        .iter()
        .filter(|e| {
            let hits = e.iter().filter(|&&v| in_w[v as usize]).count();
            hits >= 1 && hits <= s
        })
        .count() as u128
}

fn barrier_total(n: usize, k: usize, s: usize, m: usize) -> u128 {
    (1..=s as u64)
        .map(|i| binom(m as u64, i) * binom((n - m) as u64, k as u64 - i))
        .sum()
}

fn check_search(h: &Hypergraph, m: usize, s: usize) -> Result<()> {
    if m > h.n() {
        return Err(Error::domain(format!("m = {m} exceeds n = {}", h.n())));
    }
    if s < 1 || s > h.k() {
        return Err(Error::domain(format!("s = {s} must lie in [1, {}]", h.k())));
    }
    Ok(())
}

/// Global minimizer of the barrier deficit over all `|W| = m`, first in lexicographic order.
pub fn closest_partition(h: &Hypergraph, m: usize, s: usize, guard: Guard) -> Result<PartitionSearch> {
    check_search(h, m, s)?;
    guard.check("closest_partition", h.n(), CLOSEST_LIMIT)?;
    let n = h.n();
    let total = barrier_total(n, h.k(), s, m);
    let mut best: Option<(u128, Vec<Vertex>)> = None;
    match h.masks() {
        Some(masks) => {
            for w in (0..n as Vertex).combinations(m) {
                let wm = w.iter().fold(0u128, |acc, &v| acc | 1u128 << v);
                let present = masks
                    .iter()
                    .filter(|&&e| {
                        let c = (e & wm).count_ones() as usize;
                        c >= 1 && c <= s
                    })
                    .count() as u128;
                if best.as_ref().map_or(true, |(p, _)| present > *p) {
                    best = Some((present, w));
                }
            }
        }
        None => {
            for w in (0..n as Vertex).combinations(m) {
                let mut in_w = vec![false; n];
                w.iter().for_each(|&v| in_w[v as usize] = true);
                let present = present_count(h, s, &in_w);
                if best.as_ref().map_or(true, |(p, _)| present > *p) {
                    best = Some((present, w));
                }
            }
        }
    }
    let (present, w) = best.expect("at least one m-subset");
    Ok(PartitionSearch {
        w: VertexSet::from_sorted(w),
        deficit: total - present,
        exhaustive: true,
    })
}

/// Heuristic search: steepest-descent swaps between `W` and `U` from `restarts`
/// starting sets (the first is `{0..m−1}`, the rest seeded at random). Among the local
/// optima the lowest deficit wins, ties by lexicographic `W`.
pub fn closest_partition_local(
    h: &Hypergraph,
    m: usize,
    s: usize,
    seed: u64,
    restarts: usize,
) -> Result<PartitionSearch> {
    check_search(h, m, s)?;
    let n = h.n();
    let total = barrier_total(n, h.k(), s, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(u128, Vec<Vertex>)> = None;
    for r in 0..restarts.max(1) {
        let mut in_w = vec![false; n];
        if r == 0 {
            in_w.iter_mut().take(m).for_each(|b| *b = true);
        } else {
            sample(&mut rng, n, m).into_iter().for_each(|v| in_w[v] = true);
        }
        let mut present = present_count(h, s, &in_w);
        loop {
            let mut step: Option<(u128, usize, usize)> = None;
            let inside: Vec<usize> = (0..n).filter(|&v| in_w[v]).collect();
            let outside: Vec<usize> = (0..n).filter(|&v| !in_w[v]).collect();
            for &a in &inside {
                for &b in &outside {
                    in_w[a] = false;
                    in_w[b] = true;
                    let p = present_count(h, s, &in_w);
                    in_w[a] = true;
                    in_w[b] = false;
                    if p > step.map_or(present, |(q, _, _)| q) {
                        step = Some((p, a, b));
                    }
                }
            }
            match step {
                Some((p, a, b)) => {
                    in_w[a] = false;
                    in_w[b] = true;
                    present = p;
                }
                None => break,
            }
        }
        let w: Vec<Vertex> = (0..n as Vertex).filter(|&v| in_w[v as usize]).collect();
        let better = match &best {
            None => true,
            Some((p, bw)) => present > *p || (present == *p && w < *bw),
        };
        if better {
            best = Some((present, w));
        }
    }
    let (present, w) = best.expect("one restart always runs");
    Ok(PartitionSearch {
        w: VertexSet::from_sorted(w),
        deficit: total - present,
        exhaustive: false,
    })
}

/// Largest `n` for which every candidate set is checked by [`f_density_check`].
pub const DENSITY_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub dense: bool,
    /// A maximal violating set when `dense` is false.
    pub witness: Option<VertexSet>,
    /// `⌈(1 − 1/k − ε/4) n⌉`, the only size that needs checking.
    pub min_size: usize,
    /// Required fraction `ε / (2·k!)` of `e(H)`.
    pub fraction: Rational,
    pub exhaustive: bool,
    pub candidates_checked: usize,
}

fn edges_inside(h: &Hypergraph, a: &[Vertex]) -> usize {
    match h.masks() {
        Some(masks) => {
            let am = a.iter().fold(0u128, |acc, &v| acc | 1u128 << v);
            masks.iter().filter(|&&e| e & am == e).count()
        }
        None => h.edges().iter().filter(|e| sorted_subset(e, a)).count(),
    }
}

/// Whether every `A` with `|A| >= (1 − 1/k − ε/4)n` spans at least `ε/(2k!)·e(H)` edges.
/// Edge counts only grow with `A`, so only sets of the minimum size are examined:
/// all of them for `n <= 16`, otherwise `trials` seeded random ones.
pub fn f_density_check(h: &Hypergraph, eps: &Rational, seed: u64, trials: usize) -> Result<DensityReport> {
    if !eps.is_positive() {
        return Err(Error::domain("eps must be positive"));
    }
    let (n, k) = (h.n(), h.k());
    let size_bound = (int(1) - Rational::new(1.into(), (k as i64).into()) - eps / int(4)) * int(n as u64);
    let min_size = ceil_nonneg(&size_bound).min(n);
    let fraction = eps / int(2 * factorial(k as u64));
    let need = &fraction * int(h.edge_count() as u64);
    let violates = |a: &[Vertex]| int(edges_inside(h, a) as u64) < need;

    let exhaustive = n <= DENSITY_LIMIT;
    let mut checked = 0;
    let mut found: Option<Vec<Vertex>> = None;
    if h.edge_count() > 0 {
        if exhaustive {
            for a in (0..n as Vertex).combinations(min_size) {
                checked += 1;
                if violates(&a) {
                    found = Some(a);
                    break;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                checked += 1;
                let mut a: Vec<Vertex> = sample(&mut rng, n, min_size)
                    .into_iter()
                    .map(|v| v as Vertex)
                    .collect();
                a.sort_unstable();
                if violates(&a) {
                    found = Some(a);
                    break;
                }
            }
        }
    }
    let witness = found.map(|mut a| {
        // grow to a maximal violating set, adding vertices in index order
        for v in 0..n as Vertex {
            if let Err(pos) = a.binary_search(&v) {
                a.insert(pos, v);
                if !violates(&a) {
                    a.remove(pos);
                }
            }
        }
        VertexSet::from_sorted(a)
    });
    Ok(DensityReport {
        dense: witness.is_none(),
        witness,
        min_size,
        fraction,
        exhaustive,
        candidates_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ratio;
    use crate::constructions::build_space_barrier;

    fn canonical_w(m: usize) -> VertexSet {
        VertexSet::range(0, m as Vertex)
    }

    #[test]
    fn deficit_examples() {
        let b = build_space_barrier(9, 3, 3, 2).unwrap();
        let r = barrier_deficit(&b, 2, 3, &canonical_w(2)).unwrap();
        assert_eq!(r.deficit, 0);
        assert!(r.per_vertex_deficits.iter().all(|&d| d == 0));

        let k = Hypergraph::complete(8, 3);
        let w = VertexSet::new(vec![1, 5, 6]).unwrap();
        assert_eq!(barrier_deficit(&k, 3, 2, &w).unwrap().deficit, 0);

        let mut edges = b.edges().to_vec();
        edges.truncate(edges.len() - 3);
        let h = Hypergraph::new(9, 3, edges).unwrap();
        let r = barrier_deficit(&h, 2, 3, &canonical_w(2)).unwrap();
        assert_eq!(r.deficit, 3);
        assert_eq!(r.epsilon_effective, ratio(3, 729));
        assert_eq!(r.per_vertex_deficits.iter().sum::<u128>(), 9);

        assert!(barrier_deficit(&b, 3, 3, &canonical_w(2)).is_err());
    }

    #[test]
    fn per_vertex_closed_form_matches_enumeration() {
        for n in 2..=8usize {
            for k in 1..=n.min(4) {
                for s in 1..=k {
                    for m in 0..=n {
                        let b = build_space_barrier(n, k, s, m).unwrap();
                        let r = barrier_deficit(&Hypergraph::empty(n, k), m, s, &canonical_w(m)).unwrap();
                        assert_eq!(r.deficit, b.edge_count() as u128);
                        for (v, d) in b.vertex_degrees().into_iter().enumerate() {
                            assert_eq!(r.per_vertex_deficits[v], d as u128, "n={n} k={k} s={s} m={m} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn goodness_examples() {
        let b = build_space_barrier(9, 3, 3, 2).unwrap();
        let g = classify_good(&b, 2, 3, &canonical_w(2), &ratio(1, 100)).unwrap();
        assert!(g.bad.is_empty() && g.bound_holds);

        // strip every edge at vertex 8 (barrier degree 13 > 81/100)
        let edges: Vec<Vec<Vertex>> = b.edges().iter().filter(|e| !e.contains(&8)).cloned().collect();
        let h = Hypergraph::new(9, 3, edges).unwrap();
        let g = classify_good(&h, 2, 3, &canonical_w(2), &ratio(1, 10)).unwrap();
        assert_eq!(g.bad.as_slice(), &[8]);
        assert!(g.bound_holds);

        // alpha >= C(8,2)/81 makes everyone good
        let g = classify_good(&Hypergraph::empty(9, 3), 2, 3, &canonical_w(2), &ratio(28, 81)).unwrap();
        assert!(g.bad.is_empty());
        assert!(classify_good(&b, 2, 3, &canonical_w(2), &int(0)).is_err());
    }

    #[test]
    fn closest_examples() {
        let b = build_space_barrier(9, 3, 3, 2).unwrap();
        let r = closest_partition(&b, 2, 3, Guard::Enforce).unwrap();
        assert_eq!((r.w.as_slice(), r.deficit), (&[0, 1][..], 0));

        let k = Hypergraph::complete(7, 3);
        let r = closest_partition(&k, 3, 2, Guard::Enforce).unwrap();
        assert_eq!((r.w, r.deficit), (canonical_w(3), 0));

        let w = VertexSet::new(vec![3, 7]).unwrap();
        let h = PartitionBarrier::new(8, 3, 3, w.clone()).unwrap().build();
        let r = closest_partition(&h, 2, 3, Guard::Enforce).unwrap();
        assert_eq!((r.w, r.deficit), (w, 0));

        assert!(matches!(
            closest_partition(&Hypergraph::empty(17, 3), 2, 3, Guard::Enforce),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn local_search_finds_planted_partition() {
        let w = VertexSet::new(vec![2, 9, 13, 17]).unwrap();
        let h = PartitionBarrier::new(20, 3, 3, w.clone()).unwrap().build();
        let r = closest_partition_local(&h, 4, 3, 5, 4).unwrap();
        assert!(!r.exhaustive);
        assert_eq!((r.w, r.deficit), (w, 0));
    }

    #[test]
    fn density_examples() {
        let k = Hypergraph::complete(9, 3);
        let r = f_density_check(&k, &ratio(1, 2), 0, 0).unwrap();
        assert!(r.dense && r.exhaustive);
        assert_eq!(r.min_size, 5);

        let b = build_space_barrier(9, 3, 1, 3).unwrap();
        let r = f_density_check(&b, &ratio(1, 2), 0, 0).unwrap();
        assert!(!r.dense);
        assert_eq!(r.witness, Some(VertexSet::range(3, 9)));

        assert!(f_density_check(&Hypergraph::empty(9, 3), &ratio(1, 2), 0, 0).unwrap().dense);
    }

    #[test]
    fn density_sampled_mode_is_seeded() {
        let b = build_space_barrier(20, 3, 1, 4).unwrap();
        let a = f_density_check(&b, &ratio(1, 2), 11, 500).unwrap();
        let c = f_density_check(&b, &ratio(1, 2), 11, 500).unwrap();
        assert_eq!(a, c);
        assert!(!a.exhaustive);
    }
}

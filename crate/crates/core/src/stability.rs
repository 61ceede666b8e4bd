//! Stable (shifted) hypergraphs, shadows and the extremal checks built on them.
//!
//! `e <= f` compares sorted edges coordinatewise. `H` is stable when every k-set
//! dominated by an edge is itself an edge.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Signed;
use serde::Serialize;

use crate::combinatorics::{binom, pow_int, Rational};
use crate::constructions::PartitionBarrier;
use crate::error::{Error, Result};
use crate::exact::matching_number;
use crate::hypergraph::{Hypergraph, Vertex};

/// Result of [`is_stable`]. On failure `witness = (e, f)` with `e <= f`, `f ∈ E(H)`, `e ∉ E(H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub witness: Option<(Vec<Vertex>, Vec<Vertex>)>,
}

/// Checks single-coordinate decrements, which generate the whole order. The witness
/// uses the first failing edge `f` in lexicographic order and the lexicographically
/// least missing `e <= f`.
pub fn is_stable(h: &Hypergraph) -> StabilityVerdict {
    for f in h.edges() {
        let broken = (0..f.len()).any(|i| {
            let floor = if i == 0 { 0 } else { f[i - 1] + 1 };
            if f[i] <= floor {
                return false;
            }
            let mut e = f.clone();
            e[i] -= 1;
            !h.contains_edge(&e)
        });
        if broken {
            let mut e = Vec::with_capacity(f.len());
            let found = least_missing_below(h, f, &mut e);
            debug_assert!(found);
            return StabilityVerdict {
                stable: false,
                witness: Some((e, f.clone())),
            };
        }
    }
    StabilityVerdict {
        stable: true,
        witness: None,
    }
}

fn least_missing_below(h: &Hypergraph, f: &[Vertex], e: &mut Vec<Vertex>) -> bool {
    let i = e.len();
    if i == f.len() {
        return !h.contains_edge(e);
    }
    let lo = if i == 0 { 0 } else { e[i - 1] + 1 };
    for v in lo..=f[i] {
        e.push(v);
        if least_missing_below(h, f, e) {
            return true;
        }
        e.pop();
    }
    false
}

/// `∂H`: all (k−1)-subsets of edges, sorted.
pub fn shadow(h: &Hypergraph) -> Vec<Vec<Vertex>> {
    let set: BTreeSet<Vec<Vertex>> = h
        .edges()
        .iter()
        .flat_map(|e| e.iter().copied().combinations(h.k() - 1))
        .collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KatonaReport {
    pub holds: bool,
    pub s: usize,
    pub shadow_size: usize,
    pub edges: usize,
}

/// `ν(H)·|∂H| >= e(H)`. A failure is impossible and is returned as an internal error.
pub fn katona_check(h: &Hypergraph) -> Result<KatonaReport> {
    let s = matching_number(h)?;
    let shadow_size = shadow(h).len();
    let report = KatonaReport {
        holds: s * shadow_size >= h.edge_count(),
        s,
        shadow_size,
        edges: h.edge_count(),
    };
    if !report.holds {
        return Err(Error::Internal(format!(
            "shadow inequality failed: {s} * {shadow_size} < {}",
            h.edge_count()
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FranklReport {
    /// `n >= (2s+1)k − s`.
    pub applicable: bool,
    /// `e(H) <= C(n,k) − C(n−s,k)`; vacuously true when not applicable.
    pub holds: bool,
    pub s: usize,
    pub edges: usize,
    pub bound: u128,
}

pub fn frankl_bound_check(h: &Hypergraph) -> Result<FranklReport> {
    let (n, k) = (h.n(), h.k());
    let s = matching_number(h)?;
    let applicable = n + s >= (2 * s + 1) * k;
    let bound = binom(n as u64, k as u64) - binom((n - s) as u64, k as u64);
    Ok(FranklReport {
        applicable,
        holds: !applicable || h.edge_count() as u128 <= bound,
        s,
        edges: h.edge_count(),
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityClosenessReport {
    pub hypotheses_met: bool,
    pub conclusion_holds: bool,
    pub deficit: u128,
    /// `"general"` (deficit <= √ξ n^k) or `"graph"` (deficit <= 2√ξ n², for k = 2).
    pub variant: &'static str,
}

/// For stable `H` with `ν(H) <= m`: if `e(H) > C(n,k) − C(n−m,k) − ξn^k` then `H`
/// should miss few edges of the barrier with cover `{0..m−1}`. Both sides are compared
/// exactly, the square root by squaring.
pub fn stability_closeness_check(
    h: &Hypergraph,
    m: usize,
    xi: &Rational,
) -> Result<StabilityClosenessReport> {
    let (n, k) = (h.n(), h.k());
    if m > n {
        return Err(Error::domain(format!("m = {m} exceeds n = {n}")));
    }
    if !xi.is_positive() {
        return Err(Error::domain("xi must be positive"));
    }
    if !is_stable(h).stable {
        return Err(Error::Precondition("H is not stable".into()));
    }
    let nu = matching_number(h)?;
    if nu > m {
        return Err(Error::Precondition(format!("nu(H) = {nu} exceeds m = {m}")));
    }
    let nk = pow_int(n, k);
    let full = binom(n as u64, k as u64) - binom((n - m) as u64, k as u64);
    let lhs = Rational::from_integer((h.edge_count() as i64).into());
    let hypotheses_met = lhs > Rational::from_integer((full as i64).into()) - xi * &nk;

    let barrier = PartitionBarrier::canonical(n, k, k, m)?;
    let present = h.edges().iter().filter(|e| barrier.admits(e)).count() as u128;
    let deficit = barrier.edge_count() - present;
    let d = Rational::from_integer((deficit as i64).into());
    let (variant, scale) = if k == 2 { ("graph", 4) } else { ("general", 1) };
    // deficit <= c√ξ n^k  <=>  deficit² <= c² ξ n^{2k}
    let conclusion_holds = &d * &d <= Rational::from_integer(scale.into()) * xi * &nk * &nk;
    Ok(StabilityClosenessReport {
        hypotheses_met,
        conclusion_holds,
        deficit,
        variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{int, ratio};
    use crate::constructions::{build_space_barrier, fano};

    fn hg(n: usize, k: usize, e: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::new(n, k, e.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    /// Stability by comparing every pair of k-sets.
    fn brute_stable(h: &Hypergraph) -> bool {
        (0..h.n() as Vertex).combinations(h.k()).all(|e| {
            h.contains_edge(&e)
                || !h
                    .edges()
                    .iter()
                    .any(|f| e.iter().zip(f).all(|(a, b)| a <= b))
        })
    }

    #[test]
    fn stable_examples() {
        assert!(is_stable(&hg(4, 2, &[&[0, 1], &[0, 2]])).stable);
        let v = is_stable(&hg(3, 2, &[&[1, 2]]));
        assert!(!v.stable);
        assert_eq!(v.witness, Some((vec![0, 1], vec![1, 2])));
        assert!(is_stable(&build_space_barrier(9, 3, 3, 2).unwrap()).stable);
        assert!(!is_stable(&fano()).stable);
    }

    #[test]
    fn stability_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(2..7);
            let k = rng.gen_range(1..=n.min(3));
            let edges: Vec<Vec<Vertex>> = (0..n as Vertex)
                .combinations(k)
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let h = Hypergraph::new(n, k, edges).unwrap();
            let v = is_stable(&h);
            assert_eq!(v.stable, brute_stable(&h), "{h:?}");
            if let Some((e, f)) = v.witness {
                assert!(h.contains_edge(&f) && !h.contains_edge(&e));
                assert!(e.iter().zip(&f).all(|(a, b)| a <= b));
            }
        }
    }

    #[test]
    fn shadows() {
        assert_eq!(shadow(&hg(4, 2, &[&[0, 1], &[2, 3]])).len(), 4);
        assert_eq!(shadow(&fano()).len(), 21);
        assert_eq!(shadow(&hg(5, 3, &[&[1, 2, 4]])), vec![vec![1, 2], vec![1, 4], vec![2, 4]]);
    }

    #[test]
    fn katona_examples() {
        let r = katona_check(&fano()).unwrap();
        assert_eq!((r.s, r.shadow_size, r.edges), (1, 21, 7));
        let r = katona_check(&hg(6, 3, &[&[0, 1, 2], &[3, 4, 5]])).unwrap();
        assert_eq!((r.s, r.shadow_size), (2, 6));
        let r = katona_check(&Hypergraph::complete(6, 3)).unwrap();
        assert_eq!((r.s, r.shadow_size, r.edges), (2, 15, 20));
    }

    #[test]
    fn frankl_examples() {
        let r = frankl_bound_check(&build_space_barrier(9, 3, 3, 1).unwrap()).unwrap();
        assert!(r.applicable && r.holds);
        assert_eq!((r.edges as u128, r.bound), (28, 28));
        let r = frankl_bound_check(&hg(20, 3, &[&[0, 1, 2]])).unwrap();
        assert!(r.applicable && r.holds);
        let r = frankl_bound_check(&Hypergraph::complete(7, 3)).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.s, 2);
    }

    #[test]
    fn closeness_of_barriers() {
        let b = build_space_barrier(10, 3, 3, 2).unwrap();
        let r = stability_closeness_check(&b, 2, &ratio(1, 1000)).unwrap();
        assert!(r.hypotheses_met && r.conclusion_holds);
        assert_eq!(r.deficit, 0);

        // drop the lexicographically last barrier edge; stability is kept
        let mut edges = b.edges().to_vec();
        edges.pop();
        let h = Hypergraph::new(10, 3, edges).unwrap();
        assert!(is_stable(&h).stable);
        let r = stability_closeness_check(&h, 2, &int(1)).unwrap();
        assert_eq!(r.deficit, 1);
        assert!(r.hypotheses_met && r.conclusion_holds);
        assert_eq!(r.variant, "general");
    }

    #[test]
    fn closeness_graph_variant() {
        // barrier on n = 12 with |W| = 5, minus the edges from cover vertex 4 into U;
        // dropping {a, 4} as well would break stability ({3, 4} <= {3, 5})
        let b = build_space_barrier(12, 2, 2, 5).unwrap();
        let edges: Vec<Vec<Vertex>> = b.edges().iter().filter(|e| e[0] != 4).cloned().collect();
        let h = Hypergraph::new(12, 2, edges).unwrap();
        assert!(is_stable(&h).stable);
        let r = stability_closeness_check(&h, 5, &ratio(1, 100)).unwrap();
        assert_eq!(r.deficit, 7);
        assert_eq!(r.variant, "graph");
        // 7 <= 2 * (1/10) * 144 = 28.8
        assert!(r.conclusion_holds);
        // e = 45 - 7 = 38, not above C(12,2) - C(7,2) - 1.44 = 43.56
        assert!(!r.hypotheses_met);
    }

    #[test]
    fn closeness_preconditions() {
        assert!(matches!(
            stability_closeness_check(&fano(), 1, &ratio(1, 10)),
            Err(Error::Precondition(_))
        ));
        let k = Hypergraph::complete(6, 2);
        assert!(matches!(
            stability_closeness_check(&k, 2, &ratio(1, 10)),
            Err(Error::Precondition(_))
        ));
        assert!(stability_closeness_check(&k, 3, &int(0)).is_err());
    }
}

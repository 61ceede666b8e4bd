//! Seeded random instances for the property suites.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binom_checked, Rational};
use crate::constructions::PartitionBarrier;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};
use crate::rng::Threshold;

/// Each k-set kept independently with probability `p`, scanned in lexicographic order.
pub fn random_hypergraph(n: usize, k: usize, p: &Rational, rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let t = Threshold::from_rational(p)?;
    check_params(n, k)?;
    let edges = (0..n as Vertex)
        .combinations(k)
        .filter(|_| t.draw(rng))
        .collect();
    Ok(Hypergraph::from_canonical(n, k, edges))
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if binom_checked(n as u64, k as u64).map_or(true, |c| c > 1 << 24) {
        return Err(Error::size(format!("C({n}, {k}) k-sets is too many to scan")));
    }
    Ok(())
}

/// `e <= f` componentwise on sorted representations.
pub fn dominated(e: &[Vertex], f: &[Vertex]) -> bool {
    e.len() == f.len() && e.iter().zip(f).all(|(a, b)| a <= b)
}

/// Every k-set dominated by some generator.
pub fn downward_closure(n: usize, k: usize, generators: &[Vec<Vertex>]) -> Result<Hypergraph> {
    check_params(n, k)?;
    let edges = (0..n as Vertex)
        .combinations(k)
        .filter(|e| generators.iter().any(|g| dominated(e, g)))
        .collect();
    Ok(Hypergraph::from_canonical(n, k, edges))
}

/// Maximal edges under `<=`; removing any of them keeps a stable hypergraph stable.
pub fn maximal_edges(h: &Hypergraph) -> Vec<Vec<Vertex>> {
    let edges = h.edges();
    edges
        .iter()
        .filter(|e| !edges.iter().any(|f| f != *e && dominated(e, f)))
        .cloned()
        .collect()
}

/// Options for [`random_stable`].
#[derive(Debug, Clone, Copy, Default)]
pub struct StableShape {
    /// Draw generators only among k-sets meeting `{0,…,t−1}`. The closure then lies
    /// inside the barrier with cover `[t]`, so `ν <= t`.
    pub cover: Option<usize>,
    /// Delete this many maximal edges after the closure (fewer if there are fewer).
    pub trim_maximal: usize,
}

/// Downward closure of `generators` uniformly chosen k-sets.
pub fn random_stable(
    n: usize,
    k: usize,
    generators: usize,
    shape: StableShape,
    rng: &mut ChaCha8Rng,
) -> Result<Hypergraph> {
    check_params(n, k)?;
    let pool: Vec<Vec<Vertex>> = match shape.cover {
        Some(t) => (0..n as Vertex)
            .combinations(k)
            .filter(|e| (e[0] as usize) < t)
            .collect(),
        None => (0..n as Vertex).combinations(k).collect(),
    };
    let take = generators.min(pool.len());
    let gens: Vec<Vec<Vertex>> = sample(rng, pool.len(), take)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect();
    let mut h = downward_closure(n, k, &gens)?;
    if shape.trim_maximal > 0 {
        let maximal = maximal_edges(&h);
        let drop = shape.trim_maximal.min(maximal.len());
        let gone: Vec<Vec<Vertex>> = sample(rng, maximal.len(), drop)
            .into_iter()
            .map(|i| maximal[i].clone())
            .collect();
        let kept = h.edges().iter().filter(|e| !gone.contains(e)).cloned().collect();
        h = Hypergraph::from_canonical(n, k, kept);
    }
    Ok(h)
}

/// `barrier(n,k,s,m)` plus each k-set inside `U` independently with probability `q`.
pub fn noisy_barrier(
    n: usize,
    k: usize,
    s: usize,
    m: usize,
    q: &Rational,
    rng: &mut ChaCha8Rng,
) -> Result<Hypergraph> {
    check_params(n, k)?;
    let barrier = PartitionBarrier::canonical(n, k, s, m)?.build();
    let t = Threshold::from_rational(q)?;
    let noise: Vec<Vec<Vertex>> = (m as Vertex..n as Vertex)
        .combinations(k)
        .filter(|_| t.draw(rng))
        .collect();
    barrier.union(&Hypergraph::from_canonical(n, k, noise))
}

/// Uniform random `size`-subset of `{0,…,n−1}`.
pub fn random_subset(n: usize, size: usize, rng: &mut ChaCha8Rng) -> Result<VertexSet> {
    if size > n {
        return Err(Error::domain(format!("subset size {size} exceeds n = {n}")));
    }
    let mut v: Vec<Vertex> = sample(rng, n, size).into_iter().map(|i| i as Vertex).collect();
    v.sort_unstable();
    Ok(VertexSet::from_sorted(v))
}

/// Uniform integer in `lo..=hi`.
pub fn pick(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{int, ratio};
    use crate::exact::matching_number;
    use crate::rng::{stream, streams};
    use crate::stability::is_stable;

    #[test]
    fn extremes_and_replay() {
        let mut rng = stream(1, streams::GENERATOR);
        assert_eq!(random_hypergraph(7, 3, &int(1), &mut rng).unwrap().edge_count(), 35);
        assert_eq!(random_hypergraph(7, 3, &int(0), &mut rng).unwrap().edge_count(), 0);
        let a = random_hypergraph(8, 3, &ratio(1, 2), &mut stream(5, streams::GENERATOR)).unwrap();
        let b = random_hypergraph(8, 3, &ratio(1, 2), &mut stream(5, streams::GENERATOR)).unwrap();
        assert_eq!(a, b);
        assert!(random_hypergraph(3, 4, &int(1), &mut rng).is_err());
    }

    #[test]
    fn closures_are_stable_and_covered() {
        let mut rng = stream(2, streams::GENERATOR);
        for i in 0..60 {
            let n = 6 + i % 5;
            let k = 2 + i % 2;
            let t = 1 + i % 3;
            let shape = StableShape {
                cover: Some(t),
                trim_maximal: i % 3,
            };
            let h = random_stable(n, k, 1 + i % 4, shape, &mut rng).unwrap();
            assert!(is_stable(&h).stable);
            assert!(matching_number(&h).unwrap() <= t);
            assert!(h.edges().iter().all(|e| (e[0] as usize) < t));
        }
    }

    #[test]
    fn closure_of_top_edge_is_the_barrier() {
        let h = downward_closure(9, 3, &[vec![1, 7, 8]]).unwrap();
        assert_eq!(h, PartitionBarrier::canonical(9, 3, 3, 2).unwrap().build());
        assert_eq!(maximal_edges(&h), vec![vec![1, 7, 8]]);
    }

    #[test]
    fn noise_stays_inside_u() {
        let mut rng = stream(3, streams::GENERATOR);
        let h = noisy_barrier(9, 3, 3, 2, &int(1), &mut rng).unwrap();
        assert_eq!(h.edge_count(), 84);
        let h = noisy_barrier(9, 3, 3, 2, &int(0), &mut rng).unwrap();
        assert_eq!(h.edge_count(), 49);
    }
}

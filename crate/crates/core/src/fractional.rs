//! Fractional matchings and covers in exact arithmetic, and the stable completion.

use num_traits::{One, Signed, Zero};

use crate::combinatorics::{int, Rational};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::simplex::solve_packing;

/// Optimal fractional matching (`edge_weights`, aligned with `H.edges()`) and optimal
/// fractional vertex cover (`vertex_weights`), both certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub edge_weights: Vec<Rational>,
    pub vertex_weights: Vec<Rational>,
    pub nu_star: Rational,
    pub tau_star: Rational,
}

impl FractionalSolution {
    /// Whether the matching side has total weight `n/k`.
    pub fn is_perfect(&self, n: usize, k: usize) -> bool {
        self.nu_star == Rational::new((n as i64).into(), (k as i64).into())
    }

    /// Check feasibility of both sides and equal objectives against `h`.
    pub fn certify(&self, h: &Hypergraph) -> Result<()> {
        if self.edge_weights.len() != h.edge_count() || self.vertex_weights.len() != h.n() {
            return Err(Error::Internal("fractional solution has the wrong shape".into()));
        }
        let mut load = vec![Rational::zero(); h.n()];
        for (e, w) in h.edges().iter().zip(&self.edge_weights) {
            if w.is_negative() || *w > Rational::one() {
                return Err(Error::Internal(format!("edge weight out of [0,1] on {e:?}")));
            }
            for &v in e {
                load[v as usize] += w;
            }
            let cover: Rational = e.iter().map(|&v| &self.vertex_weights[v as usize]).sum();
            if cover < Rational::one() {
                return Err(Error::Internal(format!("cover misses edge {e:?}")));
            }
        }
        if let Some(v) = load.iter().position(|l| *l > Rational::one()) {
            return Err(Error::Internal(format!("vertex {v} is overloaded")));
        }
        if self.vertex_weights.iter().any(|w| w.is_negative() || *w > Rational::one()) {
            return Err(Error::Internal("vertex weight out of [0,1]".into()));
        }
        let nu: Rational = self.edge_weights.iter().sum();
        let tau: Rational = self.vertex_weights.iter().sum();
        if nu != self.nu_star || tau != self.tau_star || nu != tau {
            return Err(Error::Internal(format!("duality gap: nu* = {nu}, tau* = {tau}")));
        }
        Ok(())
    }
}

/// `ν*(H)` and `τ*(H)` with the primal/dual pair produced by the simplex pivot order.
pub fn fractional_optimum(h: &Hypergraph) -> Result<FractionalSolution> {
    let columns: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| v as usize).collect())
        .collect();
    let opt = solve_packing(h.n(), &columns);
    let sol = FractionalSolution {
        tau_star: opt.y.iter().sum(),
        nu_star: opt.value,
        edge_weights: opt.x,
        vertex_weights: opt.y,
    };
    sol.certify(h)?;
    Ok(sol)
}

pub fn has_perfect_fractional(h: &Hypergraph) -> Result<bool> {
    Ok(fractional_optimum(h)?.is_perfect(h.n(), h.k()))
}

/// Output of [`stable_completion`], expressed in the new labels.
#[derive(Debug, Clone)]
pub struct StableCompletion {
    /// `H′`: all k-sets whose ω-weight is at least 1.
    pub graph: Hypergraph,
    /// `relabeling[v]` is the new label of original vertex `v`.
    pub relabeling: Vec<Vertex>,
    /// ω indexed by new label, non-increasing.
    pub omega: Vec<Rational>,
    pub tau_star: Rational,
    /// Number of k-sets added on top of the relabeled `H`.
    pub added: usize,
}

/// Take a minimum fractional cover ω, relabel so ω is non-increasing (ties by original
/// index) and add every k-set of ω-weight at least 1. The result is a down-set in the
/// componentwise order, contains the relabeled `H` and keeps `τ*` unchanged.
pub fn stable_completion(h: &Hypergraph) -> Result<StableCompletion> {
    let sol = fractional_optimum(h)?;
    let n = h.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sol.vertex_weights[b].cmp(&sol.vertex_weights[a]).then(a.cmp(&b)));
    let mut relabeling = vec![0 as Vertex; n];
    for (new, &old) in order.iter().enumerate() {
        relabeling[old] = new as Vertex;
    }
    let omega: Vec<Rational> = order.iter().map(|&old| sol.vertex_weights[old].clone()).collect();

    let mut edges = Vec::new();
    let mut current = Vec::with_capacity(h.k());
    heavy_sets(&omega, h.k(), 0, &int(0), &mut current, &mut edges);
    let graph = Hypergraph::from_canonical(n, h.k(), edges);
    let relabeled = h.permute(&relabeling)?;
    debug_assert!(relabeled.edges().iter().all(|e| graph.contains_edge(e)));
    let added = graph.edge_count() - relabeled.edge_count();
    Ok(StableCompletion {
        graph: match h.name() {
            Some(name) => graph.with_name(format!("stable completion of {name}")),
            None => graph,
        },
        relabeling,
        omega,
        tau_star: sol.tau_star,
        added,
    })
}

/// Lexicographic enumeration of k-sets with weight sum >= 1 over a non-increasing ω.
fn heavy_sets(
    omega: &[Rational],
    k: usize,
    start: usize,
    sum: &Rational,
    current: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
) {
    let need = k - current.len();
    if need == 0 {
        if *sum >= Rational::one() {
            out.push(current.clone());
        }
        return;
    }
    for j in start..=omega.len().saturating_sub(need) {
        if omega.len() < need {
            break;
        }
        // The best completion from j uses the next `need` weights; later j only get lighter.
        let best: Rational = sum + omega[j..j + need].iter().sum::<Rational>();
        if best < Rational::one() {
            break;
        }
        current.push(j as Vertex);
        heavy_sets(omega, k, j + 1, &(sum + &omega[j]), current, out);
        current.pop();
    }
}

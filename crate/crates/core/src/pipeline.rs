//! Two-round randomization towards an almost perfect matching.
//!
//! Round 1 draws `copies` random vertex subsets `R^i` (each vertex kept with
//! probability `p`, then fewer than `k` vertices dropped so `k | |R^i|`). Copies whose
//! induced subgraph passes the independence gate and carries a perfect fractional
//! matching move on to round 2, which keeps each edge of `H[R^i]` with probability equal
//! to its fractional weight. A greedy matcher on the union finishes the job; it stands
//! in for the nibble step and is labeled `greedy-fallback` in reports.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use serde::Serialize;

use crate::combinatorics::{binom_checked, int, pow_int, Rational};
use crate::constructions::threshold_unchecked;
use crate::error::{Error, Result};
use crate::exact::{independence_number, validate_matching, Matching};
use crate::fractional::{fractional_optimum, FractionalSolution};
use crate::hypergraph::{EdgeOracle, Hypergraph, Vertex, VertexSet};
use crate::rng::{stream, streams, Probability, Threshold};

/// The round-1 copies and singleton counts `Y_{v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOneSample {
    pub n: usize,
    pub k: usize,
    pub p: Probability,
    pub copies: Vec<VertexSet>,
    /// `|R^i|` before the mod-k trim.
    pub raw_sizes: Vec<usize>,
    /// `Y_{v}` for every vertex.
    pub y_single: Vec<u32>,
}

impl RoundOneSample {
    /// `Y_{u,v}` for every pair that occurs in some copy.
    pub fn pair_counts(&self) -> HashMap<(Vertex, Vertex), u32> {
        let mut out = HashMap::new();
        for r in &self.copies {
            for (&u, &v) in r.as_slice().iter().tuple_combinations() {
                *out.entry((u, v)).or_insert(0) += 1;
            }
        }
        out
    }

    /// `Y_S` for every k-set `S` that occurs in some copy.
    pub fn kset_counts(&self) -> HashMap<Vec<Vertex>, u32> {
        let mut out = HashMap::new();
        for r in &self.copies {
            for s in r.iter().combinations(self.k) {
                *out.entry(s).or_insert(0) += 1;
            }
        }
        out
    }

    /// Recount `Y_{v}` from the copies.
    pub fn recount_single(&self) -> Vec<u32> {
        let mut y = vec![0u32; self.n];
        for r in &self.copies {
            for v in r.iter() {
                y[v as usize] += 1;
            }
        }
        y
    }
}

/// Round 1. Copy `i` uses its own stream, so copies can be generated in any order.
pub fn round1_sample(
    h: &impl EdgeOracle,
    copies: usize,
    p: &Probability,
    seed: u64,
) -> Result<RoundOneSample> {
    let (n, k) = (h.n(), h.k());
    if copies == 0 {
        return Err(Error::domain("copies must be at least 1"));
    }
    let threshold = p.threshold(n)?;
    let mut out = Vec::with_capacity(copies);
    let mut raw_sizes = Vec::with_capacity(copies);
    for i in 0..copies {
        let mut rng = stream(seed, streams::ROUND1 + i as u64);
        let mut r: Vec<Vertex> = (0..n as Vertex).filter(|_| threshold.draw(&mut rng)).collect();
        raw_sizes.push(r.len());
        let extra = r.len() % k;
        if extra > 0 {
            let mut drop: Vec<usize> = sample(&mut rng, r.len(), extra).into_vec();
            drop.sort_unstable_by(|a, b| b.cmp(a));
            for j in drop {
                r.remove(j);
            }
        }
        out.push(VertexSet::from_sorted(r));
    }
    let mut sample = RoundOneSample {
        n,
        k,
        p: p.clone(),
        copies: out,
        raw_sizes,
        y_single: Vec::new(),
    };
    sample.y_single = sample.recount_single();
    Ok(sample)
}

/// Tolerances for the round-1 properties. Floating point is used only here, for bands.
#[derive(Debug, Clone)]
pub struct Round1Bands {
    /// Centre for `Y_{v}`; defaults to `copies · p`.
    pub single_target: Option<f64>,
    /// Allowed `|Y_{v} − target|`; default `n^{3/20}`.
    pub single_band: f64,
    /// Centre for `|R^i|`; defaults to `n · p`.
    pub size_target: Option<f64>,
    /// Allowed `||R^i| − target|`; default `n^{19/200} + (k − 1)`, the sampling deviation
    /// plus the at most `k − 1` vertices dropped by the trim.
    pub size_band: f64,
    pub pair_max: u32,
    pub edge_max: u32,
    /// Degree check (v): the order `d` of the probed sets, or `None` to skip it.
    pub degree_order: Option<usize>,
    /// ξ in the (v) threshold.
    pub xi: Rational,
    /// Cap on probed `d`-sets per copy (first ones in lexicographic order).
    pub probes_per_copy: usize,
}

impl Round1Bands {
    pub fn defaults(n: usize, k: usize) -> Self {
        let nf = n as f64;
        Round1Bands {
            single_target: None,
            single_band: nf.powf(0.15),
            size_target: None,
            size_band: nf.powf(0.095) + (k - 1) as f64,
            pair_max: 2,
            edge_max: 1,
            degree_order: Some(k - 1),
            xi: Rational::new(1.into(), 10.into()),
            probes_per_copy: 64,
        }
    }

    /// Defaults with the centres at `n^{0.2}` and `n^{0.1}`, the values for
    /// `n^{1.1}` copies and `p = n^{−0.9}`.
    pub fn asymptotic_targets(n: usize, k: usize) -> Self {
        let nf = n as f64;
        Round1Bands {
            single_target: Some(nf.powf(0.2)),
            size_target: Some(nf.powf(0.1)),
            ..Self::defaults(n, k)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub holds: bool,
    pub violations: usize,
    /// Largest observed statistic (deviation or count).
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Round1Report {
    /// (i) singleton counts within the band.
    pub singles: PropertyOutcome,
    /// (ii) pair counts at most `pair_max`.
    pub pairs: PropertyOutcome,
    /// (iii) edge counts at most `edge_max`.
    pub edges: PropertyOutcome,
    /// (iv) copy sizes within the band.
    pub sizes: PropertyOutcome,
    /// (v) probed degrees above the threshold; copies with fewer than `k` vertices count
    /// as violations since they carry no degrees at all.
    pub degrees: Option<PropertyOutcome>,
    pub single_target: f64,
    pub size_target: f64,
}

fn band_outcome(values: impl Iterator<Item = f64>, target: f64, band: f64) -> PropertyOutcome {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for v in values {
        let dev = (v - target).abs();
        worst = worst.max(dev);
        if dev > band {
            violations += 1;
        }
    }
    PropertyOutcome {
        holds: violations == 0,
        violations,
        worst,
    }
}

fn count_outcome(counts: impl Iterator<Item = u32>, max: u32) -> PropertyOutcome {
    let mut violations = 0;
    let mut worst = 0u32;
    for c in counts {
        worst = worst.max(c);
        if c > max {
            violations += 1;
        }
    }
    PropertyOutcome {
        holds: violations == 0,
        violations,
        worst: worst as f64,
    }
}

pub fn check_round1_properties(
    sample: &RoundOneSample,
    h: &impl EdgeOracle,
    bands: &Round1Bands,
) -> Result<Round1Report> {
    let (n, k) = (sample.n, sample.k);
    if h.n() != n || h.k() != k {
        return Err(Error::domain("sample was drawn for a different vertex set or uniformity"));
    }
    let p = sample.p.value(n);
    let t = sample.copies.len() as f64;
    let single_target = bands.single_target.unwrap_or(t * p);
    let size_target = bands.size_target.unwrap_or(n as f64 * p);

    let singles = band_outcome(
        sample.y_single.iter().map(|&y| y as f64),
        single_target,
        bands.single_band,
    );
    let pairs = count_outcome(sample.pair_counts().into_values(), bands.pair_max);
    let edges = count_outcome(
        sample
            .kset_counts()
            .into_iter()
            .filter(|(s, _)| h.contains(s))
            .map(|(_, c)| c),
        bands.edge_max,
    );
    let sizes = band_outcome(
        sample.copies.iter().map(|r| r.len() as f64),
        size_target,
        bands.size_band,
    );
    let degrees = match bands.degree_order {
        None => None,
        Some(d) => {
            if d == 0 || d >= k {
                return Err(Error::domain(format!("degree order d = {d} must lie in [1, k-1]")));
            }
            Some(degree_property(sample, h, d, bands)?)
        }
    };
    Ok(Round1Report {
        singles,
        pairs,
        edges,
        sizes,
        degrees,
        single_target,
        size_target,
    })
}

/// `DEG^i_D > C(|R|−d, k−d) − C(|R|−d−|R|/k, k−d) − ξ|R|^{k−d}` for probed `D ⊆ R^i`.
fn degree_property(
    sample: &RoundOneSample,
    h: &impl EdgeOracle,
    d: usize,
    bands: &Round1Bands,
) -> Result<PropertyOutcome> {
    let k = sample.k;
    let mut violations = 0;
    let mut worst_shortfall = 0.0f64;
    for r in &sample.copies {
        let size = r.len();
        if size < k {
            violations += 1;
            continue;
        }
        let base = threshold_unchecked(size, k, d, size / k);
        if binom_checked(size as u64, (k - d) as u64).is_none() {
            return Err(Error::size("copy too large for the degree probe"));
        }
        let need = int(base) - &bands.xi * pow_int(size, k - d);
        for dset in r.iter().combinations(d).take(bands.probes_per_copy) {
            let rest: Vec<Vertex> = r.iter().filter(|v| !dset.contains(v)).collect();
            let deg = rest
                .iter()
                .copied()
                .combinations(k - d)
                .filter(|t| {
                    let mut e: Vec<Vertex> = dset.iter().chain(t.iter()).copied().collect();
                    e.sort_unstable();
                    h.contains(&e)
                })
                .count();
            let deg = int(deg as u64);
            if deg <= need {
                violations += 1;
                let gap = (&need - &deg).to_f64().unwrap_or(f64::INFINITY);
                worst_shortfall = worst_shortfall.max(gap);
            }
        }
    }
    Ok(PropertyOutcome {
        holds: violations == 0,
        violations,
        worst: worst_shortfall,
    })
}

/// Round-2 result: the union of the per-copy edge selections.
#[derive(Debug, Clone)]
pub struct SparseSubgraph {
    pub subgraph: Hypergraph,
    /// `Σ_{kept} |R^i| / n`, the mean expected degree.
    pub target_degree: Rational,
    pub min_degree: usize,
    pub max_degree: usize,
    pub max_pair_codegree: usize,
    pub kept_copies: Vec<usize>,
    /// `(copy, reason)` for every copy left out.
    pub skipped: Vec<(usize, String)>,
}

/// Round 2. `fracs[i]` is the fractional matching for `H[R^i]` in local labels, or
/// `None` when the copy was already rejected. Copies whose solution is not a certified
/// perfect fractional matching are skipped with a reason.
pub fn round2_sparsify(
    h: &Hypergraph,
    sample: &RoundOneSample,
    fracs: &[Option<FractionalSolution>],
    seed: u64,
) -> Result<SparseSubgraph> {
    if fracs.is_empty() {
        return Err(Error::pipeline("round2", "no fractional solutions supplied"));
    }
    if fracs.len() != sample.copies.len() {
        return Err(Error::pipeline(
            "round2",
            format!("{} solutions for {} copies", fracs.len(), sample.copies.len()),
        ));
    }
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    let mut chosen: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    let mut mass = 0usize;
    for (i, (r, frac)) in sample.copies.iter().zip(fracs).enumerate() {
        let Some(frac) = frac else {
            skipped.push((i, "rejected before round 2".to_string()));
            continue;
        };
        let local = h.induced(r)?;
        if frac.certify(&local.graph).is_err() {
            skipped.push((i, "fractional solution does not certify".to_string()));
            continue;
        }
        if r.is_empty() || !frac.is_perfect(r.len(), h.k()) {
            skipped.push((i, "fractional matching is not perfect".to_string()));
            continue;
        }
        let mut rng = stream(seed, streams::ROUND2 + i as u64);
        for (e, w) in local.graph.edges().iter().zip(&frac.edge_weights) {
            if Threshold::from_rational(w)?.draw(&mut rng) {
                chosen.insert(local.lift(e));
            }
        }
        mass += r.len();
        kept.push(i);
    }
    if kept.is_empty() {
        return Err(Error::pipeline("round2", "no fractionally matchable copies"));
    }
    let subgraph = Hypergraph::from_edge_set(h.n(), h.k(), chosen);
    let degrees = subgraph.vertex_degrees();
    Ok(SparseSubgraph {
        target_degree: Rational::new((mass as i64).into(), (h.n() as i64).into()),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        max_pair_codegree: subgraph.max_codegree(),
        subgraph,
        kept_copies: kept,
        skipped,
    })
}

/// Deterministic greedy matching: repeatedly take the alive edge whose removal (with
/// every edge meeting it) costs the fewest alive edges at any single outside vertex,
/// ties by lexicographic edge order.
pub fn degree_greedy_matching(h: &Hypergraph) -> Matching {
    let edges = h.edges();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            at[v as usize].push(i);
        }
    }
    let mut alive = vec![true; edges.len()];
    let mut remaining = edges.len();
    let mut out = Vec::new();
    let mut loss: HashMap<Vertex, usize> = HashMap::new();
    let mut seen: Vec<usize> = vec![usize::MAX; edges.len()];
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None;
        for (i, e) in edges.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            loss.clear();
            for &v in e {
                for &j in &at[v as usize] {
                    if alive[j] && seen[j] != i {
                        seen[j] = i;
                        for &u in &edges[j] {
                            if !e.contains(&u) {
                                *loss.entry(u).or_insert(0) += 1;
                            }
                        }
                    }
                }
            }
            let cost = loss.values().copied().max().unwrap_or(0);
            if best.map_or(true, |(c, _)| cost < c) {
                best = Some((cost, i));
            }
        }
        let (_, pick) = best.expect("an alive edge exists");
        for &v in &edges[pick] {
            for &j in &at[v as usize] {
                if alive[j] {
                    alive[j] = false;
                    remaining -= 1;
                }
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        out.push(edges[pick].clone());
    }
    Matching::new(out)
}

#[derive(Debug, Clone)]
pub struct PipelineParams {
    pub copies: usize,
    pub p: Probability,
    /// ε in the independence gate `α(H[R]) <= (1 − 1/k − ε/5)|R|`.
    pub eps: Rational,
    /// Target uncovered fraction, reported against the outcome.
    pub sigma: Rational,
    pub seed: u64,
}

impl PipelineParams {
    pub fn new(copies: usize, p: Probability, seed: u64) -> Self {
        PipelineParams {
            copies,
            p,
            eps: Rational::new(1.into(), 2.into()),
            sigma: Rational::new(1.into(), 10.into()),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CopyDiagnostic {
    pub copy: usize,
    pub size: usize,
    pub alpha: Option<usize>,
    pub nu_star: Option<String>,
    pub status: String,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub matching: Matching,
    pub uncovered: usize,
    pub uncovered_fraction: Rational,
    pub meets_sigma: bool,
    pub copies: Vec<CopyDiagnostic>,
    pub sparse: Option<SparseSubgraph>,
    pub finisher: &'static str,
}

pub fn almost_perfect_pipeline(h: &Hypergraph, params: &PipelineParams) -> Result<PipelineOutcome> {
    let (n, k) = (h.n(), h.k());
    let finish = |m: Matching, copies, sparse| {
        let uncovered = n - k * m.size();
        let fraction = if n == 0 {
            Rational::zero()
        } else {
            Rational::new((uncovered as i64).into(), (n as i64).into())
        };
        PipelineOutcome {
            meets_sigma: fraction <= params.sigma,
            matching: m,
            uncovered,
            uncovered_fraction: fraction,
            copies,
            sparse,
            finisher: "greedy-fallback",
        }
    };
    if h.edge_count() == 0 {
        let mut out = finish(Matching::default(), Vec::new(), None);
        out.uncovered_fraction = Rational::one();
        out.meets_sigma = out.uncovered_fraction <= params.sigma;
        return Ok(out);
    }
    let sample = round1_sample(h, params.copies, &params.p, params.seed)
        .map_err(|e| Error::pipeline("round1", e.to_string()))?;
    let gate = Rational::one() - Rational::new(1.into(), (k as i64).into()) - &params.eps / int(5);
    let mut fracs = Vec::with_capacity(sample.copies.len());
    let mut diags = Vec::with_capacity(sample.copies.len());
    for (i, r) in sample.copies.iter().enumerate() {
        let mut diag = CopyDiagnostic {
            copy: i,
            size: r.len(),
            alpha: None,
            nu_star: None,
            status: String::new(),
        };
        if r.is_empty() {
            diag.status = "empty".into();
            fracs.push(None);
            diags.push(diag);
            continue;
        }
        let local = h
            .induced(r)
            .map_err(|e| Error::pipeline("round1", e.to_string()))?;
        let alpha = independence_number(&local.graph)
            .map_err(|e| Error::pipeline("independence", e.to_string()))?
            .len();
        diag.alpha = Some(alpha);
        if int(alpha as u64) > &gate * int(r.len() as u64) {
            diag.status = "independence gate".into();
            fracs.push(None);
            diags.push(diag);
            continue;
        }
        let frac = fractional_optimum(&local.graph)
            .map_err(|e| Error::pipeline("fractional", e.to_string()))?;
        diag.nu_star = Some(crate::combinatorics::format_ratio(&frac.nu_star));
        if frac.is_perfect(r.len(), k) {
            diag.status = "kept".into();
            fracs.push(Some(frac));
        } else {
            diag.status = "no perfect fractional matching".into();
            fracs.push(None);
        }
        diags.push(diag);
    }
    let sparse = round2_sparsify(h, &sample, &fracs, params.seed)?;
    let matching = degree_greedy_matching(&sparse.subgraph);
    if !validate_matching(h, &matching) {
        return Err(Error::Internal("pipeline produced an invalid matching".into()));
    }
    Ok(finish(matching, diags, Some(sparse)))
}

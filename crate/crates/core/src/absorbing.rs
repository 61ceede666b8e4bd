//! Absorbing matchings.
//!
//! For `(al+h)`-sets `R`, an `ak`-set `Q` disjoint from `R` is R-absorbing when `H[Q]`
//! has a perfect matching and `ν(H[Q ∪ R]) >= a + 1`. A family of pairwise disjoint
//! matchable `ak`-sets is sampled at random; its matchings together form `M`, and any
//! small leftover set can then be swallowed `al+h` vertices at a time.

use itertools::Itertools;
use rand::seq::index::sample;
use serde::Serialize;

use crate::combinatorics::{binom_checked, format_ratio, int, pow_int, Rational};
use crate::error::{Error, Guard, Result};
use crate::exact::{max_matching, Matching};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};
use crate::rng::{stream, streams, Threshold};

/// `(k, l, a, h)` with `k/2 < l < k`, `1 <= h <= l`, `1 <= a <= k − l` and
/// `al >= a(k − l) + (k − h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbsorbParams {
    pub k: usize,
    pub l: usize,
    pub a: usize,
    pub h: usize,
}

impl AbsorbParams {
    pub fn new(k: usize, l: usize, a: usize, h: usize) -> Result<Self> {
        if 2 * l <= k || l >= k {
            return Err(Error::domain(format!("need k/2 < l < k, got k = {k}, l = {l}")));
        }
        if h < 1 || h > l {
            return Err(Error::domain(format!("need 1 <= h <= l, got h = {h}")));
        }
        if a < 1 || a > k - l {
            return Err(Error::domain(format!("need 1 <= a <= k - l, got a = {a}")));
        }
        if a * l < a * (k - l) + (k - h) {
            return Err(Error::domain(format!(
                "need al >= a(k-l) + (k-h), got {} < {}",
                a * l,
                a * (k - l) + (k - h)
            )));
        }
        Ok(AbsorbParams { k, l, a, h })
    }

    /// `a = ⌈(k−l)/(2l−k)⌉`, `h = k − a(2l−k)`: the legal pair minimizing `al + h − 1`.
    pub fn optimal(k: usize, l: usize) -> Result<Self> {
        if 2 * l <= k || l >= k {
            return Err(Error::domain(format!("need k/2 < l < k, got k = {k}, l = {l}")));
        }
        let gap = 2 * l - k;
        let a = (k - l).div_ceil(gap);
        Self::new(k, l, a, k - a * gap)
    }

    /// `|R| = al + h`.
    pub fn r_size(&self) -> usize {
        self.a * self.l + self.h
    }

    /// `|Q| = ak`.
    pub fn q_size(&self) -> usize {
        self.a * self.k
    }
}

fn is_matchable(h: &Hypergraph, q: &VertexSet, a: usize) -> Result<bool> {
    Ok(max_matching(&h.induced(q)?.graph)?.size() == a)
}

/// Whether `Q` is R-absorbing. `Q` and `R` must be disjoint and of sizes `ak`, `al+h`.
pub fn is_absorbing(h: &Hypergraph, p: &AbsorbParams, r: &VertexSet, q: &VertexSet) -> Result<bool> {
    if h.k() != p.k {
        return Err(Error::domain(format!("hypergraph has k = {}, parameters k = {}", h.k(), p.k)));
    }
    if r.len() != p.r_size() || q.len() != p.q_size() {
        return Err(Error::domain(format!(
            "need |R| = {} and |Q| = {}, got {} and {}",
            p.r_size(),
            p.q_size(),
            r.len(),
            q.len()
        )));
    }
    if !r.is_disjoint(q) {
        return Err(Error::domain("Q must be disjoint from R"));
    }
    r.check_within(h.n())?;
    q.check_within(h.n())?;
    if !is_matchable(h, q, p.a)? {
        return Ok(false);
    }
    Ok(max_matching(&h.induced(&q.union(r))?.graph)?.size() > p.a)
}

/// Exhaustive limit for [`enumerate_absorbing`].
pub const ENUMERATE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbingSets {
    pub sets: Vec<VertexSet>,
    /// `|L(R)| / n^{ak}`.
    pub density: Rational,
}

/// `L(R)`: all R-absorbing sets, in lexicographic order.
pub fn enumerate_absorbing(
    h: &Hypergraph,
    p: &AbsorbParams,
    r: &VertexSet,
    guard: Guard,
) -> Result<AbsorbingSets> {
    guard.check("enumerate_absorbing", h.n(), ENUMERATE_LIMIT)?;
    r.check_within(h.n())?;
    let rest = r.complement(h.n());
    let mut sets = Vec::new();
    for q in rest.iter().combinations(p.q_size()) {
        let q = VertexSet::from_sorted(q);
        if is_absorbing(h, p, r, &q)? {
            sets.push(q);
        }
    }
    let density = Rational::new((sets.len() as u64).into(), pow_int(h.n(), p.q_size()).to_integer());
    Ok(AbsorbingSets { sets, density })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyDiagnostics {
    /// `C(n, ak)`.
    pub candidates: u128,
    /// `ρn / C(n, ak)` before clamping, as `p/q`.
    pub p: String,
    pub clamped: bool,
    pub raw_count: usize,
    pub non_matchable_removed: usize,
    /// Intersecting pairs among the raw sample.
    pub intersecting_pairs: usize,
    pub intersecting_removed: usize,
    pub final_count: usize,
    pub probes: usize,
    /// `min |L(R) ∩ F′|` over the probe sets `R`.
    pub min_probe_absorbing: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct AbsorbingFamily {
    pub params: AbsorbParams,
    pub rho: Rational,
    /// Pairwise disjoint matchable `ak`-sets, in sampling order.
    pub members: Vec<VertexSet>,
    /// A perfect matching of `H[members[i]]`, in host labels.
    pub member_matchings: Vec<Matching>,
    /// Union of `member_matchings`.
    pub matching: Matching,
    pub diagnostics: FamilyDiagnostics,
}

impl AbsorbingFamily {
    pub fn covered(&self) -> VertexSet {
        self.matching.vertices()
    }
}

/// Largest `C(n, ak)` scanned by the sampler.
pub const SAMPLE_CANDIDATE_LIMIT: u128 = 50_000_000;

/// Sample each `ak`-set (lexicographic order, one draw each from the family stream)
/// with probability `p = ρn / C(n, ak)`, clamped to 1. Then drop sets that are not
/// matchable and keep a maximal disjoint subfamily by a greedy scan in sampling order.
/// `probes` random `(al+h)`-sets `R` are scored by `|L(R) ∩ F′|`.
pub fn sample_absorbing_family(
    h: &Hypergraph,
    p: &AbsorbParams,
    rho: &Rational,
    seed: u64,
    probes: usize,
) -> Result<AbsorbingFamily> {
    use num_traits::{One, Signed};
    // rho >= 1 is accepted so that the clamped regime stays reachable
    if h.k() != p.k {
        return Err(Error::domain(format!("hypergraph has k = {}, parameters k = {}", h.k(), p.k)));
    }
    if !rho.is_positive() {
        return Err(Error::domain("rho must be positive"));
    }
    let n = h.n();
    let ak = p.q_size();
    let candidates = binom_checked(n as u64, ak as u64)
        .filter(|&c| c <= SAMPLE_CANDIDATE_LIMIT)
        .ok_or_else(|| Error::size(format!("C({n}, {ak}) candidate sets exceed the sampling limit")))?;
    let mut raw: Vec<VertexSet> = Vec::new();
    let mut prob = Rational::one();
    if candidates > 0 {
        prob = rho * int(n as u64) / int(candidates);
    }
    let clamped = prob > Rational::one();
    let threshold = Threshold::from_rational(&if clamped { Rational::one() } else { prob.clone() })?;
    let mut rng = stream(seed, streams::ABSORB_FAMILY);
    for q in (0..n as Vertex).combinations(ak) {
        if threshold.draw(&mut rng) {
            raw.push(VertexSet::from_sorted(q));
        }
    }
    let raw_count = raw.len();
    let intersecting_pairs = raw
        .iter()
        .tuple_combinations()
        .filter(|(x, y)| !x.is_disjoint(y))
        .count();

    let mut matchable = Vec::new();
    for q in raw {
        let local = h.induced(&q)?;
        let m = max_matching(&local.graph)?;
        if m.size() == p.a {
            let edges = m.edges().iter().map(|e| local.lift(e)).collect();
            matchable.push((q, Matching::new(edges)));
        }
    }
    let non_matchable_removed = raw_count - matchable.len();

    let mut members: Vec<VertexSet> = Vec::new();
    let mut member_matchings = Vec::new();
    let mut used = vec![false; n];
    for (q, m) in matchable.iter() {
        if q.iter().all(|v| !used[v as usize]) {
            q.iter().for_each(|v| used[v as usize] = true);
            members.push(q.clone());
            member_matchings.push(m.clone());
        }
    }
    let intersecting_removed = matchable.len() - members.len();
    let mut matching = Matching::default();
    for m in &member_matchings {
        matching.extend(m.clone());
    }

    let mut min_probe = None;
    if p.r_size() <= n {
        let mut prng = stream(seed, streams::ABSORB_PROBES);
        for _ in 0..probes {
            let mut r: Vec<Vertex> = sample(&mut prng, n, p.r_size()).into_iter().map(|v| v as Vertex).collect();
            r.sort_unstable();
            let r = VertexSet::from_sorted(r);
            let mut count = 0;
            for q in members.iter().filter(|q| q.is_disjoint(&r)) {
                if is_absorbing(h, p, &r, q)? {
                    count += 1;
                }
            }
            min_probe = Some(min_probe.map_or(count, |c: usize| c.min(count)));
        }
    }

    let final_count = members.len();
    Ok(AbsorbingFamily {
        params: *p,
        rho: rho.clone(),
        diagnostics: FamilyDiagnostics {
            candidates,
            p: format_ratio(&prob),
            clamped,
            raw_count,
            non_matchable_removed,
            intersecting_pairs,
            intersecting_removed,
            final_count,
            probes: if p.r_size() <= n { probes } else { 0 },
            min_probe_absorbing: min_probe,
        },
        members,
        member_matchings,
        matching,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Absorption {
    pub matching: Matching,
    /// Vertices of `V(M) ∪ S` left uncovered; fewer than `al + h`.
    pub uncovered: VertexSet,
    /// Family members consumed, by index.
    pub used_members: Vec<usize>,
}

/// Absorb `S` (disjoint from `V(M)`) into the family matching. Each round takes the
/// first `al+h` vertices `R` of the current leftover, the first unused member `Q` that
/// is R-absorbing, and replaces `Q`'s matching by `a+1` edges inside `R ∪ Q`.
pub fn absorb(h: &Hypergraph, family: &AbsorbingFamily, s: &VertexSet) -> Result<Absorption> {
    let p = &family.params;
    s.check_within(h.n())?;
    let covered = family.covered();
    if !s.is_disjoint(&covered) {
        return Err(Error::Precondition("S must avoid V(M)".into()));
    }
    let mut used = vec![false; family.members.len()];
    let mut extra: Vec<Vec<Vertex>> = Vec::new();
    let mut left = s.clone();
    while left.len() >= p.r_size() {
        let r = VertexSet::from_sorted(left.as_slice()[..p.r_size()].to_vec());
        let mut chosen = None;
        for (i, q) in family.members.iter().enumerate() {
            if used[i] || !q.is_disjoint(&r) {
                continue;
            }
            if is_absorbing(h, p, &r, q)? {
                chosen = Some(i);
                break;
            }
        }
        let Some(i) = chosen else {
            return Err(Error::AbsorptionStuck { set: r.into_vec() });
        };
        used[i] = true;
        let q = &family.members[i];
        let union = q.union(&r);
        let local = h.induced(&union)?;
        let m = max_matching(&local.graph)?;
        let edges: Vec<Vec<Vertex>> = m.edges()[..p.a + 1].iter().map(|e| local.lift(e)).collect();
        let spent: Vec<Vertex> = edges.iter().flatten().copied().collect();
        let spent = VertexSet::new(spent).expect("matching edges are disjoint");
        left = left.union(q).difference(&spent);
        extra.extend(edges);
    }
    let mut edges: Vec<Vec<Vertex>> = family
        .member_matchings
        .iter()
        .enumerate()
        .filter(|(i, _)| !used[*i])
        .flat_map(|(_, m)| m.edges().to_vec())
        .collect();
    edges.extend(extra);
    Ok(Absorption {
        matching: Matching::new(edges),
        uncovered: left,
        used_members: (0..used.len()).filter(|&i| used[i]).collect(),
    })
}

//! Seeded property campaigns. Every instance comes from one generator stream, so a
//! campaign replays exactly from `(suite, trials, seed)`.

use serde::Serialize;

use crate::closeness::classify_good;
use crate::combinatorics::{format_ratio, int, ratio, Rational};
use crate::constructions::PartitionBarrier;
use crate::error::{Error, Result};
use crate::exact::{berge_deficiency, matching_number};
use crate::fractional::{fractional_optimum, stable_completion};
use crate::generators::{pick, random_hypergraph, random_stable, StableShape};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rng::{stream, streams};
use crate::stability::{frankl_bound_check, is_stable, katona_check, stability_closeness_check};

pub const SUITES: &[&str] = &[
    "katona",
    "frankl",
    "stability2",
    "duality",
    "berge",
    "completion",
    "goodness",
];

/// Outcome of one campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    /// Instances whose hypotheses held and whose conclusion was checked.
    pub checked: usize,
    pub passed: usize,
    /// Conclusion failures that count against the suite.
    pub failed: usize,
    /// Conclusion failures below the asymptotic floor, reported but not counted.
    pub flagged: usize,
    /// Instances where the hypotheses did not apply.
    pub vacuous: usize,
    /// Suite-specific tallies, e.g. equality cases.
    pub notes: Vec<(String, usize)>,
    /// Up to five failing instances, described.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, trials: usize, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            trials,
            seed,
            checked: 0,
            passed: 0,
            failed: 0,
            flagged: 0,
            vacuous: 0,
            notes: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, holds: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if holds {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    fn note(&mut self, key: &str, value: usize) {
        self.notes.push((key.to_string(), value));
    }
}

fn describe(h: &Hypergraph) -> String {
    format!("n={} k={} edges={:?}", h.n(), h.k(), h.edges())
}

/// Options shared by the campaigns.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// `n` below this turns a conclusion failure into a flagged one.
    pub asymptotic_floor: usize,
    /// ρ for the k = 2 stability suite.
    pub rho: Rational,
}

impl SuiteConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SuiteConfig {
            trials,
            seed,
            asymptotic_floor: 0,
            rho: ratio(1, 100),
        }
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match name {
        "katona" => katona_suite(cfg),
        "frankl" => frankl_suite(cfg),
        "stability2" => stability2_suite(cfg, 12),
        "duality" => duality_suite(cfg),
        "berge" => berge_suite(cfg),
        "completion" => completion_suite(cfg),
        "goodness" => goodness_suite(cfg),
        other => Err(Error::domain(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// `s·|∂H| >= e(H)` on random hypergraphs, `k <= 3`, `n <= 10`.
pub fn katona_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("katona", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    for i in 0..cfg.trials {
        let k = pick(&mut rng, 1, 3);
        let n = pick(&mut rng, k, 10);
        let p = ratio(1 + (i % 4) as i64, 8);
        let h = random_hypergraph(n, k, &p, &mut rng)?;
        let report = katona_check(&h);
        rep.record(report.as_ref().map_or(false, |r| r.holds), || describe(&h));
    }
    Ok(rep)
}

/// Frankl's bound on random stable hypergraphs with `n >= (2t+1)k − t` for the cover
/// size `t >= ν`. Every tenth instance is the full barrier, where the bound is tight.
pub fn frankl_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("frankl", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    let mut equality = 0;
    for i in 0..cfg.trials {
        let k = pick(&mut rng, 2, 3);
        let t = pick(&mut rng, 1, 2);
        let floor = (2 * t + 1) * k - t;
        let n = pick(&mut rng, floor, floor + 3);
        let h = if i % 10 == 0 {
            PartitionBarrier::canonical(n, k, k, t)?.build()
        } else {
            let shape = StableShape {
                cover: Some(t),
                trim_maximal: pick(&mut rng, 0, 2),
            };
            random_stable(n, k, pick(&mut rng, 1, 5), shape, &mut rng)?
        };
        let report = frankl_bound_check(&h)?;
        if !report.applicable {
            rep.vacuous += 1;
            continue;
        }
        if report.edges as u128 == report.bound && report.s > 0 {
            equality += 1;
        }
        let stable = is_stable(&h).stable;
        rep.record(report.holds && stable, || describe(&h));
    }
    rep.note("equality", equality);
    Ok(rep)
}

/// The k = 2 stability implication on random stable graphs on `n` vertices with
/// `m ∈ [3, 5]`, generated inside the barrier with cover `[m]`.
pub fn stability2_suite(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("stability2", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    for i in 0..cfg.trials {
        let h = stability2_instance(n, i, &mut rng)?;
        let m = 3 + i % 3;
        let report = stability_closeness_check(&h, m, &cfg.rho)?;
        if !report.hypotheses_met {
            rep.vacuous += 1;
            continue;
        }
        if !report.conclusion_holds && n < cfg.asymptotic_floor {
            rep.checked += 1;
            rep.flagged += 1;
            continue;
        }
        rep.record(report.conclusion_holds, || {
            format!("m={m} deficit={} {}", report.deficit, describe(&h))
        });
    }
    Ok(rep)
}

/// Instance `i` of the k = 2 stability generator; its cover size is `3 + i % 3`.
pub fn stability2_instance(
    n: usize,
    i: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Hypergraph> {
    let m = 3 + i % 3;
    let shape = StableShape {
        cover: Some(m),
        trim_maximal: pick(rng, 0, 2),
    };
    let generators = pick(rng, 1, 3);
    random_stable(n, 2, generators, shape, rng)
}

/// `ν* = τ*` and `ν <= ν* <= n/k` on random hypergraphs with `k ∈ {2,3}`, `n <= 8`,
/// edge probability 1/2.
pub fn duality_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("duality", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    for _ in 0..cfg.trials {
        let k = pick(&mut rng, 2, 3);
        let n = pick(&mut rng, k, 8);
        let h = random_hypergraph(n, k, &ratio(1, 2), &mut rng)?;
        let frac = fractional_optimum(&h)?;
        let nu = int(matching_number(&h)? as u64);
        let cap = ratio(n as i64, k as i64);
        let holds = frac.nu_star == frac.tau_star && nu <= frac.nu_star && frac.nu_star <= cap;
        rep.record(holds, || {
            format!("nu*={} tau*={} {}", format_ratio(&frac.nu_star), format_ratio(&frac.tau_star), describe(&h))
        });
    }
    Ok(rep)
}

/// Berge's formula against the exact matching number on random graphs, `n <= 12`.
pub fn berge_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("berge", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    for _ in 0..cfg.trials {
        let n = pick(&mut rng, 2, 12);
        let h = random_hypergraph(n, 2, &ratio(1, 2), &mut rng)?;
        let cert = berge_deficiency(&h)?;
        let nu = matching_number(&h)?;
        rep.record(cert.value == nu, || format!("berge={} nu={nu} {}", cert.value, describe(&h)));
    }
    Ok(rep)
}

/// Stable completion on random 3-graphs with `n <= 8`: stable, `τ*` kept, `ν(H′) <= ν*(H)`.
pub fn completion_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("completion", cfg.trials, cfg.seed);
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    for i in 0..cfg.trials {
        let n = pick(&mut rng, 3, 8);
        let p = ratio(1 + (i % 3) as i64, 6);
        let h = random_hypergraph(n, 3, &p, &mut rng)?;
        let before = fractional_optimum(&h)?;
        let done = stable_completion(&h)?;
        let after = fractional_optimum(&done.graph)?;
        let nu = int(matching_number(&done.graph)? as u64);
        let holds = is_stable(&done.graph).stable
            && after.tau_star == before.tau_star
            && done.tau_star == before.tau_star
            && nu <= before.nu_star;
        rep.record(holds, || describe(&h));
    }
    Ok(rep)
}

/// `|α-bad| <= kεn/α` for α ∈ {1/10, 1/100} on the k = 2 stability instances and on
/// random 3-graphs. `trials` counts each family.
pub fn goodness_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    goodness_suite_sized(cfg, cfg.trials)
}

/// [`goodness_suite`] with `cfg.trials` stability instances (the same ones
/// [`stability2_suite`] sees for the same seed) and `random_trials` random 3-graphs.
pub fn goodness_suite_sized(cfg: &SuiteConfig, random_trials: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("goodness", cfg.trials, cfg.seed);
    let alphas = [ratio(1, 10), ratio(1, 100)];
    let mut rng = stream(cfg.seed, streams::GENERATOR);
    let check = |rep: &mut SuiteReport, h: &Hypergraph, m: usize, s: usize| -> Result<()> {
        let w = VertexSet::range(0, m as u32);
        for alpha in &alphas {
            let g = classify_good(h, m, s, &w, alpha)?;
            rep.record(g.bound_holds, || {
                format!("alpha={} m={m} s={s} bad={} {}", format_ratio(alpha), g.bad.len(), describe(h))
            });
        }
        Ok(())
    };
    for i in 0..cfg.trials {
        let h = stability2_instance(12, i, &mut rng)?;
        check(&mut rep, &h, 3 + i % 3, 2)?;
    }
    for _ in 0..random_trials {
        let n = pick(&mut rng, 6, 10);
        let m = pick(&mut rng, 1, n / 3);
        let s = pick(&mut rng, 1, 3);
        let h = random_hypergraph(n, 3, &ratio(1, 2), &mut rng)?;
        check(&mut rep, &h, m, s)?;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaigns_pass_and_replay() {
        for name in SUITES {
            let cfg = SuiteConfig::new(12, 3);
            let a = run_suite(name, &cfg).unwrap();
            assert!(a.ok(), "{name}: {:?}", a.failures);
            assert_eq!(a, run_suite(name, &cfg).unwrap());
        }
        assert!(run_suite("nope", &SuiteConfig::new(1, 0)).is_err());
    }

    #[test]
    fn frankl_sees_equality_on_barriers() {
        let rep = frankl_suite(&SuiteConfig::new(10, 0)).unwrap();
        assert!(rep.notes.iter().any(|(k, v)| k == "equality" && *v >= 1));
    }
}

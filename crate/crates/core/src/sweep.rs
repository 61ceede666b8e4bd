//! Tightness table: the degree threshold next to the barrier's actual `δ_l` and `ν`.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::{format_ratio, int, ratio, Rational};
use crate::constructions::{threshold_formula, PartitionBarrier};
use crate::error::{Error, Guard, Result};
use crate::exact::matching_number;
use crate::generators::noisy_barrier;
use crate::rng::{stream, streams};

/// Largest `n` in a sweep without `--force`.
pub const SWEEP_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum MRule {
    /// `n/k − μn <= m <= n/k − 1 − (1 − l/k)⌈(k−l)/(2l−k)⌉`, plus `m = ⌈n/k⌉ − 2`
    /// when `3l >= 2k`. Needs `2l > k`.
    Window { mu: Rational },
    /// Every `m <= min(⌊n/k⌋, n − k)`.
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub threshold: u128,
    pub barrier_min_degree: usize,
    pub barrier_nu: usize,
    /// Whether `m` lies in the theorem window (always false under [`MRule::All`] when
    /// the window is undefined).
    pub in_window: bool,
    pub search_trials: usize,
    /// Random supersets of the barrier with `δ_l` above the threshold and `ν <= m`.
    pub search_found: usize,
}

/// The window bounds as exact rationals `(lower, upper)`.
pub fn window(n: usize, k: usize, l: usize, mu: &Rational) -> Result<(Rational, Rational)> {
    if 2 * l <= k || l >= k {
        return Err(Error::domain(format!("the window needs k/2 < l < k, got k = {k}, l = {l}")));
    }
    let a = (k - l).div_ceil(2 * l - k);
    let nk = ratio(n as i64, k as i64);
    let lower = &nk - mu * int(n as u64);
    let upper = nk - int(1) - (int(1) - ratio(l as i64, k as i64)) * int(a as u64);
    Ok((lower, upper))
}

fn window_ms(n: usize, k: usize, l: usize, mu: &Rational) -> Result<Vec<usize>> {
    let (lower, upper) = window(n, k, l, mu)?;
    let lo = lower.ceil().to_integer().to_i64().unwrap_or(0).max(0) as usize;
    let hi = upper.floor().to_integer().to_i64().unwrap_or(-1);
    let mut ms: Vec<usize> = if hi < 0 { Vec::new() } else { (lo..=hi as usize).collect() };
    if 3 * l >= 2 * k {
        let extra = n.div_ceil(k).checked_sub(2);
        if let Some(e) = extra {
            if !ms.contains(&e) {
                ms.push(e);
            }
        }
    }
    ms.retain(|&m| m <= n / k && m + k <= n);
    ms.sort_unstable();
    Ok(ms)
}

pub fn sweep(
    k: usize,
    l: usize,
    ns: std::ops::RangeInclusive<usize>,
    rule: &MRule,
    search_trials: usize,
    seed: u64,
    guard: Guard,
) -> Result<Vec<SweepRow>> {
    if l == 0 || l >= k {
        return Err(Error::domain(format!("need 1 <= l < k, got l = {l}, k = {k}")));
    }
    let mut rows = Vec::new();
    let mut rng = stream(seed, streams::GENERATOR);
    for n in ns {
        if n < k + l {
            continue;
        }
        guard.check("sweep n", n, SWEEP_LIMIT)?;
        let in_window = match rule {
            MRule::Window { mu } => window_ms(n, k, l, mu)?,
            MRule::All => window_ms(n, k, l, &int(0)).unwrap_or_default(),
        };
        let ms: Vec<usize> = match rule {
            MRule::Window { .. } => in_window.clone(),
            MRule::All => (0..=(n / k).min(n - k)).collect(),
        };
        for m in ms {
            let barrier = PartitionBarrier::canonical(n, k, k, m)?.build();
            let threshold = threshold_formula(n, k, l, m)?;
            // ν <= ⌊n/k⌋ always, so a search at m = ⌊n/k⌋ would succeed vacuously
            let trials = if m < n / k { search_trials } else { 0 };
            let mut found = 0;
            for t in 0..trials {
                let q = ratio(1, 2 << (t % 3));
                let h = noisy_barrier(n, k, k, m, &q, &mut rng)?;
                if h.min_degree(l)? as u128 > threshold && matching_number(&h)? <= m {
                    found += 1;
                }
            }
            rows.push(SweepRow {
                n,
                m,
                threshold,
                barrier_min_degree: barrier.min_degree(l)?,
                barrier_nu: matching_number(&barrier)?,
                in_window: in_window.contains(&m),
                search_trials: trials,
                search_found: found,
            });
        }
    }
    Ok(rows)
}

/// The window as text, for reports.
pub fn describe_window(n: usize, k: usize, l: usize, mu: &Rational) -> Option<String> {
    let (lo, hi) = window(n, k, l, mu).ok()?;
    Some(format!("[{}, {}]", format_ratio(&lo), format_ratio(&hi)))
}

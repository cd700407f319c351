//! Haar-ensemble experiments: how often the majorization bound beats the
//! Maassen–Uffink bound, empirical checks of `p ⊗ q ≺ Q`, and gap statistics.
//!
//! Sample `i` always draws from `seed.substream(i)`, so results do not depend
//! on the execution mode or the number of worker threads.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{
    deutsch_from_c, ladder_values, majorizing_vector, mu_from_c, outcome_distributions, report_from_coefficients,
};
use crate::entropy::{majorization_slack, tensor_product, RenyiOrder};
use crate::error::{Error, Result};
use crate::exec::{count_range, map_range, Execution};
use crate::families::fmt_sig12;
use crate::rng::{haar_state_from, haar_unitary_from, RngSeed};
use crate::submatrices::ladder_coefficients_trusted;
use crate::tolerance;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeatRateResult {
    pub n: usize,
    pub samples: u64,
    pub wins: u64,
    pub rate: f64,
    pub stderr: f64,
    pub seed: RngSeed,
}

impl BeatRateResult {
    fn new(n: usize, samples: u64, wins: u64, seed: RngSeed) -> Self {
        let rate = wins as f64 / samples as f64;
        let stderr = (rate * (1.0 - rate) / samples as f64).sqrt();
        BeatRateResult { n, samples, wins, rate, stderr, seed }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BeatRateOptions {
    /// Ladder rung `k` compared against MU; `None` means `k = N - 1`.
    pub rung: Option<usize>,
    pub order: Option<RenyiOrder>,
    pub execution: Execution,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!("experiments need N >= 2, got {n}")));
    }
    if n > tolerance::MAX_ENUMERATION_DIM {
        return Err(Error::Dimension(format!("N = {n} exceeds the enumeration limit")));
    }
    Ok(())
}

/// Fraction of Haar unitaries for which `B_1^{N-1}(U) > B_MU(U)`.
pub fn beat_rate(n: usize, samples: u64, seed: RngSeed) -> Result<BeatRateResult> {
    beat_rate_with(n, samples, seed, BeatRateOptions::default())
}

pub fn beat_rate_with(n: usize, samples: u64, seed: RngSeed, options: BeatRateOptions) -> Result<BeatRateResult> {
    check_n(n)?;
    if samples == 0 {
        return Err(Error::Validation("at least one sample is required".into()));
    }
    let rung = options.rung.unwrap_or(n - 1);
    if rung == 0 || rung >= n {
        return Err(Error::Validation(format!("ladder rung must be in 1..{}, got {rung}", n - 1)));
    }
    let order = options.order.unwrap_or(RenyiOrder::SHANNON);
    let wins = count_range(options.execution, samples, |i| {
        let mut rng = seed.substream(i).rng();
        let u = haar_unitary_from(n, &mut rng);
        let sc = ladder_coefficients_trusted(&u);
        let ladder = ladder_values(&majorizing_vector(&sc), order);
        ladder[rung - 1] > mu_from_c(u.max_abs_entry())
    });
    Ok(BeatRateResult::new(n, samples, wins, seed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub n: usize,
    pub pairs: u64,
    pub tolerance: f64,
    /// Smallest partial-sum margin of `Q` over `p ⊗ q` seen in the run.
    pub worst_slack: f64,
    pub violations: Vec<Violation>,
    pub seed: RngSeed,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws Haar `(U, ψ)` pairs and records every pair where `p ⊗ q ≺ Q` fails
/// by more than [`tolerance::PROPERTY`].
pub fn majorization_fuzz(n: usize, pairs: u64, seed: RngSeed) -> Result<FuzzReport> {
    majorization_fuzz_with(n, pairs, seed, Execution::Parallel)
}

pub fn majorization_fuzz_with(n: usize, pairs: u64, seed: RngSeed, execution: Execution) -> Result<FuzzReport> {
    check_n(n)?;
    let slacks = map_range(execution, pairs, |i| {
        let mut rng = seed.substream(i).rng();
        let u = haar_unitary_from(n, &mut rng);
        let psi = haar_state_from(n, &mut rng);
        let (p, q) = outcome_distributions(&u, &psi).expect("dimensions agree");
        let q_vec = majorizing_vector(&ladder_coefficients_trusted(&u));
        majorization_slack(q_vec.q_full().values(), tensor_product(&p, &q).values())
    });
    let worst_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = slacks
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < -tolerance::PROPERTY)
        .map(|(i, &slack)| Violation { index: i as u64, slack })
        .collect();
    Ok(FuzzReport { n, pairs, tolerance: tolerance::PROPERTY, worst_slack, violations, seed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub mean: f64,
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub max: f64,
    /// Fraction of samples at or above zero.
    pub nonnegative_fraction: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl DistributionSummary {
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        DistributionSummary {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v[0],
            q05: quantile(&v, 0.05),
            q25: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q75: quantile(&v, 0.75),
            q95: quantile(&v, 0.95),
            max: v[v.len() - 1],
            nonnegative_fraction: v.iter().filter(|&&x| x >= 0.0).count() as f64 / v.len() as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapStats {
    pub n: usize,
    pub samples: u64,
    pub alpha: RenyiOrder,
    pub seed: RngSeed,
    /// `B_α^{N-1} - B_MU`.
    pub vs_mu: DistributionSummary,
    /// `B_α^{N-1} - B_D`.
    pub vs_deutsch: DistributionSummary,
    #[serde(skip)]
    pub gaps_mu: Vec<f64>,
    #[serde(skip)]
    pub gaps_deutsch: Vec<f64>,
}

pub fn bound_gap_stats(n: usize, samples: u64, order: RenyiOrder, seed: RngSeed) -> Result<GapStats> {
    bound_gap_stats_with(n, samples, order, seed, Execution::Parallel)
}

pub fn bound_gap_stats_with(
    n: usize,
    samples: u64,
    order: RenyiOrder,
    seed: RngSeed,
    execution: Execution,
) -> Result<GapStats> {
    check_n(n)?;
    if samples == 0 {
        return Err(Error::Validation("at least one sample is required".into()));
    }
    let pairs = map_range(execution, samples, |i| {
        let mut rng = seed.substream(i).rng();
        let u = haar_unitary_from(n, &mut rng);
        let c = u.max_abs_entry();
        let report = report_from_coefficients(&ladder_coefficients_trusted(&u), c, order);
        (report.strongest() - mu_from_c(c), report.strongest() - deutsch_from_c(c))
    });
    let (gaps_mu, gaps_deutsch): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(GapStats {
        n,
        samples,
        alpha: order,
        seed,
        vs_mu: DistributionSummary::of(&gaps_mu),
        vs_deutsch: DistributionSummary::of(&gaps_deutsch),
        gaps_mu,
        gaps_deutsch,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Equal-width histogram over `[min, max]`; the last bin is closed.
pub fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    assert!(bins > 0);
    if values.is_empty() {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin { lo: lo + k as f64 * width, hi: lo + (k + 1) as f64 * width, count })
        .collect()
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for b in bins {
        let _ = writeln!(out, "{},{},{}", fmt_sig12(b.lo), fmt_sig12(b.hi), b.count);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beat_rate_is_reproducible_and_schedule_independent() {
        let seed = RngSeed::new(42);
        let a =
            beat_rate_with(3, 300, seed, BeatRateOptions { execution: Execution::Sequential, ..Default::default() })
                .unwrap();
        let b = beat_rate_with(3, 300, seed, BeatRateOptions { execution: Execution::Parallel, ..Default::default() })
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rate, a.wins as f64 / 300.0);
        assert!((a.stderr - (a.rate * (1.0 - a.rate) / 300.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_sample_rate_is_binary() {
        let r = beat_rate(2, 1, RngSeed::new(1)).unwrap();
        assert!(r.rate == 0.0 || r.rate == 1.0);
    }

    #[test]
    fn argument_validation() {
        assert!(beat_rate(1, 10, RngSeed::new(0)).is_err());
        assert!(beat_rate(2, 0, RngSeed::new(0)).is_err());
        let bad = BeatRateOptions { rung: Some(3), ..Default::default() };
        assert!(beat_rate_with(3, 10, RngSeed::new(0), bad).is_err());
    }

    #[test]
    fn small_fuzz_has_no_violations() {
        for n in 2..=4 {
            let rep = majorization_fuzz(n, 300, RngSeed::new(n as u64)).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.worst_slack >= -1e-10);
        }
    }

    #[test]
    fn gap_stats_for_qubits() {
        let g = bound_gap_stats(2, 2000, RenyiOrder::SHANNON, RngSeed::new(8)).unwrap();
        assert!(g.vs_mu.mean > 0.0);
        assert_eq!(g.gaps_mu.len(), 2000);
        assert!(g.vs_mu.min <= g.vs_mu.q05 && g.vs_mu.q95 <= g.vs_mu.max);
        let h = histogram(&g.gaps_mu, 20);
        assert_eq!(h.iter().map(|b| b.count).sum::<u64>(), 2000);
        assert!(histogram_csv(&h).starts_with("bin_lo,bin_hi,count\n"));
    }
}

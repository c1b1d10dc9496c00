//! Goodness-of-fit between simulated hitting times and the exact law.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::stochastic::chain::HittingTimePmf;
use crate::stochastic::simulate::SimulationReport;

/// Minimum expected count for a chi-square bin of its own.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub tv_bound: f64,
    pub p_value_floor: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tv_bound: 0.01,
            p_value_floor: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tv_distance: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub tv_bound: f64,
    pub p_value_floor: f64,
    pub passed: bool,
}

/// Compares a histogram (`counts[k]` = trials with `T = k`) with `pmf`.
///
/// Counts beyond `k_max` are matched against the tail mass. Values of `k`
/// whose expected count is below [`MIN_EXPECTED`] are pooled with the tail into
/// one bin; if that pool is itself too small it joins the last regular bin.
pub fn compare_histogram(
    counts: &[u64],
    pmf: &HittingTimePmf,
    cfg: VerifyConfig,
) -> Result<Verdict> {
    let trials: u64 = counts.iter().sum();
    if trials == 0 {
        return Err(Error::InsufficientData("empty histogram".into()));
    }
    let total = trials as f64;
    let k_max = pmf.k_max();
    let observed_at = |k: usize| counts.get(k).copied().unwrap_or(0) as f64;
    let observed_tail: f64 = counts.iter().skip(k_max + 1).map(|&c| c as f64).sum();

    let mut tv = 0.0;
    for k in 0..=k_max {
        tv += (observed_at(k) / total - pmf.pmf[k]).abs();
    }
    tv += (observed_tail / total - pmf.tail).abs();
    tv *= 0.5;

    // (observed, expected)
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (observed_tail, pmf.tail * total);
    for k in 0..=k_max {
        let expected = pmf.pmf[k] * total;
        if expected >= MIN_EXPECTED {
            bins.push((observed_at(k), expected));
        } else {
            pooled.0 += observed_at(k);
            pooled.1 += expected;
        }
    }
    if pooled.1 >= MIN_EXPECTED {
        bins.push(pooled);
    } else if let Some(last) = bins.last_mut() {
        last.0 += pooled.0;
        last.1 += pooled.1;
    }
    if bins.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} bin(s) with expected count >= {MIN_EXPECTED}",
            bins.len()
        )));
    }
    let chi_square: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let degrees_of_freedom = bins.len() - 1;
    let dist = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::InsufficientData(e.to_string()))?;
    let p_value = 1.0 - dist.cdf(chi_square);
    Ok(Verdict {
        tv_distance: tv,
        chi_square,
        degrees_of_freedom,
        p_value,
        tv_bound: cfg.tv_bound,
        p_value_floor: cfg.p_value_floor,
        passed: tv < cfg.tv_bound && p_value > cfg.p_value_floor,
    })
}

/// Checks that `report` and `pmf` describe the same chain, then compares them.
pub fn verify_distribution(
    report: &SimulationReport,
    pmf: &HittingTimePmf,
    cfg: VerifyConfig,
) -> Result<Verdict> {
    if report.n != pmf.n {
        return Err(Error::ReportMismatch(format!(
            "rank {} vs {}",
            report.n, pmf.n
        )));
    }
    if report.p != pmf.p {
        return Err(Error::ReportMismatch(format!(
            "p {:?} vs {:?}",
            report.p, pmf.p
        )));
    }
    compare_histogram(&report.histogram, pmf, cfg)
}

/// Draws `trials` values from `pmf` by inverse-cdf sampling; draws falling in
/// the tail are recorded at `k_max + 1`.
pub fn sample_from_pmf(pmf: &HittingTimePmf, trials: u64, seed: u64) -> Vec<u64> {
    let cdf = pmf.cdf();
    let mut counts = vec![0u64; pmf.k_max() + 2];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let u: f64 = rng.random();
        let k = cdf.partition_point(|&c| c <= u);
        counts[k.min(pmf.k_max() + 1)] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::chain::{exact_hitting_pmf, ProbabilityVector};

    fn pmf(p: &[f64]) -> HittingTimePmf {
        exact_hitting_pmf(&ProbabilityVector::new(p.to_vec()).unwrap(), None).unwrap()
    }

    #[test]
    fn self_sampled_histogram_passes() {
        let law = pmf(&[0.5, 0.5]);
        let counts = sample_from_pmf(&law, 100_000, 11);
        let v = compare_histogram(&counts, &law, VerifyConfig::default()).unwrap();
        assert!(v.passed, "{v:?}");
    }

    #[test]
    fn wrong_rank_fails() {
        let law2 = pmf(&[0.5, 0.5]);
        let law3 = pmf(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let counts = sample_from_pmf(&law2, 100_000, 5);
        let v = compare_histogram(&counts, &law3, VerifyConfig::default()).unwrap();
        assert!(!v.passed);
        assert!(v.tv_distance > 0.1);
    }

    #[test]
    fn exact_counts_give_zero_distance() {
        let law = pmf(&[0.5, 0.5]);
        // (k - 1)/2^k scaled by 2^40; the mass past k = 40 is 41/2^40
        let mut counts = vec![0u64; 41];
        for k in 2..=40u64 {
            counts[k as usize] = (k - 1) << (40 - k);
        }
        let v = compare_histogram(&counts, &law, VerifyConfig::default()).unwrap();
        assert!(v.tv_distance < 1e-9, "{v:?}");
    }

    #[test]
    fn too_few_trials() {
        let law = pmf(&[0.5, 0.5]);
        assert!(matches!(
            compare_histogram(&[0, 0, 1], &law, VerifyConfig::default()),
            Err(Error::InsufficientData(_))
        ));
        assert!(compare_histogram(&[], &law, VerifyConfig::default()).is_err());
    }
}

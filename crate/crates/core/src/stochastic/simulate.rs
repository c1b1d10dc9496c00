//! Seeded Monte Carlo simulation of random partial products.
//!
//! Trial `t` draws its letters from a ChaCha8 stream keyed by the master seed
//! with stream number `t`, so results do not depend on how trials are spread
//! over threads.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::level::{level_by_definition, level_step};
use crate::stochastic::chain::ProbabilityVector;
use crate::stochastic::verify::Verdict;
use crate::word::Generator;

pub const RNG_DESCRIPTION: &str = "ChaCha8Rng::seed_from_u64(seed), set_stream(trial index)";

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// In sampled mode every this-many-th trial also tracks the element.
pub const SAMPLE_EVERY: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Track only the level.
    LevelOnly,
    /// Track the product too and check its level at every step.
    Full,
    /// Full tracking on every [`SAMPLE_EVERY`]-th trial.
    Sampled,
}

impl Mode {
    /// Full tracking up to rank 3, sampled above.
    pub fn default_for(n: usize) -> Mode {
        if n <= 3 {
            Mode::Full
        } else {
            Mode::Sampled
        }
    }

    fn tracks(self, trial: u64) -> bool {
        match self {
            Mode::LevelOnly => false,
            Mode::Full => true,
            Mode::Sampled => trial.is_multiple_of(SAMPLE_EVERY),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub p: ProbabilityVector,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub step_budget: u64,
}

impl SimulationConfig {
    pub fn new(p: ProbabilityVector, trials: u64, seed: u64, mode: Mode) -> Self {
        SimulationConfig {
            p,
            trials,
            seed,
            mode,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub p: Vec<f64>,
    pub seed: u64,
    pub rng: String,
    pub trials: u64,
    pub mode: Mode,
    /// Hitting time of every trial, in trial order.
    #[serde(skip)]
    pub hitting_times: Vec<u64>,
    /// `histogram[k]` = number of trials with `T = k`.
    pub histogram: Vec<u64>,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    /// Per level `i`: steps spent at `i` that stayed, and that dropped to `i - 1`.
    pub stays: Vec<u64>,
    pub drops: Vec<u64>,
    /// Steps whose level went up or fell by more than one, or left 0.
    pub path_violations: u64,
    pub cross_checked_trials: u64,
    /// Steps where the tracked level disagreed with the level of the product,
    /// or where `f` was left after absorption.
    pub cross_check_failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl SimulationReport {
    /// Empirical `P(level i -> i-1)` among steps taken at level `i`.
    pub fn drop_frequency(&self, i: usize) -> Option<f64> {
        let visits = self.stays[i] + self.drops[i];
        (visits > 0).then(|| self.drops[i] as f64 / visits as f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Default)]
struct TrialOutcome {
    hitting_time: u64,
    stays: Vec<u64>,
    drops: Vec<u64>,
    path_violations: u64,
    checked: bool,
    failures: u64,
}

fn run_trial(
    config: &SimulationConfig,
    sampler: &WeightedIndex<f64>,
    gens: &[Generator],
    trial: u64,
) -> Result<TrialOutcome> {
    let n = config.p.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let track = config.mode.tracks(trial);
    let mut out = TrialOutcome {
        stays: vec![0; n + 1],
        drops: vec![0; n + 1],
        checked: track,
        ..Default::default()
    };
    let mut level = n;
    let mut product = Element::identity(n)?;
    let mut steps = 0u64;
    while level > 0 {
        if steps >= config.step_budget {
            return Err(Error::StepBudgetExceeded {
                trial,
                budget: config.step_budget,
            });
        }
        steps += 1;
        let g = gens[sampler.sample(&mut rng)];
        let next = level_step(level, g.index());
        match level - next {
            0 => out.stays[level] += 1,
            1 => out.drops[level] += 1,
            _ => out.path_violations += 1,
        }
        if next > level {
            out.path_violations += 1;
        }
        level = next;
        if track {
            product = product.mul_gen(g);
            if level_by_definition(&product) != level {
                out.failures += 1;
            }
        }
    }
    out.hitting_time = steps;
    if track {
        // witness absorption: further letters keep both the level and f
        for _ in 0..n {
            let g = gens[sampler.sample(&mut rng)];
            if level_step(level, g.index()) != 0 {
                out.path_violations += 1;
            }
            product = product.mul_gen(g);
            if !product.is_zero() {
                out.failures += 1;
            }
        }
    }
    Ok(out)
}

/// Runs the trials in parallel and merges them in trial order.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationReport> {
    config.p.require_positive()?;
    if config.trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let n = config.p.rank();
    let sampler = WeightedIndex::new(config.p.as_slice().iter().copied())
        .map_err(|e| Error::InvalidProbability(e.to_string()))?;
    let gens: Vec<Generator> = (1..=n)
        .map(|i| Generator::new(n, i))
        .collect::<Result<_>>()?;

    let outcomes: Vec<Result<TrialOutcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &sampler, &gens, t))
        .collect();

    let mut hitting_times = Vec::with_capacity(config.trials as usize);
    let mut stays = vec![0u64; n + 1];
    let mut drops = vec![0u64; n + 1];
    let mut path_violations = 0;
    let mut cross_checked_trials = 0;
    let mut cross_check_failures = 0;
    for outcome in outcomes {
        let o = outcome?;
        hitting_times.push(o.hitting_time);
        for i in 0..=n {
            stays[i] += o.stays[i];
            drops[i] += o.drops[i];
        }
        path_violations += o.path_violations;
        cross_checked_trials += o.checked as u64;
        cross_check_failures += o.failures;
    }

    let max_t = hitting_times.iter().copied().max().unwrap_or(0) as usize;
    let mut histogram = vec![0u64; max_t + 1];
    for &t in &hitting_times {
        histogram[t as usize] += 1;
    }
    let count = hitting_times.len() as f64;
    let mean = hitting_times.iter().map(|&t| t as f64).sum::<f64>() / count;
    let variance = if hitting_times.len() > 1 {
        hitting_times
            .iter()
            .map(|&t| (t as f64 - mean).powi(2))
            .sum::<f64>()
            / (count - 1.0)
    } else {
        0.0
    };

    Ok(SimulationReport {
        n,
        p: config.p.as_slice().to_vec(),
        seed: config.seed,
        rng: RNG_DESCRIPTION.to_string(),
        trials: config.trials,
        mode: config.mode,
        hitting_times,
        histogram,
        mean,
        variance,
        standard_error: (variance / count).sqrt(),
        stays,
        drops,
        path_violations,
        cross_checked_trials,
        cross_check_failures,
        verdict: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: &[f64], trials: u64, seed: u64, mode: Mode) -> SimulationConfig {
        SimulationConfig::new(
            ProbabilityVector::new(p.to_vec()).unwrap(),
            trials,
            seed,
            mode,
        )
    }

    #[test]
    fn hitting_time_at_least_n() {
        let r = simulate(&config(&[0.2, 0.3, 0.5], 2000, 7, Mode::Full)).unwrap();
        assert!(r.hitting_times.iter().all(|&t| t >= 3));
        assert_eq!(r.histogram.iter().sum::<u64>(), 2000);
        assert_eq!(r.cross_check_failures, 0);
        assert_eq!(r.path_violations, 0);
        assert_eq!(r.cross_checked_trials, 2000);
    }

    #[test]
    fn same_seed_same_report() {
        let c = config(&[0.5, 0.5], 500, 42, Mode::Full);
        let a = simulate(&c).unwrap();
        let b = simulate(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let other = simulate(&config(&[0.5, 0.5], 500, 43, Mode::Full)).unwrap();
        assert_ne!(a.hitting_times, other.hitting_times);
    }

    #[test]
    fn modes_agree_on_hitting_times() {
        let full = simulate(&config(&[0.25, 0.25, 0.25, 0.25], 300, 3, Mode::Full)).unwrap();
        let lvl = simulate(&config(&[0.25, 0.25, 0.25, 0.25], 300, 3, Mode::LevelOnly)).unwrap();
        let sampled = simulate(&config(&[0.25, 0.25, 0.25, 0.25], 300, 3, Mode::Sampled)).unwrap();
        assert_eq!(full.hitting_times, lvl.hitting_times);
        assert_eq!(full.hitting_times, sampled.hitting_times);
        assert_eq!(lvl.cross_checked_trials, 0);
        assert_eq!(sampled.cross_checked_trials, 3);
    }

    #[test]
    fn step_budget_aborts() {
        let mut c = config(&[0.5, 0.5], 10, 1, Mode::LevelOnly);
        c.step_budget = 1;
        assert!(matches!(
            simulate(&c),
            Err(Error::StepBudgetExceeded { trial: 0, .. })
        ));
    }

    #[test]
    fn refuses_zero_probability_and_zero_trials() {
        assert_eq!(
            simulate(&config(&[1.0, 0.0], 10, 1, Mode::LevelOnly)),
            Err(Error::ZeroProbability(2))
        );
        assert!(simulate(&config(&[0.5, 0.5], 0, 1, Mode::LevelOnly)).is_err());
    }

    #[test]
    fn json_has_expected_fields() {
        let r = simulate(&config(&[0.5, 0.5], 50, 9, Mode::LevelOnly)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "seed",
            "p",
            "trials",
            "histogram",
            "mean",
            "variance",
            "rng",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["mode"], "level-only");
    }
}

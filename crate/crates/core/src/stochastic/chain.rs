//! The level chain of random partial products and the exact law of its
//! absorption time.
//!
//! With iid letters drawn with probabilities `p_1..p_n`, the level of the
//! running product starts at `n`, drops from `i` to `i - 1` with probability
//! `p_i`, and otherwise stays. The time to reach `f` is therefore a sum of
//! independent geometric variables with success probabilities `p_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::check_rank;

/// Tolerance on `Σ p_i = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Default truncation target for the exact pmf: smallest `k` with tail below this.
pub const DEFAULT_TAIL_TARGET: f64 = 1e-9;

/// Hard limit on the support computed by [`exact_hitting_pmf`].
pub const MAX_SUPPORT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        check_rank(p.len())?;
        for (i, &v) in p.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability(format!(
                    "p_{} = {v} is not in [0, 1]",
                    i + 1
                )));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        Ok(ProbabilityVector { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(ProbabilityVector {
            p: vec![1.0 / n as f64; n],
        })
    }

    /// Parses `"0.2,0.3,0.5"`; entries may also be ratios such as `1/3`.
    pub fn parse(text: &str) -> Result<Self> {
        let number = |t: &str| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                input: text.to_string(),
                reason: format!("{t:?} is not a number"),
            })
        };
        let p = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.split_once('/') {
                Some((a, b)) => Ok(number(a)? / number(b)?),
                None => number(t),
            })
            .collect::<Result<Vec<_>>>()?;
        ProbabilityVector::new(p)
    }

    pub fn rank(&self) -> usize {
        self.p.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// `p_i` for a generator index `i` in `1..=n`.
    pub fn get(&self, i: usize) -> f64 {
        self.p[i - 1]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.p.iter().all(|&v| v > 0.0)
    }

    pub fn require_positive(&self) -> Result<()> {
        match self.p.iter().position(|&v| v <= 0.0) {
            Some(i) => Err(Error::ZeroProbability(i + 1)),
            None => Ok(()),
        }
    }

    /// `Σ 1/p_i`.
    pub fn expected_hitting_time(&self) -> f64 {
        self.p.iter().map(|v| 1.0 / v).sum()
    }

    /// `Σ (1 - p_i)/p_i²`.
    pub fn hitting_time_variance(&self) -> f64 {
        self.p.iter().map(|v| (1.0 - v) / (v * v)).sum()
    }
}

/// Transition matrix of the level chain on states `0..=n`, with its initial law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub entries: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
}

pub fn transition_matrix(p: &ProbabilityVector) -> TransitionMatrix {
    let n = p.rank();
    let mut entries = vec![vec![0.0; n + 1]; n + 1];
    entries[0][0] = 1.0;
    for i in 1..=n {
        entries[i][i - 1] = p.get(i);
        entries[i][i] = 1.0 - p.get(i);
    }
    let mut initial = vec![0.0; n + 1];
    initial[n] = 1.0;
    TransitionMatrix { entries, initial }
}

impl TransitionMatrix {
    pub fn states(&self) -> usize {
        self.entries.len()
    }

    /// Row vector times matrix.
    pub fn step(&self, dist: &[f64]) -> Vec<f64> {
        let m = self.states();
        let mut out = vec![0.0; m];
        for (i, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (j, &t) in self.entries[i].iter().enumerate() {
                out[j] += mass * t;
            }
        }
        out
    }

    /// `(π 𝒫^k)_0` for `k = 0..=k_max`, by repeated vector-matrix products.
    pub fn absorption_cdf(&self, k_max: usize) -> Vec<f64> {
        let mut dist = self.initial.clone();
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(dist[0]);
        for _ in 0..k_max {
            dist = self.step(&dist);
            out.push(dist[0]);
        }
        out
    }

    /// Expected steps to absorption from each state, by back-substitution on
    /// `t = 1 + 𝒫 t` with `t_0 = 0`.
    pub fn expected_absorption_times(&self) -> Vec<f64> {
        let m = self.states();
        let mut t = vec![0.0; m];
        for i in 1..m {
            let below: f64 = (0..i).map(|j| self.entries[i][j] * t[j]).sum();
            t[i] = (1.0 + below) / (1.0 - self.entries[i][i]);
        }
        t
    }
}

/// Exact law of the hitting time, truncated at `k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingTimePmf {
    pub n: usize,
    pub p: Vec<f64>,
    /// `P(T = k)` for `k = 0..=k_max`.
    pub pmf: Vec<f64>,
    /// `P(T > k_max)`.
    pub tail: f64,
    /// `P(L_{k_max} = s)` for `s = 0..=n`: where the level sits at the cut.
    pub level_at_cut: Vec<f64>,
}

impl HittingTimePmf {
    pub fn k_max(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn cdf(&self) -> Vec<f64> {
        self.pmf
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// Mean including the mass beyond `k_max`: past the cut, a chain at level
    /// `s` still needs `Σ_{i<=s} 1/p_i` steps on average.
    pub fn mean_with_tail_correction(&self) -> f64 {
        let k_max = self.k_max() as f64;
        let head: f64 = self
            .pmf
            .iter()
            .enumerate()
            .map(|(k, &v)| k as f64 * v)
            .sum();
        let mut remaining = 0.0;
        let mut beyond = 0.0;
        for s in 1..=self.n {
            remaining += 1.0 / self.p[s - 1];
            beyond += self.level_at_cut[s] * remaining;
        }
        head + k_max * self.tail + beyond
    }
}

/// Convolution of the geometric laws `P(V_i = k) = (1 - p_i)^{k-1} p_i`, `k >= 1`.
///
/// With `k_max = None`, the support is extended to the smallest `k` whose tail
/// mass falls below [`DEFAULT_TAIL_TARGET`].
pub fn exact_hitting_pmf(p: &ProbabilityVector, k_max: Option<usize>) -> Result<HittingTimePmf> {
    p.require_positive()?;
    let n = p.rank();
    let k_max = match k_max {
        Some(k) => k,
        None => default_k_max(p)?,
    };
    // Partial sums V_n + ... + V_s, built from the top level down, so the
    // cdf of each partial sum at k_max gives where the level sits at the cut.
    let mut law = vec![0.0; k_max + 1];
    law[0] = 1.0;
    let mut partial_cdf_at_cut = vec![0.0; n + 2];
    partial_cdf_at_cut[n + 1] = 1.0;
    for s in (1..=n).rev() {
        law = convolve_geometric(&law, p.get(s));
        partial_cdf_at_cut[s] = law.iter().sum();
    }
    // L_K = s  iff  V_n+..+V_{s+1} <= K < V_n+..+V_s
    let mut level_at_cut = vec![0.0; n + 1];
    level_at_cut[0] = partial_cdf_at_cut[1];
    for s in 1..=n {
        level_at_cut[s] = (partial_cdf_at_cut[s + 1] - partial_cdf_at_cut[s]).max(0.0);
    }
    let total: f64 = law.iter().sum();
    Ok(HittingTimePmf {
        n,
        p: p.as_slice().to_vec(),
        pmf: law,
        tail: (1.0 - total).max(0.0),
        level_at_cut,
    })
}

/// `(law * Geom(p))[k] = p·law[k-1] + (1-p)·(law * Geom(p))[k-1]`.
fn convolve_geometric(law: &[f64], p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    let mut out = vec![0.0; law.len()];
    for k in 1..law.len() {
        out[k] = p * law[k - 1] + q * out[k - 1];
    }
    out
}

fn default_k_max(p: &ProbabilityVector) -> Result<usize> {
    // grow the support geometrically, then locate the first k under the target
    let mut k = 64usize;
    loop {
        let pmf = exact_hitting_pmf(p, Some(k))?;
        let mut tail = 1.0;
        for (j, &v) in pmf.pmf.iter().enumerate() {
            tail -= v;
            if tail < DEFAULT_TAIL_TARGET {
                return Ok(j);
            }
        }
        if k >= MAX_SUPPORT {
            return Err(Error::BudgetExceeded(format!(
                "hitting-time tail still above {DEFAULT_TAIL_TARGET} at k = {k}"
            )));
        }
        k = (k * 4).min(MAX_SUPPORT);
    }
}

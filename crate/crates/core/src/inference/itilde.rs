//! The large-`N` limit `Ĩ = lim [I - ((d-1)/2) ln N]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::mutual_info::{
    mutual_info_binary_exact, mutual_info_multinomial_mc, MutualInfoEstimate, MutualInfoMethod, NestedMcConfig,
    QuadratureConfig,
};
use crate::measures::PriorDensity;
use crate::rng::RngSeed;

/// Cauchy tolerance on the last two points of a schedule.
pub const CONVERGENCE_TOLERANCE: f64 = 0.05;

/// Default schedule: powers of 4 from 256 to 4096.
pub const DEFAULT_SCHEDULE: [u64; 3] = [256, 1024, 4096];

/// `((d-1)/2) ln(2/(πe))`: the prior-independent part of Ĩ.
pub fn itilde_offset(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0 * (2.0 / (std::f64::consts::PI * std::f64::consts::E)).ln()
}

/// `Ĩ = -∫ K ln K + ((d-1)/2) ln(2/(πe))` from a known entropy.
pub fn i_tilde_from_entropy(entropy: f64, d: usize) -> f64 {
    entropy + itilde_offset(d)
}

/// Closed-form Ĩ from the prior's exact differential entropy.
pub fn i_tilde_closed_form<P: PriorDensity + ?Sized>(prior: &P) -> Result<f64> {
    let h = prior
        .exact_entropy()
        .ok_or_else(|| Error::EntropyUnavailable(format!("no closed-form entropy for prior '{}'", prior.name())))?;
    Ok(i_tilde_from_entropy(h, prior.dim()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ItildeEstimator {
    Quadrature(QuadratureConfig),
    NestedMc(NestedMcConfig),
}

/// One schedule point: `I` at `n` trials and `I - ((d-1)/2) ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ItildePoint {
    pub n: u64,
    pub mutual_info: f64,
    pub stderr: f64,
    pub shifted: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<f64>,
}

/// Ĩ taken from the largest `N` of a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItildeResult {
    pub value: f64,
    pub stderr: f64,
    pub n: u64,
    pub method: MutualInfoMethod,
    pub dim: usize,
    pub points: Vec<ItildePoint>,
    pub last_difference: f64,
    pub converged: bool,
}

impl ItildeResult {
    /// True when the shifted sequence moves monotonically towards `target`.
    pub fn approaches_monotonically(&self, target: f64) -> bool {
        self.points.windows(2).all(|w| (w[1].shifted - target).abs() <= (w[0].shifted - target).abs())
    }
}

/// Checks that a schedule has at least 3 strictly increasing positive entries.
pub fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.len() < 3 {
        return Err(Error::InvalidSchedule(format!("need at least 3 points, got {}", schedule.len())));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule(format!("schedule must be positive and strictly increasing: {schedule:?}")));
    }
    Ok(())
}

/// Evaluates `I` along `schedule` and reports `I - ((d-1)/2) ln N` at the
/// largest `N` as Ĩ. Each point uses its own derived random stream.
pub fn i_tilde_empirical<P: PriorDensity + ?Sized>(
    prior: &P,
    schedule: &[u64],
    estimator: &ItildeEstimator,
    seed: RngSeed,
) -> Result<ItildeResult> {
    validate_schedule(schedule)?;
    let d = prior.dim();
    let method = match estimator {
        ItildeEstimator::Quadrature(_) => MutualInfoMethod::Quadrature,
        ItildeEstimator::NestedMc(_) => MutualInfoMethod::NestedMonteCarlo,
    };
    let mut points = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let est = if d == 1 {
            MutualInfoEstimate { value: 0.0, stderr: 0.0, n, method, bias: None }
        } else {
            match estimator {
                ItildeEstimator::Quadrature(q) => mutual_info_binary_exact(prior, n, q)?,
                ItildeEstimator::NestedMc(c) => mutual_info_multinomial_mc(prior, n, c, seed.derive(n))?,
            }
        };
        let shifted = est.value - (d as f64 - 1.0) / 2.0 * (n as f64).ln();
        points.push(ItildePoint { n, mutual_info: est.value, stderr: est.stderr, shifted, bias: est.bias });
    }
    let last = points[points.len() - 1];
    let last_difference = (last.shifted - points[points.len() - 2].shifted).abs();
    Ok(ItildeResult {
        value: last.shifted,
        stderr: last.stderr,
        n: last.n,
        method,
        dim: d,
        points,
        last_difference,
        converged: last_difference < CONVERGENCE_TOLERANCE,
    })
}

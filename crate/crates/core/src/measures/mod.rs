//! Priors on probability space, their entropies, the measures induced by
//! probability rules, and uniformity checks on the simplex and the γ-orthant.

mod entropy;
mod induced;
mod prior;
mod uniformity;

pub use entropy::{differential_entropy, differential_entropy_mc, normalization_check, EntropyEstimate, EntropyMethod};
pub use induced::{
    default_bins, induced_alpha_density, induced_alpha_density_from, uniform_bloch_preparation, InducedBin, InducedMeasureEstimate,
};
pub use prior::{bloch_alpha_density, uniform_alpha_density, AlphaPrior, OrthantUniform, PriorDensity};
pub use uniformity::{orthant_uniformity, sykora_test, StateField, SykoraReport, UniformityReport};

use crate::error::{Error, Result};
use crate::scalar::{count, lit, ln_gamma, Scalar};
use crate::statespace::ProbabilityVector;

/// Density of the uniform measure on the positive orthant of `S^{d-1}`:
/// `2^d Γ(d/2 + 1) / (d π^{d/2})`, the reciprocal of the orthant's area.
pub fn k_opt<T: Scalar>(d: usize) -> T {
    assert!(d >= 1, "k_opt needs d >= 1");
    let d_t: T = count(d);
    let ln = d_t * lit::<T>(2f64.ln()) + ln_gamma(d_t / lit(2.0) + T::one())
        - d_t.ln()
        - d_t / lit(2.0) * T::PI().ln();
    ln.exp()
}

/// Angle between the γ-vectors of two distributions, `arccos Σ √(p_i q_i)`.
pub fn bhattacharyya_angle<T: Scalar>(p: &ProbabilityVector<T>, q: &ProbabilityVector<T>) -> Result<T> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    let overlap: T = p.entries().iter().zip(q.entries()).map(|(&a, &b)| (a * b).sqrt()).sum();
    Ok(overlap.clamp(T::zero(), T::one()).acos().clamp(T::zero(), T::FRAC_PI_2()))
}

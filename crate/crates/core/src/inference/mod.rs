//! Likelihoods, posteriors and mutual-information estimators for the counts
//! produced by `N` trials of a `d`-outcome measurement.

mod geometry;
mod itilde;
mod likelihood;
mod mutual_info;
mod posterior;

pub use geometry::{
    delta_frequency, posterior_entropy_asymptote, pulled_back_radii, region_of_uncertainty, slope_compensation, Coordinates,
    UncertaintyRegion,
};
pub use itilde::{
    i_tilde_closed_form, i_tilde_empirical, i_tilde_from_entropy, itilde_offset, validate_schedule, ItildeEstimator, ItildePoint,
    ItildeResult, CONVERGENCE_TOLERANCE, DEFAULT_SCHEDULE,
};
pub use likelihood::{freq_sqrt, gaussian_log_pmf, multinomial_log_pmf, TrialCounts};
pub use mutual_info::{
    mutual_info_binary_exact, mutual_info_multinomial_mc, InnerProposal, MutualInfoEstimate, MutualInfoMethod, NestedMcConfig,
    QuadratureConfig, MIN_MC_SAMPLES,
};
pub use posterior::{posterior_density, BinaryPosterior, ParticlePosterior, Posterior, PosteriorConfig};

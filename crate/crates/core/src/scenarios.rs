//! Complex-amplitude test cases: SIC measurements, and Bell experiments with
//! SU(2) (which reaches the optimal measure) and SU(3) (which cannot).

pub mod sic;
pub mod su2;
pub mod su3;

pub use sic::{sic_frame, sic_inaccessibility_report, sic_probs, sic_reconstruct, SicFrame, SicInaccessibilityReport};
pub use su2::{
    axis_angle_of, su2_bell_probs, su2_from_axis_angle, su2_optimality_check, v_u, AxisAngle, BellBasis2, Su2BellProbs,
    Su2OptimalityReport,
};
pub use su3::{
    extremal_unitary, footnote_inequality, footnote_random_search, footnote_sweep, gell_mann, gen_bell_basis3, su3_bell_probs,
    su3_product_bound, FootnoteSweep, GenBellBasis3, LocalSearchConfig, Su3BellProbs, Su3BoundReport, PRODUCT_BOUND,
};

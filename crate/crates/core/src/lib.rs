//! Information transfer from state preparation to measurement outcomes.
//!
//! The crate computes the mutual information between preparation parameters
//! and outcome counts, its large-`N` limit Ĩ, the optimal prior on probability
//! space, and the complex-theory scenarios (Bloch sphere, SIC measurements,
//! SU(2) and SU(3) Bell experiments) in which the optimum is or is not reached.
//!
//! Geometry and linear algebra are generic over [`Scalar`] (`f32` or `f64`);
//! the Monte Carlo and quadrature estimators run in `f64`. The aliases below
//! fix the scalar to `f64`.

pub mod dynamics;
pub mod error;
pub mod inference;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod scenarios;
pub mod statespace;
pub mod stats;

pub use error::{Error, Result};
pub use rng::RngSeed;
pub use scalar::Scalar;

pub type RealState = statespace::RealStateVector<f64>;
pub type ComplexState = statespace::ComplexStateVector<f64>;
pub type Probabilities = statespace::ProbabilityVector<f64>;
pub type Gamma = statespace::GammaVector<f64>;
pub type Bloch = statespace::BlochPoint<f64>;
pub type Preparation = statespace::PreparationAngle<f64>;
pub type Su = statespace::SpecialUnitary<f64>;
pub type Matrix = linalg::RealMat<f64>;
pub type CMatrix = linalg::ComplexMat<f64>;
pub type Generator = dynamics::AntisymmetricGenerator<f64>;
pub type Orthogonal = dynamics::OrthogonalMatrix<f64>;
pub type Frame = scenarios::sic::SicFrame<f64>;

//! Numerical toolkit for states of composite quantum systems `H_S (x) H_E`.
//!
//! Everything is finite-dimensional and dense. The numeric core is generic
//! over the real scalar ([`Real`], implemented for `f32` and `f64`); the
//! aliases below fix it to `f64`, which is what the tolerances are tuned for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod io;
pub mod liftings;
pub mod measures;
pub mod observables;
pub mod operators;
pub mod rng;
pub mod scalar;
pub mod states;
pub mod superop;
pub mod tolerance;

pub use error::{Error, Result};
pub use scalar::{Real, C};
pub use tolerance::Tolerances;

pub type Complex64 = C<f64>;
pub type ComplexMatrix = operators::Matrix<f64>;
pub type ComplexMatrix32 = operators::Matrix<f32>;
pub type HermitianOperator = operators::Hermitian<f64>;
pub type SpectralDecomposition = operators::Spectral<f64>;
pub type DensityOperator = states::Density<f64>;
pub type PureState = states::Pure<f64>;
pub type Lifting = liftings::LiftingMap<f64>;
pub type LiftingComponents = liftings::Components<f64>;
pub type AnalysisVerdict = liftings::AnalysisVerdict<f64>;
pub type ReductionMap = observables::Reduction<f64>;
pub type ReducedChannel = dynamics::Channel<f64>;
pub type UnitaryEvolution = dynamics::UnitaryEvolution<f64>;
pub type DiscreteMeasure = measures::DiscreteMeasure<f64>;
pub type ProductSpaceMeasure = measures::ProductMeasure<f64>;
pub type WeightedProjectorList = measures::ProjectorMixture<f64>;
pub type GaussianStateSampler = measures::GaussianSampler<f64>;

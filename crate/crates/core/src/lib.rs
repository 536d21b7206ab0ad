//! Classical simulator of quantum spectral sampling for log-determinants
//! and other spectral sums `Σ f(λ_j)` of sparse positive Hermitian matrices.
//!
//! The pipeline: load and rescale a matrix so its spectrum lies in
//! `[1/(2κ), 1/2]` ([`matrix`]), sample eigenvalues uniformly through a
//! phase-estimation outcome model ([`qpe`], [`sampler`]), average `f` over
//! the samples ([`estimators`]), and account for the error ([`budget`]) and
//! the quantum cost ([`resources`]). [`adaptive`] chooses the sample count
//! and pointer size from the data; [`app`] is the command-line layer.
//!
//! The analytic modules are generic over [`Real`]; the `*64` aliases below
//! fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaptive;
pub mod app;
pub mod budget;
pub mod error;
pub mod estimators;
pub mod functions;
pub mod matrix;
pub mod qpe;
pub mod resources;
pub mod rng;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ErrorBudget64 = budget::ErrorBudget<f64>;
pub type EstimateReport64 = estimators::EstimateReport<f64>;
pub type OutcomeDistribution64 = qpe::OutcomeDistribution<f64>;
pub type ResourceReport64 = resources::ResourceReport<f64>;
pub type SampleStats64 = estimators::SampleStats<f64>;
pub type SpectralFunction64 = functions::SpectralFunction<f64>;

pub type ErrorBudget32 = budget::ErrorBudget<f32>;
pub type EstimateReport32 = estimators::EstimateReport<f32>;
pub type ResourceReport32 = resources::ResourceReport<f32>;
pub type SpectralFunction32 = functions::SpectralFunction<f32>;

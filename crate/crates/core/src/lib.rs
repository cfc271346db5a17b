//! Boundary-layer correctors and vanishing-viscosity experiments for channel
//! flow with Navier friction walls.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod corrector;
pub mod diff;
pub mod error;
pub mod fd;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod jet;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = geometry::ChannelGrid<f64>;
pub type Friction = geometry::FrictionTensor<f64>;
pub type Chart = geometry::TorusChart<f64>;
pub type Field = field::VectorField<f64>;
pub type Scalar = field::ScalarField<f64>;
pub type Corrector = corrector::CorrectorField<f64>;
pub type TorusCorrector = corrector::TorusCorrectorField<f64>;
pub type State = solver::FlowState<f64>;
pub type Run = solver::Trajectory<f64>;
pub type Options = solver::SolverOptions<f64>;

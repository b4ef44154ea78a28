//! Fisher geometry of the probability simplex and the natural-gradient flow
//! of the polarization index `POL(π) = Σ πₓ²(1 − πₓ)`.
//!
//! Points are probability vectors on categories `0..=n`; the usual working
//! chart is the solid simplex `η = (π₁, …, πₙ)`.

pub mod cli;
pub mod connection;
pub mod error;
pub mod expfam;
pub mod fisher;
pub mod flow;
pub mod indices;
pub mod natgrad;
pub mod replicator;
pub mod simplex;
pub mod timeseries;

pub use error::{Error, Result};
pub use indices::{CubicIndexCoeffs, Index};
pub use natgrad::VectorField;
pub use simplex::{EtaCoords, ProjectiveCoords, SimplexPoint, TangentVector, ThetaCoords};

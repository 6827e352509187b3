//! Time-harmonic acoustics in viscous gases on separable domains.
//!
//! The crate solves the viscous model
//!
//! ```text
//! -iωρ0 v + ∇p - η Δv - η′ ∇div v = f,   -iωp + ρ0c² div v = 0,   v = 0 on walls
//! ```
//!
//! and the impedance models of order 0, 1 and 2 that replace the viscous
//! boundary layer by Wentzell-type wall conditions, in pressure and in velocity
//! form. Fields are expanded in tangential Fourier modes; each mode is solved
//! with high-order elements across the channel. A boundary-layer corrector
//! restores the no-slip condition near walls, and the analysis layer measures
//! modelling errors away from the walls.

pub mod analysis;
pub mod discretization;
pub mod error;
pub mod exact;
pub mod export;
pub mod fem1d;
pub mod frame;
pub mod geometry;
pub mod nearfield;
pub mod params;
pub mod pressure;
pub mod sample;
pub mod sources;
pub mod velocity;

pub use discretization::{Discretization, DiscretizationSpec};
pub use error::{Error, Result};
pub use frame::FrameVec;
pub use geometry::{BoundaryComponent, CutoffSpec, LocalCoords, SeparableGeometry, WallId};
pub use num_complex::Complex64 as C64;
pub use params::{CanonicalPressureCoeffs, CanonicalVelocityCoeffs, MaterialParams, ModelOrder};

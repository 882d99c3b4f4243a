//! Pseudo-spectral laboratory for the Fourier-side Navier-Stokes integral
//! equation, its nonnegative majorants (the cheap Navier-Stokes equation),
//! Gevrey-weighted estimates, and real-variable inequality audits.
//!
//! Layout:
//! - [`grid`], [`field`], [`spectral`], [`norms`], [`snapshot`]: lattice, transforms, multipliers, norms.
//! - [`majorant`]: `B0`, majorant Picard iteration, cheap-equation evolution, smallness certificates.
//! - [`mild`]: vector bilinear operator, coupled Picard with dominance, Gevrey check, time-marching solver.
//! - [`toolbox`]: maximal function, kernel domination, Hedberg, splitting identity, heat smoothing.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod majorant;
pub mod mild;
pub mod norms;
pub mod quadrature;
pub mod random;
pub mod snapshot;
pub mod spectral;
pub mod toolbox;

pub use error::{Error, Result};
pub use field::{ClampStats, MajorantField, PhysicalField, SpectralScalar, SpectralVectorField};
pub use grid::{FrequencyGrid, TimeGrid};

//! Spectral core for the two-dimensional anisotropic quasi-geostrophic
//! equation
//!
//! ```text
//! ∂ₜθ + u·∇θ + (μ|∂₁|^{2α} + ν|∂₂|^{2β})θ = 0,   u = R^⊥θ
//! ```
//!
//! on the periodic square `[0, 2π)²`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, configuration and the command line
//! live in the companion `aqg` crate.
//!
//! Module map:
//!
//! * [`grid`], [`field`], [`params`], [`spectral`]: Fourier representation,
//!   symbols, Riesz velocity, semigroup and dealiased nonlinearity.
//! * [`norms`]: Sobolev, Lebesgue, directional and Gevrey-weighted norms.
//! * [`solver`]: existence times, Duhamel operator, plain and weighted
//!   Picard iteration, the exponential-integrator marcher and restarts.
//! * [`gevrey`]: weighted-norm traces, decay-rate fits, H² smoothing,
//!   the weight-comparison chain and the (α, β) region classifier.
//! * [`lemmas`]: randomized and exhaustive checks of the functional
//!   inequalities used by the existence argument.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fft;
pub mod field;
pub mod gevrey;
pub mod grid;
pub mod lemmas;
pub mod norms;
pub mod params;
pub mod solver;
pub mod spectral;

mod math;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::GridSpec;
pub use num_complex::Complex64;
pub use params::{DissipParams, Regime};
pub use spectral::SpectralContext;

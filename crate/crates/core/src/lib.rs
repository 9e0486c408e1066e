//! Exact white-noise dynamics of two Ising-coupled spins, each damped by its
//! own Ohmic heat bath.
//!
//! The library is organized bottom-up:
//!
//! * [`model`] holds the bare physical inputs and derives the renormalized,
//!   scaled-temperature quantities the dynamics depends on.
//! * [`laplace`] evaluates the resummed kernels and the rational Laplace-space
//!   solutions for `<σz>`, `<τz>` and `<σzτz>`.
//! * [`dynamics`] turns those rational functions into time-domain trajectories
//!   (companion-matrix root finding, residues, contour inversion, spectra).
//! * [`regimes`] contains crossover detection, low-temperature expansions,
//!   incoherent relaxation rates and the spin-boson-environment reductions.
//! * [`oracle`] is an independent Lindblad integrator for the dephasing limit.
//!
//! Units: `ħ = k_B = 1`; all frequencies share one arbitrary reference unit.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod laplace;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod regimes;

pub use error::{Error, Result};
pub use laplace::{Observable, RationalLaplace};
pub use model::{derive_effective, validate_regime, DirectParams, EffectiveParams, ModelParams};
pub use num_complex::Complex64;
pub use poly::Polynomial;

pub use dynamics::{PoleDecomposition, TimeSeries};

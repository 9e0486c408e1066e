//! Regime analysis: pole-structure crossovers, low-temperature expansions,
//! incoherent relaxation rates and the reductions that treat spin `τ` with its
//! bath as an environment for spin `σ`.
//!
//! Every approximate formula here is reported next to the exact pole it
//! approximates, so its accuracy is measured rather than assumed.

mod crossover;
mod environment;
mod low_temp;
mod rates;

pub use crossover::{
    classify_poles, crossover_temperatures, symmetric_joint_quartic, Crossovers, PoleEntry, PoleStructure,
    RegimeReport,
};
pub use environment::{
    decoherence_rate, equilibrium_full_joint, fictive_single_spin, sbe_high_temp, structured_bath_spectrum,
    SbeAnalysis,
};
pub use low_temp::{low_temp_poles_joint, low_temp_poles_sigma};
pub use rates::{
    gamma_sigma, gamma_sigma_biased, gamma_sigma_kondo, gamma_sigma_locked, gamma_sigma_tau, slow_sigma_joint,
    slowest_real_rate, JointLimit, RateResult,
};

use num_complex::Complex64;
use serde::Serialize;

/// One pole with its (approximate or exact) amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub amplitude: Complex64,
}

impl PoleTerm {
    pub fn new(pole: Complex64, amplitude: f64) -> Self {
        Self {
            pole,
            amplitude: Complex64::new(amplitude, 0.0),
        }
    }
}

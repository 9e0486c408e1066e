use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::rates::RateResult;
use super::PoleTerm;
use crate::dynamics::{decompose, find_poles, PoleDecomposition};
use crate::error::{Error, Result};
use crate::laplace::{sigma_denominator, RationalLaplace};
use crate::model::EffectiveParams;
use crate::poly::Polynomial;

/// Spin `σ` driven only through its coupling to a hot spin `τ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbeAnalysis {
    /// `γτ = Δ̄2²/ϑ2`.
    pub gamma_tau: f64,
    pub rational: RationalLaplace,
    /// Leading order in `γτ`.
    pub leading: Vec<PoleTerm>,
    pub exact: PoleDecomposition,
}

/// `<σz(λ)>` for `ϑ1 = 0` and `ϑ2` large compared with every other frequency:
/// `(λ² + γτλ + v²)/(λ³ + γτλ² + (Δ1²+v²)λ + Δ1²γτ)`.
pub fn sbe_high_temp(eff: &EffectiveParams) -> Result<SbeAnalysis> {
    if eff.theta1 != 0.0 {
        return Err(Error::InvalidParameter {
            name: "theta1",
            value: eff.theta1,
            reason: "the spin-boson environment reduction has no bath on spin 1",
        });
    }
    if !(eff.theta2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta2",
            value: eff.theta2,
            reason: "must be positive",
        });
    }
    let gamma = eff.bar_delta2.powi(2) / eff.theta2;
    let (d2, v2) = (eff.bar_delta1.powi(2), eff.v * eff.v);
    let rational = RationalLaplace::new(
        Polynomial::new(vec![v2, gamma, 1.0]),
        Polynomial::new(vec![d2 * gamma, d2 + v2, gamma, 1.0]),
        false,
    );
    let w2 = v2 + d2;
    let w = w2.sqrt();
    let damping = -v2 * gamma / (2.0 * w2);
    let leading = vec![
        PoleTerm::new(Complex64::new(damping, w), d2 / (2.0 * w2)),
        PoleTerm::new(Complex64::new(damping, -w), d2 / (2.0 * w2)),
        PoleTerm::new(Complex64::new(-d2 * gamma / w2, 0.0), v2 / w2),
    ];
    let exact = decompose(&rational)?;
    Ok(SbeAnalysis {
        gamma_tau: gamma,
        rational,
        leading,
        exact,
    })
}

/// Single spin with bias `v` in an Ohmic bath of scaled temperature
/// `theta`; it shares the cubic denominator of the spin-boson environment up
/// to the `λ²` damping coefficient (`2ϑ̃` here, `γτ` there).
pub fn fictive_single_spin(delta: f64, v: f64, theta: f64) -> RationalLaplace {
    let (d2, v2) = (delta * delta, v * v);
    RationalLaplace::new(
        Polynomial::new(vec![v2 + theta * theta, 2.0 * theta, 1.0]),
        Polynomial::new(vec![d2 * theta, d2 + v2 + theta * theta, 2.0 * theta, 1.0]),
        false,
    )
}

/// Power spectrum of the effective bath that spin `τ` presents to spin `σ`:
/// a resonance of width `ϑ2` at `ω ≈ Δ̄2`.
pub fn structured_bath_spectrum(omega: f64, eff: &EffectiveParams) -> f64 {
    let d2 = eff.bar_delta2.powi(2);
    let t2 = eff.theta2;
    let w2 = omega * omega;
    2.0 * t2 / PI * eff.v * eff.v * d2 / ((d2 - w2).powi(2) + t2 * t2 * w2)
}

/// One-boson-exchange decoherence rate `π Sτ(Δ1)/4`, compared with the damping
/// of the `D1` complex pair oscillating closest to `Δ1`.
pub fn decoherence_rate(eff: &EffectiveParams) -> Result<RateResult> {
    let d1 = eff.bar_delta1;
    let rate = PI * structured_bath_spectrum(d1, eff) / 4.0;
    let exact = find_poles(&sigma_denominator(eff))?
        .into_iter()
        .filter(|z| z.im > 0.0)
        .min_by(|a, b| (a.im - d1).abs().total_cmp(&(b.im - d1).abs()))
        .map(|z| -z.re);
    Ok(RateResult::compared(rate, "one-boson-exchange", exact))
}

/// Joint equilibrium with the full thermal weights of the four eigenstates:
/// `v/(Ω̄²−δ̄²)·[Ω̄ tanh(βΩ̄/2) − δ̄ tanh(βδ̄/2)]`.
///
/// Approaches `v/(2T)` above the level splittings and `v/(Ω̄+δ̄)` at `β = ∞`.
pub fn equilibrium_full_joint(eff: &EffectiveParams, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be non-negative",
        });
    }
    let (o, d) = (eff.bar_omega, eff.bar_small_delta);
    if eff.v == 0.0 || o + d == 0.0 {
        return Ok(0.0);
    }
    let g = |x: f64| if x == 0.0 { 0.0 } else { x * (0.5 * beta * x).tanh() };
    let dg = |x: f64| {
        if beta.is_infinite() {
            return 1.0;
        }
        let h = 0.5 * beta * x;
        h.tanh() + h / h.cosh().powi(2)
    };
    let quotient = if o - d <= 1e-7 * o {
        dg(0.5 * (o + d))
    } else {
        (g(o) - g(d)) / (o - d)
    };
    Ok(eff.v / (o + d) * quotient)
}

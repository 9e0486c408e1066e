//! Bare model parameters and the derived white-noise quantities.
//!
//! The two spins `σ` (index 1) and `τ` (index 2) each couple to an Ohmic bath
//! with strength `Kζ`. In the white-noise regime the baths enter only through
//! the scaled thermal energies `ϑζ = 2πKζT`, the adiabatically renormalized
//! tunneling elements `Δ̄ζ`, and the phase factors `tan(πKζ)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bare physical inputs (`ħ = k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta1: f64,
    pub delta2: f64,
    /// Ising coupling `v` in `-(v/2) σz τz`.
    pub v: f64,
    pub k1: f64,
    pub k2: f64,
    pub temperature: f64,
    pub omega_c: f64,
    #[serde(default)]
    pub upsilon1: f64,
    #[serde(default)]
    pub upsilon2: f64,
}

impl ModelParams {
    pub fn new(delta1: f64, delta2: f64, v: f64, k1: f64, k2: f64, temperature: f64, omega_c: f64) -> Self {
        Self {
            delta1,
            delta2,
            v,
            k1,
            k2,
            temperature,
            omega_c,
            upsilon1: 0.0,
            upsilon2: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("delta1", self.delta1)?;
        positive("delta2", self.delta2)?;
        positive("omega_c", self.omega_c)?;
        finite("v", self.v)?;
        finite("upsilon1", self.upsilon1)?;
        finite("upsilon2", self.upsilon2)?;
        non_negative("temperature", self.temperature)?;
        coupling(1, self.k1)?;
        coupling(2, self.k2)?;
        Ok(())
    }
}

/// Effective white-noise parameters given directly, as used for the
/// figure-style studies where `Δ̄ = 1` sets the unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectParams {
    pub bar_delta1: f64,
    pub bar_delta2: f64,
    pub v: f64,
    pub theta1: f64,
    pub theta2: f64,
    #[serde(default)]
    pub k1: f64,
    #[serde(default)]
    pub k2: f64,
}

/// Derived quantities entering every Laplace-space expression.
///
/// Only `bar_delta*`, `theta*`, `tan_k*` and `v` are used by the kernels; the
/// eigenfrequencies are cached because most consumers need them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub theta1: f64,
    pub theta2: f64,
    pub delta_t1: f64,
    pub delta_t2: f64,
    pub bar_delta1: f64,
    pub bar_delta2: f64,
    pub tan_k1: f64,
    pub tan_k2: f64,
    pub bar_omega: f64,
    pub bar_small_delta: f64,
    pub bar_omega_plus: f64,
    pub bar_omega_minus: f64,
    pub v: f64,
    /// Physical temperature, when it is known (bare inputs, or direct inputs
    /// with a nonzero coupling).
    pub temperature: Option<f64>,
}

/// Eigenfrequencies `(Ω, δ, Ω+, Ω-)` of the undamped pair.
pub fn eigenfrequencies(delta1: f64, delta2: f64, v: f64) -> (f64, f64, f64, f64) {
    let plus = (delta1 + delta2).hypot(v);
    let minus = (delta1 - delta2).hypot(v);
    (0.5 * (plus + minus), 0.5 * (plus - minus), plus, minus)
}

/// Standard renormalized tunneling element, from `Δr^(1-K) = Δ / ωc^K`.
pub fn renormalized_tunneling(delta: f64, k: f64, omega_c: f64) -> f64 {
    if k == 0.0 {
        return delta;
    }
    (delta / omega_c.powf(k)).powf(1.0 / (1.0 - k))
}

/// Temperature-dependent tunneling element `Δζ,T`.
///
/// `Δ_T² = (2πT/Δr)^{2K} Δr² e^{-2KΥ}`. At `T = 0` the thermal dressing is
/// absent and `Δr e^{-KΥ}` is returned.
pub fn thermal_tunneling(delta: f64, k: f64, temperature: f64, omega_c: f64, upsilon: f64) -> f64 {
    if k == 0.0 {
        return delta;
    }
    let dr = renormalized_tunneling(delta, k, omega_c);
    let dressing = (-k * upsilon).exp();
    if temperature == 0.0 {
        return dr * dressing;
    }
    (2.0 * PI * temperature / dr).powf(k) * dr * dressing
}

/// Derives the effective parameters from bare inputs.
pub fn derive_effective(params: &ModelParams) -> Result<EffectiveParams> {
    params.validate()?;
    let t = params.temperature;
    let delta_t1 = thermal_tunneling(params.delta1, params.k1, t, params.omega_c, params.upsilon1);
    let delta_t2 = thermal_tunneling(params.delta2, params.k2, t, params.omega_c, params.upsilon2);
    let bar1 = delta_t1 * (PI * params.k1).cos().sqrt();
    let bar2 = delta_t2 * (PI * params.k2).cos().sqrt();
    let mut eff = EffectiveParams::assemble(
        bar1,
        bar2,
        params.v,
        2.0 * PI * params.k1 * t,
        2.0 * PI * params.k2 * t,
        (PI * params.k1).tan(),
        (PI * params.k2).tan(),
        Some(t).filter(|&t| t > 0.0),
    );
    eff.delta_t1 = delta_t1;
    eff.delta_t2 = delta_t2;
    Ok(eff)
}

impl EffectiveParams {
    pub fn derive(params: &ModelParams) -> Result<Self> {
        derive_effective(params)
    }

    /// Builds effective parameters from direct white-noise inputs.
    ///
    /// The temperature is recovered from `ϑζ = 2πKζT`; when both couplings are
    /// nonzero they must imply the same temperature.
    pub fn from_direct(d: &DirectParams) -> Result<Self> {
        non_negative("bar_delta1", d.bar_delta1)?;
        non_negative("bar_delta2", d.bar_delta2)?;
        finite("v", d.v)?;
        non_negative("theta1", d.theta1)?;
        non_negative("theta2", d.theta2)?;
        coupling(1, d.k1)?;
        coupling(2, d.k2)?;
        let t1 = (d.k1 > 0.0).then(|| d.theta1 / (2.0 * PI * d.k1));
        let t2 = (d.k2 > 0.0).then(|| d.theta2 / (2.0 * PI * d.k2));
        let temperature = match (t1, t2) {
            (Some(a), Some(b)) => {
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                    return Err(Error::InvalidParameter {
                        name: "theta2",
                        value: d.theta2,
                        reason: "theta1/K1 and theta2/K2 imply different temperatures",
                    });
                }
                Some(a)
            }
            (a, b) => a.or(b),
        };
        let mut eff = Self::assemble(
            d.bar_delta1,
            d.bar_delta2,
            d.v,
            d.theta1,
            d.theta2,
            (PI * d.k1).tan(),
            (PI * d.k2).tan(),
            temperature.filter(|&t| t > 0.0),
        );
        eff.delta_t1 = d.bar_delta1 / (PI * d.k1).cos().sqrt();
        eff.delta_t2 = d.bar_delta2 / (PI * d.k2).cos().sqrt();
        Ok(eff)
    }

    /// Low-level constructor from already renormalized quantities. No
    /// validation is performed; the `delta_t*` fields are set to `bar_delta*`.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        bar_delta1: f64,
        bar_delta2: f64,
        v: f64,
        theta1: f64,
        theta2: f64,
        tan_k1: f64,
        tan_k2: f64,
        temperature: Option<f64>,
    ) -> Self {
        let (bar_omega, bar_small_delta, bar_omega_plus, bar_omega_minus) =
            eigenfrequencies(bar_delta1, bar_delta2, v);
        Self {
            theta1,
            theta2,
            delta_t1: bar_delta1,
            delta_t2: bar_delta2,
            bar_delta1,
            bar_delta2,
            tan_k1,
            tan_k2,
            bar_omega,
            bar_small_delta,
            bar_omega_plus,
            bar_omega_minus,
            v,
            temperature,
        }
    }

    /// Symmetric system `Δ̄1 = Δ̄2 = Δ̄`, `ϑ1 = ϑ2 = ϑ` with equal phase factors.
    pub fn symmetric(bar_delta: f64, v: f64, theta: f64, tan_k: f64) -> Self {
        Self::assemble(bar_delta, bar_delta, v, theta, theta, tan_k, tan_k, None)
    }

    /// Same system with the odd-in-`v` phase factors removed (`tan(πK) → 0`):
    /// the pure dephasing limit reproduced by a Lindblad equation.
    pub fn dephasing_limit(&self) -> Self {
        Self {
            tan_k1: 0.0,
            tan_k2: 0.0,
            ..*self
        }
    }

    /// Copy with the scaled temperatures replaced, all other inputs fixed.
    pub fn with_thetas(&self, theta1: f64, theta2: f64) -> Self {
        Self {
            theta1,
            theta2,
            temperature: None,
            ..*self
        }
    }

    /// Copy with a different coupling `v`; eigenfrequencies are recomputed.
    pub fn with_coupling(&self, v: f64) -> Self {
        let mut out = Self::assemble(
            self.bar_delta1,
            self.bar_delta2,
            v,
            self.theta1,
            self.theta2,
            self.tan_k1,
            self.tan_k2,
            self.temperature,
        );
        out.delta_t1 = self.delta_t1;
        out.delta_t2 = self.delta_t2;
        out
    }

    /// Interchange of the spins (`1 ↔ 2`).
    pub fn swapped(&self) -> Self {
        Self {
            theta1: self.theta2,
            theta2: self.theta1,
            delta_t1: self.delta_t2,
            delta_t2: self.delta_t1,
            bar_delta1: self.bar_delta2,
            bar_delta2: self.bar_delta1,
            tan_k1: self.tan_k2,
            tan_k2: self.tan_k1,
            bar_small_delta: self.bar_small_delta,
            ..*self
        }
    }

    pub fn is_symmetric(&self) -> bool {
        close(self.bar_delta1, self.bar_delta2) && close(self.theta1, self.theta2) && close(self.tan_k1, self.tan_k2)
    }

    /// Largest intrinsic rate, used to size integration steps and tolerances.
    pub fn frequency_scale(&self) -> f64 {
        self.bar_omega_plus.max(self.theta1 + self.theta2).max(self.v.abs())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Advisory conditions under which the white-noise description is marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegimeWarning {
    StrongCoupling { zeta: u8, k: f64 },
    BelowWhiteNoiseTemperature { temperature: f64, omega_plus: f64 },
    NearCutoff { temperature: f64, omega_c: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegimeWarning::StrongCoupling { zeta, k } => {
                write!(f, "K exceeds 0.3 (K{zeta} = {k}); white-noise form is marginal")
            }
            RegimeWarning::BelowWhiteNoiseTemperature {
                temperature,
                omega_plus,
            } => write!(
                f,
                "T = {temperature} is below white-noise validity (T should exceed Ω̄+ = {omega_plus})"
            ),
            RegimeWarning::NearCutoff { temperature, omega_c } => {
                write!(f, "T = {temperature} is not small against the cutoff ωc = {omega_c}")
            }
        }
    }
}

/// Checks the parameter window where the white-noise correlator is
/// reliable: `K ≲ 0.3` and `Ω̄± ≲ T ≪ ωc`. Never fails.
pub fn validate_regime(params: &ModelParams) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    for (zeta, k) in [(1u8, params.k1), (2u8, params.k2)] {
        if k > 0.3 {
            out.push(RegimeWarning::StrongCoupling { zeta, k });
        }
    }
    let omega_plus = match derive_effective(params) {
        Ok(eff) => eff.bar_omega_plus,
        Err(_) => eigenfrequencies(params.delta1, params.delta2, params.v).2,
    };
    if params.temperature < omega_plus {
        out.push(RegimeWarning::BelowWhiteNoiseTemperature {
            temperature: params.temperature,
            omega_plus,
        });
    }
    if params.temperature > 0.1 * params.omega_c {
        out.push(RegimeWarning::NearCutoff {
            temperature: params.temperature,
            omega_c: params.omega_c,
        });
    }
    out
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}

fn coupling(zeta: u8, k: f64) -> Result<()> {
    if k.is_finite() && (0.0..0.5).contains(&k) {
        Ok(())
    } else {
        Err(Error::CouplingOutOfRange { zeta, k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn uncoupled_undamped_eigenfrequencies() {
        let p = ModelParams::new(1.0, 0.5, 0.0, 0.0, 0.0, 1.0, 100.0);
        let e = derive_effective(&p).unwrap();
        assert_eq!(e.bar_omega_plus, 1.5);
        assert_eq!(e.bar_omega_minus, 0.5);
        assert_eq!(e.bar_omega, 1.0);
        assert_eq!(e.bar_small_delta, 0.5);
        assert_eq!(e.theta1, 0.0);
        assert_eq!(e.tan_k1, 0.0);
    }

    #[test]
    fn coupled_eigenfrequencies() {
        let e = EffectiveParams::symmetric(1.0, 0.5, 0.0, 0.0);
        assert!(rel(e.bar_omega_plus, 4.25f64.sqrt()) < 1e-15);
        assert!(rel(e.bar_omega_minus, 0.5) < 1e-15);
    }

    #[test]
    fn thermal_tunneling_matches_high_precision_value() {
        // 40-digit evaluation of the power-law chain (mpmath).
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.05, 0.0, 2.0, 100.0);
        let e = derive_effective(&p).unwrap();
        assert!(rel(renormalized_tunneling(1.0, 0.05, 100.0), 0.784_759_970_351_461_3) < 1e-14);
        assert!(rel(e.delta_t1, 0.901_489_127_423_689_4) < 1e-14);
        assert!(rel(e.bar_delta1, 0.895_922_527_292_792_3) < 1e-14);

        let mut q = ModelParams::new(0.8, 1.0, 0.0, 0.2, 0.0, 0.7, 50.0);
        q.upsilon1 = 0.3;
        let e = derive_effective(&q).unwrap();
        assert!(rel(e.delta_t1, 0.463_333_710_310_657_4) < 1e-13);
        assert!(rel(e.bar_delta1, 0.416_747_229_328_245_8) < 1e-13);
    }

    #[test]
    fn rejects_half_coupling() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.5, 0.0, 1.0, 100.0);
        assert_eq!(derive_effective(&p), Err(Error::CouplingOutOfRange { zeta: 1, k: 0.5 }));
        let p = ModelParams::new(-1.0, 1.0, 0.0, 0.1, 0.0, 1.0, 100.0);
        assert!(matches!(derive_effective(&p), Err(Error::InvalidParameter { name: "delta1", .. })));
    }

    #[test]
    fn zero_temperature_uses_renormalized_element() {
        let p = ModelParams::new(1.0, 1.0, 0.3, 0.1, 0.1, 0.0, 100.0);
        let e = derive_effective(&p).unwrap();
        assert_eq!(e.theta1, 0.0);
        assert_eq!(e.temperature, None);
        assert!(rel(e.delta_t1, renormalized_tunneling(1.0, 0.1, 100.0)) < 1e-15);
    }

    #[test]
    fn regime_warnings() {
        let omega_plus = 2.0;
        let ok = ModelParams::new(1.0, 1.0, 0.0, 0.05, 0.05, 2.0 * omega_plus, 100.0 * omega_plus);
        // Ω̄+ after renormalization is below the bare value, so T = 2·Ω+ is safe.
        assert!(validate_regime(&ok).is_empty(), "{:?}", validate_regime(&ok));

        let strong = ModelParams { k1: 0.4, ..ok };
        let w = validate_regime(&strong);
        assert!(w.iter().any(|w| w.to_string().contains("K exceeds 0.3")));

        let cold = ModelParams { temperature: 0.0, ..ok };
        let w = validate_regime(&cold);
        assert!(w.iter().any(|w| w.to_string().contains("below white-noise validity")));

        let hot = ModelParams { temperature: 50.0, omega_c: 100.0, ..ok };
        assert!(validate_regime(&hot).iter().any(|w| matches!(w, RegimeWarning::NearCutoff { .. })));
    }

    #[test]
    fn direct_inputs_recover_temperature() {
        let d = DirectParams {
            bar_delta1: 1.0,
            bar_delta2: 1.0,
            v: 0.5,
            theta1: 0.2,
            theta2: 0.2,
            k1: 0.05,
            k2: 0.05,
        };
        let e = EffectiveParams::from_direct(&d).unwrap();
        assert!(rel(e.temperature.unwrap(), 0.2 / (2.0 * PI * 0.05)) < 1e-15);
        let bad = DirectParams { theta2: 0.3, ..d };
        assert!(EffectiveParams::from_direct(&bad).is_err());
    }

    #[test]
    fn swap_is_an_involution() {
        let e = EffectiveParams::assemble(1.0, 1.7, 0.4, 0.2, 0.9, 0.1, 0.3, None);
        assert_eq!(e.swapped().swapped(), e);
        assert_eq!(e.swapped().bar_omega_plus, e.bar_omega_plus);
    }

    proptest! {
        #[test]
        fn vieta_relations_hold(
            d1 in 0.05f64..5.0, d2 in 0.05f64..5.0, v in -5.0f64..5.0,
            k1 in 0.0f64..0.45, k2 in 0.0f64..0.45, t in 0.0f64..20.0,
        ) {
            let p = ModelParams::new(d1, d2, v, k1, k2, t, 200.0);
            let e = derive_effective(&p).unwrap();
            let (b1, b2) = (e.bar_delta1.powi(2), e.bar_delta2.powi(2));
            let s = b1 + b2 + v * v;
            let (o, d) = (e.bar_omega, e.bar_small_delta);
            let (op, om) = (e.bar_omega_plus, e.bar_omega_minus);
            prop_assert!(rel(o * o + d * d, s) < 1e-12);
            prop_assert!((o * o * d * d - b1 * b2).abs() <= 1e-12 * s * s);
            prop_assert!(rel(op * op + om * om, 2.0 * s) < 1e-12);
            prop_assert!((op * op * om * om - (s * s - 4.0 * b1 * b2)).abs() <= 1e-12 * s * s);
            prop_assert!(o >= d && d >= 0.0 && op >= om && om >= 0.0);
        }

        #[test]
        fn theta_is_linear_in_temperature(k in 0.01f64..0.45, t in 0.1f64..10.0) {
            let p = ModelParams::new(1.0, 1.0, 0.2, k, k, t, 500.0);
            let a = derive_effective(&p).unwrap();
            let b = derive_effective(&ModelParams { temperature: 2.0 * t, ..p }).unwrap();
            prop_assert!(b.theta1 > a.theta1);
            prop_assert!(rel(b.theta1, 2.0 * a.theta1) < 1e-14);
        }

        #[test]
        fn small_coupling_is_continuous(t in 0.1f64..10.0) {
            let p = ModelParams::new(1.3, 0.7, 0.2, 1e-9, 1e-9, t, 100.0);
            let e = derive_effective(&p).unwrap();
            prop_assert!(rel(e.bar_delta1, 1.3) < 1e-7);
            prop_assert!(e.tan_k1.abs() < 1e-8 && e.theta1 < 1e-7);
        }
    }
}

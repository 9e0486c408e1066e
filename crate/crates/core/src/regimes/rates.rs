use serde::Serialize;

use crate::dynamics::find_poles;
use crate::error::Result;
use crate::laplace::{joint_denominator, sigma_denominator, RationalLaplace};
use crate::model::EffectiveParams;
use crate::poly::Polynomial;

/// Relative deviation above which a rate formula is flagged as outside its
/// regime.
const ADVISORY_DEVIATION: f64 = 0.05;

/// A closed-form rate reported next to the exact pole it approximates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    pub rate: f64,
    pub regime: &'static str,
    /// Decay rate of the matching exact pole, `None` if there is none.
    pub exact: Option<f64>,
    pub relative_deviation: Option<f64>,
    pub note: String,
}

impl RateResult {
    pub(crate) fn compared(rate: f64, regime: &'static str, exact: Option<f64>) -> Self {
        let relative_deviation = exact.map(|e| (rate - e).abs() / e.abs());
        let note = match relative_deviation {
            None => "no matching exact pole; formula is outside its regime".to_string(),
            Some(d) if d > ADVISORY_DEVIATION => {
                format!("deviates from the exact pole by {:.1}%; outside its regime", 100.0 * d)
            }
            Some(d) => format!("within {:.2}% of the exact pole", 100.0 * d),
        };
        Self {
            rate,
            regime,
            exact,
            relative_deviation,
            note,
        }
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.relative_deviation.is_some_and(|d| d <= tolerance)
    }
}

/// Decay rate `−Re λ` of the slowest strictly negative real root.
pub fn slowest_real_rate(poly: &Polynomial) -> Result<Option<f64>> {
    Ok(find_poles(poly)?
        .into_iter()
        .filter(|z| z.im == 0.0 && z.re < 0.0)
        .map(|z| -z.re)
        .min_by(f64::total_cmp))
}

fn sigma_rate(rate: f64, regime: &'static str, eff: &EffectiveParams) -> Result<RateResult> {
    Ok(RateResult::compared(rate, regime, slowest_real_rate(&sigma_denominator(eff))?))
}

/// Incoherent relaxation rate of `<σz>`:
/// `γσ = Δ̄1²/(v²+ϑ1²) · (Δ̄2² + ϑ1(ϑ1+ϑ2))/(ϑ1+ϑ2)`.
pub fn gamma_sigma(eff: &EffectiveParams) -> Result<RateResult> {
    let (t1, t2, v2) = (eff.theta1, eff.theta2, eff.v * eff.v);
    let rate = eff.bar_delta1.powi(2) / (v2 + t1 * t1) * (eff.bar_delta2.powi(2) + t1 * (t1 + t2)) / (t1 + t2);
    sigma_rate(rate, "incoherent", eff)
}

/// `Δ̄1²/ϑ1`, the limit `ϑ1 ≫ v, Δ̄2`.
pub fn gamma_sigma_kondo(eff: &EffectiveParams) -> Result<RateResult> {
    sigma_rate(eff.bar_delta1.powi(2) / eff.theta1, "kondo", eff)
}

/// `Δ̄1²ϑ1/v²`, the limit `v ≫ ϑ1` with the second spin fast.
pub fn gamma_sigma_biased(eff: &EffectiveParams) -> Result<RateResult> {
    sigma_rate(eff.bar_delta1.powi(2) * eff.theta1 / (eff.v * eff.v), "biased", eff)
}

/// `δ̄²/(ϑ1+ϑ2)`: both spins flip together with tunneling `δ̄ = Δ̄1Δ̄2/v`.
pub fn gamma_sigma_locked(eff: &EffectiveParams) -> Result<RateResult> {
    sigma_rate(eff.bar_small_delta.powi(2) / (eff.theta1 + eff.theta2), "locked", eff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JointLimit {
    /// `v ≫ Δ̄ζ, ϑζ`.
    LargeCoupling,
    /// `ϑζ ≫ v, Δ̄ζ`.
    HighTemperature,
}

/// Incoherent relaxation rate of `<σzτz>` in one of its two limits, checked
/// against the slowest real root of the sextic.
pub fn gamma_sigma_tau(eff: &EffectiveParams, limit: JointLimit) -> Result<RateResult> {
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    let (rate, regime) = match limit {
        JointLimit::LargeCoupling => ((d1 * eff.theta1 + d2 * eff.theta2) / (eff.v * eff.v), "large-coupling"),
        JointLimit::HighTemperature => (d1 / eff.theta1 + d2 / eff.theta2, "high-temperature"),
    };
    Ok(RateResult::compared(rate, regime, slowest_real_rate(&joint_denominator(eff))?))
}

/// Reduced `<σzτz>` when spin `σ` relaxes at rate `gamma` much faster than the
/// rest of the dynamics; a cubic denominator remains.
///
/// At `gamma = 0` this is the single-spin `<τz>` in the static bias `v`.
pub fn slow_sigma_joint(eff: &EffectiveParams, gamma: f64) -> RationalLaplace {
    let (t2, v) = (eff.theta2, eff.v);
    let d2 = eff.bar_delta2.powi(2);
    let numerator = Polynomial::new(vec![eff.tan_k2 * v * d2, v * v + t2 * t2, 2.0 * t2, 1.0]);
    let denominator = Polynomial::new(vec![
        d2 * t2 + gamma * (v * v + t2 * t2),
        d2 + v * v + t2 * t2 + 3.0 * gamma * t2,
        2.0 * (t2 + gamma),
        1.0,
    ]);
    RationalLaplace::new(numerator, denominator, true)
}

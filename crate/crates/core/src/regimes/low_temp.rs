use num_complex::Complex64;

use super::PoleTerm;
use crate::error::Result;
use crate::laplace::static_equilibrium_joint;
use crate::model::EffectiveParams;

/// First-order (in `ϑ1`, `ϑ2`) poles and leading amplitudes of `<σz>`.
///
/// Meaningful for `ϑ ≪ Ω̄ − δ̄`; nothing is enforced.
pub fn low_temp_poles_sigma(eff: &EffectiveParams) -> Vec<PoleTerm> {
    let (o2, s2) = (eff.bar_omega.powi(2), eff.bar_small_delta.powi(2));
    let (d1, d2, v2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2), eff.v * eff.v);
    let (t1, t2) = (eff.theta1, eff.theta2);
    let gap = o2 - s2;
    let den = 2.0 * gap;
    let slow_rate = (o2 + d1 - 2.0 * s2) / den * t1 + (o2 - d2) / den * t2;
    let fast_rate = (2.0 * o2 - s2 - d1) / den * t1 + (d2 - s2) / den * t2;
    let a_slow = 0.5 * (d2 + v2 - s2) / gap;
    let a_fast = 0.5 * (o2 - v2 - d2) / gap;
    vec![
        PoleTerm::new(Complex64::new(-slow_rate, eff.bar_small_delta), a_slow),
        PoleTerm::new(Complex64::new(-slow_rate, -eff.bar_small_delta), a_slow),
        PoleTerm::new(Complex64::new(-fast_rate, eff.bar_omega), a_fast),
        PoleTerm::new(Complex64::new(-fast_rate, -eff.bar_omega), a_fast),
    ]
}

/// First-order poles and leading amplitudes of `<σzτz>`.
///
/// The two relaxation amplitudes involve the equilibrium value; the exact
/// static limit of the joint transform is used for it.
pub fn low_temp_poles_joint(eff: &EffectiveParams) -> Result<Vec<PoleTerm>> {
    let (o2, s2) = (eff.bar_omega.powi(2), eff.bar_small_delta.powi(2));
    let (d1, d2, v2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2), eff.v * eff.v);
    let (t1, t2) = (eff.theta1, eff.theta2);
    let gap = o2 - s2;
    let half = 0.5 * (t1 + t2);
    let (op, om) = (eff.bar_omega_plus, eff.bar_omega_minus);
    let lambda5 = -((o2 - d1) / gap * t1 + (o2 - d2) / gap * t2);
    let lambda6 = -((d1 - s2) / gap * t1 + (d2 - s2) / gap * t2);
    let eq = static_equilibrium_joint(eff)?;
    let b12 = 0.25 * (1.0 - v2 / (op * op));
    let b34 = 0.25 * (1.0 - v2 / (om * om));
    let b5 = v2 * s2 / (gap * gap) + s2 * eq / gap;
    let b6 = v2 * o2 / (gap * gap) - o2 * eq / gap;
    Ok(vec![
        PoleTerm::new(Complex64::new(-half, op), b12),
        PoleTerm::new(Complex64::new(-half, -op), b12),
        PoleTerm::new(Complex64::new(-half, om), b34),
        PoleTerm::new(Complex64::new(-half, -om), b34),
        PoleTerm::new(Complex64::new(lambda5, 0.0), b5),
        PoleTerm::new(Complex64::new(lambda6, 0.0), b6),
    ])
}

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{decompose, find_poles};
use crate::error::{Error, Result};
use crate::laplace::{sigma_denominator, sigma_z_rational};
use crate::model::EffectiveParams;
use crate::poly::Polynomial;

/// Pole arrangement of `<σz>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleStructure {
    /// Two complex pairs with distinct frequencies.
    TwoOscillations,
    /// Two complex pairs sharing one frequency, with different decrements.
    OneOscillationSplitDecrements,
    /// Four real poles.
    IncoherentFourReal,
    /// Two real poles and one complex pair; the slow real pole dominates.
    Kondo,
}

impl fmt::Display for PoleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleStructure::TwoOscillations => "two-oscillations",
            PoleStructure::OneOscillationSplitDecrements => "one-oscillation-split-decrements",
            PoleStructure::IncoherentFourReal => "incoherent-four-real",
            PoleStructure::Kondo => "kondo",
        })
    }
}

/// Crossover values of the scaled temperature `ϑ` for a symmetric system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Crossovers {
    /// `v < Δ̄/√2`: frequencies merge at `ϑ0*`, poles turn real at `ϑ1*`, the
    /// Kondo arrangement sets in at `ϑ2*` (absent for `v = 0`).
    Three {
        theta0: f64,
        theta1: f64,
        theta2: Option<f64>,
    },
    /// `v > Δ̄/√2`: one transition straight into the Kondo arrangement.
    Single { theta: f64 },
}

impl Crossovers {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Crossovers::Three {
                theta0,
                theta1,
                theta2,
            } => [Some(theta0), Some(theta1), theta2].into_iter().flatten().collect(),
            Crossovers::Single { theta } => vec![theta],
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Crossovers::Single { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleEntry {
    pub pole: Complex64,
    /// `None` when the poles are too close for the residue formula.
    pub amplitude: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    /// Scaled temperature at which the classification and pole table apply.
    pub theta: f64,
    pub classification: PoleStructure,
    pub crossovers: Crossovers,
    pub single_crossover: bool,
    pub v_critical: f64,
    pub pole_table: Vec<PoleEntry>,
}

/// Classifies four poles of `D1` by their arrangement.
pub fn classify_poles(poles: &[Complex64]) -> PoleStructure {
    let real = poles.iter().filter(|z| z.im == 0.0).count();
    let upper: Vec<_> = poles.iter().filter(|z| z.im > 0.0).collect();
    match (real, upper.as_slice()) {
        (0, [a, b]) => {
            if (a.im - b.im).abs() <= (a.re - b.re).abs() {
                PoleStructure::OneOscillationSplitDecrements
            } else {
                PoleStructure::TwoOscillations
            }
        }
        (r, _) if r >= 4 => PoleStructure::IncoherentFourReal,
        _ => PoleStructure::Kondo,
    }
}

/// Crossover analysis of `<σz>` for a symmetric system at the probe
/// temperature `eff.theta1`.
///
/// `D1(x − ϑ)` is biquadratic, `x⁴ + p·x² + q`, when both spins are equal. The
/// pole structure changes where `p² − 4q` or `q` changes sign; both are
/// evaluated from the numerically shifted `D1` over a logarithmic `ϑ` grid and
/// refined by bisection to `1e-9·Δ̄`.
pub fn crossover_temperatures(eff: &EffectiveParams) -> Result<RegimeReport> {
    if !eff.is_symmetric() {
        return Err(Error::AsymmetricSystem);
    }
    let bar = eff.bar_delta1;
    if !(bar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "bar_delta",
            value: bar,
            reason: "crossover analysis needs a nonzero tunneling element",
        });
    }
    let v = eff.v.abs();
    let biquad = |theta: f64| -> (f64, f64) {
        let shifted = sigma_denominator(&eff.with_thetas(theta, theta)).shift(-theta);
        let (p, q) = (shifted.coeff(2), shifted.coeff(0));
        (p * p - 4.0 * q, q)
    };
    let disc = |theta: f64| biquad(theta).0;
    let konst = |theta: f64| biquad(theta).1;

    let lo = 1e-6 * bar;
    let hi = if v > 0.0 { 1e2 * bar * (bar / v).max(1.0) } else { 1e3 * bar };
    let grid = log_grid(lo, hi, 2000);
    let tol = 1e-9 * bar;
    let disc_roots = sign_changes(&grid, &disc, tol);
    let q_roots = sign_changes(&grid, &konst, tol);

    let crossovers = match (disc_roots.as_slice(), q_roots.first().copied()) {
        ([a, b], theta2) => Crossovers::Three {
            theta0: *a,
            theta1: *b,
            theta2,
        },
        ([b], theta2) if disc(lo) <= 0.0 => Crossovers::Three {
            theta0: 0.0,
            theta1: *b,
            theta2,
        },
        (_, Some(theta)) => Crossovers::Single { theta },
        _ => return Err(Error::RootFindingFailed),
    };

    let rat = sigma_z_rational(eff);
    let poles = find_poles(&rat.denominator)?;
    let pole_table = match decompose(&rat) {
        Ok(dec) => dec
            .poles
            .iter()
            .zip(&dec.amplitudes)
            .map(|(&pole, &a)| PoleEntry {
                pole,
                amplitude: Some(a),
            })
            .collect(),
        Err(_) => poles.iter().map(|&pole| PoleEntry { pole, amplitude: None }).collect(),
    };
    Ok(RegimeReport {
        theta: eff.theta1,
        classification: classify_poles(&poles),
        single_crossover: crossovers.is_single(),
        crossovers,
        v_critical: bar / std::f64::consts::SQRT_2,
        pole_table,
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

fn sign_changes(grid: &[f64], f: &dyn Fn(f64) -> f64, tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev = (grid[0], f(grid[0]));
    for &x in &grid[1..] {
        let fx = f(x);
        if (prev.1 > 0.0) != (fx > 0.0) {
            out.push(bisect(f, prev.0, x, prev.1 > 0.0, tol));
        }
        prev = (x, fx);
    }
    out
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, positive_at_a: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == positive_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Reduced quartic of `<σzτz>` for a symmetric system; its roots are the poles
/// left after the cancellation of the pair `−ϑ ± iv` from the sextic.
pub fn symmetric_joint_quartic(eff: &EffectiveParams) -> Result<Polynomial> {
    if !eff.is_symmetric() {
        return Err(Error::AsymmetricSystem);
    }
    let theta = eff.theta1;
    let d2 = eff.bar_delta1.powi(2);
    let omega_plus2 = 4.0 * d2 + eff.v * eff.v;
    Ok(Polynomial::new(vec![
        4.0 * theta * theta * d2,
        2.0 * theta * (omega_plus2 + theta * theta),
        omega_plus2 + 5.0 * theta * theta,
        4.0 * theta,
        1.0,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Closed-form oracle: with s = ϑ², p = 2Δ̄² + v² − s and q = Δ̄⁴ − v²s, the
    // discriminant vanishes at s± = 2Δ̄² − v² ± 2Δ̄√(Δ̄² − 2v²) and q at s = Δ̄⁴/v².
    fn closed_form(bar: f64, v: f64) -> (f64, f64, f64) {
        let r = 2.0 * bar * (bar * bar - 2.0 * v * v).sqrt();
        let base = 2.0 * bar * bar - v * v;
        ((base - r).sqrt(), (base + r).sqrt(), bar * bar / v)
    }

    #[test]
    fn three_crossovers_below_critical_coupling() {
        let eff = EffectiveParams::symmetric(1.0, 0.5, 0.2, 0.0);
        let report = crossover_temperatures(&eff).unwrap();
        let (t0, t1, t2) = closed_form(1.0, 0.5);
        match report.crossovers {
            Crossovers::Three {
                theta0,
                theta1,
                theta2,
            } => {
                assert!((theta0 - t0).abs() < 1e-8, "{theta0} vs {t0}");
                assert!((theta1 - t1).abs() < 1e-8);
                assert!((theta2.unwrap() - t2).abs() < 1e-8);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(report.classification, PoleStructure::TwoOscillations);
        assert_eq!(report.pole_table.len(), 4);
        assert!((report.v_critical - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_crossover_above_critical_coupling() {
        let eff = EffectiveParams::symmetric(1.0, 0.8, 0.2, 0.0);
        let report = crossover_temperatures(&eff).unwrap();
        assert!(report.single_crossover);
        assert_eq!(report.crossovers.values().len(), 1);
        assert!((report.crossovers.values()[0] - 1.25).abs() < 1e-8);
    }

    #[test]
    fn decoupled_limit() {
        let eff = EffectiveParams::symmetric(1.0, 0.0, 0.2, 0.0);
        let report = crossover_temperatures(&eff).unwrap();
        assert_eq!(
            report.crossovers,
            Crossovers::Three {
                theta0: 0.0,
                theta1: report.crossovers.values()[1],
                theta2: None
            }
        );
        assert!((report.crossovers.values()[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn classification_follows_the_narrative() {
        let cases = [
            (0.2, PoleStructure::TwoOscillations),
            (1.2, PoleStructure::OneOscillationSplitDecrements),
            (1.9, PoleStructure::IncoherentFourReal),
            (20.0, PoleStructure::Kondo),
        ];
        for (theta, expect) in cases {
            let eff = EffectiveParams::symmetric(1.0, 0.5, theta, 0.0);
            let poles = find_poles(&sigma_denominator(&eff)).unwrap();
            assert_eq!(classify_poles(&poles), expect, "ϑ = {theta}");
        }
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let eff = EffectiveParams::assemble(1.0, 1.2, 0.5, 0.2, 0.2, 0.0, 0.0, None);
        assert_eq!(crossover_temperatures(&eff), Err(Error::AsymmetricSystem));
        assert_eq!(symmetric_joint_quartic(&eff), Err(Error::AsymmetricSystem));
    }

    #[test]
    fn quartic_at_zero_temperature() {
        let eff = EffectiveParams::symmetric(1.0, 0.5, 0.0, 0.0);
        let q = symmetric_joint_quartic(&eff).unwrap();
        assert_eq!(q.coeffs(), &[0.0, 0.0, 4.25, 0.0, 1.0]);
    }
}

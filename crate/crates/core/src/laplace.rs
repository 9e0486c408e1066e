//! Laplace-space solutions for `<σz>`, `<τz>` and `<σzτz>`.
//!
//! Two representations are provided. The kernel forms
//! `(1/λ)(1 + K⁻/λ)/(1 − K⁺/λ)` are closed-form resummations of the
//! irreducible path segments; the rational forms `N/(λ·D)` are the same
//! functions as ratios of real polynomials and are what the time-domain code
//! consumes. The kernel forms are kept for cross-validation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EffectiveParams;
use crate::poly::Polynomial;

/// The three population observables with closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    SigmaZ,
    TauZ,
    SigmaZTauZ,
}

impl Observable {
    pub const ALL: [Observable; 3] = [Observable::SigmaZ, Observable::TauZ, Observable::SigmaZTauZ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::SigmaZ => "sigma_z",
            Observable::TauZ => "tau_z",
            Observable::SigmaZTauZ => "sigma_z_tau_z",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sigma_z" | "sz" => Ok(Observable::SigmaZ),
            "tau_z" | "tz" => Ok(Observable::TauZ),
            "sigma_z_tau_z" | "sztz" | "joint" => Ok(Observable::SigmaZTauZ),
            _ => Err(format!("unknown observable `{s}` (expected sigma_z, tau_z or sigma_z_tau_z)")),
        }
    }
}

/// `N(λ) / (λ^f · D(λ))` with `f = 1` when `over_lambda` is set.
///
/// The equilibrium pole at `λ = 0` is carried by the flag rather than folded
/// into `D`, so root finders only ever see the dynamical denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalLaplace {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub over_lambda: bool,
}

impl RationalLaplace {
    pub fn new(numerator: Polynomial, denominator: Polynomial, over_lambda: bool) -> Self {
        Self {
            numerator,
            denominator,
            over_lambda,
        }
    }

    /// Denominator including the explicit `λ` factor.
    pub fn full_denominator(&self) -> Polynomial {
        if self.over_lambda {
            &self.denominator * &Polynomial::x()
        } else {
            self.denominator.clone()
        }
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.numerator.is_zero() || self.numerator.degree() < self.full_denominator().degree()
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let mut den = self.denominator.eval_complex(lambda);
        if self.over_lambda {
            den *= lambda;
        }
        let value = self.numerator.eval_complex(lambda) / den;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::EvaluationFailure {
                re: lambda.re,
                im: lambda.im,
            })
        }
    }

    /// Cancels powers of `λ` common to numerator and denominator. Only exact
    /// zero coefficients are removed.
    pub fn cancel_zero_roots(&self) -> RationalLaplace {
        let zeros = |p: &Polynomial| p.coeffs().iter().take_while(|&&c| c == 0.0).count();
        if self.numerator.is_zero() {
            return self.clone();
        }
        let num_zeros = zeros(&self.numerator);
        let den_zeros = zeros(&self.denominator) + usize::from(self.over_lambda);
        let k = num_zeros.min(den_zeros);
        if k == 0 {
            return self.clone();
        }
        // the denominator's own zeros go first so the equilibrium flag survives
        let from_den = k.min(zeros(&self.denominator));
        let over_lambda = self.over_lambda && from_den == k;
        RationalLaplace::new(
            Polynomial::new(self.numerator.coeffs()[k..].to_vec()),
            Polynomial::new(self.denominator.coeffs()[from_den..].to_vec()),
            over_lambda,
        )
    }

    /// `lim_{λ→∞} λ·F(λ)`, the value of the time-domain function at `t = 0⁺`.
    pub fn initial_value(&self) -> f64 {
        let den = self.full_denominator();
        if self.numerator.is_zero() || self.numerator.degree() + 1 < den.degree() {
            0.0
        } else if self.numerator.degree() + 1 == den.degree() {
            self.numerator.leading() / den.leading()
        } else {
            f64::INFINITY
        }
    }
}

fn finite(value: Complex64, lambda: Complex64) -> Result<Complex64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::EvaluationFailure {
            re: lambda.re,
            im: lambda.im,
        })
    }
}

/// Even-in-`v` kernel `K⁺(λ)` of the `σ` populations.
pub fn kernel_even_sigma(lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (d1, d2, v) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2), eff.v);
    let a1 = lambda + eff.theta1;
    let b = a1 + eff.theta2;
    let q = a1 * a1 + v * v;
    let inner = v * v / (a1 * b) * d2 / (q + a1 / b * d2);
    finite(-d1 * a1 / q * (1.0 + inner), lambda)
}

/// Odd-in-`v` kernel `K⁻(λ)`, proportional to `tan(πK1)·v`.
pub fn kernel_odd_sigma(lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (d1, d2, v) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2), eff.v);
    let a1 = lambda + eff.theta1;
    let b = a1 + eff.theta2;
    let q = a1 * a1 + v * v;
    let inner = a1 / b * d2 / (q + a1 / b * d2);
    finite(eff.tan_k1 * d1 * v / q * (1.0 - inner), lambda)
}

/// Self-energy factor `αζ(λ)` of the nested joint diagrams (`zeta` is 1 or 2).
pub fn alpha(zeta: u8, lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (own, other, theta) = match zeta {
        1 => (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2), eff.theta1),
        2 => (eff.bar_delta2.powi(2), eff.bar_delta1.powi(2), eff.theta2),
        _ => {
            return Err(Error::InvalidParameter {
                name: "zeta",
                value: zeta as f64,
                reason: "spin index must be 1 or 2",
            })
        }
    };
    let a = lambda + theta;
    let b = lambda + eff.theta1 + eff.theta2;
    let ratio = a / b;
    finite(ratio * own / (a * a + eff.v * eff.v + ratio * other), lambda)
}

fn alphas(lambda: Complex64, eff: &EffectiveParams) -> Result<(Complex64, Complex64, Complex64)> {
    let a1 = alpha(1, lambda, eff)?;
    let a2 = alpha(2, lambda, eff)?;
    let geometric = 1.0 - a1 * a2;
    if geometric.norm() == 0.0 {
        return Err(Error::EvaluationFailure {
            re: lambda.re,
            im: lambda.im,
        });
    }
    Ok((a1, a2, geometric))
}

/// Even-in-`v` joint kernel `C⁺(λ)`.
pub fn kernel_even_joint(lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (a1, a2, geometric) = alphas(lambda, eff)?;
    let b = lambda + eff.theta1 + eff.theta2;
    finite(-b * (a1 + a2 - 2.0 * a1 * a2) / geometric, lambda)
}

/// Odd-in-`v` joint kernel `C⁻(λ)`.
pub fn kernel_odd_joint(lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (a1, a2, geometric) = alphas(lambda, eff)?;
    let b = lambda + eff.theta1 + eff.theta2;
    let prod = a1 * a2;
    let term1 = eff.v / (lambda + eff.theta1) * eff.tan_k1 * (a1 - prod);
    let term2 = eff.v / (lambda + eff.theta2) * eff.tan_k2 * (a2 - prod);
    finite(b * (term1 + term2) / geometric, lambda)
}

/// Kernel form `(1/λ)(1 + K⁻/λ)/(1 − K⁺/λ)` of an observable.
pub fn kernel_form(observable: Observable, lambda: Complex64, eff: &EffectiveParams) -> Result<Complex64> {
    let (even, odd) = match observable {
        Observable::SigmaZ => (kernel_even_sigma(lambda, eff)?, kernel_odd_sigma(lambda, eff)?),
        Observable::TauZ => {
            let s = eff.swapped();
            (kernel_even_sigma(lambda, &s)?, kernel_odd_sigma(lambda, &s)?)
        }
        Observable::SigmaZTauZ => (kernel_even_joint(lambda, eff)?, kernel_odd_joint(lambda, eff)?),
    };
    finite((lambda + odd) / (lambda * (lambda - even)), lambda)
}

/// Quartic pole polynomial `D1(λ)` of `<σz>`.
pub fn sigma_denominator(eff: &EffectiveParams) -> Polynomial {
    let (t1, t2, v2) = (eff.theta1, eff.theta2, eff.v * eff.v);
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    // Ω̄² + δ̄² and Ω̄²δ̄² through the Vieta relations
    let sum = d1 + d2 + v2;
    let prod = d1 * d2;
    Polynomial::new(vec![
        d1 * t1 * t1 + d1 * t1 * t2 + prod,
        v2 * t1 + 2.0 * d1 * t1 + d2 * t1 + t1.powi(3) + v2 * t2 + d1 * t2 + t1 * t1 * t2,
        sum + 3.0 * t1 * t1 + 2.0 * t1 * t2,
        3.0 * t1 + t2,
        1.0,
    ])
}

/// Quartic numerator `N1(λ)` of `<σz>`.
///
/// The phase term is `v·Δ̄1²·tan(πK1)·(ϑ1 + ϑ2 + λ)`, which is what the
/// resummation of the kernels yields.
pub fn sigma_numerator(eff: &EffectiveParams) -> Polynomial {
    let (t1, t2, v2) = (eff.theta1, eff.theta2, eff.v * eff.v);
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    let phase = eff.v * d1 * eff.tan_k1;
    Polynomial::new(vec![
        phase * (t1 + t2),
        v2 * t1 + d2 * t1 + t1.powi(3) + v2 * t2 + t1 * t1 * t2 + phase,
        v2 + d2 + 3.0 * t1 * t1 + 2.0 * t1 * t2,
        3.0 * t1 + t2,
        1.0,
    ])
}

/// `<σz(λ)> = N1/(λ·D1)`.
pub fn sigma_z_rational(eff: &EffectiveParams) -> RationalLaplace {
    RationalLaplace::new(sigma_numerator(eff), sigma_denominator(eff), true)
}

/// `<τz(λ)> = N2/(λ·D2)`, the `σz` form with spins interchanged.
pub fn tau_z_rational(eff: &EffectiveParams) -> RationalLaplace {
    sigma_z_rational(&eff.swapped())
}

/// Sextic pole polynomial `D(λ)` of `<σzτz>`.
pub fn joint_denominator(eff: &EffectiveParams) -> Polynomial {
    let (t1, t2, v2) = (eff.theta1, eff.theta2, eff.v * eff.v);
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    let s = d1 + d2 + v2;
    // Ω̄+² + Ω̄−² and Ω̄+²Ω̄−²
    let sum = 2.0 * s;
    let prod = s * s - 4.0 * d1 * d2;
    let ts = t1 + t2;
    Polynomial::new(vec![
        v2 * ts * (d1 * t1 + d2 * t2) + t1 * t2 * ((d1 - d2).powi(2) + (d2 * t1 + d1 * t2) * ts),
        ts * (prod + t1 * t1 * t2 * t2 + (v2 + d2) * t1 * t1 + (v2 + d1) * t2 * t2 + 3.0 * t1 * t2 * (d1 + d2)),
        prod + t1 * t2 * (2.0 * t1 + t2) * (t1 + 2.0 * t2)
            + v2 * (3.0 * t1 * t1 + 4.0 * t1 * t2 + 3.0 * t2 * t2)
            + d1 * (2.0 * t1 + t2) * (t1 + 3.0 * t2)
            + d2 * (2.0 * t2 + t1) * (t2 + 3.0 * t1),
        ts * (2.0 * sum + t1 * t1 + 6.0 * t1 * t2 + t2 * t2),
        sum + 3.0 * t1 * t1 + 8.0 * t1 * t2 + 3.0 * t2 * t2,
        3.0 * ts,
        1.0,
    ])
}

/// Sextic numerator `N(λ)` of `<σzτz>`.
pub fn joint_numerator(eff: &EffectiveParams) -> Polynomial {
    let (t1, t2, v) = (eff.theta1, eff.theta2, eff.v);
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    let lam = Polynomial::x();
    let a1 = Polynomial::linear(t1);
    let a2 = Polynomial::linear(t2);
    let b = Polynomial::linear(t1 + t2);
    let c = Polynomial::constant;

    let odd = b.scale(v.powi(3) * (eff.tan_k1 * d1 + eff.tan_k2 * d2))
        + (&a2 * &(c(d1 - d2) + &a2 * &b)).scale(v * eff.tan_k1 * d1)
        + (&a1 * &(c(d2 - d1) + &a1 * &b)).scale(v * eff.tan_k2 * d2);
    let even = b.scale(v.powi(4))
        + (a1.scale(d2) + a2.scale(d1)).scale(v * v)
        + (&b * &(c(t1 * t1 + t2 * t2) + (&lam * &b).scale(2.0))).scale(v * v)
        + &(&a1 * &a2) * &(a1.scale(d1) + a2.scale(d2))
        + &(&a1 * &a1) * &(&(&a2 * &a2) * &b);
    odd + &lam * &even
}

/// `<σzτz(λ)> = N/(λ·D)`.
pub fn joint_rational(eff: &EffectiveParams) -> RationalLaplace {
    RationalLaplace::new(joint_numerator(eff), joint_denominator(eff), true)
}

/// Rational form of any observable.
pub fn rational(observable: Observable, eff: &EffectiveParams) -> RationalLaplace {
    match observable {
        Observable::SigmaZ => sigma_z_rational(eff),
        Observable::TauZ => tau_z_rational(eff),
        Observable::SigmaZTauZ => joint_rational(eff),
    }
}

/// Even polynomial `D̃(x) = D(x − (ϑ1 + ϑ2)/2)` written out in closed form.
pub fn shifted_joint_denominator(eff: &EffectiveParams) -> Polynomial {
    let (t1, t2, v2) = (eff.theta1, eff.theta2, eff.v * eff.v);
    let (d1, d2) = (eff.bar_delta1.powi(2), eff.bar_delta2.powi(2));
    let s = d1 + d2 + v2;
    let sum = 2.0 * s;
    let prod = s * s - 4.0 * d1 * d2;
    let dt = t1 - t2;
    let x4 = sum - 0.5 * (t1 * t1 + t2 * t2) - 0.25 * dt * dt;
    let x2 = prod + (d1 + d2 - 2.0 * v2) * t1 * t2 - d1 * t1 * t1 - d2 * t2 * t2
        + dt * dt * (3.0 * t1 * t1 + 2.0 * t1 * t2 + 3.0 * t2 * t2) / 16.0;
    let inner = v2 * (t1 + t2) + (d1 - d2) * (t2 - t1) + 0.25 * (t1 * t1 - t2 * t2) * dt;
    Polynomial::new(vec![-0.25 * inner * inner, 0.0, x2, 0.0, x4, 0.0, 1.0])
}

fn known_temperature(eff: &EffectiveParams) -> Result<f64> {
    match eff.temperature {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(Error::ZeroTemperature),
    }
}

/// White-noise equilibrium `<σz>_eq = (v/2T)·ϑ1(ϑ1+ϑ2)/(Δ̄2² + ϑ1(ϑ1+ϑ2))`.
///
/// This is the `λ → 0` kernel ratio with `tan(πK1)` replaced by `πK1`;
/// [`static_equilibrium_sigma`] keeps the full phase factor.
pub fn equilibrium_sigma(eff: &EffectiveParams) -> Result<f64> {
    let t = known_temperature(eff)?;
    let x = eff.theta1 * (eff.theta1 + eff.theta2);
    let d2 = eff.bar_delta2.powi(2);
    let factor = if x + d2 == 0.0 { 1.0 } else { x / (d2 + x) };
    Ok(eff.v / (2.0 * t) * factor)
}

/// White-noise equilibrium `<σzτz>_eq = v/(2T)`.
pub fn equilibrium_joint(eff: &EffectiveParams) -> Result<f64> {
    let t = known_temperature(eff)?;
    Ok(eff.v / (2.0 * t))
}

/// Residue of the `1/λ` pole of `<σz(λ)>`: `N1(0)/D1(0) = −K⁻(0)/K⁺(0)`.
pub fn static_equilibrium_sigma(eff: &EffectiveParams) -> Result<f64> {
    static_value(&sigma_z_rational(eff))
}

/// Residue of the `1/λ` pole of `<σzτz(λ)>`: `N(0)/D(0) = −C⁻(0)/C⁺(0)`.
pub fn static_equilibrium_joint(eff: &EffectiveParams) -> Result<f64> {
    static_value(&joint_rational(eff))
}

fn static_value(rat: &RationalLaplace) -> Result<f64> {
    let d0 = rat.denominator.coeff(0);
    let value = rat.numerator.coeff(0) / d0;
    if d0 == 0.0 || !value.is_finite() {
        return Err(Error::EvaluationFailure { re: 0.0, im: 0.0 });
    }
    Ok(value)
}

/// Undamped solutions with bare tunneling elements.
pub fn free_laplace(observable: Observable, delta1: f64, delta2: f64, v: f64) -> RationalLaplace {
    let (d1, d2, v2) = (delta1 * delta1, delta2 * delta2, v * v);
    let s = d1 + d2 + v2;
    // (λ²+Ω²)(λ²+δ²) and (λ²+Ω+²)(λ²+Ω−²)
    let sigma_den = Polynomial::new(vec![d1 * d2, 0.0, s, 0.0, 1.0]);
    match observable {
        Observable::SigmaZ => RationalLaplace::new(Polynomial::new(vec![0.0, v2 + d2, 0.0, 1.0]), sigma_den, false),
        Observable::TauZ => RationalLaplace::new(Polynomial::new(vec![0.0, v2 + d1, 0.0, 1.0]), sigma_den, false),
        Observable::SigmaZTauZ => {
            let num = Polynomial::new(vec![v2, 0.0, 1.0]) * Polynomial::new(vec![s, 0.0, 1.0]);
            let den = Polynomial::new(vec![s * s - 4.0 * d1 * d2, 0.0, 2.0 * s, 0.0, 1.0]);
            RationalLaplace::new(num, den, true)
        }
    }
}

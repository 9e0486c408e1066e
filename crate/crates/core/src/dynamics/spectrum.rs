use num_complex::Complex64;
use serde::Serialize;

use super::{check_grid, find_poles};
use crate::error::{Error, Result};
use crate::laplace::RationalLaplace;
use crate::poly::Polynomial;

/// Fourier-domain profile `S(ω) = Re F(λ = −iω)`.
///
/// With the `1/λ` flag set, the equilibrium pole is removed first: the
/// stationary part contributes only `δ(ω)` to the real part and is not
/// sampled. `S(0)` is then the finite limit `(N − f_eq·D)'(0)/D(0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub equilibrium: f64,
}

pub fn spectrum(rat: &RationalLaplace, omegas: &[f64]) -> Result<Spectrum> {
    check_grid(omegas)?;
    let poles = find_poles(&rat.denominator)?;
    let scale = poles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_re = poles.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re >= -1e-12 * scale.max(1e-300) {
        return Err(Error::UnstablePoles { max_re });
    }

    let (numerator, equilibrium) = if rat.over_lambda {
        let eq = rat.numerator.coeff(0) / rat.denominator.coeff(0);
        let shifted = &rat.numerator - &rat.denominator.scale(eq);
        // constant term vanishes by construction; divide by λ
        let reduced = shifted.coeffs().iter().skip(1).copied().collect::<Vec<_>>();
        (Polynomial::new(reduced), eq)
    } else {
        (rat.numerator.clone(), 0.0)
    };

    let values = omegas
        .iter()
        .map(|&w| {
            let z = Complex64::new(0.0, -w);
            (numerator.eval_complex(z) / rat.denominator.eval_complex(z)).re
        })
        .collect();
    Ok(Spectrum {
        omegas: omegas.to_vec(),
        values,
        equilibrium,
    })
}

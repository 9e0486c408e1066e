use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_grid, root_bound, TimeSeries};
use crate::error::{Error, Result};
use crate::laplace::RationalLaplace;
use crate::quadrature;

/// Largest accepted quadrature error estimate.
pub const INVERSION_TOLERANCE: f64 = 1e-8;

const REQUESTED: f64 = 1e-12;
const MAX_SEGMENTS: usize = 4000;

/// Numerical inverse Laplace transform by contour quadrature.
///
/// The Bromwich line is closed into a rectangle with right edge at
/// `σ0 = 1/(1 + t)` and the remaining edges one unit outside a root-modulus
/// bound, so the integral equals the full inverse without any root finding.
/// All poles must lie strictly left of `σ0`; systems with `Re λ ≤ 0`
/// qualify. The initial-value pole `c/λ` is subtracted analytically.
pub fn inverse_laplace_numeric(rat: &RationalLaplace, times: &[f64]) -> Result<TimeSeries> {
    check_grid(times)?;
    let values = times
        .iter()
        .map(|&t| inverse_laplace_point(rat, t).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        observable: None,
        times: times.to_vec(),
        values,
    })
}

/// Value and error estimate at a single time.
pub fn inverse_laplace_point(rat: &RationalLaplace, t: f64) -> Result<(f64, f64)> {
    if !rat.is_strictly_proper() {
        return Err(Error::ImproperRational {
            numerator: rat.numerator.degree(),
            denominator: rat.full_denominator().degree(),
        });
    }
    let c = rat.initial_value();
    let reach = root_bound(&rat.full_denominator()) + 1.0;
    let sigma = 1.0 / (1.0 + t.max(0.0));
    let integrand = |z: Complex64| -> Complex64 {
        let f = rat.numerator.eval_complex(z) / (rat.full_denominator_eval(z)) - c / z;
        f * (z * t).exp()
    };

    // counterclockwise: right edge up, top edge left, left edge down, bottom edge right
    let right = quadrature::integrate(
        |y| integrand(Complex64::new(sigma, y)) * Complex64::i(),
        -reach,
        reach,
        REQUESTED,
        MAX_SEGMENTS,
    );
    let top = quadrature::integrate(
        |x| -integrand(Complex64::new(x, reach)),
        -reach,
        sigma,
        REQUESTED,
        MAX_SEGMENTS,
    );
    let left = quadrature::integrate(
        |y| -integrand(Complex64::new(-reach, y)) * Complex64::i(),
        -reach,
        reach,
        REQUESTED,
        MAX_SEGMENTS,
    );
    let bottom = quadrature::integrate(
        |x| integrand(Complex64::new(x, -reach)),
        -reach,
        sigma,
        REQUESTED,
        MAX_SEGMENTS,
    );
    let total = right.value + top.value + left.value + bottom.value;
    let value = c + (total / Complex64::new(0.0, 2.0 * PI)).re;
    let estimate = (right.error + top.error + left.error + bottom.error) / (2.0 * PI);
    if !value.is_finite() || estimate > INVERSION_TOLERANCE {
        return Err(Error::QuadratureInaccurate {
            time: t,
            estimate,
            tolerance: INVERSION_TOLERANCE,
        });
    }
    Ok((value, estimate))
}

impl RationalLaplace {
    fn full_denominator_eval(&self, z: Complex64) -> Complex64 {
        let d = self.denominator.eval_complex(z);
        if self.over_lambda {
            d * z
        } else {
            d
        }
    }
}

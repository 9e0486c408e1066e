//! Time-domain reconstruction of rational Laplace transforms.

mod inverse;
mod roots;
mod spectrum;

pub use inverse::{inverse_laplace_numeric, inverse_laplace_point, INVERSION_TOLERANCE};
pub use roots::{find_poles, root_bound};
pub use spectrum::{spectrum, Spectrum};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laplace::{Observable, RationalLaplace};

/// Relative pole separation below which the simple-pole residue formula is
/// refused.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// `f(t) = Σ Aᵢ e^{λᵢ t} + equilibrium`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleDecomposition {
    pub poles: Vec<Complex64>,
    pub amplitudes: Vec<Complex64>,
    pub equilibrium: f64,
}

impl PoleDecomposition {
    /// `Σ Aᵢ + equilibrium`, i.e. `f(0)`.
    pub fn initial_value(&self) -> f64 {
        self.amplitudes.iter().sum::<Complex64>().re + self.equilibrium
    }

    /// `Σ Aᵢ λᵢ`, i.e. `f'(0)`.
    pub fn initial_slope(&self) -> f64 {
        self.poles.iter().zip(&self.amplitudes).map(|(l, a)| l * a).sum::<Complex64>().re
    }

    /// Largest real part among the dynamical poles.
    pub fn max_real_part(&self) -> f64 {
        self.poles.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pole/amplitude pairs ordered by decreasing amplitude modulus.
    pub fn dominant(&self) -> Vec<(Complex64, Complex64)> {
        let mut pairs: Vec<_> = self.poles.iter().copied().zip(self.amplitudes.iter().copied()).collect();
        pairs.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
        pairs
    }

    /// Real pole with the smallest decay rate, if any.
    pub fn slowest_real_pole(&self) -> Option<(Complex64, Complex64)> {
        self.poles
            .iter()
            .copied()
            .zip(self.amplitudes.iter().copied())
            .filter(|(p, _)| p.im == 0.0)
            .max_by(|a, b| a.0.re.total_cmp(&b.0.re))
    }
}

/// Sampled trajectory of one observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub observable: Option<Observable>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn tagged(mut self, observable: Observable) -> Self {
        self.observable = Some(observable);
        self
    }

    pub fn max_abs_difference(&self, other: &TimeSeries) -> (f64, f64) {
        self.times
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&t, (a, b))| ((a - b).abs(), t))
            .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }
}

/// Checks that a time or frequency grid is non-empty, finite and strictly
/// increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Partial-fraction expansion over the simple zeros of the denominator.
///
/// `Aᵢ = N(λᵢ) / (λᵢ^f · D'(λᵢ))` and, when the `1/λ` flag is set, the
/// equilibrium is the residue `N(0)/D(0)`. Exact powers of `λ` shared by
/// numerator and denominator are cancelled first.
pub fn decompose(rat: &RationalLaplace) -> Result<PoleDecomposition> {
    let rat = &rat.cancel_zero_roots();
    if !rat.is_strictly_proper() {
        return Err(Error::ImproperRational {
            numerator: rat.numerator.degree(),
            denominator: rat.full_denominator().degree(),
        });
    }
    let poles = find_poles(&rat.denominator)?;
    let scale = poles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = DEGENERACY_TOLERANCE * scale;
    let mut min_gap = f64::INFINITY;
    for (i, a) in poles.iter().enumerate() {
        for b in &poles[i + 1..] {
            min_gap = min_gap.min((a - b).norm());
        }
        if rat.over_lambda {
            min_gap = min_gap.min(a.norm());
        }
    }
    if scale == 0.0 || min_gap <= floor {
        return Err(Error::DegeneratePoles {
            gap: if scale == 0.0 { 0.0 } else { min_gap / scale },
        });
    }

    let dd = rat.denominator.derivative();
    let amplitudes = poles
        .iter()
        .map(|&z| {
            let mut den = dd.eval_complex(z);
            if rat.over_lambda {
                den *= z;
            }
            rat.numerator.eval_complex(z) / den
        })
        .collect();
    let equilibrium = if rat.over_lambda {
        rat.numerator.coeff(0) / rat.denominator.coeff(0)
    } else {
        0.0
    };
    let dec = PoleDecomposition {
        poles,
        amplitudes,
        equilibrium,
    };
    // Clustered roots of higher multiplicity pass the gap test but leave the
    // residues ill-conditioned; the expansion must reproduce the transform.
    if reconstruction_error(rat, &dec, 2.0 * scale)? > RECONSTRUCTION_TOLERANCE {
        return Err(Error::DegeneratePoles { gap: min_gap / scale });
    }
    Ok(dec)
}

/// Relative mismatch allowed between the partial-fraction expansion and the
/// transform itself.
const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;

fn reconstruction_error(rat: &RationalLaplace, dec: &PoleDecomposition, radius: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..5 {
        let lambda = Complex64::from_polar(radius, 0.3 + 1.2 * k as f64);
        let exact = rat.eval(lambda)?;
        let expansion: Complex64 = dec
            .poles
            .iter()
            .zip(&dec.amplitudes)
            .map(|(p, a)| a / (lambda - p))
            .sum::<Complex64>()
            + dec.equilibrium / lambda;
        worst = worst.max((expansion - exact).norm() / exact.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Pole-sum value at time `t`.
pub fn evaluate(dec: &PoleDecomposition, t: f64) -> f64 {
    let sum: Complex64 = dec
        .poles
        .iter()
        .zip(&dec.amplitudes)
        .map(|(l, a)| a * (l * t).exp())
        .sum();
    sum.re + dec.equilibrium
}

/// Pole-sum values on a grid.
pub fn series(dec: &PoleDecomposition, times: &[f64]) -> Result<TimeSeries> {
    check_grid(times)?;
    Ok(TimeSeries {
        observable: None,
        times: times.to_vec(),
        values: times.iter().map(|&t| evaluate(dec, t)).collect(),
    })
}

/// Decomposes `rat` and samples it, falling back to contour inversion when the
/// poles are too close for the residue formula.
pub fn series_or_numeric(rat: &RationalLaplace, times: &[f64]) -> Result<TimeSeries> {
    match decompose(rat) {
        Ok(dec) => series(&dec, times),
        Err(Error::DegeneratePoles { .. }) => inverse_laplace_numeric(rat, times),
        Err(e) => Err(e),
    }
}

//! Brute-force reference: the two-spin density matrix under pure dephasing,
//! integrated with fixed-step RK4 on the 15 Pauli expectation values.
//!
//! The analytic forms agree with this master equation only when the
//! `tan(πKζ)` terms are dropped; [`compare_with_analytic`] does that itself.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{check_grid, series_or_numeric};
use crate::error::{Error, Result};
use crate::laplace::{rational, Observable};
use crate::model::EffectiveParams;

pub const COMPONENTS: usize = 15;

/// Pass threshold of [`compare_with_analytic`].
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// Allowed excursion of expectation values and populations outside their
/// physical range.
const BOUND_SLACK: f64 = 1e-8;

pub type Generator = SMatrix<f64, COMPONENTS, COMPONENTS>;
type Vector15 = SVector<f64, COMPONENTS>;

/// Single-spin operator label: identity, x, y, z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn matrix(self) -> Matrix2<Complex64> {
        let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        match self {
            Pauli::I => Matrix2::new(l, o, o, l),
            Pauli::X => Matrix2::new(o, l, l, o),
            Pauli::Y => Matrix2::new(o, -i, i, o),
            Pauli::Z => Matrix2::new(l, o, o, -l),
        }
    }
}

/// Component index of `σᵢ ⊗ τⱼ`; `(I, I)` has none.
pub fn index(sigma: Pauli, tau: Pauli) -> Option<usize> {
    (4 * sigma as usize + tau as usize).checked_sub(1)
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn basis() -> Vec<Matrix4<Complex64>> {
    Pauli::ALL
        .iter()
        .flat_map(|&s| Pauli::ALL.iter().map(move |&t| kron(&s.matrix(), &t.matrix())))
        .skip(1)
        .collect()
}

/// Expectation values `<σᵢ>`, `<τⱼ>`, `<σᵢτⱼ>` at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState {
    pub time: f64,
    pub values: [f64; COMPONENTS],
}

impl BlochState {
    /// Both spins up: `<σz> = <τz> = <σzτz> = 1`.
    pub fn initial() -> Self {
        let mut values = [0.0; COMPONENTS];
        for (s, t) in [(Pauli::Z, Pauli::I), (Pauli::I, Pauli::Z), (Pauli::Z, Pauli::Z)] {
            values[index(s, t).unwrap()] = 1.0;
        }
        Self { time: 0.0, values }
    }

    pub fn get(&self, sigma: Pauli, tau: Pauli) -> f64 {
        index(sigma, tau).map_or(1.0, |k| self.values[k])
    }

    pub fn observable(&self, observable: Observable) -> f64 {
        match observable {
            Observable::SigmaZ => self.get(Pauli::Z, Pauli::I),
            Observable::TauZ => self.get(Pauli::I, Pauli::Z),
            Observable::SigmaZTauZ => self.get(Pauli::Z, Pauli::Z),
        }
    }

    /// Diagonal of the density matrix in the `σz ⊗ τz` basis, ordered
    /// `↑↑, ↑↓, ↓↑, ↓↓`.
    pub fn populations(&self) -> [f64; 4] {
        let (s, t, st) = (
            self.get(Pauli::Z, Pauli::I),
            self.get(Pauli::I, Pauli::Z),
            self.get(Pauli::Z, Pauli::Z),
        );
        [(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(a, b)| {
            let (a, b) = (a as f64, b as f64);
            0.25 * (1.0 + a * s + b * t + a * b * st)
        })
    }

    pub fn density_matrix(&self) -> Matrix4<Complex64> {
        let mut rho = Matrix4::identity();
        for (p, r) in basis().iter().zip(&self.values) {
            rho += p * Complex64::new(*r, 0.0);
        }
        rho * Complex64::new(0.25, 0.0)
    }

    fn check(&self, slack: f64) -> Result<()> {
        let fail = |detail: String| Err(Error::InvariantViolation {
            time: self.time,
            detail,
        });
        if let Some(k) = self.values.iter().position(|r| !r.is_finite() || r.abs() > 1.0 + slack) {
            return fail(format!("component {k} = {}", self.values[k]));
        }
        let pops = self.populations();
        if let Some(p) = pops.iter().find(|p| **p < -slack || **p > 1.0 + slack) {
            return fail(format!("population {p}"));
        }
        let trace: f64 = pops.iter().sum();
        if (trace - 1.0).abs() > slack {
            return fail(format!("trace {trace}"));
        }
        Ok(())
    }
}

/// Generator `G` of `dr/dt = G r` for
/// `dρ/dt = −i[H, ρ] + (ϑ1/2)(σzρσz − ρ) + (ϑ2/2)(τzρτz − ρ)` with
/// `H = −(Δ̄1σx + Δ̄2τx + vσzτz)/2`.
///
/// The rate `ϑ/2` reproduces the single-spin form `(λ+ϑ)/(λ(λ+ϑ)+Δ̄²)`.
pub fn dephasing_generator(eff: &EffectiveParams) -> Generator {
    let c = |x: f64| Complex64::new(x, 0.0);
    let sx = kron(&Pauli::X.matrix(), &Pauli::I.matrix());
    let tx = kron(&Pauli::I.matrix(), &Pauli::X.matrix());
    let sz = kron(&Pauli::Z.matrix(), &Pauli::I.matrix());
    let tz = kron(&Pauli::I.matrix(), &Pauli::Z.matrix());
    let h = (sx * c(eff.bar_delta1) + tx * c(eff.bar_delta2) + sz * tz * c(eff.v)) * c(-0.5);
    let minus_i = Complex64::new(0.0, -1.0);
    let lindblad = |rho: &Matrix4<Complex64>| -> Matrix4<Complex64> {
        (h * rho - rho * h) * minus_i
            + (sz * rho * sz - rho) * c(0.5 * eff.theta1)
            + (tz * rho * tz - rho) * c(0.5 * eff.theta2)
    };
    let basis = basis();
    Generator::from_fn(|a, b| 0.25 * (basis[a] * lindblad(&basis[b])).trace().re)
}

/// Largest RK4 step for the oracle: `1e-3 / max(Ω̄+, ϑ1+ϑ2)`.
pub fn default_step(eff: &EffectiveParams) -> f64 {
    1e-3 / eff.bar_omega_plus.max(eff.theta1 + eff.theta2)
}

/// Integrates with [`default_step`].
pub fn integrate(state0: &BlochState, eff: &EffectiveParams, times: &[f64]) -> Result<Vec<BlochState>> {
    integrate_with_step(state0, eff, times, default_step(eff))
}

/// Fixed-step RK4 from `state0` to every time on the grid; each interval is
/// split into the fewest equal steps no longer than `max_step`.
///
/// For a linear system one RK4 step is the matrix `1 + hG + … + (hG)⁴/24`; the
/// `n`-step propagator of an interval is its `n`-th power, formed by repeated
/// squaring and reused across equal intervals.
pub fn integrate_with_step(
    state0: &BlochState,
    eff: &EffectiveParams,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<BlochState>> {
    check_grid(times)?;
    if times[0] < state0.time || !(max_step > 0.0) {
        return Err(Error::InvalidGrid);
    }
    let g = dephasing_generator(eff);
    let mut r = Vector15::from_column_slice(&state0.values);
    let mut t = state0.time;
    let mut cache: Option<(f64, Generator)> = None;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let dt = target - t;
        if dt > 0.0 {
            let propagator = match &cache {
                Some((cached, p)) if *cached == dt => p,
                _ => {
                    let steps = (dt / max_step).ceil().max(1.0);
                    let p = rk4_step(&g, dt / steps).pow(steps as u32);
                    &cache.insert((dt, p)).1
                }
            };
            r = propagator * r;
        }
        t = target;
        let mut values = [0.0; COMPONENTS];
        values.copy_from_slice(r.as_slice());
        let state = BlochState { time: t, values };
        state.check(BOUND_SLACK)?;
        out.push(state);
    }
    Ok(out)
}

fn rk4_step(g: &Generator, h: f64) -> Generator {
    let hg = g * h;
    let mut term = Generator::identity();
    let mut sum = Generator::identity();
    for k in 1..=4 {
        term = term * hg / k as f64;
        sum += term;
    }
    sum
}

/// Worst pointwise deviation for one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableDeviation {
    pub observable: Observable,
    pub max_abs: f64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub deviations: Vec<ObservableDeviation>,
    pub worst: ObservableDeviation,
    pub tolerance: f64,
    pub passed: bool,
}

/// Uniform grid of `points` times on `[0, 50/Δ̄]`, `Δ̄` the larger tunneling
/// element.
pub fn oracle_grid(eff: &EffectiveParams, points: usize) -> Vec<f64> {
    let end = 50.0 / eff.bar_delta1.max(eff.bar_delta2);
    (0..points).map(|k| end * k as f64 / (points - 1).max(1) as f64).collect()
}

/// Runs the oracle and the pole-sum solutions (with `tan(πKζ) = 0`) on the same
/// grid and reports the largest deviation per observable.
pub fn compare_with_analytic(eff: &EffectiveParams, times: &[f64]) -> Result<DeviationReport> {
    let eff = eff.dephasing_limit();
    let trajectory = integrate(&BlochState::initial(), &eff, times)?;
    let mut deviations = Vec::with_capacity(Observable::ALL.len());
    for observable in Observable::ALL {
        let analytic = series_or_numeric(&rational(observable, &eff), times)?;
        let (max_abs, time) = trajectory
            .iter()
            .zip(&analytic.values)
            .map(|(s, a)| ((s.observable(observable) - a).abs(), s.time))
            .fold((0.0, times[0]), |acc, x| if x.0 > acc.0 { x } else { acc });
        deviations.push(ObservableDeviation {
            observable,
            max_abs,
            time,
        });
    }
    let worst = *deviations
        .iter()
        .max_by(|a, b| a.max_abs.total_cmp(&b.max_abs))
        .expect("three observables");
    Ok(DeviationReport {
        passed: worst.max_abs < ORACLE_TOLERANCE,
        deviations,
        worst,
        tolerance: ORACLE_TOLERANCE,
    })
}

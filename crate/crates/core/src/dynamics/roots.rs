use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

const MAX_DEGREE: usize = 6;

/// All roots of a real polynomial of degree 1..=6, with multiplicity.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first.
/// The remaining factor is made monic, rescaled so its roots have modulus of
/// order one, and handed to a companion-matrix Schur decomposition. Each
/// eigenvalue is then polished by Newton steps on the original polynomial and
/// conjugate pairs are symmetrized so that real inputs give exactly conjugate
/// output.
pub fn find_poles(den: &Polynomial) -> Result<Vec<Complex64>> {
    let degree = den.degree();
    if den.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(degree));
    }
    if den.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::RootFindingFailed);
    }

    let zeros = den.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let reduced = Polynomial::new(den.coeffs()[zeros..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if reduced.degree() > 0 {
        let mut found = companion_roots(&reduced)?;
        for r in found.iter_mut() {
            *r = polish(&reduced, *r);
        }
        roots.extend(pair_conjugates(found, root_scale(&reduced)));
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(roots)
}

/// Cauchy-type bound `2·max |a_k/a_n|^{1/(n−k)}` on the root moduli.
pub fn root_bound(p: &Polynomial) -> f64 {
    let n = p.degree();
    let lead = p.leading();
    (0..n)
        .map(|k| (p.coeff(k) / lead).abs().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        * 2.0
}

fn root_scale(p: &Polynomial) -> f64 {
    let b = root_bound(p);
    if b > 0.0 && b.is_finite() {
        b
    } else {
        1.0
    }
}

fn companion_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let scale = root_scale(p);
    // q(y) = p(s·y)/(a_n s^n), roots y = λ/s
    let q = p.rescale_variable(scale);
    let lead = q.leading();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -q.coeff(i) / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 10_000).ok_or(Error::RootFindingFailed)?;
    let eig = schur.complex_eigenvalues();
    Ok(eig.iter().map(|z| z * scale).collect())
}

fn polish(p: &Polynomial, mut z: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut residual = p.eval_complex(z).norm();
    for _ in 0..5 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 || residual == 0.0 {
            break;
        }
        let candidate = z - p.eval_complex(z) / d;
        let r = p.eval_complex(candidate).norm();
        if !(r < residual) {
            break;
        }
        z = candidate;
        residual = r;
    }
    z
}

fn pair_conjugates(roots: Vec<Complex64>, scale: f64) -> Vec<Complex64> {
    let tol = 1e-9 * scale;
    let mut out = Vec::with_capacity(roots.len());
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in roots {
        if z.im.abs() <= tol {
            out.push(Complex64::new(z.re, 0.0));
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        // no consistent pairing; leave the eigenvalues as computed
        out.extend(upper);
        out.extend(lower);
        return out;
    }
    for z in upper {
        let (k, _) = lower
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z.conj()).norm().total_cmp(&(b.1 - z.conj()).norm()))
            .expect("equal counts");
        let w = lower.swap_remove(k);
        let mean = 0.5 * (z + w.conj());
        out.push(mean);
        out.push(mean.conj());
    }
    out
}

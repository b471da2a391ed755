use std::f64::consts::LN_2;

use nalgebra::DVector;

use super::CMatrix;
use crate::error::{check_probability, Error, Result};

/// Asymmetry above which a matrix is rejected as non-Hermitian.
pub const HERMITIAN_REJECT_TOL: f64 = 1e-8;
/// Eigenvalues below `-NEGATIVE_REJECT_TOL` are errors; anything above is clamped to zero.
pub const NEGATIVE_REJECT_TOL: f64 = 1e-8;

/// Shannon entropy in bits of the distribution `{x, 1 - x}`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("x", x)?;
    Ok(h2(x))
}

/// Unchecked binary entropy. Accurate down to subnormal `x`: the `(1 - x) log(1 - x)`
/// term goes through `ln_1p` so that `h2(1e-40)` keeps its `x / ln 2` contribution.
pub(crate) fn h2(x: f64) -> f64 {
    if !(x > 0.0 && x < 1.0) {
        return 0.0;
    }
    let (a, b) = if x <= 0.5 { (x, 1.0 - x) } else { (1.0 - x, x) };
    // a is the small side; b = 1 - a is computed as ln_1p(-a).
    -(a * a.ln() + b * (-a).ln_1p()) / LN_2
}

/// `h(p + d) - h(p)` without cancellation when `d` is tiny relative to `p`.
pub(crate) fn h2_increment(p: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    if p <= 0.0 || p >= 1.0 || p + d <= 0.0 || p + d >= 1.0 {
        return h2(p + d) - h2(p);
    }
    let r = 1.0 - p;
    // -(p+d)log(p+d) + p log p = -p log1p(d/p) - d log(p+d), and the mirrored term for 1-p.
    let lhs = -p * (d / p).ln_1p() - d * (p + d).ln();
    let rhs = -r * (-d / r).ln_1p() + d * (r - d).ln();
    (lhs + rhs) / LN_2
}

/// `-Σ λ log₂ λ` over the strictly positive entries.
pub(crate) fn entropy_of_spectrum<I: IntoIterator<Item = f64>>(eigenvalues: I) -> f64 {
    eigenvalues
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

pub(crate) fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part `(m + m†) / 2`.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    h.symmetric_eigenvalues()
}

/// Entropy of `f f†` through whichever of `f f†` and `f† f` is smaller; both share
/// their nonzero spectrum.
pub(crate) fn entropy_of_factor(f: &CMatrix) -> f64 {
    let gram = if f.nrows() <= f.ncols() {
        f * f.adjoint()
    } else {
        f.adjoint() * f
    };
    entropy_of_spectrum(hermitian_eigenvalues(&gram).iter().copied())
}

/// Von Neumann entropy in bits of a raw matrix, with input validation.
///
/// Asymmetry above `1e-8` and eigenvalues below `-1e-8` are errors; smaller negative
/// eigenvalues are round-off and contribute zero.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            actual: rho.ncols(),
        });
    }
    let asym = max_asymmetry(rho);
    if asym > HERMITIAN_REJECT_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let eigs = hermitian_eigenvalues(rho);
    let min = eigs.min();
    if min < -NEGATIVE_REJECT_TOL {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(entropy_of_spectrum(eigs.iter().copied()))
}

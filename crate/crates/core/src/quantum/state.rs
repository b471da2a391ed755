use nalgebra::DVector;
use num_complex::Complex64;

use super::entropy::{entropy_of_factor, entropy_of_spectrum, hermitian_eigenvalues, max_asymmetry};
use super::{CMatrix, CVector};
use crate::error::{Error, Result};

pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_TRACE_TOL: f64 = 1e-12;
pub const STATE_EIGEN_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (-1e-10).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let asym = max_asymmetry(&matrix);
        if asym > STATE_HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let min = hermitian_eigenvalues(&matrix).min();
        if min < -STATE_EIGEN_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// Wraps a matrix known to be a state up to round-off, symmetrizing it.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// Qubit state `(I + xX + yY + zZ) / 2`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 + 1e-12 {
            return Err(Error::Domain {
                name: "|bloch|^2",
                value: r2,
                domain: "[0, 1]",
            });
        }
        Ok(Self::from_matrix_unchecked(bloch_matrix(x, y, z)))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(self.eigenvalues().iter().copied())
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Reduced state on the `keep` subsystems of a `dims`-partitioned space.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, dims, keep)
    }
}

pub(crate) fn bloch_matrix(x: f64, y: f64, z: f64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n2 = amplitudes.norm_squared();
        if amplitudes.is_empty() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::BadNorm(n2));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn kron(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Reduced state on `keep`, computed as `M M†` from the reshaped amplitudes.
    pub fn reduced(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let m = reshape_for_trace(&self.amplitudes, dims, keep)?;
        Ok(DensityMatrix::from_matrix_unchecked(&m * m.adjoint()))
    }

    /// Entropy of the reduced state on `keep`.
    pub fn reduced_entropy(&self, dims: &[usize], keep: &[usize]) -> Result<f64> {
        let m = reshape_for_trace(&self.amplitudes, dims, keep)?;
        Ok(entropy_of_factor(&m))
    }
}

/// Row-major strides for a tensor product of `dims` (first factor most significant).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat offsets of every joint index of `subset` (ascending), enumerated in tensor order.
pub(crate) fn subsystem_offsets(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut offsets = vec![0usize];
    for &d in subset {
        let mut next = Vec::with_capacity(offsets.len() * dims[d]);
        for &o in &offsets {
            for i in 0..dims[d] {
                next.push(o + i * st[d]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Validates a subsystem selection and returns (kept offsets, traced offsets).
pub(crate) fn split_offsets(total: usize, dims: &[usize], keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if dims.contains(&0) {
        return Err(Error::InvalidSubsystems("zero-dimensional subsystem".into()));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::DimensionMismatch {
            expected: product,
            actual: total,
        });
    }
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("keep set is empty".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystems(format!(
            "keep {keep:?} must be strictly increasing indices below {}",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    Ok((subsystem_offsets(dims, keep), subsystem_offsets(dims, &traced)))
}

fn reshape_for_trace(v: &CVector, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let (ko, to) = split_offsets(v.len(), dims, keep)?;
    Ok(CMatrix::from_fn(ko.len(), to.len(), |a, t| v[ko[a] + to[t]]))
}

/// Partial trace of `rho` over every subsystem not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let (ko, to) = split_offsets(rho.dim(), dims, keep)?;
    let m = rho.matrix();
    let reduced = CMatrix::from_fn(ko.len(), ko.len(), |a, b| {
        to.iter().map(|&t| m[(ko[a] + t, ko[b] + t)]).sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}

/// Canonical purification `Σ_i |i⟩_R ⊗ √ρ |i⟩` with the reference first.
///
/// Tracing out the reference (subsystem 0 of `[d, d]`) returns `rho`.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let eig = rho.matrix().clone().symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    let sqrt_rho = v * CMatrix::from_diagonal(&sqrt_vals) * v.adjoint();
    let amplitudes = CVector::from_fn(d * d, |idx, _| sqrt_rho[(idx % d, idx / d)]);
    PureState { amplitudes }
}

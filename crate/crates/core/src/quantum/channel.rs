use num_complex::Complex64;

use super::entropy::{hermitian_eigenvalues, max_asymmetry};
use super::state::DensityMatrix;
use super::CMatrix;
use crate::error::{Error, Result};

pub const KRAUS_COMPLETENESS_TOL: f64 = 1e-12;
pub const CHOI_HERMITIAN_TOL: f64 = 1e-12;

/// A completely positive trace-preserving map given by Kraus operators
/// `K_k: in_dim → out_dim` with `Σ K_k† K_k = 𝟙`.
#[derive(Clone, Debug)]
pub struct KrausSet {
    in_dim: usize,
    out_dim: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let set = Self::from_operators_unchecked(operators)?;
        let dev = set.completeness_deviation();
        if dev > KRAUS_COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(set)
    }

    /// Shape checks only; callers guarantee completeness (e.g. products of complete sets).
    pub(crate) fn from_operators_unchecked(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidSubsystems("empty Kraus set".into()))?;
        let (out_dim, in_dim) = first.shape();
        for k in &operators {
            if k.shape() != (out_dim, in_dim) {
                return Err(Error::DimensionMismatch {
                    expected: out_dim * in_dim,
                    actual: k.nrows() * k.ncols(),
                });
            }
        }
        Ok(Self {
            in_dim,
            out_dim,
            operators,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            in_dim: dim,
            out_dim: dim,
            operators: vec![CMatrix::identity(dim, dim)],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `max |Σ K†K - 𝟙|` entrywise.
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.in_dim, self.in_dim), |acc, k| acc + k.adjoint() * k);
        (sum - CMatrix::identity(self.in_dim, self.in_dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_matrix(rho.matrix())?))
    }

    /// `Σ K X K†` for an arbitrary square matrix `X`.
    pub fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.in_dim || x.ncols() != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                actual: x.nrows(),
            });
        }
        Ok(self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.out_dim, self.out_dim), |acc, k| {
                acc + k * x * k.adjoint()
            }))
    }

    /// Environment state `E_ij = tr(K_i ρ K_j†)` of the Stinespring dilation built from
    /// these Kraus operators, i.e. the output of a complementary channel.
    pub fn complementary_output(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                actual: rho.dim(),
            });
        }
        let r = self.operators.len();
        let applied: Vec<CMatrix> = self.operators.iter().map(|k| k * rho.matrix()).collect();
        let env = CMatrix::from_fn(r, r, |i, j| (&applied[i] * self.operators[j].adjoint()).trace());
        Ok(DensityMatrix::from_matrix_unchecked(env))
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &KrausSet) -> Result<KrausSet> {
        if after.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch {
                expected: self.out_dim,
                actual: after.in_dim,
            });
        }
        let ops = after
            .operators
            .iter()
            .flat_map(|b| self.operators.iter().map(move |a| b * a))
            .collect();
        KrausSet::from_operators_unchecked(ops)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &KrausSet) -> KrausSet {
        let ops = self
            .operators
            .iter()
            .flat_map(|a| other.operators.iter().map(move |b| a.kronecker(b)))
            .collect();
        KrausSet {
            in_dim: self.in_dim * other.in_dim,
            out_dim: self.out_dim * other.out_dim,
            operators: ops,
        }
    }

    /// Replace the operators by `K'_j = Σ_k U_jk K_k`; the channel is unchanged for unitary `U`.
    pub fn mixed(&self, u: &CMatrix) -> Result<KrausSet> {
        let r = self.operators.len();
        if u.nrows() != r || u.ncols() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                actual: u.nrows(),
            });
        }
        let ops = (0..r)
            .map(|j| {
                (0..r).fold(CMatrix::zeros(self.out_dim, self.in_dim), |acc, k| {
                    acc + &self.operators[k] * u[(j, k)]
                })
            })
            .collect();
        KrausSet::new(ops)
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_of(self)
    }

    pub fn superoperator(&self) -> Superoperator {
        Superoperator::from_kraus(self)
    }
}

pub fn apply_kraus(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    k.apply(rho)
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`, input factor first, output second.
///
/// Uses the unnormalized maximally entangled state, so a trace-preserving map has
/// `tr_out C = 𝟙` and `tr C = in_dim`.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    in_dim: usize,
    out_dim: usize,
    matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn from_matrix(in_dim: usize, out_dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = in_dim * out_dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: matrix.nrows(),
            });
        }
        let asym = max_asymmetry(&matrix);
        if asym > CHOI_HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self {
            in_dim,
            out_dim,
            matrix,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = hermitian_eigenvalues(&self.matrix).iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix).min()
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `tr_out C`, which equals `𝟙_in` exactly when the map is trace preserving.
    pub fn output_trace(&self) -> CMatrix {
        let (di, dout) = (self.in_dim, self.out_dim);
        CMatrix::from_fn(di, di, |i, j| {
            (0..dout).map(|a| self.matrix[(i * dout + a, j * dout + a)]).sum()
        })
    }

    /// Largest entrywise difference to another Choi matrix of the same shape.
    pub fn max_abs_diff(&self, other: &ChoiMatrix) -> Result<f64> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                actual: other.matrix.nrows(),
            });
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

pub fn choi_of(k: &KrausSet) -> ChoiMatrix {
    let (di, dout) = (k.in_dim, k.out_dim);
    let n = di * dout;
    let mut c = CMatrix::zeros(n, n);
    for op in &k.operators {
        // column vector v[(i, a)] = K[a, i]
        let v = CMatrix::from_fn(n, 1, |idx, _| op[(idx % dout, idx / dout)]);
        c += &v * v.adjoint();
    }
    ChoiMatrix {
        in_dim: di,
        out_dim: dout,
        matrix: (&c + c.adjoint()) * Complex64::new(0.5, 0.0),
    }
}

pub fn is_completely_positive(c: &ChoiMatrix, tol: f64) -> bool {
    c.is_completely_positive(tol)
}

/// Linear map in Liouville form: `vec(Φ(X)) = L vec(X)` with row-major `vec`.
///
/// Represents maps that need not be completely positive, which Kraus sets cannot.
#[derive(Clone, Debug)]
pub struct Superoperator {
    in_dim: usize,
    out_dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn from_kraus(k: &KrausSet) -> Self {
        let l = k
            .operators
            .iter()
            .fold(CMatrix::zeros(k.out_dim * k.out_dim, k.in_dim * k.in_dim), |acc, op| {
                acc + op.kronecker(&op.map(|z| z.conj()))
            });
        Self {
            in_dim: k.in_dim,
            out_dim: k.out_dim,
            matrix: l,
        }
    }

    /// Tabulates a linear map from its action on the matrix units `|i⟩⟨j|`.
    pub fn from_linear_fn<F: Fn(&CMatrix) -> CMatrix>(in_dim: usize, out_dim: usize, f: F) -> Self {
        let mut l = CMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
        for i in 0..in_dim {
            for j in 0..in_dim {
                let mut unit = CMatrix::zeros(in_dim, in_dim);
                unit[(i, j)] = Complex64::new(1.0, 0.0);
                let out = f(&unit);
                for a in 0..out_dim {
                    for b in 0..out_dim {
                        l[(a * out_dim + b, i * in_dim + j)] = out[(a, b)];
                    }
                }
            }
        }
        Self {
            in_dim,
            out_dim,
            matrix: l,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Superoperator) -> Result<Superoperator> {
        if after.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch {
                expected: self.out_dim,
                actual: after.in_dim,
            });
        }
        Ok(Superoperator {
            in_dim: self.in_dim,
            out_dim: after.out_dim,
            matrix: &after.matrix * &self.matrix,
        })
    }

    pub fn apply_matrix(&self, x: &CMatrix) -> CMatrix {
        let (di, dout) = (self.in_dim, self.out_dim);
        let v = CMatrix::from_fn(di * di, 1, |idx, _| x[(idx / di, idx % di)]);
        let w = &self.matrix * v;
        CMatrix::from_fn(dout, dout, |a, b| w[(a * dout + b, 0)])
    }

    /// Choi matrix; Hermitian whenever the map is Hermiticity preserving.
    pub fn choi(&self) -> ChoiMatrix {
        let (di, dout) = (self.in_dim, self.out_dim);
        let n = di * dout;
        let c = CMatrix::from_fn(n, n, |r, s| {
            let (i, a) = (r / dout, r % dout);
            let (j, b) = (s / dout, s % dout);
            self.matrix[(a * dout + b, i * di + j)]
        });
        ChoiMatrix {
            in_dim: di,
            out_dim: dout,
            matrix: (&c + c.adjoint()) * Complex64::new(0.5, 0.0),
        }
    }
}

/// Dephasing channel `ρ ↦ (1-p)ρ + pZρZ` on a qubit.
pub fn dephasing_kraus(p: f64) -> Result<KrausSet> {
    crate::error::check_probability("p", p)?;
    let z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]));
    KrausSet::new(vec![
        CMatrix::identity(2, 2) * Complex64::new((1.0 - p).sqrt(), 0.0),
        z * Complex64::new(p.sqrt(), 0.0),
    ])
}

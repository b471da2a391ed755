//! The dephrasure channel `N_{p,q}(ρ) = (1-q)((1-p)ρ + pZρZ) + q tr(ρ)|e⟩⟨e|`, its
//! complementary channel, the region boundary curves and the single-letter
//! coherent information.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::quantum::{bloch_matrix, h2, CMatrix, DensityMatrix, KrausSet};
use crate::search::{grid_then_golden, Maximum};

/// Dephasing probability `p` and erasure probability `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelParams {
    p: f64,
    q: f64,
}

impl ChannelParams {
    /// Accepts any `p, q ∈ [0, 1]`; region analysis assumes `[0, ½]²`.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p: check_probability("p", p)?,
            q: check_probability("q", q)?,
        })
    }

    /// Restricted constructor for the `p, q ∈ [0, ½]` square.
    pub fn in_region(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..=0.5).contains(&v) {
                return Err(Error::Domain {
                    name,
                    value: v,
                    domain: "[0, 1/2]",
                });
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Bloch vector of a qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 + 1e-12 || !r2.is_finite() {
            return Err(Error::Domain {
                name: "|bloch|^2",
                value: r2,
                domain: "[0, 1]",
            });
        }
        Ok(Self { x, y, z })
    }

    pub fn to_state(&self) -> DensityMatrix {
        DensityMatrix::from_bloch(self.x, self.y, self.z).expect("validated bloch vector")
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kraus operators `2 → 3` of `N_{p,q}`; the erasure flag `|e⟩` is the third basis vector.
pub fn dephrasure_kraus(params: ChannelParams) -> KrausSet {
    let (p, q) = (params.p, params.q);
    let emb = |d0: f64, d1: f64| {
        let mut m = CMatrix::zeros(3, 2);
        m[(0, 0)] = c(d0);
        m[(1, 1)] = c(d1);
        m
    };
    let a = ((1.0 - q) * (1.0 - p)).sqrt();
    let b = ((1.0 - q) * p).sqrt();
    let mut e0 = CMatrix::zeros(3, 2);
    e0[(2, 0)] = c(q.sqrt());
    let mut e1 = CMatrix::zeros(3, 2);
    e1[(2, 1)] = c(q.sqrt());
    KrausSet::new(vec![emb(a, a), emb(b, -b), e0, e1]).expect("dephrasure Kraus operators are complete")
}

/// `|φ_p^x⟩ = √(1-p)|0⟩ + (-1)^x √p |1⟩`.
pub fn phi_vector(p: f64, x: usize) -> [f64; 2] {
    let sign = if x == 0 { 1.0 } else { -1.0 };
    [(1.0 - p).sqrt(), sign * p.sqrt()]
}

/// Kraus operators `2 → 4` of the complementary channel
/// `ρ ↦ qρ ⊕ (1-q) Σ_x ⟨x|ρ|x⟩ |φ_p^x⟩⟨φ_p^x|`, with the `q` block on indices 0, 1.
pub fn complementary_kraus(params: ChannelParams) -> KrausSet {
    let (p, q) = (params.p, params.q);
    let mut copy = CMatrix::zeros(4, 2);
    copy[(0, 0)] = c(q.sqrt());
    copy[(1, 1)] = c(q.sqrt());
    let mut ops = vec![copy];
    for x in 0..2 {
        let phi = phi_vector(p, x);
        let mut k = CMatrix::zeros(4, 2);
        k[(2, x)] = c((1.0 - q).sqrt() * phi[0]);
        k[(3, x)] = c((1.0 - q).sqrt() * phi[1]);
        ops.push(k);
    }
    KrausSet::new(ops).expect("complementary Kraus operators are complete")
}

/// Block-diagonal `q·ρ ⊕ (1-q)·Σ_x ⟨x|ρ|x⟩ |φ_p^x⟩⟨φ_p^x|` (4×4, `q` block first).
pub fn complementary_apply(params: ChannelParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let (p, q) = (params.p, params.q);
    let m = rho.matrix();
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = m[(i, j)] * q;
        }
    }
    for x in 0..2 {
        let w = m[(x, x)].re * (1.0 - q);
        let phi = phi_vector(p, x);
        for i in 0..2 {
            for j in 0..2 {
                out[(2 + i, 2 + j)] += c(w * phi[i] * phi[j]);
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Boundary ordinates at a given `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionCurves {
    /// Zero contour of the single-letter coherent information.
    pub g: f64,
    /// Below `j`, the maximally mixed input is optimal.
    pub j: f64,
    /// Above `k`, the channel is antidegradable.
    pub k: f64,
}

fn check_half(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1/2]",
        })
    }
}

pub fn g_curve(p: f64) -> f64 {
    let a = (1.0 - 2.0 * p).powi(2);
    a / (1.0 + a)
}

pub fn k_curve(p: f64) -> f64 {
    (1.0 - 2.0 * p) / (2.0 * (1.0 - p))
}

pub fn j_curve(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.5;
    }
    let t = 1.0 - 2.0 * p;
    if t < 1e-2 {
        // numerator and denominator both vanish at p = ½
        let t2 = t * t;
        return t2 * (2.0 / 3.0 - t2 * (14.0 / 45.0 - t2 * 166.0 / 945.0));
    }
    let l = 2.0 * p * (1.0 - p) * ((1.0 - p) / p).ln();
    (t - l) / (2.0 * t - l)
}

pub fn region_curves(p: f64) -> Result<RegionCurves> {
    check_half(p)?;
    Ok(RegionCurves {
        g: g_curve(p),
        j: j_curve(p),
        k: k_curve(p),
    })
}

/// `Φ_{p,z} = [[1-p, z√(p(1-p))], [z√(p(1-p)), p]]`.
pub fn phi_matrix(p: f64, z: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    check_unit_interval("z", z)?;
    let off = z * (p * (1.0 - p)).sqrt();
    Ok(DensityMatrix::from_matrix_unchecked(CMatrix::from_row_slice(
        2,
        2,
        &[c(1.0 - p), c(off), c(off), c(p)],
    )))
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v,
            domain: "[-1, 1]",
        })
    }
}

/// Smaller eigenvalue `(1 - r)/2` of a qubit state with Bloch radius `r`, given `1 - r²`.
fn small_eigenvalue(one_minus_r2: f64) -> f64 {
    let r = (1.0 - one_minus_r2).max(0.0).sqrt();
    0.5 * one_minus_r2 / (1.0 + r)
}

/// Entropy of `Φ_{p,z}` given `1 - z²`.
fn phi_entropy(p: f64, one_minus_z2: f64) -> f64 {
    h2(small_eigenvalue(4.0 * p * (1.0 - p) * one_minus_z2))
}

/// `i_c` of the Z-diagonal state with `z = 1 - 2ε`, stable for `ε` down to subnormals.
pub(crate) fn ci_z_from_tail(params: ChannelParams, eps: f64) -> f64 {
    let (p, q) = (params.p, params.q);
    let one_minus_z2 = 4.0 * eps * (1.0 - eps);
    (1.0 - 2.0 * q) * h2(eps) - (1.0 - q) * phi_entropy(p, one_minus_z2)
}

/// `I_c(ρ_z, N) = (1-2q) S(ρ_z) - (1-q) S(Φ_{p,z})` for `ρ_z = (𝟙 + zZ)/2`.
pub fn coherent_info_z(params: ChannelParams, z: f64) -> Result<f64> {
    check_unit_interval("z", z)?;
    Ok(ci_z_from_tail(params, 0.5 * (1.0 - z.abs())))
}

/// `I_c` of the Bloch state `(x, 0, z)`:
/// `(1-q) S(Z_p(ρ)) - q S(ρ) - (1-q) S(Φ_{p,z})`.
pub fn coherent_info_xz(params: ChannelParams, x: f64, z: f64) -> Result<f64> {
    let r2 = x * x + z * z;
    if r2 > 1.0 + 1e-12 {
        return Err(Error::Domain {
            name: "x^2 + z^2",
            value: r2,
            domain: "[0, 1]",
        });
    }
    let (p, q) = (params.p, params.q);
    let s_rho = h2(small_eigenvalue((1.0 - r2).max(0.0)));
    let xd = (1.0 - 2.0 * p) * x;
    let s_deph = h2(small_eigenvalue((1.0 - xd * xd - z * z).max(0.0)));
    let s_phi = phi_entropy(p, (1.0 - z * z).max(0.0));
    Ok((1.0 - q) * s_deph - q * s_rho - (1.0 - q) * s_phi)
}

/// Direct evaluation `S(N(ρ)) - S(N^c(ρ))` through the Kraus operators.
pub fn coherent_info_direct(params: ChannelParams, rho: &DensityMatrix) -> Result<f64> {
    let out = dephrasure_kraus(params).apply(rho)?;
    let env = complementary_apply(params, rho)?;
    Ok(out.entropy() - env.entropy())
}

/// Single-letter maximum over Z-diagonal inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingleLetter {
    pub value: f64,
    /// Maximizing `z ≥ 0`; the objective is even in `z`.
    pub z_star: f64,
}

pub const Z_GRID_STEP: f64 = 1e-3;
pub const Z_TOL: f64 = 1e-10;

/// Maximizes `coherent_info_z` over `z ∈ [0, 1]`.
///
/// Besides the `z` grid, the tail `ε = (1 - z)/2` is scanned on a logarithmic grid
/// down to `2^-1000`: just below the zero contour `q = g(p)` the only positive values
/// sit at `ε` far below any linear grid spacing.
pub fn single_letter_ci(params: ChannelParams) -> SingleLetter {
    let f = |z: f64| ci_z_from_tail(params, 0.5 * (1.0 - z));
    let mut linear = grid_then_golden(&f, 0.0, 1.0, Z_GRID_STEP, Z_TOL);
    let center = f(0.0);
    // i_c is flat to second order at z = 0; don't let rounding pick a nearby point
    if linear.value - center <= 1e-12 * center.abs() {
        linear = Maximum {
            arg: 0.0,
            value: center,
        };
    }
    let tail = log_tail_max(|eps| ci_z_from_tail(params, eps), Z_GRID_STEP / 2.0);
    if tail.value > linear.value {
        SingleLetter {
            value: tail.value,
            z_star: 1.0 - 2.0 * tail.arg,
        }
    } else {
        SingleLetter {
            value: linear.value,
            z_star: linear.arg,
        }
    }
}

/// Maximizes `f(ε)` over `ε = 2^t`, `t ∈ [-1000, log₂ eps_max]`.
pub(crate) fn log_tail_max<F: Fn(f64) -> f64>(f: F, eps_max: f64) -> Maximum {
    let g = |t: f64| f(t.exp2());
    let m = grid_then_golden(&g, -1000.0, eps_max.log2(), 0.25, 1e-9);
    Maximum {
        arg: m.arg.exp2(),
        value: m.value,
    }
}

/// Maximum of `coherent_info_xz` over a grid on the quarter disk `x, z ≥ 0`, plus the
/// Z-diagonal optimum. No claim of global optimality is made outside `q < g(p)`.
pub fn bloch_grid_ci(params: ChannelParams, steps: usize) -> (f64, BlochVector) {
    let sl = single_letter_ci(params);
    let mut best = (
        sl.value,
        BlochVector {
            x: 0.0,
            y: 0.0,
            z: sl.z_star,
        },
    );
    let steps = steps.max(2);
    for i in 0..=steps {
        let x = i as f64 / steps as f64;
        for k in 0..=steps {
            let z = k as f64 / steps as f64;
            if x * x + z * z > 1.0 {
                break;
            }
            let v = coherent_info_xz(params, x, z).expect("inside disk");
            if v > best.0 {
                best = (v, BlochVector { x, y: 0.0, z });
            }
        }
    }
    best
}

/// Second derivative of `i_c` at `z = 0`, in closed form.
pub fn ci_curvature_at_center(params: ChannelParams) -> f64 {
    let (p, q) = (params.p, params.q);
    if p <= 0.0 {
        return -(1.0 - 2.0 * q) / LN_2;
    }
    if p >= 0.5 {
        // (1-2q)·(-1/ln2) + (1-q)·(1/ln2)
        return q / LN_2;
    }
    -(1.0 - 2.0 * q) / LN_2 + 2.0 * p * (1.0 - p) / (1.0 - 2.0 * p) * (1.0 - q) * ((1.0 - p) / p).log2()
}

pub(crate) fn bloch_state(x: f64, y: f64, z: f64) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(bloch_matrix(x, y, z))
}

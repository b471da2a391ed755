//! Antidegrading maps `A` with `N_{p,q} = A ∘ N^c_{p,q}` on the region `q ≥ k(p)`.
//!
//! The complementary output is 4-dimensional: the `q`-weighted copy of the input on
//! indices 0, 1 and the `(1-q)`-weighted `φ` block on indices 2, 3.

use num_complex::Complex64;
use serde::Serialize;

use crate::dephrasure::{complementary_kraus, dephrasure_kraus, k_curve, phi_vector, ChannelParams};
use crate::error::{Error, Result};
use crate::quantum::{choi_of, CMatrix, KrausSet, Superoperator};

/// Residual below which a tiny negative `x` at `q = k(p)` is treated as zero.
const X_CLAMP: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Π_x = α |w_x⟩⟨w_x|` with `w_x ⊥ φ_p^{1-x}` and `α = 1/(2(1-p))`.
fn usd_vectors(p: f64) -> (f64, [[f64; 2]; 2]) {
    let w = |x: usize| {
        let other = phi_vector(p, 1 - x);
        [other[1], -other[0]]
    };
    (0.5 / (1.0 - p), [w(0), w(1)])
}

/// Unambiguous discrimination of `|φ_p^0⟩`, `|φ_p^1⟩`: returns `[Π₀, Π₁, Π_e]`.
/// `p = 0` is the continuous limit.
pub fn usd_povm(p: f64) -> Result<[CMatrix; 3]> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "(0, 1/2]",
        });
    }
    let (alpha, w) = usd_vectors(p);
    let effect = |v: [f64; 2]| CMatrix::from_fn(2, 2, |i, j| c(alpha * v[i] * v[j]));
    let mut e = CMatrix::zeros(2, 2);
    e[(0, 0)] = c((1.0 - 2.0 * p) / (1.0 - p));
    Ok([effect(w[0]), effect(w[1]), e])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// `E_y ∘ Z_p` on the copy block and erasure of the `φ` block, for `q ≥ ½`.
    Trivial,
    /// `E_x` on the copy block and unambiguous discrimination on the `φ` block.
    Usd,
}

/// Erasure parameter of the discrimination-based map; negative when `q < k(p)`.
pub fn usd_erasure_parameter(params: ChannelParams) -> f64 {
    let (p, q) = (params.p(), params.q());
    let t = 1.0 - 2.0 * p;
    if t == 0.0 {
        return 1.0;
    }
    let x = 1.0 - (1.0 - q) * t / q;
    if x.abs() < X_CLAMP {
        0.0
    } else {
        x
    }
}

fn embed(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for &(i, j, v) in entries {
        m[(i, j)] = c(v);
    }
    m
}

fn usd_kraus(p: f64, x: f64) -> Result<KrausSet> {
    let (alpha, w) = usd_vectors(p);
    let a = alpha.sqrt();
    KrausSet::new(vec![
        embed(3, 4, &[(0, 0, (1.0 - x).sqrt()), (1, 1, (1.0 - x).sqrt())]),
        embed(3, 4, &[(2, 0, x.sqrt())]),
        embed(3, 4, &[(2, 1, x.sqrt())]),
        embed(3, 4, &[(0, 2, a * w[0][0]), (0, 3, a * w[0][1])]),
        embed(3, 4, &[(1, 2, a * w[1][0]), (1, 3, a * w[1][1])]),
        embed(3, 4, &[(2, 2, ((1.0 - 2.0 * p) / (1.0 - p)).sqrt())]),
    ])
}

fn trivial_kraus(p: f64, q: f64) -> Result<KrausSet> {
    let y = (2.0 * q - 1.0) / q;
    let a = ((1.0 - y) * (1.0 - p)).sqrt();
    let b = ((1.0 - y) * p).sqrt();
    KrausSet::new(vec![
        embed(3, 4, &[(0, 0, a), (1, 1, a)]),
        embed(3, 4, &[(0, 0, b), (1, 1, -b)]),
        embed(3, 4, &[(2, 0, y.sqrt())]),
        embed(3, 4, &[(2, 1, y.sqrt())]),
        embed(3, 4, &[(2, 2, 1.0)]),
        embed(3, 4, &[(2, 3, 1.0)]),
    ])
}

/// The antidegrading map as a Kraus set (`4 → 3`): trivial map for `q ≥ ½`, the
/// discrimination map for `k(p) ≤ q < ½`.
pub fn antidegrading_map(params: ChannelParams) -> Result<(MapKind, f64, KrausSet)> {
    let (p, q) = (params.p(), params.q());
    if p > 0.5 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1/2]",
        });
    }
    if q >= 0.5 {
        let y = (2.0 * q - 1.0) / q;
        return Ok((MapKind::Trivial, y, trivial_kraus(p, q)?));
    }
    let x = usd_erasure_parameter(params);
    if x < 0.0 {
        return Err(Error::NotAntidegradableHere { q, k: k_curve(p) });
    }
    Ok((MapKind::Usd, x, usd_kraus(p, x)?))
}

/// The discrimination-based map as a linear map for any `x`, including the
/// non-CP range `x < 0`.
pub fn formal_usd_map(p: f64, x: f64) -> Result<Superoperator> {
    let [p0, p1, pe] = usd_povm(p)?;
    Ok(Superoperator::from_linear_fn(4, 3, |m| {
        let mut out = CMatrix::zeros(3, 3);
        let block = m.view((0, 0), (2, 2));
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = block[(i, j)] * (1.0 - x);
            }
        }
        out[(2, 2)] = block.trace() * x;
        let phi = m.view((2, 2), (2, 2)).clone_owned();
        out[(0, 0)] += (&p0 * &phi).trace();
        out[(1, 1)] += (&p1 * &phi).trace();
        out[(2, 2)] += (&pe * &phi).trace();
        out
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Antidegradable,
    /// No construction applies; this does not mean the channel is not antidegradable.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegradingMapReport {
    pub params: ChannelParams,
    pub map_kind: MapKind,
    pub x_param: f64,
    /// Largest entrywise difference between the Choi matrices of `A ∘ N^c` and `N`.
    pub composition_residual: f64,
    pub cp_min_eigenvalue: f64,
    pub antidegradable: bool,
    pub verdict: Verdict,
}

/// Builds the map for `params` and checks `A ∘ N^c = N` and complete positivity.
/// Below `k(p)` the discrimination map is evaluated formally with its negative `x`.
pub fn verify_antidegradable(params: ChannelParams, tol: f64) -> Result<DegradingMapReport> {
    let target = choi_of(&dephrasure_kraus(params));
    let (map_kind, x_param, residual, cp_min) = match antidegrading_map(params) {
        Ok((kind, x, a)) => {
            let composed = complementary_kraus(params).then(&a)?;
            let residual = choi_of(&composed).max_abs_diff(&target)?;
            (kind, x, residual, choi_of(&a).min_eigenvalue())
        }
        Err(Error::NotAntidegradableHere { .. }) if params.q() > 0.0 => {
            let x = usd_erasure_parameter(params);
            let a = formal_usd_map(params.p(), x)?;
            let composed = Superoperator::from_kraus(&complementary_kraus(params)).then(&a)?;
            let residual = composed.choi().max_abs_diff(&target)?;
            (MapKind::Usd, x, residual, a.choi().min_eigenvalue())
        }
        Err(Error::NotAntidegradableHere { .. }) => {
            // q = 0 < k(p): the formal parameter is unbounded
            (MapKind::Usd, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY)
        }
        Err(e) => return Err(e),
    };
    let antidegradable = residual <= tol && cp_min >= -tol;
    Ok(DegradingMapReport {
        params,
        map_kind,
        x_param,
        composition_residual: residual,
        cp_min_eigenvalue: cp_min,
        antidegradable,
        verdict: if antidegradable {
            Verdict::Antidegradable
        } else {
            Verdict::Unknown
        },
    })
}

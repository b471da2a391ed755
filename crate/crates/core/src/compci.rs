//! Coherent information of the complementary channel on `ρ = (𝟙 + mX)/2`.

use serde::Serialize;

use crate::dephrasure::{bloch_state, complementary_kraus, ChannelParams};
use crate::error::{Error, Result};
use crate::quantum::{h2, h2_increment, purify, DensityMatrix, KrausSet};

/// `q h(ε) + (1-q)[h(p) - h(p + ε(1-2p))]` with `ε = (1-m)/2`.
pub fn comp_ci_x_state(params: ChannelParams, m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain {
            name: "m",
            value: m,
            domain: "[0, 1]",
        });
    }
    Ok(comp_ci_tail(params, 0.5 * (1.0 - m)))
}

fn comp_ci_tail(params: ChannelParams, eps: f64) -> f64 {
    let (p, q) = (params.p(), params.q());
    q * h2(eps) - (1.0 - q) * h2_increment(p, eps * (1.0 - 2.0 * p))
}

/// `S(N^c(ρ)) - S((id ⊗ N^c)(ψ_ρ))` through the Kraus operators.
pub fn comp_ci_direct(params: ChannelParams, m: f64) -> Result<f64> {
    let rho = bloch_state(m, 0.0, 0.0);
    let k = complementary_kraus(params);
    let out = k.apply(&rho)?;
    let joint = KrausSet::identity(2)
        .tensor(&k)
        .apply(&DensityMatrix::from_pure(&purify(&rho)))?;
    Ok(out.entropy() - joint.entropy())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessResult {
    pub params: ChannelParams,
    pub m: f64,
    pub epsilon: f64,
    pub ci_value: f64,
}

const MAX_HALVINGS: usize = 64;

/// A state with strictly positive complementary coherent information.
///
/// Starts from half of `2^{-((1-q)/q)(1-2p) log₂((1-p)/p)}` and halves `ε` while the
/// value is not positive.
pub fn positivity_witness(params: ChannelParams) -> Result<WitnessResult> {
    let (p, q) = (params.p(), params.q());
    for (name, v) in [("p", p), ("q", q)] {
        if !(v > 0.0 && v <= 0.5) {
            return Err(Error::Domain {
                name,
                value: v,
                domain: "(0, 1/2]",
            });
        }
    }
    let exponent = (1.0 - q) / q * (1.0 - 2.0 * p) * ((1.0 - p) / p).log2();
    let mut eps = 0.5 * (-exponent).exp2();
    for _ in 0..=MAX_HALVINGS {
        if eps == 0.0 {
            break;
        }
        let v = comp_ci_tail(params, eps);
        if v > 0.0 {
            return Ok(WitnessResult {
                params,
                m: 1.0 - 2.0 * eps,
                epsilon: eps,
                ci_value: v,
            });
        }
        eps *= 0.5;
    }
    Err(Error::UnderflowAtParams { p, q })
}

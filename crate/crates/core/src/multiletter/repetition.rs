//! Weighted repetition codes `√λ|0⟩|0…0⟩ + √(1-λ)|1⟩|1…1⟩` in closed form.

use num_complex::Complex64;
use serde::Serialize;

use super::CodeState;
use crate::dephrasure::{log_tail_max, ChannelParams};
use crate::error::{check_probability, Error, Result};
use crate::quantum::h2;
use crate::search::{grid_then_golden, Maximum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepetitionParams {
    n: usize,
    lambda: f64,
}

impl RepetitionParams {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("repetition code needs n >= 1".into()));
        }
        Ok(Self {
            n,
            lambda: check_probability("lambda", lambda)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `1 - (1-2p)^{2n}`, accurate for small `p`.
fn dephasing_contrast(p: f64, n: usize) -> f64 {
    -(2.0 * n as f64 * (-2.0 * p).ln_1p()).exp_m1()
}

/// `(1 - u)/2` without cancellation at small `λ(1-λ)c`.
fn nu(lambda: f64, c: f64) -> f64 {
    let a = 4.0 * lambda * (1.0 - lambda) * c;
    0.5 * a / (1.0 + (1.0 - a).max(0.0).sqrt())
}

/// `u = √(1 - 4λ(1-λ)(1 - (1-2p)^{2n}))`.
pub fn u_value(lambda: f64, p: f64, n: usize) -> Result<f64> {
    check_probability("lambda", lambda)?;
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1/2]",
        });
    }
    if n == 0 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    let c = dephasing_contrast(p, n);
    Ok((1.0 - 4.0 * lambda * (1.0 - lambda) * c).max(0.0).sqrt())
}

/// `((1-q)^n - q^n) h(λ) - (1-q)^n h((1-u)/2)`.
pub fn repetition_ci(params: ChannelParams, rep: RepetitionParams) -> f64 {
    let n = rep.n as i32;
    let (p, q) = (params.p(), params.q());
    let kept = (1.0 - q).powi(n);
    let c = dephasing_contrast(p, rep.n);
    (kept - q.powi(n)) * h2(rep.lambda) - kept * h2(nu(rep.lambda, c))
}

/// The repetition code as a [`CodeState`] with a qubit reference.
pub fn repetition_code(rep: RepetitionParams) -> CodeState {
    let d = 1usize << rep.n;
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * d];
    amps[0] = Complex64::new(rep.lambda.sqrt(), 0.0);
    amps[2 * d - 1] = Complex64::new((1.0 - rep.lambda).sqrt(), 0.0);
    CodeState::new(rep.n, 2, amps).expect("unit norm by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepetitionOptimum {
    pub value: f64,
    /// In `[0, ½]`.
    pub lambda_star: f64,
}

pub const LAMBDA_GRID_STEP: f64 = 1e-4;
pub const LAMBDA_TOL: f64 = 1e-12;

/// Maximizes [`repetition_ci`] over `λ ∈ [0, ½]`.
///
/// Near the threshold `q = g(p)` the maximizing `λ` is exponentially small, so a
/// logarithmic scan of `λ` runs alongside the linear grid.
pub fn repetition_ci_opt(params: ChannelParams, n: usize) -> Result<RepetitionOptimum> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    let f = |lambda: f64| repetition_ci(params, RepetitionParams { n, lambda });
    let mut best = grid_then_golden(&f, 0.0, 0.5, LAMBDA_GRID_STEP, LAMBDA_TOL);
    let half = f(0.5);
    if best.value - half <= 1e-12 * half.abs() {
        best = Maximum { arg: 0.5, value: half };
    }
    let tail = log_tail_max(f, LAMBDA_GRID_STEP / 2.0);
    if tail.value > best.value {
        best = tail;
    }
    Ok(RepetitionOptimum {
        value: best.value,
        lambda_star: best.arg,
    })
}

/// `f(p, λ, n) = h((1-u)/2) / h(λ)`; the code has positive coherent information
/// exactly when `f < 1 - (q/(1-q))^n`.
pub fn threshold_f(p: f64, lambda: f64, n: usize) -> Result<f64> {
    u_value(lambda, p, n)?;
    if lambda == 0.0 || lambda == 1.0 {
        return Err(Error::Domain {
            name: "lambda",
            value: lambda,
            domain: "(0, 1)",
        });
    }
    Ok(h2(nu(lambda, dephasing_contrast(p, n))) / h2(lambda))
}

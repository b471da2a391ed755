//! Z-diagonal codes `Σ_s λ_s |s⟩_R |s⟩` and the non-diagonal three-use family.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{repetition_ci_opt, CodeState, MAX_USES};
use crate::dephrasure::{single_letter_ci, ChannelParams};
use crate::error::{Error, Result};
use crate::pso::{optimize_code_ci, Parametrization, PsoConfig};
use crate::quantum::entropy_of_spectrum;

fn uses_of(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidConfig(format!(
            "{len} coefficients is not 2^n with n >= 1"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `Σ_s λ_s |s⟩_R ⊗ |s⟩` with a `2^n`-dimensional reference, after normalization.
pub fn zdiag_code(schmidt: &[f64]) -> Result<CodeState> {
    let n = uses_of(schmidt.len())?;
    if let Some(&bad) = schmidt.iter().find(|&&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(Error::Domain {
            name: "schmidt coefficient",
            value: bad,
            domain: "[0, inf)",
        });
    }
    let d = schmidt.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (s, &l) in schmidt.iter().enumerate() {
        amps[s * d + s] = Complex64::new(l, 0.0);
    }
    CodeState::normalized(n, d, amps)
}

/// Coherent information of a Z-diagonal code from its squared coefficients `w`
/// (summing to one).
///
/// The reference holds a copy of `s`, so the output alone is classical and the joint
/// block splits over the erased bits into real `2^k × 2^k` matrices
/// `λ_a λ_{a'} (1-2p)^{|a ⊕ a'|}`.
pub(crate) fn zdiag_ci(weights: &[f64], params: ChannelParams) -> f64 {
    let n = weights.len().trailing_zeros() as usize;
    let (p, q) = (params.p(), params.q());
    let contrast = 1.0 - 2.0 * p;
    let mut total = 0.0;
    for mask in 0..1usize << n {
        let erased = mask.count_ones() as usize;
        let w = q.powi(erased as i32) * (1.0 - q).powi((n - erased) as i32);
        if w == 0.0 {
            continue;
        }
        let kept = n - erased;
        let (kd, ed) = (1usize << kept, 1usize << erased);
        // amplitude √w_s arranged as [e][a]
        let mut split = vec![0.0; kd * ed];
        for (s, &ws) in weights.iter().enumerate() {
            let (mut a, mut e) = (0, 0);
            for bit in (0..n).rev() {
                let b = (s >> bit) & 1;
                if (mask >> bit) & 1 == 1 {
                    e = (e << 1) | b;
                } else {
                    a = (a << 1) | b;
                }
            }
            split[e * kd + a] = ws.max(0.0);
        }
        let mut marginal = vec![0.0; kd];
        for e in 0..ed {
            for a in 0..kd {
                marginal[a] += split[e * kd + a];
            }
        }
        let s_out = entropy_of_spectrum(marginal.iter().copied());
        let mut s_joint = 0.0;
        for e in 0..ed {
            let amps: Vec<f64> = split[e * kd..(e + 1) * kd].iter().map(|v| v.sqrt()).collect();
            if amps.iter().all(|&v| v == 0.0) {
                continue;
            }
            let m = DMatrix::from_fn(kd, kd, |a, b| {
                amps[a] * amps[b] * contrast.powi((a ^ b).count_ones() as i32)
            });
            s_joint += entropy_of_spectrum(m.symmetric_eigenvalues().iter().copied());
        }
        total += w * (s_out - s_joint);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZdiagOptimum {
    pub value: f64,
    /// `λ_s` in lexicographic pattern order, unit 2-norm.
    pub schmidt: Vec<f64>,
}

pub const ZDIAG_RANDOM_STARTS: usize = 32;
const ZDIAG_MIN_STEP: f64 = 1e-6;
const ZDIAG_MAX_EVALS: usize = 4_000;

fn normalize_simplex(w: &mut [f64]) -> bool {
    let s: f64 = w.iter().sum();
    if !(s > 0.0) {
        return false;
    }
    for v in w.iter_mut() {
        *v /= s;
    }
    true
}

/// Coordinate search on the simplex: nudge one weight up or down and renormalize.
/// A successful move doubles the step, a failed sweep halves it.
fn refine(mut w: Vec<f64>, f: &impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let mut best = f(&w);
    let mut step = 0.05;
    let mut evals = 1;
    while step > ZDIAG_MIN_STEP && evals < ZDIAG_MAX_EVALS {
        let mut improved = false;
        for i in 0..w.len() {
            for sign in [1.0, -1.0] {
                let mut cand = w.clone();
                cand[i] = (cand[i] + sign * step).max(0.0);
                if !normalize_simplex(&mut cand) {
                    continue;
                }
                let v = f(&cand);
                evals += 1;
                if v > best {
                    best = v;
                    w = cand;
                    improved = true;
                    break;
                }
            }
        }
        step = if improved { (2.0 * step).min(0.25) } else { 0.5 * step };
    }
    (best, w)
}

/// Multi-start optimization of the Z-diagonal code on `n ≤ 6` uses: 32 seeded random
/// starts plus the optimal repetition code and the optimal product code.
pub fn optimize_zdiag(params: ChannelParams, n: usize, seed: u64) -> Result<ZdiagOptimum> {
    if n == 0 || n > MAX_USES {
        return Err(Error::TooManyUses(n, MAX_USES));
    }
    let d = 1usize << n;
    let mut starts = Vec::with_capacity(ZDIAG_RANDOM_STARTS + 2);
    let lambda = repetition_ci_opt(params, n)?.lambda_star;
    let mut rep = vec![0.0; d];
    rep[0] = lambda;
    rep[d - 1] = 1.0 - lambda;
    starts.push(rep);
    let z = single_letter_ci(params).z_star;
    starts.push(
        (0..d)
            .map(|s| {
                (0..n)
                    .map(|j| {
                        if (s >> j) & 1 == 0 {
                            0.5 * (1.0 + z)
                        } else {
                            0.5 * (1.0 - z)
                        }
                    })
                    .product()
            })
            .collect(),
    );
    for k in 0..ZDIAG_RANDOM_STARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        normalize_simplex(&mut w);
        starts.push(w);
    }
    let f = |w: &[f64]| zdiag_ci(w, params);
    let results: Vec<(f64, Vec<f64>)> = starts.into_par_iter().map(|w| refine(w, &f)).collect();
    let (value, mut w) = results
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one start");
    // flipping every bit is a symmetry; keep the image with more weight on 0…0
    if w[d - 1] > w[0] {
        w.reverse();
    }
    Ok(ZdiagOptimum {
        value,
        schmidt: w.iter().map(|v| v.sqrt()).collect(),
    })
}

/// `|00⟩|00⟩|ψ₁⟩ + |11⟩|11⟩|ψ₁⟩ + |01⟩|01⟩|ψ₂⟩ + |10⟩|10⟩X|ψ₂⟩` with
/// `|ψ_i⟩ = c_i|0⟩ + d_i|1⟩`, normalized. The first two qubits are the reference; the
/// last three enter the channel.
pub fn chi3_code(c1: Complex64, d1: Complex64, c2: Complex64, d2: Complex64) -> Result<CodeState> {
    let zero = Complex64::new(0.0, 0.0);
    let mut amps = vec![zero; 32];
    // (reference, first two channel bits, |ψ⟩)
    for (r, pair, (a0, a1)) in [
        (0usize, 0usize, (c1, d1)),
        (3, 3, (c1, d1)),
        (1, 1, (c2, d2)),
        (2, 2, (d2, c2)),
    ] {
        amps[r * 8 + pair * 2] = a0;
        amps[r * 8 + pair * 2 + 1] = a1;
    }
    CodeState::normalized(3, 4, amps)
}

#[derive(Clone, Debug, Serialize)]
pub struct Chi3Optimum {
    pub value: f64,
    /// `(c₁, d₁, c₂, d₂)` scaled so the code has unit norm.
    pub coefficients: [Complex64; 4],
    pub code: CodeState,
}

/// PSO over the four complex coefficients with default swarm settings.
pub fn optimize_chi3(params: ChannelParams, seed: u64) -> Result<Chi3Optimum> {
    let best = optimize_code_ci(params, 3, Parametrization::Chi3, &PsoConfig::with_seed(seed))?;
    let a = best.code.amplitudes();
    Ok(Chi3Optimum {
        value: best.value,
        coefficients: [a[0], a[1], a[10], a[11]],
        code: best.code,
    })
}

//! Seeded particle swarm minimization and its use for code-state optimization.
//!
//! The attraction terms use the usual `(p_i - x_i)`, `(g - x_i)` orientation. Setting
//! [`PsoConfig::literal_signs`] flips them to `(x_i - p_i)`, `(x_i - g)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dephrasure::{single_letter_ci, ChannelParams};
use crate::error::{Error, Result};
use crate::multiletter::{chi3_code, multiletter_ci, repetition_ci_opt, repetition_code, CodeState, RepetitionParams};
use crate::quantum::purify;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsoConfig {
    pub n_particles: usize,
    pub c_inertia: f64,
    pub c_self: f64,
    pub c_social: f64,
    pub max_iterations: usize,
    /// Per-dimension `[lo, hi]`; a single entry applies to every dimension.
    pub bounds: Vec<(f64, f64)>,
    pub seed: u64,
    /// Stop once the incumbent improved by less than this over `stall_iterations`.
    pub stall_tolerance: f64,
    pub stall_iterations: usize,
    /// Draw `u_self`, `u_soc` per dimension instead of once per particle.
    pub per_dimension_draws: bool,
    pub literal_signs: bool,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            n_particles: 64,
            c_inertia: 0.729,
            c_self: 1.49445,
            c_social: 1.49445,
            max_iterations: 500,
            bounds: vec![(-1.0, 1.0)],
            seed: 0,
            stall_tolerance: 1e-9,
            stall_iterations: 50,
            per_dimension_draws: false,
            literal_signs: false,
        }
    }
}

impl PsoConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn resolved_bounds(&self, dim: usize) -> Result<Vec<(f64, f64)>> {
        if self.n_particles < 2 {
            return Err(Error::InvalidConfig("n_particles must be >= 2".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be >= 1".into()));
        }
        for (name, c) in [
            ("c_inertia", self.c_inertia),
            ("c_self", self.c_self),
            ("c_social", self.c_social),
        ] {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} = {c}")));
            }
        }
        let bounds = match self.bounds.len() {
            1 => vec![self.bounds[0]; dim],
            l if l == dim => self.bounds.clone(),
            l => return Err(Error::InvalidConfig(format!("{l} bounds for dimension {dim}"))),
        };
        if let Some((lo, hi)) = bounds
            .iter()
            .find(|(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
        {
            return Err(Error::InvalidConfig(format!("degenerate bounds [{lo}, {hi}]")));
        }
        Ok(bounds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsoResult {
    pub best_position: Vec<f64>,
    pub best_value: f64,
    pub iterations_run: usize,
    pub evaluations: usize,
    /// Incumbent value after initialization and after each iteration.
    pub history: Vec<f64>,
}

/// One velocity step. `u_self` and `u_social` hold either one draw or one per dimension.
#[allow(clippy::too_many_arguments)]
pub fn velocity_update(
    config: &PsoConfig,
    velocity: &[f64],
    position: &[f64],
    personal_best: &[f64],
    global_best: &[f64],
    u_self: &[f64],
    u_social: &[f64],
) -> Vec<f64> {
    let pick = |u: &[f64], d: usize| if u.len() == 1 { u[0] } else { u[d] };
    let sign = if config.literal_signs { -1.0 } else { 1.0 };
    (0..velocity.len())
        .map(|d| {
            config.c_inertia * velocity[d]
                + sign * config.c_self * pick(u_self, d) * (personal_best[d] - position[d])
                + sign * config.c_social * pick(u_social, d) * (global_best[d] - position[d])
        })
        .collect()
}

fn eval_all<F: Fn(&[f64]) -> f64 + Sync>(f: &F, xs: &[Vec<f64>]) -> Vec<f64> {
    xs.par_iter()
        .map(|x| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        })
        .collect()
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Minimizes `objective` on the box given by `config.bounds`.
pub fn pso_minimize<F: Fn(&[f64]) -> f64 + Sync>(objective: F, dim: usize, config: &PsoConfig) -> Result<PsoResult> {
    pso_minimize_with_starts(objective, dim, config, &[])
}

/// As [`pso_minimize`], with the first particles placed at `starts` (clipped to the box).
pub fn pso_minimize_with_starts<F: Fn(&[f64]) -> f64 + Sync>(
    objective: F,
    dim: usize,
    config: &PsoConfig,
    starts: &[Vec<f64>],
) -> Result<PsoResult> {
    let bounds = config.resolved_bounds(dim)?;
    if let Some(s) = starts.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: s.len(),
        });
    }
    let clip = |x: &mut Vec<f64>| {
        for (xi, &(lo, hi)) in x.iter_mut().zip(&bounds) {
            *xi = xi.clamp(lo, hi);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_particles;
    let mut xs: Vec<Vec<f64>> = (0..n)
        .map(|_| bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect())
        .collect();
    let mut vs: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| rng.random_range(-(hi - lo)..(hi - lo)))
                .collect()
        })
        .collect();
    for (x, s) in xs.iter_mut().zip(starts) {
        x.clone_from(s);
        clip(x);
    }

    let mut values = eval_all(&objective, &xs);
    let mut evaluations = n;
    let mut pbest = xs.clone();
    let mut pbest_val = values.clone();
    let g = argmin(&pbest_val);
    let mut gbest = pbest[g].clone();
    let mut gbest_val = pbest_val[g];
    let mut history = vec![gbest_val];
    let draws = if config.per_dimension_draws { dim } else { 1 };

    let mut iterations_run = 0;
    while iterations_run < config.max_iterations {
        let us: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
            .map(|_| {
                let a = (0..draws).map(|_| rng.random::<f64>()).collect();
                let b = (0..draws).map(|_| rng.random::<f64>()).collect();
                (a, b)
            })
            .collect();
        for i in 0..n {
            vs[i] = velocity_update(config, &vs[i], &xs[i], &pbest[i], &gbest, &us[i].0, &us[i].1);
            for d in 0..dim {
                xs[i][d] += vs[i][d];
            }
            clip(&mut xs[i]);
        }
        values = eval_all(&objective, &xs);
        evaluations += n;
        for i in 0..n {
            if values[i] < pbest_val[i] {
                pbest_val[i] = values[i];
                pbest[i].clone_from(&xs[i]);
            }
        }
        let g = argmin(&pbest_val);
        if pbest_val[g] < gbest_val {
            gbest_val = pbest_val[g];
            gbest.clone_from(&pbest[g]);
        }
        iterations_run += 1;
        history.push(gbest_val);
        let w = config.stall_iterations;
        if w > 0 && history.len() > w {
            let before = history[history.len() - 1 - w];
            if before - gbest_val < config.stall_tolerance {
                break;
            }
        }
    }
    Ok(PsoResult {
        best_position: gbest,
        best_value: gbest_val,
        iterations_run,
        evaluations,
        history,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    /// Every amplitude of `reference ⊗ (C²)^{⊗n}` with a `2^n`-dimensional reference.
    Full,
    /// The four-coefficient family on three uses.
    Chi3,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeOptimum {
    pub value: f64,
    pub code: CodeState,
    pub pso: PsoResult,
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn from_complex(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Scales real parameters into the `[-1, 1]` box.
fn boxed(mut x: Vec<f64>) -> Vec<f64> {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m > 0.0 {
        for v in &mut x {
            *v /= m;
        }
    }
    x
}

fn code_from(params_kind: Parametrization, n: usize, x: &[f64]) -> Result<CodeState> {
    match params_kind {
        Parametrization::Full => CodeState::normalized(n, 1 << n, to_complex(x)),
        Parametrization::Chi3 => {
            let z = to_complex(x);
            chi3_code(z[0], z[1], z[2], z[3])
        }
    }
}

/// Embeds a code with a smaller reference into a `2^n`-dimensional reference.
fn embed_reference(code: &CodeState, n: usize) -> Vec<Complex64> {
    let d = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    amps[..code.amplitudes().len()].copy_from_slice(code.amplitudes());
    amps
}

/// `|ψ_z⟩^{⊗n}` with the references gathered in front.
fn product_code(z: f64, n: usize) -> Vec<Complex64> {
    let one = purify(&crate::dephrasure::bloch_state(0.0, 0.0, z));
    let a = one.amplitudes();
    let d = 1usize << n;
    (0..d * d)
        .map(|idx| {
            let (r, s) = (idx / d, idx % d);
            (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| {
                let rb = (r >> (n - 1 - j)) & 1;
                let sb = (s >> (n - 1 - j)) & 1;
                acc * a[rb * 2 + sb]
            })
        })
        .collect()
}

fn warm_starts(params: ChannelParams, n: usize, kind: Parametrization) -> Result<Vec<Vec<f64>>> {
    Ok(match kind {
        Parametrization::Full => {
            let lambda = repetition_ci_opt(params, n)?.lambda_star;
            let rep = repetition_code(RepetitionParams::new(n, lambda)?);
            let z = single_letter_ci(params).z_star;
            vec![
                boxed(from_complex(&embed_reference(&rep, n))),
                boxed(from_complex(&product_code(z, n))),
            ]
        }
        Parametrization::Chi3 => {
            let c = |re: f64| [re, 0.0];
            let mut starts = vec![
                [c(1.0), c(1.0), c(0.0), c(0.0)],
                [c(1.0), c(0.0), c(0.0), c(0.0)],
                [c(1.0), c(1.0), c(1.0), c(1.0)],
                [c(1.0), c(0.0), c(1.0), c(0.0)],
            ];
            // ψ₂ = |1⟩ with a small |±⟩ admixture on ψ₁
            for eps in [0.05, 0.1, 0.2, 0.4] {
                starts.push([c(eps), c(-eps), c(0.0), c(1.0)]);
                starts.push([c(eps), c(eps), c(0.0), c(1.0)]);
            }
            starts.iter().map(|v| v.concat()).collect()
        }
    })
}

/// Maximizes [`multiletter_ci`] over a code family with warm-started PSO.
pub fn optimize_code_ci(
    params: ChannelParams,
    n: usize,
    kind: Parametrization,
    config: &PsoConfig,
) -> Result<CodeOptimum> {
    let dim = match kind {
        Parametrization::Full if (1..=3).contains(&n) => 2 << (2 * n),
        Parametrization::Chi3 if n == 3 => 8,
        _ => {
            return Err(Error::Unsupported(format!("{kind:?} parametrization with n = {n}")));
        }
    };
    let objective = |x: &[f64]| match code_from(kind, n, x) {
        Ok(code) => -multiletter_ci(&code, params).expect("n within limits"),
        Err(_) => f64::INFINITY,
    };
    let starts = warm_starts(params, n, kind)?;
    let result = pso_minimize_with_starts(objective, dim, config, &starts)?;
    let code = code_from(kind, n, &result.best_position)?;
    Ok(CodeOptimum {
        value: -result.best_value,
        code,
        pso: result,
    })
}

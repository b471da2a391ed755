//! Private information of qubit ensembles through the dephrasure channel.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::dephrasure::{bloch_state, complementary_apply, dephrasure_kraus, ChannelParams};
use crate::error::{check_probability, Error, Result};
use crate::quantum::{h2, h2_increment, DensityMatrix, PureState};
use crate::search::grid_then_golden;

const PROB_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let dim = members
            .first()
            .ok_or(Error::InvalidConfig("empty ensemble".into()))?
            .1
            .dim();
        if let Some((_, m)) = members.iter().find(|(_, m)| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: m.dim(),
            });
        }
        if let Some(&(w, _)) = members.iter().find(|(w, _)| !(*w >= 0.0)) {
            return Err(Error::Domain {
                name: "ensemble probability",
                value: w,
                domain: "[0, 1]",
            });
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::BadTrace(total));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }
}

fn holevo<F: Fn(&DensityMatrix) -> Result<DensityMatrix>>(e: &Ensemble, channel: F) -> Result<f64> {
    let mut avg: Option<DensityMatrix> = None;
    let mut inner = 0.0;
    for (w, rho) in &e.members {
        let out = channel(rho)?;
        inner += w * out.entropy();
        let scaled = out.matrix().map(|z| z * *w);
        avg = Some(match avg {
            None => DensityMatrix::from_matrix_unchecked(scaled),
            Some(a) => DensityMatrix::from_matrix_unchecked(a.matrix() + scaled),
        });
    }
    Ok(avg.expect("nonempty").entropy() - inner)
}

/// `I(X;B) - I(X;E)` with both mutual informations in Holevo form.
pub fn ensemble_private_info(e: &Ensemble, params: ChannelParams) -> Result<f64> {
    if e.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: e.dim(),
        });
    }
    let k = dephrasure_kraus(params);
    let bob = holevo(e, |rho| k.apply(rho))?;
    let eve = holevo(e, |rho| complementary_apply(params, rho))?;
    Ok(bob - eve)
}

/// `{½: λ|+⟩⟨+| + (1-λ)|−⟩⟨−|, ½: (1-λ)|+⟩⟨+| + λ|−⟩⟨−|}`.
pub fn plusminus_ensemble(lambda: f64) -> Result<Ensemble> {
    check_probability("lambda", lambda)?;
    let m = 2.0 * lambda - 1.0;
    Ensemble::new(vec![(0.5, bloch_state(m, 0.0, 0.0)), (0.5, bloch_state(-m, 0.0, 0.0))])
}

/// Private information of [`plusminus_ensemble`] with `ε = 1 - λ`:
/// `(1-q)(1 - h(p + ε(1-2p))) - q(1 - h(ε))`.
pub(crate) fn plusminus_private_info(params: ChannelParams, lambda: f64) -> f64 {
    let (p, q) = (params.p(), params.q());
    let eps = 1.0 - lambda.max(1.0 - lambda);
    // 1 - h(p + δ) = (1 - h(p)) - [h(p + δ) - h(p)]
    let bob = (1.0 - q) * ((1.0 - h2(p)) - h2_increment(p, eps * (1.0 - 2.0 * p)));
    bob - q * (1.0 - h2(eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrivateBound {
    pub value: f64,
    /// In `[½, 1]`.
    pub lambda_star: f64,
}

pub const PRIVATE_GRID_STEP: f64 = 1e-3;

/// `max_λ I_p(E_λ)` over `λ ∈ [½, 1]`.
pub fn private_lower_bound(params: ChannelParams) -> PrivateBound {
    let f = |lambda: f64| plusminus_private_info(params, lambda);
    let m = grid_then_golden(&f, 0.5, 1.0, PRIVATE_GRID_STEP, 1e-12);
    PrivateBound {
        value: m.value,
        lambda_star: m.arg,
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleSearch {
    pub value: f64,
    pub ensemble: Ensemble,
    /// Index of the trial that seeded the refinement.
    pub best_trial: usize,
}

pub const SEARCH_REFINEMENT_STEPS: usize = 200;
const REFERENCE_DIM: usize = 2;
const INPUT_DIM: usize = 2;

fn gaussian_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Measuring `S` of a pure state on `S ⊗ R ⊗ A` gives `p_x = ‖φ_x‖²` and
/// `ρ_x = tr_R |φ_x⟩⟨φ_x| / p_x`.
fn ensemble_from_amplitudes(amps: &[Complex64]) -> Result<Ensemble> {
    let block = REFERENCE_DIM * INPUT_DIM;
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !(norm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut members = Vec::new();
    for phi in amps.chunks(block) {
        let w: f64 = phi.iter().map(|a| a.norm_sqr()).sum::<f64>() / norm;
        if w == 0.0 {
            continue;
        }
        let psi = PureState::normalized(DVector::from_column_slice(phi))?;
        members.push((w, psi.reduced(&[REFERENCE_DIM, INPUT_DIM], &[1])?));
    }
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    for m in &mut members {
        m.0 /= total;
    }
    Ensemble::new(members)
}

fn score(amps: &[Complex64], params: ChannelParams) -> f64 {
    ensemble_from_amplitudes(amps)
        .and_then(|e| ensemble_private_info(&e, params))
        .unwrap_or(f64::NEG_INFINITY)
}

/// Haar-random pure states on `S ⊗ R ⊗ A` (`|S| = ensemble_size`, `|R| = |A| = 2`),
/// best of `trials`, then up to 200 accepted-or-rejected Gaussian perturbation steps.
/// Trial `i` draws from ChaCha stream `i` of `seed`.
pub fn random_ensemble_search(
    params: ChannelParams,
    seed: u64,
    trials: usize,
    ensemble_size: usize,
) -> Result<EnsembleSearch> {
    if trials == 0 {
        return Err(Error::InvalidConfig("no candidates: trials = 0".into()));
    }
    if ensemble_size == 0 {
        return Err(Error::InvalidConfig("ensemble_size must be >= 1".into()));
    }
    let len = ensemble_size * REFERENCE_DIM * INPUT_DIM;
    let candidates: Vec<(f64, Vec<Complex64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let amps = gaussian_vector(len, &mut rng);
            (score(&amps, params), amps)
        })
        .collect();
    let mut best_trial = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.0 > candidates[best_trial].0 {
            best_trial = i;
        }
    }
    let (mut value, mut amps) = candidates[best_trial].clone();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut scale = 0.1;
    for _ in 0..SEARCH_REFINEMENT_STEPS {
        let kick = gaussian_vector(len, &mut rng);
        let cand: Vec<Complex64> = amps.iter().zip(&kick).map(|(a, k)| a + k * scale).collect();
        let v = score(&cand, params);
        if v > value {
            value = v;
            amps = cand;
        } else {
            scale *= 0.95;
        }
    }
    Ok(EnsembleSearch {
        value,
        ensemble: ensemble_from_amplitudes(&amps)?,
        best_trial,
    })
}

//! Coherent information of `n` parallel uses of the dephrasure channel.
//!
//! `N^{⊗n}` splits into a sum over erasure patterns `s ∈ {0,1}^n` whose outputs live
//! on orthogonal flag subspaces. For each pattern the erased qubits are traced out
//! and every surviving qubit is dephased. The pattern weights contribute the same
//! classical entropy to both `S(B)` and `S(RB)` and are dropped from the difference.

mod codes;
mod repetition;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dephrasure::{dephrasure_kraus, ChannelParams};
use crate::error::{Error, Result};
use crate::quantum::{entropy_of_factor, CMatrix, CVector, DensityMatrix, PureState};

pub use codes::{chi3_code, optimize_chi3, optimize_zdiag, zdiag_code, Chi3Optimum, ZdiagOptimum};
pub use repetition::{
    repetition_ci, repetition_ci_opt, repetition_code, threshold_f, u_value, RepetitionOptimum, RepetitionParams,
};

/// Largest `n` accepted by [`multiletter_ci`].
pub const MAX_USES: usize = 6;
/// Largest `n` accepted by [`brute_force_ci`].
pub const MAX_BRUTE_FORCE_USES: usize = 3;

const NORM_TOL: f64 = 1e-12;

/// A pure state on `reference ⊗ (C²)^{⊗n}`. Amplitude index `r·2^n + s`, where the
/// first channel qubit is the most significant bit of `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodeState {
    n_uses: usize,
    ref_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl CodeState {
    /// Requires unit norm within `1e-12`.
    pub fn new(n_uses: usize, ref_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::shaped(n_uses, ref_dim, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::BadNorm(norm));
        }
        Ok(state)
    }

    /// Rescales to unit norm; the zero vector is an error.
    pub fn normalized(n_uses: usize, ref_dim: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::shaped(n_uses, ref_dim, amplitudes)
    }

    fn shaped(n_uses: usize, ref_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_uses == 0 || n_uses > 20 {
            return Err(Error::InvalidConfig(format!("n_uses = {n_uses}")));
        }
        if ref_dim == 0 {
            return Err(Error::InvalidConfig("ref_dim = 0".into()));
        }
        let expected = ref_dim << n_uses;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            n_uses,
            ref_dim,
            amplitudes,
        })
    }

    /// Gaussian amplitudes, normalized: Haar-distributed on the full space.
    pub fn haar_random<R: Rng + ?Sized>(n_uses: usize, ref_dim: usize, rng: &mut R) -> Result<Self> {
        let len = ref_dim << n_uses;
        let amps = (0..len)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(n_uses, ref_dim, amps)
    }

    pub fn n_uses(&self) -> usize {
        self.n_uses
    }

    pub fn ref_dim(&self) -> usize {
        self.ref_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_pure(&self) -> PureState {
        PureState::new(CVector::from_column_slice(&self.amplitudes)).expect("code states are normalized")
    }

    /// The channel input `tr_R |ψ⟩⟨ψ|` on `2^n` dimensions.
    pub fn input_state(&self) -> DensityMatrix {
        let d = 1usize << self.n_uses;
        let m = CMatrix::from_fn(self.ref_dim, d, |r, s| self.amplitudes[r * d + s]);
        DensityMatrix::from_matrix_unchecked(m.transpose() * m.map(|z| z.conj()))
    }
}

/// One erasure pattern's contribution.
#[derive(Clone, Debug)]
pub struct ErasurePatternBlock {
    /// `pattern[j]` is true when qubit `j` is erased.
    pub pattern: Vec<bool>,
    pub weight: f64,
    /// State on `reference ⊗ kept qubits`.
    pub block: DensityMatrix,
}

/// `F` with `F F†` the pattern block on `ref ⊗ kept`: rows `(r, a)`, columns `(t, e)`
/// with `t` the dephasing pattern on kept qubits and `e` the erased bits.
fn block_factor(code: &CodeState, p: f64, erased_mask: usize) -> (CMatrix, usize) {
    let n = code.n_uses;
    let d = 1usize << n;
    let n_erased = erased_mask.count_ones() as usize;
    let k = n - n_erased;
    let (kd, ed) = (1usize << k, 1usize << n_erased);
    let mut split = vec![(0usize, 0usize); d];
    for (s, slot) in split.iter_mut().enumerate() {
        let (mut a, mut e) = (0, 0);
        for bit in (0..n).rev() {
            let b = (s >> bit) & 1;
            if (erased_mask >> bit) & 1 == 1 {
                e = (e << 1) | b;
            } else {
                a = (a << 1) | b;
            }
        }
        *slot = (a, e);
    }
    let weights: Vec<f64> = (0..kd)
        .map(|t| {
            let flips = t.count_ones() as i32;
            (p.powi(flips) * (1.0 - p).powi(k as i32 - flips)).sqrt()
        })
        .collect();
    let mut f = CMatrix::zeros(code.ref_dim * kd, kd * ed);
    for r in 0..code.ref_dim {
        for (s, &(a, e)) in split.iter().enumerate() {
            let amp = code.amplitudes[r * d + s];
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (t, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let sign = if (t & a).count_ones() % 2 == 0 { w } else { -w };
                f[(r * kd + a, t * ed + e)] = amp * sign;
            }
        }
    }
    (f, kd)
}

/// Reorders `F` (rows `(r, a)`) into the factor of the output alone (rows `a`).
fn output_factor(f: &CMatrix, ref_dim: usize, kd: usize) -> CMatrix {
    let cols = f.ncols();
    CMatrix::from_fn(kd, ref_dim * cols, |a, c| f[((c / cols) * kd + a, c % cols)])
}

fn pattern_weight(q: f64, n: usize, erased: usize) -> f64 {
    q.powi(erased as i32) * (1.0 - q).powi((n - erased) as i32)
}

fn pattern_bits(n: usize, mask: usize) -> Vec<bool> {
    (0..n).map(|j| (mask >> (n - 1 - j)) & 1 == 1).collect()
}

/// All `2^n` pattern blocks, patterns in lexicographic order.
pub fn pattern_decompose(code: &CodeState, params: ChannelParams, n: usize) -> Result<Vec<ErasurePatternBlock>> {
    if code.n_uses != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: code.n_uses,
        });
    }
    Ok((0..1usize << n)
        .map(|mask| {
            let (f, _) = block_factor(code, params.p(), mask);
            let m = &f * f.adjoint();
            ErasurePatternBlock {
                pattern: pattern_bits(n, mask),
                weight: pattern_weight(params.q(), n, mask.count_ones() as usize),
                block: DensityMatrix::from_matrix_unchecked(m),
            }
        })
        .collect())
}

/// `I_c(ψ, N^{⊗n}) = Σ_s q_s [S(C_s(ρ)) - S((id ⊗ C_s)(ψ))]`, for `n ≤ 6`.
pub fn multiletter_ci(code: &CodeState, params: ChannelParams) -> Result<f64> {
    let n = code.n_uses;
    if n > MAX_USES {
        return Err(Error::TooManyUses(n, MAX_USES));
    }
    let mut total = 0.0;
    for mask in 0..1usize << n {
        let w = pattern_weight(params.q(), n, mask.count_ones() as usize);
        if w == 0.0 {
            continue;
        }
        let (f, kd) = block_factor(code, params.p(), mask);
        let s_joint = entropy_of_factor(&f);
        let s_out = entropy_of_factor(&output_factor(&f, code.ref_dim, kd));
        total += w * (s_out - s_joint);
    }
    Ok(total)
}

/// `S(N^{⊗n}(ρ)) - S((id ⊗ N^{⊗n})(ψ))` on the full `3^n`-dimensional output, `n ≤ 3`.
///
/// The joint output is assembled densely as `Σ_K (𝟙 ⊗ K)|ψ⟩⟨ψ|(𝟙 ⊗ K)†` over the
/// `4^n` tensor-product Kraus operators.
pub fn brute_force_ci(code: &CodeState, params: ChannelParams) -> Result<f64> {
    let n = code.n_uses;
    if n > MAX_BRUTE_FORCE_USES {
        return Err(Error::TooManyUses(n, MAX_BRUTE_FORCE_USES));
    }
    let single = dephrasure_kraus(params);
    let mut channel = single.clone();
    for _ in 1..n {
        channel = channel.tensor(&single);
    }
    let d_in = 1usize << n;
    let d_out = channel.out_dim();
    // ψ as a (reference × input) matrix; (𝟙 ⊗ K)ψ is Ψ Kᵀ read row-major
    let psi = CMatrix::from_fn(code.ref_dim, d_in, |r, s| code.amplitudes[r * d_in + s]);
    let dim = code.ref_dim * d_out;
    let mut joint = CMatrix::zeros(dim, dim);
    for k in channel.operators() {
        let img = &psi * k.transpose();
        let v = CVector::from_fn(dim, |i, _| img[(i / d_out, i % d_out)]);
        joint += &v * v.adjoint();
    }
    let out = channel.apply(&code.input_state())?;
    Ok(out.entropy() - DensityMatrix::from_matrix_unchecked(joint).entropy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephrasure::{coherent_info_z, single_letter_ci};
    use crate::quantum::purify;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(p: f64, q: f64) -> ChannelParams {
        ChannelParams::new(p, q).unwrap()
    }

    fn z_code(z: f64) -> CodeState {
        let rho = crate::dephrasure::bloch_state(0.0, 0.0, z);
        let psi = purify(&rho);
        CodeState::new(1, 2, psi.amplitudes().iter().copied().collect()).unwrap()
    }

    #[test]
    fn construction_validates() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!(CodeState::new(1, 1, vec![c(1.0), c(0.0)]).is_ok());
        assert!(matches!(
            CodeState::new(1, 1, vec![c(1.0), c(1.0)]),
            Err(Error::BadNorm(_))
        ));
        assert!(matches!(
            CodeState::normalized(1, 1, vec![c(0.0), c(0.0)]),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            CodeState::normalized(2, 1, vec![c(1.0), c(0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_use_matches_formula() {
        for &(p, q, z) in &[(0.1, 0.2, 0.3), (0.3, 0.05, -0.8), (0.0, 0.4, 0.0)] {
            let code = z_code(z);
            let expected = coherent_info_z(params(p, q), z).unwrap();
            assert_abs_diff_eq!(multiletter_ci(&code, params(p, q)).unwrap(), expected, epsilon = 1e-10);
            assert_abs_diff_eq!(brute_force_ci(&code, params(p, q)).unwrap(), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn pattern_weights_and_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let code = CodeState::haar_random(3, 2, &mut rng).unwrap();
        let blocks = pattern_decompose(&code, params(0.2, 0.3), 3).unwrap();
        assert_eq!(blocks.len(), 8);
        assert_abs_diff_eq!(blocks.iter().map(|b| b.weight).sum::<f64>(), 1.0, epsilon = 1e-12);
        for b in &blocks {
            assert_abs_diff_eq!(b.block.matrix().trace().re, 1.0, epsilon = 1e-12);
            let kept = b.pattern.iter().filter(|&&e| !e).count();
            assert_eq!(b.block.dim(), 2 << kept);
        }
        assert_eq!(blocks[1].pattern, vec![false, false, true]);
        assert!(pattern_decompose(&code, params(0.2, 0.3), 2).is_err());
    }

    #[test]
    fn fully_erased_block_is_reference_marginal() {
        let code = z_code(0.4);
        let blocks = pattern_decompose(&code, params(0.1, 0.25), 1).unwrap();
        assert_abs_diff_eq!(blocks[1].weight, 0.25);
        let m = blocks[1].block.matrix();
        assert_abs_diff_eq!(m[(0, 0)].re, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 1)].re, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn product_code_is_additive() {
        let par = params(0.1, 0.2);
        let sl = single_letter_ci(par);
        let one = z_code(sl.z_star);
        let amps = one.amplitudes();
        // reference (r1 r2), inputs (s1 s2): |ψ⟩ ⊗ |ψ⟩ reordered
        let mut two = vec![Complex64::new(0.0, 0.0); 16];
        for r1 in 0..2 {
            for r2 in 0..2 {
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        two[(r1 * 2 + r2) * 4 + s1 * 2 + s2] = amps[r1 * 2 + s1] * amps[r2 * 2 + s2];
                    }
                }
            }
        }
        let code = CodeState::new(2, 4, two).unwrap();
        assert_abs_diff_eq!(multiletter_ci(&code, par).unwrap(), 2.0 * sl.value, epsilon = 1e-10);
    }

    #[test]
    fn unentangled_pure_code_has_zero_ci() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let code = CodeState::haar_random(3, 1, &mut rng).unwrap();
        assert_abs_diff_eq!(multiletter_ci(&code, params(0.2, 0.1)).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=3 {
            for ref_dim in [1, 2, 3, 1 << n] {
                let code = CodeState::haar_random(n, ref_dim, &mut rng).unwrap();
                let par = params(rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
                let a = multiletter_ci(&code, par).unwrap();
                let b = brute_force_ci(&code, par).unwrap();
                assert!((a - b).abs() < 1e-9, "n={n} ref={ref_dim}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn oracle_matches_identity_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let code = CodeState::haar_random(2, 3, &mut rng).unwrap();
        let par = params(0.17, 0.29);
        let mut channel = dephrasure_kraus(par);
        channel = channel.tensor(&dephrasure_kraus(par));
        let joint = crate::quantum::KrausSet::identity(3)
            .tensor(&channel)
            .apply(&DensityMatrix::from_pure(&code.to_pure()))
            .unwrap();
        let out = channel.apply(&code.input_state()).unwrap();
        assert_abs_diff_eq!(
            brute_force_ci(&code, par).unwrap(),
            out.entropy() - joint.entropy(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn use_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let code = CodeState::haar_random(4, 1, &mut rng).unwrap();
        assert!(matches!(
            brute_force_ci(&code, params(0.1, 0.1)),
            Err(Error::TooManyUses(4, 3))
        ));
        let code = CodeState::haar_random(7, 1, &mut rng).unwrap();
        assert!(matches!(
            multiletter_ci(&code, params(0.1, 0.1)),
            Err(Error::TooManyUses(7, 6))
        ));
    }
}

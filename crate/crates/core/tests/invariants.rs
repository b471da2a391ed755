use dephrasure::antideg::verify_antidegradable;
use dephrasure::compci::comp_ci_x_state;
use dephrasure::dephrasure::{coherent_info_direct, coherent_info_z, g_curve, j_curve, k_curve};
use dephrasure::multiletter::{
    brute_force_ci, multiletter_ci, repetition_ci, repetition_code, CodeState, RepetitionParams,
};
use dephrasure::private::{ensemble_private_info, plusminus_ensemble, private_lower_bound};
use dephrasure::quantum::DensityMatrix;
use dephrasure::{single_letter_ci, ChannelParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(p: f64, q: f64) -> ChannelParams {
    ChannelParams::new(p, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curves_lie_below_k(p in 0.0f64..0.5) {
        let (g, j, k) = (g_curve(p), j_curve(p), k_curve(p));
        prop_assert!(g <= k + 1e-12 && j <= k + 1e-12, "{g} {j} {k}");
    }

    #[test]
    fn z_closed_form_matches_kraus(p in 0.0f64..=1.0, q in 0.0f64..=1.0, z in -1.0f64..=1.0) {
        let par = params(p, q);
        let rho = DensityMatrix::from_bloch(0.0, 0.0, z).unwrap();
        let a = coherent_info_z(par, z).unwrap();
        let b = coherent_info_direct(par, &rho).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn single_letter_dominates_every_z(p in 0.0f64..=0.5, q in 0.0f64..=0.5, z in -1.0f64..=1.0) {
        let par = params(p, q);
        prop_assert!(single_letter_ci(par).value >= coherent_info_z(par, z).unwrap() - 1e-12);
    }

    #[test]
    fn single_letter_vanishes_above_k(p in 0.0f64..=0.5, t in 0.0f64..=1.0) {
        let k = k_curve(p);
        let par = params(p, k + (1.0 - k) * t);
        prop_assert!(single_letter_ci(par).value <= 1e-9);
        prop_assert!(verify_antidegradable(par, 1e-10).unwrap().antidegradable);
    }

    #[test]
    fn repetition_is_symmetric_in_lambda(
        p in 0.0f64..=0.5, q in 0.0f64..=0.5, lambda in 0.0f64..=1.0, n in 1usize..=5
    ) {
        let par = params(p, q);
        let a = repetition_ci(par, RepetitionParams::new(n, lambda).unwrap());
        let b = repetition_ci(par, RepetitionParams::new(n, 1.0 - lambda).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn repetition_closed_form_matches_blocks(
        p in 0.0f64..=0.5, q in 0.0f64..=0.5, lambda in 0.0f64..=1.0, n in 1usize..=4
    ) {
        let par = params(p, q);
        let rep = RepetitionParams::new(n, lambda).unwrap();
        let a = repetition_ci(par, rep);
        let b = multiletter_ci(&repetition_code(rep), par).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn block_route_matches_dense_oracle(seed: u64, n in 1usize..=2, p in 0.0f64..=0.5, q in 0.0f64..=0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = CodeState::haar_random(n, 1 << n, &mut rng).unwrap();
        let par = params(p, q);
        let a = multiletter_ci(&code, par).unwrap();
        let b = brute_force_ci(&code, par).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn private_bound_covers_uniform_input(p in 0.0f64..=0.5, q in 0.0f64..=0.5) {
        let par = params(p, q);
        let uniform = coherent_info_z(par, 0.0).unwrap();
        prop_assert!(private_lower_bound(par).value >= uniform - 1e-12);
        let edge = ensemble_private_info(&plusminus_ensemble(1.0).unwrap(), par).unwrap();
        prop_assert!((edge - uniform).abs() < 1e-10);
    }

    #[test]
    fn complementary_endpoints(p in 0.0f64..=0.5, q in 0.0f64..=0.5) {
        let par = params(p, q);
        prop_assert!(comp_ci_x_state(par, 1.0).unwrap().abs() < 1e-15);
        let mixed = comp_ci_x_state(par, 0.0).unwrap();
        prop_assert!((mixed + coherent_info_z(par, 0.0).unwrap()).abs() < 1e-12);
    }
}

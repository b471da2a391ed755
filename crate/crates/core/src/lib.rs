//! Numerics for the dephrasure channel: coherent information (single- and
//! multi-letter), antidegradability witnesses, private information bounds and
//! particle swarm code search.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antideg;
pub mod compci;
pub mod dephrasure;
pub mod error;
pub mod multiletter;
pub mod private;
pub mod pso;
pub mod quantum;
mod search;

pub use antideg::{antidegrading_map, usd_povm, verify_antidegradable, DegradingMapReport, MapKind, Verdict};
pub use compci::{comp_ci_x_state, positivity_witness, WitnessResult};
pub use dephrasure::{
    coherent_info_xz, coherent_info_z, complementary_kraus, dephrasure_kraus, region_curves, single_letter_ci,
    BlochVector, ChannelParams, RegionCurves, SingleLetter,
};
pub use error::{Error, Result};
pub use multiletter::{
    brute_force_ci, chi3_code, multiletter_ci, optimize_chi3, optimize_zdiag, pattern_decompose, repetition_ci,
    repetition_ci_opt, threshold_f, u_value, zdiag_code, CodeState, ErasurePatternBlock, RepetitionParams,
};
pub use private::{ensemble_private_info, plusminus_ensemble, private_lower_bound, random_ensemble_search, Ensemble};
pub use pso::{optimize_code_ci, pso_minimize, Parametrization, PsoConfig, PsoResult};
pub use quantum::{DensityMatrix, KrausSet, PureState};

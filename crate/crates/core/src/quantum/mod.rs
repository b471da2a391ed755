//! Dense complex linear algebra for small quantum systems: states, entropies,
//! Kraus maps, Choi matrices, partial traces and purifications.
//!
//! Conventions: tensor products order the first factor as the most significant
//! index, entropies are in bits, and Choi matrices put the input factor first.

mod channel;
mod entropy;
mod state;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub use channel::{apply_kraus, choi_of, dephasing_kraus, is_completely_positive, ChoiMatrix, KrausSet, Superoperator};
pub use entropy::{binary_entropy, von_neumann_entropy};
pub use state::{partial_trace, purify, DensityMatrix, PureState};

pub(crate) use entropy::{entropy_of_factor, entropy_of_spectrum, h2, h2_increment};
pub(crate) use state::bloch_matrix;

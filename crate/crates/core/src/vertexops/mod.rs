//! Vertex operators `Y_W(v, z)` mode by mode, the operators `L(n)` for
//! `n >= -1`, and exact checkers for the identities they satisfy.

mod checks;
mod contragredient;
mod field;
mod virasoro;

pub use checks::{
    check_d_equals_lminus1, check_field_commutator, check_l0_grading, check_l_mode_commutator,
    check_virasoro, sweep_basis, CheckReport,
};
pub(crate) use checks::{spec_params, sweep_states, with};
pub use contragredient::{adjoint_mode_apply, adjoint_mode_matrix, DualModeMatrix};
pub use field::vertex_mode;
pub use virasoro::{d_apply, l_apply, l_apply_fock, l_is_exact};

use serde::{Deserialize, Serialize};

use crate::fock::{FockError, SpecError};

/// Bounds that make infinite sums and sweeps finite.
///
/// `max_wt` / `max_nwt` bound the basis states a sweep visits; `j_max` cuts
/// off the `t`-power sum in the zero-mode tail of `L(-1)` when `c != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_wt: u64,
    pub max_nwt: u64,
    pub j_max: u32,
}

impl Truncation {
    pub fn new(max_wt: u64, max_nwt: u64) -> Self {
        Truncation {
            max_wt,
            max_nwt,
            j_max: 8,
        }
    }

    pub fn with_j_max(mut self, j_max: u32) -> Self {
        self.j_max = j_max;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VertexError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("L(n) is only defined for n >= -1 (got n = {0})")]
    VirasoroIndex(i64),
    #[error("the L(0) spectrum of this module is not integral")]
    NonIntegerSpectrum,
}

//! The Fock-space realization of `M(l)` and its induced modules.
//!
//! A basis vector of `M(l) ⊗ Ω` is a monomial in the commuting variables
//! `x_{ijn}` (the creation operator `(u^(i) t^j)(-n)`, `n >= 1`) together with
//! an index into a basis of the top space `Ω`. Annihilation modes act as
//! `n l ∂/∂x_{ijn}`, creation modes as multiplication by `x_{ijn}`, and zero
//! modes as `c^j H_i` on the top index.

mod action;
mod basis;
mod monomial;
mod spec;
mod state;

pub use action::{apply_mode, apply_mode_fock, grading, Grading};
pub use basis::{enumerate_basis, module_basis};
pub use monomial::{Factor, GenIndex, ModeOp, Monomial};
pub use spec::{ModuleKind, ModuleSpec, SpecError};
pub use state::{BasisVector, Combination, FockState, ModuleState, StateJsonTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FockError {
    #[error("color index {color} out of range 1..={d}")]
    ColorOutOfRange { color: u32, d: usize },
    #[error("state is not doubly homogeneous")]
    NotHomogeneous,
    #[error("the zero state has no grading")]
    ZeroState,
}

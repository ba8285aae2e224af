//! Exact computations in the vertex algebra `M(l)` attached to the current
//! algebra of a finite-dimensional abelian Lie algebra, and in its induced
//! modules.
//!
//! Everything is computed over the rationals. States are finite sparse sums
//! of monomials in the creation variables `x_{ijn}`; operators are applied
//! term by term.

pub mod dims;
pub mod exactmath;
pub mod fock;
pub mod repcat;
pub mod vertexops;

pub use exactmath::{RatMatrix, Rational};
pub use fock::{
    Factor, FockState, GenIndex, ModeOp, ModuleKind, ModuleSpec, ModuleState, Monomial,
};
pub use vertexops::{CheckReport, Truncation};

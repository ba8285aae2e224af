//! Exact rational scalars and dense linear algebra.

mod matrix;
mod rational;

pub use matrix::{MatrixError, RatMatrix};
pub use rational::{binomial, ParseRationalError, Rational};

/// Rank and canonical nullspace basis of `m`.
pub fn rank_nullspace(m: &RatMatrix) -> (usize, Vec<Vec<Rational>>) {
    m.rank_nullspace()
}

/// Jordan block sizes of `m` for `eigenvalue`, largest first.
pub fn jordan_structure(m: &RatMatrix, eigenvalue: &Rational) -> Result<Vec<usize>, MatrixError> {
    m.jordan_structure(eigenvalue)
}

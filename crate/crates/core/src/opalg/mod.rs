//! Pseudo-difference operators `sum_n R_n(z) D^n` and small matrices of them.

mod matrix;
mod op;

pub use matrix::{mat_commutator, MatrixOp};
pub use op::{expand_in_root, nth_root, op_inverse, Op, EXACT};

#[cfg(test)]
mod tests;

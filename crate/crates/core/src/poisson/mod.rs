//! Poisson brackets on the mode ring.
//!
//! Brackets between fields are data: a [`KernelTable`] lists, for each
//! ordered pair of fields, smooth terms `sum_m (w/z)^m φ(q^m) Z(z) W(w)` and
//! delta terms `δ(wq^r/z) Z(z) W(w)`. Mode brackets are read off from
//! `δ(wq^r/z) = sum_m q^{rm} w^m z^{-m}`, and [`bracket`] extends them to
//! polynomial functionals by the Leibniz rule.

mod bracket;
mod kernel;
pub mod verify;

pub use bracket::{
    bracket, field_bracket, jacobiator, linear_functional_bracket, lowered, Functional,
};
pub use kernel::{
    custom_table, kernel_to_mode_bracket, BracketKernel, DeltaTerm, Factor, KernelSet, KernelTable,
    Phi, Slot, SmoothTerm,
};

#[cfg(test)]
mod tests;

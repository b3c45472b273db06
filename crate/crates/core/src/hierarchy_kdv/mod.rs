//! The q-deformed KdV hierarchy: Lax flows, both constructions of the
//! hamiltonians and the q-KP variant.

mod flow;
mod hamiltonian;
mod state;
pub mod verify;

pub use flow::{
    generic_kp, induced_power_flow, qkdv1_formula, qkdv_flow, qkdv_flow_op, qkp_derivation,
    qkp_flow,
};
pub use hamiltonian::{
    cwf_coefficients, cwf_densities, hamiltonian_cwf, hamiltonian_res, CwfWitness,
};
pub use state::{lax_operator, FlowDerivation, KdVState};

#[cfg(test)]
mod tests;

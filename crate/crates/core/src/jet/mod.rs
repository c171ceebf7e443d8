//! Truncated jet spaces, total derivatives, standard and twisted prolongations,
//! equation systems and symmetry checks.

mod field;
mod prolong;
mod space;
mod symmetry;
mod system;

#[cfg(test)]
mod props;

pub use field::{commutator, evolutionary_representative, ProlongedField, VectorField};
pub use prolong::{prolong, prolong_lambda, prolong_mu, prolong_standard, Twist};
pub use space::{AuxRules, JetSpace, TotalDerivative};
pub use symmetry::{
    base_field, check_ibdp, check_ibdp_chain, check_symmetry, commutator_defect,
    deviation_on_invariant_set, mu_deviation, prolong_twisted, IbdpReport, SymmetryReport,
};
pub use system::{reduce_mod_system, solve_linear, EquationSystem, Reducer, SolvedRule};

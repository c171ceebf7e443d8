//! Exterior calculus on jet space: contact forms, matrix one-forms, the
//! Maurer-Cartan condition and the deformed derivatives `d_μ`, `L^μ`.

mod form;
mod mu;

#[cfg(test)]
mod props;

pub use form::{contact_form, exterior_d, is_in_contact_ideal, DiffForm};
pub use mu::{
    check_mch, check_mu_prolongation, d_mu, d_mu_horizontal, d_mu_vector, lie_mu, lie_mu_field,
    nabla_apply, MatrixOneForm, MchReport, MuProlongationReport,
};

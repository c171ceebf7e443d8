//! Exact differential-field arithmetic: atoms, polynomials, canonical rational
//! functions, derivations, substitution, evaluation and printing.

mod atom;
mod derive;
mod eval;
mod expr;
pub mod gcd;
mod multiindex;
mod poly;
mod print;
mod subst;

#[cfg(test)]
mod props;

pub use atom::{Atom, AtomKind, FuncAtom, JetKey};
pub use derive::{derive, partial, Derivation, MapDerivation};
pub use eval::{agree_at_random_points, confirm_zero, eval, random_eval, Sampler, SAMPLE_BOUND};
pub use expr::Expr;
pub use multiindex::MultiIndex;
pub use poly::{Monomial, Poly};
pub use print::Names;
pub use subst::{substitute, substitute_fixpoint};

/// Rational coefficients.
pub type Q = num_rational::BigRational;

//! Exact symbolic toolkit for twisted (lambda and mu) symmetries of differential
//! equations, their gauge description and their covering interpretation.

pub mod covering;
pub mod error;
pub mod forms;
pub mod frontend;
pub mod gauge;
pub mod jet;
pub mod matrix;
pub mod random;
pub mod symbolic;

pub use error::{Error, Result};
pub use symbolic::{Atom, Expr, MultiIndex, Names, Poly, Q};

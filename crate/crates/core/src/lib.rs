//! Densities of elliptic curves over the p-adic integers with a rational
//! 3-torsion point, a rational 3-isogeny or a rational l-torsion point.

pub mod algebra;
pub mod cli;
pub mod decision;
pub mod elliptic;
pub mod error;
pub mod estimator;
pub mod formulas;
pub mod moduli;
pub mod padic;
pub mod poly;

pub use error::{Error, Result};

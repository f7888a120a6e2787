//! Localized Chern classes and characteristic symbols over p-adic
//! power-series rings, with the supporting exact arithmetic.

pub mod acceptance;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod groebner;
pub mod homalg;
pub mod ktheory;
pub mod linalg;
pub mod lvalues;
pub mod padic;
pub mod parse;
pub mod powerseries;

pub use error::{Error, Result};

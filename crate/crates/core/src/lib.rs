//! Exact and capped-precision arithmetic for anticyclotomic Iwasawa theory of
//! modular forms over imaginary quadratic fields of class number one.

pub mod arith;
pub mod compare;
pub mod error;
pub mod gauss_theta;
pub mod hecke;
pub mod iwasawa;
pub mod cyclotomic;
pub mod euler;
pub mod padic;
pub mod quad;
pub mod suite;

pub use error::{Error, Result};

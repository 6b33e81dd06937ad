//! Weight distributions of trace codes built from quadratic forms over
//! finite fields, with exhaustive verification oracles and point counts of
//! the associated Artin-Schreier curves.

pub mod arith;
pub mod curves;
pub mod error;
pub mod gf;
pub mod klapper;
pub mod linalg;
pub mod linpoly;
pub mod quadform;
pub mod spectra;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};

//! Deterministic standard models of Galois rings GR(p^n, m).

pub mod arith;
pub mod artin_schreier;
mod config;
mod error;
pub mod ff;
pub mod galois_ring;
pub mod gauss;
pub mod hensel;
pub mod tables;

pub use config::{Caps, Config, EXACT_MINPOLY_DEGREE_CAP};
pub use error::{Error, ErrorKind, Result};

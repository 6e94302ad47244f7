//! Numerical laboratory for triangular truncation on Schatten classes.
//!
//! The crate provides dense complex matrices with Schatten quasinorms
//! ([`matrix`]), trigonometric polynomials with `L^p` quadrature and the
//! Dirichlet/Fejér/bump kernels ([`trig`]), Hankel matrices and Besov
//! quasinorms ([`hankel`]), witness-based Schur multiplier bounds
//! ([`multiplier`]) and a registry of scaling experiments ([`experiments`]).

pub mod error;
pub mod experiments;
pub mod fit;
pub mod hankel;
pub mod matrix;
pub mod multiplier;
pub mod rng;
pub mod trig;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, PExponent, SingularSpectrum};
pub use trig::TrigPoly;

//! Exact noncommutative polynomial calculus, free semicircular traces and
//! random-matrix experiments on the spectral regularity of polynomials in
//! free variables.
//!
//! - [`ncpoly`]: polynomials in noncommuting variables with exact
//!   complex-rational coefficients.
//! - [`nccalc`]: difference quotients, the tensor-square actions, grading
//!   operators and Fourier extraction of homogeneous parts.
//! - [`freetrace`]: trace functionals, in particular the free semicircular
//!   trace computed by counting non-crossing pairings.
//! - [`matrix_model`]: GUE tuples, polynomial evaluation, eigenvalues and
//!   pooled empirical spectral measures.
//! - [`spectral`]: histograms, KS distances, atom detection, decay
//!   exponents and log-energy.
//! - [`expr`]: the text syntax for polynomials.
//! - [`registry`]: runtime selection of traces, ensembles and reference laws.

pub mod error;
pub mod expr;
pub mod freetrace;
pub mod matrix_model;
pub mod nccalc;
pub mod ncpoly;
pub mod registry;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use ncpoly::{Degree, NcPoly, Word};
pub use scalar::Scalar;

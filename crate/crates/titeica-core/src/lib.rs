//! Numerical verification toolkit for Titeica surface theory.
//!
//! The crate certifies, at working precision, the classical facts about
//! surfaces with `K / d^4` constant: closed-form solutions of the
//! structure PDEs, their Lie point symmetries, the variational formulation
//! with its Noether conservation laws, and reconstruction of surfaces from
//! the associated linear systems.
//!
//! Core types are generic over the scalar through [`Real`]; the aliases at
//! the crate root pin `f64`, which the verification batteries and the CLI
//! use throughout.

pub mod error;
pub mod jets;
mod linalg;
pub mod pde;
pub mod quadrature;
mod real;
pub mod solutions;
pub mod surface;
pub mod symmetry;
pub mod verify;
pub mod variational;

pub use error::{Error, Result};
pub use real::{cst, Real};

/// Lossy conversion to `f64` for error messages and reports.
pub(crate) fn to_display<T: Real>(x: T) -> f64 {
    num_traits::NumCast::from(x).unwrap_or(f64::NAN)
}

/// Univariate jet over `f64`.
pub type Jet1F64 = jets::Jet1<f64>;
/// Bivariate jet over `f64`.
pub type Jet2F64 = jets::Jet2<f64>;
/// Univariate jet over `f32`.
pub type Jet1F32 = jets::Jet1<f32>;
/// Bivariate jet over `f32`.
pub type Jet2F32 = jets::Jet2<f32>;

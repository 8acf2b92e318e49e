//! Truncated Taylor jets: the numerical kernel of the crate.
//!
//! Everything downstream (PDE residuals, symmetry prolongations,
//! conservation-law divergences, surface geometry) is phrased as jet
//! arithmetic: seed the coordinates, push them through the expression, and
//! read derivatives off the result. Raw derivative values are stored, not
//! Taylor coefficients, so entries compare directly against analytic
//! formulas.

mod elementary;
pub mod fd;
mod jet1;
mod jet2;

pub use jet1::{Jet1, MAX_ORDER_1};
pub use jet2::{Jet2, MAX_ORDER_2};

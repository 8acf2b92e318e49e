//! Crate-wide error type.
//!
//! Numerical routines report the offending value (converted to `f64` for
//! display) so that a failed evaluation names the point that broke, not just
//! the operation.

use thiserror::Error;

/// Errors produced by jet arithmetic, solution evaluation, integration and
/// export.
#[derive(Debug, Error)]
pub enum Error {
    #[error("jet order {order} outside supported range {min}..={max}")]
    InvalidOrder { order: usize, min: usize, max: usize },

    #[error("jet base points differ: ({a0}, {a1}) vs ({b0}, {b1})")]
    BasePointMismatch { a0: f64, a1: f64, b0: f64, b1: f64 },

    #[error("jet orders differ: {a} vs {b}")]
    OrderMismatch { a: usize, b: usize },

    #[error("operation `{op}` needs order >= {needed}, argument has order {got}")]
    InsufficientOrder {
        op: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("division by zero jet value")]
    DivisionByZero,

    #[error("`{func}` evaluated outside its domain at value {value}")]
    Domain { func: &'static str, value: f64 },

    #[error("non-finite coefficient produced by `{context}`")]
    NonFinite { context: &'static str },

    #[error("argument {t} outside curve domain [{lo}, {hi}]")]
    CurveDomain { t: f64, lo: f64, hi: f64 },

    #[error("solution h must stay positive, got h = {value} at (u, v) = ({u}, {v})")]
    NonPositiveH { value: f64, u: f64, v: f64 },

    #[error("adaptive quadrature failed to reach tolerance {tol} (error estimate {estimate})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("ODE solution left the trust region at t = {t} (|mu| = {magnitude})")]
    OdeBlowUp { t: f64, magnitude: f64 },

    #[error("coefficient frame fails integrability on the requested window: max residual {max_residual} at (u, v) = ({u}, {v})")]
    FrameIncompatible { max_residual: f64, u: f64, v: f64 },

    #[error("linear-system state exceeded stability bound at (u, v) = ({u}, {v})")]
    IntegrationUnstable { u: f64, v: f64 },

    #[error("initial condition matrix is singular (det = {det})")]
    DegenerateInitialConditions { det: f64 },

    #[error("first fundamental form degenerate at node ({iu}, {iv}): EG - F^2 = {value}")]
    DegenerateMetric { iu: usize, iv: usize, value: f64 },

    #[error("position vector lies in the tangent plane at node ({iu}, {iv}): triple product {value}")]
    DegeneratePosition { iu: usize, iv: usize, value: f64 },

    #[error("grid of {nodes} nodes exceeds cap {cap}")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("vector field `{name}` is not a variational symmetry: max defect {max_defect} over the probe battery")]
    NotVariational { name: String, max_defect: f64 },

    #[error("jet is not on the solution manifold: residual {residual} exceeds tolerance {tol}")]
    NotOnSolution { residual: f64, tol: f64 },

    #[error("supplied partial `{partial}` disagrees with finite differences of the integrand: defect {defect}")]
    BadPartial { partial: &'static str, defect: f64 },

    #[error("adjoint series did not settle within {max_terms} terms")]
    AdjointSeries { max_terms: usize },

    #[error("basis is not closed under the bracket: component defect {defect}")]
    BasisNotClosed { defect: f64 },

    #[error("profile curve mismatch: expected separation constant k^2 = {expected}, got {got}")]
    SeparationMismatch { expected: f64, got: f64 },

    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

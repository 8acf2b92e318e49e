//! Finite-difference oracle.
//!
//! Central-difference stencils reconstruct the same derivatives a jet
//! carries, using nothing but point evaluations of the underlying
//! function. The oracle exists to cross-check jet arithmetic in tests and
//! to validate user-supplied partials; no production evaluation path goes
//! through it.
//!
//! Accuracy guidance: with step `s` the truncation error is `O(s^2)` while
//! roundoff grows like `eps / s^k` for the `k`-th derivative. A step of
//! `1e-4` serves orders 1 and 2 well; third-order stencils want a larger
//! step (around `1e-3`) or the Richardson-refined variant below.

use super::jet1::Jet1;
use super::jet2::Jet2;
use crate::error::Result;
use crate::real::{cst, Real};

/// Reconstructs a bivariate jet of `f` at `(u0, v0)` from central
/// differences with the given step.
pub fn fd_oracle<T, F>(f: &F, u0: T, v0: T, order: usize, step: T) -> Result<Jet2<T>>
where
    T: Real,
    F: Fn(T, T) -> Result<T>,
{
    let s = step;
    let two = cst::<T>(2.0);
    let four = cst::<T>(4.0);

    let mut entries = Vec::with_capacity(10);
    entries.push(f(u0, v0)?);

    // First derivatives.
    let d10 = (f(u0 + s, v0)? - f(u0 - s, v0)?) / (two * s);
    let d01 = (f(u0, v0 + s)? - f(u0, v0 - s)?) / (two * s);
    entries.push(d10);
    entries.push(d01);

    if order >= 2 {
        let center = entries[0];
        let d20 = (f(u0 + s, v0)? - two * center + f(u0 - s, v0)?) / (s * s);
        let d11 = (f(u0 + s, v0 + s)? - f(u0 + s, v0 - s)? - f(u0 - s, v0 + s)?
            + f(u0 - s, v0 - s)?)
            / (four * s * s);
        let d02 = (f(u0, v0 + s)? - two * center + f(u0, v0 - s)?) / (s * s);
        entries.push(d20);
        entries.push(d11);
        entries.push(d02);
    }

    if order >= 3 {
        let s3 = s * s * s;
        let d30 = (f(u0 + two * s, v0)? - two * f(u0 + s, v0)? + two * f(u0 - s, v0)?
            - f(u0 - two * s, v0)?)
            / (two * s3);
        // d21: second difference in u, then central difference in v.
        let d2u = |v: T| -> Result<T> {
            Ok(f(u0 + s, v)? - two * f(u0, v)? + f(u0 - s, v)?)
        };
        let d21 = (d2u(v0 + s)? - d2u(v0 - s)?) / (two * s3);
        let d2v = |u: T| -> Result<T> {
            Ok(f(u, v0 + s)? - two * f(u, v0)? + f(u, v0 - s)?)
        };
        let d12 = (d2v(u0 + s)? - d2v(u0 - s)?) / (two * s3);
        let d03 = (f(u0, v0 + two * s)? - two * f(u0, v0 + s)? + two * f(u0, v0 - s)?
            - f(u0, v0 - two * s)?)
            / (two * s3);
        entries.push(d30);
        entries.push(d21);
        entries.push(d12);
        entries.push(d03);
    }

    Jet2::from_entries(u0, v0, order, &entries)
}

/// Richardson-refined oracle: combines steps `s` and `s/2` entrywise as
/// `(4 D(s/2) - D(s)) / 3`, cancelling the leading `O(s^2)` truncation
/// term of every central stencil. Useful for third-order entries where a
/// single small step drowns in roundoff.
pub fn fd_oracle_refined<T, F>(f: &F, u0: T, v0: T, order: usize, step: T) -> Result<Jet2<T>>
where
    T: Real,
    F: Fn(T, T) -> Result<T>,
{
    let coarse = fd_oracle(f, u0, v0, order, step)?;
    let fine = fd_oracle(f, u0, v0, order, step / cst::<T>(2.0))?;
    let third = cst::<T>(1.0 / 3.0);
    fine.scale(cst::<T>(4.0))?.sub(&coarse)?.scale(third)
}

/// Univariate finite-difference oracle, orders up to 4.
pub fn fd_oracle_curve<T, F>(f: &F, t0: T, order: usize, step: T) -> Result<Jet1<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let s = step;
    let two = cst::<T>(2.0);
    let mut derivs = Vec::with_capacity(5);
    derivs.push(f(t0)?);
    if order >= 1 {
        derivs.push((f(t0 + s)? - f(t0 - s)?) / (two * s));
    }
    if order >= 2 {
        derivs.push((f(t0 + s)? - two * f(t0)? + f(t0 - s)?) / (s * s));
    }
    if order >= 3 {
        derivs.push(
            (f(t0 + two * s)? - two * f(t0 + s)? + two * f(t0 - s)? - f(t0 - two * s)?)
                / (two * s * s * s),
        );
    }
    if order >= 4 {
        derivs.push(
            (f(t0 + two * s)? - cst::<T>(4.0) * f(t0 + s)? + cst::<T>(6.0) * f(t0)?
                - cst::<T>(4.0) * f(t0 - s)?
                + f(t0 - two * s)?)
                / (s * s * s * s),
        );
    }
    Jet1::from_derivs(t0, &derivs)
}

//! Derivative stacks of elementary functions.
//!
//! Composition of a jet with an elementary function needs the function's
//! plain derivatives at the inner value. Stacks go up to the 4th derivative
//! so that univariate jets of order 4 stay exact.

use crate::error::{Error, Result};
use crate::real::{cst, Real};
use num_traits::NumCast;

/// Elementary function selector shared by both jet types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Func {
    Exp,
    Ln,
    Sinh,
    Cosh,
    Tanh,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Recip,
    Powi(i32),
}

impl Func {
    pub(crate) fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Recip => "recip",
            Func::Powi(_) => "powi",
        }
    }
}

/// Returns `[f(x), f'(x), f''(x), f'''(x), f''''(x)]`.
pub(crate) fn derivative_stack<T: Real>(func: Func, x: T) -> Result<[T; 5]> {
    let two = cst::<T>(2.0);
    let stack = match func {
        Func::Exp => {
            let e = x.exp();
            [e, e, e, e, e]
        }
        Func::Ln => {
            if x <= T::zero() {
                return Err(domain(func, x));
            }
            let r = x.recip();
            let r2 = r * r;
            [x.ln(), r, -r2, two * r2 * r, -cst::<T>(6.0) * r2 * r2]
        }
        Func::Sinh => {
            let (s, c) = (x.sinh(), x.cosh());
            [s, c, s, c, s]
        }
        Func::Cosh => {
            let (s, c) = (x.sinh(), x.cosh());
            [c, s, c, s, c]
        }
        Func::Tanh => {
            let t = x.tanh();
            let s = T::one() - t * t;
            [
                t,
                s,
                -two * t * s,
                s * (cst::<T>(6.0) * t * t - two),
                cst::<T>(8.0) * t * s * (two - cst::<T>(3.0) * t * t),
            ]
        }
        Func::Sin => {
            let (s, c) = (x.sin(), x.cos());
            [s, c, -s, -c, s]
        }
        Func::Cos => {
            let (s, c) = (x.sin(), x.cos());
            [c, -s, -c, s, c]
        }
        Func::Tan => {
            let t = x.tan();
            if !t.is_finite() {
                return Err(domain(func, x));
            }
            let p = T::one() + t * t;
            [
                t,
                p,
                two * t * p,
                p * (two + cst::<T>(6.0) * t * t),
                cst::<T>(8.0) * t * p * (two + cst::<T>(3.0) * t * t),
            ]
        }
        Func::Sqrt => {
            if x <= T::zero() {
                return Err(domain(func, x));
            }
            let s = x.sqrt();
            let r = x.recip();
            [
                s,
                cst::<T>(0.5) * s * r,
                cst::<T>(-0.25) * s * r * r,
                cst::<T>(0.375) * s * r * r * r,
                cst::<T>(-0.9375) * s * r * r * r * r,
            ]
        }
        Func::Recip => {
            if x == T::zero() {
                return Err(Error::DivisionByZero);
            }
            let r = x.recip();
            let r2 = r * r;
            [
                r,
                -r2,
                two * r2 * r,
                -cst::<T>(6.0) * r2 * r2,
                cst::<T>(24.0) * r2 * r2 * r,
            ]
        }
        Func::Powi(n) => return powi_stack(x, n),
    };
    Ok(stack)
}

fn powi_stack<T: Real>(x: T, n: i32) -> Result<[T; 5]> {
    let mut out = [T::zero(); 5];
    let mut factor = T::one();
    for (k, slot) in out.iter_mut().enumerate() {
        let exponent = n - k as i32;
        if k > 0 {
            factor = factor * cst::<T>((n - (k as i32 - 1)) as f64);
        }
        if factor == T::zero() {
            // Non-negative integer power differentiated past its degree.
            continue;
        }
        if x == T::zero() && exponent < 0 {
            return Err(domain(Func::Powi(n), x));
        }
        *slot = factor * x.powi(exponent);
    }
    Ok(out)
}

fn domain<T: Real>(func: Func, x: T) -> Error {
    Error::Domain {
        func: func.name(),
        value: <f64 as NumCast>::from(x).unwrap_or(f64::NAN),
    }
}

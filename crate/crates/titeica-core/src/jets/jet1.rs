//! Univariate truncated jets.
//!
//! A [`Jet1`] stores the raw derivatives of a scalar function of one
//! variable at a base point, up to order 4. Orders above 3 exist so that a
//! bivariate order-3 jet of an expression involving a curve derivative
//! (for example `h = 2 U'(u) V'(v) / (U(u) + V(v))^2`) can still be formed:
//! differentiating the curve once consumes one order.

use super::elementary::{derivative_stack, Func};
use crate::error::{Error, Result};
use crate::real::{cst, Real};
use num_traits::NumCast;

/// Maximum supported derivative order for univariate jets.
pub const MAX_ORDER_1: usize = 4;

const WIDTH: usize = MAX_ORDER_1 + 1;

/// Binomial coefficients up to C(4, k).
const BINOM: [[f64; WIDTH]; WIDTH] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Truncated Taylor data of a univariate function: value and derivatives
/// `f(t0), f'(t0), ..., f^(order)(t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1<T> {
    t0: T,
    order: usize,
    c: [T; WIDTH],
}

impl<T: Real> Jet1<T> {
    fn raw(t0: T, order: usize) -> Result<Self> {
        if order > MAX_ORDER_1 {
            return Err(Error::InvalidOrder {
                order,
                min: 0,
                max: MAX_ORDER_1,
            });
        }
        Ok(Self {
            t0,
            order,
            c: [T::zero(); WIDTH],
        })
    }

    /// Jet of the identity function `t -> t` at `t0`.
    pub fn seed(t0: T, order: usize) -> Result<Self> {
        let mut jet = Self::raw(t0, order)?;
        jet.c[0] = t0;
        if order >= 1 {
            jet.c[1] = T::one();
        }
        Ok(jet)
    }

    /// Jet of the constant function with value `x` at `t0`.
    pub fn constant(x: T, t0: T, order: usize) -> Result<Self> {
        let mut jet = Self::raw(t0, order)?;
        jet.c[0] = x;
        Ok(jet)
    }

    /// Builds a jet from explicit derivative values `derivs[k] = f^(k)(t0)`.
    pub fn from_derivs(t0: T, derivs: &[T]) -> Result<Self> {
        if derivs.is_empty() {
            return Err(Error::InvalidOrder {
                order: 0,
                min: 1,
                max: WIDTH,
            });
        }
        let mut jet = Self::raw(t0, derivs.len() - 1)?;
        jet.c[..derivs.len()].copy_from_slice(derivs);
        jet.validated("from_derivs")
    }

    pub fn base_point(&self) -> T {
        self.t0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// Raw `k`-th derivative; errors when `k` exceeds the stored order.
    pub fn deriv(&self, k: usize) -> Result<T> {
        if k > self.order {
            return Err(Error::InsufficientOrder {
                op: "deriv",
                needed: k,
                got: self.order,
            });
        }
        Ok(self.c[k])
    }

    /// Jet of the derivative function, one order lower.
    pub fn differentiate(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder {
                op: "differentiate",
                needed: 1,
                got: 0,
            });
        }
        let mut jet = Self::raw(self.t0, self.order - 1)?;
        for k in 0..self.order {
            jet.c[k] = self.c[k + 1];
        }
        Ok(jet)
    }

    /// Drops derivatives above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder {
                op: "truncate",
                needed: order,
                got: self.order,
            });
        }
        let mut jet = Self::raw(self.t0, order)?;
        jet.c[..=order].copy_from_slice(&self.c[..=order]);
        Ok(jet)
    }

    fn check_compat(&self, rhs: &Self) -> Result<()> {
        if self.t0 != rhs.t0 {
            return Err(Error::BasePointMismatch {
                a0: to_f64(self.t0),
                a1: 0.0,
                b0: to_f64(rhs.t0),
                b1: 0.0,
            });
        }
        if self.order != rhs.order {
            return Err(Error::OrderMismatch {
                a: self.order,
                b: rhs.order,
            });
        }
        Ok(())
    }

    fn validated(self, context: &'static str) -> Result<Self> {
        for k in 0..=self.order {
            if !self.c[k].is_finite() {
                return Err(Error::NonFinite { context });
            }
        }
        Ok(self)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = *self;
        for k in 0..=self.order {
            out.c[k] += rhs.c[k];
        }
        out.validated("add")
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = *self;
        for k in 0..=self.order {
            out.c[k] -= rhs.c[k];
        }
        out.validated("sub")
    }

    /// Leibniz product rule through the stored order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = Self::raw(self.t0, self.order)?;
        for n in 0..=self.order {
            let mut acc = T::zero();
            for k in 0..=n {
                acc += cst::<T>(BINOM[n][k]) * self.c[k] * rhs.c[n - k];
            }
            out.c[n] = acc;
        }
        out.validated("mul")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul(&rhs.recip()?)
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for k in 0..=self.order {
            out.c[k] = -out.c[k];
        }
        out
    }

    pub fn scale(&self, factor: T) -> Result<Self> {
        let mut out = *self;
        for k in 0..=self.order {
            out.c[k] = out.c[k] * factor;
        }
        out.validated("scale")
    }

    /// Adds a constant to the value, leaving derivatives untouched.
    pub fn shift(&self, offset: T) -> Result<Self> {
        let mut out = *self;
        out.c[0] += offset;
        out.validated("shift")
    }

    /// Univariate Faa di Bruno composition with an outer derivative stack.
    fn compose_outer(&self, f: &[T; 5], context: &'static str) -> Result<Self> {
        let g = &self.c;
        let mut out = Self::raw(self.t0, self.order)?;
        out.c[0] = f[0];
        if self.order >= 1 {
            out.c[1] = f[1] * g[1];
        }
        if self.order >= 2 {
            out.c[2] = f[2] * g[1] * g[1] + f[1] * g[2];
        }
        if self.order >= 3 {
            out.c[3] =
                f[3] * g[1] * g[1] * g[1] + cst::<T>(3.0) * f[2] * g[1] * g[2] + f[1] * g[3];
        }
        if self.order >= 4 {
            out.c[4] = f[4] * g[1] * g[1] * g[1] * g[1]
                + cst::<T>(6.0) * f[3] * g[1] * g[1] * g[2]
                + f[2] * (cst::<T>(4.0) * g[1] * g[3] + cst::<T>(3.0) * g[2] * g[2])
                + f[1] * g[4];
        }
        out.validated(context)
    }

    fn apply(&self, func: Func) -> Result<Self> {
        let stack = derivative_stack(func, self.c[0])?;
        self.compose_outer(&stack, func.name())
    }

    /// Composes with another univariate jet: `outer` must be anchored at
    /// this jet's value. The result is the jet of `outer ∘ self`.
    pub fn compose(&self, outer: &Self) -> Result<Self> {
        if outer.t0 != self.c[0] {
            return Err(Error::BasePointMismatch {
                a0: to_f64(outer.t0),
                a1: 0.0,
                b0: to_f64(self.c[0]),
                b1: 0.0,
            });
        }
        if outer.order < self.order {
            return Err(Error::InsufficientOrder {
                op: "compose",
                needed: self.order,
                got: outer.order,
            });
        }
        self.compose_outer(&outer.c, "compose")
    }

    pub fn exp(&self) -> Result<Self> {
        self.apply(Func::Exp)
    }

    pub fn ln(&self) -> Result<Self> {
        self.apply(Func::Ln)
    }

    pub fn sinh(&self) -> Result<Self> {
        self.apply(Func::Sinh)
    }

    pub fn cosh(&self) -> Result<Self> {
        self.apply(Func::Cosh)
    }

    pub fn tanh(&self) -> Result<Self> {
        self.apply(Func::Tanh)
    }

    pub fn sin(&self) -> Result<Self> {
        self.apply(Func::Sin)
    }

    pub fn cos(&self) -> Result<Self> {
        self.apply(Func::Cos)
    }

    pub fn tan(&self) -> Result<Self> {
        self.apply(Func::Tan)
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.apply(Func::Sqrt)
    }

    pub fn recip(&self) -> Result<Self> {
        self.apply(Func::Recip)
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        self.apply(Func::Powi(n))
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    <f64 as NumCast>::from(x).unwrap_or(f64::NAN)
}

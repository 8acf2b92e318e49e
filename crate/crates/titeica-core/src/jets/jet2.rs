//! Bivariate truncated jets.
//!
//! A [`Jet2`] carries the raw partial derivatives of a scalar function of
//! `(u, v)` at a base point, one entry per multi-index `(i, j)` with
//! `i + j <= order`, order between 1 and 3. Composing seeded jets through
//! arithmetic and elementary functions yields exact derivatives of the
//! composite expression; in particular, evaluating an expression at a
//! solution jet turns the `(1,0)` and `(0,1)` entries into total
//! derivatives along that solution, which is what every residual and
//! prolongation routine in this crate relies on.

use super::elementary::{derivative_stack, Func};
use super::jet1::Jet1;
use crate::error::{Error, Result};
use crate::real::{cst, Real};
use num_traits::NumCast;

/// Maximum supported derivative order for bivariate jets.
pub const MAX_ORDER_2: usize = 3;

const SLOTS: usize = 10;

/// Entry offsets per total degree: degree d occupies
/// `DEGREE_BASE[d] + j` for multi-index `(d - j, j)`.
const DEGREE_BASE: [usize; 4] = [0, 1, 3, 6];

#[inline]
fn slot(i: usize, j: usize) -> usize {
    DEGREE_BASE[i + j] + j
}

const BINOM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Truncated Taylor data of a bivariate function: one raw partial
/// derivative per multi-index `(i, j)` with `i + j <= order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<T> {
    u0: T,
    v0: T,
    order: usize,
    c: [T; SLOTS],
}

impl<T: Real> Jet2<T> {
    fn raw(u0: T, v0: T, order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER_2).contains(&order) {
            return Err(Error::InvalidOrder {
                order,
                min: 1,
                max: MAX_ORDER_2,
            });
        }
        Ok(Self {
            u0,
            v0,
            order,
            c: [T::zero(); SLOTS],
        })
    }

    /// Jet of the coordinate function `(u, v) -> u`.
    pub fn seed_u(u0: T, v0: T, order: usize) -> Result<Self> {
        let mut jet = Self::raw(u0, v0, order)?;
        jet.c[slot(0, 0)] = u0;
        jet.c[slot(1, 0)] = T::one();
        Ok(jet)
    }

    /// Jet of the coordinate function `(u, v) -> v`.
    pub fn seed_v(u0: T, v0: T, order: usize) -> Result<Self> {
        let mut jet = Self::raw(u0, v0, order)?;
        jet.c[slot(0, 0)] = v0;
        jet.c[slot(0, 1)] = T::one();
        Ok(jet)
    }

    /// Jet of a constant function.
    pub fn constant(x: T, u0: T, v0: T, order: usize) -> Result<Self> {
        let mut jet = Self::raw(u0, v0, order)?;
        jet.c[slot(0, 0)] = x;
        Ok(jet)
    }

    /// Builds a jet from explicit entries listed degree by degree:
    /// `[f, f_u, f_v, f_uu, f_uv, f_vv, f_uuu, f_uuv, f_uvv, f_vvv]`,
    /// truncated to the slice length.
    pub fn from_entries(u0: T, v0: T, order: usize, entries: &[T]) -> Result<Self> {
        let needed = DEGREE_BASE
            .get(order + 1)
            .copied()
            .unwrap_or(SLOTS);
        if entries.len() < needed {
            return Err(Error::InsufficientOrder {
                op: "from_entries",
                needed,
                got: entries.len(),
            });
        }
        let mut jet = Self::raw(u0, v0, order)?;
        jet.c[..needed].copy_from_slice(&entries[..needed]);
        jet.validated("from_entries")
    }

    pub fn base_point(&self) -> (T, T) {
        (self.u0, self.v0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> T {
        self.c[slot(0, 0)]
    }

    /// Raw partial derivative `d^(i+j) f / du^i dv^j`.
    pub fn entry(&self, i: usize, j: usize) -> Result<T> {
        if i + j > self.order {
            return Err(Error::InsufficientOrder {
                op: "entry",
                needed: i + j,
                got: self.order,
            });
        }
        Ok(self.c[slot(i, j)])
    }

    /// Iterates `(i, j, value)` over all stored multi-indices.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..=self.order).flat_map(move |d| {
            (0..=d).map(move |j| (d - j, j, self.c[slot(d - j, j)]))
        })
    }

    /// Jet of the partial derivative in `u`, one order lower.
    pub fn deriv_u(&self) -> Result<Self> {
        if self.order < 2 {
            return Err(Error::InsufficientOrder {
                op: "deriv_u",
                needed: 2,
                got: self.order,
            });
        }
        let mut jet = Self::raw(self.u0, self.v0, self.order - 1)?;
        for d in 0..self.order {
            for j in 0..=d {
                jet.c[slot(d - j, j)] = self.c[slot(d - j + 1, j)];
            }
        }
        Ok(jet)
    }

    /// Jet of the partial derivative in `v`, one order lower.
    pub fn deriv_v(&self) -> Result<Self> {
        if self.order < 2 {
            return Err(Error::InsufficientOrder {
                op: "deriv_v",
                needed: 2,
                got: self.order,
            });
        }
        let mut jet = Self::raw(self.u0, self.v0, self.order - 1)?;
        for d in 0..self.order {
            for j in 0..=d {
                jet.c[slot(d - j, j)] = self.c[slot(d - j, j + 1)];
            }
        }
        Ok(jet)
    }

    /// Drops entries above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder {
                op: "truncate",
                needed: order,
                got: self.order,
            });
        }
        let mut jet = Self::raw(self.u0, self.v0, order)?;
        let keep = DEGREE_BASE.get(order + 1).copied().unwrap_or(SLOTS);
        jet.c[..keep].copy_from_slice(&self.c[..keep]);
        Ok(jet)
    }

    /// Pads with zero entries up to `order`. Only valid when the caller
    /// knows the higher derivatives do not influence the downstream
    /// computation (documented at each use site).
    pub fn zero_extend(&self, order: usize) -> Result<Self> {
        if order < self.order {
            return self.truncate(order);
        }
        let mut jet = Self::raw(self.u0, self.v0, order)?;
        let keep = DEGREE_BASE.get(self.order + 1).copied().unwrap_or(SLOTS);
        jet.c[..keep].copy_from_slice(&self.c[..keep]);
        Ok(jet)
    }

    /// Embeds a univariate jet in `u`: entries `(i, 0)` take the curve
    /// derivatives, all mixed and `v` entries vanish.
    pub fn from_u_jet(j1: &Jet1<T>, v0: T, order: usize) -> Result<Self> {
        if j1.order() < order {
            return Err(Error::InsufficientOrder {
                op: "from_u_jet",
                needed: order,
                got: j1.order(),
            });
        }
        let mut jet = Self::raw(j1.base_point(), v0, order)?;
        for i in 0..=order {
            jet.c[slot(i, 0)] = j1.deriv(i)?;
        }
        Ok(jet)
    }

    /// Embeds a univariate jet in `v`.
    pub fn from_v_jet(j1: &Jet1<T>, u0: T, order: usize) -> Result<Self> {
        if j1.order() < order {
            return Err(Error::InsufficientOrder {
                op: "from_v_jet",
                needed: order,
                got: j1.order(),
            });
        }
        let mut jet = Self::raw(u0, j1.base_point(), order)?;
        for j in 0..=order {
            jet.c[slot(0, j)] = j1.deriv(j)?;
        }
        Ok(jet)
    }

    fn check_compat(&self, rhs: &Self) -> Result<()> {
        if self.u0 != rhs.u0 || self.v0 != rhs.v0 {
            return Err(Error::BasePointMismatch {
                a0: to_f64(self.u0),
                a1: to_f64(self.v0),
                b0: to_f64(rhs.u0),
                b1: to_f64(rhs.v0),
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
        for d in 0..=self.order {
            for j in 0..=d {
                if !self.c[slot(d - j, j)].is_finite() {
                    return Err(Error::NonFinite { context });
                }
            }
        }
        Ok(self)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = *self;
        for k in 0..SLOTS {
            out.c[k] += rhs.c[k];
        }
        out.validated("add")
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = *self;
        for k in 0..SLOTS {
            out.c[k] -= rhs.c[k];
        }
        out.validated("sub")
    }

    /// Bivariate Leibniz rule:
    /// `(fg)^(i,j) = sum C(i,p) C(j,q) f^(p,q) g^(i-p, j-q)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compat(rhs)?;
        let mut out = Self::raw(self.u0, self.v0, self.order)?;
        for d in 0..=self.order {
            for j in 0..=d {
                let i = d - j;
                let mut acc = T::zero();
                for p in 0..=i {
                    for q in 0..=j {
                        acc += cst::<T>(BINOM[i][p] * BINOM[j][q])
                            * self.c[slot(p, q)]
                            * rhs.c[slot(i - p, j - q)];
                    }
                }
                out.c[slot(i, j)] = acc;
            }
        }
        out.validated("mul")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul(&rhs.recip()?)
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for k in 0..SLOTS {
            out.c[k] = -out.c[k];
        }
        out
    }

    pub fn scale(&self, factor: T) -> Result<Self> {
        let mut out = *self;
        for k in 0..SLOTS {
            out.c[k] = out.c[k] * factor;
        }
        out.validated("scale")
    }

    /// Adds a constant to the value entry only.
    pub fn shift(&self, offset: T) -> Result<Self> {
        let mut out = *self;
        out.c[slot(0, 0)] += offset;
        out.validated("shift")
    }

    /// Faa di Bruno composition with a univariate outer derivative stack
    /// `f[k] = f^(k)` evaluated at this jet's value.
    fn compose_outer(&self, f: &[T; 5], context: &'static str) -> Result<Self> {
        let g = |i: usize, j: usize| self.c[slot(i, j)];
        let mut out = Self::raw(self.u0, self.v0, self.order)?;
        let three = cst::<T>(3.0);
        let two = cst::<T>(2.0);

        out.c[slot(0, 0)] = f[0];
        out.c[slot(1, 0)] = f[1] * g(1, 0);
        out.c[slot(0, 1)] = f[1] * g(0, 1);
        if self.order >= 2 {
            out.c[slot(2, 0)] = f[2] * g(1, 0) * g(1, 0) + f[1] * g(2, 0);
            out.c[slot(1, 1)] = f[2] * g(1, 0) * g(0, 1) + f[1] * g(1, 1);
            out.c[slot(0, 2)] = f[2] * g(0, 1) * g(0, 1) + f[1] * g(0, 2);
        }
        if self.order >= 3 {
            out.c[slot(3, 0)] = f[3] * g(1, 0) * g(1, 0) * g(1, 0)
                + three * f[2] * g(1, 0) * g(2, 0)
                + f[1] * g(3, 0);
            out.c[slot(2, 1)] = f[3] * g(1, 0) * g(1, 0) * g(0, 1)
                + f[2] * (two * g(1, 0) * g(1, 1) + g(2, 0) * g(0, 1))
                + f[1] * g(2, 1);
            out.c[slot(1, 2)] = f[3] * g(1, 0) * g(0, 1) * g(0, 1)
                + f[2] * (two * g(0, 1) * g(1, 1) + g(0, 2) * g(1, 0))
                + f[1] * g(1, 2);
            out.c[slot(0, 3)] = f[3] * g(0, 1) * g(0, 1) * g(0, 1)
                + three * f[2] * g(0, 1) * g(0, 2)
                + f[1] * g(0, 3);
        }
        out.validated(context)
    }

    fn apply(&self, func: Func) -> Result<Self> {
        let stack = derivative_stack(func, self.value())?;
        self.compose_outer(&stack, func.name())
    }

    /// Composes with a univariate outer jet anchored at this jet's value.
    pub fn compose_jet1(&self, outer: &Jet1<T>) -> Result<Self> {
        if outer.base_point() != self.value() {
            return Err(Error::BasePointMismatch {
                a0: to_f64(outer.base_point()),
                a1: 0.0,
                b0: to_f64(self.value()),
                b1: 0.0,
            });
        }
        if outer.order() < self.order {
            return Err(Error::InsufficientOrder {
                op: "compose_jet1",
                needed: self.order,
                got: outer.order(),
            });
        }
        let mut stack = [T::zero(); 5];
        for (k, s) in stack.iter_mut().enumerate().take(outer.order() + 1) {
            *s = outer.deriv(k)?;
        }
        self.compose_outer(&stack, "compose_jet1")
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

    /// Jet of `(u, v) -> f(su * u + cu, sv * v + cv)` at `(u0, v0)`, given
    /// this jet as the jet of `f` at the mapped point. Exact for affine
    /// reparametrizations: the chain rule contributes `su^i sv^j`.
    pub fn affine_pullback(&self, u0: T, v0: T, su: T, sv: T) -> Result<Self> {
        let mut out = Self::raw(u0, v0, self.order)?;
        for d in 0..=self.order {
            for j in 0..=d {
                let i = d - j;
                out.c[slot(i, j)] =
                    self.c[slot(i, j)] * su.powi(i as i32) * sv.powi(j as i32);
            }
        }
        out.validated("affine_pullback")
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    <f64 as NumCast>::from(x).unwrap_or(f64::NAN)
}

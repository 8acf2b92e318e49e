//! Closed-form solution families as jet-evaluable functions.
//!
//! [`Curve`] and [`BivariateFn`] wrap closures that map seeded jets through
//! an expression, so every catalog entry is differentiable to the order the
//! jet kernel supports. [`SolutionH`] additionally enforces positivity of
//! `h`, since `omega = ln h` must exist wherever a solution is probed.

use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2};
use crate::quadrature;
use crate::real::{cst, Real};
use crate::to_display;
use std::sync::Arc;

/// Smooth function of one variable on an open interval, evaluable as a
/// univariate jet up to order 4.
#[derive(Clone)]
pub struct Curve<T> {
    lo: T,
    hi: T,
    f: Arc<dyn Fn(T, usize) -> Result<Jet1<T>> + Send + Sync>,
}

impl<T: Real> Curve<T> {
    /// Wraps a raw evaluator. The closure receives the query point and the
    /// requested order and must return a jet anchored at that point.
    pub fn new(
        lo: T,
        hi: T,
        f: impl Fn(T, usize) -> Result<Jet1<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            lo,
            hi,
            f: Arc::new(f),
        }
    }

    /// Builds a curve from a jet expression: the closure receives the seed
    /// jet of the variable and composes it through arithmetic.
    pub fn from_expr(
        lo: T,
        hi: T,
        g: impl Fn(&Jet1<T>) -> Result<Jet1<T>> + Send + Sync + 'static,
    ) -> Self {
        Self::new(lo, hi, move |t, order| {
            let seed = Jet1::seed(t, order)?;
            g(&seed)
        })
    }

    /// The identity curve `t -> t` on the whole line.
    pub fn identity() -> Self {
        Self::affine(T::one(), T::zero())
    }

    /// `t -> a t + b` on the whole line.
    pub fn affine(a: T, b: T) -> Self {
        Self::from_expr(T::neg_infinity(), T::infinity(), move |t| {
            t.scale(a)?.shift(b)
        })
    }

    /// Constant curve.
    pub fn constant(x: T) -> Self {
        Self::new(T::neg_infinity(), T::infinity(), move |t, order| {
            Jet1::constant(x, t, order)
        })
    }

    /// `t -> exp(t)` on the whole line.
    pub fn exponential() -> Self {
        Self::from_expr(T::neg_infinity(), T::infinity(), |t| t.exp())
    }

    /// Polynomial with coefficients listed from the constant term up.
    pub fn polynomial(coeffs: Vec<T>) -> Self {
        Self::from_expr(T::neg_infinity(), T::infinity(), move |t| {
            let mut acc = Jet1::constant(T::zero(), t.base_point(), t.order())?;
            for &c in coeffs.iter().rev() {
                acc = acc.mul(t)?.shift(c)?;
            }
            Ok(acc)
        })
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    /// Evaluates the curve as a jet of the given order at `t`.
    pub fn eval(&self, t: T, order: usize) -> Result<Jet1<T>> {
        if !(t > self.lo && t < self.hi) {
            return Err(Error::CurveDomain {
                t: to_display(t),
                lo: to_display(self.lo),
                hi: to_display(self.hi),
            });
        }
        (self.f)(t, order)
    }

    /// Convenience: value only.
    pub fn value(&self, t: T) -> Result<T> {
        Ok(self.eval(t, 0)?.value())
    }
}

/// Smooth function of `(u, v)`, evaluable as a bivariate jet.
#[derive(Clone)]
pub struct BivariateFn<T> {
    f: Arc<dyn Fn(T, T, usize) -> Result<Jet2<T>> + Send + Sync>,
}

impl<T: Real> BivariateFn<T> {
    pub fn new(f: impl Fn(T, T, usize) -> Result<Jet2<T>> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    /// Builds from a jet expression over the two coordinate seeds.
    pub fn from_expr(
        g: impl Fn(&Jet2<T>, &Jet2<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
    ) -> Self {
        Self::new(move |u, v, order| {
            let su = Jet2::seed_u(u, v, order)?;
            let sv = Jet2::seed_v(u, v, order)?;
            g(&su, &sv)
        })
    }

    pub fn eval(&self, u: T, v: T, order: usize) -> Result<Jet2<T>> {
        (self.f)(u, v, order)
    }
}

/// A positive scalar field `h(u, v)` representing a structure-PDE solution
/// candidate.
#[derive(Clone)]
pub struct SolutionH<T> {
    name: String,
    h: BivariateFn<T>,
}

impl<T: Real> SolutionH<T> {
    pub fn custom(name: impl Into<String>, h: BivariateFn<T>) -> Self {
        Self {
            name: name.into(),
            h,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Jet of `h`; fails when `h <= 0` at the point.
    pub fn eval(&self, u: T, v: T, order: usize) -> Result<Jet2<T>> {
        let jet = self.h.eval(u, v, order)?;
        if jet.value() <= T::zero() {
            return Err(Error::NonPositiveH {
                value: to_display(jet.value()),
                u: to_display(u),
                v: to_display(v),
            });
        }
        Ok(jet)
    }

    /// Jet of `omega = ln h`.
    pub fn omega(&self, u: T, v: T, order: usize) -> Result<Jet2<T>> {
        self.eval(u, v, order)?.ln()
    }

    /// The underlying field, without the positivity guard.
    pub fn h_fn(&self) -> &BivariateFn<T> {
        &self.h
    }

    /// `omega = ln h` as a standalone bivariate function.
    pub fn omega_fn(&self) -> BivariateFn<T> {
        let h = self.h.clone();
        BivariateFn::new(move |u, v, order| h.eval(u, v, order)?.ln())
    }

    /// `h(u, v) = mu(a u + b v)` from a univariate profile.
    pub fn from_linear_profile(name: impl Into<String>, mu: &Curve<T>, a: T, b: T) -> Self {
        let mu = mu.clone();
        Self::custom(
            name,
            BivariateFn::new(move |u, v, order| {
                let su = Jet2::seed_u(u, v, order)?;
                let sv = Jet2::seed_v(u, v, order)?;
                let arg = su.scale(a)?.add(&sv.scale(b)?)?;
                let profile = mu.eval(arg.value(), order)?;
                arg.compose_jet1(&profile)
            }),
        )
    }
}

/// General solution of `(ln h)_uv = h` built from two strictly monotone
/// curves: `h = 2 U'(u) V'(v) / (U(u) + V(v))^2`.
pub fn liouville_general<T: Real>(ut: &Curve<T>, vt: &Curve<T>) -> SolutionH<T> {
    let ut = ut.clone();
    let vt = vt.clone();
    SolutionH::custom(
        "liouville-general",
        BivariateFn::new(move |u, v, order| {
            // One extra curve order feeds the first derivatives U', V'.
            let ju = ut.eval(u, order + 1)?;
            let jv = vt.eval(v, order + 1)?;
            let big_u = Jet2::from_u_jet(&ju.truncate(order)?, v, order)?;
            let big_v = Jet2::from_v_jet(&jv.truncate(order)?, u, order)?;
            let du = Jet2::from_u_jet(&ju.differentiate()?, v, order)?;
            let dv = Jet2::from_v_jet(&jv.differentiate()?, u, order)?;
            let numerator = du.mul(&dv)?.scale(cst::<T>(2.0))?;
            let denominator = big_u.add(&big_v)?.powi(2)?;
            numerator.div(&denominator)
        }),
    )
}

/// Branch selector for the separable ruled-case profiles. `KZero`,
/// `KNegative` and `KPositive` name the sign of the separation constant in
/// the first integral `mu'^2 = 2 mu^3 + k mu^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuCase {
    KZero,
    KNegative,
    KPositive,
}

/// Profile curves solving `mu mu'' - mu'^2 = mu^3`.
///
/// * `KZero`: `mu = 2 / (t + c)^2` on `t > -c`,
/// * `KNegative` (`k = -l^2`): `mu = l^2 / (2 cos^2(l t / 2 + c))`,
/// * `KPositive` (`k = l^2`): `mu = l^2 / (2 sinh^2(l t / 2 + c))` on the
///   branch where the argument is positive.
pub fn mu_family<T: Real>(case: MuCase, l: T, c: T) -> Result<Curve<T>> {
    let two = cst::<T>(2.0);
    match case {
        MuCase::KZero => Ok(Curve::from_expr(-c, T::infinity(), move |t| {
            t.shift(c)?.powi(-2)?.scale(two)
        })),
        MuCase::KNegative => {
            require_positive_l(l)?;
            let half_pi = cst::<T>(std::f64::consts::FRAC_PI_2);
            let lo = (-half_pi - c) * two / l;
            let hi = (half_pi - c) * two / l;
            Ok(Curve::from_expr(lo, hi, move |t| {
                let cosine = t.scale(l / two)?.shift(c)?.cos()?;
                cosine.powi(-2)?.scale(l * l / two)
            }))
        }
        MuCase::KPositive => {
            require_positive_l(l)?;
            let lo = -two * c / l;
            Ok(Curve::from_expr(lo, T::infinity(), move |t| {
                let sh = t.scale(l / two)?.shift(c)?.sinh()?;
                sh.powi(-2)?.scale(l * l / two)
            }))
        }
    }
}

fn require_positive_l<T: Real>(l: T) -> Result<()> {
    if l <= T::zero() {
        return Err(Error::Domain {
            func: "mu_family",
            value: to_display(l),
        });
    }
    Ok(())
}

/// The constant solution `h = 1` of `(ln h)_uv = h - 1/h^2`.
pub fn titeica_constant<T: Real>() -> SolutionH<T> {
    SolutionH::custom(
        "titeica-constant",
        BivariateFn::new(|u, v, order| Jet2::constant(T::one(), u, v, order)),
    )
}

/// The travelling-wave solution `h = 1 + 3 / (2 sinh^2(sqrt(3)(u+v)/2 + c1))`
/// of `(ln h)_uv = h - 1/h^2`, defined where the sinh argument is positive.
pub fn titeica_sinh<T: Real>(c1: T) -> SolutionH<T> {
    let profile = titeica_sinh_profile(c1);
    SolutionH::from_linear_profile("titeica-sinh", &profile, T::one(), T::one())
}

/// The profile `mu(t) = 1 + 3 / (2 sinh^2(sqrt(3) t / 2 + c1))` underlying
/// [`titeica_sinh`]; solves `mu mu'' - mu'^2 = mu^3 - 1` with first
/// integral `mu'^2 = 2 mu^3 - 3 mu^2 + 1`.
pub fn titeica_sinh_profile<T: Real>(c1: T) -> Curve<T> {
    let root3 = cst::<T>(3.0f64.sqrt());
    let lo = -cst::<T>(2.0) * c1 / root3;
    Curve::from_expr(lo, T::infinity(), move |t| {
        let sh = t.scale(root3 / cst::<T>(2.0))?.shift(c1)?.sinh()?;
        sh.powi(-2)?.scale(cst::<T>(1.5))?.shift(T::one())
    })
}

/// Separation constant `k^2` demanded by a profile at `alpha`, from the
/// first integral `(mu'^2 - 2 mu^3 - 1) / (4 mu^2) = -k^2`.
pub fn separation_constant<T: Real>(mu: &Curve<T>, alpha: T) -> Result<T> {
    let j = mu.eval(alpha, 1)?;
    let m = j.value();
    let dm = j.deriv(1)?;
    let four = cst::<T>(4.0);
    Ok(-(dm * dm - cst::<T>(2.0) * m * m * m - T::one()) / (four * m * m))
}

/// Flux exponent jet `A` with `A' = integrand`, anchored by quadrature from
/// `alpha0`. The jet order is `integrand order + 1`.
fn antiderivative_jet<T: Real>(
    integrand: &Curve<T>,
    alpha0: T,
    alpha: T,
    order: usize,
    tol: T,
) -> Result<Jet1<T>> {
    let value = quadrature::integrate(
        &|t: T| integrand.value(t),
        alpha0,
        alpha,
        tol,
    )?;
    let upper = integrand.eval(alpha, order.saturating_sub(1))?;
    let mut derivs = Vec::with_capacity(order + 1);
    derivs.push(value);
    for k in 0..order {
        derivs.push(upper.deriv(k)?);
    }
    Jet1::from_derivs(alpha, &derivs)
}

/// Surface-of-revolution component for the Titeica linear system with
/// profile `h = mu(u + v)`, separation constant `k != 0`:
///
/// `theta = e^{A} (k1 cos(k beta) + k2 sin(k beta)) + k3 e^{B}`
///
/// with `alpha = u + v`, `beta = u - v`, `A' = (mu' - 1) / (2 mu)`,
/// `B' = mu^2 / (mu' + 1)`, both anchored at `alpha0`.
///
/// The constant `k` must match the profile: the first integral forces
/// `k^2 = -(mu'^2 - 2 mu^3 - 1) / (4 mu^2)` (see [`separation_constant`]).
pub fn revolution_theta<T: Real>(
    k: T,
    mu: &Curve<T>,
    coeffs: [T; 3],
    alpha0: T,
) -> BivariateFn<T> {
    let half = cst::<T>(0.5);
    let a_integrand = {
        let mu = mu.clone();
        let (lo, hi) = mu.domain();
        Curve::new(lo, hi, move |t, order| {
            let j = mu.eval(t, order + 1)?;
            let num = j.differentiate()?.shift(-T::one())?;
            num.div(&j.truncate(order)?)?.scale(half)
        })
    };
    let b_integrand = {
        let mu = mu.clone();
        let (lo, hi) = mu.domain();
        Curve::new(lo, hi, move |t, order| {
            let j = mu.eval(t, order + 1)?;
            let num = j.truncate(order)?.powi(2)?;
            num.div(&j.differentiate()?.shift(T::one())?)
        })
    };
    let tol = cst::<T>(1e-10);
    let [k1, k2, k3] = coeffs;
    BivariateFn::new(move |u, v, order| {
        let su = Jet2::seed_u(u, v, order)?;
        let sv = Jet2::seed_v(u, v, order)?;
        let alpha = su.add(&sv)?;
        let beta = su.sub(&sv)?;

        let a_jet = antiderivative_jet(&a_integrand, alpha0, alpha.value(), order, tol)?;
        let ea = alpha.compose_jet1(&a_jet.exp()?)?;
        let phase = beta.scale(k)?;
        let oscillating = phase
            .cos()?
            .scale(k1)?
            .add(&phase.sin()?.scale(k2)?)?;
        let mut theta = ea.mul(&oscillating)?;

        if k3 != T::zero() {
            let b_jet = antiderivative_jet(&b_integrand, alpha0, alpha.value(), order, tol)?;
            let eb = alpha.compose_jet1(&b_jet.exp()?)?;
            theta = theta.add(&eb.scale(k3)?)?;
        }
        Ok(theta)
    })
}

/// Degenerate `k = 0` branch of the revolution component:
///
/// `theta = e^{A} (k1 (beta^2 + N) + k2 beta + k3)`,
/// `N' = 4 mu / (mu' + 1)`.
///
/// Valid for profiles whose first integral gives `k = 0`, that is
/// `mu'^2 = 2 mu^3 + 1`.
pub fn revolution_theta_k0<T: Real>(
    mu: &Curve<T>,
    coeffs: [T; 3],
    alpha0: T,
) -> BivariateFn<T> {
    let half = cst::<T>(0.5);
    let four = cst::<T>(4.0);
    let a_integrand = {
        let mu = mu.clone();
        let (lo, hi) = mu.domain();
        Curve::new(lo, hi, move |t, order| {
            let j = mu.eval(t, order + 1)?;
            let num = j.differentiate()?.shift(-T::one())?;
            num.div(&j.truncate(order)?)?.scale(half)
        })
    };
    let n_integrand = {
        let mu = mu.clone();
        let (lo, hi) = mu.domain();
        Curve::new(lo, hi, move |t, order| {
            let j = mu.eval(t, order + 1)?;
            let num = j.truncate(order)?.scale(four)?;
            num.div(&j.differentiate()?.shift(T::one())?)
        })
    };
    let tol = cst::<T>(1e-10);
    let [k1, k2, k3] = coeffs;
    BivariateFn::new(move |u, v, order| {
        let su = Jet2::seed_u(u, v, order)?;
        let sv = Jet2::seed_v(u, v, order)?;
        let alpha = su.add(&sv)?;
        let beta = su.sub(&sv)?;

        let a_jet = antiderivative_jet(&a_integrand, alpha0, alpha.value(), order, tol)?;
        let ea = alpha.compose_jet1(&a_jet.exp()?)?;
        let n_jet = antiderivative_jet(&n_integrand, alpha0, alpha.value(), order, tol)?;
        let n2 = alpha.compose_jet1(&n_jet)?;

        let bracket = beta
            .mul(&beta)?
            .add(&n2)?
            .scale(k1)?
            .add(&beta.scale(k2)?)?
            .shift(k3)?;
        ea.mul(&bracket)
    })
}

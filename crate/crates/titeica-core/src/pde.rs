//! Residual evaluators for the structure equations.
//!
//! Everything here is a pure function from jets to numbers: given a jet of
//! a candidate solution at a point, each evaluator returns how far the
//! corresponding differential equation is from holding there. Exact
//! solutions produce residuals at roundoff level; anything larger measures
//! a genuine defect.

use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2};
use crate::linalg;
use crate::real::{cst, Real};
use crate::solutions::{BivariateFn, Curve, SolutionH};
use crate::to_display;

/// Which scalar structure PDE a residual refers to.
///
/// The `H` kinds take the unknown to be the positive coefficient `h`; the
/// `Omega` kinds take `omega = ln h`. `GeneralH` covers the wider family
/// `omega_uv = H(omega)` for an arbitrary smooth right side.
#[derive(Clone)]
pub enum PdeKind<T> {
    /// `(ln h)_uv = h`.
    LiouvilleH,
    /// `(ln h)_uv = h - 1/h^2`.
    TiteicaH,
    /// `omega_uv = e^omega`.
    LiouvilleOmega,
    /// `omega_uv = e^omega - e^{-2 omega}`.
    TiteicaOmega,
    /// `omega_uv = H(omega)` with the supplied right side.
    GeneralH(Curve<T>),
}

impl<T: Real> PdeKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            PdeKind::LiouvilleH => "liouville-h",
            PdeKind::TiteicaH => "titeica-h",
            PdeKind::LiouvilleOmega => "liouville-omega",
            PdeKind::TiteicaOmega => "titeica-omega",
            PdeKind::GeneralH(_) => "general-omega-family",
        }
    }

    /// Right side `H` of the equivalent form `omega_uv = H(omega)`, as a
    /// jet-evaluable curve in `omega`. Defined for every kind: the `H`
    /// forms share the right side of their `Omega` counterparts.
    pub fn omega_rhs(&self) -> Curve<T> {
        match self {
            PdeKind::LiouvilleH | PdeKind::LiouvilleOmega => Curve::exponential(),
            PdeKind::TiteicaH | PdeKind::TiteicaOmega => {
                Curve::from_expr(T::neg_infinity(), T::infinity(), |w| {
                    w.exp()?.sub(&w.scale(cst::<T>(-2.0))?.exp()?)
                })
            }
            PdeKind::GeneralH(hfn) => hfn.clone(),
        }
    }
}

/// Residual of the scalar PDE selected by `kind` at the point of `w`.
///
/// `w` is a jet of the unknown (order at least 2). For the `H` kinds the
/// value must be positive so the logarithm exists.
pub fn residual_scalar<T: Real>(kind: &PdeKind<T>, w: &Jet2<T>) -> Result<T> {
    if w.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "residual_scalar",
            needed: 2,
            got: w.order(),
        });
    }
    match kind {
        PdeKind::LiouvilleH => {
            let lnw = w.ln()?;
            Ok(lnw.entry(1, 1)? - w.value())
        }
        PdeKind::TiteicaH => {
            let lnw = w.ln()?;
            let h = w.value();
            Ok(lnw.entry(1, 1)? - h + (h * h).recip())
        }
        PdeKind::LiouvilleOmega => Ok(w.entry(1, 1)? - w.value().exp()),
        PdeKind::TiteicaOmega => {
            let omega = w.value();
            Ok(w.entry(1, 1)? - omega.exp() + (-(omega + omega)).exp())
        }
        PdeKind::GeneralH(hfn) => Ok(w.entry(1, 1)? - hfn.eval(w.value(), 0)?.value()),
    }
}

/// Distinguishes the two admissible coefficient frames from a frame with
/// caller-supplied entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    Ruled,
    NonRuled,
    General,
}

/// The five coefficient functions of the linear system
///
/// ```text
/// theta_uu = a  theta_u + b  theta_v
/// theta_uv = h  theta
/// theta_vv = a2 theta_u + b2 theta_v
/// ```
///
/// `a2` and `b2` are the coefficients of the second-row equation in
/// `theta_vv`. A frame is compatible (admits a three-dimensional solution
/// space) exactly when [`residual_integrability`] vanishes.
#[derive(Clone)]
pub struct CoefficientFrame<T> {
    kind: FrameKind,
    a: BivariateFn<T>,
    b: BivariateFn<T>,
    h: BivariateFn<T>,
    a2: BivariateFn<T>,
    b2: BivariateFn<T>,
}

/// Jets of all five frame coefficients at one point.
#[derive(Clone, Debug)]
pub struct FrameJets<T> {
    pub a: Jet2<T>,
    pub b: Jet2<T>,
    pub h: Jet2<T>,
    pub a2: Jet2<T>,
    pub b2: Jet2<T>,
}

impl<T: Real> CoefficientFrame<T> {
    /// Frame of a non-ruled surface: `a = h_u/h`, `b = a2 = 1/h`,
    /// `b2 = h_v/h`. Compatible exactly when `h` solves
    /// `(ln h)_uv = h - 1/h^2`.
    pub fn non_ruled(hsol: &SolutionH<T>) -> Self {
        let s = hsol.clone();
        let a = BivariateFn::new(move |u, v, order| {
            let j = s.eval(u, v, order + 1)?;
            j.deriv_u()?.div(&j.truncate(order)?)
        });
        let s = hsol.clone();
        let b = BivariateFn::new(move |u, v, order| s.eval(u, v, order)?.recip());
        let s = hsol.clone();
        let a2 = BivariateFn::new(move |u, v, order| s.eval(u, v, order)?.recip());
        let s = hsol.clone();
        let b2 = BivariateFn::new(move |u, v, order| {
            let j = s.eval(u, v, order + 1)?;
            j.deriv_v()?.div(&j.truncate(order)?)
        });
        let s = hsol.clone();
        let h = BivariateFn::new(move |u, v, order| s.eval(u, v, order));
        Self {
            kind: FrameKind::NonRuled,
            a,
            b,
            h,
            a2,
            b2,
        }
    }

    /// Frame of a ruled surface: `a = h_u/h`, `b = phi(u)/h` for an
    /// arbitrary function of `u` alone, `a2 = 0`, `b2 = h_v/h`. Compatible
    /// exactly when `h` solves `(ln h)_uv = h`.
    pub fn ruled(hsol: &SolutionH<T>, phi: &Curve<T>) -> Self {
        let s = hsol.clone();
        let a = BivariateFn::new(move |u, v, order| {
            let j = s.eval(u, v, order + 1)?;
            j.deriv_u()?.div(&j.truncate(order)?)
        });
        let s = hsol.clone();
        let ph = phi.clone();
        let b = BivariateFn::new(move |u, v, order| {
            let numerator = Jet2::from_u_jet(&ph.eval(u, order)?, v, order)?;
            numerator.div(&s.eval(u, v, order)?)
        });
        let a2 = BivariateFn::new(move |u, v, order| Jet2::constant(T::zero(), u, v, order));
        let s = hsol.clone();
        let b2 = BivariateFn::new(move |u, v, order| {
            let j = s.eval(u, v, order + 1)?;
            j.deriv_v()?.div(&j.truncate(order)?)
        });
        let s = hsol.clone();
        let h = BivariateFn::new(move |u, v, order| s.eval(u, v, order));
        Self {
            kind: FrameKind::Ruled,
            a,
            b,
            h,
            a2,
            b2,
        }
    }

    /// Frame with caller-supplied coefficients, not assumed compatible.
    pub fn general(
        a: BivariateFn<T>,
        b: BivariateFn<T>,
        h: BivariateFn<T>,
        a2: BivariateFn<T>,
        b2: BivariateFn<T>,
    ) -> Self {
        Self {
            kind: FrameKind::General,
            a,
            b,
            h,
            a2,
            b2,
        }
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    /// Evaluates all five coefficients as jets of the given order.
    /// Fails when `h` vanishes at the point, since the frame is only
    /// meaningful for nonzero `h`.
    pub fn eval(&self, u: T, v: T, order: usize) -> Result<FrameJets<T>> {
        let h = self.h.eval(u, v, order)?;
        if h.value() == T::zero() {
            return Err(Error::Domain {
                func: "coefficient frame h",
                value: 0.0,
            });
        }
        Ok(FrameJets {
            a: self.a.eval(u, v, order)?,
            b: self.b.eval(u, v, order)?,
            h,
            a2: self.a2.eval(u, v, order)?,
            b2: self.b2.eval(u, v, order)?,
        })
    }
}

/// The six compatibility conditions of the linear system, as left-minus-
/// right values at `(u, v)`:
///
/// ```text
/// a h - h_u
/// a_v + b a2 - h
/// b_v + b b2
/// h_v - b2 h
/// a2_u + a a2
/// b2_u + a2 b - h
/// ```
///
/// All six vanish exactly when cross-differentiation of the system is
/// consistent, so a surface with this frame exists.
pub fn residual_integrability<T: Real>(
    frame: &CoefficientFrame<T>,
    u: T,
    v: T,
) -> Result<[T; 6]> {
    let f = frame.eval(u, v, 1)?;
    let (a, b, h, a2, b2) = (
        f.a.value(),
        f.b.value(),
        f.h.value(),
        f.a2.value(),
        f.b2.value(),
    );
    Ok([
        a * h - f.h.entry(1, 0)?,
        f.a.entry(0, 1)? + b * a2 - h,
        f.b.entry(0, 1)? + b * b2,
        f.h.entry(0, 1)? - b2 * h,
        f.a2.entry(1, 0)? + a * a2,
        f.b2.entry(1, 0)? + a2 * b - h,
    ])
}

/// Residuals of the three linear-system equations for a candidate
/// component `theta` (order at least 2) against the frame.
pub fn residual_linear_system<T: Real>(
    frame: &CoefficientFrame<T>,
    theta: &Jet2<T>,
) -> Result<[T; 3]> {
    if theta.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "residual_linear_system",
            needed: 2,
            got: theta.order(),
        });
    }
    let (u, v) = theta.base_point();
    let f = frame.eval(u, v, 1)?;
    let tu = theta.entry(1, 0)?;
    let tv = theta.entry(0, 1)?;
    Ok([
        theta.entry(2, 0)? - f.a.value() * tu - f.b.value() * tv,
        theta.entry(1, 1)? - f.h.value() * theta.value(),
        theta.entry(0, 2)? - f.a2.value() * tu - f.b2.value() * tv,
    ])
}

/// Triple product `det[r, r_u, r_v]` of a position vector and its first
/// derivatives, the nondegeneracy function of a centroaffine surface. The
/// caller asserts it is nonzero; a zero value means the position vector
/// lies in the tangent plane.
pub fn surface_conditions<T: Real>(rx: &Jet2<T>, ry: &Jet2<T>, rz: &Jet2<T>) -> Result<T> {
    let (u0, v0) = rx.base_point();
    for other in [ry, rz] {
        let (u1, v1) = other.base_point();
        if u1 != u0 || v1 != v0 {
            return Err(Error::BasePointMismatch {
                a0: to_display(u0),
                a1: to_display(v0),
                b0: to_display(u1),
                b1: to_display(v1),
            });
        }
    }
    let m = [
        [rx.value(), ry.value(), rz.value()],
        [rx.entry(1, 0)?, ry.entry(1, 0)?, rz.entry(1, 0)?],
        [rx.entry(0, 1)?, ry.entry(0, 1)?, rz.entry(0, 1)?],
    ];
    Ok(linalg::det3(&m))
}

/// Right side selector for the reduced profile ODE
/// `mu mu'' - mu'^2 = rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileRhs<T> {
    /// `rhs = mu^3`, the reduction of `(ln h)_uv = h` along `u + v`.
    Liouville,
    /// `rhs = k (mu^3 - 1)`, the reduction of `(ln h)_uv = h - 1/h^2`
    /// along `k_1 u + k_2 v` with `k = k_1 k_2`.
    TiteicaK(T),
}

/// Residual `mu mu'' - mu'^2 - rhs` of the reduced profile ODE.
pub fn residual_ode_mu<T: Real>(mu: &Jet1<T>, rhs: ProfileRhs<T>) -> Result<T> {
    if mu.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "residual_ode_mu",
            needed: 2,
            got: mu.order(),
        });
    }
    let m = mu.value();
    let d1 = mu.deriv(1)?;
    let d2 = mu.deriv(2)?;
    let right = match rhs {
        ProfileRhs::Liouville => m * m * m,
        ProfileRhs::TiteicaK(k) => k * (m * m * m - T::one()),
    };
    Ok(m * d2 - d1 * d1 - right)
}

/// Residual `g'^2 - g^3 - C g^2 - 4` of the first-order form reached by
/// the substitution `mu = g / 2` in the profile ODE's first integral.
pub fn residual_ode_g<T: Real>(g: &Jet1<T>, c: T) -> Result<T> {
    if g.order() < 1 {
        return Err(Error::InsufficientOrder {
            op: "residual_ode_g",
            needed: 1,
            got: g.order(),
        });
    }
    let gv = g.value();
    let d = g.deriv(1)?;
    Ok(d * d - gv * gv * gv - c * gv * gv - cst::<T>(4.0))
}

/// The combination `(mu'^2 - 2 mu^3 - 1) / (4 mu^2)`, constant along
/// solutions of `mu mu'' - mu'^2 = mu^3 - 1` and equal to `-k^2` for a
/// separable profile with separation constant `k`.
pub fn conserved_combination<T: Real>(mu: T, dmu: T) -> T {
    let two = cst::<T>(2.0);
    (dmu * dmu - two * mu * mu * mu - T::one()) / (cst::<T>(4.0) * mu * mu)
}

const MAX_ODE_NODES: usize = 2_000_000;
const BLOW_UP_BOUND: f64 = 1e12;

/// Integrates `mu mu'' - mu'^2 = k (mu^3 - 1)` with classical fixed-step
/// fourth-order Runge-Kutta from `(mu0, dmu0)` at `t0` forward to `t1`,
/// and returns the trajectory as a jet-evaluable curve.
///
/// The nominal step is rounded down so the nodes land exactly on `t1`.
/// Between nodes the curve interpolates with a quintic Hermite polynomial
/// matched to the nodal values, first derivatives and ODE-supplied second
/// derivatives, so jet queries up to order 4 stay consistent with the
/// trajectory. Integration aborts with an error when `mu` approaches zero
/// or grows past 1e12, since the equation degenerates there.
pub fn integrate_mu_ode<T: Real>(
    k: T,
    mu0: T,
    dmu0: T,
    t0: T,
    t1: T,
    step: T,
) -> Result<Curve<T>> {
    if step <= T::zero() {
        return Err(Error::Domain {
            func: "integrate_mu_ode step",
            value: to_display(step),
        });
    }
    if !(t1 > t0) {
        return Err(Error::Domain {
            func: "integrate_mu_ode window",
            value: to_display(t1 - t0),
        });
    }
    if mu0 == T::zero() {
        return Err(Error::Domain {
            func: "integrate_mu_ode mu0",
            value: 0.0,
        });
    }
    let span = t1 - t0;
    let raw = (span / step).ceil();
    let n = num_traits::NumCast::from(raw).unwrap_or(usize::MAX).max(1);
    if n > MAX_ODE_NODES {
        return Err(Error::GridTooLarge {
            nodes: n,
            cap: MAX_ODE_NODES,
        });
    }
    let h = span / cst::<T>(n as f64);

    let accel = move |m: T, d: T| (d * d + k * (m * m * m - T::one())) / m;
    let guard = |m: T, t: T| -> Result<()> {
        let mag = m.abs();
        if !m.is_finite() || mag > cst::<T>(BLOW_UP_BOUND) || mag < cst::<T>(1.0 / BLOW_UP_BOUND)
        {
            return Err(Error::OdeBlowUp {
                t: to_display(t),
                magnitude: to_display(mag),
            });
        }
        Ok(())
    };

    let mut values = Vec::with_capacity(n + 1);
    let mut slopes = Vec::with_capacity(n + 1);
    let (mut m, mut d) = (mu0, dmu0);
    guard(m, t0)?;
    values.push(m);
    slopes.push(d);
    let half = cst::<T>(0.5);
    let sixth = cst::<T>(1.0 / 6.0);
    let two = cst::<T>(2.0);
    for i in 0..n {
        let t = t0 + h * cst::<T>(i as f64);
        let (k1m, k1d) = (d, accel(m, d));
        let (m2, d2) = (m + half * h * k1m, d + half * h * k1d);
        guard(m2, t)?;
        let (k2m, k2d) = (d2, accel(m2, d2));
        let (m3, d3) = (m + half * h * k2m, d + half * h * k2d);
        guard(m3, t)?;
        let (k3m, k3d) = (d3, accel(m3, d3));
        let (m4, d4) = (m + h * k3m, d + h * k3d);
        guard(m4, t)?;
        let (k4m, k4d) = (d4, accel(m4, d4));
        m += h * sixth * (k1m + two * k2m + two * k3m + k4m);
        d += h * sixth * (k1d + two * k2d + two * k3d + k4d);
        guard(m, t + h)?;
        values.push(m);
        slopes.push(d);
    }

    // Monomial coefficients of the quintic Hermite interpolant on each
    // interval, in the scaled variable s = (t - t_i) / h.
    let three = cst::<T>(3.0);
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        let (y0, d0) = (values[i], slopes[i]);
        let (y1, d1) = (values[i + 1], slopes[i + 1]);
        let (a0, a1) = (accel(y0, d0), accel(y1, d1));
        let (hd0, hd1) = (h * d0, h * d1);
        let (ha0, ha1) = (h * h * a0, h * h * a1);
        let dy = y1 - y0;
        coeffs.push([
            y0,
            hd0,
            half * ha0,
            cst::<T>(10.0) * dy - cst::<T>(6.0) * hd0 - cst::<T>(1.5) * ha0
                - cst::<T>(4.0) * hd1
                + half * ha1,
            cst::<T>(-15.0) * dy + cst::<T>(8.0) * hd0 + cst::<T>(1.5) * ha0
                + cst::<T>(7.0) * hd1
                - ha1,
            cst::<T>(6.0) * dy - three * hd0 - half * ha0 - three * hd1 + half * ha1,
        ]);
    }

    let lo = t0 - h;
    let hi = t1 + h;
    Ok(Curve::new(lo, hi, move |t, order| {
        let offset = (t - t0) / h;
        let idx: usize = num_traits::NumCast::from(offset.floor().max(T::zero()))
            .unwrap_or(0)
            .min(n - 1);
        let q = &coeffs[idx];
        let s = offset - cst::<T>(idx as f64);
        let mut derivs = Vec::with_capacity(order + 1);
        let mut h_pow = T::one();
        for j in 0..=order {
            let mut acc = T::zero();
            for deg in (j..6).rev() {
                let mut fall = T::one();
                for step_down in 0..j {
                    fall = fall * cst::<T>((deg - step_down) as f64);
                }
                acc = acc * s + q[deg] * fall;
            }
            derivs.push(acc / h_pow);
            h_pow *= h;
        }
        Jet1::from_derivs(t, &derivs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{
        liouville_general, mu_family, titeica_constant, titeica_sinh, titeica_sinh_profile,
        MuCase,
    };
    use proptest::prelude::*;

    fn omega_zero_jet(u: f64, v: f64) -> Jet2<f64> {
        Jet2::constant(0.0, u, v, 2).unwrap()
    }

    #[test]
    fn flat_omega_solves_titeica() {
        let r = residual_scalar(&PdeKind::TiteicaOmega, &omega_zero_jet(0.3, -1.0)).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn rational_solution_solves_liouville_h() {
        let h = liouville_general(&Curve::<f64>::identity(), &Curve::identity());
        let jet = h.eval(1.0, 1.0, 2).unwrap();
        let r = residual_scalar(&PdeKind::LiouvilleH, &jet).unwrap();
        assert!(r.abs() < 1e-12, "residual {r}");
    }

    #[test]
    fn sinh_solution_solves_titeica_h() {
        let h = titeica_sinh(0.0f64);
        let jet = h.eval(0.5, 0.7, 2).unwrap();
        let r = residual_scalar(&PdeKind::TiteicaH, &jet).unwrap();
        assert!(r.abs() < 1e-10, "residual {r}");
    }

    #[test]
    fn general_family_with_exponential_right_side_matches_liouville() {
        let general = PdeKind::GeneralH(Curve::<f64>::exponential());
        let w = Jet2::from_entries(0.2, -0.4, 2, &[0.3, 1.0, -0.5, 0.2, 0.7, 0.1]).unwrap();
        let a = residual_scalar(&general, &w).unwrap();
        let b = residual_scalar(&PdeKind::LiouvilleOmega, &w).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn h_form_requires_positive_value() {
        let w = Jet2::from_entries(0.0, 0.0, 2, &[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(residual_scalar(&PdeKind::LiouvilleH, &w).is_err());
        let low = Jet2::seed_u(1.0, 1.0, 1).unwrap();
        assert!(matches!(
            residual_scalar::<f64>(&PdeKind::LiouvilleOmega, &low),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    proptest! {
        #[test]
        fn h_and_omega_forms_agree_on_random_positive_jets(
            value in 0.2f64..3.0,
            entries in proptest::array::uniform5(-2.0f64..2.0),
        ) {
            let all = [value, entries[0], entries[1], entries[2], entries[3], entries[4]];
            let h = Jet2::from_entries(0.0, 0.0, 2, &all).unwrap();
            let omega = h.ln().unwrap();
            let liou =
                (residual_scalar(&PdeKind::LiouvilleH, &h).unwrap()
                    - residual_scalar(&PdeKind::LiouvilleOmega, &omega).unwrap())
                .abs();
            let tit =
                (residual_scalar(&PdeKind::TiteicaH, &h).unwrap()
                    - residual_scalar(&PdeKind::TiteicaOmega, &omega).unwrap())
                .abs();
            prop_assert!(liou < 1e-12, "liouville forms differ by {liou}");
            prop_assert!(tit < 1e-12, "titeica forms differ by {tit}");
        }

        #[test]
        fn non_ruled_frame_is_integrable_for_titeica_solutions(
            u in 0.2f64..2.0,
            v in 0.2f64..2.0,
        ) {
            let frame = CoefficientFrame::non_ruled(&titeica_sinh(0.3));
            for (i, r) in residual_integrability(&frame, u, v).unwrap().iter().enumerate() {
                prop_assert!(r.abs() < 1e-9, "condition {i}: {r} at ({u}, {v})");
            }
        }

        #[test]
        fn ruled_frame_is_integrable_for_liouville_solutions(
            u in 0.2f64..2.0,
            v in 0.2f64..2.0,
        ) {
            let h = liouville_general(&Curve::identity(), &Curve::identity());
            let phi = Curve::from_expr(f64::NEG_INFINITY, f64::INFINITY, |t| {
                t.sin()?.shift(2.0)
            });
            let frame = CoefficientFrame::ruled(&h, &phi);
            for (i, r) in residual_integrability(&frame, u, v).unwrap().iter().enumerate() {
                prop_assert!(r.abs() < 1e-9, "condition {i}: {r} at ({u}, {v})");
            }
        }
    }

    #[test]
    fn incompatible_frame_is_detected() {
        let one = BivariateFn::new(|u, v, order| Jet2::constant(1.0, u, v, order));
        let zero = BivariateFn::new(|u, v, order| Jet2::constant(0.0, u, v, order));
        let frame = CoefficientFrame::general(
            one.clone(),
            zero.clone(),
            one.clone(),
            zero.clone(),
            zero,
        );
        let r = residual_integrability(&frame, 0.0, 0.0).unwrap();
        assert_eq!(r[0], 1.0);
        assert_eq!(frame.kind(), FrameKind::General);
    }

    #[test]
    fn constant_frame_admits_exponential_solution() {
        let frame = CoefficientFrame::non_ruled(&titeica_constant::<f64>());
        let theta = BivariateFn::from_expr(|u, v| u.add(v)?.exp());
        for &(u, v) in &[(0.0, 0.0), (0.5, -0.3)] {
            let jet = theta.eval(u, v, 2).unwrap();
            for r in residual_linear_system(&frame, &jet).unwrap() {
                assert!(r.abs() < 1e-12, "residual {r} at ({u}, {v})");
            }
        }
        let trivial = Jet2::constant(0.0, 1.0, 1.0, 2).unwrap();
        assert_eq!(residual_linear_system(&frame, &trivial).unwrap(), [0.0; 3]);
    }

    #[test]
    fn revolution_component_solves_the_sinh_linear_system() {
        let mu = titeica_sinh_profile::<f64>(0.5);
        let k = 0.75f64.sqrt();
        let theta = crate::solutions::revolution_theta(k, &mu, [1.0, 0.5, 0.7], 1.0);
        let frame = CoefficientFrame::non_ruled(&titeica_sinh(0.5));
        for &(u, v) in &[(0.7, 0.8), (1.2, 1.0), (0.4, 1.9)] {
            let jet = theta.eval(u, v, 2).unwrap();
            for (i, r) in residual_linear_system(&frame, &jet).unwrap().iter().enumerate() {
                assert!(r.abs() < 1e-8, "equation {i}: residual {r} at ({u}, {v})");
            }
        }
    }

    #[test]
    fn triple_product_of_exponential_parametrization() {
        let r = BivariateFn::from_expr(|u: &Jet2<f64>, v: &Jet2<f64>| {
            u.add(v)?.scale(-1.0)?.exp()
        });
        let rx = BivariateFn::from_expr(|u: &Jet2<f64>, _| u.exp());
        let ry = BivariateFn::from_expr(|_, v: &Jet2<f64>| v.exp());
        let x = rx.eval(0.0, 0.0, 1).unwrap();
        let y = ry.eval(0.0, 0.0, 1).unwrap();
        let z = r.eval(0.0, 0.0, 1).unwrap();
        let det = surface_conditions(&x, &y, &z).unwrap();
        assert!((det - 3.0).abs() < 1e-12);
    }

    #[test]
    fn planar_surface_through_origin_is_degenerate() {
        let x = Jet2::seed_u(0.7, 0.4, 1).unwrap();
        let y = Jet2::seed_v(0.7, 0.4, 1).unwrap();
        let z = Jet2::constant(0.0, 0.7, 0.4, 1).unwrap();
        assert_eq!(surface_conditions(&x, &y, &z).unwrap(), 0.0);
        let moved = Jet2::seed_u(0.0, 0.0, 1).unwrap();
        assert!(surface_conditions(&moved, &y, &z).is_err());
    }

    #[test]
    fn profile_ode_residuals() {
        let flat = Jet1::constant(1.0f64, 0.0, 2).unwrap();
        assert_eq!(residual_ode_mu(&flat, ProfileRhs::TiteicaK(1.0)).unwrap(), 0.0);

        let zero_case = mu_family(MuCase::KZero, 1.0f64, 0.0).unwrap();
        let jet = zero_case.eval(1.0, 2).unwrap();
        let liou = residual_ode_mu(&jet, ProfileRhs::Liouville).unwrap();
        assert!(liou.abs() < 1e-12, "residual {liou}");
        let cross = residual_ode_mu(&jet, ProfileRhs::TiteicaK(1.0)).unwrap();
        assert!(cross.abs() > 0.5, "cross-family residual should be large, got {cross}");
    }

    #[test]
    fn g_form_residuals() {
        let root3 = 3.0f64.sqrt();
        let g = Curve::from_expr(0.01, f64::INFINITY, move |t| {
            let w = t.scale(root3 / 2.0)?.sinh()?.scale(1.0 / root3)?;
            w.powi(-2)?.shift(2.0)
        });
        for &t in &[0.2, 1.0, 3.0] {
            let jet = g.eval(t, 1).unwrap();
            let r = residual_ode_g(&jet, -3.0).unwrap();
            // Near t = 0 the terms grow like g^3, so compare relatively.
            let scale = jet.value().powi(3).max(1.0);
            assert!(r.abs() / scale < 1e-12, "residual {r} at {t}");
        }
        // g = 2 mu for the sinh profile satisfies the same first-order form.
        let mu = titeica_sinh_profile::<f64>(0.0);
        let doubled = mu.eval(0.8, 1).unwrap().scale(2.0).unwrap();
        assert!(residual_ode_g(&doubled, -3.0).unwrap().abs() < 1e-10);

        let two = Jet1::constant(2.0, 0.0, 1).unwrap();
        assert_eq!(residual_ode_g(&two, -3.0).unwrap(), 0.0);
        let zero = Jet1::constant(0.0, 0.0, 1).unwrap();
        assert_eq!(residual_ode_g(&zero, -3.0).unwrap(), -4.0);
    }

    #[test]
    fn equilibrium_trajectory_stays_flat() {
        let curve = integrate_mu_ode(1.0f64, 1.0, 0.0, 0.0, 2.0, 0.01).unwrap();
        for &t in &[0.0, 0.7, 1.5, 2.0] {
            let j = curve.eval(t, 1).unwrap();
            assert!((j.value() - 1.0).abs() < 1e-13);
            assert!(j.deriv(1).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn integrated_trajectory_matches_closed_form() {
        let profile = titeica_sinh_profile::<f64>(0.0);
        let seed = profile.eval(1.0, 1).unwrap();
        let curve =
            integrate_mu_ode(1.0, seed.value(), seed.deriv(1).unwrap(), 1.0, 2.0, 1e-3).unwrap();
        let reference = conserved_combination(seed.value(), seed.deriv(1).unwrap());
        for &t in &[1.0, 1.3, 1.77, 2.0] {
            let got = curve.eval(t, 1).unwrap();
            let want = profile.eval(t, 1).unwrap();
            assert!(
                (got.value() - want.value()).abs() < 1e-8,
                "value drift at {t}"
            );
            assert!(
                (got.deriv(1).unwrap() - want.deriv(1).unwrap()).abs() < 1e-6,
                "slope drift at {t}"
            );
            let drift =
                (conserved_combination(got.value(), got.deriv(1).unwrap()) - reference).abs();
            assert!(drift < 1e-8, "first-integral drift {drift} at {t}");
        }
    }

    #[test]
    fn halving_the_step_shrinks_the_error_fourth_order() {
        let profile = titeica_sinh_profile::<f64>(0.0);
        let seed = profile.eval(1.0, 1).unwrap();
        let target = profile.value(3.0).unwrap();
        let error_at = |step: f64| {
            let curve =
                integrate_mu_ode(1.0, seed.value(), seed.deriv(1).unwrap(), 1.0, 3.0, step)
                    .unwrap();
            (curve.value(3.0).unwrap() - target).abs()
        };
        let coarse = error_at(0.04);
        let fine = error_at(0.02);
        assert!(
            coarse > fine * 12.0,
            "convergence ratio {} too low",
            coarse / fine
        );
    }

    #[test]
    fn runaway_trajectory_reports_blow_up() {
        let result = integrate_mu_ode(1.0f64, 2.0, 10.0, 0.0, 5.0, 0.01);
        assert!(matches!(result, Err(Error::OdeBlowUp { .. })));
    }

    #[test]
    fn bad_integrator_arguments_are_rejected() {
        assert!(integrate_mu_ode(1.0f64, 1.0, 0.0, 0.0, 1.0, -0.1).is_err());
        assert!(integrate_mu_ode(1.0f64, 1.0, 0.0, 1.0, 1.0, 0.1).is_err());
        assert!(integrate_mu_ode(1.0f64, 0.0, 1.0, 0.0, 1.0, 0.1).is_err());
    }
}

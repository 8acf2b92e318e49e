//! Lie point symmetries of the structure PDEs.
//!
//! Vector fields live on `(u, v, omega)`-space with jet-evaluable
//! coefficients, so prolongations, invariance defects and determining
//! systems all reduce to finite chain-rule computations at a point. No
//! symbolic algebra is involved: a claimed symmetry is certified by
//! evaluating its prolongation on jets and checking that the relevant
//! combination vanishes to working precision.

pub mod adjoint;
pub mod catalog;

pub use adjoint::{adjoint, structure_constants};
pub use catalog::{
    catalog, invariant_xyz_check, liouville_symmetry_field, liouville_variational_symmetries,
    reparametrization_field, theta_scaling_field, titeica_symmetries,
    titeica_variational_symmetries, unimodular_generators, CatalogEntry, CatalogName,
    LinearField,
};

use crate::error::{Error, Result};
use crate::jets::Jet2;
use crate::pde::{CoefficientFrame, PdeKind};
use crate::real::{cst, Real};
use crate::solutions::{BivariateFn, Curve};
use crate::to_display;
use std::sync::Arc;

/// Jet-evaluable coefficient of a vector field: receives jets of the three
/// arguments `(u, v, omega)` at a common formal base point and returns the
/// composed jet. Passing the solution jet of `omega` as the third argument
/// makes the result carry total derivatives automatically.
pub type Coefficient<T> =
    Arc<dyn Fn(&Jet2<T>, &Jet2<T>, &Jet2<T>) -> Result<Jet2<T>> + Send + Sync>;

/// Vector field `zeta d/du + eta d/dv + phi d/domega` on the space of
/// independent variables and one dependent variable.
#[derive(Clone)]
pub struct VectorField3<T> {
    name: String,
    zeta: Coefficient<T>,
    eta: Coefficient<T>,
    phi: Coefficient<T>,
}

impl<T: Real> VectorField3<T> {
    pub fn new(
        name: impl Into<String>,
        zeta: impl Fn(&Jet2<T>, &Jet2<T>, &Jet2<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
        eta: impl Fn(&Jet2<T>, &Jet2<T>, &Jet2<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
        phi: impl Fn(&Jet2<T>, &Jet2<T>, &Jet2<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
    ) -> Self {
        Self::from_parts(name, Arc::new(zeta), Arc::new(eta), Arc::new(phi))
    }

    pub fn from_parts(
        name: impl Into<String>,
        zeta: Coefficient<T>,
        eta: Coefficient<T>,
        phi: Coefficient<T>,
    ) -> Self {
        Self {
            name: name.into(),
            zeta,
            eta,
            phi,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Coefficient closure by slot: 0 = zeta, 1 = eta, 2 = phi.
    pub fn coefficient(&self, slot: usize) -> &Coefficient<T> {
        match slot {
            0 => &self.zeta,
            1 => &self.eta,
            _ => &self.phi,
        }
    }

    /// The field scaled by -1, named by toggling a leading minus sign.
    pub fn negated(&self) -> Self {
        let name = match self.name.strip_prefix('-') {
            Some(stripped) => stripped.to_string(),
            None => format!("-{}", self.name),
        };
        let flip = |c: &Coefficient<T>| -> Coefficient<T> {
            let c = c.clone();
            Arc::new(move |uj: &Jet2<T>, vj: &Jet2<T>, wj: &Jet2<T>| Ok(c(uj, vj, wj)?.neg()))
        };
        Self {
            name,
            zeta: flip(&self.zeta),
            eta: flip(&self.eta),
            phi: flip(&self.phi),
        }
    }

    /// Values of the three coefficients at a point.
    pub fn coefficients_at(&self, u: T, v: T, w: T) -> Result<[T; 3]> {
        let (uj, vj, wj) = point_jets(u, v, w)?;
        Ok([
            (self.zeta)(&uj, &vj, &wj)?.value(),
            (self.eta)(&uj, &vj, &wj)?.value(),
            (self.phi)(&uj, &vj, &wj)?.value(),
        ])
    }
}

fn point_jets<T: Real>(u: T, v: T, w: T) -> Result<(Jet2<T>, Jet2<T>, Jet2<T>)> {
    Ok((
        Jet2::constant(u, u, v, 1)?,
        Jet2::constant(v, u, v, 1)?,
        Jet2::constant(w, u, v, 1)?,
    ))
}

/// Gradient of a coefficient in the three variables.
struct Grad3<T> {
    du: T,
    dv: T,
    dw: T,
}

fn first_partials<T: Real>(c: &Coefficient<T>, u: T, v: T, w: T) -> Result<Grad3<T>> {
    // Pairing (u, w) with v frozen, then (v, w) with u frozen, recovers
    // all first partials from two bivariate evaluations.
    let uw = c(
        &Jet2::seed_u(u, w, 1)?,
        &Jet2::constant(v, u, w, 1)?,
        &Jet2::seed_v(u, w, 1)?,
    )?;
    let vw = c(
        &Jet2::constant(u, v, w, 1)?,
        &Jet2::seed_u(v, w, 1)?,
        &Jet2::seed_v(v, w, 1)?,
    )?;
    Ok(Grad3 {
        du: uw.entry(1, 0)?,
        dv: vw.entry(1, 0)?,
        dw: uw.entry(0, 1)?,
    })
}

/// Value, gradient and Hessian of a coefficient in the three variables.
struct Hess3<T> {
    grad: [T; 4],
    hess: [[T; 3]; 3],
}

impl<T: Real> Hess3<T> {
    fn value(&self) -> T {
        self.grad[0]
    }

    fn gradient(&self) -> [T; 3] {
        [self.grad[1], self.grad[2], self.grad[3]]
    }
}

fn second_partials<T: Real>(c: &Coefficient<T>, u: T, v: T, w: T) -> Result<Hess3<T>> {
    let uw = c(
        &Jet2::seed_u(u, w, 2)?,
        &Jet2::constant(v, u, w, 2)?,
        &Jet2::seed_v(u, w, 2)?,
    )?;
    let vw = c(
        &Jet2::constant(u, v, w, 2)?,
        &Jet2::seed_u(v, w, 2)?,
        &Jet2::seed_v(v, w, 2)?,
    )?;
    let uv = c(
        &Jet2::seed_u(u, v, 2)?,
        &Jet2::seed_v(u, v, 2)?,
        &Jet2::constant(w, u, v, 2)?,
    )?;
    let duu = uw.entry(2, 0)?;
    let dvv = vw.entry(2, 0)?;
    let dww = uw.entry(0, 2)?;
    let duv = uv.entry(1, 1)?;
    let duw = uw.entry(1, 1)?;
    let dvw = vw.entry(1, 1)?;
    Ok(Hess3 {
        grad: [uw.value(), uw.entry(1, 0)?, vw.entry(1, 0)?, uw.entry(0, 1)?],
        hess: [
            [duu, duv, duw],
            [duv, dvv, dvw],
            [duw, dvw, dww],
        ],
    })
}

/// Characteristic `Q = phi - zeta omega_u - eta omega_v` of a field on a
/// jet of `omega`.
pub fn characteristic<T: Real>(x: &VectorField3<T>, w: &Jet2<T>) -> Result<T> {
    let (u0, v0) = w.base_point();
    let c = x.coefficients_at(u0, v0, w.value())?;
    Ok(c[2] - c[0] * w.entry(1, 0)? - c[1] * w.entry(0, 1)?)
}

/// First- and second-prolongation coefficients of a field evaluated on an
/// order-3 jet of `omega`.
#[derive(Debug, Clone, Copy)]
pub struct ProlongedValue<T> {
    pub alpha_u: T,
    pub alpha_v: T,
    pub alpha_uu: T,
    pub alpha_uv: T,
    pub alpha_vv: T,
}

/// Evaluates the second prolongation of `x` on `w` (order exactly 3).
///
/// Each coefficient is `D_J(Q) + zeta omega_{J u} + eta omega_{J v}`: the
/// characteristic is composed through the jet of `omega`, so its entries
/// are total derivatives, and the transport terms reattach the highest
/// derivatives that the truncation dropped.
pub fn prolong2<T: Real>(x: &VectorField3<T>, w: &Jet2<T>) -> Result<ProlongedValue<T>> {
    if w.order() < 3 {
        return Err(Error::InsufficientOrder {
            op: "prolong2",
            needed: 3,
            got: w.order(),
        });
    }
    let (u0, v0) = w.base_point();
    let w2 = w.truncate(2)?;
    let useed = Jet2::seed_u(u0, v0, 2)?;
    let vseed = Jet2::seed_v(u0, v0, 2)?;
    let zj = (x.zeta)(&useed, &vseed, &w2)?;
    let ej = (x.eta)(&useed, &vseed, &w2)?;
    let pj = (x.phi)(&useed, &vseed, &w2)?;
    let wu = w.deriv_u()?;
    let wv = w.deriv_v()?;
    let q = pj.sub(&zj.mul(&wu)?)?.sub(&ej.mul(&wv)?)?;
    let z0 = zj.value();
    let e0 = ej.value();
    Ok(ProlongedValue {
        alpha_u: q.entry(1, 0)? + z0 * w.entry(2, 0)? + e0 * w.entry(1, 1)?,
        alpha_v: q.entry(0, 1)? + z0 * w.entry(1, 1)? + e0 * w.entry(0, 2)?,
        alpha_uu: q.entry(2, 0)? + z0 * w.entry(3, 0)? + e0 * w.entry(2, 1)?,
        alpha_uv: q.entry(1, 1)? + z0 * w.entry(2, 1)? + e0 * w.entry(1, 2)?,
        alpha_vv: q.entry(0, 2)? + z0 * w.entry(1, 2)? + e0 * w.entry(0, 3)?,
    })
}

const ON_SOLUTION_TOL: f64 = 1e-8;

/// Infinitesimal invariance defect of `x` for the equation
/// `omega_uv = H(omega)` at an on-solution jet: the value of the second
/// prolongation applied to the equation, `alpha_uv - H'(omega) phi`.
///
/// `w` must be an order-3 jet of `omega` sampled from a solution; jets
/// whose equation residual exceeds an internal tolerance are rejected so
/// an off-manifold sample cannot masquerade as a symmetry failure.
pub fn invariance_defect<T: Real>(
    x: &VectorField3<T>,
    kind: &PdeKind<T>,
    w: &Jet2<T>,
) -> Result<T> {
    let rhs = kind.omega_rhs();
    let hj = rhs.eval(w.value(), 1)?;
    let residual = w.entry(1, 1)? - hj.value();
    if residual.abs() > cst::<T>(ON_SOLUTION_TOL) {
        return Err(Error::NotOnSolution {
            residual: to_display(residual),
            tol: ON_SOLUTION_TOL,
        });
    }
    let p = prolong2(x, w)?;
    let (u0, v0) = w.base_point();
    let phi0 = x.coefficients_at(u0, v0, w.value())?[2];
    Ok(p.alpha_uv - hj.deriv(1)? * phi0)
}

/// One-parameter group actions that carry solutions of the scalar PDEs to
/// solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionAction<T> {
    /// `(u, v) -> (e^eps u, e^-eps v)`.
    Scale(T),
    /// `u -> u - eps`.
    ShiftU(T),
    /// `v -> v - eps`.
    ShiftV(T),
}

/// Applies a group action to a bivariate function, returning the lazily
/// composed pullback. Jets of the result chain through the affine change
/// of variables exactly.
pub fn transform_solution<T: Real>(
    action: SolutionAction<T>,
    f: &BivariateFn<T>,
) -> BivariateFn<T> {
    let f = f.clone();
    match action {
        SolutionAction::Scale(eps) => BivariateFn::new(move |u, v, order| {
            let su = eps.exp();
            let sv = (-eps).exp();
            f.eval(su * u, sv * v, order)?.affine_pullback(u, v, su, sv)
        }),
        SolutionAction::ShiftU(eps) => BivariateFn::new(move |u, v, order| {
            f.eval(u - eps, v, order)?
                .affine_pullback(u, v, T::one(), T::one())
        }),
        SolutionAction::ShiftV(eps) => BivariateFn::new(move |u, v, order| {
            f.eval(u, v - eps, order)?
                .affine_pullback(u, v, T::one(), T::one())
        }),
    }
}

/// Lie bracket `[x, y]` as a vector field.
///
/// The returned field's coefficients are computed numerically from first
/// and second partials of the operand coefficients, so they evaluate on
/// jets of order 1 only; prolonging a bracketed field is not supported.
pub fn lie_bracket<T: Real>(x: &VectorField3<T>, y: &VectorField3<T>) -> VectorField3<T> {
    let name = format!("[{}, {}]", x.name, y.name);
    let slot_closure = |slot: usize| -> Coefficient<T> {
        let x = x.clone();
        let y = y.clone();
        Arc::new(move |uj, vj, wj| bracket_slot(&x, &y, slot, uj, vj, wj))
    };
    let zeta = slot_closure(0);
    let eta = slot_closure(1);
    let phi = slot_closure(2);
    VectorField3::from_parts(name, zeta, eta, phi)
}

fn is_constant_jet<T: Real>(j: &Jet2<T>) -> bool {
    j.entries().skip(1).all(|(_, _, x)| x == T::zero())
}

fn bracket_slot<T: Real>(
    x: &VectorField3<T>,
    y: &VectorField3<T>,
    slot: usize,
    uj: &Jet2<T>,
    vj: &Jet2<T>,
    wj: &Jet2<T>,
) -> Result<Jet2<T>> {
    let order = uj.order();
    if order > 1 {
        return Err(Error::InvalidOrder {
            order,
            min: 1,
            max: 1,
        });
    }
    let (u, v, w) = (uj.value(), vj.value(), wj.value());
    let (b0, b1) = uj.base_point();
    if is_constant_jet(uj) && is_constant_jet(vj) && is_constant_jet(wj) {
        // Frozen arguments: only the bracket's value survives, which needs
        // first partials of the slot coefficients and operand values.
        let xv = x.coefficients_at(u, v, w)?;
        let yv = y.coefficients_at(u, v, w)?;
        let gx = first_partials(x.coefficient(slot), u, v, w)?;
        let gy = first_partials(y.coefficient(slot), u, v, w)?;
        let value = xv[0] * gy.du + xv[1] * gy.dv + xv[2] * gy.dw
            - (yv[0] * gx.du + yv[1] * gx.dv + yv[2] * gx.dw);
        return Jet2::from_entries(b0, b1, 1, &[value, T::zero(), T::zero()]);
    }

    let hx: [Hess3<T>; 3] = [
        second_partials(&x.zeta, u, v, w)?,
        second_partials(&x.eta, u, v, w)?,
        second_partials(&x.phi, u, v, w)?,
    ];
    let hy: [Hess3<T>; 3] = [
        second_partials(&y.zeta, u, v, w)?,
        second_partials(&y.eta, u, v, w)?,
        second_partials(&y.phi, u, v, w)?,
    ];
    let gx = hx[slot].gradient();
    let gy = hy[slot].gradient();
    let mut value = T::zero();
    for i in 0..3 {
        value += hx[i].value() * gy[i] - hy[i].value() * gx[i];
    }
    // Gradient of the bracket coefficient by the product rule, then the
    // chain rule along the passed jets.
    let mut grad = [T::zero(); 3];
    for (j, g) in grad.iter_mut().enumerate() {
        for i in 0..3 {
            *g += hx[i].gradient()[j] * gy[i] + hx[i].value() * hy[slot].hess[i][j]
                - hy[i].gradient()[j] * gx[i]
                - hy[i].value() * hx[slot].hess[i][j];
        }
    }
    let dx = grad[0] * uj.entry(1, 0)? + grad[1] * vj.entry(1, 0)? + grad[2] * wj.entry(1, 0)?;
    let dy = grad[0] * uj.entry(0, 1)? + grad[1] * vj.entry(0, 1)? + grad[2] * wj.entry(0, 1)?;
    Jet2::from_entries(b0, b1, 1, &[value, dx, dy])
}

/// Residuals of the five determining equations for a reparametrization
/// field `zeta(u) d/du + eta(v) d/dv` to preserve the shape of a linear
/// system with the given coefficient frame:
///
/// ```text
/// zeta a_u  + eta a_v  + a zeta'         + zeta''
/// zeta b_u  + eta b_v  - b eta'  + 2 b zeta'
/// zeta h_u  + eta h_v  + h (zeta' + eta')
/// zeta a2_u + eta a2_v - a2 zeta' + 2 a2 eta'
/// zeta b2_u + eta b2_v + b2 eta'         + eta''
/// ```
pub fn frame_determining_residual<T: Real>(
    zeta: &Curve<T>,
    eta: &Curve<T>,
    frame: &CoefficientFrame<T>,
    u: T,
    v: T,
) -> Result<[T; 5]> {
    let f = frame.eval(u, v, 1)?;
    let zj = zeta.eval(u, 2)?;
    let ej = eta.eval(v, 2)?;
    let (z, z1, z2) = (zj.value(), zj.deriv(1)?, zj.deriv(2)?);
    let (e, e1, e2) = (ej.value(), ej.deriv(1)?, ej.deriv(2)?);
    let two = cst::<T>(2.0);
    Ok([
        z * f.a.entry(1, 0)? + e * f.a.entry(0, 1)? + f.a.value() * z1 + z2,
        z * f.b.entry(1, 0)? + e * f.b.entry(0, 1)? - f.b.value() * e1 + two * f.b.value() * z1,
        z * f.h.entry(1, 0)? + e * f.h.entry(0, 1)? + f.h.value() * (z1 + e1),
        z * f.a2.entry(1, 0)? + e * f.a2.entry(0, 1)? - f.a2.value() * z1
            + two * f.a2.value() * e1,
        z * f.b2.entry(1, 0)? + e * f.b2.entry(0, 1)? + f.b2.value() * e1 + e2,
    ])
}

/// Residual `zeta^3 phi - k` of the extra constraint that appears when the
/// determining system is specialized to a ruled frame: the coefficient
/// `zeta(u)` must satisfy `zeta^3 = k / phi(u)` for some constant `k`.
pub fn ruled_reparametrization_residual<T: Real>(
    zeta: &Curve<T>,
    phi: &Curve<T>,
    k: T,
    u: T,
) -> Result<T> {
    let z = zeta.value(u)?;
    Ok(z * z * z * phi.value(u)? - k)
}

/// Residuals of the eight determining equations for a point symmetry of
/// `omega_uv = H(omega)` at a sample `(u, v, omega)`:
///
/// ```text
/// zeta_v, zeta_omega, eta_u, eta_omega,
/// phi_omega_omega, phi_u_omega, phi_v_omega,
/// phi_uv + (phi_omega - zeta_u - eta_v) H - H' phi
/// ```
///
/// All eight vanish identically exactly when the field generates a
/// symmetry of the equation.
pub fn omega_determining_residual<T: Real>(
    x: &VectorField3<T>,
    hfn: &Curve<T>,
    u: T,
    v: T,
    w: T,
) -> Result<[T; 8]> {
    let gz = first_partials(&x.zeta, u, v, w)?;
    let ge = first_partials(&x.eta, u, v, w)?;
    let hp = second_partials(&x.phi, u, v, w)?;
    let hj = hfn.eval(w, 1)?;
    Ok([
        gz.dv,
        gz.dw,
        ge.du,
        ge.dw,
        hp.hess[2][2],
        hp.hess[0][2],
        hp.hess[1][2],
        hp.hess[0][1] + (hp.gradient()[2] - gz.du - ge.dv) * hj.value()
            - hj.deriv(1)? * hp.value(),
    ])
}

/// Applies the second prolongation of the scaling field
/// `u d/du - v d/dv` to the four fundamental differential invariants
/// `omega`, `omega_u omega_v`, `omega_uv`, `omega_uu omega_vv` at the jet.
/// All four outputs vanish for every jet, certifying the invariants.
///
/// Accepts order 2 or 3. An order-2 jet is zero-extended: the scaling
/// field's prolongation cancels all third-derivative contributions in
/// these combinations, so the padding never reaches the output.
pub fn scaling_invariants_check<T: Real>(w: &Jet2<T>) -> Result<[T; 4]> {
    if w.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "scaling_invariants_check",
            needed: 2,
            got: w.order(),
        });
    }
    let w3 = if w.order() == 3 {
        *w
    } else {
        w.zero_extend(3)?
    };
    let [u1, _, _] = catalog::titeica_symmetries::<T>();
    let p = prolong2(&u1, &w3)?;
    let (u0, v0) = w.base_point();
    let phi0 = u1.coefficients_at(u0, v0, w.value())?[2];
    Ok([
        phi0,
        p.alpha_u * w.entry(0, 1)? + p.alpha_v * w.entry(1, 0)?,
        p.alpha_uv,
        p.alpha_uu * w.entry(0, 2)? + p.alpha_vv * w.entry(2, 0)?,
    ])
}

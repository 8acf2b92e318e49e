//! Variational structure of the scalar equations: Lagrangian densities,
//! the Euler-Lagrange operator, the Helmholtz compatibility conditions,
//! the variational-symmetry criterion and conservation laws in
//! characteristic form.
//!
//! Everything is certified at jet level. An identity such as
//! `Div P = Q Delta` is checked on arbitrary jets, not just on solutions,
//! which is the strongest finite test available pointwise.

use crate::error::{Error, Result};
use crate::jets::fd::fd_oracle_curve;
use crate::jets::Jet2;
use crate::pde::{residual_scalar, PdeKind};
use crate::real::{cst, Real};
use crate::symmetry::VectorField3;
use crate::to_display;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// First-order argument pack for densities and fluxes: jets of the
/// coordinates, the unknown and its first derivatives at a common base
/// point. When built from a solution jet, every member carries total
/// derivatives, so derivatives of composed expressions are total
/// derivatives too.
pub struct JetArgs<T> {
    pub u: Jet2<T>,
    pub v: Jet2<T>,
    pub w: Jet2<T>,
    pub wu: Jet2<T>,
    pub wv: Jet2<T>,
}

/// Jet-evaluable expression in `(u, v, omega, omega_u, omega_v)`.
pub type JetExpr<T> = Arc<dyn Fn(&JetArgs<T>) -> Result<Jet2<T>> + Send + Sync>;

impl<T: Real> JetArgs<T> {
    /// Builds the order-1 pack whose entries are total derivatives along
    /// the given jet of the unknown.
    pub fn from_solution_jet(w: &Jet2<T>) -> Result<Self> {
        if w.order() < 2 {
            return Err(Error::InsufficientOrder {
                op: "jet argument pack",
                needed: 2,
                got: w.order(),
            });
        }
        let (u0, v0) = w.base_point();
        Ok(Self {
            u: Jet2::seed_u(u0, v0, 1)?,
            v: Jet2::seed_v(u0, v0, 1)?,
            w: w.truncate(1)?,
            wu: w.deriv_u()?.truncate(1)?,
            wv: w.deriv_v()?.truncate(1)?,
        })
    }

    fn constants(u0: T, v0: T, w0: T, wu0: T, wv0: T) -> Result<Self> {
        Ok(Self {
            u: Jet2::constant(u0, u0, v0, 1)?,
            v: Jet2::constant(v0, u0, v0, 1)?,
            w: Jet2::constant(w0, u0, v0, 1)?,
            wu: Jet2::constant(wu0, u0, v0, 1)?,
            wv: Jet2::constant(wv0, u0, v0, 1)?,
        })
    }
}

/// First-order Lagrangian density with closed-form partial derivatives.
///
/// The partials are stored instead of derived because total derivatives
/// of a partial need the partial's own jet; closed forms keep low-order
/// jets sufficient for every operation here.
#[derive(Clone)]
pub struct Lagrangian<T> {
    name: String,
    density: JetExpr<T>,
    d_w: JetExpr<T>,
    d_wu: JetExpr<T>,
    d_wv: JetExpr<T>,
}

impl<T: Real> Lagrangian<T> {
    /// `-1/2 omega_u omega_v - e^omega`, whose Euler-Lagrange expression
    /// is the Liouville form `omega_uv - e^omega`.
    pub fn liouville() -> Self {
        Self {
            name: "L1".into(),
            density: Arc::new(|a: &JetArgs<T>| {
                let kinetic = a.wu.mul(&a.wv)?.scale(cst::<T>(-0.5))?;
                kinetic.sub(&a.w.exp()?)
            }),
            d_w: Arc::new(|a: &JetArgs<T>| Ok(a.w.exp()?.neg())),
            d_wu: Arc::new(|a: &JetArgs<T>| a.wv.scale(cst::<T>(-0.5))),
            d_wv: Arc::new(|a: &JetArgs<T>| a.wu.scale(cst::<T>(-0.5))),
        }
    }

    /// `-1/2 omega_u omega_v - e^omega - 1/2 e^{-2 omega}`, whose
    /// Euler-Lagrange expression is `omega_uv - e^omega + e^{-2 omega}`.
    pub fn titeica() -> Self {
        Self {
            name: "L2".into(),
            density: Arc::new(|a: &JetArgs<T>| {
                let kinetic = a.wu.mul(&a.wv)?.scale(cst::<T>(-0.5))?;
                let well = a.w.scale(cst::<T>(-2.0))?.exp()?.scale(cst::<T>(0.5))?;
                kinetic.sub(&a.w.exp()?)?.sub(&well)
            }),
            d_w: Arc::new(|a: &JetArgs<T>| {
                a.w.scale(cst::<T>(-2.0))?.exp()?.sub(&a.w.exp()?)
            }),
            d_wu: Arc::new(|a: &JetArgs<T>| a.wv.scale(cst::<T>(-0.5))),
            d_wv: Arc::new(|a: &JetArgs<T>| a.wu.scale(cst::<T>(-0.5))),
        }
    }

    /// User-supplied density and partials. The partials are cross-checked
    /// against finite differences of the density at a fixed battery of
    /// argument tuples before the value is returned.
    pub fn custom(
        name: impl Into<String>,
        density: impl Fn(&JetArgs<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
        d_w: impl Fn(&JetArgs<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
        d_wu: impl Fn(&JetArgs<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
        d_wv: impl Fn(&JetArgs<T>) -> Result<Jet2<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        let lag = Self {
            name: name.into(),
            density: Arc::new(density),
            d_w: Arc::new(d_w),
            d_wu: Arc::new(d_wu),
            d_wv: Arc::new(d_wv),
        };
        lag.verify_partials()?;
        Ok(lag)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Density value composed along a jet of the unknown.
    pub fn value(&self, w: &Jet2<T>) -> Result<T> {
        let args = JetArgs::from_solution_jet(w)?;
        Ok((self.density)(&args)?.value())
    }

    /// Compares each stored partial against a central finite difference
    /// of the density at a fixed battery of argument tuples.
    pub fn verify_partials(&self) -> Result<()> {
        const FD_TOL: f64 = 1e-6;
        const FD_STEP: f64 = 1e-4;
        // The unknown's slot stays away from zero so densities with a
        // pole there (such as the h-form density) difference cleanly.
        let samples: [[f64; 5]; 3] = [
            [0.4, -0.7, 0.8, 0.8, -0.5],
            [1.1, 0.2, -0.8, -0.3, 0.9],
            [-0.8, 0.5, 1.2, 1.2, 0.7],
        ];
        let slots: [(usize, &'static str, &JetExpr<T>); 3] = [
            (2, "dL/domega", &self.d_w),
            (3, "dL/domega_u", &self.d_wu),
            (4, "dL/domega_v", &self.d_wv),
        ];
        for s in samples {
            let vals: Vec<T> = s.iter().map(|&x| cst::<T>(x)).collect();
            for (slot, label, partial) in &slots {
                let density = self.density.clone();
                let base = vals.clone();
                let f = move |t: T| -> Result<T> {
                    let mut p = base.clone();
                    p[*slot] = t;
                    let args = JetArgs::constants(p[0], p[1], p[2], p[3], p[4])?;
                    Ok(density(&args)?.value())
                };
                let fd = fd_oracle_curve(&f, vals[*slot], 1, cst::<T>(FD_STEP))?;
                let args = JetArgs::constants(vals[0], vals[1], vals[2], vals[3], vals[4])?;
                let analytic = partial(&args)?.value();
                let defect = (fd.deriv(1)? - analytic).abs();
                if defect > cst::<T>(FD_TOL) {
                    return Err(Error::BadPartial {
                        partial: label,
                        defect: to_display(defect),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Euler-Lagrange expression
/// `dL/domega - D_u(dL/domega_u) - D_v(dL/domega_v)` at the jet.
pub fn euler_lagrange<T: Real>(lag: &Lagrangian<T>, w: &Jet2<T>) -> Result<T> {
    if w.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "euler_lagrange",
            needed: 2,
            got: w.order(),
        });
    }
    let args = JetArgs::from_solution_jet(w)?;
    let pw = (lag.d_w)(&args)?.value();
    let pu = (lag.d_wu)(&args)?;
    let pv = (lag.d_wv)(&args)?;
    Ok(pw - pu.entry(1, 0)? - pv.entry(0, 1)?)
}

/// Second-order differential expression described by the closed-form
/// partial derivatives with respect to the jet coordinates that enter the
/// Helmholtz conditions. Partials may depend on the first-order pack.
pub struct HelmholtzForm<T> {
    name: String,
    d_wu: JetExpr<T>,
    d_wv: JetExpr<T>,
    d_wuu: JetExpr<T>,
    d_wuv: JetExpr<T>,
    d_wvv: JetExpr<T>,
}

impl<T: Real> HelmholtzForm<T> {
    pub fn new(
        name: impl Into<String>,
        d_wu: JetExpr<T>,
        d_wv: JetExpr<T>,
        d_wuu: JetExpr<T>,
        d_wuv: JetExpr<T>,
        d_wvv: JetExpr<T>,
    ) -> Self {
        Self {
            name: name.into(),
            d_wu,
            d_wv,
            d_wuu,
            d_wuv,
            d_wvv,
        }
    }

    /// Partials of `omega_uv - H(omega)`: zero except for the constant
    /// unit coefficient of the mixed derivative. Shared by the whole
    /// equation family regardless of `H`.
    pub fn omega_family(kind: &PdeKind<T>) -> Self {
        let zero: JetExpr<T> = Arc::new(|a: &JetArgs<T>| a.w.scale(T::zero()));
        let one: JetExpr<T> = Arc::new(|a: &JetArgs<T>| a.w.scale(T::zero())?.shift(T::one()));
        Self::new(
            kind.name(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            one,
            zero,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// The two Helmholtz residuals of the form at a jet:
///
/// ```text
/// dD/domega_u - D_u(dD/domega_uu) - D_v(1/2 dD/domega_uv)
/// dD/domega_v - D_v(dD/domega_vv) - D_u(1/2 dD/domega_uv)
/// ```
///
/// Both vanish identically when the expression is the Euler-Lagrange
/// expression of some first-order Lagrangian.
pub fn helmholtz_residual_form<T: Real>(
    form: &HelmholtzForm<T>,
    w: &Jet2<T>,
) -> Result<[T; 2]> {
    let args = JetArgs::from_solution_jet(w)?;
    let half = cst::<T>(0.5);
    let duu = (form.d_wuu)(&args)?;
    let dvv = (form.d_wvv)(&args)?;
    let duv = (form.d_wuv)(&args)?;
    Ok([
        (form.d_wu)(&args)?.value() - duu.entry(1, 0)? - half * duv.entry(0, 1)?,
        (form.d_wv)(&args)?.value() - dvv.entry(0, 1)? - half * duv.entry(1, 0)?,
    ])
}

/// Helmholtz residuals of the scalar equation selected by `kind`, taken
/// in its `omega`-form. Identically zero across the family.
pub fn helmholtz_residual<T: Real>(kind: &PdeKind<T>, w: &Jet2<T>) -> Result<[T; 2]> {
    helmholtz_residual_form(&HelmholtzForm::omega_family(kind), w)
}

/// Left side of the variational-symmetry criterion
/// `pr X(L) + L Div xi` at the jet, using the first prolongation of the
/// field. Zero on all jets certifies that the field generates a
/// variational symmetry of the functional with density `lag`.
pub fn variational_defect<T: Real>(
    x: &VectorField3<T>,
    lag: &Lagrangian<T>,
    w: &Jet2<T>,
) -> Result<T> {
    if w.order() < 2 {
        return Err(Error::InsufficientOrder {
            op: "variational_defect",
            needed: 2,
            got: w.order(),
        });
    }
    let args = JetArgs::from_solution_jet(w)?;
    let zj = (x.coefficient(0))(&args.u, &args.v, &args.w)?;
    let ej = (x.coefficient(1))(&args.u, &args.v, &args.w)?;
    let pj = (x.coefficient(2))(&args.u, &args.v, &args.w)?;
    let div_xi = zj.entry(1, 0)? + ej.entry(0, 1)?;
    let q = pj.sub(&zj.mul(&args.wu)?)?.sub(&ej.mul(&args.wv)?)?;
    let alpha_u = q.entry(1, 0)? + zj.value() * w.entry(2, 0)? + ej.value() * w.entry(1, 1)?;
    let alpha_v = q.entry(0, 1)? + zj.value() * w.entry(1, 1)? + ej.value() * w.entry(0, 2)?;
    let (lu, lv) = explicit_coordinate_partials(&lag.density, &args)?;
    let lval = (lag.density)(&args)?.value();
    Ok(zj.value() * lu
        + ej.value() * lv
        + pj.value() * (lag.d_w)(&args)?.value()
        + alpha_u * (lag.d_wu)(&args)?.value()
        + alpha_v * (lag.d_wv)(&args)?.value()
        + lval * div_xi)
}

fn explicit_coordinate_partials<T: Real>(
    f: &JetExpr<T>,
    a: &JetArgs<T>,
) -> Result<(T, T)> {
    let (u0, v0) = a.u.base_point();
    let (w0, wu0, wv0) = (a.w.value(), a.wu.value(), a.wv.value());
    let mut pack_u = JetArgs::constants(u0, v0, w0, wu0, wv0)?;
    pack_u.u = Jet2::seed_u(u0, v0, 1)?;
    let mut pack_v = JetArgs::constants(u0, v0, w0, wu0, wv0)?;
    pack_v.v = Jet2::seed_v(u0, v0, 1)?;
    Ok((f(&pack_u)?.entry(1, 0)?, f(&pack_v)?.entry(0, 1)?))
}

/// Conservation law in characteristic form: flux pair `(P1, P2)` and
/// multiplier `Q` with `D_u P1 + D_v P2 = Q Delta` as a jet identity.
#[derive(Clone)]
pub struct ConservationLaw<T> {
    name: String,
    q: JetExpr<T>,
    p1: JetExpr<T>,
    p2: JetExpr<T>,
}

impl<T: Real> ConservationLaw<T> {
    pub fn new(name: impl Into<String>, q: JetExpr<T>, p1: JetExpr<T>, p2: JetExpr<T>) -> Self {
        Self {
            name: name.into(),
            q,
            p1,
            p2,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn q_expr(&self) -> JetExpr<T> {
        self.q.clone()
    }

    pub fn p1_expr(&self) -> JetExpr<T> {
        self.p1.clone()
    }

    pub fn p2_expr(&self) -> JetExpr<T> {
        self.p2.clone()
    }

    /// Multiplier value at the jet.
    pub fn q_at(&self, w: &Jet2<T>) -> Result<T> {
        let args = JetArgs::from_solution_jet(w)?;
        Ok((self.q)(&args)?.value())
    }

    /// Flux values at the jet.
    pub fn flux_at(&self, w: &Jet2<T>) -> Result<[T; 2]> {
        let args = JetArgs::from_solution_jet(w)?;
        Ok([(self.p1)(&args)?.value(), (self.p2)(&args)?.value()])
    }
}

/// `D_u P1 + D_v P2 - Q Delta` at the jet. The characteristic form is an
/// identity in the jet variables, so this defect must vanish on
/// arbitrary jets, not only on solutions.
pub fn conservation_divergence_defect<T: Real>(
    law: &ConservationLaw<T>,
    kind: &PdeKind<T>,
    w: &Jet2<T>,
) -> Result<T> {
    let args = JetArgs::from_solution_jet(w)?;
    let p1 = (law.p1)(&args)?;
    let p2 = (law.p2)(&args)?;
    let q = (law.q)(&args)?.value();
    let delta = residual_scalar(kind, w)?;
    Ok(p1.entry(1, 0)? + p2.entry(0, 1)? - q * delta)
}

const NOETHER_BATTERY: usize = 32;
const NOETHER_TOL: f64 = 1e-10;

/// Conservation law produced by Noether's construction from a
/// variational symmetry:
/// `P1 = -(Q dL/domega_u + L zeta)`, `P2 = -(Q dL/domega_v + L eta)`
/// with `Q` the characteristic of the field.
///
/// The field is first screened with [`variational_defect`] on a battery
/// of random jets; a field that fails the criterion is rejected, since
/// the construction is only valid for variational symmetries.
pub fn noether_law<T: Real>(
    x: &VectorField3<T>,
    lag: &Lagrangian<T>,
) -> Result<ConservationLaw<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1bd3);
    let mut max_defect = T::zero();
    for _ in 0..NOETHER_BATTERY {
        let u0 = cst::<T>(rng.gen_range(-1.0..1.0));
        let v0 = cst::<T>(rng.gen_range(-1.0..1.0));
        let mut entries = [T::zero(); 6];
        for e in &mut entries {
            *e = cst::<T>(rng.gen_range(-1.0..1.0));
        }
        let w = Jet2::from_entries(u0, v0, 2, &entries)?;
        let defect = variational_defect(x, lag, &w)?.abs();
        max_defect = max_defect.max(defect);
    }
    if max_defect > cst::<T>(NOETHER_TOL) {
        return Err(Error::NotVariational {
            name: x.name().to_string(),
            max_defect: to_display(max_defect),
        });
    }

    let name = format!("noether({}, {})", x.name(), lag.name());
    let characteristic = |x: &VectorField3<T>| -> JetExpr<T> {
        let x = x.clone();
        Arc::new(move |a: &JetArgs<T>| {
            let zj = (x.coefficient(0))(&a.u, &a.v, &a.w)?;
            let ej = (x.coefficient(1))(&a.u, &a.v, &a.w)?;
            let pj = (x.coefficient(2))(&a.u, &a.v, &a.w)?;
            pj.sub(&zj.mul(&a.wu)?)?.sub(&ej.mul(&a.wv)?)
        })
    };
    let q = characteristic(x);
    let flux = |slot: usize, momentum: JetExpr<T>| -> JetExpr<T> {
        let x = x.clone();
        let q = characteristic(&x);
        let density = lag.density.clone();
        Arc::new(move |a: &JetArgs<T>| {
            let xi = (x.coefficient(slot))(&a.u, &a.v, &a.w)?;
            let total = q(a)?.mul(&momentum(a)?)?.add(&density(a)?.mul(&xi)?)?;
            Ok(total.neg())
        })
    };
    let p1 = flux(0, lag.d_wu.clone());
    let p2 = flux(1, lag.d_wv.clone());
    Ok(ConservationLaw::new(name, q, p1, p2))
}

fn half_square<T: Real>(j: &Jet2<T>) -> Result<Jet2<T>> {
    j.mul(j)?.scale(cst::<T>(0.5))
}

fn exp_well<T: Real>(w: &Jet2<T>) -> Result<Jet2<T>> {
    // e^omega + 1/2 e^{-2 omega}, the potential part shared by the
    // Titeica fluxes.
    w.exp()?
        .add(&w.scale(cst::<T>(-2.0))?.exp()?.scale(cst::<T>(0.5))?)
}

/// The four conservation laws of the Liouville functional, keyed by the
/// negated generator that produces each through Noether's construction.
pub fn conservation_table_liouville<T: Real>() -> Vec<ConservationLaw<T>> {
    let half = cst::<T>(0.5);
    vec![
        ConservationLaw::new(
            "-W_1",
            Arc::new(move |a: &JetArgs<T>| a.u.mul(&a.wu)?.shift(T::one())),
            Arc::new(move |a: &JetArgs<T>| {
                a.wv.scale(half)?.sub(&a.u.mul(&a.w.exp()?)?)
            }),
            Arc::new(move |a: &JetArgs<T>| {
                a.wu.scale(half)?.mul(&a.u.mul(&a.wu)?.shift(T::one())?)
            }),
        ),
        ConservationLaw::new(
            "-W_2",
            Arc::new(move |a: &JetArgs<T>| a.v.mul(&a.wv)?.shift(T::one())),
            Arc::new(move |a: &JetArgs<T>| {
                a.wv.scale(half)?.mul(&a.v.mul(&a.wv)?.shift(T::one())?)
            }),
            Arc::new(move |a: &JetArgs<T>| {
                a.wu.scale(half)?.sub(&a.v.mul(&a.w.exp()?)?)
            }),
        ),
        ConservationLaw::new(
            "-W_3",
            Arc::new(|a: &JetArgs<T>| Ok(a.wu)),
            Arc::new(|a: &JetArgs<T>| Ok(a.w.exp()?.neg())),
            Arc::new(|a: &JetArgs<T>| half_square(&a.wu)),
        ),
        ConservationLaw::new(
            "-W_4",
            Arc::new(|a: &JetArgs<T>| Ok(a.wv)),
            Arc::new(|a: &JetArgs<T>| half_square(&a.wv)),
            Arc::new(|a: &JetArgs<T>| Ok(a.w.exp()?.neg())),
        ),
    ]
}

/// The three conservation laws of the Titeica functional, keyed like the
/// Liouville table.
pub fn conservation_table_titeica<T: Real>() -> Vec<ConservationLaw<T>> {
    vec![
        ConservationLaw::new(
            "-U_1",
            Arc::new(|a: &JetArgs<T>| a.u.mul(&a.wu)?.sub(&a.v.mul(&a.wv)?)),
            Arc::new(|a: &JetArgs<T>| {
                let total = a
                    .v
                    .mul(&half_square(&a.wv)?)?
                    .add(&a.u.mul(&exp_well(&a.w)?)?)?;
                Ok(total.neg())
            }),
            Arc::new(|a: &JetArgs<T>| {
                a.u.mul(&half_square(&a.wu)?)?
                    .add(&a.v.mul(&exp_well(&a.w)?)?)
            }),
        ),
        ConservationLaw::new(
            "-U_2",
            Arc::new(|a: &JetArgs<T>| Ok(a.wu)),
            Arc::new(|a: &JetArgs<T>| Ok(exp_well(&a.w)?.neg())),
            Arc::new(|a: &JetArgs<T>| half_square(&a.wu)),
        ),
        ConservationLaw::new(
            "-U_3",
            Arc::new(|a: &JetArgs<T>| Ok(a.wv)),
            Arc::new(|a: &JetArgs<T>| half_square(&a.wv)),
            Arc::new(|a: &JetArgs<T>| Ok(exp_well(&a.w)?.neg())),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::catalog::{
        liouville_symmetry_field, liouville_variational_symmetries, titeica_symmetries,
    };
    use crate::solutions::Curve;
    use proptest::prelude::*;

    fn jet2_from(seedling: u64, u0: f64, v0: f64, order: usize) -> Jet2<f64> {
        let mut s = seedling;
        let mut out = [0.0; 10];
        for x in &mut out {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *x = ((s >> 33) as f64 / (1u64 << 31) as f64) * 2.0 - 1.0;
        }
        let n = (order + 1) * (order + 2) / 2;
        Jet2::from_entries(u0, v0, order, &out[..n]).unwrap()
    }

    #[test]
    fn builtin_partials_match_finite_differences() {
        Lagrangian::<f64>::liouville().verify_partials().unwrap();
        Lagrangian::<f64>::titeica().verify_partials().unwrap();
    }

    #[test]
    fn wrong_custom_partial_is_rejected() {
        let result = Lagrangian::<f64>::custom(
            "bad",
            |a: &JetArgs<f64>| a.wu.mul(&a.wu),
            |a: &JetArgs<f64>| a.w.scale(0.0),
            |a: &JetArgs<f64>| Ok(a.wu),
            |a: &JetArgs<f64>| a.w.scale(0.0),
        );
        assert!(matches!(
            result,
            Err(Error::BadPartial {
                partial: "dL/domega_u",
                ..
            })
        ));
    }

    #[test]
    fn zero_density_has_zero_euler_expression() {
        let zero = Lagrangian::<f64>::custom(
            "zero",
            |a: &JetArgs<f64>| a.w.scale(0.0),
            |a: &JetArgs<f64>| a.w.scale(0.0),
            |a: &JetArgs<f64>| a.w.scale(0.0),
            |a: &JetArgs<f64>| a.w.scale(0.0),
        )
        .unwrap();
        let w = jet2_from(3, 0.2, -0.4, 2);
        assert_eq!(euler_lagrange(&zero, &w).unwrap(), 0.0);
    }

    #[test]
    fn order_one_jets_are_rejected() {
        let w = jet2_from(4, 0.0, 0.0, 1);
        assert!(matches!(
            euler_lagrange(&Lagrangian::<f64>::liouville(), &w),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    proptest! {
        #[test]
        fn euler_lagrange_recovers_the_equations(
            entries in proptest::array::uniform6(-1.5f64..1.5),
        ) {
            let w = Jet2::from_entries(0.3, -0.8, 2, &entries).unwrap();
            let e1 = euler_lagrange(&Lagrangian::liouville(), &w).unwrap();
            let r1 = residual_scalar(&PdeKind::LiouvilleOmega, &w).unwrap();
            prop_assert!((e1 - r1).abs() < 1e-12);
            let e2 = euler_lagrange(&Lagrangian::titeica(), &w).unwrap();
            let r2 = residual_scalar(&PdeKind::TiteicaOmega, &w).unwrap();
            prop_assert!((e2 - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn helmholtz_vanishes_across_the_equation_family() {
        let kinds = [
            PdeKind::LiouvilleOmega,
            PdeKind::TiteicaOmega,
            PdeKind::LiouvilleH,
            PdeKind::GeneralH(Curve::from_expr(
                f64::NEG_INFINITY,
                f64::INFINITY,
                |t| t.sinh(),
            )),
        ];
        for kind in &kinds {
            for seedling in [21u64, 22, 23] {
                let w = jet2_from(seedling, 0.5, 0.1, 3);
                let r = helmholtz_residual(kind, &w).unwrap();
                assert!(r[0].abs() < 1e-14 && r[1].abs() < 1e-14, "{}", kind.name());
            }
        }
    }

    #[test]
    fn derivative_product_fails_helmholtz() {
        // Delta = omega_u omega_v is not an Euler-Lagrange expression:
        // the residuals are (omega_v, omega_u).
        let zero: JetExpr<f64> = Arc::new(|a: &JetArgs<f64>| a.w.scale(0.0));
        let form = HelmholtzForm::new(
            "derivative-product",
            Arc::new(|a: &JetArgs<f64>| Ok(a.wv)),
            Arc::new(|a: &JetArgs<f64>| Ok(a.wu)),
            zero.clone(),
            zero.clone(),
            zero,
        );
        let w = jet2_from(31, -0.2, 0.9, 3);
        let r = helmholtz_residual_form(&form, &w).unwrap();
        assert!((r[0] - w.entry(0, 1).unwrap()).abs() < 1e-14);
        assert!((r[1] - w.entry(1, 0).unwrap()).abs() < 1e-14);
        assert!(r[0].abs() > 1e-3);
    }

    #[test]
    fn stated_generators_are_variational() {
        let l1 = Lagrangian::<f64>::liouville();
        let l2 = Lagrangian::<f64>::titeica();
        for seedling in [41u64, 42, 43, 44] {
            let w = jet2_from(seedling, 0.6, -0.3, 2);
            for field in liouville_variational_symmetries::<f64>() {
                let d = variational_defect(&field, &l1, &w).unwrap();
                assert!(d.abs() < 1e-12, "{} defect {d}", field.name());
            }
            for field in titeica_symmetries::<f64>() {
                let d = variational_defect(&field, &l2, &w).unwrap();
                assert!(d.abs() < 1e-12, "{} defect {d}", field.name());
            }
        }
    }

    #[test]
    fn quadratic_profile_field_is_not_variational() {
        // The symmetry f(u) du + g(v) dv - (f' + g') dw of the Liouville
        // equation has variational defect (f'' omega_v + g'' omega_u)/2,
        // so f = u^2 gives omega_v: a symmetry, but not variational.
        let f = Curve::polynomial(vec![0.0, 0.0, 1.0]);
        let g = Curve::constant(0.0);
        let field = liouville_symmetry_field(&f, &g);
        let l1 = Lagrangian::<f64>::liouville();
        let w = jet2_from(51, 0.4, 0.7, 2);
        let d = variational_defect(&field, &l1, &w).unwrap();
        assert!((d - w.entry(0, 1).unwrap()).abs() < 1e-12);
        assert!(d.abs() > 1e-3);
    }

    #[test]
    fn dependent_shift_has_exponential_defect() {
        let shift = VectorField3::new(
            "omega-shift",
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0),
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0),
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0)?.shift(1.0),
        );
        let l1 = Lagrangian::<f64>::liouville();
        let w = jet2_from(52, 0.1, 0.2, 2);
        let d = variational_defect(&shift, &l1, &w).unwrap();
        assert!((d + w.value().exp()).abs() < 1e-12);
    }

    #[test]
    fn pure_translation_defect_is_exactly_zero() {
        let [_, _, w3, _] = liouville_variational_symmetries::<f64>();
        let w = jet2_from(53, -0.9, 0.5, 2);
        let d = variational_defect(&w3, &Lagrangian::liouville(), &w).unwrap();
        assert!(d.abs() < 1e-15);
    }

    #[test]
    fn noether_reproduces_both_tables() {
        let l1 = Lagrangian::<f64>::liouville();
        let l2 = Lagrangian::<f64>::titeica();
        let liouville_rows = conservation_table_liouville::<f64>();
        let titeica_rows = conservation_table_titeica::<f64>();
        let wfields = liouville_variational_symmetries::<f64>();
        let ufields = titeica_symmetries::<f64>();

        let mut cases: Vec<(VectorField3<f64>, &Lagrangian<f64>, &ConservationLaw<f64>)> =
            Vec::new();
        for (field, row) in wfields.iter().zip(liouville_rows.iter()) {
            cases.push((field.negated(), &l1, row));
        }
        for (field, row) in ufields.iter().zip(titeica_rows.iter()) {
            cases.push((field.negated(), &l2, row));
        }
        for (field, lag, row) in &cases {
            let law = noether_law(field, lag).unwrap();
            for seedling in [61u64, 62, 63] {
                let w = jet2_from(seedling, 0.35, -0.55, 2);
                let dq = law.q_at(&w).unwrap() - row.q_at(&w).unwrap();
                assert!(dq.abs() < 1e-12, "{}: Q defect {dq}", row.name());
                let got = law.flux_at(&w).unwrap();
                let want = row.flux_at(&w).unwrap();
                assert!(
                    (got[0] - want[0]).abs() < 1e-12 && (got[1] - want[1]).abs() < 1e-12,
                    "{}: flux defect {:?} vs {:?}",
                    row.name(),
                    got,
                    want
                );
            }
        }
    }

    #[test]
    fn noether_rejects_a_non_variational_field() {
        let shift = VectorField3::new(
            "omega-shift",
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0),
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0),
            |u: &Jet2<f64>, _: &Jet2<f64>, _: &Jet2<f64>| u.scale(0.0)?.shift(1.0),
        );
        assert!(matches!(
            noether_law(&shift, &Lagrangian::<f64>::liouville()),
            Err(Error::NotVariational { .. })
        ));
    }

    #[test]
    fn tables_satisfy_the_characteristic_identity() {
        for seedling in 0..100u64 {
            let w = jet2_from(seedling.wrapping_add(700), 0.25, 0.65, 2);
            for row in conservation_table_liouville::<f64>() {
                let d =
                    conservation_divergence_defect(&row, &PdeKind::LiouvilleOmega, &w).unwrap();
                assert!(d.abs() < 1e-12, "{} defect {d}", row.name());
            }
            for row in conservation_table_titeica::<f64>() {
                let d =
                    conservation_divergence_defect(&row, &PdeKind::TiteicaOmega, &w).unwrap();
                assert!(d.abs() < 1e-12, "{} defect {d}", row.name());
            }
        }
    }

    #[test]
    fn perturbed_flux_breaks_the_identity() {
        let rows = conservation_table_liouville::<f64>();
        let base = &rows[2];
        let p1 = base.p1_expr();
        let perturbed = ConservationLaw::new(
            "perturbed",
            base.q_expr(),
            Arc::new(move |a: &JetArgs<f64>| p1(a)?.add(&a.wu.scale(0.01)?)),
            base.p2_expr(),
        );
        let w = jet2_from(81, 0.3, 0.4, 2);
        let d =
            conservation_divergence_defect(&perturbed, &PdeKind::LiouvilleOmega, &w).unwrap();
        assert!((d - 0.01 * w.entry(2, 0).unwrap()).abs() < 1e-14);
        assert!(d.abs() > 1e-4);
    }

    #[test]
    fn h_form_density_carries_the_cubic_integrant_factor() {
        // In terms of h = e^omega the density becomes
        // -h_u h_v / (2 h^2) - h, and its Euler-Lagrange expression is
        // (h h_uv - h_u h_v - h^3) / h^3, the equation in h divided by
        // the integrant factor.
        let lh = Lagrangian::<f64>::custom(
            "L1-h",
            |a: &JetArgs<f64>| {
                let sq = a.w.mul(&a.w)?;
                let frac = a.wu.mul(&a.wv)?.div(&sq)?.scale(-0.5)?;
                frac.sub(&a.w)
            },
            |a: &JetArgs<f64>| {
                let cube = a.w.mul(&a.w)?.mul(&a.w)?;
                a.wu.mul(&a.wv)?.div(&cube)?.shift(-1.0)
            },
            |a: &JetArgs<f64>| {
                let sq = a.w.mul(&a.w)?;
                a.wv.div(&sq)?.scale(-0.5)
            },
            |a: &JetArgs<f64>| {
                let sq = a.w.mul(&a.w)?;
                a.wu.div(&sq)?.scale(-0.5)
            },
        )
        .unwrap();
        for seedling in [91u64, 92, 93] {
            let omega = jet2_from(seedling, 0.15, -0.25, 2);
            let h = omega.exp().unwrap();
            let e = euler_lagrange(&lh, &h).unwrap();
            // residual_scalar of the h-form is (ln h)_uv - h, which is
            // the cubic polynomial form divided by h^2.
            let expected = residual_scalar(&PdeKind::LiouvilleH, &h).unwrap() / h.value();
            assert!((e - expected).abs() < 1e-12, "defect {}", e - expected);
        }
    }

    #[test]
    fn density_value_composes_through_the_jet() {
        let l1 = Lagrangian::<f64>::liouville();
        let w = jet2_from(95, 0.0, 0.0, 2);
        let expected = -0.5 * w.entry(1, 0).unwrap() * w.entry(0, 1).unwrap()
            - w.value().exp();
        assert!((l1.value(&w).unwrap() - expected).abs() < 1e-14);
    }
}

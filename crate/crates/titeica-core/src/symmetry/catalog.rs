//! Named symmetry generators of the structure equations.
//!
//! The collections gather, in evaluable form, the generators that act on
//! the ambient coordinates, on the linear-system unknown, on the
//! parametrization, and on the scalar PDEs, so that every claimed algebra
//! can be certified numerically.

use super::{Coefficient, VectorField3};
use crate::jets::Jet2;
use crate::linalg;
use crate::real::{cst, Real};
use crate::solutions::Curve;
use std::sync::Arc;

/// Linear vector field `x -> A x` on ambient 3-space, stored by its
/// matrix. The field acts as `sum_j A_ij x_j d/dx_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearField<T> {
    name: String,
    matrix: [[T; 3]; 3],
}

impl<T: Real> LinearField<T> {
    pub fn new(name: impl Into<String>, matrix: [[T; 3]; 3]) -> Self {
        Self {
            name: name.into(),
            matrix,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &[[T; 3]; 3] {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix[0][0] + self.matrix[1][1] + self.matrix[2][2]
    }

    /// Field value at a point.
    pub fn apply(&self, p: [T; 3]) -> [T; 3] {
        linalg::mat_vec(&self.matrix, p)
    }

    /// Flow map `exp(t A)` of the field, as a matrix.
    pub fn exponential(&self, t: T) -> [[T; 3]; 3] {
        let mut scaled = self.matrix;
        for row in &mut scaled {
            for x in row {
                *x *= t;
            }
        }
        linalg::expm3(&scaled)
    }
}

/// Derivative of `x y z` along the field at a point. Vanishing for all
/// points certifies that the flow preserves the product of coordinates,
/// which is the defining invariant of the ambient symmetry group action.
pub fn invariant_xyz_check<T: Real>(field: &LinearField<T>, p: [T; 3]) -> T {
    let velocity = field.apply(p);
    linalg::dot3(velocity, [p[1] * p[2], p[0] * p[2], p[0] * p[1]])
}

fn zero_coeff<T: Real>() -> Coefficient<T> {
    Arc::new(|uj: &Jet2<T>, _, _| uj.scale(T::zero()))
}

fn const_coeff<T: Real>(x: f64) -> Coefficient<T> {
    Arc::new(move |uj: &Jet2<T>, _, _| uj.scale(T::zero())?.shift(cst::<T>(x)))
}

fn pass_u<T: Real>() -> Coefficient<T> {
    Arc::new(|uj: &Jet2<T>, _, _| Ok(*uj))
}

fn pass_v<T: Real>() -> Coefficient<T> {
    Arc::new(|_, vj: &Jet2<T>, _| Ok(*vj))
}

fn neg_v<T: Real>() -> Coefficient<T> {
    Arc::new(|_, vj: &Jet2<T>, _| Ok(vj.neg()))
}

fn pass_w<T: Real>() -> Coefficient<T> {
    Arc::new(|_, _, wj: &Jet2<T>| Ok(*wj))
}

fn curve_of_u<T: Real>(c: Curve<T>) -> Coefficient<T> {
    Arc::new(move |uj: &Jet2<T>, _, _| uj.compose_jet1(&c.eval(uj.value(), uj.order())?))
}

fn curve_of_v<T: Real>(c: Curve<T>) -> Coefficient<T> {
    Arc::new(move |_, vj: &Jet2<T>, _| vj.compose_jet1(&c.eval(vj.value(), vj.order())?))
}

fn neg_sum_derivatives<T: Real>(f: Curve<T>, g: Curve<T>) -> Coefficient<T> {
    Arc::new(move |uj: &Jet2<T>, vj: &Jet2<T>, _| {
        let fd = f.eval(uj.value(), uj.order() + 1)?.differentiate()?;
        let gd = g.eval(vj.value(), vj.order() + 1)?.differentiate()?;
        let total = uj.compose_jet1(&fd)?.add(&vj.compose_jet1(&gd)?)?;
        Ok(total.neg())
    })
}

/// The eight traceless generators of the unimodular linear group acting
/// on ambient coordinates.
pub fn unimodular_generators<T: Real>() -> Vec<LinearField<T>> {
    let o = T::zero();
    let l = T::one();
    let entries: [(&str, [[T; 3]; 3]); 8] = [
        ("Y_1", [[l, o, o], [o, o, o], [o, o, -l]]),
        ("Y_2", [[o, o, o], [o, l, o], [o, o, -l]]),
        ("Y_3", [[o, l, o], [o, o, o], [o, o, o]]),
        ("Y_4", [[o, o, l], [o, o, o], [o, o, o]]),
        ("Y_5", [[o, o, o], [l, o, o], [o, o, o]]),
        ("Y_6", [[o, o, o], [o, o, l], [o, o, o]]),
        ("Y_7", [[o, o, o], [o, o, o], [l, o, o]]),
        ("Y_8", [[o, o, o], [o, o, o], [o, l, o]]),
    ];
    entries
        .into_iter()
        .map(|(name, m)| LinearField::new(name, m))
        .collect()
}

/// Scaling of the linear-system unknown, `theta d/dtheta`, written on
/// `(u, v, theta)`-space.
pub fn theta_scaling_field<T: Real>() -> VectorField3<T> {
    VectorField3::from_parts("theta-scaling", zero_coeff(), zero_coeff(), pass_w())
}

/// Independent reparametrization `zeta(u) d/du + eta(v) d/dv`.
pub fn reparametrization_field<T: Real>(zeta: &Curve<T>, eta: &Curve<T>) -> VectorField3<T> {
    VectorField3::from_parts(
        "reparametrization",
        curve_of_u(zeta.clone()),
        curve_of_v(eta.clone()),
        zero_coeff(),
    )
}

/// Generator `f(u) d/du + g(v) d/dv - (f'(u) + g'(v)) d/domega` of the
/// infinite-dimensional symmetry family of `omega_uv = e^omega`.
pub fn liouville_symmetry_field<T: Real>(f: &Curve<T>, g: &Curve<T>) -> VectorField3<T> {
    VectorField3::from_parts(
        "liouville-family",
        curve_of_u(f.clone()),
        curve_of_v(g.clone()),
        neg_sum_derivatives(f.clone(), g.clone()),
    )
}

/// The three-dimensional point symmetry algebra of
/// `omega_uv = e^omega - e^{-2 omega}`: the hyperbolic scaling
/// `u d/du - v d/dv` and the two translations.
pub fn titeica_symmetries<T: Real>() -> [VectorField3<T>; 3] {
    [
        VectorField3::from_parts("U_1", pass_u(), neg_v(), zero_coeff()),
        VectorField3::from_parts("U_2", const_coeff(1.0), zero_coeff(), zero_coeff()),
        VectorField3::from_parts("U_3", zero_coeff(), const_coeff(1.0), zero_coeff()),
    ]
}

/// Variational symmetry generators of the Liouville functional.
pub fn liouville_variational_symmetries<T: Real>() -> [VectorField3<T>; 4] {
    [
        VectorField3::from_parts("W_1", pass_u(), zero_coeff(), const_coeff(-1.0)),
        VectorField3::from_parts("W_2", zero_coeff(), pass_v(), const_coeff(-1.0)),
        VectorField3::from_parts("W_3", const_coeff(1.0), zero_coeff(), zero_coeff()),
        VectorField3::from_parts("W_4", zero_coeff(), const_coeff(1.0), zero_coeff()),
    ]
}

/// Variational symmetry generators of the Titeica functional. The fields
/// coincide with the point symmetries of the equation; the catalog keeps
/// them separate because the conserved quantities they produce differ.
pub fn titeica_variational_symmetries<T: Real>() -> [VectorField3<T>; 3] {
    titeica_symmetries()
}

/// Keys for the symmetry catalogs.
#[derive(Clone)]
pub enum CatalogName<T> {
    /// Traceless linear fields on ambient space.
    Unimodular,
    /// Scaling of the linear-system unknown.
    ThetaScaling,
    /// Reparametrization by the given coordinate profiles.
    Reparametrization(Curve<T>, Curve<T>),
    /// Liouville symmetry family member for the given profiles.
    LiouvilleFamily(Curve<T>, Curve<T>),
    /// Point symmetry algebra of the Titeica scalar equation.
    TiteicaAlgebra,
    /// Variational symmetries of the Liouville functional.
    LiouvilleVariational,
    /// Variational symmetries of the Titeica functional.
    TiteicaVariational,
}

/// A catalog entry: either a jet-evaluable field on `(u, v, omega)` or a
/// matrix field on ambient space.
#[derive(Clone)]
pub enum CatalogEntry<T> {
    Field(VectorField3<T>),
    Linear(LinearField<T>),
}

impl<T: Real> CatalogEntry<T> {
    pub fn name(&self) -> &str {
        match self {
            CatalogEntry::Field(f) => f.name(),
            CatalogEntry::Linear(l) => l.name(),
        }
    }
}

/// Returns the named generator collection.
pub fn catalog<T: Real>(name: CatalogName<T>) -> Vec<CatalogEntry<T>> {
    match name {
        CatalogName::Unimodular => unimodular_generators()
            .into_iter()
            .map(CatalogEntry::Linear)
            .collect(),
        CatalogName::ThetaScaling => vec![CatalogEntry::Field(theta_scaling_field())],
        CatalogName::Reparametrization(zeta, eta) => {
            vec![CatalogEntry::Field(reparametrization_field(&zeta, &eta))]
        }
        CatalogName::LiouvilleFamily(f, g) => {
            vec![CatalogEntry::Field(liouville_symmetry_field(&f, &g))]
        }
        CatalogName::TiteicaAlgebra => titeica_symmetries()
            .into_iter()
            .map(CatalogEntry::Field)
            .collect(),
        CatalogName::LiouvilleVariational => liouville_variational_symmetries()
            .into_iter()
            .map(CatalogEntry::Field)
            .collect(),
        CatalogName::TiteicaVariational => titeica_variational_symmetries()
            .into_iter()
            .map(CatalogEntry::Field)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_generators_are_traceless() {
        let gens = unimodular_generators::<f64>();
        assert_eq!(gens.len(), 8);
        for g in &gens {
            assert_eq!(g.trace(), 0.0, "{} has nonzero trace", g.name());
        }
        assert_eq!(
            *gens[0].matrix(),
            [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]]
        );
        assert_eq!(gens[4].apply([1.0, 2.0, 3.0]), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn diagonal_generators_preserve_the_coordinate_product() {
        let gens = unimodular_generators::<f64>();
        let points = [[1.0, 2.0, 3.0], [-0.5, 0.7, 1.9], [2.2, -1.3, 0.4]];
        for p in points {
            assert_eq!(invariant_xyz_check(&gens[0], p), 0.0);
            assert_eq!(invariant_xyz_check(&gens[1], p), 0.0);
        }
    }

    #[test]
    fn shear_generators_break_the_coordinate_product() {
        let gens = unimodular_generators::<f64>();
        let p = [1.0, 2.0, 3.0];
        // Y_3 moves x by y, so the derivative of x y z is y^2 z.
        assert_eq!(invariant_xyz_check(&gens[2], p), 12.0);
        assert!(invariant_xyz_check(&gens[5], p) != 0.0);
    }

    #[test]
    fn theta_scaling_coefficients() {
        let field = theta_scaling_field::<f64>();
        let c = field.coefficients_at(0.3, 0.7, 2.5).unwrap();
        assert_eq!(c, [0.0, 0.0, 2.5]);
    }

    #[test]
    fn reparametrization_coefficients_follow_the_profiles() {
        let zeta = Curve::polynomial(vec![0.0, 0.0, 1.0]);
        let eta = Curve::from_expr(f64::NEG_INFINITY, f64::INFINITY, |t| t.sin());
        let field = reparametrization_field(&zeta, &eta);
        let c = field.coefficients_at(2.0, 0.5, 1.0).unwrap();
        assert!((c[0] - 4.0).abs() < 1e-15);
        assert!((c[1] - 0.5f64.sin()).abs() < 1e-15);
        assert_eq!(c[2], 0.0);
    }

    #[test]
    fn liouville_family_third_coefficient_is_minus_the_derivative_sum() {
        let f = Curve::polynomial(vec![1.0, 2.0, 3.0]);
        let g = Curve::exponential();
        let field = liouville_symmetry_field(&f, &g);
        let c = field.coefficients_at(0.5, 0.25, 0.0).unwrap();
        assert!((c[2] + (2.0 + 3.0 * 2.0 * 0.5) + 0.25f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn catalog_returns_the_advertised_collections() {
        assert_eq!(catalog(CatalogName::<f64>::Unimodular).len(), 8);
        assert_eq!(catalog(CatalogName::<f64>::TiteicaAlgebra).len(), 3);
        assert_eq!(catalog(CatalogName::<f64>::LiouvilleVariational).len(), 4);
        assert_eq!(catalog(CatalogName::<f64>::TiteicaVariational).len(), 3);
        let single = catalog(CatalogName::<f64>::ThetaScaling);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].name(), "theta-scaling");
        let family = catalog(CatalogName::LiouvilleFamily(
            Curve::<f64>::identity(),
            Curve::identity(),
        ));
        assert!(matches!(family[0], CatalogEntry::Field(_)));
        for entry in catalog(CatalogName::<f64>::Unimodular) {
            assert!(matches!(entry, CatalogEntry::Linear(_)));
        }
    }
}

//! Scripted verification batteries with machine-readable results.
//!
//! Each suite bundles the identities certified by one part of the crate
//! into [`Check`] records: a named measurement, the documentation index
//! key it belongs to, the sample count, the worst observed defect and
//! the tolerance it was held to. Random batteries draw from a stream
//! fully determined by the configured seed, so a report is reproducible
//! bit for bit.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jets::Jet2;
use crate::pde::{
    conserved_combination, integrate_mu_ode, residual_integrability, residual_linear_system,
    residual_scalar, CoefficientFrame, PdeKind,
};
use crate::solutions::{
    liouville_general, mu_family, revolution_theta, separation_constant, titeica_constant,
    titeica_sinh, titeica_sinh_profile, Curve, MuCase, SolutionH,
};
use crate::surface::{
    canonical_constant_frame_ics, cross_marching_discrepancy, geometry_analytic, geometry_grid,
    hyperbolic_surface, integrate_component, integrate_surface, GridSpec,
};
use crate::symmetry::{
    adjoint, invariance_defect, invariant_xyz_check, liouville_symmetry_field,
    liouville_variational_symmetries, omega_determining_residual, scaling_invariants_check,
    structure_constants, titeica_symmetries, titeica_variational_symmetries, transform_solution,
    SolutionAction, VectorField3,
};
use crate::variational::{
    conservation_divergence_defect, conservation_table_liouville, conservation_table_titeica,
    euler_lagrange, helmholtz_residual, helmholtz_residual_form, noether_law, variational_defect,
    ConservationLaw, HelmholtzForm, JetArgs, JetExpr, Lagrangian,
};

/// Outcome of one verification battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Unique name of the measurement.
    pub name: String,
    /// Key into the documentation's index of verified identities.
    pub doc_ref: String,
    /// Number of sampled evaluations aggregated into `max_defect`.
    pub n_samples: usize,
    /// Worst absolute defect observed across the samples.
    pub max_defect: f64,
    /// Bound the defect was held to.
    pub tolerance: f64,
    /// Whether `max_defect` is finite and within tolerance.
    pub pass: bool,
}

impl Check {
    fn measured(
        name: impl Into<String>,
        doc_ref: &str,
        n_samples: usize,
        tolerance: f64,
        max_defect: f64,
    ) -> Self {
        Self {
            name: name.into(),
            doc_ref: doc_ref.into(),
            n_samples,
            max_defect,
            tolerance,
            pass: max_defect.is_finite() && max_defect <= tolerance,
        }
    }

    /// Negative-control check: the observed minimum must exceed the
    /// required separation. The defect records the shortfall, so zero
    /// means the control was detected with margin.
    fn detector(
        name: impl Into<String>,
        doc_ref: &str,
        n_samples: usize,
        required: f64,
        observed_min: f64,
    ) -> Self {
        let shortfall = if observed_min.is_finite() {
            (required - observed_min).max(0.0)
        } else {
            f64::INFINITY
        };
        Self::measured(name, doc_ref, n_samples, 0.0, shortfall)
    }

    /// Convergence check: the fine-resolution error must be at most the
    /// coarse-resolution error divided by `factor`.
    fn ratio(
        name: impl Into<String>,
        doc_ref: &str,
        coarse: f64,
        fine: f64,
        factor: f64,
    ) -> Self {
        Self::measured(name, doc_ref, 2, coarse / factor, fine)
    }
}

/// Knobs shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Seed of the random-jet and random-point streams.
    pub seed: u64,
    /// Group parameter used by the adjoint-table suite.
    pub adjoint_eps: f64,
    /// Base sample count per random battery.
    pub samples: usize,
    /// Multiplier applied to every tolerance.
    pub tol_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            adjoint_eps: 0.5,
            samples: 100,
            tol_scale: 1.0,
        }
    }
}

/// The selectable verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Liouville,
    Titeica,
    Symmetry,
    Adjoint,
    Variational,
    Conservation,
    Integrability,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "liouville",
        "titeica",
        "symmetry",
        "adjoint",
        "variational",
        "conservation",
        "integrability",
        "all",
    ];

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "liouville" => Some(Self::Liouville),
            "titeica" => Some(Self::Titeica),
            "symmetry" => Some(Self::Symmetry),
            "adjoint" => Some(Self::Adjoint),
            "variational" => Some(Self::Variational),
            "conservation" => Some(Self::Conservation),
            "integrability" => Some(Self::Integrability),
            "all" => Some(Self::All),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Liouville => "liouville",
            Self::Titeica => "titeica",
            Self::Symmetry => "symmetry",
            Self::Adjoint => "adjoint",
            Self::Variational => "variational",
            Self::Conservation => "conservation",
            Self::Integrability => "integrability",
            Self::All => "all",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Self::Liouville => 0x4c69,
            Self::Titeica => 0x5469,
            Self::Symmetry => 0x5379,
            Self::Adjoint => 0x4164,
            Self::Variational => 0x5661,
            Self::Conservation => 0x436f,
            Self::Integrability => 0x496e,
            Self::All => 0,
        }
    }
}

/// Every documentation index key a suite may emit. The set is static so
/// the documentation coverage test does not need to run the batteries.
pub fn doc_refs() -> &'static [&'static str] {
    &[
        "liouville-general-solution",
        "liouville-profile-family",
        "h-omega-correspondence",
        "polynomial-forms",
        "titeica-pde",
        "titeica-sinh-solution",
        "revolution-separation",
        "revolution-surface-components",
        "liouville-symmetry-family",
        "titeica-symmetry-algebra",
        "finite-group-actions",
        "determining-equations",
        "scaling-invariant-arguments",
        "unimodular-maps",
        "symmetry-algebra-structure",
        "adjoint-table",
        "lagrangian-densities",
        "helmholtz-conditions",
        "variational-symmetry-criterion",
        "conservation-tables",
        "integrant-factor",
        "linear-system-compatibility",
        "linear-system",
        "goursat-marching",
        "centroaffine-invariant",
        "asymptotic-lines",
        "profile-ode",
    ]
}

/// Runs a suite with the given configuration and returns its checks in a
/// fixed order. [`Suite::All`] concatenates the seven concrete suites,
/// each seeded independently so its checks match a standalone run.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Liouville => liouville_suite(cfg),
        Suite::Titeica => titeica_suite(cfg),
        Suite::Symmetry => symmetry_suite(cfg),
        Suite::Adjoint => adjoint_suite(cfg),
        Suite::Variational => variational_suite(cfg),
        Suite::Conservation => conservation_suite(cfg),
        Suite::Integrability => integrability_suite(cfg),
        Suite::All => {
            let mut checks = Vec::new();
            for s in [
                Suite::Liouville,
                Suite::Titeica,
                Suite::Symmetry,
                Suite::Adjoint,
                Suite::Variational,
                Suite::Conservation,
                Suite::Integrability,
            ] {
                checks.extend(run_suite(s, cfg)?);
            }
            Ok(checks)
        }
    }
}

fn suite_rng(suite: Suite, cfg: &VerifyConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite.salt() << 32))
}

fn random_jet2(rng: &mut ChaCha8Rng, order: usize) -> Result<Jet2<f64>> {
    let n = if order >= 3 { 10 } else { 6 };
    let mut entries = [0.0f64; 10];
    for e in entries.iter_mut().take(n) {
        *e = rng.gen_range(-1.0..1.0);
    }
    let u0 = rng.gen_range(-1.0..1.0);
    let v0 = rng.gen_range(-1.0..1.0);
    Jet2::from_entries(u0, v0, order, &entries[..n])
}

fn random_positive_jet2(rng: &mut ChaCha8Rng) -> Result<Jet2<f64>> {
    let mut entries = [0.0f64; 6];
    entries[0] = rng.gen_range(0.5..2.0);
    for e in entries.iter_mut().skip(1) {
        *e = rng.gen_range(-1.0..1.0);
    }
    let u0 = rng.gen_range(-1.0..1.0);
    let v0 = rng.gen_range(-1.0..1.0);
    Jet2::from_entries(u0, v0, 2, &entries)
}

fn random_polynomial(rng: &mut ChaCha8Rng, degree: usize) -> Curve<f64> {
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Curve::polynomial(coeffs)
}

fn signed_away_from_zero(rng: &mut ChaCha8Rng) -> f64 {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    sign * rng.gen_range(0.5..1.5)
}

fn liouville_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Liouville, cfg);
    let tol = |t: f64| t * cfg.tol_scale;
    let n = cfg.samples.max(1);
    let mut checks = Vec::new();

    let presets: [(&str, SolutionH<f64>, (f64, f64)); 3] = [
        (
            "general-solution-identity",
            liouville_general(&Curve::identity(), &Curve::identity()),
            (0.25, 1.75),
        ),
        (
            "general-solution-exponential",
            liouville_general(&Curve::exponential(), &Curve::exponential()),
            (-1.0, 1.0),
        ),
        (
            "general-solution-cubic",
            liouville_general(
                &Curve::polynomial(vec![0.0, 1.0, 0.0, 1.0]),
                &Curve::affine(1.5, 0.25),
            ),
            (0.1, 1.1),
        ),
    ];
    for (name, sol, range) in &presets {
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(range.0..range.1);
            let v = rng.gen_range(range.0..range.1);
            let j = sol.eval(u, v, 2)?;
            max = max.max(residual_scalar(&PdeKind::LiouvilleH, &j)?.abs());
        }
        checks.push(Check::measured(
            *name,
            "liouville-general-solution",
            n,
            tol(1e-10),
            max,
        ));
    }

    {
        let cases: [(MuCase, f64, f64, (f64, f64)); 3] = [
            (MuCase::KZero, 1.0, 1.0, (0.1, 1.0)),
            (MuCase::KNegative, 1.0, 0.0, (-0.7, 0.7)),
            (MuCase::KPositive, 1.0, 0.5, (0.2, 1.0)),
        ];
        let mut max = 0.0f64;
        let mut count = 0;
        for (case, l, c, range) in cases {
            let mu = mu_family(case, l, c)?;
            let sol = SolutionH::from_linear_profile("profile", &mu, 1.0, 1.0);
            for _ in 0..n {
                let u = rng.gen_range(range.0..range.1);
                let v = rng.gen_range(range.0..range.1);
                let j = sol.eval(u, v, 2)?;
                max = max.max(residual_scalar(&PdeKind::LiouvilleH, &j)?.abs());
                count += 1;
            }
        }
        checks.push(Check::measured(
            "profile-family-residuals",
            "liouville-profile-family",
            count,
            tol(1e-10),
            max,
        ));
    }

    {
        let mut max = 0.0f64;
        for _ in 0..n {
            let hj = random_positive_jet2(&mut rng)?;
            let rh = residual_scalar(&PdeKind::LiouvilleH, &hj)?;
            let rw = residual_scalar(&PdeKind::LiouvilleOmega, &hj.ln()?)?;
            max = max.max((rh - rw).abs());
        }
        checks.push(Check::measured(
            "h-omega-agreement-liouville",
            "h-omega-correspondence",
            n,
            tol(1e-12),
            max,
        ));
    }

    {
        let mut max = 0.0f64;
        for _ in 0..n {
            let hj = random_positive_jet2(&mut rng)?;
            let h = hj.value();
            let poly = h * hj.entry(1, 1)? - hj.entry(1, 0)? * hj.entry(0, 1)? - h * h * h;
            let res = residual_scalar(&PdeKind::LiouvilleH, &hj)?;
            max = max.max((poly - h * h * res).abs());
        }
        checks.push(Check::measured(
            "polynomial-form-liouville",
            "polynomial-forms",
            n,
            tol(1e-12),
            max,
        ));
    }

    Ok(checks)
}

fn titeica_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Titeica, cfg);
    let tol = |t: f64| t * cfg.tol_scale;
    let n = cfg.samples.max(1);
    let mut checks = Vec::new();

    {
        let sol = titeica_constant::<f64>();
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(-2.0..2.0);
            let v = rng.gen_range(-2.0..2.0);
            let j = sol.eval(u, v, 2)?;
            max = max.max(residual_scalar(&PdeKind::TiteicaH, &j)?.abs());
        }
        checks.push(Check::measured(
            "unit-solution-residual",
            "titeica-pde",
            n,
            tol(1e-12),
            max,
        ));
    }

    {
        let sol = titeica_sinh(0.3f64);
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(0.05..1.0);
            let v = rng.gen_range(0.05..1.0);
            let j = sol.eval(u, v, 2)?;
            max = max.max(residual_scalar(&PdeKind::TiteicaH, &j)?.abs());
        }
        checks.push(Check::measured(
            "sinh-solution-residual",
            "titeica-sinh-solution",
            n,
            tol(1e-10),
            max,
        ));
    }

    {
        let mut max = 0.0f64;
        for _ in 0..n {
            let hj = random_positive_jet2(&mut rng)?;
            let rh = residual_scalar(&PdeKind::TiteicaH, &hj)?;
            let rw = residual_scalar(&PdeKind::TiteicaOmega, &hj.ln()?)?;
            max = max.max((rh - rw).abs());
        }
        checks.push(Check::measured(
            "h-omega-agreement-titeica",
            "h-omega-correspondence",
            n,
            tol(1e-12),
            max,
        ));
    }

    {
        let mut max = 0.0f64;
        for _ in 0..n {
            let hj = random_positive_jet2(&mut rng)?;
            let h = hj.value();
            let poly = h * hj.entry(1, 1)? - hj.entry(1, 0)? * hj.entry(0, 1)? - h * h * h + 1.0;
            let res = residual_scalar(&PdeKind::TiteicaH, &hj)?;
            max = max.max((poly - h * h * res).abs());
        }
        checks.push(Check::measured(
            "polynomial-form-titeica",
            "polynomial-forms",
            n,
            tol(1e-12),
            max,
        ));
    }

    {
        let mu = titeica_sinh_profile(0.3f64);
        let reference = separation_constant(&mu, 1.0)?;
        let mut max = 0.0f64;
        for _ in 0..n {
            let alpha = rng.gen_range(0.4..2.5);
            max = max.max((separation_constant(&mu, alpha)? - reference).abs());
        }
        let drift = max.max((reference - 0.75).abs());
        checks.push(Check::measured(
            "profile-separation-constant",
            "revolution-separation",
            n,
            tol(1e-10),
            drift,
        ));
    }

    {
        let k = (3.0f64).sqrt() / 2.0;
        let theta = revolution_theta(k, &Curve::constant(1.0), [1.0, 0.7, 0.5], 0.0);
        let frame = CoefficientFrame::non_ruled(&titeica_constant());
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(0.1..0.9);
            let v = rng.gen_range(0.1..0.9);
            let j = theta.eval(u, v, 2)?;
            let r = residual_linear_system(&frame, &j)?;
            max = r.iter().fold(max, |m, x| m.max(x.abs()));
        }
        checks.push(Check::measured(
            "revolution-components-constant",
            "revolution-surface-components",
            n,
            tol(1e-10),
            max,
        ));
    }

    {
        let mu = titeica_sinh_profile(0.3f64);
        let k = separation_constant(&mu, 1.0)?.sqrt();
        let theta = revolution_theta(k, &mu, [0.8, -0.5, 0.0], 1.0);
        let frame = CoefficientFrame::non_ruled(&titeica_sinh(0.3));
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(0.3..1.2);
            let v = rng.gen_range(0.3..1.2);
            let j = theta.eval(u, v, 2)?;
            let r = residual_linear_system(&frame, &j)?;
            max = r.iter().fold(max, |m, x| m.max(x.abs()));
        }
        checks.push(Check::measured(
            "revolution-components-sinh",
            "revolution-surface-components",
            n,
            tol(1e-8),
            max,
        ));
    }

    Ok(checks)
}

fn symmetry_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Symmetry, cfg);
    let tol = |t: f64| t * cfg.tol_scale;
    let n = cfg.samples.max(1);
    let mut checks = Vec::new();

    {
        let sol = liouville_general(&Curve::<f64>::exponential(), &Curve::exponential());
        let omega = sol.omega_fn();
        let pairs = 20;
        let points = (n / pairs).max(3);
        let mut max = 0.0f64;
        for _ in 0..pairs {
            let f = random_polynomial(&mut rng, 3);
            let g = random_polynomial(&mut rng, 3);
            let field = liouville_symmetry_field(&f, &g);
            for _ in 0..points {
                let u = rng.gen_range(-1.0..1.0);
                let v = rng.gen_range(-1.0..1.0);
                let w = omega.eval(u, v, 3)?;
                max = max.max(invariance_defect(&field, &PdeKind::LiouvilleOmega, &w)?.abs());
            }
        }
        checks.push(Check::measured(
            "liouville-family-invariance",
            "liouville-symmetry-family",
            pairs * points,
            tol(1e-10),
            max,
        ));
    }

    {
        let solutions = [titeica_constant::<f64>(), titeica_sinh(0.3)];
        let fields = titeica_symmetries::<f64>();
        let points = (n / 6).max(3);
        let mut max = 0.0f64;
        for sol in &solutions {
            let omega = sol.omega_fn();
            for field in &fields {
                for _ in 0..points {
                    let u = rng.gen_range(0.1..1.0);
                    let v = rng.gen_range(0.1..1.0);
                    let w = omega.eval(u, v, 3)?;
                    max = max.max(invariance_defect(field, &PdeKind::TiteicaOmega, &w)?.abs());
                }
            }
        }
        checks.push(Check::measured(
            "titeica-algebra-invariance",
            "titeica-symmetry-algebra",
            6 * points,
            tol(1e-10),
            max,
        ));
    }

    {
        let liu = liouville_general(&Curve::<f64>::identity(), &Curve::identity());
        let subjects = [
            (liu.omega_fn(), PdeKind::LiouvilleOmega),
            (titeica_sinh(0.3f64).omega_fn(), PdeKind::TiteicaOmega),
        ];
        let points = (n / 8).max(2);
        let mut max = 0.0f64;
        let mut count = 0;
        for (omega, kind) in &subjects {
            for eps in [0.1, -0.1, 1.0, -1.0] {
                for action in [
                    SolutionAction::Scale(eps),
                    SolutionAction::ShiftU(eps),
                    SolutionAction::ShiftV(eps),
                ] {
                    let moved = transform_solution(action, omega);
                    for _ in 0..points {
                        let u = rng.gen_range(0.8..1.5);
                        let v = rng.gen_range(0.8..1.5);
                        let j = moved.eval(u, v, 2)?;
                        max = max.max(residual_scalar(kind, &j)?.abs());
                        count += 1;
                    }
                }
            }
        }
        checks.push(Check::measured(
            "finite-actions-preserve-solutions",
            "finite-group-actions",
            count,
            tol(1e-10),
            max,
        ));
    }

    {
        let rhs = PdeKind::<f64>::LiouvilleOmega.omega_rhs();
        let mut max = 0.0f64;
        let pairs = 5;
        let points = (n / pairs).max(3);
        for _ in 0..pairs {
            let f = random_polynomial(&mut rng, 3);
            let g = random_polynomial(&mut rng, 3);
            let field = liouville_symmetry_field(&f, &g);
            for _ in 0..points {
                let u = rng.gen_range(-1.0..1.0);
                let v = rng.gen_range(-1.0..1.0);
                let w = rng.gen_range(-1.0..1.0);
                let r = omega_determining_residual(&field, &rhs, u, v, w)?;
                max = r.iter().fold(max, |m, x| m.max(x.abs()));
            }
        }
        checks.push(Check::measured(
            "determining-system-liouville",
            "determining-equations",
            pairs * points,
            tol(1e-12),
            max,
        ));
    }

    {
        let rhs = PdeKind::<f64>::TiteicaOmega.omega_rhs();
        let fields = titeica_symmetries::<f64>();
        let points = (n / 3).max(3);
        let mut max = 0.0f64;
        for field in &fields {
            for _ in 0..points {
                let u = rng.gen_range(-1.0..1.0);
                let v = rng.gen_range(-1.0..1.0);
                let w = rng.gen_range(-1.0..1.0);
                let r = omega_determining_residual(field, &rhs, u, v, w)?;
                max = r.iter().fold(max, |m, x| m.max(x.abs()));
            }
        }
        checks.push(Check::measured(
            "determining-system-titeica",
            "determining-equations",
            3 * points,
            tol(1e-12),
            max,
        ));
    }

    {
        let mut max = 0.0f64;
        for _ in 0..n {
            let w = random_jet2(&mut rng, 2)?;
            let r = scaling_invariants_check(&w)?;
            max = r.iter().fold(max, |m, x| m.max(x.abs()));
        }
        checks.push(Check::measured(
            "scaling-invariant-arguments",
            "scaling-invariant-arguments",
            n,
            tol(1e-12),
            max,
        ));
    }

    {
        let gens = crate::symmetry::unimodular_generators::<f64>();
        let points = (n / 2).max(5);
        let mut max = 0.0f64;
        for field in &gens {
            max = max.max(field.trace().abs());
        }
        for field in &gens[..2] {
            for _ in 0..points {
                let p = [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ];
                max = max.max(invariant_xyz_check(field, p).abs());
            }
        }
        checks.push(Check::measured(
            "diagonal-generator-tangency",
            "unimodular-maps",
            2 * points,
            tol(1e-12),
            max,
        ));

        let mut min = f64::INFINITY;
        for _ in 0..points {
            let p = [
                signed_away_from_zero(&mut rng),
                signed_away_from_zero(&mut rng),
                signed_away_from_zero(&mut rng),
            ];
            min = min.min(invariant_xyz_check(&gens[2], p).abs());
        }
        checks.push(Check::detector(
            "shear-moves-coordinate-product",
            "unimodular-maps",
            points,
            1e-3,
            min,
        ));
    }

    {
        let basis = titeica_symmetries::<f64>();
        let c = structure_constants(&basis)?;
        let mut expected = [[[0.0f64; 3]; 3]; 3];
        expected[0][1][1] = -1.0;
        expected[1][0][1] = 1.0;
        expected[0][2][2] = 1.0;
        expected[2][0][2] = -1.0;
        let mut max = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    max = max.max((c[i][j][l] - expected[i][j][l]).abs());
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut jacobi = 0.0;
                        for m in 0..3 {
                            jacobi += c[j][k][m] * c[i][m][l]
                                + c[k][i][m] * c[j][m][l]
                                + c[i][j][m] * c[k][m][l];
                        }
                        max = max.max(jacobi.abs());
                    }
                }
            }
        }
        checks.push(Check::measured(
            "bracket-structure-constants",
            "symmetry-algebra-structure",
            1,
            tol(1e-12),
            max,
        ));
    }

    Ok(checks)
}

fn adjoint_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let tol = |t: f64| t * cfg.tol_scale;
    let eps = cfg.adjoint_eps;
    let basis = titeica_symmetries::<f64>();
    let table: [[[f64; 3]; 3]; 3] = [
        [
            [1.0, 0.0, 0.0],
            [0.0, eps.exp(), 0.0],
            [0.0, 0.0, (-eps).exp()],
        ],
        [[1.0, -eps, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[1.0, 0.0, eps], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    ];
    let mut checks = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let got = adjoint(&basis, i, eps, j)?;
            let mut max = 0.0f64;
            for l in 0..3 {
                max = max.max((got[l] - table[i][j][l]).abs());
            }
            checks.push(Check::measured(
                format!("adjoint-u{}-on-u{}", i + 1, j + 1),
                "adjoint-table",
                1,
                tol(1e-12),
                max,
            ));
        }
    }
    Ok(checks)
}

fn variational_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Variational, cfg);
    let tol = |t: f64| t * cfg.tol_scale;
    let n = cfg.samples.max(1);
    let mut checks = Vec::new();

    for (name, lag, kind) in [
        (
            "euler-lagrange-liouville",
            Lagrangian::<f64>::liouville(),
            PdeKind::LiouvilleOmega,
        ),
        (
            "euler-lagrange-titeica",
            Lagrangian::titeica(),
            PdeKind::TiteicaOmega,
        ),
    ] {
        let mut max = 0.0f64;
        for _ in 0..n {
            let w = random_jet2(&mut rng, 2)?;
            let e = euler_lagrange(&lag, &w)?;
            max = max.max((e - residual_scalar(&kind, &w)?).abs());
        }
        checks.push(Check::measured(name, "lagrangian-densities", n, tol(1e-12), max));
    }

    {
        let custom = PdeKind::GeneralH(Curve::polynomial(vec![0.4, -1.1, 0.0, 0.3]));
        let kinds = [PdeKind::LiouvilleOmega, PdeKind::TiteicaOmega, custom];
        let points = (n / 3).max(3);
        let mut max = 0.0f64;
        for kind in &kinds {
            for _ in 0..points {
                let w = random_jet2(&mut rng, 2)?;
                let r = helmholtz_residual(kind, &w)?;
                max = max.max(r[0].abs()).max(r[1].abs());
            }
        }
        checks.push(Check::measured(
            "helmholtz-family-vanishes",
            "helmholtz-conditions",
            3 * points,
            tol(1e-12),
            max,
        ));
    }

    {
        let zero: JetExpr<f64> = Arc::new(|a: &JetArgs<f64>| a.w.scale(0.0));
        let form = HelmholtzForm::new(
            "derivative-product",
            Arc::new(|a: &JetArgs<f64>| Ok(a.wv)),
            Arc::new(|a: &JetArgs<f64>| Ok(a.wu)),
            zero.clone(),
            zero.clone(),
            zero,
        );
        let mut min = f64::INFINITY;
        for _ in 0..n {
            let mut w = random_jet2(&mut rng, 2)?;
            let bumped = [
                w.value(),
                signed_away_from_zero(&mut rng),
                w.entry(0, 1)?,
                w.entry(2, 0)?,
                w.entry(1, 1)?,
                w.entry(0, 2)?,
            ];
            let (u0, v0) = w.base_point();
            w = Jet2::from_entries(u0, v0, 2, &bumped)?;
            let r = helmholtz_residual_form(&form, &w)?;
            min = min.min(r[0].abs().max(r[1].abs()));
        }
        checks.push(Check::detector(
            "helmholtz-detects-nonvariational",
            "helmholtz-conditions",
            n,
            1e-3,
            min,
        ));
    }

    {
        let l1 = Lagrangian::<f64>::liouville();
        let l2 = Lagrangian::titeica();
        let mut max = 0.0f64;
        let points = (n / 7).max(3);
        let mut count = 0;
        for field in &liouville_variational_symmetries::<f64>() {
            for _ in 0..points {
                let w = random_jet2(&mut rng, 2)?;
                max = max.max(variational_defect(field, &l1, &w)?.abs());
                count += 1;
            }
        }
        for field in &titeica_variational_symmetries::<f64>() {
            for _ in 0..points {
                let w = random_jet2(&mut rng, 2)?;
                max = max.max(variational_defect(field, &l2, &w)?.abs());
                count += 1;
            }
        }
        checks.push(Check::measured(
            "variational-symmetry-defects",
            "variational-symmetry-criterion",
            count,
            tol(1e-12),
            max,
        ));
    }

    {
        let quad = Curve::polynomial(vec![0.0, 0.0, 1.0]);
        let field = liouville_symmetry_field(&quad, &Curve::constant(0.0));
        let l1 = Lagrangian::<f64>::liouville();
        let mut min = f64::INFINITY;
        for _ in 0..n {
            let mut w = random_jet2(&mut rng, 2)?;
            let bumped = [
                w.value(),
                w.entry(1, 0)?,
                signed_away_from_zero(&mut rng),
                w.entry(2, 0)?,
                w.entry(1, 1)?,
                w.entry(0, 2)?,
            ];
            let (u0, v0) = w.base_point();
            w = Jet2::from_entries(u0, v0, 2, &bumped)?;
            min = min.min(variational_defect(&field, &l1, &w)?.abs());
        }
        checks.push(Check::detector(
            "non-variational-control",
            "variational-symmetry-criterion",
            n,
            1e-3,
            min,
        ));
    }

    {
        let lh = Lagrangian::custom(
            "cubic-factor-density",
            |a: &JetArgs<f64>| {
                let cross = a.wu.mul(&a.wv)?;
                cross.div(&a.w.powi(2)?)?.scale(-0.5)?.sub(&a.w)
            },
            |a: &JetArgs<f64>| {
                let cross = a.wu.mul(&a.wv)?;
                cross.div(&a.w.powi(3)?)?.shift(-1.0)
            },
            |a: &JetArgs<f64>| a.wv.div(&a.w.powi(2)?)?.scale(-0.5),
            |a: &JetArgs<f64>| a.wu.div(&a.w.powi(2)?)?.scale(-0.5),
        )?;
        let mut max = 0.0f64;
        for _ in 0..n {
            let hj = random_positive_jet2(&mut rng)?;
            let e = euler_lagrange(&lh, &hj)?;
            let res = residual_scalar(&PdeKind::LiouvilleH, &hj)?;
            max = max.max((e * hj.value() - res).abs());
        }
        checks.push(Check::measured(
            "cubic-integrant-factor",
            "integrant-factor",
            n,
            tol(1e-12),
            max,
        ));
    }

    Ok(checks)
}

fn conservation_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Conservation, cfg);
    let mut checks = Vec::with_capacity(7);

    let l1 = Lagrangian::<f64>::liouville();
    let l2 = Lagrangian::titeica();
    let rows_l = conservation_table_liouville::<f64>();
    let gens_l = liouville_variational_symmetries::<f64>();
    for (idx, row) in rows_l.iter().enumerate() {
        checks.push(conservation_row_check(
            &mut rng,
            row,
            &gens_l[idx].negated(),
            &l1,
            &PdeKind::LiouvilleOmega,
            format!("noether-law-w{}", idx + 1),
            cfg,
        )?);
    }
    let rows_t = conservation_table_titeica::<f64>();
    let gens_t = titeica_variational_symmetries::<f64>();
    for (idx, row) in rows_t.iter().enumerate() {
        checks.push(conservation_row_check(
            &mut rng,
            row,
            &gens_t[idx].negated(),
            &l2,
            &PdeKind::TiteicaOmega,
            format!("noether-law-u{}", idx + 1),
            cfg,
        )?);
    }
    Ok(checks)
}

fn conservation_row_check(
    rng: &mut ChaCha8Rng,
    row: &ConservationLaw<f64>,
    generator: &VectorField3<f64>,
    lag: &Lagrangian<f64>,
    kind: &PdeKind<f64>,
    name: String,
    cfg: &VerifyConfig,
) -> Result<Check> {
    let regenerated = noether_law(generator, lag)?;
    let n = cfg.samples.max(1);
    let mut max = 0.0f64;
    for _ in 0..n {
        let w = random_jet2(rng, 2)?;
        max = max.max(conservation_divergence_defect(row, kind, &w)?.abs());
        max = max.max((row.q_at(&w)? - regenerated.q_at(&w)?).abs());
        let a = row.flux_at(&w)?;
        let b = regenerated.flux_at(&w)?;
        max = max.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
    }
    Ok(Check::measured(
        name,
        "conservation-tables",
        n,
        1e-12 * cfg.tol_scale,
        max,
    ))
}

fn integrability_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = suite_rng(Suite::Integrability, cfg);
    let tol = |t: f64| t * cfg.tol_scale;
    let n = cfg.samples.max(1);
    let mut checks = Vec::new();

    {
        let frame = CoefficientFrame::non_ruled(&titeica_sinh(0.3f64));
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(0.1..1.0);
            let v = rng.gen_range(0.1..1.0);
            let r = residual_integrability(&frame, u, v)?;
            max = r.iter().fold(max, |m, x| m.max(x.abs()));
        }
        checks.push(Check::measured(
            "nonruled-frame-compatibility",
            "linear-system-compatibility",
            n,
            tol(1e-10),
            max,
        ));
    }

    {
        let h = liouville_general(&Curve::<f64>::identity(), &Curve::identity());
        let frame = CoefficientFrame::ruled(&h, &Curve::affine(0.5, 1.0));
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = rng.gen_range(0.3..1.3);
            let v = rng.gen_range(0.3..1.3);
            let r = residual_integrability(&frame, u, v)?;
            max = r.iter().fold(max, |m, x| m.max(x.abs()));
        }
        checks.push(Check::measured(
            "ruled-frame-compatibility",
            "linear-system-compatibility",
            n,
            tol(1e-10),
            max,
        ));
    }

    {
        let frame = CoefficientFrame::non_ruled(&titeica_constant::<f64>());
        let components = crate::surface::canonical_constant_frame_surface::<f64>();
        let mut max = 0.0f64;
        let mut reference = None;
        for _ in 0..n {
            let u = rng.gen_range(0.0..1.0);
            let v = rng.gen_range(0.0..1.0);
            let jets = [
                components[0].eval(u, v, 2)?,
                components[1].eval(u, v, 2)?,
                components[2].eval(u, v, 2)?,
            ];
            for j in &jets {
                let r = residual_linear_system(&frame, j)?;
                max = r.iter().fold(max, |m, x| m.max(x.abs()));
            }
            let det = crate::pde::surface_conditions(&jets[0], &jets[1], &jets[2])?;
            let base = *reference.get_or_insert(det);
            max = max.max((det - base).abs());
        }
        checks.push(Check::measured(
            "linear-system-closed-form",
            "linear-system",
            n,
            tol(1e-10),
            max,
        ));
    }

    let spec = GridSpec::new(0.0f64, 0.0, 0.02, 0.02, 51, 51)?;
    let frame = CoefficientFrame::non_ruled(&titeica_constant::<f64>());
    let grid = integrate_surface(&frame, &canonical_constant_frame_ics(), &spec)?;
    let report = geometry_grid(&grid)?;

    checks.push(Check::measured(
        "surface-invariant-spread",
        "centroaffine-invariant",
        spec.nodes(),
        tol(1e-4),
        report.invariant_spread(),
    ));

    checks.push(Check::measured(
        "asymptotic-parametrization",
        "asymptotic-lines",
        spec.nodes(),
        tol(1e-6),
        report.max_abs_lf().max(report.max_abs_nf()),
    ));

    {
        let small = GridSpec::new(0.0f64, 0.0, 0.04, 0.04, 26, 26)?;
        let grid = integrate_surface(&frame, &canonical_constant_frame_ics(), &small)?;
        let base = geometry_grid(&grid)?;
        let gens = crate::symmetry::unimodular_generators::<f64>();
        let mut max = 0.0f64;
        for (gen, t) in [(&gens[0], 0.3), (&gens[4], -0.6), (&gens[7], 0.8)] {
            let moved = geometry_grid(&grid.apply_linear(&gen.exponential(t)))?;
            for (a, b) in base.nodes().iter().zip(moved.nodes().iter()) {
                max = max.max((a.invariant - b.invariant).abs());
            }
        }
        checks.push(Check::measured(
            "unimodular-node-invariance",
            "unimodular-maps",
            3 * small.nodes(),
            tol(1e-10),
            max,
        ));
    }

    {
        let small = GridSpec::new(-0.5f64, -0.5, 0.1, 0.1, 11, 11)?;
        let report = geometry_analytic(&hyperbolic_surface(1.0), &small)?;
        checks.push(Check::measured(
            "hyperbolic-analytic-invariant",
            "centroaffine-invariant",
            small.nodes(),
            tol(1e-10),
            report.invariant_spread(),
        ));
    }

    {
        let h = liouville_general(&Curve::<f64>::exponential(), &Curve::exponential());
        let ruled = CoefficientFrame::ruled(&h, &Curve::constant(1.0));
        let coarse = GridSpec::new(0.2f64, 0.2, 0.04, 0.04, 11, 11)?;
        let fine = GridSpec::new(0.2f64, 0.2, 0.02, 0.02, 21, 21)?;
        let ic = [1.0, 0.5, -0.3];
        let dc = cross_marching_discrepancy(&ruled, ic, &coarse)?;
        let df = cross_marching_discrepancy(&ruled, ic, &fine)?;
        checks.push(Check::ratio(
            "marching-order-convergence",
            "goursat-marching",
            dc,
            df,
            12.0 / cfg.tol_scale,
        ));
    }

    {
        let mut errors = [0.0f64; 2];
        for (slot, &(step, count)) in [(0.04, 26), (0.02, 51)].iter().enumerate() {
            let grid = GridSpec::new(0.0f64, 0.0, step, step, count, count)?;
            let field = integrate_component(&frame, [1.0, 1.0, 1.0], &grid)?;
            let mut err = 0.0f64;
            for j in 0..count {
                for i in 0..count {
                    let exact = (grid.u_at(i) + grid.v_at(j)).exp();
                    err = err.max((field.value(i, j) - exact).abs());
                }
            }
            errors[slot] = err;
        }
        checks.push(Check::ratio(
            "closed-form-convergence",
            "goursat-marching",
            errors[0],
            errors[1],
            12.0 / cfg.tol_scale,
        ));
    }

    {
        let profile = titeica_sinh_profile(0.3f64);
        let j0 = profile.eval(1.0, 1)?;
        let (mu0, dmu0) = (j0.value(), j0.deriv(1)?);
        let curve = integrate_mu_ode(1.0, mu0, dmu0, 1.0, 3.0, 2e-3)?;
        let c0 = conserved_combination(mu0, dmu0);
        let mut max = 0.0f64;
        let samples = 50;
        for s in 0..=samples {
            let t = 1.0 + 2.0 * s as f64 / samples as f64;
            let jt = curve.eval(t, 1)?;
            max = max.max((jt.value() - profile.value(t)?).abs());
            max = max.max((conserved_combination(jt.value(), jt.deriv(1)?) - c0).abs());
        }
        checks.push(Check::measured(
            "profile-ode-crosscheck",
            "profile-ode",
            samples + 1,
            tol(1e-8),
            max,
        ));

        let coarse = integrate_mu_ode(1.0, mu0, dmu0, 1.0, 3.0, 4e-3)?;
        let exact = profile.value(3.0)?;
        let ec = (coarse.value(3.0)? - exact).abs();
        let ef = (curve.value(3.0)? - exact).abs();
        checks.push(Check::ratio(
            "profile-ode-convergence",
            "profile-ode",
            ec,
            ef,
            12.0 / cfg.tol_scale,
        ));
    }

    Ok(checks)
}

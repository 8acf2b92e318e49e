//! Implementations of the `verify`, `surface`, and `eval` subcommands.

use anyhow::Result;
use serde_json::{json, Value};
use titeica_core::pde::{residual_scalar, CoefficientFrame, PdeKind};
use titeica_core::solutions::{liouville_general, titeica_constant, titeica_sinh, Curve, SolutionH};
use titeica_core::surface::{
    asymptotic_defect, canonical_constant_frame_ics, export_csv, export_obj, geometry_grid,
    hyperbolic_surface, integrate_surface, sample_surface, GridSpec, SurfaceGrid,
};
use titeica_core::verify::{run_suite, Check, Suite, VerifyConfig};

use crate::config::{config_error, load, FileConfig};
use crate::report::Report;
use crate::{EvalArgs, ExportFormat, SurfaceArgs, VerifyArgs};

const SEED_ENV: &str = "TITEICA_SEED";

/// Highest precedence wins: flag, then config file, then the
/// environment variable, then zero.
fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag.or(file) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| config_error(format!("cannot parse {SEED_ENV}=`{text}` as a seed"))),
        Err(_) => Ok(0),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Report> {
    let file = load(args.config.as_deref())?;
    let suite = Suite::parse(&args.suite).ok_or_else(|| {
        config_error(format!(
            "unknown suite `{}`; expected one of: {}",
            args.suite,
            Suite::NAMES.join(", ")
        ))
    })?;
    let defaults = VerifyConfig::default();
    let cfg = VerifyConfig {
        seed: resolve_seed(args.seed, file.seed)?,
        adjoint_eps: args.eps.or(file.eps).unwrap_or(defaults.adjoint_eps),
        samples: args.samples.or(file.samples).unwrap_or(defaults.samples),
        tol_scale: args.tol_scale.or(file.tol_scale).unwrap_or(defaults.tol_scale),
    };
    let checks = run_suite(suite, &cfg)?;
    let echo = json!({
        "suite": suite.name(),
        "seed": cfg.seed,
        "samples": cfg.samples,
        "eps": cfg.adjoint_eps,
        "tol_scale": cfg.tol_scale,
    });
    Ok(Report::new("verify", echo, checks, Value::Null))
}

struct PresetGrid {
    u0: f64,
    v0: f64,
    du: f64,
    dv: f64,
    nu: usize,
    nv: usize,
}

impl PresetGrid {
    fn resolve(&self, args: &SurfaceArgs, file: &FileConfig) -> Result<GridSpec<f64>> {
        GridSpec::new(
            args.u0.or(file.u0).unwrap_or(self.u0),
            args.v0.or(file.v0).unwrap_or(self.v0),
            args.du.or(file.du).unwrap_or(self.du),
            args.dv.or(file.dv).unwrap_or(self.dv),
            args.nu.or(file.nu).unwrap_or(self.nu),
            args.nv.or(file.nv).unwrap_or(self.nv),
        )
        .map_err(|e| config_error(format!("invalid grid: {e}")))
    }
}

const MARCHED_GRID: PresetGrid = PresetGrid {
    u0: 0.0,
    v0: 0.0,
    du: 0.02,
    dv: 0.02,
    nu: 51,
    nv: 51,
};

const IDENTITY_ICS: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn cmd_surface(args: &SurfaceArgs) -> Result<Report> {
    let file = load(args.config.as_deref())?;
    match (&args.export, &args.out) {
        (Some(_), None) => return Err(config_error("`--export` requires `--out`")),
        (None, Some(_)) => return Err(config_error("`--out` requires `--export`")),
        _ => {}
    }

    let mut c = None;
    let mut c1 = None;
    let (grid, spread_tol, marched): (SurfaceGrid<f64>, f64, bool) = match args.frame.as_str() {
        "nonruled-const" => {
            let spec = MARCHED_GRID.resolve(args, &file)?;
            let frame = CoefficientFrame::non_ruled(&titeica_constant());
            let ics = canonical_constant_frame_ics();
            (integrate_surface(&frame, &ics, &spec)?, 1.0e-4, true)
        }
        "nonruled-sinh" => {
            let base = PresetGrid {
                u0: 0.2,
                v0: 0.2,
                ..MARCHED_GRID
            };
            let spec = base.resolve(args, &file)?;
            let shift = args.c1.or(file.c1).unwrap_or(0.3);
            c1 = Some(shift);
            let frame = CoefficientFrame::non_ruled(&titeica_sinh(shift));
            (integrate_surface(&frame, &IDENTITY_ICS, &spec)?, 1.0e-4, true)
        }
        "ruled-liouville" => {
            let base = PresetGrid {
                u0: 0.5,
                v0: 0.5,
                ..MARCHED_GRID
            };
            let spec = base.resolve(args, &file)?;
            let hsol = liouville_general(&Curve::identity(), &Curve::identity());
            let frame = CoefficientFrame::ruled(&hsol, &Curve::constant(1.0));
            (integrate_surface(&frame, &IDENTITY_ICS, &spec)?, 1.0e-4, true)
        }
        "hyperbolic" => {
            let base = PresetGrid {
                u0: -0.5,
                v0: -0.5,
                du: 0.1,
                dv: 0.1,
                nu: 11,
                nv: 11,
            };
            let spec = base.resolve(args, &file)?;
            let scale = args.c.or(file.c).unwrap_or(1.0);
            c = Some(scale);
            let components = hyperbolic_surface(scale);
            (sample_surface(&components, &spec)?, 1.0e-10, false)
        }
        other => {
            return Err(config_error(format!(
                "unknown surface preset `{other}`; expected one of: \
                 nonruled-const, nonruled-sinh, ruled-liouville, hyperbolic"
            )))
        }
    };

    let geometry = geometry_grid(&grid)?;
    let spread = geometry.invariant_spread();
    let (max_lf, max_nf) = asymptotic_defect(&geometry);

    let mut checks = vec![Check {
        name: "invariant-relative-spread".to_string(),
        doc_ref: "centroaffine-invariant".to_string(),
        n_samples: grid.spec().nodes(),
        max_defect: spread,
        tolerance: spread_tol,
        pass: spread.is_finite() && spread <= spread_tol,
    }];
    if marched {
        let defect = max_lf.max(max_nf);
        checks.push(Check {
            name: "asymptotic-defect".to_string(),
            doc_ref: "asymptotic-lines".to_string(),
            n_samples: grid.spec().nodes(),
            max_defect: defect,
            tolerance: 1.0e-6,
            pass: defect.is_finite() && defect <= 1.0e-6,
        });
    }

    let mut mesh = Value::Null;
    if let (Some(format), Some(path)) = (&args.export, &args.out) {
        match format {
            ExportFormat::Obj => export_obj(&grid, path)?,
            ExportFormat::Csv => export_csv(&grid, &geometry, path)?,
        }
        mesh = json!(path.display().to_string());
    }

    let spec = grid.spec();
    let echo = json!({
        "preset": args.frame,
        "u0": spec.u_at(0),
        "v0": spec.v_at(0),
        "du": spec.du(),
        "dv": spec.dv(),
        "nu": spec.nu(),
        "nv": spec.nv(),
        "c": c,
        "c1": c1,
        "export": args.export.map(|f| match f {
            ExportFormat::Obj => "obj",
            ExportFormat::Csv => "csv",
        }),
    });
    let data = json!({
        "nodes": spec.nodes(),
        "mean_invariant": geometry.mean_invariant(),
        "invariant_spread": spread,
        "max_abs_lf": max_lf,
        "max_abs_nf": max_nf,
        "mesh": mesh,
    });
    Ok(Report::new("surface", echo, checks, data))
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Report> {
    if args.preset.is_some() && args.solution != "liouville-general" {
        return Err(config_error("`--preset` only applies to liouville-general"));
    }
    let mut c1 = None;
    let mut preset = None;
    let (sol, h_kind, omega_kind, doc_ref): (SolutionH<f64>, _, _, _) = match args.solution.as_str()
    {
        "titeica-const" => (
            titeica_constant(),
            PdeKind::TiteicaH,
            PdeKind::TiteicaOmega,
            "titeica-pde",
        ),
        "titeica-sinh" => {
            let shift = args.c1.unwrap_or(0.3);
            c1 = Some(shift);
            (
                titeica_sinh(shift),
                PdeKind::TiteicaH,
                PdeKind::TiteicaOmega,
                "titeica-sinh-solution",
            )
        }
        "liouville-general" => {
            let name = args.preset.as_deref().unwrap_or("identity");
            preset = Some(name.to_string());
            let sol = match name {
                "identity" => liouville_general(&Curve::identity(), &Curve::identity()),
                "exponential" => liouville_general(&Curve::exponential(), &Curve::exponential()),
                "cubic" => liouville_general(
                    &Curve::polynomial(vec![0.0, 1.0, 0.0, 1.0]),
                    &Curve::affine(1.5, 0.25),
                ),
                other => {
                    return Err(config_error(format!(
                        "unknown preset `{other}`; expected one of: identity, exponential, cubic"
                    )))
                }
            };
            (
                sol,
                PdeKind::LiouvilleH,
                PdeKind::LiouvilleOmega,
                "liouville-general-solution",
            )
        }
        other => {
            return Err(config_error(format!(
                "unknown solution `{other}`; expected one of: \
                 titeica-const, titeica-sinh, liouville-general"
            )))
        }
    };

    let jet_h = sol.eval(args.u, args.v, 2)?;
    let jet_omega = sol.omega(args.u, args.v, 2)?;
    let residual_h = residual_scalar(&h_kind, &jet_h)?.abs();
    let residual_omega = residual_scalar(&omega_kind, &jet_omega)?.abs();

    let check = |name: &str, defect: f64| Check {
        name: name.to_string(),
        doc_ref: doc_ref.to_string(),
        n_samples: 1,
        max_defect: defect,
        tolerance: 1.0e-10,
        pass: defect.is_finite() && defect <= 1.0e-10,
    };
    let checks = vec![
        check("h-equation-residual", residual_h),
        check("omega-equation-residual", residual_omega),
    ];

    let echo = json!({
        "solution": args.solution,
        "preset": preset,
        "c1": c1,
        "u": args.u,
        "v": args.v,
    });
    let data = json!({
        "h": jet_h.value(),
        "omega": jet_omega.value(),
        "h_u": jet_h.entry(1, 0)?,
        "h_v": jet_h.entry(0, 1)?,
        "h_uv": jet_h.entry(1, 1)?,
        "residual_h": residual_h,
        "residual_omega": residual_omega,
    });
    Ok(Report::new("eval", echo, checks, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_resolution_prefers_the_flag() {
        assert_eq!(resolve_seed(Some(3), Some(9)).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some(9)).unwrap(), 9);
    }

    fn eval_args(solution: &str, u: f64, v: f64) -> EvalArgs {
        EvalArgs {
            solution: solution.to_string(),
            preset: None,
            c1: None,
            u,
            v,
            pretty: false,
        }
    }

    #[test]
    fn constant_solution_has_unit_h_and_zero_residual() {
        let report = cmd_eval(&eval_args("titeica-const", 0.0, 0.0)).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.data["h"], 1.0);
        assert_eq!(report.data["residual_h"], 0.0);
    }

    #[test]
    fn identity_preset_has_half_h_at_one_one() {
        let mut args = eval_args("liouville-general", 1.0, 1.0);
        args.preset = Some("identity".to_string());
        let report = cmd_eval(&args).unwrap();
        assert!(report.all_passed());
        assert!((report.data["h"].as_f64().unwrap() - 0.5).abs() < 1.0e-15);
    }

    #[test]
    fn unknown_names_are_config_errors() {
        use crate::config::ConfigError;
        let err = cmd_eval(&eval_args("nope", 0.0, 0.0)).unwrap_err();
        assert!(err.downcast_ref::<ConfigError>().is_some());

        let mut args = eval_args("titeica-const", 0.0, 0.0);
        args.preset = Some("identity".to_string());
        let err = cmd_eval(&args).unwrap_err();
        assert!(err.downcast_ref::<ConfigError>().is_some());
    }

    #[test]
    fn domain_violations_are_runtime_errors() {
        use crate::config::ConfigError;
        let err = cmd_eval(&eval_args("liouville-general", 1.0, -1.0)).unwrap_err();
        assert!(err.downcast_ref::<ConfigError>().is_none());
    }
}

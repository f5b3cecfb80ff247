//! One function per subcommand. Each returns the `parameters` and `results`
//! blocks of the report plus the overall verdict.

use std::path::Path;

use nccover::calculus::{homotopy_transport, winding_number, BorelRootMap, UnitaryMatrix};
use nccover::circle::{build_partition, CircleCover};
use nccover::fiber::{combine_frames, verify_fiber_quadruple, SampledFiberQuadruple};
use nccover::torus::{clock_shift, cyclic_cover_torus, theta_integral, TorusExtension};
use nccover::verifier::{full_report, verify_frame, CoverStructure};
use nccover::{Error, SampledFunction, VerificationReport};
use serde_json::{json, Value};

use crate::formats::{self, complex, pair, CoveringFile, Covering, FunctionsFile, LoopFile, PathFile};
use crate::CliError;

pub struct Outcome {
    pub parameters: Value,
    pub results: Value,
    pub pass: bool,
}

fn report_value(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn failure(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

pub struct CircleArgs<'a> {
    pub n: usize,
    pub grid: usize,
    pub degree: usize,
    pub tol_grid: f64,
    pub tol_coeff: f64,
    pub emit: Option<(&'a Path, bool)>,
}

/// The monomial frame in degree `≤ degree` and the partition frame on a `grid`-point base.
pub fn circle_cover(a: &CircleArgs) -> Result<Outcome, CliError> {
    if a.n == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    let monomial = CircleCover::new(a.n, a.degree)?.monomial_covering()?;
    let partition = build_partition(a.n, a.grid)?;
    let partition_cov = partition.covering();
    let mono_report = full_report(&monomial, a.tol_coeff, a.tol_coeff);
    let part_report = full_report(&partition_cov, a.tol_grid, a.tol_grid);
    if let Some((path, use_partition)) = a.emit {
        let file = if use_partition {
            CoveringFile::from_sampled(&partition_cov)
        } else {
            CoveringFile::from_circle(&monomial)
        };
        crate::render::write_atomic(path, &serde_json::to_string(&file).expect("covering serializes"))?;
    }
    Ok(Outcome {
        parameters: json!({
            "n": a.n, "grid": a.grid, "degree": a.degree,
            "tol_grid": a.tol_grid, "tol_coeff": a.tol_coeff,
        }),
        results: json!({
            "monomial": report_value(&mono_report),
            "partition": report_value(&part_report),
            "partition_index": partition.index,
            "degenerate": partition.is_degenerate(),
        }),
        pass: mono_report.passed() && part_report.passed(),
    })
}

pub struct TorusArgs {
    pub p: i64,
    pub q: usize,
    pub n: usize,
    pub twist: usize,
    pub grid: usize,
    pub tol: f64,
}

/// `W = μ(U)` for the clock/shift pair, the phase law and the integral cross-check.
pub fn torus_cover(a: &TorusArgs) -> Result<Outcome, CliError> {
    let pair_uv = clock_shift(a.p, a.q)?;
    let mu = if a.twist == 0 { BorelRootMap::standard(a.n)? } else { BorelRootMap::constant_twist(a.n, a.twist)? };
    let r = cyclic_cover_torus(&pair_uv, a.n, &mu)?;
    let integral = theta_integral(&mu, r.theta, a.grid)?;
    let mismatch = (integral - r.twist_mean).norm();
    let extension = TorusExtension::new(&r.w, a.n)?.covering()?;
    let ext_report = full_report(&extension, a.tol, a.tol);
    let pass = r.integrality_residual <= a.tol
        && r.power_residual <= 1e-9
        && r.phase_law_residual <= a.tol
        && mismatch <= 4.0 / a.grid as f64
        && ext_report.passed();
    let profile: Vec<Value> =
        r.twist_profile.iter().map(|c| json!({ "lambda": pair(c.lambda), "count": c.count })).collect();
    Ok(Outcome {
        parameters: json!({ "p": a.p, "q": a.q, "n": a.n, "twist": a.twist, "grid": a.grid, "tol": a.tol }),
        results: json!({
            "theta": r.theta,
            "theta_tilde": r.theta_tilde,
            "k": r.k,
            "lambda": pair(r.lambda),
            "integrality_residual": r.integrality_residual,
            "commutation_residual": r.residual,
            "power_residual": r.power_residual,
            "phase_law_residual": r.phase_law_residual,
            "scalar_twist": r.scalar_twist,
            "twist_profile": profile,
            "twist_mean": pair(r.twist_mean),
            "theta_integral": pair(integral),
            "integral_mismatch": mismatch,
            "integral_bound": 4.0 / a.grid as f64,
            "w": formats::matrix_rows(r.w.matrix()),
            "extension": report_value(&ext_report),
        }),
        pass,
    })
}

pub struct FiberArgs<'a> {
    pub cover: &'a Path,
    pub space: &'a Path,
    pub partition: Option<&'a Path>,
    pub tol: f64,
}

/// Pulls a sampled cover back along `Y → X` and audits the resulting quadruple.
pub fn fiber_product(a: &FiberArgs) -> Result<Outcome, CliError> {
    let (cover_x, base) = match formats::read_json::<CoveringFile>(a.cover)?.into_covering()? {
        Covering::Sampled { data, base } => (data, base),
        Covering::Circle(_) => return Err(CliError::Invalid("fiber-product needs a sampled covering".into())),
    };
    let y: nccover::sampled::SampledSpace = formats::read_json(a.space)?;
    let parameters = json!({
        "cover": a.cover.display().to_string(),
        "space": a.space.display().to_string(),
        "partition": a.partition.map(|p| p.display().to_string()),
        "tol": a.tol,
    });
    let y_proj = match y.projection_indices(&base) {
        Ok(p) => p,
        Err(e @ Error::NonSurjective(_)) => return Ok(Outcome { parameters, results: failure(&e), pass: false }),
        Err(e) => return Err(e.into()),
    };
    let partition = match a.partition {
        Some(p) => formats::read_json::<FunctionsFile>(p)?
            .functions
            .iter()
            .map(|f| SampledFunction::new(f.iter().map(complex).collect()))
            .collect(),
        None => vec![SampledFunction::from_real(vec![1.0; y.len()])],
    };
    let quad = match SampledFiberQuadruple::new(cover_x, y_proj, partition) {
        Ok(q) => q,
        Err(e @ (Error::NonFreeCover(_) | Error::NonSurjective(_))) => {
            return Ok(Outcome { parameters, results: failure(&e), pass: false })
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_fiber_quadruple(&quad, a.tol);
    let (combined, combined_pass) = match combine_frames(&quad, &quad.cover_x, &quad.partition) {
        Ok(c) => {
            let fr = verify_frame(&c, a.tol);
            let v = json!({
                "frame_size": c.frame.len(),
                "frame_weight": c.frame_weight,
                "trivial_g_residual": fr.condition.trivial_g_residual,
                "max_nontrivial_g_residual": fr.condition.max_nontrivial_g_residual,
                "pass": fr.pass,
            });
            (v, fr.pass)
        }
        Err(e) => (failure(&e), false),
    };
    let pass = report.passed() && combined_pass;
    Ok(Outcome {
        parameters,
        results: json!({
            "points": quad.product.pairs.len(),
            "base_points": quad.cover_b.base().points,
            "quadruple": serde_json::to_value(&report).expect("report serializes"),
            "combined_frame": combined,
        }),
        pass,
    })
}

/// Audits a covering file; tolerances default by carrier kind.
pub fn verify(input: &Path, tol_a: Option<f64>, tol_b: Option<f64>) -> Result<Outcome, CliError> {
    let file: CoveringFile = formats::read_json(input)?;
    let (kind, report) = match file.into_covering()? {
        Covering::Circle(cov) => {
            let t = nccover::verifier::COEFFICIENT_TOLERANCE;
            ("circle", full_report(&cov, tol_a.unwrap_or(t), tol_b.unwrap_or(t)))
        }
        Covering::Sampled { data, .. } => {
            let t = nccover::verifier::GRID_TOLERANCE;
            ("sampled", full_report(&data, tol_a.unwrap_or(t), tol_b.unwrap_or(t)))
        }
    };
    Ok(Outcome {
        parameters: json!({ "input": input.display().to_string(), "kind": kind }),
        pass: report.passed(),
        results: json!({ "report": report_value(&report) }),
    })
}

pub fn winding(input: &Path, tol: f64) -> Result<Outcome, CliError> {
    let file: LoopFile = formats::read_json(input)?;
    let samples: Vec<_> = file.samples.iter().map(complex).collect();
    let parameters = json!({ "winding": input.display().to_string(), "tol": tol, "points": samples.len() });
    match winding_number(&samples) {
        Ok(w) => Ok(Outcome {
            parameters,
            results: json!({ "winding": w.winding, "total_turns": w.total_turns, "defect": w.defect }),
            pass: w.defect <= tol,
        }),
        Err(e @ Error::Undersampled { .. }) => Ok(Outcome { parameters, results: failure(&e), pass: false }),
        Err(e) => Err(e.into()),
    }
}

pub fn transport(input: &Path, tol: f64) -> Result<Outcome, CliError> {
    let file: PathFile = formats::read_json(input)?;
    let path = file
        .path
        .iter()
        .map(|m| Ok(UnitaryMatrix::new(formats::matrix(m)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mu = BorelRootMap::standard(file.n)?;
    let parameters = json!({ "transport": input.display().to_string(), "n": file.n, "tol": tol });
    match homotopy_transport(&path, &mu) {
        Ok(t) => Ok(Outcome {
            parameters,
            results: json!({
                "steps": t.steps,
                "max_step_distance": t.max_step_distance,
                "residual": t.residual,
                "w": formats::matrix_rows(&t.w),
            }),
            pass: t.residual <= tol,
        }),
        Err(e @ Error::StepInadmissible { .. }) => Ok(Outcome { parameters, results: failure(&e), pass: false }),
        Err(e) => Err(e.into()),
    }
}

/// Reads back a report written by any command; the verdict decides the exit code.
pub fn report(input: &Path) -> Result<(Value, bool), CliError> {
    let v: Value = formats::read_json(input)?;
    let pass = v
        .get("verdict")
        .and_then(|d| d.get("pass"))
        .and_then(Value::as_bool)
        .ok_or_else(|| CliError::Invalid(format!("{}: no boolean verdict.pass", input.display())))?;
    for key in ["command", "parameters", "results", "metadata"] {
        if v.get(key).is_none() {
            return Err(CliError::Invalid(format!("{}: missing {key:?}", input.display())));
        }
    }
    Ok((v, pass))
}


use serde_json::json;

use bgb_core::distributions::{
    beta1_logpdf, beta2_logpdf, bgb1_logpdf, bgb2_logpdf, det_moment_u, det_moment_z, inverse_pair_logpdf,
    matrix_gamma_logpdf, product_z_logpdf, BimatrixParams, GammaParams, LogDensity, MatrixPair, PairFamily, PairKind,
};
use bgb_core::hypergeometric::{mhg as mhg_series, mhg_at_identity, mhg_matrix, HypergeometricSpec, SeriesOptions};
use bgb_core::linalg::{PDMatrix, SymMatrix};
use bgb_core::rng::map_chunks;
use bgb_core::verify::{run_suite, Evidence, Suite, MIN_SAMPLES};
use bgb_core::Error;

use crate::io::{self, csv_num, SampleRecord};
use crate::{
    DensityArgs, DensityFamily, Failure, Format, MhgArgs, MomentArgs, MomentKind, RunConfig, SampleArgs, SampleFamily,
    VerifyArgs, EXIT_NOT_CONVERGED,
};

type CmdResult = Result<(), Failure>;

fn json_only(cfg: &RunConfig, command: &str) -> CmdResult {
    if cfg.format == Format::Csv {
        return Err(Failure::usage(format!("csv output is only available for sample and verify, not {command}")));
    }
    Ok(())
}

fn threads(cfg: &RunConfig) -> Result<usize, Failure> {
    if cfg.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    Ok(cfg.threads)
}

fn series_options(cfg: &RunConfig, identity_m: Option<usize>) -> SeriesOptions {
    let default = match identity_m {
        Some(m) => SeriesOptions::identity_budget(m),
        None => SeriesOptions::default().max_degree,
    };
    SeriesOptions { rel_tol: cfg.rel_tol, max_degree: cfg.max_degree.unwrap_or(default) }
}

fn required(value: Option<f64>, flag: &str, family: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::usage(format!("{family} needs --{flag}")))
}

/// First (or only) and optional second argument of a density call.
fn density_inputs(args: &DensityArgs, pair: bool) -> Result<(SymMatrix, Option<SymMatrix>), Failure> {
    let load = |scalar: Option<f64>, file: &Option<std::path::PathBuf>, flag: &str| -> Result<SymMatrix, Failure> {
        match (scalar, file) {
            (Some(v), None) => Ok(SymMatrix::scalar(v)),
            (None, Some(path)) => io::read_matrix(path),
            _ => Err(Failure::usage(format!("give exactly one of --u{flag} or --{}", if flag == "1" { "first" } else { "second" }))),
        }
    };
    let first = load(args.u1, &args.first, "1")?;
    let second = if pair {
        Some(load(args.u2, &args.second, "2")?)
    } else {
        if args.u2.is_some() || args.second.is_some() {
            return Err(Failure::usage("this family takes a single argument"));
        }
        None
    };
    if let Some(s) = &second {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: s.dim() }.into());
        }
    }
    if let Some(m) = args.shape.m {
        if m != first.dim() {
            return Err(Error::DimensionMismatch { expected: m, found: first.dim() }.into());
        }
    }
    Ok((first, second))
}

pub fn density(cfg: &RunConfig, args: &DensityArgs) -> CmdResult {
    json_only(cfg, "density")?;
    let fam = args.family;
    let name = format!("{fam:?}").to_lowercase();
    let pair = matches!(fam, DensityFamily::Bgb1 | DensityFamily::Bgb2 | DensityFamily::InversePair);
    let (first, second) = density_inputs(args, pair)?;
    let m = first.dim();
    let shape = &args.shape;
    if fam != DensityFamily::Gamma && args.theta.is_some() {
        return Err(Failure::usage("--theta only applies to the gamma family"));
    }
    let bimatrix = || -> Result<BimatrixParams, Failure> {
        Ok(BimatrixParams::new(m, shape.a, required(shape.b, "b", &name)?, required(shape.c, "c", &name)?)?)
    };
    let pair_of = |kind| -> Result<MatrixPair, Failure> {
        Ok(MatrixPair::new(first.clone(), second.clone().expect("pair family"), kind)?)
    };
    let value: LogDensity = match fam {
        DensityFamily::Gamma => {
            let theta = match &args.theta {
                Some(path) => PDMatrix::new(io::read_matrix(path)?)?,
                None => PDMatrix::identity(m),
            };
            if theta.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: theta.dim() }.into());
            }
            matrix_gamma_logpdf(&first, &GammaParams::new(shape.a, theta)?)?
        }
        DensityFamily::Beta1 => beta1_logpdf(&first, shape.a, required(shape.b, "b", &name)?)?,
        DensityFamily::Beta2 => beta2_logpdf(&first, shape.a, required(shape.b, "b", &name)?)?,
        DensityFamily::Bgb1 => bgb1_logpdf(&pair_of(PairKind::BetaI)?, &bimatrix()?)?,
        DensityFamily::Bgb2 => bgb2_logpdf(&pair_of(PairKind::BetaII)?, &bimatrix()?)?,
        DensityFamily::ProductZ => product_z_logpdf(&first, &bimatrix()?, &series_options(cfg, None))?,
        DensityFamily::InversePair => inverse_pair_logpdf(&pair_of(PairKind::Inverse)?, &bimatrix()?)?,
    };
    io::print(&io::to_json(&value))
}

pub fn sample(cfg: &RunConfig, args: &SampleArgs) -> CmdResult {
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let threads = threads(cfg)?;
    let p = BimatrixParams::new(args.m, args.a, args.b, args.c)?;
    let family = match args.family {
        SampleFamily::Bgb1 => PairFamily::Bgb1,
        SampleFamily::Bgb2 => PairFamily::Bgb2,
    };
    let csv = cfg.format == Format::Csv;
    // Draw `i` depends only on (seed, i), so the file is the same for any
    // thread count.
    let chunks = map_chunks(args.n, cfg.seed, threads, |_, range, rng| -> bgb_core::Result<Vec<String>> {
        range
            .map(|i| {
                let pair = family.sample(&p, rng)?;
                let rec = SampleRecord::new(i, &pair.first, &pair.second)?;
                Ok(if csv { rec.csv_row() } else { io::to_json(&rec) })
            })
            .collect()
    });
    let mut lines = Vec::with_capacity(args.n + 1);
    if csv {
        lines.push(SampleRecord::csv_header(args.m));
    }
    for chunk in chunks {
        lines.extend(chunk?);
    }
    io::write_lines(args.out.as_deref(), lines.iter().map(String::as_str))
}

pub fn mhg(cfg: &RunConfig, args: &MhgArgs) -> CmdResult {
    json_only(cfg, "mhg")?;
    let spec = HypergeometricSpec::new(args.upper.clone(), args.lower.clone());
    let result = match (&args.eigenvalues, &args.matrix, args.identity) {
        (Some(x), None, false) => mhg_series(&spec, x, &series_options(cfg, None)),
        (None, Some(path), false) => mhg_matrix(&spec, &io::read_matrix(path)?, &series_options(cfg, None)),
        (None, None, true) => {
            let m = args.m.expect("clap enforces --m with --identity");
            mhg_at_identity(&spec, m, &series_options(cfg, Some(m)))
        }
        _ => return Err(Failure::usage("give exactly one of --eigenvalues, --matrix or --identity")),
    };
    match result {
        Ok(r) => {
            let body = io::to_json(&r);
            if r.converged {
                io::print(&body)
            } else {
                Err(Failure::new(EXIT_NOT_CONVERGED, format!("series did not converge within degree {}; raise --max-degree or loosen --rel-tol", r.degree_used))
                    .with_stdout(body))
            }
        }
        Err(e @ (Error::DivergentSeries | Error::SpectralRadiusTooLarge { .. })) => {
            let message = e.to_string();
            let body = io::to_json(&json!({ "converged": false, "error": message }));
            Err(Failure::new(EXIT_NOT_CONVERGED, message).with_stdout(body))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn moment(cfg: &RunConfig, args: &MomentArgs) -> CmdResult {
    json_only(cfg, "moment")?;
    let p = BimatrixParams::new(args.m, args.a, args.b, args.c)?;
    let opts = series_options(cfg, Some(args.m));
    let result = match args.kind {
        MomentKind::UMoment => det_moment_u(&p, args.r, args.s, &opts)?,
        MomentKind::ZMoment => {
            if args.s != 0.0 {
                return Err(Failure::usage("z-moment takes only --r"));
            }
            det_moment_z(&p, args.r, &opts)?
        }
    };
    io::print(&io::to_json(&result))
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> CmdResult {
    let suite: Suite = args.suite.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
    if args.n < MIN_SAMPLES {
        return Err(Failure::usage(format!("--n must be at least {MIN_SAMPLES}")));
    }
    let report = run_suite(suite, args.n, cfg.seed, threads(cfg)?);
    let body = match cfg.format {
        Format::Json => io::to_json(&report),
        Format::Csv => verify_csv(&report.checks),
    };
    if report.ok() {
        io::print(&body)
    } else {
        Err(Failure::new(1, format!("{} of {} checks failed", report.failed, report.checks.len())).with_stdout(body))
    }
}

fn verify_csv(checks: &[bgb_core::verify::CheckOutcome]) -> String {
    let mut out = String::from("name,status,kind,value,target,error,tolerance,std_error,n,z_score,message\n");
    for c in checks {
        let status = if c.passed() { "pass" } else { "fail" };
        let (kind, value, target, error, tol, se, n, z, msg) = match &c.evidence {
            Evidence::Value { value, target, error, tolerance } => {
                ("value", Some(*value), Some(*target), Some(*error), Some(*tolerance), None, None, None, "")
            }
            Evidence::Battery { cases, max_error, tolerance } => {
                ("battery", None, None, Some(*max_error), Some(*tolerance), None, Some(*cases as u64), None, "")
            }
            Evidence::MonteCarlo { report, .. } => (
                "monte-carlo",
                Some(report.estimate),
                report.target,
                None,
                None,
                Some(report.std_error),
                Some(report.n_samples),
                report.z_score,
                "",
            ),
            Evidence::TwoSample { report, .. } => (
                "two-sample",
                Some(report.first.estimate),
                Some(report.second.estimate),
                None,
                None,
                Some(report.first.std_error.hypot(report.second.std_error)),
                Some(report.first.n_samples),
                Some(report.z_score),
                "",
            ),
            Evidence::Error { message } => ("error", None, None, None, None, None, None, None, message.as_str()),
        };
        let row = [
            c.name.clone(),
            status.into(),
            kind.into(),
            csv_num(value),
            csv_num(target),
            csv_num(error),
            csv_num(tol),
            csv_num(se),
            n.map_or(String::new(), |n| n.to_string()),
            csv_num(z),
            csv_field(msg),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

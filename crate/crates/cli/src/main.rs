//! `polyangle`: solid angles of convex polytopes and random-projection
//! experiments from the command line.
//!
//! Every command writes JSON lines (one record per line, a `summary` record
//! last) to `--out` or standard output. Exit status: 0 when every check
//! passes, 1 when a check fails, 2 on input or usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyangle::generators;
use polyangle::identities::{self, gaddum_scan, log_grid, predict_simplex_probability, run_suite, Family};
use polyangle::projection::{estimate_expected_face_count, estimate_simplex_probability};
use polyangle::report::{render, Record};
use polyangle::solid_angle::face_angles;
use polyangle::{AngleMethod, ConvexPolytope, McConfig};

#[derive(Parser)]
#[command(name = "polyangle", version, about = "Solid angles of convex polytopes and random projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solid inner angle at every proper face (or every k-face).
    Angles {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: Common,
        /// Only report faces of this dimension.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Simulate random projections and compare with the angle-sum prediction.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: Common,
        /// Count surviving k-faces instead of the simplex event (required for
        /// polytopes that are not simplices).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run every identity check that applies to the input.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: Common,
    },
    /// Simplex probability along a degenerating tetrahedron family.
    Scan {
        #[command(flatten)]
        opts: Common,
        /// `flat-apex` or `skew-segments`.
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1e-3)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        /// Number of log-spaced grid points.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

#[derive(Args)]
struct Input {
    /// Polytope file (JSON with "dim", "vertices" and optional "halfspaces").
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    path: Option<PathBuf>,
    /// Built-in polytope: regular-simplex N, cube N, regular-polygon M,
    /// flat-apex H, skew D, random-simplex SEED.
    #[arg(long, num_args = 2, value_names = ["KIND", "PARAM"])]
    builtin: Option<Vec<String>>,
    /// Dimension for `--builtin random-simplex`.
    #[arg(long, default_value_t = 3)]
    dim: usize,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = polyangle::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, default_value_t = 8)]
    workers: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Exact up to dimension 3, sampling above.
    Auto,
    Exact,
    Mc,
}

impl Common {
    fn mc(&self) -> McConfig {
        McConfig::new(self.samples, self.seed).with_workers(self.workers)
    }

    /// Angle method for dimension `n`. Sampled angles use a seed independent
    /// of the projection experiment's.
    fn method(&self, n: usize) -> AngleMethod {
        let cfg = self.mc().derive(u64::MAX);
        match self.method {
            Method::Auto => AngleMethod::auto(n, cfg),
            Method::Exact => AngleMethod::Exact,
            Method::Mc => AngleMethod::MonteCarlo(cfg),
        }
    }

    fn method_label(&self, method: &AngleMethod) -> &'static str {
        match method {
            AngleMethod::Exact => "exact",
            AngleMethod::MonteCarlo(_) => "monte-carlo",
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Library(polyangle::Error),
    Io(io::Error),
}

impl From<polyangle::Error> for CliError {
    fn from(e: polyangle::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn param<T: std::str::FromStr>(kind: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("invalid parameter {raw:?} for builtin {kind}")))
}

impl Input {
    fn load(&self, tolerance: f64) -> Result<(String, ConvexPolytope), CliError> {
        let Some(spec) = &self.builtin else {
            let path = self.path.as_ref().expect("clap enforces an input");
            let p = polyangle::geometry::load_polytope(path, tolerance)?;
            return Ok(("file".to_string(), p));
        };
        let (kind, raw) = (spec[0].as_str(), spec[1].as_str());
        let p = match kind {
            "regular-simplex" => generators::regular_simplex(param(kind, raw)?)?,
            "cube" => generators::hypercube(param(kind, raw)?)?,
            "regular-polygon" => generators::regular_polygon(param(kind, raw)?)?,
            "flat-apex" => generators::flat_apex(param(kind, raw)?)?,
            "skew" | "skew-segments" => generators::skew_segments(param(kind, raw)?)?,
            "random-simplex" => generators::random_simplex(self.dim, param(kind, raw)?)?,
            other => return Err(CliError::Usage(format!("unknown builtin {other:?}"))),
        };
        // rebuild so --tolerance governs the lattice checks
        let p = ConvexPolytope::with_tolerance(p.vertices().to_vec(), p.halfspaces().to_vec(), tolerance)?;
        Ok((format!("{kind} {raw}"), p))
    }
}

fn describe(source: &str, p: &ConvexPolytope) -> Record {
    Record::new("polytope")
        .field("source", source)
        .field("dim", p.dim())
        .field("f_vector", p.f_vector())
}

struct Outcome {
    records: Vec<Record>,
    passed: bool,
}

fn angles(input: &Input, opts: &Common, k: Option<usize>) -> Result<Outcome, CliError> {
    let (source, p) = input.load(opts.tolerance)?;
    let n = p.dim();
    let dims: Vec<usize> = match k {
        Some(k) if k < n => vec![k],
        Some(k) => return Err(CliError::Usage(format!("--k {k} is not a proper face dimension (0..{n})"))),
        None => (0..n).collect(),
    };
    let method = opts.method(n);
    let mut records = vec![describe(&source, &p)];
    let mut totals = Vec::new();
    for &d in &dims {
        let measures = face_angles(&p, d, &method)?;
        let mut total = 0.0;
        let mut var = 0.0;
        for (face, m) in p.faces(d).iter().zip(&measures) {
            total += m.raw;
            var += m.stderr * m.stderr;
            records.push(
                Record::new("angle")
                    .field("dim", d)
                    .field("face", face.id().index)
                    .field("vertices", face.vertex_ids().to_vec())
                    .field("raw", m.raw)
                    .field("normalized", m.normalized)
                    .field("stderr", m.stderr)
                    .field("method", m.method.label()),
            );
        }
        totals.push(
            Record::new("total")
                .field("dim", d)
                .field("count", measures.len())
                .field("raw", total)
                .field("normalized", total / polyangle::unit_sphere_area(n)?)
                .field("stderr", var.sqrt()),
        );
    }
    records.extend(totals);
    records.push(
        Record::new("summary")
            .field("command", "angles")
            .field("method", opts.method_label(&method))
            .field("passed", true),
    );
    Ok(Outcome { records, passed: true })
}

fn simulate(input: &Input, opts: &Common, k: Option<usize>) -> Result<Outcome, CliError> {
    let (source, p) = input.load(opts.tolerance)?;
    let method = opts.method(p.dim());
    let cfg = opts.mc();
    let report = match k {
        Some(k) => estimate_expected_face_count(&p, k, &cfg, &method)?,
        None if p.is_simplex() => {
            let prediction = predict_simplex_probability(&p, &method)?;
            estimate_simplex_probability(&p, &cfg)?.with_prediction(prediction.value, prediction.stderr)
        }
        None => {
            return Err(CliError::Usage(
                "the input is not a simplex; pass --k to count surviving k-faces".into(),
            ))
        }
    };
    let tolerance = opts.tolerance + identities::SIGMAS * report.combined_stderr();
    let passed = report.residual.is_some_and(|r| r <= tolerance);
    let records = vec![
        describe(&source, &p),
        Record::from(&report),
        Record::new("summary")
            .field("command", "simulate")
            .field("method", opts.method_label(&method))
            .field("residual", report.residual)
            .field("tolerance", tolerance)
            .field("passed", passed),
    ];
    Ok(Outcome { records, passed })
}

fn verify(input: &Input, opts: &Common) -> Result<Outcome, CliError> {
    let (source, p) = input.load(opts.tolerance)?;
    let method = opts.method(p.dim());
    let checks = run_suite(&p, &opts.mc(), &method)?;
    let passed = checks.iter().all(|c| c.passed);
    let mut records = vec![describe(&source, &p)];
    records.extend(checks.iter().map(Record::from));
    records.push(
        Record::new("summary")
            .field("command", "verify")
            .field("method", opts.method_label(&method))
            .field("checks", checks.len())
            .field("failed", checks.iter().filter(|c| !c.passed).count())
            .field("passed", passed),
    );
    Ok(Outcome { records, passed })
}

fn scan(opts: &Common, family: Family, from: f64, to: f64, steps: usize) -> Result<Outcome, CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let grid = log_grid(from, to, steps).map_err(|e| CliError::Usage(e.to_string()))?;
    let method = opts.method(3);
    let points = gaddum_scan(family, &grid, &method)?;
    let passed = points.iter().all(|pt| pt.probability > 0.0 && pt.probability < 1.0);
    let mut records: Vec<Record> = points
        .iter()
        .map(|pt| {
            Record::new("scan")
                .field("family", family.label())
                .field("parameter", pt.parameter)
                .field("angle_sum", pt.angle_sum)
                .field("normalized", pt.normalized)
                .field("probability", pt.probability)
                .field("stderr", pt.stderr)
        })
        .collect();
    records.push(
        Record::new("summary")
            .field("command", "scan")
            .field("method", opts.method_label(&method))
            .field("points", points.len())
            .field("passed", passed),
    );
    Ok(Outcome { records, passed })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (outcome, out) = match &cli.command {
        Command::Angles { input, opts, k } => (angles(input, opts, *k)?, &opts.out),
        Command::Simulate { input, opts, k } => (simulate(input, opts, *k)?, &opts.out),
        Command::Verify { input, opts } => (verify(input, opts)?, &opts.out),
        Command::Scan { opts, family, from, to, steps } => (scan(opts, *family, *from, *to, *steps)?, &opts.out),
    };
    let text = render(&outcome.records);
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("polyangle: error: {e}");
            ExitCode::from(2)
        }
    }
}

//! The `ring-eq` command line: solve shapes, tabulate contact pressures, and
//! build lines-of-contact shapes, exporting CSV, SVG and a key-value record.
//!
//! Exit codes: `0` success, `1` usage error, `2` domain error (below buckling
//! or contact threshold, invalid arguments to the math), `3` no convergence.
//!
//! The environment variable `RING_EQ_TOL` overrides the equilibrium residual
//! tolerance (default `1e-10`).

use crate::contact::{self, ContactLineShape};
use crate::geometry::ShapePolyline;
use crate::quartic::RootSet;
use crate::solver::{self, EquilibriumState, SolveOptions};
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "ring-eq",
    version,
    about = "Equilibrium shapes of an elastic ring or tube under uniform pressure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the buckled equilibrium of one mode at one pressure and export it.
    Shape(ShapeArgs),
    /// Compute the contact pressures sigma_cn over a range of modes.
    ContactTable(TableArgs),
    /// Build the lines-of-contact shape of a mode above its contact pressure.
    ContactShape(ContactShapeArgs),
}

#[derive(Args)]
struct ShapeArgs {
    /// Symmetry mode (n >= 2).
    #[arg(long)]
    n: u32,
    /// Normalized pressure sigma = p/D.
    #[arg(long)]
    sigma: f64,
    /// Polyline sample count.
    #[arg(long, default_value_t = 3000)]
    samples: usize,
    /// Output formats (the record file is always written).
    #[arg(long, value_delimiter = ',', default_values_t = vec![Format::Csv, Format::Svg])]
    format: Vec<Format>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TableArgs {
    /// First mode of the table.
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    /// Last mode of the table.
    #[arg(long, default_value_t = 15)]
    n_max: u32,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ContactShapeArgs {
    /// Symmetry mode (n >= 2).
    #[arg(long)]
    n: u32,
    /// Pressure sigma >= sigma_cn of the mode.
    #[arg(long)]
    sigma: f64,
    /// Polyline sample count.
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Output formats (the record file is always written).
    #[arg(long, value_delimiter = ',', default_values_t = vec![Format::Csv, Format::Svg])]
    format: Vec<Format>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
        })
    }
}

/// Inputs, outputs and emitted files of one command invocation.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub command: String,
    pub version: String,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<(String, String)>,
}

impl RunRecord {
    fn new(command: &str) -> Self {
        RunRecord {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn input(&mut self, key: &str, value: impl std::fmt::Display) {
        self.inputs.push((key.to_string(), value.to_string()));
    }

    fn output(&mut self, key: &str, value: impl std::fmt::Display) {
        self.outputs.push((key.to_string(), value.to_string()));
    }

    fn output_float(&mut self, key: &str, value: f64) {
        self.outputs.push((key.to_string(), fmt_float(value)));
    }

    /// Look up an output value by key (first match).
    pub fn get_output(&self, key: &str) -> Option<&str> {
        self.outputs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Deterministic key-value text of the record.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "version = {}", self.version);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "input.{k} = {v}");
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "output.{k} = {v}");
        }
        s
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.15e}")
}

/// Entry point used by the binary: parses `std::env::args`.
pub fn main() -> i32 {
    run(std::env::args())
}

/// Parse and execute a full argument vector; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with successful exit
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let opts = options_from_env();
    let result = match cli.command {
        Command::Shape(args) => cmd_shape(&args, &opts),
        Command::ContactTable(args) => cmd_contact_table(&args, &opts),
        Command::ContactShape(args) => cmd_contact_shape(&args, &opts),
    };
    match result {
        Ok(record) => {
            print!("{}", record.to_text());
            0
        }
        Err(e) => {
            eprintln!("ring-eq: {e}");
            exit_code_for(&e)
        }
    }
}

fn options_from_env() -> SolveOptions {
    let mut opts = SolveOptions::default();
    if let Ok(v) = std::env::var("RING_EQ_TOL") {
        if let Ok(tol) = v.parse::<f64>() {
            if tol > 0.0 {
                opts.tol = tol;
            }
        }
    }
    opts
}

/// Map crate errors onto the exit-code protocol.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => 3,
        _ => 2,
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::Domain(format!("io error: {e}"))
}

fn cmd_shape(args: &ShapeArgs, opts: &SolveOptions) -> Result<RunRecord, Error> {
    let mut record = RunRecord::new("shape");
    record.input("n", args.n);
    record.input("sigma", fmt_float(args.sigma));
    record.input("samples", args.samples);
    record.input("tol", fmt_float(opts.tol));

    let state = solver::solve_equilibrium(args.n, args.sigma, opts)?;
    let poly = state.sample(args.samples)?;
    describe_state(&mut record, &state);
    describe_polyline(&mut record, &poly);

    let stem = format!("shape-n{}-sigma{}", args.n, args.sigma);
    emit_files(&mut record, &args.out, &stem, &args.format, &poly).map_err(io_error)?;
    Ok(record)
}

fn cmd_contact_table(args: &TableArgs, opts: &SolveOptions) -> Result<RunRecord, Error> {
    if args.n_min < 2 || args.n_min > args.n_max {
        return Err(Error::Domain(format!(
            "invalid mode range {}..{}",
            args.n_min, args.n_max
        )));
    }
    let mut record = RunRecord::new("contact-table");
    record.input("n_min", args.n_min);
    record.input("n_max", args.n_max);
    record.input("tol", fmt_float(opts.tol));

    let modes: Vec<u32> = (args.n_min..=args.n_max).collect();
    // independent solves: one worker per mode
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = modes
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let contact = solver::solve_contact_pressure(n, opts);
                    let alt = solver::alternative_contact_report(n, opts);
                    (contact, alt)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut csv = String::from(
        "n,sigma_cn,eta,q,s1_minus,s1_plus,res_closure,res_length,res_contact\n",
    );
    for (n, (contact, alt)) in modes.iter().zip(&results) {
        match contact {
            Ok(c) => {
                let _ = writeln!(
                    csv,
                    "{n},{},{},{},{},{},{},{},{}",
                    fmt_float(c.sigma_cn),
                    fmt_float(c.eta),
                    fmt_float(c.q),
                    fmt_float(c.s1_minus),
                    fmt_float(c.s1_plus),
                    fmt_float(c.residuals.0),
                    fmt_float(c.residuals.1),
                    fmt_float(c.residuals.2),
                );
                record.output_float(&format!("sigma_c{n}"), c.sigma_cn);
            }
            Err(e) => {
                // per-row failure is recorded and the run continues
                record.output(&format!("error_c{n}"), e);
            }
        }
        match alt {
            Ok(a) => {
                record.output(
                    &format!("alt_system_n{n}"),
                    format!(
                        "no-root: scanned sigma in [{:.6}, {:.6}] ({} samples), min |phi1(s1+) + pi/2| = {:.6}, sign changes = {}",
                        a.sigma_lo, a.sigma_hi, a.samples, a.min_abs_residual, a.sign_changes
                    ),
                );
                if a.root_found {
                    record.output(&format!("alt_system_n{n}_root_found"), "true");
                }
            }
            Err(e) => record.output(&format!("alt_system_n{n}"), format!("scan failed: {e}")),
        }
    }

    let csv_path = args.out.join("contact-table.csv");
    write_atomic(&csv_path, csv.as_bytes()).map_err(io_error)?;
    record.output("file.csv", csv_path.display());
    let record_path = args.out.join("contact-table.record");
    write_atomic(&record_path, record.to_text().as_bytes()).map_err(io_error)?;
    record.output("file.record", record_path.display());
    Ok(record)
}

fn cmd_contact_shape(args: &ContactShapeArgs, opts: &SolveOptions) -> Result<RunRecord, Error> {
    let mut record = RunRecord::new("contact-shape");
    record.input("n", args.n);
    record.input("sigma", fmt_float(args.sigma));
    record.input("samples", args.samples);
    record.input("tol", fmt_float(opts.tol));

    let shape = contact::build_contact_line_shape(args.n, args.sigma, args.samples, opts)?;
    describe_contact_shape(&mut record, &shape)?;
    describe_polyline(&mut record, &shape.polyline);

    let stem = format!("contact-shape-n{}-sigma{}", args.n, args.sigma);
    emit_files(&mut record, &args.out, &stem, &args.format, &shape.polyline)
        .map_err(io_error)?;
    Ok(record)
}

fn describe_state(record: &mut RunRecord, state: &EquilibriumState) {
    record.output("sigma", fmt_float(state.sigma));
    record.output("rotation_sign", state.rotation_sign);
    record.output("q", fmt_float(state.q));
    match state.eta() {
        Some(eta) => {
            record.output("regime", "case-i");
            record.output_float("eta", eta);
        }
        None => {
            record.output("regime", "case-ii");
            record.output_float("eta_sq", state.eta_sq);
        }
    }
    match state.roots {
        RootSet::CaseI { alpha, beta, .. } => {
            record.output_float("alpha", alpha);
            record.output_float("beta", beta);
        }
        RootSet::CaseII {
            alpha,
            beta,
            gamma,
            delta,
        } => {
            record.output_float("alpha", alpha);
            record.output_float("beta", beta);
            record.output_float("gamma", gamma);
            record.output_float("delta", delta);
        }
    }
    record.output_float("mu", state.params.mu);
    record.output_float("epsilon", state.params.epsilon);
    if let Some(m) = state.solution().case_i_moduli() {
        record.output_float("k1", m.modulus.k());
        record.output_float("lambda1", m.lambda);
        record.output_float("T1", m.period);
    } else if let Some(m) = state.solution().case_ii_moduli() {
        record.output_float("k2", m.modulus.k());
        record.output_float("lambda2", m.lambda);
        record.output_float("T2", m.period);
    }
    record.output_float("res_closure", state.residuals.0.abs());
    record.output_float("res_length", state.residuals.1.abs());
}

fn describe_polyline(record: &mut RunRecord, poly: &ShapePolyline) {
    let d = &poly.diagnostics;
    record.output_float("closure_error", d.closure_error);
    record.output_float("slope_closure_error", d.slope_closure_error);
    record.output_float("length_error", d.length_error);
    record.output("self_intersecting", d.self_intersecting);
}

fn describe_contact_shape(
    record: &mut RunRecord,
    shape: &ContactLineShape,
) -> Result<(), Error> {
    record.output_float("sigma_cn", shape.base.sigma_cn);
    record.output_float("scale", shape.scale);
    record.output_float("segment_length", shape.segment_length);
    record.output_float("junction_angle_error", shape.junction_angle_error);
    let jump = shape.jump_report;
    record.output_float("jump.moment_bent", jump.moment_bent);
    record.output_float("jump.shear_bent", jump.shear_bent.0);
    record.output_float("jump.moment_line", jump.moment_line);
    let balance = contact::total_balance_check(shape);
    record.output_float("balance.force_residual", balance.force_residual);
    record.output_float("balance.moment_residual", balance.moment_residual);
    let ratio = contact::conductivity_ratio(shape.n, shape.base.sigma_cn, shape.sigma_hat)?;
    record.output_float("conductivity_ratio", ratio);
    Ok(())
}

fn emit_files(
    record: &mut RunRecord,
    out_dir: &Path,
    stem: &str,
    formats: &[Format],
    poly: &ShapePolyline,
) -> Result<(), std::io::Error> {
    std::fs::create_dir_all(out_dir)?;
    if formats.contains(&Format::Csv) {
        let path = out_dir.join(format!("{stem}.csv"));
        write_atomic(&path, polyline_csv(poly).as_bytes())?;
        record.output("file.csv", path.display());
    }
    if formats.contains(&Format::Svg) {
        let path = out_dir.join(format!("{stem}.svg"));
        write_atomic(&path, polyline_svg(poly).as_bytes())?;
        record.output("file.svg", path.display());
    }
    let path = out_dir.join(format!("{stem}.record"));
    write_atomic(&path, record.to_text().as_bytes())?;
    record.output("file.record", path.display());
    Ok(())
}

/// CSV with the fixed column set `s,x,y,kappa,phi,M,N,Q`.
pub fn polyline_csv(poly: &ShapePolyline) -> String {
    let mut s = String::from("s,x,y,kappa,phi,M,N,Q\n");
    for p in &poly.samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_float(p.s),
            fmt_float(p.x),
            fmt_float(p.y),
            fmt_float(p.kappa),
            fmt_float(p.phi),
            fmt_float(p.moment),
            fmt_float(p.tension),
            fmt_float(p.shear),
        );
    }
    s
}

/// Standalone SVG with the shape as a single closed path, 5% margin.
pub fn polyline_svg(poly: &ShapePolyline) -> String {
    let pts = poly.points();
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in &pts {
        lo[0] = lo[0].min(p[0]);
        lo[1] = lo[1].min(-p[1]);
        hi[0] = hi[0].max(p[0]);
        hi[1] = hi[1].max(-p[1]);
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let margin = 0.05 * span;
    let view = (
        lo[0] - margin,
        lo[1] - margin,
        hi[0] - lo[0] + 2.0 * margin,
        hi[1] - lo[1] + 2.0 * margin,
    );
    let mut path = String::new();
    for (i, p) in pts.iter().enumerate() {
        // SVG y grows downward: flip the y coordinate
        let _ = write!(
            path,
            "{}{:.6} {:.6} ",
            if i == 0 { "M" } else { "L" },
            p[0],
            -p[1]
        );
    }
    path.push('Z');
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
            "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{:.6}\"/>\n",
            "</svg>\n"
        ),
        view.0,
        view.1,
        view.2,
        view.3,
        path,
        0.004 * span,
    )
}

/// Write-then-rename so readers never observe a half-written file.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

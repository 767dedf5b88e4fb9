//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a consistency
//! check fails (closed form against numeric, or an implication invariant).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::text::format_matrix;
use crate::linalg::DEFAULT_PSD_TOL;
use crate::maps::{choi_matrix, MapKind, MapParams};
use crate::oracle::{
    monte_carlo_falsify, numeric_classify, numeric_completely_positive, numeric_k_positive,
};
use crate::regions::{classify, Classification};
use crate::scan::{emit_csv, emit_plot, scan, Layer, ScanConfig, ScanMode, FIGURE_LAYERS};
use crate::spectra::{check_source, SpectrumSource, DEFAULT_SPECTRUM_TOL};

/// Distance to a closed-form boundary below which compare-mode mismatches
/// are attributed to round-off.
pub const BOUNDARY_BAND: f64 = 1e-7;

/// Upper bound on lines accepted by [`parse_points`].
const MAX_POINTS: usize = 1 << 20;

#[derive(Parser, Debug)]
#[command(
    name = "posmap",
    version,
    about = "Positivity regions of A -> A^t(x)1 + 1(x)A + Tr(A)(alpha*1 + beta*B)",
    after_help = "Set POSMAP_THREADS to cap the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one parameter point
    Classify(ClassifyArgs),
    /// Classify every cell of a grid over the (alpha, beta) plane
    Scan(ScanArgs),
    /// Compare closed-form spectra with numeric eigenvalues
    Verify(VerifyArgs),
    /// Run the numeric k-positivity oracle at one point
    Oracle(OracleArgs),
    /// Print a Choi matrix in the matrix text format
    Choi(ChoiArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassifyMode {
    Closed,
    Numeric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanModeArg {
    Closed,
    Numeric,
    Compare,
}

impl From<ScanModeArg> for ScanMode {
    fn from(m: ScanModeArg) -> Self {
        match m {
            ScanModeArg::Closed => ScanMode::ClosedForm,
            ScanModeArg::Numeric => ScanMode::Numeric,
            ScanModeArg::Compare => ScanMode::Compare,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Phi,
    Phi1,
    Phi2,
    PhiT,
    Phi1T,
}

impl From<KindArg> for MapKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Phi => MapKind::Phi,
            KindArg::Phi1 => MapKind::Phi1,
            KindArg::Phi2 => MapKind::Phi2,
            KindArg::PhiT => MapKind::PhiComposeTranspose,
            KindArg::Phi1T => MapKind::Phi1ComposeTranspose,
        }
    }
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Matrix size; predicates beyond positivity need n = 3
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_enum, default_value = "closed")]
    mode: ClassifyMode,
    /// Print one JSON object instead of key=value pairs
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    amin: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    amax: f64,
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    bmin: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    bmax: f64,
    /// Cells per axis
    #[arg(long, default_value_t = 101)]
    res: usize,
    #[arg(long, value_enum, default_value = "closed")]
    mode: ScanModeArg,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the grid as CSV
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Write positive.svg, cp.svg, pos_not_cp.svg and decomp_suff.svg here
    #[arg(long)]
    out_svg_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// File with one "alpha beta" pair per line; default {-2,...,2}^2
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Random pure states for the Monte-Carlo search
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ChoiArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_enum, default_value = "phi")]
    kind: KindArg,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses a points file: one `alpha beta` pair per line, blank lines and
/// lines starting with `#` ignored.
pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if points.len() == MAX_POINTS {
            return Err(Error::parse(lineno, "too many points"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                lineno,
                format!("expected `alpha beta`, found {} fields", fields.len()),
            ));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(lineno, format!("invalid number `{s}`")))
        };
        points.push((num(fields[0])?, num(fields[1])?));
    }
    Ok(points)
}

fn default_points() -> Vec<(f64, f64)> {
    let axis = [-2.0, -1.0, 0.0, 1.0, 2.0];
    axis.iter()
        .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
        .collect()
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

fn format_classification(c: &Classification) -> String {
    Layer::ALL
        .into_iter()
        .filter(|l| c.higher_order || *l == Layer::Positive)
        .map(|l| format!("{}={}", l.name(), flag(l.get(c))))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct ClassifyReport {
    alpha: f64,
    beta: f64,
    n: usize,
    mode: &'static str,
    #[serde(flatten)]
    classification: Classification,
}

fn run_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let p = MapParams::new(a.alpha, a.beta, a.n)?;
    let (c, mode) = match a.mode {
        ClassifyMode::Closed => (classify(&p)?, "closed"),
        ClassifyMode::Numeric => (numeric_classify(&p, DEFAULT_PSD_TOL)?, "numeric"),
    };
    if a.json {
        let report = ClassifyReport {
            alpha: p.alpha,
            beta: p.beta,
            n: p.n,
            mode,
            classification: c,
        };
        let json = serde_json::to_string(&report).map_err(|e| Error::Consistency(e.to_string()))?;
        writeln!(out, "{json}")?;
    } else {
        writeln!(out, "{}", format_classification(&c))?;
    }
    Ok(())
}

fn run_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    let config = ScanConfig {
        alpha_min: a.amin,
        alpha_max: a.amax,
        beta_min: a.bmin,
        beta_max: a.bmax,
        resolution: a.res,
        mode: a.mode.into(),
        n: a.n,
        seed: a.seed,
        csv_path: a.out_csv.clone(),
        svg_dir: a.out_svg_dir.clone(),
    };
    let grid = scan(&config)?;
    grid.check_invariants()?;
    if let Some(path) = &config.csv_path {
        emit_csv(&grid, path)?;
    }
    if let Some(dir) = &config.svg_dir {
        fs::create_dir_all(dir)?;
        for layer in FIGURE_LAYERS.into_iter().filter(|l| l.available(config.n)) {
            emit_plot(&grid, &dir.join(format!("{layer}.svg")), layer)?;
        }
    }
    writeln!(out, "cells {}", grid.cells.len())?;
    for layer in Layer::ALL.into_iter().filter(|l| l.available(config.n)) {
        writeln!(out, "fraction {} {:.6}", layer.name(), grid.fraction(layer))?;
    }
    if config.mode == ScanMode::Compare {
        for m in &grid.mismatches {
            let (alpha, beta) = config.cell_center(m.cell);
            writeln!(
                out,
                "mismatch {} {alpha} {beta} {} {:e}",
                m.cell, m.predicate, m.boundary_distance
            )?;
        }
        let outside = grid.mismatches_outside(BOUNDARY_BAND).len();
        writeln!(
            out,
            "mismatches {} outside_band {outside}",
            grid.mismatches.len()
        )?;
        if outside > 0 {
            return Err(Error::Consistency(format!(
                "{outside} mismatches farther than {BOUNDARY_BAND:e} from a boundary"
            )));
        }
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {}",
            a.tol
        )));
    }
    let points = match &a.points {
        Some(path) => parse_points(&fs::read_to_string(path)?)?,
        None => default_points(),
    };
    let runs: [(SpectrumSource, usize, &str); 5] = [
        (SpectrumSource::PhiE11, 3, "phi_e11_n3"),
        (SpectrumSource::PhiE11, 4, "phi_e11_n4"),
        (SpectrumSource::ChoiPhi, 3, "choi_phi"),
        (SpectrumSource::Block2, 3, "block2"),
        (SpectrumSource::ChoiPhi2, 3, "choi_phi2"),
    ];
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    writeln!(out, "# source alpha beta max_dev matched")?;
    for (source, n, label) in runs {
        for &(alpha, beta) in &points {
            let report = check_source(source, &MapParams::new(alpha, beta, n)?, a.tol)?;
            worst = worst.max(report.max_abs_deviation);
            failed += usize::from(!report.matched);
            writeln!(
                out,
                "{label} {alpha} {beta} {:.3e} {}",
                report.max_abs_deviation,
                flag(report.matched)
            )?;
        }
    }
    writeln!(
        out,
        "# checked {} failed {failed} worst {worst:.3e}",
        runs.len() * points.len()
    )?;
    if failed > 0 {
        return Err(Error::Consistency(format!(
            "{failed} spectra deviate beyond {:e}",
            a.tol
        )));
    }
    Ok(())
}

fn run_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let p = MapParams::new(a.alpha, a.beta, a.n)?;
    let mut verdicts = vec![
        numeric_k_positive(&p, a.k, DEFAULT_PSD_TOL)?,
        monte_carlo_falsify(&p, a.k, a.trials, a.seed, DEFAULT_PSD_TOL)?,
    ];
    if p.n == 3 {
        verdicts.push(numeric_completely_positive(
            &p,
            MapKind::Phi,
            DEFAULT_PSD_TOL,
        )?);
    }
    writeln!(out, "# predicate alpha beta k verdict min_eig")?;
    writeln!(
        out,
        "# monte_carlo verdicts are one-sided: 1 means no violating state was sampled"
    )?;
    for v in verdicts {
        let k = if v.predicate.starts_with("completely_positive") {
            p.n
        } else {
            a.k
        };
        writeln!(
            out,
            "{} {} {} {k} {} {:.12e}",
            v.predicate,
            p.alpha,
            p.beta,
            flag(v.verdict),
            v.min_eigenvalue
        )?;
    }
    Ok(())
}

fn run_choi(a: &ChoiArgs, out: &mut dyn Write) -> Result<()> {
    let p = MapParams::new(a.alpha, a.beta, a.n)?;
    let text = format_matrix(choi_matrix(a.kind.into(), &p)?.as_matrix());
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Classify(a) => run_classify(a, out),
        Command::Scan(a) => run_scan(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Oracle(a) => run_oracle(a, out),
        Command::Choi(a) => run_choi(a, out),
    }
}

fn thread_cap() -> std::result::Result<Option<usize>, String> {
    match std::env::var("POSMAP_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| format!("POSMAP_THREADS must be a positive integer, got `{v}`")),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) | Error::CountMismatch { .. } | Error::NoConvergence { .. } => 2,
        _ => 1,
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let mut buf = Vec::new();
    let result = match thread_cap() {
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 1;
        }
        Ok(None) => dispatch(&cli, &mut buf),
        Ok(Some(threads)) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        },
    };
    let written = out.write_all(&buf);
    let result = result.and_then(|()| Ok(written?));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

//! Command-line front end: `run` one configured experiment or `verify` the
//! acceptance suite.
//!
//! Every mode writes a CSV with the header `mode,label,index,predicted,computed,residual`
//! (floats in shortest round-trip form), a text summary and, when enabled,
//! whitespace-separated two-column `<name>.dat` files.

mod config;
mod run;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{
    BesselSpec, ConfigError, CornerSpec, ExperimentConfig, HalflineSpec, IntervalSpec, Mode, OutputSpec,
    SolverSpec, Tolerances, VerifySpec, WaveSpec,
};
pub use run::{execute, PlotSeries, ResultRow, RunOutcome, CSV_HEADER};

use crate::verify::{run_suite, Check};

/// Exit status: all thresholds met.
pub const EXIT_PASS: i32 = 0;
/// Exit status: a numerical failure or a missed threshold.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: unreadable or invalid configuration.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cornerlab", version, about = "Robin eigenproblems with a Stokes-type corner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for assembly (defaults to all cores).
    #[arg(long, global = true, env = "CORNERLAB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the acceptance suite and print one verdict per criterion.
    Verify {
        /// Optional TOML with a `[verify] criteria = [...]` selection.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report to `<out>/verify.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated criterion numbers; overrides the config.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    if let Some(n) = cli.threads {
        // A global pool can be installed once per process; later calls keep the first.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match cli.command {
        Command::Run { config, out } => run_command(&config, &out, cli.verbose),
        Command::Verify { config, out, only } => verify_command(config.as_deref(), out.as_deref(), only),
    }
}

fn run_command(config: &Path, out: &Path, verbose: bool) -> i32 {
    let cfg = match ExperimentConfig::load(config) {
        Ok(c) if c.mode.is_some() => c,
        Ok(_) => {
            eprintln!("configuration error: `mode` is required for run");
            return EXIT_CONFIG;
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = prepare_out_dir(out) {
        eprintln!("{e}");
        return EXIT_CONFIG;
    }
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("numerical failure: {e}");
            let _ = fs::write(out.join(&cfg.output.summary), format!("numerical failure: {e}\n"));
            return EXIT_FAIL;
        }
    };
    if let Err(e) = write_artifacts(&cfg, &outcome, out) {
        eprintln!("cannot write results: {e}");
        return EXIT_FAIL;
    }
    let summary = render_summary(&cfg, &outcome);
    if verbose {
        print!("{summary}");
    } else {
        println!(
            "{}: {} rows, {}",
            cfg.mode.map_or("?", Mode::name),
            outcome.rows.len(),
            if outcome.pass() { "PASS" } else { "FAIL" }
        );
    }
    if outcome.pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn verify_command(config: Option<&Path>, out: Option<&Path>, only: Option<Vec<usize>>) -> i32 {
    let cfg = match config.map(ExperimentConfig::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let ids = only.unwrap_or(cfg.verify.criteria);
    if let Some(id) = ids.iter().find(|id| !crate::verify::ALL_CRITERIA.contains(id)) {
        eprintln!("configuration error: no criterion {id}");
        return EXIT_CONFIG;
    }
    let report = run_suite(&ids);
    let text = report.render();
    print!("{text}");
    if let Some(dir) = out {
        if let Err(e) = prepare_out_dir(dir).and_then(|_| fs::write(dir.join("verify.txt"), &text).map_err(|e| ConfigError(e.to_string()))) {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    }
    if report.pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn prepare_out_dir(out: &Path) -> Result<(), ConfigError> {
    fs::create_dir_all(out).map_err(|e| ConfigError(format!("{}: {e}", out.display())))?;
    let probe = out.join(".cornerlab-write-test");
    fs::write(&probe, b"").map_err(|e| ConfigError(format!("{} is not writable: {e}", out.display())))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

/// CSV bytes for `rows`, header included even when empty.
pub fn csv_bytes(rows: &[ResultRow]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn parse_csv(bytes: &[u8]) -> csv::Result<Vec<ResultRow>> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}

pub fn write_artifacts(cfg: &ExperimentConfig, outcome: &RunOutcome, out: &Path) -> std::io::Result<()> {
    fs::write(out.join(&cfg.output.csv), csv_bytes(&outcome.rows))?;
    fs::write(out.join(&cfg.output.summary), render_summary(cfg, outcome))?;
    for p in &outcome.plots {
        let mut f = fs::File::create(out.join(format!("{}.dat", p.name)))?;
        for (x, y) in &p.points {
            writeln!(f, "{x} {y}")?;
        }
    }
    Ok(())
}

fn check_line(c: &Check) -> String {
    format!("[{}] {:<40} {:<24e} {}\n", if c.pass { "ok" } else { "FAIL" }, c.name, c.measured, c.bound)
}

pub fn render_summary(cfg: &ExperimentConfig, outcome: &RunOutcome) -> String {
    let mut s = format!("mode: {}\n", cfg.mode.map_or("?", Mode::name));
    s += &format!(
        "corner: alpha* = {}, rho0 = {}, gamma = {}, delta = {}\n",
        cfg.corner.alpha_star, cfg.corner.rho0, cfg.gamma, cfg.delta
    );
    s += &format!("rows: {}\n", outcome.rows.len());
    for n in &outcome.notes {
        s += &format!("note: {n}\n");
    }
    for c in &outcome.checks {
        s += &check_line(c);
    }
    s += &format!("verdict: {}\n", if outcome.pass() { "PASS" } else { "FAIL" });
    s
}

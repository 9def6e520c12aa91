//! Command-line interface. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 calibration or fixture failure, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{build_chevalley_table_with, export_table, import_table, AnchorSet, ChevalleyTable};
use crate::error::Error;
use crate::orbits::OrbitLabel;
use crate::report::{criteria_table, verify_orbit};
use crate::roots::build_root_system;
use crate::sweep::{invariance_sweep, jacobi_sweep, sampled_sweep, DEFAULT_SEED};
use crate::weights;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CALIBRATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Default sample count of `table check sampled`.
pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Sample count used by `selftest`.
pub const SELFTEST_SAMPLES: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "e8lie", version, about = "Exact E8 Chevalley basis and orbit verification")]
pub struct Cli {
    /// Anchor fixture used for calibration (defaults to the shipped one).
    #[arg(long, global = true, value_name = "PATH")]
    pub anchors: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full verification pipeline for one orbit.
    Verify {
        /// a5a1 or d5a1a2.
        label: OrbitLabel,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Export, import or check the structure-constant table.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Run both orbits, the weight suite and the property sweeps.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum TableAction {
    /// Write the calibrated table to PATH.
    Export { path: PathBuf },
    /// Parse a table file and check it against the anchors.
    Import { path: PathBuf },
    /// Run the exhaustive or the randomized axiom checks.
    Check {
        mode: CheckMode,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Full,
    Sampled,
}

/// Error exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AnchorUnsatisfiable { .. } | Error::Fixture(_) => EXIT_CALIBRATION,
        _ => EXIT_CHECK_FAILED,
    }
}

fn load_anchors(cli: &Cli) -> Result<AnchorSet, Error> {
    match &cli.anchors {
        Some(p) => AnchorSet::from_path(p).map_err(|e| match e {
            Error::Io(m) => Error::Fixture(format!("{}: {m}", p.display())),
            other => other,
        }),
        None => Ok(AnchorSet::shipped()),
    }
}

fn load(cli: &Cli) -> Result<(ChevalleyTable, AnchorSet), Error> {
    let anchors = load_anchors(cli)?;
    let t = build_chevalley_table_with(build_root_system(), &anchors)?;
    Ok((t, anchors))
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify { label, format, out: path } => cmd_verify(&cli, *label, *format, path.as_deref(), out),
        Command::Table { action } => cmd_table(&cli, action, out),
        Command::Selftest => cmd_selftest(&cli, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// `verify <label>`.
pub fn cmd_verify(cli: &Cli, label: OrbitLabel, format: Format, path: Option<&std::path::Path>, out: &mut dyn Write) -> Result<i32, Error> {
    let (t, anchors) = load(cli)?;
    let report = verify_orbit(&t, label, &anchors)?;
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match path {
        Some(p) => std::fs::write(p, rendered)?,
        None => out.write_all(rendered.as_bytes())?,
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// `table export|import|check`.
pub fn cmd_table(cli: &Cli, action: &TableAction, out: &mut dyn Write) -> Result<i32, Error> {
    match action {
        TableAction::Export { path } => {
            let (t, _) = load(cli)?;
            std::fs::write(path, export_table(&t))?;
            writeln!(out, "wrote {} constants ({}) to {}", t.constants().len(), t.convention(), path.display())?;
            Ok(EXIT_OK)
        }
        TableAction::Import { path } => {
            let anchors = load_anchors(cli)?;
            let t = import_table(&std::fs::read_to_string(path)?)?;
            let checks = t.check_anchors(&anchors)?;
            let ok = checks.iter().filter(|c| c.pass()).count();
            writeln!(out, "read {} constants, convention {}", t.constants().len(), t.convention())?;
            writeln!(out, "anchors: {ok}/{} reproduced", checks.len())?;
            for c in checks.iter().filter(|c| !c.pass()) {
                writeln!(out, "  {}: N({},{}) = {} expected {}", c.anchor.id, c.anchor.alpha, c.anchor.beta, c.computed, c.anchor.value)?;
            }
            Ok(if ok == checks.len() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        TableAction::Check { mode, seed, n } => {
            let (t, _) = load(cli)?;
            let pass = match mode {
                CheckMode::Full => {
                    let mut all = true;
                    for r in [jacobi_sweep(&t), invariance_sweep(&t)] {
                        writeln!(out, "{}: {} cases, {} failures{}", r.name, r.cases, r.failures, r.first_failure.map(|f| format!(", first at {f:?}")).unwrap_or_default())?;
                        all &= r.pass();
                    }
                    all
                }
                CheckMode::Sampled => {
                    let r = sampled_sweep(&t, *seed, *n);
                    writeln!(
                        out,
                        "sampled: seed {} n {} jacobi failures {} invariance failures {} transcript {:08x}",
                        r.seed, r.samples, r.jacobi_failures, r.invariance_failures, r.transcript
                    )?;
                    r.pass()
                }
            };
            Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

/// `selftest`.
pub fn cmd_selftest(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let (t, anchors) = load(cli)?;
    writeln!(out, "convention {}", t.convention())?;
    let mut reports = Vec::new();
    for label in OrbitLabel::ALL {
        let r = verify_orbit(&t, label, &anchors)?;
        let get = |id: &str| r.check(id).map(|c| c.computed.clone()).unwrap_or_default();
        writeln!(out, "{label}: lambda = {}, norm difference = {}", get("lambda"), weights::norm_difference(label))?;
        reports.push(r);
    }
    let j = jacobi_sweep(&t);
    let inv = invariance_sweep(&t);
    let s = sampled_sweep(&t, DEFAULT_SEED, SELFTEST_SAMPLES);
    let extra = vec![
        (9, "jacobi sweep".to_string(), j.pass()),
        (9, "invariance sweep".to_string(), inv.pass()),
        (9, format!("sampled sweep {:08x}", s.transcript), s.pass()),
    ];
    let table = criteria_table(&reports, &extra);
    for line in &table {
        writeln!(out, "{} {}. {}", if line.pass { "PASS" } else { "FAIL" }, line.number, line.title)?;
        for f in &line.failing {
            writeln!(out, "       failing: {f}")?;
        }
    }
    for r in &reports {
        for n in &r.notes {
            writeln!(out, "note ({}): {n}", r.orbit)?;
        }
    }
    Ok(if table.iter().all(|l| l.pass) { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("e8lie").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_capture(&["verify", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
    }

    #[test]
    fn help_and_version_exit_0() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
        assert_eq!(run_capture(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn missing_fixture_exits_2() {
        assert_eq!(run_capture(&["--anchors", "/nonexistent/anchors.json", "verify", "a5a1"]).0, EXIT_CALIBRATION);
    }
}

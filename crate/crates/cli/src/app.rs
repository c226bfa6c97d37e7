use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use qtherm::bench::{load_baseline, run_suite, BenchOptions};
use serde_json::json;

use crate::config::{self, Format, ScenarioConfig};
use crate::figures::{figure, FigureId};
use crate::scenarios;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qtherm", version, about = "Quantum heat-engine calculations from scenario files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Run a scenario file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config key, e.g. `--set otto.t_h=2.0`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output file; defaults to `output.path` in the config, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
    },
    /// Write the plot data of one figure into a directory.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[arg(long)]
        out: PathBuf,
        /// Side of the efficiency-map grid.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
    },
    /// Time the expensive kernels and compare against a stored report.
    Bench {
        /// Only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Stored JSON report; a missing file means report-only mode.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Where to write the JSON report; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        reps: usize,
        #[arg(long, default_value_t = 200)]
        fig3_n: usize,
    },
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qtherm: {e}");
            e.exit_code()
        }
    }
}

fn set_threads(n: Option<u32>) -> Result<(), CliError> {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Validation(format!("threads: {e}")))?;
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Run { config, set, out, format, threads } => {
            let cfg = config::load(&config, &set)?;
            set_threads(threads)?;
            let out = out.or_else(|| cfg.output.path.clone());
            let format = format.unwrap_or(cfg.output.format);
            let text = render_scenario(&cfg, format)?;
            emit(out.as_deref(), &text)
        }
        Cmd::Figure { id, out, grid, threads } => {
            set_threads(threads)?;
            let files = figure(id, grid as usize)?;
            std::fs::create_dir_all(&out)?;
            for f in files {
                write_atomic(&out.join(&f.name), &f.csv(id))?;
            }
            Ok(())
        }
        Cmd::Bench { filter, baseline, out, reps, fig3_n } => {
            let opts = BenchOptions { reps, fig3_n, ..BenchOptions::default() };
            let base = match &baseline {
                Some(p) => load_baseline(p)?,
                None => None,
            };
            if baseline.is_some() && base.is_none() {
                eprintln!("qtherm: baseline not found, report-only mode");
            }
            let report = run_suite(filter.as_deref(), &opts, base.as_ref())?;
            for c in &report.cases {
                eprintln!("{:<20} median {:.3e} s  p95 {:.3e} s  ({} reps)", c.name, c.median_s, c.p95_s, c.reps);
            }
            if let Some(k) = report.scaling_exponent {
                eprintln!("expm cost exponent in Hilbert dimension: {k:.2}");
            }
            let mut json = report.to_json();
            json.push('\n');
            emit(out.as_deref(), &json)?;
            let regressed = report.regressions();
            if !regressed.is_empty() {
                let names: Vec<String> = regressed.iter().map(|c| format!("{} ({:.2}x)", c.name, c.ratio)).collect();
                return Err(CliError::Regression(names.join(", ")));
            }
            Ok(())
        }
    }
}

/// The scenario output as text. Validation failures name the parameter table.
pub fn render_scenario(cfg: &ScenarioConfig, format: Format) -> Result<String, CliError> {
    let cmd = cfg.command.as_str();
    let table = scenarios::run(cfg).map_err(|e| match CliError::from(e) {
        CliError::Validation(m) => CliError::Validation(format!("table `{cmd}`: {m}")),
        other => other,
    })?;
    let hash = cfg.hash();
    Ok(match format {
        Format::Csv => table.to_csv(&[format!("qtherm {cmd} config_hash={hash}")]),
        Format::Json => table.to_json(json!({
            "tool": "qtherm",
            "command": cmd,
            "config_hash": hash,
            "config": serde_json::from_str::<serde_json::Value>(&cfg.canonical_json()).expect("canonical json parses"),
        })),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(text.as_bytes())?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

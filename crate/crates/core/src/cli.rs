//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or parameter error, 2 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::engine::{compare_to_reference, Curve, Spectrum, Variant};
use crate::error::{Error, Result};
use crate::halfwidth::critical_pressure;
use crate::linelist::{read_linelist, LineTable};
use crate::scenario::{builtin_scenarios, resolve, LinelistSource, Scenario};
use crate::units::Window;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "narrowline",
    version,
    about = "Line-by-line absorption with high-pressure narrowing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a line list and report diagnostics.
    Validate {
        /// Line-list file (160-character records, CSV, optionally gzipped).
        #[arg(long, value_name = "PATH")]
        linelist: PathBuf,
        /// Only check records inside LO:HI.
        #[arg(long, value_name = "LO:HI")]
        window: Option<Window>,
    },
    /// Compute one spectrum.
    Compute {
        #[command(flatten)]
        run: RunArgs,
        /// Output file; `-` writes to stdout without a sidecar.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Compute one spectrum per broadener pressure and summarize the peaks.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated pressures (atm).
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        pressures: Vec<f64>,
        /// Interpret the pressures as multiples of the critical pressure.
        #[arg(long)]
        relative: bool,
        /// Directory for the per-pressure spectra and the summary.
        #[arg(long, short, value_name = "DIR", default_value = ".")]
        output: PathBuf,
    },
    /// Compare a computed spectrum with a tabulated reference curve.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// CSV with columns `omega, alpha`.
        #[arg(long, value_name = "PATH")]
        reference: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Narrowed)]
        variant: VariantArg,
        /// Write the per-point residuals as CSV.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Inspect builtin scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Debug, Subcommand)]
enum ScenarioAction {
    /// List builtin scenario names.
    List,
    /// Print a scenario (builtin name or file) with overrides applied.
    Dump {
        scenario: String,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, value_enum, default_value_t = DumpFormat::Toml)]
        format: DumpFormat,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Builtin scenario name or scenario file (.toml or .json).
    scenario: String,
    /// Line-list file; replaces the scenario's source.
    #[arg(long, value_name = "PATH")]
    linelist: Option<PathBuf>,
    /// Spectral window LO:HI (cm-1); also sets the grid range.
    #[arg(long, value_name = "LO:HI")]
    window: Option<String>,
    /// Grid spacing (cm-1)
    #[arg(long, value_name = "F")]
    grid_step: Option<String>,
    /// Line cutoff (cm-1).
    #[arg(long, value_name = "F")]
    cutoff: Option<String>,
    /// Worker threads (default: all cores). Does not change the output.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Narrowing regime; `auto` picks it from the pressure
    #[arg(long, value_name = "auto|above-ps|below-ps")]
    regime: Option<String>,
    /// Collisional halfwidth model
    #[arg(long, value_name = "linear|saturating|combined")]
    halfwidth_mode: Option<String>,
    /// Any scenario parameter, e.g. `--set pressure=200`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Toml,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Lorentz,
    Narrowed,
    Effective,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Lorentz => Variant::Lorentz,
            VariantArg::Narrowed => Variant::Narrowed,
            VariantArg::Effective => Variant::Effective,
        }
    }
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// A scenario with every flag and override applied, plus the override list
/// in the order it was applied.
struct Resolved {
    scenario: Scenario,
    overrides: Vec<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<Resolved> {
        let mut scenario = resolve(&self.scenario)?;
        let mut overrides = Vec::new();
        let flags = [
            ("window", &self.window),
            ("grid_step", &self.grid_step),
            ("cutoff", &self.cutoff),
            ("regime", &self.regime),
            ("halfwidth_mode", &self.halfwidth_mode),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                overrides.push(format!("{key}={v}"));
            }
        }
        overrides.extend(self.overrides.iter().cloned());
        scenario.apply_overrides(&overrides)?;
        Ok(Resolved {
            scenario,
            overrides,
        })
    }
}

/// Line table plus what the sidecar records about its origin.
struct LoadedLines {
    table: LineTable,
    provenance: serde_json::Value,
}

fn load_lines(scenario: &Scenario, linelist: Option<&Path>) -> Result<LoadedLines> {
    let table = scenario.load_lines(linelist)?;
    let path = match (linelist, &scenario.linelist) {
        (Some(p), _) => Some(p),
        (None, LinelistSource::File { path }) => Some(path.as_path()),
        _ => None,
    };
    let provenance = match path {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
            json!({
                "path": p.display().to_string(),
                "sha256": hex(&Sha256::digest(&bytes)),
                "lines_in_reach": table.len(),
                "fatal_diagnostics": table.fatal_count(),
                "warnings": table.warning_count(),
            })
        }
        None => json!({ "source": table.source(), "lines_in_reach": table.len() }),
    };
    Ok(LoadedLines { table, provenance })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Run the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { linelist, window } => cmd_validate(&linelist, window, out, err),
        Command::Compute { run, output } => cmd_compute(&run, output.as_deref(), out, err),
        Command::Sweep {
            run,
            pressures,
            relative,
            output,
        } => cmd_sweep(&run, &pressures, relative, &output, out, err),
        Command::Compare {
            run,
            reference,
            variant,
            output,
        } => cmd_compare(&run, &reference, variant.into(), output.as_deref(), out),
        Command::Scenario { action } => match action {
            ScenarioAction::List => {
                for s in builtin_scenarios() {
                    writeln!(out, "{:<20} {}", s.name, s.description)?;
                }
                Ok(EXIT_OK)
            }
            ScenarioAction::Dump {
                scenario,
                overrides,
                format,
            } => {
                let mut s = resolve(&scenario)?;
                s.apply_overrides(&overrides)?;
                let text = match format {
                    DumpFormat::Toml => s.to_toml()?,
                    DumpFormat::Json => s.to_json()?,
                };
                writeln!(out, "{}", text.trim_end())?;
                Ok(EXIT_OK)
            }
        },
    }
}

fn cmd_validate(
    path: &Path,
    window: Option<Window>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let table = read_linelist(path, window)?;
    for d in table.diagnostics() {
        writeln!(err, "{}: {d}", path.display())?;
    }
    let fatal = table.fatal_count();
    writeln!(
        out,
        "{}: {} lines, {} fatal, {} warnings",
        path.display(),
        table.len(),
        fatal,
        table.warning_count()
    )?;
    Ok(if fatal == 0 { EXIT_OK } else { EXIT_INVALID })
}

/// Everything that determines the output, and nothing that does not.
fn sidecar(resolved: &Resolved, lines: &LoadedLines, format: OutputFormat) -> serde_json::Value {
    json!({
        "program": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "scenario": resolved.scenario,
        "overrides": resolved.overrides,
        "linelist": lines.provenance,
        "format": format.extension(),
    })
}

fn sidecar_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "spectrum".into());
    output.with_file_name(format!("{stem}.params.json"))
}

/// One row per grid point: `omega,alpha_lorentz,alpha_narrowed,alpha_effective,gamma_factor`.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut s = String::with_capacity(spectrum.len() * 96);
    s.push_str("omega,alpha_lorentz,alpha_narrowed,alpha_effective,gamma_factor\n");
    for i in 0..spectrum.len() {
        let _ = write!(
            s,
            "{},{:e},{:e},{:e}",
            spectrum.omega(i),
            spectrum.alpha_lorentz[i],
            spectrum.alpha_narrowed[i],
            spectrum.alpha_effective[i]
        );
        match &spectrum.gamma_nearest {
            Some(g) => {
                let _ = writeln!(s, ",{}", g[i]);
            }
            None => s.push_str(",\n"),
        }
    }
    s
}

pub fn spectrum_json(spectrum: &Spectrum) -> Result<String> {
    let omega: Vec<f64> = spectrum.grid.points().collect();
    let value = json!({
        "scenario": spectrum.metadata.scenario,
        "omega": omega,
        "alpha_lorentz": spectrum.alpha_lorentz,
        "alpha_narrowed": spectrum.alpha_narrowed,
        "alpha_effective": spectrum.alpha_effective,
        "gamma_factor": spectrum.gamma_nearest,
    });
    serde_json::to_string(&value).map_err(|e| Error::Format(e.to_string()))
}

fn render(spectrum: &Spectrum, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(spectrum_csv(spectrum)),
        OutputFormat::Json => spectrum_json(spectrum),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_with_sidecar(path: &Path, text: &str, sidecar: &serde_json::Value) -> Result<()> {
    write_file(path, text)?;
    let meta = serde_json::to_string_pretty(sidecar).map_err(|e| Error::Format(e.to_string()))?;
    write_file(&sidecar_path(path), &(meta + "\n"))
}

fn cmd_compute(
    run: &RunArgs,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let resolved = run.resolve()?;
    let lines = load_lines(&resolved.scenario, run.linelist.as_deref())?;
    report_diagnostics(&lines.table, err)?;
    let spectrum = resolved.scenario.compute(&lines.table, run.threads)?;
    let text = render(&spectrum, run.format)?;
    let default_path;
    let path = match output {
        Some(p) if p == Path::new("-") => {
            out.write_all(text.as_bytes())?;
            return Ok(EXIT_OK);
        }
        Some(p) => p,
        None => {
            default_path = PathBuf::from(format!(
                "{}.{}",
                resolved.scenario.name,
                run.format.extension()
            ));
            &default_path
        }
    };
    write_with_sidecar(path, &text, &sidecar(&resolved, &lines, run.format))?;
    writeln!(
        out,
        "{}: {} points, {} lines -> {}",
        resolved.scenario.name,
        spectrum.len(),
        lines.table.len(),
        path.display()
    )?;
    Ok(EXIT_OK)
}

fn report_diagnostics(table: &LineTable, err: &mut dyn Write) -> Result<()> {
    let fatal = table.fatal_count();
    if fatal > 0 || table.warning_count() > 0 {
        writeln!(
            err,
            "{}: {} records skipped, {} warnings (run `validate` for details)",
            table.source(),
            fatal,
            table.warning_count()
        )?;
    }
    Ok(())
}

/// Peak values of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSummary {
    pub omega_peak: f64,
    pub peak_lorentz: f64,
    pub peak_narrowed: f64,
    /// `max α_narrowed / max α_lorentz`.
    pub peak_ratio: f64,
}

pub fn peak_summary(spectrum: &Spectrum) -> PeakSummary {
    let argmax = |a: &[f64]| {
        a.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
    };
    let (_, peak_lorentz) = argmax(&spectrum.alpha_lorentz);
    let (i, peak_narrowed) = argmax(&spectrum.alpha_narrowed);
    PeakSummary {
        omega_peak: spectrum.omega(i),
        peak_lorentz,
        peak_narrowed,
        peak_ratio: if peak_lorentz > 0.0 {
            peak_narrowed / peak_lorentz
        } else {
            1.0
        },
    }
}

/// Critical pressure used to scale relative sweeps: the configured value or
/// the one derived for the strongest line.
fn reference_critical_pressure(scenario: &Scenario, table: &LineTable) -> Result<f64> {
    if let Some(p) = scenario.halfwidth.critical_pressure {
        return Ok(p);
    }
    let strongest = table
        .lines()
        .iter()
        .max_by(|a, b| a.intensity_ref.total_cmp(&b.intensity_ref))
        .ok_or_else(|| Error::config("relative sweep needs at least one line"))?;
    let region = scenario.narrowing.lookup(strongest.position);
    if let Some(p) = region.critical_pressure {
        return Ok(p);
    }
    let mut hw = scenario.halfwidth.clone();
    if let Some(d) = region.delta_omega_rot {
        hw.delta_omega_rot = d;
    }
    let mut broadener = scenario.conditions.broadener.clone();
    if let Some(s) = region.broadener_scale {
        broadener.scale_vs_n2 = s;
    }
    critical_pressure(strongest, &broadener, scenario.conditions.temperature, &hw)
}

fn cmd_sweep(
    run: &RunArgs,
    pressures: &[f64],
    relative: bool,
    dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if let Some(p) = pressures.iter().find(|p| !(**p > 0.0)) {
        return Err(Error::config(format!("sweep pressure {p} is not positive")));
    }
    let base = run.resolve()?;
    let lines = load_lines(&base.scenario, run.linelist.as_deref())?;
    report_diagnostics(&lines.table, err)?;
    let scale = if relative {
        reference_critical_pressure(&base.scenario, &lines.table)?
    } else {
        1.0
    };
    let mut summary =
        String::from("pressure_atm,omega_peak,peak_lorentz,peak_narrowed,peak_ratio\n");
    writeln!(
        out,
        "{:>12} {:>12} {:>14} {:>14} {:>10}",
        "p (atm)", "omega_peak", "peak_lorentz", "peak_narrowed", "ratio"
    )?;
    for &factor in pressures {
        let p = factor * scale;
        let mut resolved = Resolved {
            scenario: base.scenario.clone(),
            overrides: base.overrides.clone(),
        };
        let set = format!("pressure={p}");
        resolved.scenario.apply_overrides(&[&set])?;
        resolved.overrides.push(set);
        let spectrum = resolved.scenario.compute(&lines.table, run.threads)?;
        let text = render(&spectrum, run.format)?;
        let path = dir.join(format!(
            "{}_p{p}.{}",
            resolved.scenario.name,
            run.format.extension()
        ));
        write_with_sidecar(&path, &text, &sidecar(&resolved, &lines, run.format))?;
        let s = peak_summary(&spectrum);
        let _ = writeln!(
            summary,
            "{p},{},{:e},{:e},{}",
            s.omega_peak, s.peak_lorentz, s.peak_narrowed, s.peak_ratio
        );
        writeln!(
            out,
            "{p:>12.4} {:>12.4} {:>14.6e} {:>14.6e} {:>10.4}",
            s.omega_peak, s.peak_lorentz, s.peak_narrowed, s.peak_ratio
        )?;
    }
    write_file(
        &dir.join(format!("{}_sweep.csv", base.scenario.name)),
        &summary,
    )?;
    Ok(EXIT_OK)
}

fn cmd_compare(
    run: &RunArgs,
    reference: &Path,
    variant: Variant,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let resolved = run.resolve()?;
    let lines = load_lines(&resolved.scenario, run.linelist.as_deref())?;
    let spectrum = resolved.scenario.compute(&lines.table, run.threads)?;
    let text = fs::read_to_string(reference).map_err(|e| Error::io(reference, e))?;
    let reference_curve = Curve::from_csv(&text)?;
    let report = compare_to_reference(&spectrum.curve(variant), &reference_curve)?;
    writeln!(
        out,
        "{} points compared: max |rel dev| = {:e}, mean |rel dev| = {:e}",
        report.omega.len(),
        report.max_abs_rel_deviation,
        report.mean_abs_rel_deviation
    )?;
    if let Some(path) = output {
        let mut csv = String::from("omega,ratio,difference\n");
        for i in 0..report.omega.len() {
            let _ = writeln!(
                csv,
                "{},{},{:e}",
                report.omega[i], report.ratio[i], report.difference[i]
            );
        }
        write_file(path, &csv)?;
    }
    Ok(EXIT_OK)
}

//! Command-line front end: presets and config files, scans written as CSV,
//! critical-point detection, crossing search and self-verification.

mod config;
mod output;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::chains::{xxz_qcp_delta1, xxz_qcp_delta2, CorrelatorProvider, ModelSpec, ThermalPoint};
use crate::detector::{
    detect_qcp, find_crossings_with_provider, gamma_transition_check, scan, ModelFamily,
};
use crate::error::{Error, Result};

pub use config::{
    DetectSection, ModelKind, ModelSection, OutputSection, RunConfig, ScanSection, PRESETS,
};
pub use output::{crossings_csv, extrema_csv, num, scan_csv, SCAN_HEADER};
pub use verify::{run_verify, CheckResult, ClosedForms, VerifyLevel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "teleqcp", version, about = "Critical-point detection from thermal teleportation efficiencies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan a parameter and write correlators and efficiencies as CSV.
    Scan(RunArgs),
    /// Locate derivative extrema per temperature and extrapolate to kT = 0.
    Detect(RunArgs),
    /// Find where the set-resolved efficiencies cross and where z^3 - z*zz changes sign.
    Crossings(RunArgs),
    /// Print the correlators at a single parameter point.
    Correlators(RunArgs),
    /// Run the built-in consistency checks.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        level: VerifyLevel,
    },
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got '{s}'"))?;
    let a = a.trim().parse::<f64>().map_err(|e| format!("'{a}': {e}"))?;
    let b = b.trim().parse::<f64>().map_err(|e| format!("'{b}': {e}"))?;
    Ok((a, b))
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Built-in scenario.
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// XXZ longitudinal field.
    #[arg(long)]
    pub h: Option<f64>,
    /// XXZ anisotropy (single-point commands).
    #[arg(long)]
    pub delta: Option<f64>,
    /// XY anisotropy.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// XY exchange strength relative to the transverse field.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Scan the XXZ anisotropy over [A, B].
    #[arg(long, value_parser = parse_range, value_name = "A:B")]
    pub delta_range: Option<(f64, f64)>,
    /// Scan lambda over [A, B].
    #[arg(long, value_parser = parse_range, value_name = "A:B")]
    pub lambda_range: Option<(f64, f64)>,
    /// Scan gamma over [A, B].
    #[arg(long, value_parser = parse_range, value_name = "A:B")]
    pub gamma_range: Option<(f64, f64)>,
    /// Grid spacing (default 0.01).
    #[arg(long)]
    pub step: Option<f64>,
    /// Temperature; repeat for several.
    #[arg(long = "kt")]
    pub kt: Vec<f64>,
    /// `ed:<L>` or `ff`.
    #[arg(long)]
    pub provider: Option<String>,
    /// Detection column, e.g. Dmin or Fmax.
    #[arg(long)]
    pub observable: Option<String>,
    /// Derivative order, 1 or 2.
    #[arg(long)]
    pub order: Option<usize>,
    /// Parameter window searched for the extremum.
    #[arg(long, value_parser = parse_range, value_name = "A:B")]
    pub window: Option<(f64, f64)>,
    /// linear or quadratic.
    #[arg(long)]
    pub fit: Option<String>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Preset, then config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.preset {
            Some(p) => RunConfig::preset(p)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.config {
            cfg = cfg.merge(RunConfig::load(path)?);
        }
        let ranges = [
            (self.delta_range, crate::detector::ScanAxis::Delta),
            (self.lambda_range, crate::detector::ScanAxis::Lambda),
            (self.gamma_range, crate::detector::ScanAxis::Gamma),
        ];
        let given: Vec<_> = ranges.iter().filter(|(r, _)| r.is_some()).collect();
        if given.len() > 1 {
            return Err(Error::Config("give at most one of the range flags".into()));
        }
        let (axis, start, end) = match given.first() {
            Some((Some((a, b)), axis)) => (Some(*axis), Some(*a), Some(*b)),
            _ => (None, None, None),
        };
        let fit = self.fit.as_deref().map(str::parse).transpose()?;
        let flags = RunConfig {
            model: ModelSection {
                kind: self.model,
                h: self.h,
                delta: self.delta,
                lambda: self.lambda,
                gamma: self.gamma,
            },
            scan: ScanSection {
                axis,
                start,
                end,
                step: self.step,
                kt: self.kt.clone(),
                provider: self.provider.clone(),
            },
            detect: DetectSection {
                observable: self.observable.clone(),
                order: self.order,
                window: self.window.map(|(a, b)| [a, b]),
                fit,
            },
            output: OutputSection { path: self.out.clone() },
        };
        Ok(cfg.merge(flags))
    }
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Scan(a) => a.resolve().and_then(|c| cmd_scan(&c)),
        Command::Detect(a) => a.resolve().and_then(|c| cmd_detect(&c)),
        Command::Crossings(a) => a.resolve().and_then(|c| cmd_crossings(&c)),
        Command::Correlators(a) => a.resolve().and_then(|c| cmd_correlators(&c)),
        Command::Verify { level } => return cmd_verify(level, &ClosedForms::default()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    }
}

/// Scans every configured temperature and writes one CSV.
pub fn cmd_scan(cfg: &RunConfig) -> Result<()> {
    cfg.validate_scan()?;
    let provider = CorrelatorProvider::new();
    let (family, grid, strategy) = (cfg.family()?, cfg.grid()?, cfg.strategy()?);
    let series = cfg
        .temperatures()?
        .into_iter()
        .map(|kt| scan(family, grid, kt, strategy, &provider))
        .collect::<Result<Vec<_>>>()?;
    for s in &series {
        for (i, msg) in &s.failures {
            eprintln!("warning: kT={} point {}: {msg}", s.kt, s.grid.value(*i));
        }
    }
    output::emit(cfg.output.path.as_deref(), &output::scan_csv(&series)?)
}

fn summary_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary");
    PathBuf::from(s)
}

/// Extremum per temperature plus zero-temperature extrapolation. Anisotropy
/// scans report the location of the efficiency extrema instead.
pub fn cmd_detect(cfg: &RunConfig) -> Result<()> {
    cfg.validate_scan()?;
    let provider = CorrelatorProvider::new();
    let (family, grid, strategy) = (cfg.family()?, cfg.grid()?, cfg.strategy()?);
    let kts = cfg.temperatures()?;
    let (csv, mut summary) = if let ModelFamily::XyGamma { lambda } = family {
        let rows = gamma_transition_check(lambda, &kts, grid, strategy, &provider)?;
        let mut s = String::new();
        for r in &rows {
            s += &format!(
                "kT={}: Dmin maximal at gamma={:.4}, Fmax minimal at gamma={:.4}\n",
                r.kt, r.dmin_argmax, r.fmax_argmin
            );
        }
        (output::gamma_transition_csv(&rows)?, s)
    } else {
        let positive = kts.iter().filter(|&&t| t > 0.0).count();
        if positive < 3 {
            return Err(Error::Config(format!(
                "detection needs at least 3 temperatures above zero, got {positive}"
            )));
        }
        let observable = cfg.observable()?;
        let order = cfg.order()?;
        let d = detect_qcp(
            family,
            grid,
            &kts,
            strategy,
            observable,
            order,
            cfg.window()?,
            cfg.fit(),
            &provider,
        )?;
        let mut s = String::new();
        for e in &d.extrema {
            s += &format!(
                "kT={}: |d^{order} {observable}| maximal at {:.4} +- {:.2}{}\n",
                e.kt,
                e.location,
                e.uncertainty,
                if e.at_edge { " (at edge, unreliable)" } else { "" }
            );
        }
        s += &output::qcp_summary(&d.estimate, &format!("{} critical point", family.axis()));
        (output::extrema_csv(&d.extrema)?, s)
    };
    if let ModelFamily::XxzDelta { h } = family {
        summary += &format!(
            "exact: delta1 = {:.6}, delta2 = {:.6}\n",
            xxz_qcp_delta1(h)?,
            xxz_qcp_delta2(h)?
        );
    }
    match cfg.output.path.as_deref() {
        Some(p) => {
            output::emit(Some(p), &csv)?;
            std::fs::write(summary_path(p), &summary)?;
            print!("{summary}");
        }
        None => {
            output::emit(None, &csv)?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

pub fn cmd_crossings(cfg: &RunConfig) -> Result<()> {
    cfg.validate_scan()?;
    let provider = CorrelatorProvider::new();
    let (family, grid, strategy) = (cfg.family()?, cfg.grid()?, cfg.strategy()?);
    let mut all = Vec::new();
    for kt in cfg.temperatures()? {
        let s = scan(family, grid, kt, strategy, &provider)?;
        all.extend(find_crossings_with_provider(&s, &provider)?);
    }
    output::emit(cfg.output.path.as_deref(), &output::crossings_csv(&all)?)
}

pub fn cmd_correlators(cfg: &RunConfig) -> Result<()> {
    let m = &cfg.model;
    let need = |v: Option<f64>, what: &str| {
        v.ok_or_else(|| Error::Config(format!("missing {what} for a single-point evaluation")))
    };
    let model = match m.kind.ok_or_else(|| Error::Config("no model given".into()))? {
        ModelKind::Xxz => ModelSpec::xxz(need(m.delta, "--delta")?, need(m.h, "--h")?)?,
        ModelKind::Xy => ModelSpec::xy(need(m.lambda, "--lambda")?, need(m.gamma, "--gamma")?)?,
    };
    let strategy = cfg.strategy()?;
    let provider = CorrelatorProvider::new();
    let rows = cfg
        .temperatures()?
        .into_iter()
        .map(|kt| Ok((kt, provider.correlators(&ThermalPoint::new(model, kt)?, strategy)?)))
        .collect::<Result<Vec<_>>>()?;
    output::emit(cfg.output.path.as_deref(), &output::correlators_csv(&rows)?)
}

/// Prints one line per check; exit code 3 if any fails.
pub fn cmd_verify(level: VerifyLevel, forms: &ClosedForms) -> i32 {
    let results = run_verify(level, forms);
    let mut ok = true;
    for r in &results {
        println!("{}", r.line());
        ok &= r.passed;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

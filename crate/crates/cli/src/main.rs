//! `catenary`: solve, classify, sweep, plot and check extremals of the
//! powered distance-to-circle energy.

mod config;
mod error;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catenary_core::classify::{classify, ClassificationReport, ClassifyConfig, Regime};
use catenary_core::dynamics::{integrate, Trajectory};
use catenary_core::io::{cartesian_svg, phase_svg, trajectory_rows, write_csv, Bounds, ReportJson};
use catenary_core::model::to_cartesian;
use catenary_core::suite::{self, Criterion};
use catenary_core::PowerParams;
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;

use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "catenary", version, about = "Extremals of the energy of |r - 1|^alpha weighted length")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one or more initial radii and write trajectory CSV.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Also write a Cartesian plot of all curves.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also write a phase portrait of all curves.
        #[arg(long)]
        phase_svg: Option<PathBuf>,
    },
    /// Classify each initial radius and write JSON reports.
    Classify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify every (alpha, r0) pair of a grid in parallel.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Phase portrait `(r, r')` for one alpha.
    Phase {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the invariant suite; exits nonzero if any criterion fails.
    Check {
        /// `all`, or a comma list of criterion names or numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Also write the results as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// JSON file with keys mirroring these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exponent; repeat or comma-separate for sweeps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Initial radius; repeat or comma-separate for lists.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    r0: Option<Vec<f64>>,
    /// `start:stop:count` or `log:start:stop:count`.
    #[arg(long)]
    r0_grid: Option<String>,
    #[arg(long)]
    span: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Distance to the unit circle at which integration stops.
    #[arg(long)]
    eps_unit: Option<f64>,
    /// Radius below which integration stops.
    #[arg(long)]
    eps_origin: Option<f64>,
    /// Slope at which integration reports blow-up.
    #[arg(long)]
    v_max: Option<f64>,
    #[arg(long)]
    max_samples: Option<usize>,
    /// Integrate from the middle of the domain in both directions.
    #[arg(long)]
    two_sided: bool,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// solve: csv | svg; sweep: json | table.
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            alpha: self.alpha,
            r0: self.r0,
            r0_grid: self.r0_grid,
            span: self.span,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            eps_unit: self.eps_unit,
            eps_origin: self.eps_origin,
            v_max: self.v_max,
            max_samples: self.max_samples,
            two_sided: self.two_sided.then_some(true),
            out: self.out,
            format: self.format,
        };
        Ok(file.overridden_by(flags))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("CATENARY_LOG", "warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve { run, svg, phase_svg } => cmd_solve(run.resolve()?, svg, phase_svg),
        Command::Classify { run } => cmd_classify(run.resolve()?),
        Command::Sweep { run } => cmd_sweep(run.resolve()?),
        Command::Phase { run } => cmd_phase(run.resolve()?),
        Command::Check { suite, out } => cmd_check(&suite, out.as_deref()),
    }
}

fn single_alpha(cfg: &RunConfig) -> Result<PowerParams, CliError> {
    match cfg.alphas()?.as_slice() {
        [a] => Ok(PowerParams::new(*a)?),
        many => Err(CliError::Usage(format!("this command takes one alpha, got {}", many.len()))),
    }
}

fn cmd_solve(cfg: RunConfig, svg: Option<PathBuf>, phase: Option<PathBuf>) -> Result<(), CliError> {
    let params = single_alpha(&cfg)?;
    let solver = cfg.solver()?;
    let r0s = cfg.r0_values()?;
    let format = cfg.format.as_deref().unwrap_or("csv");
    if !matches!(format, "csv" | "svg") {
        return Err(CliError::Usage(format!("solve writes csv or svg, not '{format}'")));
    }
    let trajs = r0s
        .par_iter()
        .map(|&r0| {
            let t = integrate(&params, r0, &solver)?;
            info!(
                "[alpha={} r0={r0}] stop {} at s = {:.12}, {} samples",
                params.alpha(),
                t.stop_reason(),
                t.reach(),
                t.samples().len()
            );
            Ok(t)
        })
        .collect::<Result<Vec<Trajectory>, CliError>>()?;
    let title = format!("alpha = {}", params.alpha());
    if format == "svg" {
        output::emit(cfg.out.as_deref(), cartesian(&trajs, &title).as_bytes())?;
    } else {
        match (trajs.as_slice(), cfg.out.as_deref()) {
            ([t], out) => output::emit(out, &csv_bytes(t)?)?,
            (_, None) => return Err(CliError::Usage("several r0 values need --out".into())),
            (many, Some(out)) => {
                for t in many {
                    output::write_atomic(&numbered(out, t.r0()), &csv_bytes(t)?)?;
                }
            }
        }
    }
    if let Some(p) = svg {
        output::write_atomic(&p, cartesian(&trajs, &title).as_bytes())?;
    }
    if let Some(p) = phase {
        output::write_atomic(&p, phase_svg(&trajs, phase_bounds(&trajs), &title).as_bytes())?;
    }
    Ok(())
}

fn csv_bytes(t: &Trajectory) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, &trajectory_rows(t)?)?;
    Ok(buf)
}

fn cartesian(trajs: &[Trajectory], title: &str) -> String {
    let curves: Vec<Vec<(f64, f64)>> = trajs.iter().map(|t| to_cartesian(&t.mirrored())).collect();
    cartesian_svg(&curves, 4.0, title)
}

/// `dir/stem_r0=<r0>.ext` for one of several outputs.
fn numbered(out: &Path, r0: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "trajectory".into());
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}_r0={r0}.{ext}"))
}

fn phase_bounds(trajs: &[Trajectory]) -> Bounds {
    let x_max = trajs.iter().map(|t| t.r0()).fold(2.0_f64, f64::max).min(6.0) * 1.2;
    Bounds { x_min: 0.0, x_max, y_min: -0.5 * x_max, y_max: 0.5 * x_max }
}

fn classify_all(pairs: &[(f64, f64)], cfg: &ClassifyConfig) -> Result<Vec<ClassificationReport>, CliError> {
    pairs
        .par_iter()
        .map(|&(a, r0)| {
            let rep = classify(&PowerParams::new(a)?, r0, cfg)?;
            info!("[alpha={a} r0={r0}] {}", rep.regime);
            for n in &rep.notes {
                info!("[alpha={a} r0={r0}] {n}");
            }
            Ok(rep)
        })
        .collect()
}

fn unresolved(reports: &[ClassificationReport]) -> Result<(), CliError> {
    let bad: Vec<String> =
        reports.iter().filter(|r| r.regime == Regime::Unresolved).map(|r| format!("({}, {})", r.params.alpha(), r.r0)).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("unresolved: {}", bad.join(", "))))
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn cmd_classify(cfg: RunConfig) -> Result<(), CliError> {
    let params = single_alpha(&cfg)?;
    let ccfg = ClassifyConfig { solver: cfg.solver()?, ..ClassifyConfig::default() };
    let pairs: Vec<(f64, f64)> = cfg.r0_values()?.into_iter().map(|r0| (params.alpha(), r0)).collect();
    let reports = classify_all(&pairs, &ccfg)?;
    let docs: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
    let bytes = if let [one] = docs.as_slice() { json(one)? } else { json(&docs)? };
    output::emit(cfg.out.as_deref(), &bytes)?;
    unresolved(&reports)
}

fn cmd_sweep(cfg: RunConfig) -> Result<(), CliError> {
    let ccfg = ClassifyConfig { solver: cfg.solver()?, ..ClassifyConfig::default() };
    let format = cfg.format.as_deref().unwrap_or("json");
    if !matches!(format, "json" | "table") {
        return Err(CliError::Usage(format!("sweep writes json or table, not '{format}'")));
    }
    let r0s = cfg.r0_values()?;
    let mut pairs = Vec::new();
    for a in cfg.alphas()? {
        PowerParams::new(a)?;
        for &r0 in &r0s {
            if r0 > 0.0 && r0 != 1.0 {
                pairs.push((a, r0));
            } else {
                warn!("[alpha={a} r0={r0}] skipped: r0 must be positive and differ from 1");
            }
        }
    }
    let reports = classify_all(&pairs, &ccfg)?;
    let table = summary_table(&reports);
    if format == "table" {
        output::emit(cfg.out.as_deref(), table.as_bytes())?;
    } else {
        let docs: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
        output::emit(cfg.out.as_deref(), &json(&docs)?)?;
        if cfg.out.is_some() {
            print!("{table}");
        } else {
            eprint!("{table}");
        }
    }
    unresolved(&reports)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

fn summary_table(reports: &[ClassificationReport]) -> String {
    let mut s = format!(
        "{:>8} {:>10} {:<22} {:>10} {:>10} {:>10} {:>10}\n",
        "alpha", "r0", "regime", "period", "s1", "orth", "drift"
    );
    for r in reports {
        s.push_str(&format!(
            "{:>8} {:>10} {:<22} {:>10} {:>10} {:>10} {:>10.2e}\n",
            r.params.alpha(),
            r.r0,
            r.regime.as_str(),
            opt(r.period),
            opt(r.blowup_angle),
            r.orthogonality_defect.map_or_else(|| "-".to_string(), |x| format!("{x:.2e}")),
            r.conservation_drift
        ));
    }
    s
}

fn cmd_phase(cfg: RunConfig) -> Result<(), CliError> {
    let params = single_alpha(&cfg)?;
    let solver = cfg.solver()?;
    let seeds = if cfg.r0.is_some() || cfg.r0_grid.is_some() {
        cfg.r0_values()?
    } else {
        vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0]
    };
    let trajs = seeds
        .par_iter()
        .filter(|&&r0| r0 > 0.0 && r0 != 1.0)
        .map(|&r0| Ok(integrate(&params, r0, &solver)?))
        .collect::<Result<Vec<Trajectory>, CliError>>()?;
    let x_max = seeds.iter().copied().fold(2.0_f64, f64::max) * 1.1;
    let bounds = Bounds { x_min: 0.0, x_max, y_min: -0.75 * x_max, y_max: 0.75 * x_max };
    let svg = phase_svg(&trajs, bounds, &format!("phase portrait, alpha = {}", params.alpha()));
    output::emit(cfg.out.as_deref(), svg.as_bytes())
}

fn cmd_check(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let criteria =
        Criterion::parse_list(text).ok_or_else(|| CliError::Usage(format!("unknown suite '{text}'")))?;
    let results = suite::run(&criteria);
    let mut stdout = std::io::stdout().lock();
    for r in &results {
        writeln!(stdout, "{r}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(stdout, "{} of {} criteria passed", results.len() - failed, results.len())
        .map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(p) = out {
        output::write_atomic(p, &json(&results)?)?;
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} criteria failed")));
    }
    Ok(())
}

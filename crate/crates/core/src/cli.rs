//! `chainratio` command-line front end.
//!
//! Every command writes a [`RunManifest`] (next to `--out` as
//! `<out>.manifest.json`, otherwise to stderr) carrying the full argument
//! vector, so `chainratio replay <manifest>` reruns it exactly.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 data error,
//! 3 numeric guard (enumeration too large, rejection ceiling).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::design::DesignSpec;
use crate::error::{Error, Result};
use crate::estimators::EstimatorId;
use crate::mse::{analytic_table, analytic_table_for};
use crate::population::{
    consistency_warnings, load_population, load_summary, summarize, PopulationSummary,
};
use crate::simulate::{
    compare, enumerate_exact, generate_population, run_monte_carlo, EnumConfig, GenSpec,
    RejectionPolicy, SimConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "chainratio",
    version,
    about = "Chain-ratio estimators for two-phase sampling"
)]
pub struct Cli {
    /// Seed for every random stream (u64).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Abort the run.
    Error,
    /// Drop the sample for that estimator and count it.
    Skip,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Population size N (defaults to the size of the input).
    #[arg(long = "N")]
    pub n_population: Option<usize>,
    /// First-phase sample size n'.
    #[arg(long = "nprime")]
    pub n_first: usize,
    /// Second-phase sample size n.
    #[arg(long = "n")]
    pub n_second: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute population parameters from a `y,x,z` CSV and write a summary file.
    Summarize { population: PathBuf },
    /// Analytic MSE and PRE table for a summary file (default: bundled Anderson summary).
    Evaluate {
        summary: Option<PathBuf>,
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Monte Carlo (or, with --exact, full enumeration) against the analytic table.
    Simulate {
        /// Population CSV with header `y,x,z`.
        population: PathBuf,
        #[command(flatten)]
        design: DesignArgs,
        /// Monte Carlo replications.
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        /// Enumerate every two-phase sample instead of replicating.
        #[arg(long)]
        exact: bool,
        /// Comma-separated estimator names (ybar, ratio, rd, t1..t7, tstar2..tstar7).
        #[arg(long, value_delimiter = ',')]
        estimators: Option<Vec<String>>,
        /// Relative deviation above which a comparison row is flagged.
        #[arg(long, default_value_t = 0.10)]
        tolerance: f64,
        /// What to do with a sample on which an estimator is undefined.
        #[arg(long, value_enum, default_value_t = Policy::Skip)]
        policy: Policy,
        /// Worker threads (results do not depend on this).
        #[arg(long)]
        threads: Option<usize>,
        /// Enumeration guard on C(N,n')·C(n',n).
        #[arg(long, default_value_t = 10_000_000)]
        max_outcomes: u128,
    },
    /// Generate a synthetic population with target means, CVs and correlations.
    Genpop {
        #[arg(long = "N")]
        n_population: usize,
        #[arg(long, default_value_t = 183.84)]
        mean_y: f64,
        #[arg(long, default_value_t = 185.72)]
        mean_x: f64,
        #[arg(long, default_value_t = 151.12)]
        mean_z: f64,
        #[arg(long, default_value_t = 0.0546)]
        cv_y: f64,
        #[arg(long, default_value_t = 0.0526)]
        cv_x: f64,
        #[arg(long, default_value_t = 0.0488)]
        cv_z: f64,
        #[arg(long, default_value_t = 0.7108)]
        rho_xy: f64,
        #[arg(long, default_value_t = 0.7346)]
        rho_xz: f64,
        #[arg(long, default_value_t = 0.6932)]
        rho_yz: f64,
        /// Round generated values to integers.
        #[arg(long)]
        round: bool,
    },
    /// Rerun the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<String>,
    pub design: Option<DesignSpec>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub timestamp: String,
}

struct Output {
    primary: String,
    sidecars: Vec<(String, String)>,
    report: String,
}

fn read_file(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn design_from(args: &DesignArgs, default_n: usize) -> Result<DesignSpec> {
    DesignSpec::new(
        args.n_population.unwrap_or(default_n),
        args.n_first,
        args.n_second,
    )
}

fn parse_estimators(names: &Option<Vec<String>>) -> Result<Vec<EstimatorId>> {
    match names {
        None => Ok(EstimatorId::default_simulation_set()),
        Some(list) => list.iter().map(|s| s.parse()).collect(),
    }
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<(Output, RunManifest)> {
    let mut manifest = RunManifest {
        command: String::new(),
        args: Vec::new(),
        inputs: Vec::new(),
        design: None,
        seed: cli.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
    };
    let output = match &cli.command {
        Command::Summarize { population } => {
            manifest.command = "summarize".into();
            manifest.inputs.push(population.display().to_string());
            let label = population
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("population");
            let pop = load_population(read_file(population)?, label)?;
            let s = summarize(&pop)?;
            let kv = s.to_kv_string(Some(label));
            let report = format!(
                "{label}: N = {}; mean_y = {:.4}, mean_x = {:.4}, mean_z = {:.4}\n\
                 rho_xy = {:.4}, rho_xz = {:.4}, rho_yz = {:.4}; sigma_z = {:.4}, beta1_z = {:.4}, beta2_z = {:.4}\n",
                s.n_population, s.mean_y, s.mean_x, s.mean_z, s.rho_xy, s.rho_xz, s.rho_yz,
                s.sigma_z, s.beta1_z, s.beta2_z
            );
            let primary = match cli.format {
                Format::Text => kv,
                Format::Json => serde_json::to_string_pretty(&s)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.serialize(&s)?;
                    String::from_utf8(
                        w.into_inner()
                            .map_err(|e| Error::Serialize(e.to_string()))?,
                    )
                    .expect("utf-8")
                }
            };
            Output {
                primary,
                sidecars: vec![],
                report,
            }
        }
        Command::Evaluate { summary, design } => {
            manifest.command = "evaluate".into();
            let s = match summary {
                Some(path) => {
                    manifest.inputs.push(path.display().to_string());
                    load_summary(read_file(path)?)?
                }
                None => {
                    manifest.inputs.push("<bundled:anderson>".into());
                    PopulationSummary::anderson()
                }
            };
            for w in consistency_warnings(&s) {
                let _ = writeln!(err, "warning: {w}");
            }
            let d = design_from(design, s.n_population)?;
            manifest.design = Some(d);
            let table = analytic_table(&s, &d)?;
            let primary = match cli.format {
                Format::Text => table.to_text(),
                Format::Csv => table.to_csv()?,
                Format::Json => table.to_json()?,
            };
            Output {
                primary,
                sidecars: vec![],
                report: String::new(),
            }
        }
        Command::Simulate {
            population,
            design,
            reps,
            exact,
            estimators,
            tolerance,
            policy,
            threads,
            max_outcomes,
        } => {
            manifest.command = "simulate".into();
            manifest.inputs.push(population.display().to_string());
            let label = population
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("population");
            let pop = load_population(read_file(population)?, label)?;
            let d = design_from(design, pop.len())?;
            manifest.design = Some(d);
            let ids = parse_estimators(estimators)?;
            let policy = match policy {
                Policy::Error => RejectionPolicy::Error,
                Policy::Skip => RejectionPolicy::SkipAndCount,
            };
            let s = summarize(&pop)?;
            let analytic = analytic_table_for(&s, &d, &ids)?;
            if *exact {
                let cfg = EnumConfig {
                    max_outcomes: *max_outcomes,
                    policy,
                    ..EnumConfig::default()
                };
                let _ = writeln!(
                    err,
                    "enumerating {} outcomes",
                    crate::simulate::outcome_count(&d)
                );
                let result = enumerate_exact(&pop, &d, &ids, &cfg)?;
                let report = compare(&analytic, &result, *tolerance)?;
                render_pair(
                    cli.format,
                    &result,
                    &report,
                    result.to_csv()?,
                    exact_text(&result),
                )?
            } else {
                let seed = cli.seed.unwrap_or(0);
                manifest.seed = Some(seed);
                let cfg = SimConfig {
                    replications: *reps,
                    seed,
                    rejection_policy: policy,
                };
                let _ = writeln!(err, "simulating {reps} replications (seed {seed})");
                let run = || run_monte_carlo(&pop, &d, &ids, &cfg);
                let result = match threads {
                    Some(t) => rayon::ThreadPoolBuilder::new()
                        .num_threads(*t)
                        .build()
                        .map_err(|e| Error::InvalidConfig(e.to_string()))?
                        .install(run)?,
                    None => run()?,
                };
                let _ = writeln!(err, "done: {} replications", result.replications_used);
                let report = compare(&analytic, &result, *tolerance)?;
                render_pair(
                    cli.format,
                    &result,
                    &report,
                    result.to_csv()?,
                    sim_text(&result),
                )?
            }
        }
        Command::Genpop {
            n_population,
            mean_y,
            mean_x,
            mean_z,
            cv_y,
            cv_x,
            cv_z,
            rho_xy,
            rho_xz,
            rho_yz,
            round,
        } => {
            manifest.command = "genpop".into();
            let seed = cli.seed.unwrap_or(0);
            manifest.seed = Some(seed);
            let spec = GenSpec {
                n_population: *n_population,
                target_means: [*mean_y, *mean_x, *mean_z],
                target_cvs: [*cv_y, *cv_x, *cv_z],
                target_rhos: [*rho_xy, *rho_xz, *rho_yz],
                seed,
                round_to_integers: *round,
            };
            let g = generate_population(&spec)?;
            let mut csv_bytes = Vec::new();
            g.population.write_csv(&mut csv_bytes)?;
            let summary = g.realized.to_kv_string(Some(g.population.label()));
            let report = format!(
                "realized: rho_xy = {:.4}, rho_xz = {:.4}, rho_yz = {:.4}\n",
                g.realized.rho_xy, g.realized.rho_xz, g.realized.rho_yz
            );
            Output {
                primary: String::from_utf8(csv_bytes).expect("utf-8"),
                sidecars: vec![("summary".into(), summary)],
                report,
            }
        }
        Command::Replay { .. } => unreachable!("handled by run"),
    };
    Ok((output, manifest))
}

fn sim_text(r: &crate::simulate::SimResult) -> String {
    use std::fmt::Write as _;
    let mut out = format!(
        "replications = {}, seed = {}, Var(ybar) = {:.4}\n{:<10} {:>14} {:>12} {:>14} {:>12} {:>10}\n",
        r.replications_used, r.seed, r.base_empirical_var, "estimator", "mean", "bias", "mse", "pre", "rejected"
    );
    for rec in &r.records {
        let _ = writeln!(
            out,
            "{:<10} {:>14.4} {:>12.4} {:>14.4} {:>12} {:>10}",
            rec.estimator,
            rec.empirical_mean,
            rec.empirical_bias,
            rec.empirical_mse,
            rec.empirical_pre
                .map_or("n/a".into(), |p| format!("{p:.4}")),
            rec.rejected_count
        );
    }
    out
}

fn exact_text(r: &crate::simulate::ExactResult) -> String {
    use std::fmt::Write as _;
    let mut out = format!(
        "outcomes = {}, Var(ybar) = {:.4}\n{:<10} {:>14} {:>12} {:>14} {:>12} {:>10}\n",
        r.outcome_count, r.base_exact_var, "estimator", "mean", "bias", "mse", "pre", "excluded"
    );
    for rec in &r.records {
        let _ = writeln!(
            out,
            "{:<10} {:>14.4} {:>12.4} {:>14.4} {:>12} {:>10}",
            rec.estimator,
            rec.exact_mean,
            rec.exact_bias,
            rec.exact_mse,
            rec.exact_pre.map_or("n/a".into(), |p| format!("{p:.4}")),
            rec.excluded_count
        );
    }
    out
}

fn render_pair<T: Serialize>(
    format: Format,
    result: &T,
    report: &crate::simulate::ComparisonReport,
    result_csv: String,
    result_text: String,
) -> Result<Output> {
    #[derive(Serialize)]
    struct Pair<'a, T> {
        result: &'a T,
        comparison: &'a crate::simulate::ComparisonReport,
    }
    Ok(match format {
        Format::Json => Output {
            primary: serde_json::to_string_pretty(&Pair {
                result,
                comparison: report,
            })?,
            sidecars: vec![],
            report: String::new(),
        },
        Format::Csv => Output {
            primary: report.to_csv()?,
            sidecars: vec![("result.csv".into(), result_csv)],
            report: String::new(),
        },
        Format::Text => Output {
            primary: format!("{result_text}\n{}", report.to_text()),
            sidecars: vec![],
            report: String::new(),
        },
    })
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn run_parsed(
    cli: &Cli,
    args: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    if let Command::Replay { manifest } = &cli.command {
        let m: RunManifest = serde_json::from_reader(read_file(manifest)?)?;
        let replayed =
            Cli::try_parse_from(&m.args).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if matches!(replayed.command, Command::Replay { .. }) {
            return Err(Error::InvalidConfig("manifest records a replay".into()));
        }
        return run_parsed(&replayed, &m.args, stdout, stderr);
    }

    let (output, mut manifest) = execute(cli, stderr)?;
    manifest.args = args.to_vec();
    let manifest_json = serde_json::to_string_pretty(&manifest)?;
    match &cli.out {
        Some(out) => {
            fs::write(out, &output.primary)?;
            for (suffix, body) in &output.sidecars {
                fs::write(sidecar_path(out, suffix), body)?;
            }
            fs::write(sidecar_path(out, "manifest.json"), manifest_json)?;
        }
        None => {
            stdout.write_all(output.primary.as_bytes())?;
            for (suffix, body) in &output.sidecars {
                let _ = writeln!(stderr, "--- {suffix} ---\n{body}");
            }
            let _ = writeln!(stderr, "--- manifest ---\n{manifest_json}");
        }
    }
    stderr.write_all(output.report.as_bytes())?;
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match run_parsed(&cli, &args, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

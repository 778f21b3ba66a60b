//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ris_linklab::analytic::SepIntegrator;
use ris_linklab::montecarlo::{DEFAULT_MAX_TRIALS, DEFAULT_MIN_ERRORS};
use ris_linklab::quadrature::DEFAULT_NODES;
use ris_linklab::schemes::Scheme;

use crate::compare::compare;
use crate::error::{CliError, Result};
use crate::presets::{run_figure_preset, PresetOptions};
use crate::runs::{analytic_rows, simulated_rows, Series, SimBudget, SnrGrid};
use crate::table::write_csv;

#[derive(Debug, Parser)]
#[command(
    name = "ris-linklab",
    version,
    about = "Error-probability curves for large intelligent surface links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact error probability and its upper bound.
    Analytic(AnalyticArgs),
    /// Monte Carlo BER/SER.
    Simulate(SimulateArgs),
    /// Reproduce a figure preset (fig2, fig3, fig5, fig6, fig7).
    Figure(FigureArgs),
    /// SNR gap between two analytic curves at a target error rate.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Reflector counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, allow_negative_numbers = true)]
    snr_start_db: f64,
    #[arg(long, allow_negative_numbers = true)]
    snr_stop_db: f64,
    #[arg(long, default_value_t = 1.0)]
    snr_step_db: f64,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyticArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    max_trials: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_ERRORS)]
    min_errors: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Debug, Args)]
struct FigureArgs {
    name: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, allow_negative_numbers = true, requires = "snr_stop_db")]
    snr_start_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "snr_start_db")]
    snr_stop_db: Option<f64>,
    #[arg(long)]
    snr_step_db: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// One scheme, or two separated by a comma.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme, required = true)]
    scheme: Vec<Scheme>,
    /// One reflector count, or two separated by a comma.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    target: f64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse()
}

fn pair<T: Copy>(v: &[T], what: &str) -> Result<(T, T)> {
    match v {
        [a] => Ok((*a, *a)),
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("--{what} takes one or two values"))),
    }
}

fn integrator(nodes: usize) -> Result<SepIntegrator> {
    SepIntegrator::with_nodes(nodes).map_err(|e| CliError::Usage(e.to_string()))
}

fn curve_series(curve: &CurveArgs) -> Result<(Vec<Series>, Vec<f64>)> {
    let grid = SnrGrid::new(curve.snr_start_db, curve.snr_stop_db, curve.snr_step_db)?.points();
    let series = curve
        .n
        .iter()
        .map(|&n| Series::new(curve.scheme, n, curve.m))
        .collect::<Result<Vec<_>>>()?;
    Ok((series, grid))
}

fn budget(args: &BudgetArgs) -> Result<SimBudget> {
    if args.max_trials == 0 || args.min_errors == 0 {
        return Err(CliError::Usage(
            "--max-trials and --min-errors must be positive".into(),
        ));
    }
    Ok(SimBudget {
        max_trials: args.max_trials,
        min_errors: args.min_errors,
        ..SimBudget::default()
    })
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Analytic(a) => {
            let (series, grid) = curve_series(&a.curve)?;
            let integrator = integrator(a.nodes)?;
            let mut rows = Vec::new();
            for s in series {
                rows.extend(analytic_rows(s, &grid, &integrator, true)?);
            }
            emit(&write_csv(&rows)?, a.curve.out.as_deref(), stdout)
        }
        Command::Simulate(a) => {
            let (series, grid) = curve_series(&a.curve)?;
            let budget = budget(&a.budget)?;
            let mut rows = Vec::new();
            for (i, s) in series.into_iter().enumerate() {
                let seed = crate::presets::series_seed(a.budget.seed, i);
                rows.extend(simulated_rows(s, &grid, seed, &budget)?);
            }
            emit(&write_csv(&rows)?, a.curve.out.as_deref(), stdout)
        }
        Command::Figure(a) => {
            let grid = match (a.snr_start_db, a.snr_stop_db) {
                (Some(start), Some(stop)) => {
                    Some(SnrGrid::new(start, stop, a.snr_step_db.unwrap_or(1.0))?)
                }
                _ if a.snr_step_db.is_some() => {
                    return Err(CliError::Usage(
                        "--snr-step-db needs --snr-start-db and --snr-stop-db".into(),
                    ))
                }
                _ => None,
            };
            integrator(a.nodes)?;
            let options = PresetOptions {
                seed: a.budget.seed,
                budget: SimBudget {
                    stop_on_zero_errors: true,
                    ..budget(&a.budget)?
                },
                nodes: a.nodes,
                grid,
            };
            let fig = run_figure_preset(&a.name, &options)?;
            std::fs::create_dir_all(&a.out)?;
            let csv_path = a.out.join(fig.csv_file_name());
            let script_path = a.out.join(fig.script_file_name());
            std::fs::write(&csv_path, &fig.csv)?;
            std::fs::write(&script_path, &fig.plot_script)?;
            writeln!(stdout, "{}", csv_path.display())?;
            writeln!(stdout, "{}", script_path.display())?;
            Ok(())
        }
        Command::Compare(a) => {
            let (sa, sb) = pair(&a.scheme, "scheme")?;
            let (na, nb) = pair(&a.n, "n")?;
            let integrator = integrator(a.nodes)?;
            let gap = compare(
                Series::new(sa, na, a.m)?,
                Series::new(sb, nb, a.m)?,
                a.target,
                &integrator,
            )
            .map_err(|e| match e {
                CliError::Engine(ris_linklab::Error::TargetOutOfRange(t)) => {
                    CliError::Usage(format!("target {t} is outside the reachable range"))
                }
                other => other,
            })?;
            writeln!(stdout, "snr_a_db={}", gap.snr_a_db)?;
            writeln!(stdout, "snr_b_db={}", gap.snr_b_db)?;
            writeln!(stdout, "gap_db={}", gap.gap_db)?;
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand, and
/// returns the process exit status.
pub fn run<'a, I, T>(args: I, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridcap::data::SeriesLayout;
use gridcap::temporal::DayKind;
use gridcap_lp::{SolverKind, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(name = "gridcap", version, about = "Sector-coupled capacity-expansion planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and check a dataset (and optionally scenarios against it).
    Validate {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        scenario: Vec<String>,
    },
    /// Plan capacity for each scenario; writes <out>/<scenario>/result.json and report.csv.
    Plan(RunArgs),
    /// Re-dispatch planned capacities over all 8760 hours; writes dispatch.json.
    Dispatch(RunArgs),
    /// Rewrite report.csv from result.json; with --baseline also lcoh.json.
    Report {
        #[arg(long, required = true)]
        scenario: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Scenario without hydrogen demand to measure LCOH against.
        #[arg(long, requires = "dataset")]
        baseline: Option<String>,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Side-by-side totals of several planned scenarios into <out>/compare.csv.
    Compare {
        #[arg(long, required = true)]
        scenario: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the planning LP of each scenario to <out>/<scenario>.mps.
    ExportMps {
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    dataset: PathBuf,
    /// Bundled scenario name (ref, r80, r90, ze, ...) or a TOML file; repeatable.
    #[arg(long, required = true)]
    scenario: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = LayoutArg::Representative)]
    layout: LayoutArg,
    /// Months sampled by `--layout months`, e.g. 1,4,7,10.
    #[arg(long, value_delimiter = ',', default_value = "1,4,7,10")]
    months: Vec<u8>,
    /// Day kinds per sampled month.
    #[arg(long, value_delimiter = ',', value_enum, default_value = "max,median,min")]
    days: Vec<DayArg>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Scenarios solved concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, env = "GRIDCAP_SOLVER", default_value = "highs", value_parser = parse_solver)]
    solver: SolverKind,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Representative,
    Months,
    FullYear,
}

#[derive(Clone, Copy, ValueEnum)]
enum DayArg {
    Max,
    Median,
    Min,
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse()
}

impl Inputs {
    fn layout(&self) -> SeriesLayout {
        let kinds = self
            .days
            .iter()
            .map(|d| match d {
                DayArg::Max => DayKind::Max,
                DayArg::Median => DayKind::Median,
                DayArg::Min => DayKind::Min,
            })
            .collect();
        match self.layout {
            LayoutArg::Representative => SeriesLayout::Representative(kinds),
            LayoutArg::Months => SeriesLayout::Months {
                months: self.months.clone(),
                kinds,
            },
            LayoutArg::FullYear => SeriesLayout::FullYear,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage problems are input errors; exit 2 is reserved for infeasibility
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

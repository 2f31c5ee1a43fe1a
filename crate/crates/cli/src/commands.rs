use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use gridcap::data::{load_system_inputs, ProjectKind, SeriesTable, SystemDataset};
use gridcap::metrics::{compare_csv, lcoh_report, report_csv};
use gridcap::scenario::{
    apply_scenario, bundled, bundled_names, run_plan, scenario_mps, validate_dispatch, RunOptions, ScenarioConfig,
    ScenarioResult,
};
use gridcap::GridcapError;

use crate::{Command, Inputs, RunArgs};

/// Exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<GridcapError> for Failure {
    fn from(e: GridcapError) -> Self {
        let code = match e {
            GridcapError::Validation(_) | GridcapError::Io { .. } => 1,
            GridcapError::NotOptimal { .. } => 2,
            GridcapError::Assembly(_) | GridcapError::Solver { .. } | GridcapError::Format(_) => 3,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<gridcap::ValidationError> for Failure {
    fn from(e: gridcap::ValidationError) -> Self {
        GridcapError::from(e).into()
    }
}

type Outcome<T = ()> = Result<T, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { dataset, scenario } => validate(&dataset, &scenario),
        Command::Plan(args) => plan(&args),
        Command::Dispatch(args) => dispatch(&args),
        Command::Report { scenario, out, baseline, dataset } => report(&scenario, &out, baseline.as_deref(), dataset.as_deref()),
        Command::Compare { scenario, out } => compare(&scenario, &out),
        Command::ExportMps { inputs } => export_mps(&inputs),
    }
}

fn resolve(arg: &str) -> Outcome<ScenarioConfig> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".toml") {
        return Ok(ScenarioConfig::load(path)?);
    }
    bundled(arg).ok_or_else(|| {
        Failure::input(format!(
            "unknown scenario `{arg}`: not a file and not one of {}",
            bundled_names().join(", ")
        ))
    })
}

fn resolve_all(args: &[String]) -> Outcome<Vec<ScenarioConfig>> {
    let cfgs = args.iter().map(|a| resolve(a)).collect::<Outcome<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    for c in &cfgs {
        if !seen.insert(c.name.as_str()) {
            return Err(Failure::input(format!("scenario name `{}` given twice", c.name)));
        }
    }
    Ok(cfgs)
}

struct Loaded {
    dataset: SystemDataset,
    series: SeriesTable,
    scenarios: Vec<ScenarioConfig>,
}

fn load(inputs: &Inputs) -> Outcome<Loaded> {
    let scenarios = resolve_all(&inputs.scenario)?;
    let dataset = load_system_inputs(&inputs.dataset)?;
    let series = SeriesTable::from_calendar(&dataset, &inputs.layout())?;
    Ok(Loaded { dataset, series, scenarios })
}

fn write(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| GridcapError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| GridcapError::io(path, e).into())
}

fn scenario_dir(out: &Path, name: &str) -> PathBuf {
    out.join(name)
}

fn read_result(out: &Path, name: &str) -> Outcome<ScenarioResult> {
    let path = scenario_dir(out, name).join("result.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| Failure::input(format!("{}: {e} (run `gridcap plan` first)", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Runs `task` for every scenario on `jobs` threads; reports every failure
/// and returns the most severe one.
fn for_each<F>(cfgs: &[ScenarioConfig], jobs: usize, task: F) -> Outcome
where
    F: Fn(&ScenarioConfig) -> Outcome + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure { code: 3, message: e.to_string() })?;
    let outcomes: Vec<Outcome> = pool.install(|| cfgs.par_iter().map(&task).collect());
    let mut worst = 0;
    let mut failed = 0;
    for (cfg, o) in cfgs.iter().zip(outcomes) {
        if let Err(f) = o {
            eprintln!("{}: {}", cfg.name, f.message);
            worst = worst.max(f.code);
            failed += 1;
        }
    }
    if failed == 0 {
        return Ok(());
    }
    Err(Failure {
        code: worst,
        message: format!("{failed} of {} scenarios failed", cfgs.len()),
    })
}

fn validate(dataset: &Path, scenarios: &[String]) -> Outcome {
    let cfgs = resolve_all(scenarios)?;
    let ds = load_system_inputs(dataset)?;
    let hours = ds.calendar.as_ref().map_or(0, |c| c.demand.values().next().map_or(0, Vec::len));
    println!("zones,{}", ds.zones.len());
    println!("links,{}", ds.links.len());
    println!("projects,{}", ds.projects.len());
    println!("cost_records,{}", ds.costs.len());
    println!("fuel_prices,{}", ds.fuel_prices.len());
    println!("co2_sites,{}", ds.co2_sites.len());
    println!("hours,{hours}");
    for cfg in &cfgs {
        let plan = apply_scenario(&ds, cfg)?;
        println!("scenario,{},{} projects", plan.name, plan.dataset.projects.len());
    }
    Ok(())
}

fn options(args: &RunArgs) -> RunOptions {
    RunOptions { solver: args.solver, tolerance: args.tol }
}

fn write_reports(out: &Path, result: &ScenarioResult) -> Outcome {
    let dir = scenario_dir(out, &result.scenario);
    write(&dir.join("result.json"), &result.to_json())?;
    write(&dir.join("report.csv"), &report_csv(result))
}

fn plan(args: &RunArgs) -> Outcome {
    let loaded = load(&args.inputs)?;
    let opts = options(args);
    let out = &args.inputs.out;
    for_each(&loaded.scenarios, args.jobs, |cfg| {
        let plan = apply_scenario(&loaded.dataset, cfg)?;
        let result = run_plan(&plan, &loaded.series, &opts)?;
        write(&scenario_dir(out, &cfg.name).join("scenario.toml"), &cfg.to_toml())?;
        write_reports(out, &result)?;
        eprintln!("{}: objective {:.6e}", cfg.name, result.objective);
        Ok(())
    })
}

fn dispatch(args: &RunArgs) -> Outcome {
    let loaded = load(&args.inputs)?;
    let opts = options(args);
    let out = &args.inputs.out;
    for_each(&loaded.scenarios, args.jobs, |cfg| {
        let planned = read_result(out, &cfg.name)?;
        let plan = apply_scenario(&loaded.dataset, cfg)?;
        let report = validate_dispatch(&plan, &loaded.series, &planned.fixed_capacities(), &opts)?;
        let json = serde_json::to_string_pretty(&report).map_err(|e| Failure { code: 3, message: e.to_string() })?;
        write(&scenario_dir(out, &cfg.name).join("dispatch.json"), &(json + "\n"))?;
        eprintln!(
            "{}: unserved {:.4}% of {:.0} MWh",
            cfg.name,
            100.0 * report.unserved_fraction,
            report.demand_mwh
        );
        Ok(())
    })
}

/// Capacity-weighted electrolyzer efficiency of a planned run.
fn electrolyzer_efficiency(ds: &SystemDataset, result: &ScenarioResult) -> Option<f64> {
    let (mut cap, mut weighted) = (0.0, 0.0);
    for p in result.projects.iter().filter(|p| p.kind == ProjectKind::P2g) {
        let eff = ds
            .project(&p.id)
            .and_then(|q| q.efficiency)
            .or_else(|| ds.projects.iter().find(|q| q.kind == ProjectKind::P2g).and_then(|q| q.efficiency))?;
        cap += p.capacity;
        weighted += p.capacity * eff;
    }
    (cap > 0.0).then(|| weighted / cap)
}

fn report(scenarios: &[String], out: &Path, baseline: Option<&str>, dataset: Option<&Path>) -> Outcome {
    let names: Vec<String> = scenarios.iter().map(|s| resolve(s).map(|c| c.name)).collect::<Outcome<_>>()?;
    let base = baseline.map(|b| resolve(b).and_then(|c| read_result(out, &c.name))).transpose()?;
    let ds = dataset.map(load_system_inputs).transpose()?;
    for name in &names {
        let result = read_result(out, name)?;
        write_reports(out, &result)?;
        if let (Some(base), Some(ds)) = (&base, &ds) {
            let Some(eff) = electrolyzer_efficiency(ds, &result) else {
                eprintln!("{name}: no electrolyzers built, LCOH skipped");
                continue;
            };
            match lcoh_report(&result, base, eff) {
                Some(l) => {
                    let json = serde_json::to_string_pretty(&l).map_err(|e| Failure { code: 3, message: e.to_string() })?;
                    write(&scenario_dir(out, name).join("lcoh.json"), &(json + "\n"))?;
                }
                None => eprintln!("{name}: no hydrogen demand, LCOH skipped"),
            }
        }
    }
    Ok(())
}

fn compare(scenarios: &[String], out: &Path) -> Outcome {
    let results = scenarios
        .iter()
        .map(|s| resolve(s).and_then(|c| read_result(out, &c.name)))
        .collect::<Outcome<Vec<_>>>()?;
    write(&out.join("compare.csv"), &compare_csv(&results))
}

fn export_mps(inputs: &Inputs) -> Outcome {
    let loaded = load(inputs)?;
    for cfg in &loaded.scenarios {
        let mps = scenario_mps(&loaded.dataset, &loaded.series, cfg)?;
        write(&inputs.out.join(format!("{}.mps", cfg.name)), &mps)?;
    }
    Ok(())
}

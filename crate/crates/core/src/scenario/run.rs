use serde::{Deserialize, Serialize};

use gridcap_lp::{export_mps, SolveStatus, SolverKind, DEFAULT_TOLERANCE};

use super::apply::{apply_scenario, ScenarioPlan};
use super::config::ScenarioConfig;
use super::result::{extract, ScenarioResult};
use crate::data::{SeriesLayout, SeriesTable, SystemDataset, MMBTU_PER_MWH};
use crate::error::{GridcapError, Result};
use crate::model::{build_model, CapacityMode, FixedCapacities, SlackPenalties};
use crate::temporal::build_chronology;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub solver: SolverKind,
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            solver: SolverKind::default(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Builds and solves one plan.
pub fn run_plan(plan: &ScenarioPlan, series: &SeriesTable, opts: &RunOptions) -> Result<ScenarioResult> {
    let built = build_model(&plan.dataset, series, &plan.options, &plan.name)?;
    let solver = opts.solver.build();
    let sol = solver.solve(&built.lp, opts.tolerance);
    match sol.status {
        SolveStatus::Optimal => Ok(extract(plan, series, &built, &sol)),
        SolveStatus::Infeasible => Err(GridcapError::NotOptimal {
            scenario: plan.name.clone(),
            status: sol.status,
            diagnostic: diagnose(plan, series, opts),
        }),
        SolveStatus::Unbounded => Err(GridcapError::NotOptimal {
            scenario: plan.name.clone(),
            status: sol.status,
            diagnostic: "objective is unbounded below; check for negative costs or uncapped capacity with negative cost".into(),
        }),
        SolveStatus::Error => Err(GridcapError::Solver {
            scenario: plan.name.clone(),
            message: sol.message,
        }),
    }
}

/// Applies a scenario and solves it.
pub fn run_scenario(ds: &SystemDataset, series: &SeriesTable, cfg: &ScenarioConfig, opts: &RunOptions) -> Result<ScenarioResult> {
    let plan = apply_scenario(ds, cfg)?;
    run_plan(&plan, series, opts)
}

/// MPS text of a scenario's model.
pub fn scenario_mps(ds: &SystemDataset, series: &SeriesTable, cfg: &ScenarioConfig) -> Result<String> {
    let plan = apply_scenario(ds, cfg)?;
    let built = build_model(&plan.dataset, series, &plan.options, &plan.name)?;
    Ok(export_mps(&built.lp))
}

/// Re-solves with elastic balance, cap and reserve rows and names the rows
/// that needed slack.
pub fn diagnose(plan: &ScenarioPlan, series: &SeriesTable, opts: &RunOptions) -> String {
    let mut elastic = plan.clone();
    elastic.options.elastic = true;
    elastic.options.slack = None;
    let built = match build_model(&elastic.dataset, series, &elastic.options, &elastic.name) {
        Ok(b) => b,
        Err(e) => return format!("diagnosis failed: {e}"),
    };
    let sol = opts.solver.build().solve(&built.lp, opts.tolerance);
    if !sol.is_optimal() {
        return format!(
            "elastic relaxation is {} as well; variable bounds or fixed capacities conflict",
            sol.status
        );
    }
    let mut needed: Vec<(String, f64)> = Vec::new();
    for s in &built.slacks {
        let amount = s.shortfall.map_or(0.0, |v| sol.value(v)) + s.surplus.map_or(0.0, |v| sol.value(v));
        if amount > 1e-7 {
            match needed.iter_mut().find(|(r, _)| *r == s.row) {
                Some((_, a)) => *a += amount,
                None => needed.push((s.row.clone(), amount)),
            }
        }
    }
    if needed.is_empty() {
        return "no balance, cap or reserve row needed slack; check variable bounds".into();
    }
    needed.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total = needed.len();
    let shown: Vec<String> = needed
        .iter()
        .take(8)
        .map(|(r, a)| format!("{r} (short by {a:.4})"))
        .collect();
    format!(
        "conflicting rows: {}{}",
        shown.join(", "),
        if total > 8 { format!(" and {} more", total - 8) } else { String::new() }
    )
}

/// Outcome of re-running a plan hour by hour at fixed capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchReport {
    pub scenario: String,
    pub hours: usize,
    pub penalty_per_mwh: f64,
    pub demand_mwh: f64,
    pub unserved_mwh: f64,
    pub unserved_fraction: f64,
    pub spilled_mwh: f64,
    pub unserved_h2_mwh: f64,
    pub emissions_above_cap_tonnes: f64,
    pub net_emissions_tonnes: f64,
    pub objective: f64,
}

/// Penalty for unserved energy: `1e4 × max(1, largest variable cost)` in $/MWh.
pub fn unserved_penalty(ds: &SystemDataset) -> f64 {
    let mut worst: f64 = 1.0;
    for p in &ds.projects {
        let Some(rec) = ds.cost(&p.technology) else { continue };
        let mut marginal = rec.variable_om;
        if let Some(f) = p.fuel.filter(|_| p.kind.burns_fuel()) {
            let price = ds.fuel_price(f, &p.zone).unwrap_or(0.0);
            marginal += price * MMBTU_PER_MWH / p.conversion_efficiency();
        }
        worst = worst.max(marginal);
    }
    1e4 * worst
}

/// Fixes the planned capacities and re-dispatches over every hour of the year.
///
/// Uses the dataset's calendar series when present; otherwise the planning
/// series is unfolded onto 8760 hours through the day-to-horizon chronology.
pub fn validate_dispatch(
    plan: &ScenarioPlan,
    planning_series: &SeriesTable,
    capacities: &FixedCapacities,
    opts: &RunOptions,
) -> Result<DispatchReport> {
    let ds = &plan.dataset;
    let series = if ds.calendar.is_some() {
        SeriesTable::from_calendar(ds, &SeriesLayout::FullYear)?
    } else {
        let chronology = build_chronology(&planning_series.temporal, None)?;
        planning_series.expand(&chronology)?
    };
    let penalty = unserved_penalty(ds);
    let mut fixed = plan.clone();
    fixed.options.capacity_mode = CapacityMode::Fixed(capacities.clone());
    fixed.options.slack = Some(SlackPenalties {
        power: penalty,
        hydrogen: penalty,
        carbon: penalty,
    });
    let result = run_plan(&fixed, &series, opts)?;
    let demand = result.electricity_demand_mwh;
    Ok(DispatchReport {
        scenario: plan.name.clone(),
        hours: series.temporal.len(),
        penalty_per_mwh: penalty,
        demand_mwh: demand,
        unserved_mwh: result.slack.unserved_power_mwh,
        unserved_fraction: if demand > 0.0 { result.slack.unserved_power_mwh / demand } else { 0.0 },
        spilled_mwh: result.slack.spilled_power_mwh,
        unserved_h2_mwh: result.slack.unserved_h2_mwh,
        emissions_above_cap_tonnes: result.slack.emissions_above_cap_tonnes,
        net_emissions_tonnes: result.emissions.net_tonnes,
        objective: result.objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::flat_toy;

    #[test]
    fn penalty_tracks_the_dearest_marginal_cost() {
        let mut ds = flat_toy().dataset;
        let gas = 3.0 + 5.0 * MMBTU_PER_MWH / 0.55;
        assert!((unserved_penalty(&ds) - 1e4 * gas).abs() < 1e-6);
        ds.projects.retain(|p| p.fuel.is_none());
        assert_eq!(unserved_penalty(&ds), 1e4);
    }
}

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use gridcap_lp::{LinExpr, Solution, SolveStatus};

use super::apply::ScenarioPlan;
use crate::data::{Commodity, ProjectKind, SeriesTable};
use crate::model::{Bus, BuiltModel, CostCategory, FixedCapacities};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectResult {
    pub id: String,
    pub zone: String,
    pub kind: ProjectKind,
    pub technology: String,
    pub bus: Bus,
    pub existing_capacity: f64,
    pub new_capacity: f64,
    pub capacity: f64,
    pub energy_capacity: Option<f64>,
    /// Weighted annual main activity (MWh, or tonnes for capture).
    pub output: f64,
    /// Weighted annual charge or electric input (MWh).
    pub input: f64,
    pub h2_produced_mwh: f64,
    pub h2_consumed_mwh: f64,
    pub electricity_use_mwh: f64,
    pub fuel_mmbtu: f64,
    pub emissions_tonnes: f64,
    pub cost: IndexMap<CostCategory, f64>,
}

impl ProjectResult {
    pub fn total_cost(&self) -> f64 {
        self.cost.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkResult {
    pub id: String,
    pub commodity: Commodity,
    pub capacity: f64,
    pub new_capacity: f64,
    /// Weighted annual Σ|flow|.
    pub throughput: f64,
    pub losses: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteResult {
    pub id: String,
    pub injected_tonnes: f64,
    pub injection_capacity: Option<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionSummary {
    pub gross_tonnes: f64,
    pub captured_tonnes: f64,
    pub net_tonnes: f64,
    pub cap_tonnes: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HydrogenSummary {
    /// Exogenous hydrogen demand served (MWh LHV per year).
    pub demand_mwh: f64,
    /// Hydrogen burned for electricity.
    pub g2p_fuel_mwh: f64,
    pub electrolyzer_capacity_mw: f64,
    pub electrolyzer_input_mwh: f64,
    pub electrolyzer_output_mwh: f64,
    /// Annual capital, fixed and variable cost of all electrolyzers.
    pub electrolyzer_cost: f64,
    /// Dedicated electrolyzers on the industrial bus (decoupled runs).
    pub industrial_electrolyzer_cost: f64,
    pub industrial_electrolyzer_input_mwh: f64,
    pub fossil_h2_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SlackSummary {
    pub unserved_power_mwh: f64,
    pub spilled_power_mwh: f64,
    pub unserved_h2_mwh: f64,
    pub vented_h2_mwh: f64,
    pub emissions_above_cap_tonnes: f64,
}

/// Supply and use on one bus in one timepoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub commodity: Commodity,
    pub bus: Bus,
    pub zone: String,
    pub timepoint: usize,
    pub supply: f64,
    pub demand: f64,
}

impl LedgerEntry {
    pub fn residual(&self) -> f64 {
        self.supply - self.demand
    }

    /// Residual relative to the row's magnitude.
    pub fn scaled_residual(&self) -> f64 {
        self.residual().abs() / self.supply.abs().max(self.demand.abs()).max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub status: SolveStatus,
    pub objective: f64,
    pub costs: IndexMap<CostCategory, f64>,
    pub electricity_demand_mwh: f64,
    pub projects: Vec<ProjectResult>,
    pub links: Vec<LinkResult>,
    pub sites: Vec<SiteResult>,
    pub emissions: EmissionSummary,
    pub hydrogen: HydrogenSummary,
    pub slack: SlackSummary,
    /// Largest scaled balance residual per commodity.
    pub max_residual: IndexMap<Commodity, f64>,
    #[serde(skip)]
    pub ledger: Vec<LedgerEntry>,
}

impl ScenarioResult {
    pub fn project(&self, id: &str) -> Option<&ProjectResult> {
        self.projects.iter().find(|p| p.id == id)
    }

    pub fn capacity_by_kind(&self, kind: ProjectKind) -> f64 {
        self.projects.iter().filter(|p| p.kind == kind).map(|p| p.capacity).sum()
    }

    pub fn fixed_capacities(&self) -> FixedCapacities {
        FixedCapacities {
            projects: self
                .projects
                .iter()
                .map(|p| (p.id.clone(), (p.capacity, p.energy_capacity.unwrap_or(0.0))))
                .collect(),
            links: self.links.iter().map(|l| (l.id.clone(), l.capacity)).collect(),
            sites: self
                .sites
                .iter()
                .filter_map(|s| s.injection_capacity.map(|c| (s.id.clone(), c)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

fn weighted(series: &SeriesTable, values: impl Iterator<Item = f64>) -> f64 {
    values.enumerate().map(|(t, v)| v * series.temporal.scale(t)).sum()
}

/// Reads a solved model back into report form.
pub fn extract(plan: &ScenarioPlan, series: &SeriesTable, built: &BuiltModel, sol: &Solution) -> ScenarioResult {
    let ds = &plan.dataset;
    let eval = |e: &LinExpr| sol.eval(e);
    let annual_vars = |vars: &[gridcap_lp::Var]| weighted(series, vars.iter().map(|&v| sol.value(v)));
    let annual_exprs = |exprs: &[LinExpr]| weighted(series, exprs.iter().map(|e| sol.eval(e)));

    let mut hydrogen = HydrogenSummary {
        demand_mwh: built.h2_load_mw.iter().sum::<f64>() * series.temporal.weighted_hours(),
        ..Default::default()
    };
    let mut projects = Vec::with_capacity(built.projects.len());
    for pv in &built.projects {
        let p = &pv.project;
        let output = annual_vars(&pv.output);
        let input = annual_vars(&pv.input);
        let (produced, consumed) = match p.kind {
            ProjectKind::P2g => (input * p.conversion_efficiency(), 0.0),
            k if k.is_fossil_h2() => (output, 0.0),
            k if k.is_g2p() => (0.0, output / p.conversion_efficiency()),
            _ => (0.0, 0.0),
        };
        let cost: IndexMap<CostCategory, f64> = pv.cost.iter().map(|(c, e)| (*c, eval(e))).collect();
        let new_capacity = pv.new_capacity.map_or(0.0, |v| sol.value(v));
        let capacity = eval(&pv.capacity);
        match p.kind {
            ProjectKind::P2g => {
                let total: f64 = cost.values().sum();
                hydrogen.electrolyzer_capacity_mw += capacity;
                hydrogen.electrolyzer_input_mwh += input;
                hydrogen.electrolyzer_output_mwh += produced;
                hydrogen.electrolyzer_cost += total;
                if pv.bus == Bus::Industrial {
                    hydrogen.industrial_electrolyzer_cost += total;
                    hydrogen.industrial_electrolyzer_input_mwh += input;
                }
            }
            k if k.is_g2p() => hydrogen.g2p_fuel_mwh += consumed,
            k if k.is_fossil_h2() => hydrogen.fossil_h2_mwh += produced,
            _ => {}
        }
        projects.push(ProjectResult {
            id: p.id.clone(),
            zone: p.zone.clone(),
            kind: p.kind,
            technology: p.technology.clone(),
            bus: pv.bus,
            existing_capacity: if p.kind.is_h2_storage() { p.existing_energy_mwh } else { p.existing_capacity },
            new_capacity,
            capacity,
            energy_capacity: pv.energy.as_ref().map(eval),
            output,
            input,
            h2_produced_mwh: produced,
            h2_consumed_mwh: consumed,
            electricity_use_mwh: annual_exprs(&pv.electricity_use),
            fuel_mmbtu: annual_exprs(&pv.burn),
            emissions_tonnes: annual_exprs(&pv.emissions),
            cost,
        });
    }

    let links = built
        .links
        .iter()
        .map(|lv| {
            let l = &ds.links[lv.index];
            LinkResult {
                id: l.id.clone(),
                commodity: l.commodity,
                capacity: eval(&lv.capacity),
                new_capacity: lv.new_capacity.map_or(0.0, |v| sol.value(v)),
                throughput: weighted(series, lv.flow.iter().map(|&v| sol.value(v).abs())),
                losses: annual_vars(&lv.loss_from) + annual_vars(&lv.loss_to),
                cost: eval(&lv.cost),
            }
        })
        .collect();

    let sites = built
        .sites
        .iter()
        .map(|sv| SiteResult {
            id: ds.co2_sites[sv.index].id(),
            injected_tonnes: annual_vars(&sv.injection),
            injection_capacity: sv.injection_capacity.as_ref().map(eval),
            cost: eval(&sv.cost),
        })
        .collect();

    let gross = eval(&built.gross_emissions);
    let captured = eval(&built.captured);

    let mut slack = SlackSummary::default();
    for s in &built.slacks {
        let scale = s.timepoint.map_or(1.0, |t| series.temporal.scale(t));
        let short = s.shortfall.map_or(0.0, |v| sol.value(v)) * scale;
        let surplus = s.surplus.map_or(0.0, |v| sol.value(v)) * scale;
        match s.commodity {
            Some(Commodity::Electricity) if s.timepoint.is_some() => {
                slack.unserved_power_mwh += short;
                slack.spilled_power_mwh += surplus;
            }
            Some(Commodity::Hydrogen) => {
                slack.unserved_h2_mwh += short;
                slack.vented_h2_mwh += surplus;
            }
            Some(Commodity::Co2) if s.timepoint.is_none() => slack.emissions_above_cap_tonnes += short,
            _ => {}
        }
    }

    let ledger: Vec<LedgerEntry> = built
        .balances
        .iter()
        .map(|b| LedgerEntry {
            commodity: b.commodity,
            bus: b.bus,
            zone: ds.zones[b.zone].id.clone(),
            timepoint: b.timepoint,
            supply: eval(&b.supply),
            demand: eval(&b.demand),
        })
        .collect();
    let mut max_residual: IndexMap<Commodity, f64> = [Commodity::Electricity, Commodity::Hydrogen, Commodity::Co2]
        .into_iter()
        .map(|c| (c, 0.0))
        .collect();
    for e in &ledger {
        let slot = max_residual.get_mut(&e.commodity).expect("all commodities");
        *slot = slot.max(e.scaled_residual());
    }

    let electricity_demand_mwh = (0..ds.zones.len()).map(|z| series.annual_energy(z)).sum();

    ScenarioResult {
        scenario: plan.name.clone(),
        status: sol.status,
        objective: sol.objective,
        costs: built.costs.iter().map(|(c, e)| (*c, eval(e))).collect(),
        electricity_demand_mwh,
        projects,
        links,
        sites,
        emissions: EmissionSummary {
            gross_tonnes: gross,
            captured_tonnes: captured,
            net_tonnes: gross - captured,
            cap_tonnes: plan.options.emission_cap_tonnes,
        },
        hydrogen,
        slack,
        max_residual,
        ledger,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(supply: f64, demand: f64) -> LedgerEntry {
        LedgerEntry {
            commodity: Commodity::Electricity,
            bus: Bus::Grid,
            zone: "z".into(),
            timepoint: 0,
            supply,
            demand,
        }
    }

    #[test]
    fn residuals_scale_with_the_larger_side() {
        assert_eq!(entry(1000.0, 999.0).residual(), 1.0);
        assert!((entry(1000.0, 999.0).scaled_residual() - 1e-3).abs() < 1e-15);
        // small rows are measured in absolute terms
        assert_eq!(entry(0.25, 0.0).scaled_residual(), 0.25);
    }
}

//! Levelized costs, unit conversions and tabular reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::{ProjectKind, MMBTU_PER_MWH};
use crate::model::CostCategory;
use crate::scenario::ScenarioResult;

/// Lower heating value of hydrogen: 120 MJ/kg = 33.33 kWh/kg.
pub const KWH_PER_KG_H2: f64 = 120.0 / 3.6;

pub fn mwh_to_kg(mwh: f64) -> f64 {
    mwh * 1000.0 / KWH_PER_KG_H2
}

pub fn kg_to_mwh(kg: f64) -> f64 {
    kg * KWH_PER_KG_H2 / 1000.0
}

/// Million tonnes of H₂ → TWh (LHV).
pub fn mt_to_twh(mt: f64) -> f64 {
    kg_to_mwh(mt * 1e9) / 1e6
}

pub fn twh_to_mt(twh: f64) -> f64 {
    mwh_to_kg(twh * 1e6) / 1e9
}

/// $/MWh of hydrogen → $/kg.
pub fn per_mwh_to_per_kg(cost: f64) -> f64 {
    cost * KWH_PER_KG_H2 / 1000.0
}

pub fn per_kg_to_per_mwh(cost: f64) -> f64 {
    cost * 1000.0 / KWH_PER_KG_H2
}

/// Fossil hydrogen cost in $/MWh: fixed cost at full utilization plus fuel.
///
/// `fixed_per_kw_year` is $/kW-yr of H₂ output; `fuel_price` is $/MMBtu.
pub fn gray_lcoh(fixed_per_kw_year: f64, fuel_price: f64, efficiency: f64) -> f64 {
    fixed_per_kw_year / 8.76 + fuel_price * MMBTU_PER_MWH / efficiency
}

/// System cost per MWh of electricity demand, penalties excluded.
pub fn lcoe(result: &ScenarioResult) -> f64 {
    system_cost(result) / result.electricity_demand_mwh
}

/// Objective without penalty terms.
pub fn system_cost(result: &ScenarioResult) -> f64 {
    result
        .costs
        .iter()
        .filter(|(c, _)| **c != CostCategory::Penalty)
        .map(|(_, v)| v)
        .sum()
}

/// Electrolyzer fleet serving both electricity-bound (ED) and external (HD)
/// hydrogen, priced with electricity at `lcoe`. All energy in MWh.
pub fn lcoh_fleet(electrolyzer_cost: f64, lcoe: f64, ed: f64, hd: f64, efficiency: f64) -> f64 {
    let h = ed + hd;
    (electrolyzer_cost + lcoe * h / efficiency) / h
}

/// Dedicated electrolyzers for the external demand only.
pub fn lcoh_dedicated(dedicated_cost: f64, lcoe: f64, hd: f64, efficiency: f64) -> f64 {
    (dedicated_cost + lcoe * hd / efficiency) / hd
}

/// System-level cost of hydrogen: added total cost per MWh of demand.
pub fn lcoh_system(total_with_h2: f64, total_without_h2: f64, hd: f64) -> f64 {
    (total_with_h2 - total_without_h2) / hd
}

/// Hydrogen cost figures for one run against its no-demand baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcohReport {
    pub scenario: String,
    pub baseline: String,
    pub lcoe_baseline: f64,
    pub demand_mwh: f64,
    pub g2p_fuel_mwh: f64,
    /// $/MWh of H₂.
    pub fleet: f64,
    pub dedicated: Option<f64>,
    pub system: f64,
    /// Same three in $/kg.
    pub fleet_per_kg: f64,
    pub dedicated_per_kg: Option<f64>,
    pub system_per_kg: f64,
}

/// Compares a run with hydrogen demand against the run without it.
pub fn lcoh_report(with_h2: &ScenarioResult, baseline: &ScenarioResult, efficiency: f64) -> Option<LcohReport> {
    let h = &with_h2.hydrogen;
    if h.demand_mwh <= 0.0 {
        return None;
    }
    let lcoe_base = lcoe(baseline);
    let fleet = lcoh_fleet(h.electrolyzer_cost, lcoe_base, h.g2p_fuel_mwh, h.demand_mwh, efficiency);
    let dedicated = (h.industrial_electrolyzer_input_mwh > 0.0)
        .then(|| lcoh_dedicated(h.industrial_electrolyzer_cost, lcoe_base, h.demand_mwh, efficiency));
    let system = lcoh_system(system_cost(with_h2), system_cost(baseline), h.demand_mwh);
    Some(LcohReport {
        scenario: with_h2.scenario.clone(),
        baseline: baseline.scenario.clone(),
        lcoe_baseline: lcoe_base,
        demand_mwh: h.demand_mwh,
        g2p_fuel_mwh: h.g2p_fuel_mwh,
        fleet,
        dedicated,
        system,
        fleet_per_kg: per_mwh_to_per_kg(fleet),
        dedicated_per_kg: dedicated.map(per_mwh_to_per_kg),
        system_per_kg: per_mwh_to_per_kg(system),
    })
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Per-project table of one run.
pub fn report_csv(result: &ScenarioResult) -> String {
    let mut out = String::from(
        "project,zone,kind,technology,existing_capacity,new_capacity,capacity,energy_capacity,output,input,fuel_mmbtu,emissions_tonnes,cost\n",
    );
    for p in &result.projects {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.id,
            p.zone,
            p.kind,
            p.technology,
            num(p.existing_capacity),
            num(p.new_capacity),
            num(p.capacity),
            p.energy_capacity.map(num).unwrap_or_default(),
            num(p.output),
            num(p.input),
            num(p.fuel_mmbtu),
            num(p.emissions_tonnes),
            num(p.total_cost()),
        );
    }
    out
}

/// Kinds reported as capacity columns in comparisons.
const COMPARE_KINDS: [ProjectKind; 10] = [
    ProjectKind::ThermalGen,
    ProjectKind::Nuclear,
    ProjectKind::VreGen,
    ProjectKind::Hydro,
    ProjectKind::Battery,
    ProjectKind::P2g,
    ProjectKind::G2pFuelCell,
    ProjectKind::G2pTurbine,
    ProjectKind::CcsRetrofit,
    ProjectKind::Dac,
];

/// One row per scenario: costs, emissions and capacity by kind.
pub fn compare_csv(results: &[ScenarioResult]) -> String {
    let mut out = String::from("scenario,total_cost,investment,fixed_om,variable_om,fuel,penalty,lcoe,net_emissions_tonnes,captured_tonnes,h2_demand_mwh");
    for k in COMPARE_KINDS {
        let _ = write!(out, ",cap_{k}");
    }
    out.push('\n');
    for r in results {
        let cost = |c| r.costs.get(&c).copied().unwrap_or(0.0);
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            num(r.objective),
            num(cost(CostCategory::Investment)),
            num(cost(CostCategory::FixedOm)),
            num(cost(CostCategory::VariableOm)),
            num(cost(CostCategory::Fuel)),
            num(cost(CostCategory::Penalty)),
            num(lcoe(r)),
            num(r.emissions.net_tonnes),
            num(r.emissions.captured_tonnes),
            num(r.hydrogen.demand_mwh),
        );
        for k in COMPARE_KINDS {
            let _ = write!(out, ",{}", num(r.capacity_by_kind(k)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_anchors() {
        let twh = mt_to_twh(124.0);
        assert!((twh - 4133.3).abs() / 4133.3 < 1e-3, "{twh}");
        assert!((twh_to_mt(twh) - 124.0).abs() < 1e-9);
        let per_kg = per_mwh_to_per_kg(58.0);
        assert!((per_kg - 1.933).abs() / 1.933 < 1e-3, "{per_kg}");
        assert!((per_kg_to_per_mwh(per_kg) - 58.0).abs() < 1e-12);
        assert!((387.0_f64 / 8.76 - 44.18).abs() < 0.01);
    }

    #[test]
    fn gray_hydrogen_components() {
        // fixed part only
        assert!((gray_lcoh(387.0, 0.0, 0.76) - 44.178).abs() < 1e-3);
        let full = gray_lcoh(387.0, 13.68, 0.76);
        assert!((full - (387.0 / 8.76 + 13.68 * 3.412 / 0.76)).abs() < 1e-12);
    }

    #[test]
    fn fleet_and_dedicated_agree_without_power_sector_hydrogen() {
        let a = lcoh_fleet(1e6, 50.0, 0.0, 2e4, 0.7);
        let b = lcoh_dedicated(1e6, 50.0, 2e4, 0.7);
        assert!((a - b).abs() < 1e-12);
        assert!((b - (50.0 + 50.0 / 0.7)).abs() < 1e-9);
    }
}

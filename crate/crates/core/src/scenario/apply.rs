use super::config::{CostField, EmissionCap, ParameterField, ScenarioConfig};
use crate::data::{ProjectKind, SystemDataset};
use crate::error::ValidationError;
use crate::model::ModelOptions;

/// Dataset and model options for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPlan {
    pub name: String,
    pub dataset: SystemDataset,
    pub options: ModelOptions,
}

/// Applies a scenario to a copy of the dataset.
///
/// Forbidden technologies are removed outright (with any CCS retrofit whose
/// host disappears); fossil hydrogen is removed unless `blue_h2` is set.
pub fn apply_scenario(ds: &SystemDataset, cfg: &ScenarioConfig) -> Result<ScenarioPlan, ValidationError> {
    cfg.check()?;
    let mut out = ds.clone();

    for tech in cfg
        .forbid_technologies
        .iter()
        .chain(cfg.cost_overrides.iter().map(|o| &o.technology))
        .chain(cfg.parameter_overrides.iter().map(|o| &o.technology))
    {
        if !ds.costs.contains_key(tech) && !ds.projects.iter().any(|p| &p.technology == tech) {
            return Err(ValidationError::new(format!(
                "scenario `{}` refers to unknown technology `{tech}`",
                cfg.name
            )));
        }
    }

    out.projects.retain(|p| {
        !cfg.forbid_kinds.contains(&p.kind)
            && !cfg.forbid_technologies.contains(&p.technology)
            && (cfg.blue_h2 || !p.kind.is_fossil_h2())
    });
    // drop retrofits orphaned by the removals above
    let kept: Vec<String> = out.projects.iter().map(|p| p.id.clone()).collect();
    out.projects.retain(|p| {
        p.kind != ProjectKind::CcsRetrofit || p.parent.as_ref().is_some_and(|h| kept.contains(h))
    });
    out.hydro_monthly_cf.retain(|id, _| kept.contains(id));

    for p in &mut out.projects {
        if cfg.no_new_kinds.contains(&p.kind) {
            p.candidate = false;
        }
        if p.kind == ProjectKind::Nuclear {
            if let Some(m) = cfg.nuclear_min_gen {
                p.min_gen_fraction = m;
            }
        }
        for o in cfg.parameter_overrides.iter().filter(|o| o.technology == p.technology) {
            match o.field {
                ParameterField::Efficiency => p.efficiency = Some(o.value),
                ParameterField::ChargeEfficiency => p.charge_efficiency = Some(o.value),
                ParameterField::DischargeEfficiency => p.discharge_efficiency = Some(o.value),
                ParameterField::CaptureRate => p.capture_rate = Some(o.value),
                ParameterField::MinGenFraction => p.min_gen_fraction = o.value,
            }
        }
    }

    for o in &cfg.cost_overrides {
        let Some(rec) = out.costs.get_mut(&o.technology) else {
            return Err(ValidationError::new(format!("no cost record `{}` to override", o.technology)));
        };
        let slot = match o.field {
            CostField::CapitalCost => &mut rec.capital_cost,
            CostField::EnergyCapitalCost => &mut rec.energy_capital_cost,
            CostField::FixedOm => &mut rec.fixed_om,
            CostField::VariableOm => &mut rec.variable_om,
        };
        *slot = match (o.value, o.multiplier) {
            (Some(v), _) => v,
            (None, Some(m)) => *slot * m,
            (None, None) => unreachable!("checked"),
        };
    }

    out.validate()
        .map_err(|e| ValidationError::new(format!("scenario `{}`: {}", cfg.name, e.message)))?;

    let emission_cap_tonnes = match cfg.emission_cap {
        EmissionCap::None => None,
        EmissionCap::Absolute { tonnes } => Some(tonnes),
        EmissionCap::Reduction { fraction } => {
            let base = ds.period.base_emissions_tonnes.ok_or_else(|| {
                ValidationError::new(format!(
                    "scenario `{}` cuts emissions relative to a base year, but the period has no base_emissions_tonnes",
                    cfg.name
                ))
            })?;
            Some(base * (1.0 - fraction))
        }
    };

    let options = ModelOptions {
        emission_cap_tonnes,
        capacity_caps: cfg.capacity_caps.clone(),
        h2_demand_mwh: cfg.h2_demand.annual_twh * 1e6,
        coupling: cfg.coupling,
        reserve_margin: cfg.reserve_margin,
        reserve_scope: cfg.reserve_scope,
        expansion: cfg.network_expansion,
        ..ModelOptions::default()
    };
    Ok(ScenarioPlan {
        name: cfg.name.clone(),
        dataset: out,
        options,
    })
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::ProjectKind;
use crate::error::{GridcapError, Result, ValidationError};
use crate::model::{CapacityCap, Coupling, Expansion, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmissionCap {
    #[default]
    None,
    /// Cut net emissions by `fraction` of the period's base-year emissions.
    Reduction { fraction: f64 },
    Absolute { tonnes: f64 },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HydrogenDemand {
    /// National demand in TWh (LHV) per year.
    pub annual_twh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostField {
    CapitalCost,
    EnergyCapitalCost,
    FixedOm,
    VariableOm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostOverride {
    pub technology: String,
    pub field: CostField,
    #[serde(default)]
    pub value: Option<f64>,
    #[serde(default)]
    pub multiplier: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterField {
    Efficiency,
    ChargeEfficiency,
    DischargeEfficiency,
    CaptureRate,
    MinGenFraction,
}

/// Overrides a per-project parameter for every project of a technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterOverride {
    pub technology: String,
    pub field: ParameterField,
    pub value: f64,
}

/// One scenario, as read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub emission_cap: EmissionCap,
    /// Project kinds removed from the system.
    #[serde(default)]
    pub forbid_kinds: Vec<ProjectKind>,
    #[serde(default)]
    pub forbid_technologies: Vec<String>,
    /// Kinds kept at existing capacity only.
    #[serde(default)]
    pub no_new_kinds: Vec<ProjectKind>,
    /// Allows SMR and coal gasification (with or without CCS).
    #[serde(default)]
    pub blue_h2: bool,
    #[serde(default)]
    pub capacity_caps: Vec<CapacityCap>,
    /// Minimum output of nuclear units as a fraction of capacity.
    #[serde(default)]
    pub nuclear_min_gen: Option<f64>,
    #[serde(default)]
    pub reserve_margin: Option<f64>,
    #[serde(default)]
    pub reserve_scope: Scope,
    #[serde(default)]
    pub h2_demand: HydrogenDemand,
    #[serde(default)]
    pub coupling: Coupling,
    #[serde(default)]
    pub network_expansion: Expansion,
    #[serde(default)]
    pub cost_overrides: Vec<CostOverride>,
    #[serde(default)]
    pub parameter_overrides: Vec<ParameterOverride>,
}

impl ScenarioConfig {
    /// Unconstrained scenario with default settings.
    pub fn named(name: &str) -> Self {
        Self {
            name: name.into(),
            description: String::new(),
            emission_cap: EmissionCap::None,
            forbid_kinds: Vec::new(),
            forbid_technologies: Vec::new(),
            no_new_kinds: Vec::new(),
            blue_h2: false,
            capacity_caps: Vec::new(),
            nuclear_min_gen: None,
            reserve_margin: None,
            reserve_scope: Scope::Systemwide,
            h2_demand: HydrogenDemand::default(),
            coupling: Coupling::Coupled,
            network_expansion: Expansion::default(),
            cost_overrides: Vec::new(),
            parameter_overrides: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ValidationError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ValidationError::new(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GridcapError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| ValidationError::at(path, None, e.message).into())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// Checks values that do not depend on a dataset.
    pub fn check(&self) -> Result<(), ValidationError> {
        let valid = !self.name.is_empty()
            && self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !valid {
            return Err(ValidationError::new(format!("invalid scenario name `{}`", self.name)));
        }
        match self.emission_cap {
            EmissionCap::Reduction { fraction } if !(0.0..=1.0).contains(&fraction) => {
                return Err(ValidationError::new(format!("reduction fraction {fraction} outside [0, 1]")))
            }
            EmissionCap::Absolute { tonnes } if tonnes < 0.0 => {
                return Err(ValidationError::new("emission cap must be non-negative"))
            }
            _ => {}
        }
        if self.h2_demand.annual_twh < 0.0 || !self.h2_demand.annual_twh.is_finite() {
            return Err(ValidationError::new("hydrogen demand must be a non-negative number"));
        }
        if self.reserve_margin.is_some_and(|m| m < 0.0) {
            return Err(ValidationError::new("reserve margin must be non-negative"));
        }
        if self.nuclear_min_gen.is_some_and(|m| !(0.0..=1.0).contains(&m)) {
            return Err(ValidationError::new("nuclear_min_gen outside [0, 1]"));
        }
        for cap in &self.capacity_caps {
            if cap.max_mw < 0.0 || cap.kinds.is_empty() {
                return Err(ValidationError::new(format!("capacity cap `{}` needs kinds and max_mw >= 0", cap.label)));
            }
        }
        for o in &self.cost_overrides {
            match (o.value, o.multiplier) {
                (Some(v), None) if v >= 0.0 => {}
                (None, Some(m)) if m >= 0.0 => {}
                _ => {
                    return Err(ValidationError::new(format!(
                        "cost override for `{}` needs exactly one non-negative value or multiplier",
                        o.technology
                    )))
                }
            }
        }
        if self.coupling == Coupling::Decoupled && self.forbid_kinds.contains(&ProjectKind::P2g) && !self.blue_h2 && self.h2_demand.annual_twh > 0.0 {
            return Err(ValidationError::new(
                "decoupled hydrogen demand needs electrolyzers or blue hydrogen",
            ));
        }
        Ok(())
    }
}

//! Zones, transport links, projects, costs and time series.

mod finance;
mod load;
mod series;
mod write;

use std::fmt;
use std::path::PathBuf;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::temporal::Period;

pub use finance::{annualize_capital, capital_recovery_factor, derive_link_loss};
pub use load::load_system_inputs;
pub use series::{system_profile, SeriesLayout, SeriesTable};
pub use write::write_system_inputs;

/// Fuel energy per unit of electric (or H₂) energy.
pub const MMBTU_PER_MWH: f64 = 3.412;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectKind {
    ThermalGen,
    VreGen,
    Hydro,
    Nuclear,
    Battery,
    PumpedHydro,
    P2g,
    G2pFuelCell,
    G2pTurbine,
    H2StorageTank,
    H2StorageUnderground,
    Smr,
    Gasification,
    CcsRetrofit,
    Dac,
}

impl ProjectKind {
    pub const ALL: [ProjectKind; 15] = [
        ProjectKind::ThermalGen,
        ProjectKind::VreGen,
        ProjectKind::Hydro,
        ProjectKind::Nuclear,
        ProjectKind::Battery,
        ProjectKind::PumpedHydro,
        ProjectKind::P2g,
        ProjectKind::G2pFuelCell,
        ProjectKind::G2pTurbine,
        ProjectKind::H2StorageTank,
        ProjectKind::H2StorageUnderground,
        ProjectKind::Smr,
        ProjectKind::Gasification,
        ProjectKind::CcsRetrofit,
        ProjectKind::Dac,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProjectKind::ThermalGen => "thermal_gen",
            ProjectKind::VreGen => "vre_gen",
            ProjectKind::Hydro => "hydro",
            ProjectKind::Nuclear => "nuclear",
            ProjectKind::Battery => "battery",
            ProjectKind::PumpedHydro => "pumped_hydro",
            ProjectKind::P2g => "p2g",
            ProjectKind::G2pFuelCell => "g2p_fuel_cell",
            ProjectKind::G2pTurbine => "g2p_turbine",
            ProjectKind::H2StorageTank => "h2_storage_tank",
            ProjectKind::H2StorageUnderground => "h2_storage_underground",
            ProjectKind::Smr => "smr",
            ProjectKind::Gasification => "gasification",
            ProjectKind::CcsRetrofit => "ccs_retrofit",
            ProjectKind::Dac => "dac",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Produces electricity from a power capacity (gross output).
    pub fn is_generator(self) -> bool {
        matches!(
            self,
            ProjectKind::ThermalGen | ProjectKind::VreGen | ProjectKind::Hydro | ProjectKind::Nuclear
        )
    }

    pub fn is_electric_storage(self) -> bool {
        matches!(self, ProjectKind::Battery | ProjectKind::PumpedHydro)
    }

    pub fn is_h2_storage(self) -> bool {
        matches!(self, ProjectKind::H2StorageTank | ProjectKind::H2StorageUnderground)
    }

    pub fn is_g2p(self) -> bool {
        matches!(self, ProjectKind::G2pFuelCell | ProjectKind::G2pTurbine)
    }

    pub fn is_fossil_h2(self) -> bool {
        matches!(self, ProjectKind::Smr | ProjectKind::Gasification)
    }

    pub fn is_capture(self) -> bool {
        matches!(self, ProjectKind::CcsRetrofit | ProjectKind::Dac)
    }

    /// Part of the hydrogen chain (removed by "without H₂" scenarios).
    pub fn is_hydrogen(self) -> bool {
        matches!(self, ProjectKind::P2g) || self.is_g2p() || self.is_h2_storage() || self.is_fossil_h2()
    }

    /// Burns a fuel measured in MMBtu.
    pub fn burns_fuel(self) -> bool {
        matches!(
            self,
            ProjectKind::ThermalGen | ProjectKind::Nuclear | ProjectKind::Smr | ProjectKind::Gasification
        )
    }

    pub fn has_energy_capacity(self) -> bool {
        self.is_electric_storage() || self.is_h2_storage()
    }

    /// Capacity is in tonnes CO₂ per hour rather than MW.
    pub fn capacity_in_tonnes(self) -> bool {
        self.is_capture()
    }

    /// Default reserve capacity credit.
    pub fn default_capacity_credit(self) -> f64 {
        match self {
            ProjectKind::ThermalGen | ProjectKind::Nuclear | ProjectKind::Hydro => 1.0,
            k if k.is_g2p() => 1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for ProjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fuel {
    Coal,
    Gas,
    Uranium,
    Hydrogen,
}

impl Fuel {
    pub fn as_str(self) -> &'static str {
        match self {
            Fuel::Coal => "coal",
            Fuel::Gas => "gas",
            Fuel::Uranium => "uranium",
            Fuel::Hydrogen => "hydrogen",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Fuel::Coal, Fuel::Gas, Fuel::Uranium, Fuel::Hydrogen]
            .into_iter()
            .find(|f| f.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Commodity {
    Electricity,
    Hydrogen,
    Co2,
}

impl Commodity {
    pub fn as_str(self) -> &'static str {
        match self {
            Commodity::Electricity => "electricity",
            Commodity::Hydrogen => "hydrogen",
            Commodity::Co2 => "co2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Commodity::Electricity, Commodity::Hydrogen, Commodity::Co2]
            .into_iter()
            .find(|c| c.as_str() == s)
    }

    /// Prefix used in variable and constraint names.
    pub fn tag(self) -> &'static str {
        match self {
            Commodity::Electricity => "power",
            Commodity::Hydrogen => "h2",
            Commodity::Co2 => "co2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Co2SiteKind {
    Onshore,
    Offshore,
}

impl Co2SiteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Co2SiteKind::Onshore => "onshore",
            Co2SiteKind::Offshore => "offshore",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub id: String,
    pub name: String,
    pub underground_h2_allowed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportLink {
    pub id: String,
    pub commodity: Commodity,
    pub from_zone: String,
    pub to_zone: String,
    pub length_km: f64,
    /// MW for electricity/H₂, tonnes per hour for CO₂.
    pub existing_capacity: f64,
    pub expandable: bool,
    pub loss_rate_per_1000km: f64,
    /// $ per unit of capacity per km.
    pub capital_cost_per_unit_km: f64,
    pub lifetime_years: f64,
    pub max_new_capacity: Option<f64>,
}

impl TransportLink {
    pub fn loss_fraction(&self) -> Result<f64, ValidationError> {
        derive_link_loss(self.loss_rate_per_1000km, self.length_km)
            .map_err(|e| ValidationError::new(format!("link `{}`: {}", self.id, e.message)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub zone: String,
    pub kind: ProjectKind,
    /// Cost-table key and existing-capacity sheet column.
    pub technology: String,
    /// MW (electric output, electric input for P2G, H₂ output for SMR) or t/h for capture.
    pub existing_capacity: f64,
    pub candidate: bool,
    pub efficiency: Option<f64>,
    pub charge_efficiency: Option<f64>,
    pub discharge_efficiency: Option<f64>,
    pub min_gen_fraction: f64,
    pub ramp_fraction_per_hour: Option<f64>,
    pub fuel: Option<Fuel>,
    pub capacity_credit: Option<f64>,
    /// Host project of a CCS retrofit.
    pub parent: Option<String>,
    pub capture_rate: Option<f64>,
    /// MWh of electricity per tonne captured.
    pub ele_per_tonne: Option<f64>,
    pub existing_energy_mwh: f64,
    /// Fixed energy-to-power ratio (e.g. 10 h pumped hydro).
    pub duration_hours: Option<f64>,
    pub max_new_capacity: Option<f64>,
    /// Injection/withdrawal limit for H₂ storage; unconstrained when absent.
    pub power_limit_mw: Option<f64>,
}

impl Project {
    /// Bare project record; callers fill the kind-specific fields.
    pub fn new(id: &str, zone: &str, kind: ProjectKind, technology: &str) -> Self {
        Self {
            id: id.into(),
            zone: zone.into(),
            kind,
            technology: technology.into(),
            existing_capacity: 0.0,
            candidate: false,
            efficiency: None,
            charge_efficiency: None,
            discharge_efficiency: None,
            min_gen_fraction: 0.0,
            ramp_fraction_per_hour: None,
            fuel: None,
            capacity_credit: None,
            parent: None,
            capture_rate: None,
            ele_per_tonne: None,
            existing_energy_mwh: 0.0,
            duration_hours: None,
            max_new_capacity: None,
            power_limit_mw: None,
        }
    }

    pub fn capacity_credit(&self) -> f64 {
        self.capacity_credit
            .unwrap_or_else(|| self.kind.default_capacity_credit())
    }

    /// (charge, discharge) efficiencies of a storage asset. A single
    /// `efficiency` applies on charge with lossless discharge.
    pub fn storage_efficiencies(&self) -> (f64, f64) {
        match (self.charge_efficiency, self.discharge_efficiency) {
            (None, None) => (self.efficiency.unwrap_or(1.0), 1.0),
            (c, d) => (c.unwrap_or(1.0), d.unwrap_or(1.0)),
        }
    }

    pub fn conversion_efficiency(&self) -> f64 {
        self.efficiency.unwrap_or(1.0)
    }
}

/// Costs per technology. Power capacity in $/kW, energy in $/kWh, capture
/// and CO₂ injection capacity in $ per tonne/hour; variable O&M per MWh of
/// activity (per tonne for capture).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub technology: String,
    pub capital_cost: f64,
    pub energy_capital_cost: f64,
    pub fixed_om: f64,
    pub variable_om: f64,
    pub lifetime_years: f64,
}

impl CostRecord {
    pub fn zero(technology: &str, lifetime_years: f64) -> Self {
        Self {
            technology: technology.into(),
            capital_cost: 0.0,
            energy_capital_cost: 0.0,
            fixed_om: 0.0,
            variable_om: 0.0,
            lifetime_years,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelPrice {
    pub fuel: Fuel,
    /// `None` for the national default.
    pub zone: Option<String>,
    pub price_per_mmbtu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Co2Site {
    pub zone: String,
    pub kind: Co2SiteKind,
    /// Cumulative tonnes; `None` is unbounded.
    pub capacity_tonnes: Option<f64>,
}

impl Co2Site {
    pub fn id(&self) -> String {
        format!("{}_{}", self.zone, self.kind.as_str())
    }
}

/// Full-year hourly inputs (8760 values per series, non-leap calendar).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalendarSeries {
    pub demand: IndexMap<String, Vec<f64>>,
    pub capacity_factors: IndexMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDataset {
    pub period: Period,
    pub zones: Vec<Zone>,
    pub links: Vec<TransportLink>,
    pub projects: Vec<Project>,
    pub costs: IndexMap<String, CostRecord>,
    pub fuel_prices: Vec<FuelPrice>,
    pub emission_factors: IndexMap<Fuel, f64>,
    pub co2_sites: Vec<Co2Site>,
    /// Zonal shares of national H₂ demand; derived from electricity demand when absent.
    pub h2_shares: Option<IndexMap<String, f64>>,
    /// Monthly average capacity factor per hydro project.
    pub hydro_monthly_cf: IndexMap<String, [f64; 12]>,
    pub calendar: Option<CalendarSeries>,
}

/// Item a validation finding refers to; the loader maps it to file and line.
#[derive(Debug, Clone, PartialEq)]
pub enum Entity {
    Zone(usize),
    Link(usize),
    Project(usize),
    Cost(String),
    FuelPrice(usize),
    Co2Site(usize),
    H2Share(String),
    Dataset,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn in_unit(x: f64) -> bool {
    x > 0.0 && x <= 1.0
}

impl SystemDataset {
    pub fn new(period: Period) -> Self {
        Self {
            period,
            zones: Vec::new(),
            links: Vec::new(),
            projects: Vec::new(),
            costs: IndexMap::new(),
            fuel_prices: Vec::new(),
            emission_factors: IndexMap::new(),
            co2_sites: Vec::new(),
            h2_shares: None,
            hydro_monthly_cf: IndexMap::new(),
            calendar: None,
        }
    }

    pub fn zone_index(&self, id: &str) -> Option<usize> {
        self.zones.iter().position(|z| z.id == id)
    }

    pub fn project(&self, id: &str) -> Option<&Project> {
        self.projects.iter().find(|p| p.id == id)
    }

    pub fn cost(&self, technology: &str) -> Option<&CostRecord> {
        self.costs.get(technology)
    }

    /// Zone-specific price if present, otherwise the national default.
    pub fn fuel_price(&self, fuel: Fuel, zone: &str) -> Option<f64> {
        self.fuel_prices
            .iter()
            .find(|p| p.fuel == fuel && p.zone.as_deref() == Some(zone))
            .or_else(|| {
                self.fuel_prices
                    .iter()
                    .find(|p| p.fuel == fuel && p.zone.is_none())
            })
            .map(|p| p.price_per_mmbtu)
    }

    pub fn emission_factor(&self, fuel: Fuel) -> Option<f64> {
        self.emission_factors.get(&fuel).copied()
    }

    pub fn sites_in<'a>(&'a self, zone: &'a str) -> impl Iterator<Item = &'a Co2Site> + 'a {
        self.co2_sites.iter().filter(move |s| s.zone == zone)
    }

    /// Checks cross-references and unit ranges.
    pub fn validate(&self) -> Result<(), ValidationError> {
        self.validate_entities().map_err(|(_, e)| e)
    }

    pub(crate) fn validate_entities(&self) -> Result<(), (Entity, ValidationError)> {
        let fail = |entity: Entity, msg: String| Err((entity, ValidationError::new(msg)));
        if self.period.discount_rate < 0.0 {
            return fail(Entity::Dataset, "discount rate must be non-negative".into());
        }
        for (i, z) in self.zones.iter().enumerate() {
            if !valid_id(&z.id) {
                return fail(Entity::Zone(i), format!("invalid zone id `{}`", z.id));
            }
            if self.zones[..i].iter().any(|o| o.id == z.id) {
                return fail(Entity::Zone(i), format!("duplicate zone `{}`", z.id));
            }
        }
        if self.zones.is_empty() {
            return fail(Entity::Dataset, "dataset has no zones".into());
        }

        for (i, l) in self.links.iter().enumerate() {
            if !valid_id(&l.id) || self.links[..i].iter().any(|o| o.id == l.id) {
                return fail(Entity::Link(i), format!("invalid or duplicate link id `{}`", l.id));
            }
            for end in [&l.from_zone, &l.to_zone] {
                if self.zone_index(end).is_none() {
                    return fail(Entity::Link(i), format!("link `{}` references unknown zone `{end}`", l.id));
                }
            }
            if l.from_zone == l.to_zone {
                return fail(Entity::Link(i), format!("link `{}` connects a zone to itself", l.id));
            }
            if l.length_km < 0.0 || l.existing_capacity < 0.0 || l.capital_cost_per_unit_km < 0.0 {
                return fail(Entity::Link(i), format!("link `{}` has a negative length, capacity or cost", l.id));
            }
            if l.lifetime_years < 1.0 {
                return fail(Entity::Link(i), format!("link `{}` lifetime must be at least 1 year", l.id));
            }
            if let Err(e) = l.loss_fraction() {
                return Err((Entity::Link(i), e));
            }
        }

        for (i, p) in self.projects.iter().enumerate() {
            let here = || Entity::Project(i);
            if !valid_id(&p.id) || self.projects[..i].iter().any(|o| o.id == p.id) {
                return fail(here(), format!("invalid or duplicate project id `{}`", p.id));
            }
            let Some(zi) = self.zone_index(&p.zone) else {
                return fail(here(), format!("project `{}` references unknown zone `{}`", p.id, p.zone));
            };
            if self.projects[..i]
                .iter()
                .any(|o| o.zone == p.zone && o.technology == p.technology)
            {
                return fail(
                    here(),
                    format!("zone `{}` has two projects with technology `{}`", p.zone, p.technology),
                );
            }
            if self.cost(&p.technology).is_none() {
                return fail(here(), format!("no cost record for technology `{}`", p.technology));
            }
            if p.existing_capacity < 0.0 || p.existing_energy_mwh < 0.0 {
                return fail(here(), format!("project `{}` has negative existing capacity", p.id));
            }
            if p.max_new_capacity.is_some_and(|m| m < 0.0) || p.power_limit_mw.is_some_and(|m| m < 0.0) {
                return fail(here(), format!("project `{}` has a negative capacity limit", p.id));
            }
            for (label, eff) in [
                ("efficiency", p.efficiency),
                ("charge_efficiency", p.charge_efficiency),
                ("discharge_efficiency", p.discharge_efficiency),
            ] {
                if let Some(e) = eff {
                    if !in_unit(e) {
                        return fail(here(), format!("project `{}`: {label} {e} outside (0, 1]", p.id));
                    }
                }
            }
            if !(0.0..=1.0).contains(&p.min_gen_fraction) {
                return fail(here(), format!("project `{}`: min_gen_fraction outside [0, 1]", p.id));
            }
            if let Some(r) = p.ramp_fraction_per_hour {
                if !in_unit(r) {
                    return fail(here(), format!("project `{}`: ramp fraction outside (0, 1]", p.id));
                }
            }
            if p.capacity_credit.is_some_and(|c| !(0.0..=1.0).contains(&c)) {
                return fail(here(), format!("project `{}`: capacity credit outside [0, 1]", p.id));
            }
            let needs_eff = p.kind.burns_fuel() || p.kind == ProjectKind::P2g || p.kind.is_g2p();
            if needs_eff && p.efficiency.is_none() {
                return fail(here(), format!("project `{}` ({}) needs an efficiency", p.id, p.kind));
            }
            if p.kind.burns_fuel() && p.fuel.is_none() {
                return fail(here(), format!("project `{}` ({}) needs a fuel", p.id, p.kind));
            }
            if let Some(fuel) = p.fuel.filter(|_| p.kind.burns_fuel()) {
                if self.fuel_price(fuel, &p.zone).is_none() {
                    return fail(here(), format!("no {} price for zone `{}`", fuel.as_str(), p.zone));
                }
            }
            if p.kind == ProjectKind::H2StorageUnderground && !self.zones[zi].underground_h2_allowed {
                return fail(
                    here(),
                    format!("underground H2 storage `{}` in zone `{}` without a cavern site", p.id, p.zone),
                );
            }
            if p.kind.is_capture() && p.ele_per_tonne.is_none_or(|e| e < 0.0) {
                return fail(here(), format!("capture project `{}` needs ele_per_tonne >= 0", p.id));
            }
            if p.kind == ProjectKind::CcsRetrofit {
                let Some(parent) = p.parent.as_deref().and_then(|id| self.project(id)) else {
                    return fail(here(), format!("CCS retrofit `{}` has no valid parent project", p.id));
                };
                if !matches!(parent.kind, ProjectKind::ThermalGen | ProjectKind::Smr | ProjectKind::Gasification) {
                    return fail(here(), format!("CCS parent `{}` must be thermal, SMR or gasification", parent.id));
                }
                if parent.zone != p.zone {
                    return fail(here(), format!("CCS retrofit `{}` must share its parent's zone", p.id));
                }
                if !p.capture_rate.is_some_and(in_unit) {
                    return fail(here(), format!("CCS retrofit `{}` needs capture_rate in (0, 1]", p.id));
                }
            }
            if p.kind == ProjectKind::Hydro && !self.hydro_monthly_cf.contains_key(&p.id) {
                return fail(here(), format!("hydro project `{}` has no monthly capacity factors", p.id));
            }
        }

        for (tech, c) in &self.costs {
            let values = [c.capital_cost, c.energy_capital_cost, c.fixed_om, c.variable_om];
            if values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
                return fail(Entity::Cost(tech.clone()), format!("cost record `{tech}` has a negative value"));
            }
            if c.lifetime_years < 1.0 {
                return fail(Entity::Cost(tech.clone()), format!("cost record `{tech}` lifetime must be >= 1"));
            }
        }

        for (i, fp) in self.fuel_prices.iter().enumerate() {
            if fp.price_per_mmbtu < 0.0 {
                return fail(Entity::FuelPrice(i), "negative fuel price".into());
            }
            if let Some(z) = &fp.zone {
                if self.zone_index(z).is_none() {
                    return fail(Entity::FuelPrice(i), format!("fuel price for unknown zone `{z}`"));
                }
            }
        }

        for (i, s) in self.co2_sites.iter().enumerate() {
            if self.zone_index(&s.zone).is_none() {
                return fail(Entity::Co2Site(i), format!("CO2 site in unknown zone `{}`", s.zone));
            }
            if s.capacity_tonnes.is_some_and(|c| c < 0.0) {
                return fail(Entity::Co2Site(i), "negative CO2 storage capacity".into());
            }
            if self.co2_sites[..i].iter().any(|o| o.zone == s.zone && o.kind == s.kind) {
                return fail(Entity::Co2Site(i), format!("duplicate {} site in `{}`", s.kind.as_str(), s.zone));
            }
        }

        if let Some(shares) = &self.h2_shares {
            for (z, &v) in shares {
                if self.zone_index(z).is_none() {
                    return fail(Entity::H2Share(z.clone()), format!("H2 demand share for unknown zone `{z}`"));
                }
                if v < 0.0 {
                    return fail(Entity::H2Share(z.clone()), "negative H2 demand share".into());
                }
            }
            let total: f64 = shares.values().sum();
            if !shares.is_empty() && (total - 1.0).abs() > 1e-9 {
                return fail(Entity::Dataset, format!("H2 demand shares sum to {total}, expected 1"));
            }
        }

        for (pid, cfs) in &self.hydro_monthly_cf {
            if self.project(pid).is_none() {
                return fail(Entity::Dataset, format!("hydro capacity factors for unknown project `{pid}`"));
            }
            if cfs.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return fail(Entity::Dataset, format!("hydro capacity factor of `{pid}` outside [0, 1]"));
            }
        }

        if let Some(cal) = &self.calendar {
            for z in &self.zones {
                match cal.demand.get(&z.id) {
                    Some(v) if v.len() == 8760 => {
                        if v.iter().any(|d| *d < 0.0 || !d.is_finite()) {
                            return fail(Entity::Dataset, format!("negative demand in zone `{}`", z.id));
                        }
                    }
                    _ => return fail(Entity::Dataset, format!("zone `{}` lacks a full year of demand", z.id)),
                }
            }
            for p in self.projects.iter().filter(|p| p.kind == ProjectKind::VreGen) {
                match cal.capacity_factors.get(&p.id) {
                    Some(v) if v.len() == 8760 => {
                        if v.iter().any(|c| !(0.0..=1.0).contains(c)) {
                            return fail(Entity::Dataset, format!("capacity factor of `{}` outside [0, 1]", p.id));
                        }
                    }
                    _ => return fail(Entity::Dataset, format!("VRE project `{}` lacks capacity factors", p.id)),
                }
            }
        }
        Ok(())
    }
}

/// Names of the tables the loader reads.
pub const MANDATORY_TABLES: [&str; 9] = [
    "zones.csv",
    "links.csv",
    "projects.csv",
    "costs.csv",
    "fuel_prices.csv",
    "demand.csv",
    "capacity_factors.csv",
    "existing_capacity.csv",
    "h2_demand.csv",
];

pub const OPTIONAL_TABLES: [&str; 4] = [
    "period.csv",
    "co2_sites.csv",
    "emission_factors.csv",
    "hydro_monthly_cf.csv",
];

pub(crate) fn table_path(dir: &std::path::Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::regional_dataset;

    fn invalid(edit: impl FnOnce(&mut SystemDataset)) -> String {
        let mut ds = regional_dataset();
        edit(&mut ds);
        ds.validate().expect_err("edit should invalidate").message
    }

    #[test]
    fn kinds_round_trip_through_text() {
        for k in ProjectKind::ALL {
            assert_eq!(ProjectKind::parse(k.as_str()), Some(k));
        }
        assert_eq!(ProjectKind::parse("Battery"), None);
    }

    #[test]
    fn zone_price_overrides_national() {
        let ds = regional_dataset();
        assert_eq!(ds.fuel_price(Fuel::Gas, "north"), Some(12.5));
        assert_eq!(ds.fuel_price(Fuel::Gas, "south"), Some(13.68));
    }

    #[test]
    fn default_credits() {
        assert_eq!(ProjectKind::ThermalGen.default_capacity_credit(), 1.0);
        assert_eq!(ProjectKind::VreGen.default_capacity_credit(), 0.0);
        assert_eq!(ProjectKind::Battery.default_capacity_credit(), 0.0);
    }

    #[test]
    fn validation_catches_bad_entities() {
        assert!(invalid(|ds| ds.projects[0].zone = "east".into()).contains("unknown zone `east`"));
        assert!(invalid(|ds| ds.projects[0].efficiency = Some(1.2)).contains("outside (0, 1]"));
        assert!(invalid(|ds| ds.projects[0].min_gen_fraction = -0.1).contains("min_gen_fraction"));
        assert!(invalid(|ds| {
            let dup = ds.projects[1].clone();
            ds.projects.push(Project { id: "gas_north_2".into(), ..dup });
        })
        .contains("two projects with technology `gas_ccgt`"));
        assert!(invalid(|ds| {
            ds.costs.shift_remove("battery");
        })
        .contains("no cost record for technology `battery`"));
        assert!(invalid(|ds| ds.zones[1].underground_h2_allowed = false).contains("h2_cavern_south"));
        assert!(invalid(|ds| ds.links[0].to_zone = "north".into()).contains("connects a zone to itself"));
        assert!(invalid(|ds| ds.fuel_prices.retain(|f| f.fuel != Fuel::Coal)).contains("no coal price"));
        assert!(invalid(|ds| ds.calendar.as_mut().unwrap().capacity_factors["wind_north"][5] = 1.5)
            .contains("outside [0, 1]"));
        assert!(invalid(|ds| {
            ds.projects.retain(|p| p.id != "coal_north");
        })
        .contains("no valid parent"));
    }
}

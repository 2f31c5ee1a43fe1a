//! Assembles the joint power/H₂/CO₂ linear program.

mod carbon;
mod hydrogen;
mod power;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use gridcap_lp::{LinExpr, LpBuilder, LpModel, Sense, Var};

use crate::data::{annualize_capital, Commodity, CostRecord, Project, ProjectKind, SeriesTable, SystemDataset};
use crate::error::{GridcapError, Result, ValidationError};

/// Where the hydrogen demand sits relative to the power system's own H₂ chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// One H₂ network shared by industrial demand and power-to-gas-to-power.
    #[default]
    Coupled,
    /// Industrial demand is met on a separate bus by dedicated electrolyzers
    /// (and fossil H₂ when allowed); the power sector's H₂ chain is storage only.
    Decoupled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    Systemwide,
    Zonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityCap {
    pub label: String,
    pub kinds: Vec<ProjectKind>,
    /// Optional technology filter (e.g. only coal among thermal units).
    #[serde(default)]
    pub technologies: Vec<String>,
    pub max_mw: f64,
}

impl CapacityCap {
    pub fn applies_to(&self, p: &Project) -> bool {
        self.kinds.contains(&p.kind)
            && (self.technologies.is_empty() || self.technologies.contains(&p.technology))
    }
}

/// Installed capacities used when capacity is not a decision.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FixedCapacities {
    /// Project id → (power or capture capacity, energy capacity).
    pub projects: IndexMap<String, (f64, f64)>,
    pub links: IndexMap<String, f64>,
    /// Site id → injection capacity (t/h); absent means uncosted/unbounded rate.
    pub sites: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum CapacityMode {
    #[default]
    Plan,
    Fixed(FixedCapacities),
}

/// Penalized slack on balance rows (dispatch validation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackPenalties {
    /// $ per MWh of unserved or spilled electricity.
    pub power: f64,
    /// $ per MWh of unserved or vented hydrogen.
    pub hydrogen: f64,
    /// $ per tonne above the emission cap.
    pub carbon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub electricity: bool,
    pub hydrogen: bool,
    pub co2: bool,
}

impl Default for Expansion {
    fn default() -> Self {
        Self {
            electricity: true,
            hydrogen: true,
            co2: true,
        }
    }
}

impl Expansion {
    pub fn allows(&self, c: Commodity) -> bool {
        match c {
            Commodity::Electricity => self.electricity,
            Commodity::Hydrogen => self.hydrogen,
            Commodity::Co2 => self.co2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    /// Net annual emissions limit in tonnes.
    pub emission_cap_tonnes: Option<f64>,
    pub capacity_caps: Vec<CapacityCap>,
    /// Annual hydrogen demand in MWh (LHV).
    pub h2_demand_mwh: f64,
    pub coupling: Coupling,
    /// Planning reserve margin over peak; `None` disables the constraint.
    pub reserve_margin: Option<f64>,
    pub reserve_scope: Scope,
    pub expansion: Expansion,
    pub capacity_mode: CapacityMode,
    pub slack: Option<SlackPenalties>,
    /// Adds unit-cost slack to balance, cap and reserve rows so infeasible
    /// inputs still solve; used to locate conflicting rows.
    pub elastic: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            emission_cap_tonnes: None,
            capacity_caps: Vec::new(),
            h2_demand_mwh: 0.0,
            coupling: Coupling::Coupled,
            reserve_margin: None,
            reserve_scope: Scope::Systemwide,
            expansion: Expansion::default(),
            capacity_mode: CapacityMode::Plan,
            slack: None,
            elastic: false,
        }
    }
}

/// Hydrogen bus a project or load attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bus {
    Grid,
    Industrial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostCategory {
    Investment,
    FixedOm,
    VariableOm,
    Fuel,
    Penalty,
}

impl CostCategory {
    pub const ALL: [CostCategory; 5] = [
        CostCategory::Investment,
        CostCategory::FixedOm,
        CostCategory::VariableOm,
        CostCategory::Fuel,
        CostCategory::Penalty,
    ];
}

/// One balance row's two sides, kept for post-solve residual checks.
#[derive(Debug, Clone)]
pub struct BalanceRow {
    pub name: String,
    pub commodity: Commodity,
    pub bus: Bus,
    pub zone: usize,
    pub timepoint: usize,
    pub supply: LinExpr,
    pub demand: LinExpr,
}

/// Decision variables and derived expressions of one project.
#[derive(Debug, Clone)]
pub struct ProjectVars {
    pub project: Project,
    pub zone: usize,
    pub bus: Bus,
    pub new_capacity: Option<Var>,
    /// Power (MW), H₂-storage energy (MWh) or capture (t/h) capacity.
    pub capacity: LinExpr,
    pub new_energy: Option<Var>,
    pub energy: Option<LinExpr>,
    /// Main activity per timepoint: generation, discharge, H₂ output or capture.
    pub output: Vec<Var>,
    /// Charge (storage) or electric input (electrolyzer) per timepoint.
    pub input: Vec<Var>,
    pub state: Vec<Var>,
    /// Fuel burn in MMBtu/h per timepoint.
    pub burn: Vec<LinExpr>,
    /// Electricity drawn per timepoint (capture loads).
    pub electricity_use: Vec<LinExpr>,
    /// Gross emissions in t/h per timepoint (before capture).
    pub emissions: Vec<LinExpr>,
    /// Annual cost by category.
    pub cost: IndexMap<CostCategory, LinExpr>,
}

#[derive(Debug, Clone)]
pub struct LinkVars {
    pub index: usize,
    pub new_capacity: Option<Var>,
    pub capacity: LinExpr,
    pub flow: Vec<Var>,
    pub loss_from: Vec<Var>,
    pub loss_to: Vec<Var>,
    pub cost: LinExpr,
}

#[derive(Debug, Clone)]
pub struct SiteVars {
    pub index: usize,
    pub injection: Vec<Var>,
    pub injection_capacity: Option<LinExpr>,
    pub new_injection_capacity: Option<Var>,
    pub cost: LinExpr,
}

/// Slack variables of a row, with the side they relieve.
#[derive(Debug, Clone)]
pub struct SlackVar {
    pub row: String,
    pub commodity: Option<Commodity>,
    /// Positive slack adds supply (unserved demand); negative adds demand (spill).
    pub shortfall: Option<Var>,
    pub surplus: Option<Var>,
    pub zone: Option<usize>,
    pub timepoint: Option<usize>,
}

/// Assembled model plus everything needed to interpret its solution.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub lp: LpModel,
    pub projects: Vec<ProjectVars>,
    pub links: Vec<LinkVars>,
    pub sites: Vec<SiteVars>,
    pub balances: Vec<BalanceRow>,
    /// Annual gross emissions (tonnes) before any capture.
    pub gross_emissions: LinExpr,
    /// Annual tonnes captured (CCS and DAC).
    pub captured: LinExpr,
    pub costs: IndexMap<CostCategory, LinExpr>,
    pub slacks: Vec<SlackVar>,
    /// Hydrogen load per zone (MW, flat).
    pub h2_load_mw: Vec<f64>,
}

impl BuiltModel {
    pub fn net_emissions(&self) -> LinExpr {
        self.gross_emissions.clone() - self.captured.clone()
    }
}

pub(crate) struct Ctx<'a> {
    pub ds: &'a SystemDataset,
    pub series: &'a SeriesTable,
    pub opts: &'a ModelOptions,
    pub lp: LpBuilder,
    pub n_t: usize,
    pub power: Vec<Vec<(LinExpr, LinExpr)>>,
    pub h2: Vec<Vec<(LinExpr, LinExpr)>>,
    pub h2_industrial: Vec<Vec<(LinExpr, LinExpr)>>,
    pub co2: Vec<Vec<(LinExpr, LinExpr)>>,
    pub projects: Vec<ProjectVars>,
    pub links: Vec<LinkVars>,
    pub sites: Vec<SiteVars>,
    pub balances: Vec<BalanceRow>,
    pub gross_emissions: LinExpr,
    pub captured: LinExpr,
    pub costs: IndexMap<CostCategory, LinExpr>,
    pub slacks: Vec<SlackVar>,
    pub h2_load_mw: Vec<f64>,
}

impl<'a> Ctx<'a> {
    fn new(ds: &'a SystemDataset, series: &'a SeriesTable, opts: &'a ModelOptions, name: &str) -> Self {
        let n_t = series.temporal.len();
        let nz = ds.zones.len();
        let grid = || vec![vec![(LinExpr::new(), LinExpr::new()); n_t]; nz];
        Self {
            ds,
            series,
            opts,
            lp: LpBuilder::new(name),
            n_t,
            power: grid(),
            h2: grid(),
            h2_industrial: grid(),
            co2: grid(),
            projects: Vec::new(),
            links: Vec::new(),
            sites: Vec::new(),
            balances: Vec::new(),
            gross_emissions: LinExpr::new(),
            captured: LinExpr::new(),
            costs: CostCategory::ALL.iter().map(|c| (*c, LinExpr::new())).collect(),
            slacks: Vec::new(),
            h2_load_mw: vec![0.0; nz],
        }
    }

    pub fn scale(&self, t: usize) -> f64 {
        self.series.temporal.scale(t)
    }

    pub fn crf_cost(&self, capital: f64, lifetime: f64) -> f64 {
        annualize_capital(capital, lifetime, self.ds.period.discount_rate)
    }

    pub fn cost_record(&self, technology: &str) -> Result<&'a CostRecord> {
        self.ds.cost(technology).ok_or_else(|| {
            ValidationError::new(format!("no cost record for technology `{technology}`")).into()
        })
    }

    pub fn add_cost(&mut self, category: CostCategory, expr: &LinExpr) {
        self.costs[&category].add_expr(expr, 1.0);
    }

    pub fn fixed(&self) -> Option<&'a FixedCapacities> {
        match &self.opts.capacity_mode {
            CapacityMode::Plan => None,
            CapacityMode::Fixed(f) => Some(f),
        }
    }

    pub fn constraint(&mut self, origin: &str, name: String, expr: LinExpr, sense: Sense, rhs: f64) -> Result<()> {
        self.lp.add_constraint(origin, name, expr, sense, rhs);
        Ok(())
    }

    pub fn var(&mut self, name: String, lo: f64, up: f64) -> Result<Var> {
        Ok(self.lp.add_var(name, lo, up))
    }

    pub fn nonneg(&mut self, name: String) -> Result<Var> {
        Ok(self.lp.add_nonneg(name))
    }

    /// Per-timepoint non-negative variables `<prefix>_t<t>`.
    pub fn series_vars(&mut self, prefix: &str) -> Result<Vec<Var>> {
        (0..self.n_t)
            .map(|t| self.nonneg(format!("{prefix}_t{t}")))
            .collect()
    }

    /// Capacity expression for a project: fixed value, or existing + new decision.
    /// Returns (new variable, capacity expression).
    pub fn capacity_of(
        &mut self,
        p: &Project,
        module: &str,
        existing: f64,
        energy: bool,
    ) -> Result<(Option<Var>, LinExpr)> {
        if let Some(fixed) = self.fixed() {
            let (power, en) = fixed.projects.get(&p.id).copied().unwrap_or((existing, existing));
            let value = if energy { en } else { power };
            return Ok((None, LinExpr::constant(value)));
        }
        let mut expr = LinExpr::constant(existing);
        if !p.candidate {
            return Ok((None, expr));
        }
        let tag = if energy { "newenergy" } else { "newcap" };
        let up = if energy { f64::INFINITY } else { p.max_new_capacity.unwrap_or(f64::INFINITY) };
        let v = self.var(format!("{module}_{tag}_{}", p.id), 0.0, up)?;
        expr.add_term(v, 1.0);
        Ok((Some(v), expr))
    }

    /// Annualized investment plus fixed O&M for one capacity expression.
    pub fn capacity_costs(
        &mut self,
        cost: &mut IndexMap<CostCategory, LinExpr>,
        new: Option<Var>,
        capacity: &LinExpr,
        capital: f64,
        fixed_om: f64,
        lifetime: f64,
        factor: f64,
    ) {
        if let Some(v) = new {
            let annual = self.crf_cost(capital, lifetime) * factor;
            cost.entry(CostCategory::Investment)
                .or_default()
                .add_term(v, annual);
        }
        cost.entry(CostCategory::FixedOm)
            .or_default()
            .add_expr(capacity, fixed_om * factor);
    }

    fn elastic_penalty(&self) -> f64 {
        1.0
    }

    /// Adds balance slack (elastic diagnosis or dispatch penalties).
    fn relax(&mut self, row: &str, commodity: Option<Commodity>, zone: Option<usize>, t: Option<usize>, penalty: f64, expr: &mut LinExpr, both: bool) -> Result<()> {
        let scale = t.map_or(1.0, |t| self.scale(t));
        let short = self.nonneg(format!("slack_short_{row}"))?;
        expr.add_term(short, 1.0);
        let mut cost = LinExpr::new();
        cost.add_term(short, penalty * scale);
        let surplus = if both {
            let s = self.nonneg(format!("slack_surplus_{row}"))?;
            expr.add_term(s, -1.0);
            cost.add_term(s, penalty * scale);
            Some(s)
        } else {
            None
        };
        self.add_cost(CostCategory::Penalty, &cost);
        self.slacks.push(SlackVar {
            row: row.to_owned(),
            commodity,
            shortfall: Some(short),
            surplus,
            zone,
            timepoint: t,
        });
        Ok(())
    }

    fn finish_balances(&mut self) -> Result<()> {
        let nz = self.ds.zones.len();
        let sets = [
            (Commodity::Electricity, Bus::Grid, "power_core", "power_balance"),
            (Commodity::Hydrogen, Bus::Grid, "hydrogen_chain", "h2_balance"),
            (Commodity::Hydrogen, Bus::Industrial, "hydrogen_chain", "h2ind_balance"),
            (Commodity::Co2, Bus::Grid, "carbon_chain", "co2_balance"),
        ];
        for (commodity, bus, origin, label) in sets {
            for z in 0..nz {
                for t in 0..self.n_t {
                    let (supply, demand) = match (commodity, bus) {
                        (Commodity::Electricity, _) => self.power[z][t].clone(),
                        (Commodity::Hydrogen, Bus::Grid) => self.h2[z][t].clone(),
                        (Commodity::Hydrogen, Bus::Industrial) => self.h2_industrial[z][t].clone(),
                        (Commodity::Co2, _) => self.co2[z][t].clone(),
                    };
                    if supply.is_constant() && demand.is_constant() && supply.constant == 0.0 && demand.constant == 0.0 {
                        continue;
                    }
                    let name = format!("{label}_{}_t{t}", self.ds.zones[z].id);
                    let mut row = supply.clone() - demand.clone();
                    let penalty = match (self.opts.slack, commodity) {
                        (Some(s), Commodity::Electricity) => Some(s.power),
                        (Some(s), Commodity::Hydrogen) => Some(s.hydrogen),
                        _ => None,
                    };
                    if self.opts.elastic {
                        let p = self.elastic_penalty();
                        self.relax(&name, Some(commodity), Some(z), Some(t), p, &mut row, true)?;
                    } else if let Some(p) = penalty {
                        self.relax(&name, Some(commodity), Some(z), Some(t), p, &mut row, true)?;
                    }
                    let (mut supply, mut demand) = (supply, demand);
                    if self.opts.elastic || penalty.is_some() {
                        let slack = self.slacks.last().expect("just added");
                        supply.add_term(slack.shortfall.expect("two-sided"), 1.0);
                        demand.add_term(slack.surplus.expect("two-sided"), 1.0);
                    }
                    self.constraint(origin, name.clone(), row, Sense::Eq, 0.0)?;
                    self.balances.push(BalanceRow {
                        name,
                        commodity,
                        bus,
                        zone: z,
                        timepoint: t,
                        supply,
                        demand,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Builds the LP for a dataset, its time series and scenario options.
pub fn build_model(ds: &SystemDataset, series: &SeriesTable, opts: &ModelOptions, name: &str) -> Result<BuiltModel> {
    if series.demand.len() != ds.zones.len() {
        return Err(ValidationError::new(format!(
            "series has demand for {} zones, dataset has {}",
            series.demand.len(),
            ds.zones.len()
        ))
        .into());
    }
    let mut ctx = Ctx::new(ds, series, opts, name);

    for z in 0..ds.zones.len() {
        for t in 0..ctx.n_t {
            ctx.power[z][t].1.constant += series.demand[z][t];
        }
    }

    for p in &ds.projects {
        match p.kind {
            ProjectKind::ThermalGen | ProjectKind::Nuclear | ProjectKind::VreGen | ProjectKind::Hydro => {
                power::generator(&mut ctx, p)?
            }
            ProjectKind::Battery | ProjectKind::PumpedHydro => power::storage(&mut ctx, p)?,
            ProjectKind::P2g => {
                hydrogen::electrolyzer(&mut ctx, p, Bus::Grid)?;
                if opts.coupling == Coupling::Decoupled {
                    let mut clone = p.clone();
                    clone.id = format!("{}_hd", p.id);
                    clone.existing_capacity = 0.0;
                    clone.candidate = true;
                    hydrogen::electrolyzer(&mut ctx, &clone, Bus::Industrial)?;
                }
            }
            ProjectKind::G2pFuelCell | ProjectKind::G2pTurbine => hydrogen::fuel_to_power(&mut ctx, p)?,
            ProjectKind::H2StorageTank | ProjectKind::H2StorageUnderground => hydrogen::storage(&mut ctx, p)?,
            ProjectKind::Smr | ProjectKind::Gasification => {
                let bus = match opts.coupling {
                    Coupling::Coupled => Bus::Grid,
                    Coupling::Decoupled => Bus::Industrial,
                };
                hydrogen::fossil(&mut ctx, p, bus)?
            }
            ProjectKind::CcsRetrofit | ProjectKind::Dac => {}
        }
    }
    // capture needs its host's burn, so it comes after every other project
    for p in ds.projects.iter().filter(|p| p.kind.is_capture()) {
        carbon::capture(&mut ctx, p)?;
    }

    hydrogen::demand(&mut ctx)?;
    for (i, link) in ds.links.iter().enumerate() {
        power::link(&mut ctx, i, link)?;
    }
    carbon::sites(&mut ctx)?;
    power::reserve(&mut ctx)?;
    power::capacity_caps(&mut ctx)?;
    carbon::emission_cap(&mut ctx)?;
    ctx.finish_balances()?;

    // the elastic relaxation minimizes total slack only, so real costs
    // cannot make a slack look attractive
    let mut objective = LinExpr::new();
    for (category, expr) in &ctx.costs {
        if !ctx.opts.elastic || *category == CostCategory::Penalty {
            objective.add_expr(expr, 1.0);
        }
    }
    ctx.lp.add_objective(&objective);

    let lp = ctx.lp.assemble().map_err(GridcapError::from)?;
    Ok(BuiltModel {
        lp,
        projects: ctx.projects,
        links: ctx.links,
        sites: ctx.sites,
        balances: ctx.balances,
        gross_emissions: ctx.gross_emissions,
        captured: ctx.captured,
        costs: ctx.costs,
        slacks: ctx.slacks,
        h2_load_mw: ctx.h2_load_mw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{flat_toy, regional_dataset};

    #[test]
    fn caps_filter_by_kind_and_technology() {
        let ds = regional_dataset();
        let cap = CapacityCap {
            label: "coal".into(),
            kinds: vec![ProjectKind::ThermalGen],
            technologies: vec!["coal".into()],
            max_mw: 0.0,
        };
        let hits: Vec<&str> = ds.projects.iter().filter(|p| cap.applies_to(p)).map(|p| p.id.as_str()).collect();
        assert_eq!(hits, ["coal_north"]);
        let all_thermal = CapacityCap { technologies: vec![], ..cap };
        assert!(ds.projects.iter().filter(|p| all_thermal.applies_to(p)).count() > 1);
    }

    #[test]
    fn expansion_per_commodity() {
        let e = Expansion { hydrogen: false, ..Expansion::default() };
        assert!(e.allows(Commodity::Electricity) && e.allows(Commodity::Co2));
        assert!(!e.allows(Commodity::Hydrogen));
    }

    #[test]
    fn series_must_cover_every_zone() {
        let toy = flat_toy();
        let mut ds = toy.dataset.clone();
        ds.zones.push(ds.zones[0].clone());
        ds.zones[1].id = "z2".into();
        assert!(build_model(&ds, &toy.series, &ModelOptions::default(), "x").is_err());
    }

    #[test]
    fn flat_toy_builds_one_balance_row_per_hour() {
        let toy = flat_toy();
        let built = build_model(&toy.dataset, &toy.series, &ModelOptions::default(), "flat").unwrap();
        let power_rows = built.lp.constraints.iter().filter(|c| c.origin == "power_core").count();
        assert!(power_rows >= toy.series.temporal.len());
        assert!(built.lp.constraints.iter().all(|c| !c.name.is_empty()));
    }
}

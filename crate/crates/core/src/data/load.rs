//! CSV loader. Every error names the file and, where possible, the line.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use super::*;
use crate::temporal::{daily_profile_from_rows, month_start, Period, DAYS_IN_MONTH};

struct Table {
    path: PathBuf,
    headers: Vec<String>,
    rows: Vec<(usize, csv::StringRecord)>,
}

struct Row<'a> {
    table: &'a Table,
    line: usize,
    record: &'a csv::StringRecord,
}

impl Table {
    fn read(dir: &Path, name: &str, required: bool) -> Result<Option<Table>, ValidationError> {
        let path = table_path(dir, name);
        if !path.exists() {
            return if required {
                Err(ValidationError::at(&path, None, format!("missing table {name}")))
            } else {
                Ok(None)
            };
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(&path)
            .map_err(|e| ValidationError::at(&path, None, e.to_string()))?;
        let headers = reader
            .headers()
            .map_err(|e| ValidationError::at(&path, None, e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize);
                ValidationError::at(&path, line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            rows.push((line, record));
        }
        Ok(Some(Table { path, headers, rows }))
    }

    fn require_columns(&self, columns: &[&str]) -> Result<(), ValidationError> {
        for c in columns {
            if !self.headers.iter().any(|h| h == c) {
                return Err(ValidationError::at(&self.path, Some(1), format!("missing column `{c}`")));
            }
        }
        Ok(())
    }

    fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.rows.iter().map(|(line, record)| Row {
            table: self,
            line: *line,
            record,
        })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}

impl Row<'_> {
    fn err(&self, message: impl Into<String>) -> ValidationError {
        ValidationError::at(&self.table.path, Some(self.line), message)
    }

    fn cell(&self, column: &str) -> Option<&str> {
        self.table
            .column(column)
            .and_then(|i| self.record.get(i))
            .filter(|s| !s.is_empty())
    }

    fn text(&self, column: &str) -> Result<&str, ValidationError> {
        self.cell(column)
            .ok_or_else(|| self.err(format!("empty `{column}`")))
    }

    fn opt_num(&self, column: &str) -> Result<Option<f64>, ValidationError> {
        self.cell(column)
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(format!("`{column}` is not a finite number: `{s}`")))
            })
            .transpose()
    }

    fn num(&self, column: &str) -> Result<f64, ValidationError> {
        self.opt_num(column)?
            .ok_or_else(|| self.err(format!("empty `{column}`")))
    }

    fn int(&self, column: &str) -> Result<u32, ValidationError> {
        let s = self.text(column)?;
        s.parse()
            .map_err(|_| self.err(format!("`{column}` is not a non-negative integer: `{s}`")))
    }

    fn flag(&self, column: &str, default: bool) -> Result<bool, ValidationError> {
        match self.cell(column) {
            None => Ok(default),
            Some(s) => match s.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(self.err(format!("`{column}` is not a boolean: `{s}`"))),
            },
        }
    }

    fn id(&self, column: &str) -> Result<String, ValidationError> {
        let s = self.text(column)?;
        if valid_id(s) {
            Ok(s.to_owned())
        } else {
            Err(self.err(format!("invalid identifier `{s}` in `{column}`")))
        }
    }
}

/// Where each loaded entity came from.
#[derive(Debug, Default, Clone)]
struct LoadReport {
    zones: Vec<usize>,
    links: Vec<usize>,
    projects: Vec<usize>,
    costs: HashMap<String, usize>,
    fuel_prices: Vec<usize>,
    sites: Vec<usize>,
    h2: HashMap<String, usize>,
    dir: PathBuf,
}

impl LoadReport {
    fn locate(&self, entity: &Entity) -> (PathBuf, Option<usize>) {
        let at = |file: &str, line: Option<usize>| (table_path(&self.dir, file), line);
        match entity {
            Entity::Zone(i) => at("zones.csv", self.zones.get(*i).copied()),
            Entity::Link(i) => at("links.csv", self.links.get(*i).copied()),
            Entity::Project(i) => at("projects.csv", self.projects.get(*i).copied()),
            Entity::Cost(t) => at("costs.csv", self.costs.get(t).copied()),
            Entity::FuelPrice(i) => at("fuel_prices.csv", self.fuel_prices.get(*i).copied()),
            Entity::Co2Site(i) => at("co2_sites.csv", self.sites.get(*i).copied()),
            Entity::H2Share(z) => at("h2_demand.csv", self.h2.get(z).copied()),
            Entity::Dataset => (self.dir.clone(), None),
        }
    }
}

/// Loads and validates a dataset directory.
pub fn load_system_inputs(dir: &Path) -> Result<SystemDataset, ValidationError> {
    if !dir.is_dir() {
        return Err(ValidationError::at(dir, None, "dataset directory not found"));
    }
    let mut report = LoadReport {
        dir: dir.to_owned(),
        ..Default::default()
    };
    let tables: HashMap<&str, Option<Table>> = MANDATORY_TABLES
        .iter()
        .map(|n| (*n, true))
        .chain(OPTIONAL_TABLES.iter().map(|n| (*n, false)))
        .map(|(n, req)| Table::read(dir, n, req).map(|t| (n, t)))
        .collect::<Result<_, _>>()?;
    let table = |name: &str| tables[name].as_ref();

    let period = match table("period.csv") {
        Some(t) => read_period(t)?,
        None => Period::default(),
    };
    let mut ds = SystemDataset::new(period);

    let t = table("zones.csv").expect("mandatory");
    t.require_columns(&["zone"])?;
    for row in t.rows() {
        let id = row.id("zone")?;
        let name = row.cell("name").unwrap_or(&id).to_owned();
        ds.zones.push(Zone {
            id,
            name,
            underground_h2_allowed: row.flag("underground_h2_allowed", false)?,
        });
        report.zones.push(row.line);
    }

    let t = table("links.csv").expect("mandatory");
    t.require_columns(&["link", "commodity", "from_zone", "to_zone", "length_km"])?;
    for row in t.rows() {
        let commodity_text = row.text("commodity")?;
        let commodity = Commodity::parse(commodity_text)
            .ok_or_else(|| row.err(format!("unknown commodity `{commodity_text}`")))?;
        let from_zone = row.id("from_zone")?;
        let to_zone = row.id("to_zone")?;
        for z in [&from_zone, &to_zone] {
            if ds.zone_index(z).is_none() {
                return Err(row.err(format!("unknown zone `{z}`")));
            }
        }
        ds.links.push(TransportLink {
            id: row.id("link")?,
            commodity,
            from_zone,
            to_zone,
            length_km: row.num("length_km")?,
            existing_capacity: row.opt_num("existing_capacity")?.unwrap_or(0.0),
            expandable: row.flag("expandable", false)?,
            loss_rate_per_1000km: row.opt_num("loss_rate_per_1000km")?.unwrap_or(0.0),
            capital_cost_per_unit_km: row.opt_num("capital_cost_per_unit_km")?.unwrap_or(0.0),
            lifetime_years: row.opt_num("lifetime_years")?.unwrap_or(50.0),
            max_new_capacity: row.opt_num("max_new_capacity")?,
        });
        report.links.push(row.line);
    }

    let t = table("projects.csv").expect("mandatory");
    t.require_columns(&["project", "zone", "kind", "technology"])?;
    for row in t.rows() {
        let zone = row.id("zone")?;
        if ds.zone_index(&zone).is_none() {
            return Err(row.err(format!("unknown zone `{zone}`")));
        }
        let kind_text = row.text("kind")?;
        let kind = ProjectKind::parse(kind_text)
            .ok_or_else(|| row.err(format!("unknown project kind `{kind_text}`")))?;
        let fuel = row
            .cell("fuel")
            .map(|f| Fuel::parse(f).ok_or_else(|| row.err(format!("unknown fuel `{f}`"))))
            .transpose()?;
        let mut p = Project::new(&row.id("project")?, &zone, kind, &row.id("technology")?);
        p.candidate = row.flag("candidate", false)?;
        p.efficiency = row.opt_num("efficiency")?;
        p.charge_efficiency = row.opt_num("charge_efficiency")?;
        p.discharge_efficiency = row.opt_num("discharge_efficiency")?;
        p.min_gen_fraction = row.opt_num("min_gen_fraction")?.unwrap_or(0.0);
        p.ramp_fraction_per_hour = row.opt_num("ramp_fraction_per_hour")?;
        p.fuel = fuel;
        p.capacity_credit = row.opt_num("capacity_credit")?;
        p.parent = row.cell("parent").map(str::to_owned);
        p.capture_rate = row.opt_num("capture_rate")?;
        p.ele_per_tonne = row.opt_num("ele_per_tonne")?;
        p.existing_energy_mwh = row.opt_num("existing_energy_mwh")?.unwrap_or(0.0);
        p.duration_hours = row.opt_num("duration_hours")?;
        p.max_new_capacity = row.opt_num("max_new_capacity")?;
        p.power_limit_mw = row.opt_num("power_limit_mw")?;
        ds.projects.push(p);
        report.projects.push(row.line);
    }

    let t = table("existing_capacity.csv").expect("mandatory");
    t.require_columns(&["zone"])?;
    for row in t.rows() {
        let zone = row.id("zone")?;
        if ds.zone_index(&zone).is_none() {
            return Err(row.err(format!("unknown zone `{zone}`")));
        }
        for tech in t.headers.iter().filter(|h| *h != "zone") {
            let value = row.opt_num(tech)?.unwrap_or(0.0);
            if value == 0.0 {
                continue;
            }
            if value < 0.0 {
                return Err(row.err(format!("negative existing capacity for `{tech}`")));
            }
            let mut matches = ds
                .projects
                .iter_mut()
                .filter(|p| p.zone == zone && &p.technology == tech);
            let Some(project) = matches.next() else {
                return Err(row.err(format!(
                    "existing capacity for `{tech}` in `{zone}` but no such project"
                )));
            };
            project.existing_capacity = value;
            if matches.next().is_some() {
                return Err(row.err(format!(
                    "existing capacity for `{tech}` in `{zone}` matches more than one project"
                )));
            }
        }
    }

    let t = table("costs.csv").expect("mandatory");
    t.require_columns(&["technology", "capital_cost"])?;
    for row in t.rows() {
        let technology = row.id("technology")?;
        if ds.costs.contains_key(&technology) {
            return Err(row.err(format!("duplicate cost record `{technology}`")));
        }
        let record = CostRecord {
            technology: technology.clone(),
            capital_cost: row.num("capital_cost")?,
            energy_capital_cost: row.opt_num("energy_capital_cost")?.unwrap_or(0.0),
            fixed_om: row.opt_num("fixed_om")?.unwrap_or(0.0),
            variable_om: row.opt_num("variable_om")?.unwrap_or(0.0),
            lifetime_years: row.num("lifetime_years")?,
        };
        report.costs.insert(technology.clone(), row.line);
        ds.costs.insert(technology, record);
    }

    let t = table("fuel_prices.csv").expect("mandatory");
    t.require_columns(&["fuel", "price_per_mmbtu"])?;
    for row in t.rows() {
        let f = row.text("fuel")?;
        let fuel = Fuel::parse(f).ok_or_else(|| row.err(format!("unknown fuel `{f}`")))?;
        let zone = match row.cell("zone") {
            None | Some("*") => None,
            Some(z) => Some(z.to_owned()),
        };
        if ds
            .fuel_prices
            .iter()
            .any(|p| p.fuel == fuel && p.zone == zone)
        {
            return Err(row.err(format!("duplicate {f} price")));
        }
        ds.fuel_prices.push(FuelPrice {
            fuel,
            zone,
            price_per_mmbtu: row.num("price_per_mmbtu")?,
        });
        report.fuel_prices.push(row.line);
    }

    if let Some(t) = table("emission_factors.csv") {
        t.require_columns(&["fuel", "tonnes_per_mmbtu"])?;
        for row in t.rows() {
            let f = row.text("fuel")?;
            let fuel = Fuel::parse(f).ok_or_else(|| row.err(format!("unknown fuel `{f}`")))?;
            let ef = row.num("tonnes_per_mmbtu")?;
            if ef < 0.0 {
                return Err(row.err("negative emission factor"));
            }
            if ds.emission_factors.insert(fuel, ef).is_some() {
                return Err(row.err(format!("duplicate emission factor for `{f}`")));
            }
        }
    }

    if let Some(t) = table("co2_sites.csv") {
        t.require_columns(&["zone", "kind", "capacity_tonnes"])?;
        for row in t.rows() {
            let kind = match row.text("kind")? {
                "onshore" => Co2SiteKind::Onshore,
                "offshore" => Co2SiteKind::Offshore,
                other => return Err(row.err(format!("unknown CO2 site kind `{other}`"))),
            };
            let capacity_tonnes = match row.text("capacity_tonnes")? {
                "unbounded" => None,
                _ => Some(row.num("capacity_tonnes")?),
            };
            ds.co2_sites.push(Co2Site {
                zone: row.id("zone")?,
                kind,
                capacity_tonnes,
            });
            report.sites.push(row.line);
        }
    }

    let t = table("h2_demand.csv").expect("mandatory");
    t.require_columns(&["zone", "annual_share"])?;
    if !t.rows.is_empty() {
        let mut shares = IndexMap::new();
        for row in t.rows() {
            let zone = row.id("zone")?;
            if shares.insert(zone.clone(), row.num("annual_share")?).is_some() {
                return Err(row.err(format!("duplicate H2 share for `{zone}`")));
            }
            report.h2.insert(zone, row.line);
        }
        ds.h2_shares = Some(shares);
    }

    if let Some(t) = table("hydro_monthly_cf.csv") {
        t.require_columns(&["project", "month", "capacity_factor"])?;
        let mut seen: HashMap<String, [bool; 12]> = HashMap::new();
        for row in t.rows() {
            let project = row.id("project")?;
            let month = row.int("month")?;
            if !(1..=12).contains(&month) {
                return Err(row.err(format!("month {month} out of range")));
            }
            let flags = seen.entry(project.clone()).or_default();
            if flags[month as usize - 1] {
                return Err(row.err(format!("duplicate month {month} for `{project}`")));
            }
            flags[month as usize - 1] = true;
            ds.hydro_monthly_cf.entry(project).or_insert([0.0; 12])[month as usize - 1] =
                row.num("capacity_factor")?;
        }
        for (project, flags) in &seen {
            if let Some(m) = flags.iter().position(|f| !f) {
                return Err(ValidationError::at(
                    &t.path,
                    None,
                    format!("`{project}` lacks a capacity factor for month {}", m + 1),
                ));
            }
        }
    }

    let demand = read_hourly(table("demand.csv").expect("mandatory"), "zone", "demand_mw", |key| {
        match ds.zone_index(key) {
            Some(_) => Ok(()),
            None => Err(format!("demand for unknown zone `{key}`")),
        }
    })?;
    if demand.is_empty() {
        return Err(ValidationError::at(table_path(dir, "demand.csv"), None, "no demand rows"));
    }
    let cfs = read_hourly(
        table("capacity_factors.csv").expect("mandatory"),
        "project",
        "capacity_factor",
        |key| match ds.project(key) {
            Some(p) if p.kind == ProjectKind::VreGen => Ok(()),
            Some(_) => Err(format!("capacity factors given for non-VRE project `{key}`")),
            None => Err(format!("capacity factors for unknown project `{key}`")),
        },
    )?;
    ds.calendar = Some(CalendarSeries {
        demand: ds
            .zones
            .iter()
            .filter_map(|z| demand.get(&z.id).map(|v| (z.id.clone(), v.clone())))
            .collect(),
        capacity_factors: ds
            .projects
            .iter()
            .filter_map(|p| cfs.get(&p.id).map(|v| (p.id.clone(), v.clone())))
            .collect(),
    });

    ds.validate_entities().map_err(|(entity, e)| {
        let (file, line) = report.locate(&entity);
        ValidationError::at(file, line, e.message)
    })?;
    Ok(ds)
}

fn read_period(t: &Table) -> Result<Period, ValidationError> {
    t.require_columns(&["label", "discount_rate"])?;
    let mut rows = t.rows();
    let row = rows
        .next()
        .ok_or_else(|| ValidationError::at(&t.path, None, "period table is empty"))?;
    if let Some(extra) = rows.next() {
        return Err(extra.err("only one period is supported"));
    }
    let defaults = Period::default();
    Ok(Period {
        label: row.text("label")?.to_owned(),
        discount_rate: row.num("discount_rate")?,
        dollar_year: match row.cell("dollar_year") {
            Some(_) => row.int("dollar_year")?,
            None => defaults.dollar_year,
        },
        base_emissions_tonnes: row.opt_num("base_emissions_tonnes")?,
    })
}

/// Reads `(key, month, day, hour, value)` rows into 8760-value series,
/// rejecting unknown keys, duplicates and listing missing hours.
fn read_hourly(
    t: &Table,
    key: &str,
    value: &str,
    check_key: impl Fn(&str) -> Result<(), String>,
) -> Result<IndexMap<String, Vec<f64>>, ValidationError> {
    t.require_columns(&[key, "month", "day", "hour", value])?;
    let mut rows: IndexMap<String, Vec<(u8, u32, u32, f64)>> = IndexMap::new();
    let mut seen: HashMap<(String, usize), usize> = HashMap::new();
    for row in t.rows() {
        let k = row.id(key)?;
        if !rows.contains_key(&k) {
            check_key(&k).map_err(|m| row.err(m))?;
        }
        let (m, d, h) = (row.int("month")?, row.int("day")?, row.int("hour")?);
        if !(1..=12).contains(&m) || d == 0 || d > DAYS_IN_MONTH[m as usize - 1] || h > 23 {
            return Err(row.err(format!("no such calendar hour: month {m}, day {d}, hour {h}")));
        }
        let hour_of_year = (month_start(m as u8) + d as usize - 1) * 24 + h as usize;
        if let Some(first) = seen.insert((k.clone(), hour_of_year), row.line) {
            return Err(row.err(format!("duplicate hour for `{k}` (first on line {first})")));
        }
        rows.entry(k).or_default().push((m as u8, d, h, row.num(value)?));
    }
    let mut out = IndexMap::new();
    for (k, series) in rows {
        let profile = daily_profile_from_rows(&series)
            .map_err(|e| ValidationError::at(&t.path, None, format!("`{k}`: {}", e.message)))?;
        out.insert(k, profile.hours.iter().flatten().copied().collect());
    }
    Ok(out)
}

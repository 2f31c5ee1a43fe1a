//! Writes a dataset back to the directory layout the loader reads.

use std::path::Path;

use super::*;
use crate::error::{GridcapError, Result};
use crate::temporal::{month_start, DAYS_IN_MONTH};

fn num(x: f64) -> String {
    // Display is the shortest string that parses back to the same f64
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Sheet {
    writer: csv::Writer<std::fs::File>,
    path: std::path::PathBuf,
}

impl Sheet {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = table_path(dir, name);
        let writer = csv::Writer::from_path(&path)
            .map_err(|e| GridcapError::Format(format!("{}: {e}", path.display())))?;
        let mut sheet = Sheet { writer, path };
        sheet.row(header.iter().map(|s| s.to_string()))?;
        Ok(sheet)
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<()> {
        self.writer
            .write_record(fields.into_iter().collect::<Vec<_>>())
            .map_err(|e| GridcapError::Format(format!("{}: {e}", self.path.display())))
    }

    fn finish(mut self) -> Result<()> {
        self.writer
            .flush()
            .map_err(|e| GridcapError::io(&self.path, e))
    }
}

/// Writes every table. Reloading the output yields an equal dataset.
pub fn write_system_inputs(ds: &SystemDataset, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| GridcapError::io(dir, e))?;

    let mut s = Sheet::create(dir, "period.csv", &["label", "discount_rate", "dollar_year", "base_emissions_tonnes"])?;
    let p = &ds.period;
    s.row([p.label.clone(), num(p.discount_rate), p.dollar_year.to_string(), opt(p.base_emissions_tonnes)])?;
    s.finish()?;

    let mut s = Sheet::create(dir, "zones.csv", &["zone", "name", "underground_h2_allowed"])?;
    for z in &ds.zones {
        s.row([z.id.clone(), z.name.clone(), z.underground_h2_allowed.to_string()])?;
    }
    s.finish()?;

    let mut s = Sheet::create(
        dir,
        "links.csv",
        &[
            "link", "commodity", "from_zone", "to_zone", "length_km", "existing_capacity", "expandable",
            "loss_rate_per_1000km", "capital_cost_per_unit_km", "lifetime_years", "max_new_capacity",
        ],
    )?;
    for l in &ds.links {
        s.row([
            l.id.clone(),
            l.commodity.as_str().into(),
            l.from_zone.clone(),
            l.to_zone.clone(),
            num(l.length_km),
            num(l.existing_capacity),
            l.expandable.to_string(),
            num(l.loss_rate_per_1000km),
            num(l.capital_cost_per_unit_km),
            num(l.lifetime_years),
            opt(l.max_new_capacity),
        ])?;
    }
    s.finish()?;

    let mut s = Sheet::create(
        dir,
        "projects.csv",
        &[
            "project", "zone", "kind", "technology", "candidate", "efficiency", "charge_efficiency",
            "discharge_efficiency", "min_gen_fraction", "ramp_fraction_per_hour", "fuel", "capacity_credit",
            "parent", "capture_rate", "ele_per_tonne", "existing_energy_mwh", "duration_hours",
            "max_new_capacity", "power_limit_mw",
        ],
    )?;
    for p in &ds.projects {
        s.row([
            p.id.clone(),
            p.zone.clone(),
            p.kind.as_str().into(),
            p.technology.clone(),
            p.candidate.to_string(),
            opt(p.efficiency),
            opt(p.charge_efficiency),
            opt(p.discharge_efficiency),
            num(p.min_gen_fraction),
            opt(p.ramp_fraction_per_hour),
            p.fuel.map(|f| f.as_str().to_owned()).unwrap_or_default(),
            opt(p.capacity_credit),
            p.parent.clone().unwrap_or_default(),
            opt(p.capture_rate),
            opt(p.ele_per_tonne),
            num(p.existing_energy_mwh),
            opt(p.duration_hours),
            opt(p.max_new_capacity),
            opt(p.power_limit_mw),
        ])?;
    }
    s.finish()?;

    // wide sheet: one column per technology, one row per zone
    let mut techs: Vec<&str> = Vec::new();
    for p in &ds.projects {
        if !techs.contains(&p.technology.as_str()) {
            techs.push(&p.technology);
        }
    }
    let header: Vec<&str> = std::iter::once("zone").chain(techs.iter().copied()).collect();
    let mut s = Sheet::create(dir, "existing_capacity.csv", &header)?;
    for z in &ds.zones {
        let cells = techs.iter().map(|t| {
            ds.projects
                .iter()
                .find(|p| p.zone == z.id && p.technology == *t && p.existing_capacity != 0.0)
                .map(|p| num(p.existing_capacity))
                .unwrap_or_default()
        });
        s.row(std::iter::once(z.id.clone()).chain(cells))?;
    }
    s.finish()?;

    let mut s = Sheet::create(
        dir,
        "costs.csv",
        &["technology", "capital_cost", "energy_capital_cost", "fixed_om", "variable_om", "lifetime_years"],
    )?;
    for c in ds.costs.values() {
        s.row([
            c.technology.clone(),
            num(c.capital_cost),
            num(c.energy_capital_cost),
            num(c.fixed_om),
            num(c.variable_om),
            num(c.lifetime_years),
        ])?;
    }
    s.finish()?;

    let mut s = Sheet::create(dir, "fuel_prices.csv", &["fuel", "zone", "price_per_mmbtu"])?;
    for f in &ds.fuel_prices {
        s.row([
            f.fuel.as_str().into(),
            f.zone.clone().unwrap_or_else(|| "*".into()),
            num(f.price_per_mmbtu),
        ])?;
    }
    s.finish()?;

    let mut s = Sheet::create(dir, "emission_factors.csv", &["fuel", "tonnes_per_mmbtu"])?;
    for (fuel, ef) in &ds.emission_factors {
        s.row([fuel.as_str().into(), num(*ef)])?;
    }
    s.finish()?;

    let mut s = Sheet::create(dir, "co2_sites.csv", &["zone", "kind", "capacity_tonnes"])?;
    for site in &ds.co2_sites {
        s.row([
            site.zone.clone(),
            site.kind.as_str().into(),
            site.capacity_tonnes.map(num).unwrap_or_else(|| "unbounded".into()),
        ])?;
    }
    s.finish()?;

    let mut s = Sheet::create(dir, "h2_demand.csv", &["zone", "annual_share"])?;
    for (zone, share) in ds.h2_shares.iter().flatten() {
        s.row([zone.clone(), num(*share)])?;
    }
    s.finish()?;

    let mut s = Sheet::create(dir, "hydro_monthly_cf.csv", &["project", "month", "capacity_factor"])?;
    for (project, cfs) in &ds.hydro_monthly_cf {
        for (m, cf) in cfs.iter().enumerate() {
            s.row([project.clone(), (m + 1).to_string(), num(*cf)])?;
        }
    }
    s.finish()?;

    let empty = CalendarSeries::default();
    let cal = ds.calendar.as_ref().unwrap_or(&empty);
    write_hourly(dir, "demand.csv", "zone", "demand_mw", &cal.demand)?;
    write_hourly(dir, "capacity_factors.csv", "project", "capacity_factor", &cal.capacity_factors)?;
    Ok(())
}

fn write_hourly(dir: &Path, name: &str, key: &str, value: &str, series: &IndexMap<String, Vec<f64>>) -> Result<()> {
    let mut s = Sheet::create(dir, name, &[key, "month", "day", "hour", value])?;
    for (k, values) in series {
        for m in 1..=12u8 {
            for d in 1..=DAYS_IN_MONTH[m as usize - 1] {
                let doy = month_start(m) + d as usize - 1;
                for h in 0..24 {
                    s.row([k.clone(), m.to_string(), d.to_string(), h.to_string(), num(values[doy * 24 + h])])?;
                }
            }
        }
    }
    s.finish()
}

use indexmap::IndexMap;

use gridcap_lp::{LinExpr, Sense};

use super::power::{commit, empty_vars, fuel_terms, variable_cost, zone_of};
use super::{Bus, Coupling, Ctx};
use crate::data::Project;
use crate::error::Result;

const ORIGIN: &str = "hydrogen_chain";

fn bus_of<'c>(ctx: &'c mut Ctx<'_>, bus: Bus) -> &'c mut Vec<Vec<(LinExpr, LinExpr)>> {
    match bus {
        Bus::Grid => &mut ctx.h2,
        Bus::Industrial => &mut ctx.h2_industrial,
    }
}

/// Electrolyzer: capacity and activity are electric input (MW).
pub(super) fn electrolyzer(ctx: &mut Ctx<'_>, p: &Project, bus: Bus) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, bus);
    let (new, cap) = ctx.capacity_of(p, "h2", p.existing_capacity, false)?;
    let input = ctx.series_vars(&format!("h2_p2g_{}", p.id))?;
    let eta = p.conversion_efficiency();
    for t in 0..ctx.n_t {
        ctx.constraint(
            ORIGIN,
            format!("h2_p2gmax_{}_t{t}", p.id),
            LinExpr::from(input[t]) - cap.clone(),
            Sense::Le,
            0.0,
        )?;
        ctx.power[z][t].1.add_term(input[t], 1.0);
        bus_of(ctx, bus)[z][t].0.add_term(input[t], eta);
    }
    let mut cost = IndexMap::new();
    ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
    variable_cost(ctx, &input, rec.variable_om, &mut cost);
    v.new_capacity = new;
    v.capacity = cap;
    v.input = input;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Fuel cell or H₂ turbine: capacity and activity are electric output (MW).
pub(super) fn fuel_to_power(ctx: &mut Ctx<'_>, p: &Project) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, Bus::Grid);
    let (new, cap) = ctx.capacity_of(p, "h2", p.existing_capacity, false)?;
    let gen = ctx.series_vars(&format!("h2_g2p_{}", p.id))?;
    let eta = p.conversion_efficiency();
    for t in 0..ctx.n_t {
        ctx.constraint(
            ORIGIN,
            format!("h2_g2pmax_{}_t{t}", p.id),
            LinExpr::from(gen[t]) - cap.clone(),
            Sense::Le,
            0.0,
        )?;
        ctx.power[z][t].0.add_term(gen[t], 1.0);
        ctx.h2[z][t].1.add_term(gen[t], 1.0 / eta);
    }
    let mut cost = IndexMap::new();
    ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
    variable_cost(ctx, &gen, rec.variable_om, &mut cost);
    v.new_capacity = new;
    v.capacity = cap;
    v.output = gen;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Tank or cavern storage; the inventory carries across horizons so it can
/// shift hydrogen between seasons.
pub(super) fn storage(ctx: &mut Ctx<'_>, p: &Project) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, Bus::Grid);
    let (new, energy) = ctx.capacity_of(p, "h2", p.existing_energy_mwh, true)?;
    let limit = p.power_limit_mw.unwrap_or(f64::INFINITY);
    let (eta_c, eta_d) = p.storage_efficiencies();
    let mut charge = Vec::with_capacity(ctx.n_t);
    let mut discharge = Vec::with_capacity(ctx.n_t);
    for t in 0..ctx.n_t {
        charge.push(ctx.var(format!("h2_charge_{}_t{t}", p.id), 0.0, limit)?);
        discharge.push(ctx.var(format!("h2_discharge_{}_t{t}", p.id), 0.0, limit)?);
    }
    let soc = ctx.series_vars(&format!("h2_soc_{}", p.id))?;
    for t in 0..ctx.n_t {
        ctx.constraint(
            ORIGIN,
            format!("h2_socmax_{}_t{t}", p.id),
            LinExpr::from(soc[t]) - energy.clone(),
            Sense::Le,
            0.0,
        )?;
        let prev = ctx.series.temporal.prev_in_period(t);
        let s = ctx.scale(prev);
        let row = LinExpr::from(soc[t]) - LinExpr::from(soc[prev]) - LinExpr::term(charge[prev], eta_c * s)
            + LinExpr::term(discharge[prev], s / eta_d);
        ctx.constraint(ORIGIN, format!("h2_soc_{}_t{t}", p.id), row, Sense::Eq, 0.0)?;
        ctx.h2[z][t].0.add_term(discharge[t], 1.0);
        ctx.h2[z][t].1.add_term(charge[t], 1.0);
    }
    let mut cost = IndexMap::new();
    // priced per kWh of working gas; fixed O&M likewise per kWh-year
    ctx.capacity_costs(&mut cost, new, &energy, rec.energy_capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
    variable_cost(ctx, &discharge, rec.variable_om, &mut cost);
    v.new_energy = new;
    v.new_capacity = new;
    v.capacity = energy.clone();
    v.energy = Some(energy);
    v.output = discharge;
    v.input = charge;
    v.state = soc;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Steam-methane reforming or coal gasification: capacity is H₂ output (MW).
pub(super) fn fossil(ctx: &mut Ctx<'_>, p: &Project, bus: Bus) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, bus);
    let (new, cap) = ctx.capacity_of(p, "h2", p.existing_capacity, false)?;
    let out = ctx.series_vars(&format!("h2_fossil_{}", p.id))?;
    for t in 0..ctx.n_t {
        ctx.constraint(
            ORIGIN,
            format!("h2_fossilmax_{}_t{t}", p.id),
            LinExpr::from(out[t]) - cap.clone(),
            Sense::Le,
            0.0,
        )?;
        bus_of(ctx, bus)[z][t].0.add_term(out[t], 1.0);
    }
    let mut cost = IndexMap::new();
    ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
    variable_cost(ctx, &out, rec.variable_om, &mut cost);
    let (burn, emissions) = fuel_terms(ctx, p, z, &out, &mut cost)?;
    v.burn = burn;
    v.emissions = emissions;
    v.new_capacity = new;
    v.capacity = cap;
    v.output = out;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Flat hydrogen load split across zones.
pub(super) fn demand(ctx: &mut Ctx<'_>) -> Result<()> {
    if ctx.opts.h2_demand_mwh <= 0.0 {
        return Ok(());
    }
    let shares = zone_shares(ctx);
    let bus = match ctx.opts.coupling {
        Coupling::Coupled => Bus::Grid,
        Coupling::Decoupled => Bus::Industrial,
    };
    let hourly = ctx.opts.h2_demand_mwh / ctx.series.temporal.weighted_hours();
    for (z, share) in shares.into_iter().enumerate() {
        let mw = hourly * share;
        ctx.h2_load_mw[z] = mw;
        for t in 0..ctx.n_t {
            bus_of(ctx, bus)[z][t].1.constant += mw;
        }
    }
    Ok(())
}

/// Dataset shares, or each zone's share of annual electricity demand.
fn zone_shares(ctx: &Ctx<'_>) -> Vec<f64> {
    let ds = ctx.ds;
    if let Some(shares) = &ds.h2_shares {
        if !shares.is_empty() {
            return ds
                .zones
                .iter()
                .map(|z| shares.get(&z.id).copied().unwrap_or(0.0))
                .collect();
        }
    }
    let energy: Vec<f64> = (0..ds.zones.len()).map(|z| ctx.series.annual_energy(z)).collect();
    let total: f64 = energy.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / ds.zones.len() as f64; ds.zones.len()];
    }
    energy.iter().map(|e| e / total).collect()
}

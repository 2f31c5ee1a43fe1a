use indexmap::IndexMap;

use gridcap_lp::{LinExpr, Sense};

use super::{Bus, CostCategory, Ctx, LinkVars, ProjectVars, Scope};
use crate::data::{Commodity, Project, ProjectKind, TransportLink, MMBTU_PER_MWH};
use crate::error::{Result, ValidationError};

const ORIGIN: &str = "power_core";

pub(super) fn origin_of(c: Commodity) -> &'static str {
    match c {
        Commodity::Electricity => ORIGIN,
        Commodity::Hydrogen => "hydrogen_chain",
        Commodity::Co2 => "carbon_chain",
    }
}

/// Fuel burn (MMBtu/h), fuel cost and gross emissions for an activity
/// measured in MWh of output at the given efficiency.
pub(super) fn fuel_terms(
    ctx: &mut Ctx<'_>,
    p: &Project,
    zone: usize,
    activity: &[gridcap_lp::Var],
    cost: &mut IndexMap<CostCategory, LinExpr>,
) -> Result<(Vec<LinExpr>, Vec<LinExpr>)> {
    let fuel = p
        .fuel
        .ok_or_else(|| ValidationError::new(format!("project `{}` needs a fuel", p.id)))?;
    let zone_id = &ctx.ds.zones[zone].id;
    let price = ctx.ds.fuel_price(fuel, zone_id).ok_or_else(|| {
        ValidationError::new(format!("no {} price for zone `{zone_id}`", fuel.as_str()))
    })?;
    let ef = ctx.ds.emission_factor(fuel).ok_or_else(|| {
        ValidationError::new(format!("no emission factor for fuel `{}`", fuel.as_str()))
    })?;
    let heat_rate = MMBTU_PER_MWH / p.conversion_efficiency();
    let mut burn = Vec::with_capacity(ctx.n_t);
    let mut emissions = Vec::with_capacity(ctx.n_t);
    let mut fuel_cost = LinExpr::new();
    for (t, &a) in activity.iter().enumerate() {
        let b = LinExpr::term(a, heat_rate);
        fuel_cost.add_expr(&b, price * ctx.scale(t));
        ctx.gross_emissions.add_expr(&b, ef * ctx.scale(t));
        emissions.push(b.scaled(ef));
        burn.push(b);
    }
    cost.entry(CostCategory::Fuel).or_default().add_expr(&fuel_cost, 1.0);
    Ok((burn, emissions))
}

pub(super) fn variable_cost(ctx: &Ctx<'_>, activity: &[gridcap_lp::Var], rate: f64, cost: &mut IndexMap<CostCategory, LinExpr>) {
    if rate == 0.0 {
        return;
    }
    let entry = cost.entry(CostCategory::VariableOm).or_default();
    for (t, &a) in activity.iter().enumerate() {
        entry.add_term(a, rate * ctx.scale(t));
    }
}

pub(super) fn zone_of(ctx: &Ctx<'_>, p: &Project) -> Result<usize> {
    ctx.ds
        .zone_index(&p.zone)
        .ok_or_else(|| ValidationError::new(format!("project `{}` references unknown zone `{}`", p.id, p.zone)).into())
}

pub(super) fn empty_vars(p: &Project, zone: usize, bus: Bus) -> ProjectVars {
    ProjectVars {
        project: p.clone(),
        zone,
        bus,
        new_capacity: None,
        capacity: LinExpr::new(),
        new_energy: None,
        energy: None,
        output: Vec::new(),
        input: Vec::new(),
        state: Vec::new(),
        burn: Vec::new(),
        electricity_use: Vec::new(),
        emissions: Vec::new(),
        cost: IndexMap::new(),
    }
}

pub(super) fn commit(ctx: &mut Ctx<'_>, vars: ProjectVars) {
    for (cat, expr) in &vars.cost {
        ctx.add_cost(*cat, expr);
    }
    ctx.projects.push(vars);
}

/// Thermal, nuclear, variable-renewable and hydro generators.
pub(super) fn generator(ctx: &mut Ctx<'_>, p: &Project) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, Bus::Grid);
    let (new, cap) = ctx.capacity_of(p, "power", p.existing_capacity, false)?;
    v.new_capacity = new;
    v.capacity = cap.clone();
    let gen = ctx.series_vars(&format!("power_gen_{}", p.id))?;

    let cf = if p.kind == ProjectKind::VreGen {
        Some(ctx.series.capacity_factors.get(&p.id).cloned().ok_or_else(|| {
            ValidationError::new(format!("no capacity factors for VRE project `{}`", p.id))
        })?)
    } else {
        None
    };
    for t in 0..ctx.n_t {
        let limit = cf.as_ref().map_or(1.0, |c| c[t]);
        ctx.constraint(
            ORIGIN,
            format!("power_maxgen_{}_t{t}", p.id),
            LinExpr::from(gen[t]) - cap.scaled(limit),
            Sense::Le,
            0.0,
        )?;
        if p.min_gen_fraction > 0.0 && matches!(p.kind, ProjectKind::ThermalGen | ProjectKind::Nuclear) {
            ctx.constraint(
                ORIGIN,
                format!("power_mingen_{}_t{t}", p.id),
                LinExpr::from(gen[t]) - cap.scaled(p.min_gen_fraction),
                Sense::Ge,
                0.0,
            )?;
        }
        ctx.power[z][t].0.add_term(gen[t], 1.0);
    }

    if let Some(r) = p.ramp_fraction_per_hour {
        for t in 0..ctx.n_t {
            let prev = ctx.series.temporal.prev_in_horizon(t);
            let hours = ctx.series.temporal.timepoints[t].hours_in_tmp as f64;
            if prev == t || r * hours >= 1.0 {
                continue;
            }
            let delta = LinExpr::from(gen[t]) - LinExpr::from(gen[prev]);
            ctx.constraint(
                ORIGIN,
                format!("power_rampup_{}_t{t}", p.id),
                delta.clone() - cap.scaled(r * hours),
                Sense::Le,
                0.0,
            )?;
            ctx.constraint(
                ORIGIN,
                format!("power_rampdown_{}_t{t}", p.id),
                delta + cap.scaled(r * hours),
                Sense::Ge,
                0.0,
            )?;
        }
    }

    if p.kind == ProjectKind::Hydro {
        hydro_budget(ctx, p, &gen, &cap)?;
    }

    let mut cost = IndexMap::new();
    ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
    variable_cost(ctx, &gen, rec.variable_om, &mut cost);
    if p.kind.burns_fuel() {
        let (burn, emissions) = fuel_terms(ctx, p, z, &gen, &mut cost)?;
        v.burn = burn;
        v.emissions = emissions;
    }
    v.cost = cost;
    v.output = gen;
    commit(ctx, v);
    Ok(())
}

/// Monthly energy limit `Σ gen·scale ≤ cf_month · cap · Σ scale`.
fn hydro_budget(ctx: &mut Ctx<'_>, p: &Project, gen: &[gridcap_lp::Var], cap: &LinExpr) -> Result<()> {
    let cfs = *ctx.ds.hydro_monthly_cf.get(&p.id).ok_or_else(|| {
        ValidationError::new(format!("hydro project `{}` has no monthly capacity factors", p.id))
    })?;
    let mut groups: IndexMap<Option<u8>, Vec<usize>> = IndexMap::new();
    for t in 0..ctx.n_t {
        groups.entry(ctx.series.temporal.month_of(t)).or_default().push(t);
    }
    for (month, members) in groups {
        let cf = match month {
            Some(m) => cfs[m as usize - 1],
            None => cfs.iter().sum::<f64>() / 12.0,
        };
        let mut energy = LinExpr::new();
        let mut hours = 0.0;
        for &t in &members {
            energy.add_term(gen[t], ctx.scale(t));
            hours += ctx.scale(t);
        }
        let label = month.map_or("all".to_owned(), |m| format!("m{m:02}"));
        ctx.constraint(
            ORIGIN,
            format!("power_hydrobudget_{}_{label}", p.id),
            energy - cap.scaled(cf * hours),
            Sense::Le,
            0.0,
        )?;
    }
    Ok(())
}

/// Batteries and pumped hydro: state of charge cycles within each horizon.
pub(super) fn storage(ctx: &mut Ctx<'_>, p: &Project) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, Bus::Grid);
    let (new, cap) = ctx.capacity_of(p, "power", p.existing_capacity, false)?;
    let mut cost = IndexMap::new();
    let energy = match p.duration_hours {
        Some(d) => {
            // fixed energy-to-power ratio: energy capital rides on the power decision
            ctx.capacity_costs(
                &mut cost,
                new,
                &cap,
                rec.capital_cost + rec.energy_capital_cost * d,
                rec.fixed_om,
                rec.lifetime_years,
                1000.0,
            );
            cap.scaled(d)
        }
        None => {
            let (new_e, energy) = ctx.capacity_of(p, "power", p.existing_energy_mwh, true)?;
            ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1000.0);
            ctx.capacity_costs(&mut cost, new_e, &energy, rec.energy_capital_cost, 0.0, rec.lifetime_years, 1000.0);
            v.new_energy = new_e;
            energy
        }
    };
    let (eta_c, eta_d) = p.storage_efficiencies();
    let charge = ctx.series_vars(&format!("power_charge_{}", p.id))?;
    let discharge = ctx.series_vars(&format!("power_discharge_{}", p.id))?;
    let soc = ctx.series_vars(&format!("power_soc_{}", p.id))?;
    for t in 0..ctx.n_t {
        for (label, var) in [("chargemax", charge[t]), ("dischargemax", discharge[t])] {
            ctx.constraint(
                ORIGIN,
                format!("power_{label}_{}_t{t}", p.id),
                LinExpr::from(var) - cap.clone(),
                Sense::Le,
                0.0,
            )?;
        }
        ctx.constraint(
            ORIGIN,
            format!("power_socmax_{}_t{t}", p.id),
            LinExpr::from(soc[t]) - energy.clone(),
            Sense::Le,
            0.0,
        )?;
        let prev = ctx.series.temporal.prev_in_horizon(t);
        let h = ctx.series.temporal.timepoints[prev].hours_in_tmp as f64;
        let row = LinExpr::from(soc[t]) - LinExpr::from(soc[prev])
            - LinExpr::term(charge[prev], eta_c * h)
            + LinExpr::term(discharge[prev], h / eta_d);
        ctx.constraint(ORIGIN, format!("power_soc_{}_t{t}", p.id), row, Sense::Eq, 0.0)?;
        ctx.power[z][t].0.add_term(discharge[t], 1.0);
        ctx.power[z][t].1.add_term(charge[t], 1.0);
    }
    variable_cost(ctx, &discharge, rec.variable_om, &mut cost);
    v.new_capacity = new;
    v.capacity = cap;
    v.energy = Some(energy);
    v.output = discharge;
    v.input = charge;
    v.state = soc;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Transport link with linearized losses charged at the receiving end.
pub(super) fn link(ctx: &mut Ctx<'_>, index: usize, l: &TransportLink) -> Result<()> {
    let origin = origin_of(l.commodity);
    let tag = l.commodity.tag();
    let from = ctx.ds.zone_index(&l.from_zone).expect("validated");
    let to = ctx.ds.zone_index(&l.to_zone).expect("validated");
    let loss = l.loss_fraction()?;

    let (new, capacity) = match ctx.fixed() {
        Some(f) => (None, LinExpr::constant(f.links.get(&l.id).copied().unwrap_or(l.existing_capacity))),
        None if l.expandable && ctx.opts.expansion.allows(l.commodity) => {
            let v = ctx.var(
                format!("{tag}_newcap_{}", l.id),
                0.0,
                l.max_new_capacity.unwrap_or(f64::INFINITY),
            )?;
            (Some(v), LinExpr::constant(l.existing_capacity) + LinExpr::term(v, 1.0))
        }
        None => (None, LinExpr::constant(l.existing_capacity)),
    };
    let mut cost = LinExpr::new();
    if let Some(v) = new {
        let annual = ctx.crf_cost(l.capital_cost_per_unit_km * l.length_km, l.lifetime_years);
        cost.add_term(v, annual);
    }

    let mut vars = LinkVars {
        index,
        new_capacity: new,
        capacity: capacity.clone(),
        flow: Vec::new(),
        loss_from: Vec::new(),
        loss_to: Vec::new(),
        cost: cost.clone(),
    };
    for t in 0..ctx.n_t {
        let flow = if new.is_none() {
            let c = capacity.constant;
            ctx.var(format!("{tag}_flow_{}_t{t}", l.id), -c, c)?
        } else {
            let f = ctx.lp.add_free(format!("{tag}_flow_{}_t{t}", l.id));
            ctx.constraint(origin, format!("{tag}_flowmax_{}_t{t}", l.id), LinExpr::from(f) - capacity.clone(), Sense::Le, 0.0)?;
            ctx.constraint(origin, format!("{tag}_flowmin_{}_t{t}", l.id), LinExpr::from(f) + capacity.clone(), Sense::Ge, 0.0)?;
            f
        };
        let mut into_to = LinExpr::from(flow);
        let mut into_from = LinExpr::term(flow, -1.0);
        if loss > 0.0 {
            let lt = ctx.nonneg(format!("{tag}_lossto_{}_t{t}", l.id))?;
            let lf = ctx.nonneg(format!("{tag}_lossfrom_{}_t{t}", l.id))?;
            ctx.constraint(origin, format!("{tag}_lossto_{}_t{t}", l.id), LinExpr::from(lt) - LinExpr::term(flow, loss), Sense::Ge, 0.0)?;
            ctx.constraint(origin, format!("{tag}_lossfrom_{}_t{t}", l.id), LinExpr::from(lf) + LinExpr::term(flow, loss), Sense::Ge, 0.0)?;
            ctx.constraint(origin, format!("{tag}_losstomax_{}_t{t}", l.id), LinExpr::from(lt) - capacity.scaled(loss), Sense::Le, 0.0)?;
            ctx.constraint(origin, format!("{tag}_lossfrommax_{}_t{t}", l.id), LinExpr::from(lf) - capacity.scaled(loss), Sense::Le, 0.0)?;
            into_to.add_term(lt, -1.0);
            into_from.add_term(lf, -1.0);
            vars.loss_to.push(lt);
            vars.loss_from.push(lf);
        }
        let bus = match l.commodity {
            Commodity::Electricity => &mut ctx.power,
            Commodity::Hydrogen => &mut ctx.h2,
            Commodity::Co2 => &mut ctx.co2,
        };
        bus[to][t].0.add_expr(&into_to, 1.0);
        bus[from][t].0.add_expr(&into_from, 1.0);
        vars.flow.push(flow);
    }
    ctx.add_cost(CostCategory::Investment, &cost);
    ctx.links.push(vars);
    Ok(())
}

/// Firm capacity ≥ (1 + margin) × peak demand.
pub(super) fn reserve(ctx: &mut Ctx<'_>) -> Result<()> {
    let Some(margin) = ctx.opts.reserve_margin else {
        return Ok(());
    };
    if ctx.fixed().is_some() {
        return Ok(());
    }
    let nz = ctx.ds.zones.len();
    let scopes: Vec<(String, Vec<usize>, f64)> = match ctx.opts.reserve_scope {
        Scope::Systemwide => vec![("system".into(), (0..nz).collect(), ctx.series.system_peak())],
        Scope::Zonal => (0..nz)
            .map(|z| (ctx.ds.zones[z].id.clone(), vec![z], ctx.series.zone_peak(z)))
            .collect(),
    };
    for (label, zones, peak) in scopes {
        let mut firm = LinExpr::new();
        for pv in ctx.projects.iter().filter(|pv| zones.contains(&pv.zone)) {
            let credit = pv.project.capacity_credit();
            if credit > 0.0 && !pv.project.kind.is_h2_storage() && !pv.project.kind.is_capture() {
                firm.add_expr(&pv.capacity, credit);
            }
        }
        let name = format!("power_reserve_{label}");
        if ctx.opts.elastic {
            ctx.relax(&name, Some(Commodity::Electricity), None, None, 1.0, &mut firm, false)?;
        }
        ctx.constraint(ORIGIN, name, firm, Sense::Ge, (1.0 + margin) * peak)?;
    }
    Ok(())
}

/// Upper limits on installed capacity summed over a set of project kinds.
pub(super) fn capacity_caps(ctx: &mut Ctx<'_>) -> Result<()> {
    if ctx.fixed().is_some() {
        return Ok(());
    }
    for cap in ctx.opts.capacity_caps.clone() {
        let mut total = LinExpr::new();
        for pv in ctx.projects.iter().filter(|pv| cap.applies_to(&pv.project)) {
            total.add_expr(&pv.capacity, 1.0);
        }
        if total.is_constant() && total.constant <= cap.max_mw {
            continue;
        }
        let name = format!("power_capacitycap_{}", cap.label);
        // written as −total ≥ −max so elastic slack enters with a + sign
        let mut row = total.scaled(-1.0);
        if ctx.opts.elastic {
            ctx.relax(&name, None, None, None, 1.0, &mut row, false)?;
        }
        ctx.constraint(ORIGIN, name, row, Sense::Ge, -cap.max_mw)?;
    }
    Ok(())
}

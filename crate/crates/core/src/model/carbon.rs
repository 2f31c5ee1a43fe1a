use indexmap::IndexMap;

use gridcap_lp::{LinExpr, Sense};

use super::power::{commit, empty_vars, variable_cost, zone_of};
use super::{Bus, CostCategory, Ctx, SiteVars};
use crate::data::{Commodity, Project, ProjectKind};
use crate::error::{Result, ValidationError};

const ORIGIN: &str = "carbon_chain";

/// CCS retrofit or direct air capture. Capacity and activity in t/h; the
/// electricity drawn is a load on the zone's power bus.
pub(super) fn capture(ctx: &mut Ctx<'_>, p: &Project) -> Result<()> {
    let z = zone_of(ctx, p)?;
    let rec = ctx.cost_record(&p.technology)?;
    let mut v = empty_vars(p, z, Bus::Grid);
    let (new, cap) = ctx.capacity_of(p, "co2", p.existing_capacity, false)?;
    let captured = ctx.series_vars(&format!("co2_capture_{}", p.id))?;
    let ele = p.ele_per_tonne.unwrap_or(0.0);

    let host = if p.kind == ProjectKind::CcsRetrofit {
        let parent = p.parent.as_deref().unwrap_or_default();
        let host = ctx
            .projects
            .iter()
            .find(|pv| pv.project.id == parent)
            .ok_or_else(|| ValidationError::new(format!("CCS retrofit `{}` has no host `{parent}` in this scenario", p.id)))?;
        Some(host.emissions.clone())
    } else {
        None
    };
    let rate = p.capture_rate.unwrap_or(1.0);

    for t in 0..ctx.n_t {
        ctx.constraint(
            ORIGIN,
            format!("co2_capturemax_{}_t{t}", p.id),
            LinExpr::from(captured[t]) - cap.clone(),
            Sense::Le,
            0.0,
        )?;
        if let Some(host_emissions) = &host {
            ctx.constraint(
                ORIGIN,
                format!("co2_capturerate_{}_t{t}", p.id),
                LinExpr::from(captured[t]) - host_emissions[t].scaled(rate),
                Sense::Le,
                0.0,
            )?;
        }
        let draw = LinExpr::term(captured[t], ele);
        ctx.power[z][t].1.add_expr(&draw, 1.0);
        ctx.co2[z][t].0.add_term(captured[t], 1.0);
        let s = ctx.scale(t);
        ctx.captured.add_term(captured[t], s);
        v.electricity_use.push(draw);
    }
    let mut cost = IndexMap::new();
    ctx.capacity_costs(&mut cost, new, &cap, rec.capital_cost, rec.fixed_om, rec.lifetime_years, 1.0);
    variable_cost(ctx, &captured, rec.variable_om, &mut cost);
    v.new_capacity = new;
    v.capacity = cap;
    v.output = captured;
    v.cost = cost;
    commit(ctx, v);
    Ok(())
}

/// Geological storage: injection rate (optionally costed) and cumulative limit.
pub(super) fn sites(ctx: &mut Ctx<'_>) -> Result<()> {
    for (index, site) in ctx.ds.co2_sites.iter().enumerate() {
        let z = ctx.ds.zone_index(&site.zone).expect("validated");
        let id = site.id();
        let injection = ctx.series_vars(&format!("co2_inject_{id}"))?;
        let rate_cost = ctx.ds.cost(&format!("co2_storage_{}", site.kind.as_str()));
        let mut cost = LinExpr::new();
        let (new_cap, capacity) = match (ctx.fixed(), rate_cost) {
            (Some(f), _) => (None, f.sites.get(&id).map(|c| LinExpr::constant(*c))),
            (None, Some(rec)) => {
                let v = ctx.nonneg(format!("co2_newinjcap_{id}"))?;
                cost.add_term(v, ctx.crf_cost(rec.capital_cost, rec.lifetime_years) + rec.fixed_om);
                (Some(v), Some(LinExpr::term(v, 1.0)))
            }
            (None, None) => (None, None),
        };
        if let Some(rec) = rate_cost {
            if rec.variable_om > 0.0 {
                for (t, &inj) in injection.iter().enumerate() {
                    cost.add_term(inj, rec.variable_om * ctx.scale(t));
                }
            }
        }
        let mut cumulative = LinExpr::new();
        for t in 0..ctx.n_t {
            if let Some(c) = &capacity {
                ctx.constraint(
                    ORIGIN,
                    format!("co2_injectmax_{id}_t{t}"),
                    LinExpr::from(injection[t]) - c.clone(),
                    Sense::Le,
                    0.0,
                )?;
            }
            cumulative.add_term(injection[t], ctx.scale(t));
            ctx.co2[z][t].1.add_term(injection[t], 1.0);
        }
        if let Some(limit) = site.capacity_tonnes {
            ctx.constraint(ORIGIN, format!("co2_sitecap_{id}"), cumulative, Sense::Le, limit)?;
        }
        ctx.add_cost(CostCategory::Investment, &cost);
        ctx.sites.push(SiteVars {
            index,
            injection,
            injection_capacity: capacity,
            new_injection_capacity: new_cap,
            cost,
        });
    }
    Ok(())
}

/// Net annual emissions (gross minus captured) within the cap.
pub(super) fn emission_cap(ctx: &mut Ctx<'_>) -> Result<()> {
    let Some(cap) = ctx.opts.emission_cap_tonnes else {
        return Ok(());
    };
    let name = "co2_emissioncap".to_owned();
    // −net ≥ −cap, so slack relieving the cap enters with a + sign
    let mut row = ctx.captured.clone() - ctx.gross_emissions.clone();
    if ctx.opts.elastic {
        ctx.relax(&name, Some(Commodity::Co2), None, None, 1.0, &mut row, false)?;
    } else if let Some(s) = ctx.opts.slack {
        ctx.relax(&name, Some(Commodity::Co2), None, None, s.carbon, &mut row, false)?;
    }
    ctx.constraint(ORIGIN, name, row, Sense::Ge, -cap)
}

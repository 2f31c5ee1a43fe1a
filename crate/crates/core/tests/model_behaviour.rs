//! Constraint-level checks on solved toy systems: every quantity is read
//! back from the solution and compared with the rule it must obey.

use gridcap::data::{ProjectKind, SeriesTable};
use gridcap::fixtures::{self, Toy};
use gridcap::model::{build_model, Bus, BuiltModel, CapacityMode, CostCategory, Coupling};
use gridcap::scenario::{apply_scenario, bundled, run_plan, EmissionCap, RunOptions, ScenarioConfig, ScenarioPlan};
use gridcap_lp::{Solution, SolverKind};

const TOL: f64 = 1e-6;

struct Solved {
    plan: ScenarioPlan,
    series: SeriesTable,
    built: BuiltModel,
    sol: Solution,
}

impl Solved {
    fn project(&self, id: &str) -> &gridcap::model::ProjectVars {
        self.built
            .projects
            .iter()
            .find(|p| p.project.id == id)
            .unwrap_or_else(|| panic!("no project {id}"))
    }

    fn values(&self, vars: &[gridcap_lp::Var]) -> Vec<f64> {
        vars.iter().map(|&v| self.sol.value(v)).collect()
    }
}

fn solve(toy: &Toy, cfg: &ScenarioConfig) -> Solved {
    let plan = apply_scenario(&toy.dataset, cfg).unwrap();
    let built = build_model(&plan.dataset, &toy.series, &plan.options, &plan.name).unwrap();
    let sol = SolverKind::HighsSimplex.build().solve(&built.lp, 1e-7);
    assert!(sol.is_optimal(), "{}: {}", cfg.name, sol.status);
    Solved {
        plan,
        series: toy.series.clone(),
        built,
        sol,
    }
}

fn regional(name: &str) -> Solved {
    solve(&fixtures::regional_toy(&fixtures::quarterly_layout()), &bundled(name).unwrap())
}

#[test]
fn battery_state_cycles_within_each_day() {
    let s = solve(&fixtures::two_season_toy(), &ScenarioConfig::named("base"));
    let b = s.project("battery");
    let (eta_c, eta_d) = b.project.storage_efficiencies();
    let (charge, discharge, soc) = (s.values(&b.input), s.values(&b.output), s.values(&b.state));
    let energy = s.sol.eval(b.energy.as_ref().unwrap());
    let temporal = &s.series.temporal;
    for h in 0..temporal.horizons.len() {
        let tps = temporal.horizon_timepoints(h);
        let net: f64 = tps.iter().map(|&t| eta_c * charge[t] - discharge[t] / eta_d).sum();
        assert!(net.abs() < TOL * energy.max(1.0), "horizon {h} drifts by {net}");
    }
    assert!(soc.iter().all(|&x| x <= energy + TOL));
    let throughput: f64 = discharge.iter().sum();
    assert!(throughput > 1.0, "battery idle");
}

#[test]
fn cavern_shifts_energy_between_seasons() {
    let s = solve(&fixtures::two_season_toy(), &ScenarioConfig::named("base"));
    let cavern = s.project("cavern");
    let ely = s.project("electrolyzer");
    let soc = s.values(&cavern.state);
    let daily_fill = 24.0 * s.sol.eval(&ely.capacity) * ely.project.conversion_efficiency();
    let swing = soc.iter().cloned().fold(f64::MIN, f64::max) - soc.iter().cloned().fold(f64::MAX, f64::min);
    assert!(swing > 10.0 * daily_fill, "swing {swing} vs one day of electrolysis {daily_fill}");
    // summer (first horizon) charges, winter discharges
    let temporal = &s.series.temporal;
    let (charge, discharge) = (s.values(&cavern.input), s.values(&cavern.output));
    let net = |h: usize| -> f64 { temporal.horizon_timepoints(h).iter().map(|&t| charge[t] - discharge[t]).sum() };
    assert!(net(0) > 0.0 && net(1) < 0.0, "summer {} winter {}", net(0), net(1));
}

#[test]
fn generator_limits_hold_every_hour() {
    let s = regional("ze");
    let temporal = &s.series.temporal;
    for pv in &s.built.projects {
        let p = &pv.project;
        if !p.kind.is_generator() || pv.output.is_empty() {
            continue;
        }
        let cap = s.sol.eval(&pv.capacity);
        let out = s.values(&pv.output);
        for t in 0..out.len() {
            let limit = match p.kind {
                ProjectKind::VreGen => cap * s.series.capacity_factors[&p.id][t],
                _ => cap,
            };
            assert!(out[t] <= limit + TOL * cap.max(1.0), "{} t{t}: {} > {limit}", p.id, out[t]);
            assert!(out[t] >= p.min_gen_fraction * cap - TOL * cap.max(1.0), "{} t{t} below minimum", p.id);
            if let Some(r) = p.ramp_fraction_per_hour {
                let prev = temporal.prev_in_horizon(t);
                if prev != t {
                    let step = (out[t] - out[prev]).abs();
                    assert!(step <= r * cap + TOL * cap.max(1.0), "{} ramps {step} at t{t}", p.id);
                }
            }
        }
    }
}

#[test]
fn nuclear_runs_flat_at_full_minimum() {
    let s = regional("ref");
    let n = s.project("nuclear_north");
    let cap = s.sol.eval(&n.capacity);
    for (t, x) in s.values(&n.output).iter().enumerate() {
        assert!((x - cap).abs() <= TOL * cap.max(1.0), "t{t}: {x} vs {cap}");
    }
}

#[test]
fn link_flows_and_losses_stay_within_capacity() {
    let s = regional("ze");
    let mut used = 0;
    for lv in &s.built.links {
        let l = &s.plan.dataset.links[lv.index];
        let cap = s.sol.eval(&lv.capacity);
        let loss = l.loss_fraction().unwrap();
        for t in 0..lv.flow.len() {
            let f = s.sol.value(lv.flow[t]);
            assert!(f.abs() <= cap + TOL * cap.max(1.0), "{} t{t}: flow {f} > {cap}", l.id);
            // lossless links carry no loss variables
            let lost = lv.loss_from.get(t).map_or(0.0, |&v| s.sol.value(v)) + lv.loss_to.get(t).map_or(0.0, |&v| s.sol.value(v));
            assert!(lost >= loss * f.abs() - TOL * cap.max(1.0), "{} t{t}: loss {lost} below {}", l.id, loss * f.abs());
            assert!(lost <= loss * cap + TOL * cap.max(1.0), "{} t{t}: loss {lost} above cap", l.id);
            if f.abs() > 1e-6 {
                used += 1;
            }
        }
    }
    assert!(used > 0, "no link carried anything");
}

#[test]
fn capture_never_exceeds_rate_times_host_emissions() {
    let toy = fixtures::regional_toy(&fixtures::quarterly_layout());
    let mut cfg = bundled("r90").unwrap();
    cfg.forbid_technologies = vec!["dac".into()];
    let s = solve(&toy, &cfg);
    for pv in s.built.projects.iter().filter(|p| p.project.kind == ProjectKind::CcsRetrofit) {
        let host = s.project(pv.project.parent.as_deref().unwrap());
        let rate = pv.project.capture_rate.unwrap();
        for t in 0..pv.output.len() {
            let captured = s.sol.value(pv.output[t]);
            let emitted = s.sol.eval(&host.emissions[t]);
            assert!(captured <= rate * emitted + TOL * emitted.max(1.0), "{} t{t}", pv.project.id);
        }
    }
}

#[test]
fn reserve_margin_covers_peak() {
    let s = regional("ref");
    let firm: f64 = s
        .built
        .projects
        .iter()
        .filter(|p| p.bus == Bus::Grid && !p.project.kind.is_h2_storage() && !p.project.kind.is_capture())
        .map(|p| p.project.capacity_credit() * s.sol.eval(&p.capacity))
        .sum();
    let peak = s.series.system_peak();
    assert!(firm >= 1.15 * peak * (1.0 - 1e-9), "firm {firm} vs peak {peak}");
}

#[test]
fn capacity_caps_bind() {
    let toy = fixtures::regional_toy(&fixtures::quarterly_layout());
    let mut cfg = bundled("ref").unwrap();
    for cap in &mut cfg.capacity_caps {
        if cap.label.contains("coal") {
            cap.max_mw = 5.0;
        }
    }
    let r = run_plan(&apply_scenario(&toy.dataset, &cfg).unwrap(), &toy.series, &RunOptions::default()).unwrap();
    let coal: f64 = r.projects.iter().filter(|p| p.technology == "coal").map(|p| p.capacity).sum();
    assert!(coal <= 5.0 + 1e-6, "coal {coal}");
}

#[test]
fn decoupled_demand_is_met_by_dedicated_electrolyzers() {
    let toy = fixtures::regional_toy(&fixtures::quarterly_layout());
    let mut cfg = bundled("ze").unwrap();
    cfg.h2_demand.annual_twh = 0.3;
    cfg.coupling = Coupling::Decoupled;
    let s = solve(&toy, &cfg);
    let dedicated: Vec<_> = s.built.projects.iter().filter(|p| p.bus == Bus::Industrial).collect();
    assert!(!dedicated.is_empty());
    assert!(dedicated.iter().all(|p| p.project.id.ends_with("_hd")));
    let produced: f64 = dedicated
        .iter()
        .filter(|p| p.project.kind == ProjectKind::P2g)
        .map(|p| {
            let eff = p.project.conversion_efficiency();
            p.input.iter().enumerate().map(|(t, &v)| s.sol.value(v) * eff * s.series.temporal.scale(t)).sum::<f64>()
        })
        .sum();
    assert!((produced - 0.3e6).abs() <= 1e-6 * 0.3e6, "dedicated output {produced}");
}

#[test]
fn zero_cap_rules_out_emissions() {
    let toy = fixtures::regional_toy(&fixtures::quarterly_layout());
    let mut cfg = bundled("ref").unwrap();
    cfg.emission_cap = EmissionCap::Absolute { tonnes: 0.0 };
    let s = solve(&toy, &cfg);
    assert!(s.sol.eval(&s.built.net_emissions()) <= 1e-6);
}

#[test]
fn fixed_capacities_reproduce_operating_cost() {
    let toy = fixtures::regional_toy(&fixtures::quarterly_layout());
    let plan = apply_scenario(&toy.dataset, &bundled("r80").unwrap()).unwrap();
    let planned = run_plan(&plan, &toy.series, &RunOptions::default()).unwrap();
    let mut fixed = plan.clone();
    fixed.options.capacity_mode = CapacityMode::Fixed(planned.fixed_capacities());
    let rerun = run_plan(&fixed, &toy.series, &RunOptions::default()).unwrap();
    let expected = planned.objective - planned.costs[&CostCategory::Investment];
    assert!(
        (rerun.objective - expected).abs() <= 1e-6 * expected,
        "{} vs {expected}",
        rerun.objective
    );
    assert_eq!(rerun.costs[&CostCategory::Investment], 0.0);
}

#[test]
fn row_origins_cover_every_module() {
    let s = regional("ze");
    let origins: std::collections::BTreeSet<&str> = s.built.lp.constraints.iter().map(|c| c.origin.as_str()).collect();
    for module in ["power_core", "hydrogen_chain", "carbon_chain"] {
        assert!(origins.contains(module), "{origins:?}");
    }
}

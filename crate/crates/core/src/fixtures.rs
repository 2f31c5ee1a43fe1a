//! Small deterministic systems for tests, examples and the CLI smoke run.

use std::f64::consts::PI;

use indexmap::IndexMap;

use crate::data::{
    CalendarSeries, Co2Site, Co2SiteKind, Commodity, CostRecord, Fuel, FuelPrice, Project, ProjectKind, SeriesLayout,
    SeriesTable, SystemDataset, TransportLink, Zone,
};
use crate::temporal::{DayKind, Horizon, Period, TemporalStructure};

/// Dataset with matching time series.
#[derive(Debug, Clone)]
pub struct Toy {
    pub dataset: SystemDataset,
    pub series: SeriesTable,
}

fn cost(tech: &str, capital: f64, energy: f64, fixed: f64, variable: f64, life: f64) -> (String, CostRecord) {
    (
        tech.to_owned(),
        CostRecord {
            technology: tech.into(),
            capital_cost: capital,
            energy_capital_cost: energy,
            fixed_om: fixed,
            variable_om: variable,
            lifetime_years: life,
        },
    )
}

fn zone(id: &str, underground: bool) -> Zone {
    Zone {
        id: id.into(),
        name: id.into(),
        underground_h2_allowed: underground,
    }
}

fn horizon(month: Option<u8>) -> Horizon {
    Horizon {
        id: 0,
        month,
        day_kind: DayKind::Median,
        source_day: None,
    }
}

fn thermal(id: &str, zone: &str, tech: &str, fuel: Fuel, eff: f64) -> Project {
    let mut p = Project::new(id, zone, ProjectKind::ThermalGen, tech);
    p.candidate = true;
    p.fuel = Some(fuel);
    p.efficiency = Some(eff);
    p
}

fn candidate(id: &str, zone: &str, kind: ProjectKind, tech: &str) -> Project {
    let mut p = Project::new(id, zone, kind, tech);
    p.candidate = true;
    p
}

/// One zone, one horizon of four 6-hour blocks, a baseload and a peaking
/// technology. `levels` is demand in MW for each block.
pub fn screening_toy(levels: [f64; 4]) -> Toy {
    let mut ds = SystemDataset::new(Period::default());
    ds.zones.push(zone("z1", false));
    ds.fuel_prices.push(FuelPrice {
        fuel: Fuel::Gas,
        zone: None,
        price_per_mmbtu: 4.0,
    });
    ds.fuel_prices.push(FuelPrice {
        fuel: Fuel::Coal,
        zone: None,
        price_per_mmbtu: 1.5,
    });
    ds.emission_factors.insert(Fuel::Coal, 0.0953);
    ds.emission_factors.insert(Fuel::Gas, 0.0531);
    ds.projects.push(thermal("base", "z1", "coal", Fuel::Coal, 0.4));
    ds.projects.push(thermal("peaker", "z1", "gas_ct", Fuel::Gas, 0.3));
    ds.costs.extend([
        cost("coal", 2500.0, 0.0, 30.0, 4.0, 30.0),
        cost("gas_ct", 600.0, 0.0, 10.0, 6.0, 30.0),
    ]);
    let temporal = TemporalStructure::uniform(ds.period.clone(), vec![horizon(None)], 6).expect("4 × 6 h");
    let series = SeriesTable::new(temporal, vec![levels.to_vec()], IndexMap::new()).expect("consistent");
    Toy { dataset: ds, series }
}

/// Solar-only system with a sunny and a dark season (two 24-hour horizons).
/// Daily batteries, a gas backstop and an optional hydrogen chain
/// (electrolyzer, cavern, fuel cell) that can shift energy between seasons.
pub fn two_season_toy() -> Toy {
    let mut ds = SystemDataset::new(Period::default());
    ds.zones.push(zone("z1", true));
    ds.fuel_prices.push(FuelPrice {
        fuel: Fuel::Gas,
        zone: None,
        price_per_mmbtu: 40.0,
    });
    ds.emission_factors.insert(Fuel::Gas, 0.0531);
    ds.projects.push(candidate("solar", "z1", ProjectKind::VreGen, "solar"));
    ds.projects.push(thermal("gas", "z1", "gas_ct", Fuel::Gas, 0.35));
    let mut battery = candidate("battery", "z1", ProjectKind::Battery, "battery");
    battery.charge_efficiency = Some(0.95);
    battery.discharge_efficiency = Some(0.95);
    ds.projects.push(battery);
    let mut ely = candidate("electrolyzer", "z1", ProjectKind::P2g, "electrolyzer");
    ely.efficiency = Some(0.7);
    ds.projects.push(ely);
    let mut fc = candidate("fuel_cell", "z1", ProjectKind::G2pFuelCell, "fuel_cell");
    fc.efficiency = Some(0.6);
    ds.projects.push(fc);
    let mut cavern = candidate("cavern", "z1", ProjectKind::H2StorageUnderground, "h2_cavern");
    cavern.efficiency = Some(0.99);
    ds.projects.push(cavern);
    ds.costs.extend([
        cost("solar", 600.0, 0.0, 10.0, 0.0, 25.0),
        cost("gas_ct", 600.0, 0.0, 10.0, 5.0, 30.0),
        cost("battery", 200.0, 150.0, 5.0, 0.0, 15.0),
        cost("electrolyzer", 400.0, 0.0, 8.0, 0.0, 25.0),
        cost("fuel_cell", 600.0, 0.0, 10.0, 0.0, 20.0),
        cost("h2_cavern", 0.0, 0.5, 0.0, 0.0, 40.0),
    ]);
    let temporal =
        TemporalStructure::uniform(ds.period.clone(), vec![horizon(Some(7)), horizon(Some(1))], 1).expect("2 × 24 h");
    let demand: Vec<f64> = (0..48).map(|t| 100.0 + 10.0 * ((t % 24) as f64 / 24.0 * 2.0 * PI).sin()).collect();
    let solar: Vec<f64> = (0..48)
        .map(|t| {
            let h = (t % 24) as f64;
            let peak = if t < 24 { 0.95 } else { 0.12 };
            (peak * (PI * (h - 6.0) / 12.0).sin()).max(0.0)
        })
        .collect();
    let series = SeriesTable::new(temporal, vec![demand], IndexMap::from([("solar".to_owned(), solar)])).expect("consistent");
    Toy { dataset: ds, series }
}

/// Flat demand served by a single firm generator with no ramp or minimum;
/// electrolyzers only. Every cost scales linearly with output.
pub fn flat_toy() -> Toy {
    let mut ds = SystemDataset::new(Period::default());
    ds.zones.push(zone("z1", false));
    ds.fuel_prices.push(FuelPrice {
        fuel: Fuel::Gas,
        zone: None,
        price_per_mmbtu: 5.0,
    });
    ds.emission_factors.insert(Fuel::Gas, 0.0531);
    ds.projects.push(thermal("gas", "z1", "gas_cc", Fuel::Gas, 0.55));
    let mut ely = candidate("electrolyzer", "z1", ProjectKind::P2g, "electrolyzer");
    ely.efficiency = Some(0.7);
    ds.projects.push(ely);
    ds.costs.extend([
        cost("gas_cc", 1000.0, 0.0, 15.0, 3.0, 30.0),
        cost("electrolyzer", 500.0, 0.0, 10.0, 1.0, 25.0),
    ]);
    let temporal = TemporalStructure::uniform(ds.period.clone(), vec![horizon(None)], 1).expect("24 h");
    let series = SeriesTable::new(temporal, vec![vec![100.0; 24]], IndexMap::new()).expect("consistent");
    Toy { dataset: ds, series }
}

/// Existing coal that must run at 40 % plus candidate wind. With
/// `with_dac`, direct air capture and an unbounded CO₂ site are available.
pub fn must_run_toy(with_dac: bool) -> Toy {
    let mut ds = SystemDataset::new(Period::default());
    ds.zones.push(zone("z1", false));
    ds.fuel_prices.push(FuelPrice {
        fuel: Fuel::Coal,
        zone: None,
        price_per_mmbtu: 2.0,
    });
    ds.emission_factors.insert(Fuel::Coal, 0.0953);
    let mut coal = thermal("coal", "z1", "coal", Fuel::Coal, 0.38);
    coal.candidate = false;
    coal.existing_capacity = 100.0;
    coal.min_gen_fraction = 0.4;
    ds.projects.push(coal);
    ds.projects.push(candidate("wind", "z1", ProjectKind::VreGen, "wind"));
    ds.costs.extend([
        cost("coal", 3000.0, 0.0, 40.0, 4.0, 40.0),
        cost("wind", 1200.0, 0.0, 30.0, 0.0, 25.0),
    ]);
    if with_dac {
        let mut dac = candidate("dac", "z1", ProjectKind::Dac, "dac");
        dac.ele_per_tonne = Some(1.5);
        ds.projects.push(dac);
        ds.costs.extend([cost("dac", 6.0e6, 0.0, 1.5e5, 20.0, 25.0)]);
        ds.co2_sites.push(Co2Site {
            zone: "z1".into(),
            kind: Co2SiteKind::Onshore,
            capacity_tonnes: None,
        });
    }
    let temporal = TemporalStructure::uniform(ds.period.clone(), vec![horizon(None)], 1).expect("24 h");
    let wind: Vec<f64> = (0..24).map(|h| 0.4 + 0.3 * (h as f64 / 24.0 * 2.0 * PI).cos()).collect();
    let series =
        SeriesTable::new(temporal, vec![vec![150.0; 24]], IndexMap::from([("wind".to_owned(), wind)])).expect("consistent");
    Toy { dataset: ds, series }
}

fn day_wave(doy: usize, amplitude: f64, phase_day: f64) -> f64 {
    1.0 + amplitude * (2.0 * PI * (doy as f64 - phase_day) / 365.0).cos()
}

/// Deterministic pseudo-weather: a few incommensurate sinusoids.
fn wiggle(doy: usize, seed: f64) -> f64 {
    let d = doy as f64;
    0.5 * (d * 0.91 + seed).sin() + 0.3 * (d * 2.37 + 2.0 * seed).sin() + 0.2 * (d * 0.13 + 3.0 * seed).sin()
}

/// Two-zone system covering every technology class, with a full hourly
/// calendar year of synthetic demand and weather.
pub fn regional_dataset() -> SystemDataset {
    let mut ds = SystemDataset::new(Period {
        base_emissions_tonnes: Some(1.5e6),
        ..Period::default()
    });
    ds.zones.push(Zone {
        id: "north".into(),
        name: "North".into(),
        underground_h2_allowed: false,
    });
    ds.zones.push(Zone {
        id: "south".into(),
        name: "South".into(),
        underground_h2_allowed: true,
    });

    let mut p = thermal("coal_north", "north", "coal", Fuel::Coal, 0.38);
    p.min_gen_fraction = 0.4;
    p.ramp_fraction_per_hour = Some(0.3);
    ds.projects.push(p);
    for z in ["north", "south"] {
        let mut gas = thermal(&format!("gas_{z}"), z, "gas_ccgt", Fuel::Gas, 0.55);
        gas.ramp_fraction_per_hour = Some(0.6);
        ds.projects.push(gas);
        ds.projects.push(candidate(&format!("wind_{z}"), z, ProjectKind::VreGen, "wind"));
        ds.projects.push(candidate(&format!("solar_{z}"), z, ProjectKind::VreGen, "solar"));
        let mut bat = candidate(&format!("battery_{z}"), z, ProjectKind::Battery, "battery");
        bat.charge_efficiency = Some(0.92);
        bat.discharge_efficiency = Some(0.92);
        ds.projects.push(bat);
        let mut ely = candidate(&format!("electrolyzer_{z}"), z, ProjectKind::P2g, "electrolyzer");
        ely.efficiency = Some(0.7);
        ds.projects.push(ely);
        let mut dac = candidate(&format!("dac_{z}"), z, ProjectKind::Dac, "dac");
        dac.ele_per_tonne = Some(1.5);
        ds.projects.push(dac);
    }
    let mut nuc = Project::new("nuclear_north", "north", ProjectKind::Nuclear, "nuclear");
    nuc.candidate = true;
    nuc.fuel = Some(Fuel::Uranium);
    nuc.efficiency = Some(0.33);
    nuc.min_gen_fraction = 1.0;
    ds.projects.push(nuc);
    let mut hydro = Project::new("hydro_north", "north", ProjectKind::Hydro, "hydro");
    hydro.existing_capacity = 40.0;
    ds.projects.push(hydro);
    ds.hydro_monthly_cf.insert(
        "hydro_north".into(),
        [0.3, 0.3, 0.35, 0.45, 0.55, 0.6, 0.55, 0.5, 0.45, 0.4, 0.35, 0.3],
    );
    let mut phs = Project::new("phs_south", "south", ProjectKind::PumpedHydro, "pumped_hydro");
    phs.existing_capacity = 20.0;
    phs.duration_hours = Some(10.0);
    phs.charge_efficiency = Some(0.87);
    phs.discharge_efficiency = Some(0.87);
    ds.projects.push(phs);
    let mut fc = candidate("fuel_cell_north", "north", ProjectKind::G2pFuelCell, "fuel_cell");
    fc.efficiency = Some(0.6);
    ds.projects.push(fc);
    let mut turbine = candidate("h2_turbine_south", "south", ProjectKind::G2pTurbine, "h2_turbine");
    turbine.efficiency = Some(0.4);
    ds.projects.push(turbine);
    let mut tank = candidate("h2_tank_north", "north", ProjectKind::H2StorageTank, "h2_tank");
    tank.efficiency = Some(0.9);
    ds.projects.push(tank);
    let mut cavern = candidate("h2_cavern_south", "south", ProjectKind::H2StorageUnderground, "h2_cavern");
    cavern.efficiency = Some(0.99);
    ds.projects.push(cavern);
    let mut ccs = candidate("ccs_coal_north", "north", ProjectKind::CcsRetrofit, "ccs_coal");
    ccs.parent = Some("coal_north".into());
    ccs.capture_rate = Some(0.9);
    ccs.ele_per_tonne = Some(0.15);
    ds.projects.push(ccs);
    let mut ccs = candidate("ccs_gas_south", "south", ProjectKind::CcsRetrofit, "ccs_gas");
    ccs.parent = Some("gas_south".into());
    ccs.capture_rate = Some(0.9);
    ccs.ele_per_tonne = Some(0.16);
    ds.projects.push(ccs);
    let mut smr = candidate("smr_south", "south", ProjectKind::Smr, "smr");
    smr.fuel = Some(Fuel::Gas);
    smr.efficiency = Some(0.76);
    ds.projects.push(smr);

    ds.costs.extend([
        cost("coal", 3000.0, 0.0, 40.0, 4.0, 40.0),
        cost("gas_ccgt", 1000.0, 0.0, 12.0, 3.0, 30.0),
        cost("wind", 1200.0, 0.0, 35.0, 0.0, 25.0),
        cost("solar", 700.0, 0.0, 15.0, 0.0, 25.0),
        cost("nuclear", 6000.0, 0.0, 120.0, 2.0, 60.0),
        cost("hydro", 2500.0, 0.0, 40.0, 0.0, 60.0),
        cost("pumped_hydro", 1500.0, 0.0, 20.0, 0.0, 60.0),
        cost("battery", 250.0, 150.0, 8.0, 0.0, 15.0),
        cost("electrolyzer", 450.0, 0.0, 10.0, 0.0, 25.0),
        cost("fuel_cell", 800.0, 0.0, 15.0, 0.0, 20.0),
        cost("h2_turbine", 700.0, 0.0, 12.0, 2.0, 30.0),
        cost("h2_tank", 0.0, 15.0, 0.0, 0.0, 30.0),
        cost("h2_cavern", 0.0, 1.0, 0.0, 0.0, 40.0),
        cost("ccs_coal", 2.6e6, 0.0, 6.0e4, 5.0, 30.0),
        cost("ccs_gas", 4.0e6, 0.0, 9.0e4, 5.0, 30.0),
        cost("dac", 6.0e6, 0.0, 1.5e5, 20.0, 25.0),
        cost("smr", 700.0, 0.0, 25.0, 1.0, 30.0),
        cost("co2_storage_onshore", 5.0e4, 0.0, 0.0, 8.0, 30.0),
        cost("co2_storage_offshore", 9.0e4, 0.0, 0.0, 12.0, 30.0),
    ]);
    ds.fuel_prices.extend([
        FuelPrice {
            fuel: Fuel::Coal,
            zone: None,
            price_per_mmbtu: 2.0,
        },
        FuelPrice {
            fuel: Fuel::Gas,
            zone: None,
            price_per_mmbtu: 13.68,
        },
        FuelPrice {
            fuel: Fuel::Gas,
            zone: Some("north".into()),
            price_per_mmbtu: 12.5,
        },
        FuelPrice {
            fuel: Fuel::Uranium,
            zone: None,
            price_per_mmbtu: 0.7,
        },
    ]);
    ds.emission_factors.extend([(Fuel::Coal, 0.0953), (Fuel::Gas, 0.0531), (Fuel::Uranium, 0.0)]);
    ds.co2_sites.push(Co2Site {
        zone: "north".into(),
        kind: Co2SiteKind::Onshore,
        capacity_tonnes: Some(5.0e7),
    });
    ds.co2_sites.push(Co2Site {
        zone: "south".into(),
        kind: Co2SiteKind::Offshore,
        capacity_tonnes: None,
    });

    let link = |id: &str, commodity: Commodity, loss: f64, capital: f64, existing: f64| TransportLink {
        id: id.into(),
        commodity,
        from_zone: "north".into(),
        to_zone: "south".into(),
        length_km: 800.0,
        existing_capacity: existing,
        expandable: true,
        loss_rate_per_1000km: loss,
        capital_cost_per_unit_km: capital,
        lifetime_years: 50.0,
        max_new_capacity: None,
    };
    ds.links.push(link("tx_ns", Commodity::Electricity, 0.053, 1500.0, 50.0));
    ds.links.push(link("h2pipe_ns", Commodity::Hydrogen, 0.013, 400.0, 0.0));
    ds.links.push(link("co2pipe_ns", Commodity::Co2, 0.0, 2000.0, 0.0));

    let mut cal = CalendarSeries::default();
    let mut demand_n = Vec::with_capacity(8760);
    let mut demand_s = Vec::with_capacity(8760);
    let mut wind_n = Vec::with_capacity(8760);
    let mut wind_s = Vec::with_capacity(8760);
    let mut solar_n = Vec::with_capacity(8760);
    let mut solar_s = Vec::with_capacity(8760);
    for doy in 0..365 {
        let weekday = if doy % 7 >= 5 { 0.92 } else { 1.0 };
        for h in 0..24 {
            let hf = h as f64;
            let daily = 1.0 + 0.18 * (2.0 * PI * (hf - 10.0) / 24.0).sin();
            let round = |x: f64| (x * 1000.0).round() / 1000.0;
            demand_n.push(round(150.0 * day_wave(doy, 0.15, 15.0) * daily * weekday * (1.0 + 0.04 * wiggle(doy, 1.0))));
            demand_s.push(round(300.0 * day_wave(doy, 0.12, 200.0) * daily * weekday * (1.0 + 0.04 * wiggle(doy, 2.0))));
            let w = |seed: f64, base: f64| {
                (base * day_wave(doy, 0.3, 20.0) + 0.15 * wiggle(doy, seed) + 0.08 * ((hf + seed) * 0.5).sin()).clamp(0.0, 1.0)
            };
            wind_n.push(round(w(3.0, 0.42)));
            wind_s.push(round(w(4.0, 0.3)));
            let sun = (PI * (hf - 6.0) / 12.0).sin().max(0.0);
            let s = |seed: f64, base: f64| (sun * base * day_wave(doy, 0.3, 172.0) * (1.0 + 0.15 * wiggle(doy, seed))).clamp(0.0, 1.0);
            solar_n.push(round(s(5.0, 0.55)));
            solar_s.push(round(s(6.0, 0.7)));
        }
    }
    cal.demand.insert("north".into(), demand_n);
    cal.demand.insert("south".into(), demand_s);
    for (id, v) in [
        ("wind_north", wind_n),
        ("solar_north", solar_n),
        ("wind_south", wind_s),
        ("solar_south", solar_s),
    ] {
        cal.capacity_factors.insert(id.into(), v);
    }
    ds.calendar = Some(cal);
    ds.validate().expect("regional toy is valid");
    ds
}

/// The regional system sampled with the given layout.
pub fn regional_toy(layout: &SeriesLayout) -> Toy {
    let dataset = regional_dataset();
    let series = SeriesTable::from_calendar(&dataset, layout).expect("regional calendar is complete");
    Toy { dataset, series }
}

/// Median day of January, April, July and October: 96 timepoints, small
/// enough to solve in seconds.
pub fn quarterly_layout() -> SeriesLayout {
    SeriesLayout::Months {
        months: vec![1, 4, 7, 10],
        kinds: vec![DayKind::Median],
    }
}

/// As [`quarterly_layout`] plus each month's peak day, so the planning
/// reserve sees the seasonal peaks of both zones.
pub fn quarterly_peak_layout() -> SeriesLayout {
    SeriesLayout::Months {
        months: vec![1, 4, 7, 10],
        kinds: vec![DayKind::Max, DayKind::Median],
    }
}

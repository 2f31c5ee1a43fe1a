//! Scenario files shipped with the crate.

use super::config::ScenarioConfig;

const FILES: &[(&str, &str)] = &[
    ("r80", include_str!("../../scenarios/r80.toml")),
    ("r90", include_str!("../../scenarios/r90.toml")),
    ("ref", include_str!("../../scenarios/ref.toml")),
    ("ref_h2_4100", include_str!("../../scenarios/ref_h2_4100.toml")),
    ("ref_h2_4100_decoupled", include_str!("../../scenarios/ref_h2_4100_decoupled.toml")),
    ("ze", include_str!("../../scenarios/ze.toml")),
    ("ze_h2_1000", include_str!("../../scenarios/ze_h2_1000.toml")),
    ("ze_h2_1000_decoupled", include_str!("../../scenarios/ze_h2_1000_decoupled.toml")),
    ("ze_h2_4100", include_str!("../../scenarios/ze_h2_4100.toml")),
    ("ze_h2_4100_blue", include_str!("../../scenarios/ze_h2_4100_blue.toml")),
    ("ze_h2_4100_costly_electrolyzer", include_str!("../../scenarios/ze_h2_4100_costly_electrolyzer.toml")),
    ("ze_h2_4100_decoupled", include_str!("../../scenarios/ze_h2_4100_decoupled.toml")),
    ("ze_h2_4100_low_eff", include_str!("../../scenarios/ze_h2_4100_low_eff.toml")),
    ("ze_no_battery", include_str!("../../scenarios/ze_no_battery.toml")),
    ("ze_no_ccs", include_str!("../../scenarios/ze_no_ccs.toml")),
    ("ze_no_co2_pipeline", include_str!("../../scenarios/ze_no_co2_pipeline.toml")),
    ("ze_no_dac", include_str!("../../scenarios/ze_no_dac.toml")),
    ("ze_no_h2", include_str!("../../scenarios/ze_no_h2.toml")),
    ("ze_no_h2_pipeline", include_str!("../../scenarios/ze_no_h2_pipeline.toml")),
    ("ze_no_new_nuclear", include_str!("../../scenarios/ze_no_new_nuclear.toml")),
    ("ze_no_transmission", include_str!("../../scenarios/ze_no_transmission.toml")),
    ("ze_no_underground", include_str!("../../scenarios/ze_no_underground.toml")),
    ("ze_nuclear_500", include_str!("../../scenarios/ze_nuclear_500.toml")),
];

/// File stems of the bundled scenarios, sorted.
pub fn bundled_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

/// Parses a bundled scenario by file stem or by scenario name.
pub fn bundled(name: &str) -> Option<ScenarioConfig> {
    FILES.iter().find_map(|(stem, text)| {
        let cfg = ScenarioConfig::from_toml(text).expect("bundled scenarios parse");
        (*stem == name || cfg.name == name).then_some(cfg)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_scenario_parses_and_round_trips() {
        assert!(FILES.len() >= 20);
        for (stem, text) in FILES {
            let cfg = ScenarioConfig::from_toml(text).unwrap_or_else(|e| panic!("{stem}: {e}"));
            let again = ScenarioConfig::from_toml(&cfg.to_toml()).unwrap();
            assert_eq!(cfg, again, "{stem}");
        }
    }

    #[test]
    fn lookup_by_stem_or_name() {
        assert_eq!(bundled("r80").unwrap().name, "80R");
        assert_eq!(bundled("80R").unwrap().name, "80R");
        assert!(bundled("nope").is_none());
    }
}

//! Scenario configuration, application to a dataset, and runs.

mod apply;
mod config;
mod library;
mod result;
mod run;

pub use apply::{apply_scenario, ScenarioPlan};
pub use config::{
    CostField, CostOverride, EmissionCap, HydrogenDemand, ParameterField, ParameterOverride, ScenarioConfig,
};
pub use library::{bundled, bundled_names};
pub use result::{
    extract, EmissionSummary, HydrogenSummary, LedgerEntry, LinkResult, ProjectResult, ScenarioResult, SiteResult,
    SlackSummary,
};
pub use run::{
    diagnose, run_plan, run_scenario, scenario_mps, unserved_penalty, validate_dispatch, DispatchReport, RunOptions,
};

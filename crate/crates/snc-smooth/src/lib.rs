//! Scenario registry, JSON scenario format and command-line runner for the
//! smoothing checks of `snc-core` and the chart suite of `snc-charts`.

pub mod registry;
pub mod runner;
pub mod schema;

pub use registry::{named_scenario, resolve, scenario_names, RegistryError};
pub use runner::{run_check, run_checks, run_plan_cmd, CheckOutcome, PlanOutcome};
pub use schema::{parse_scenario, Expected, Scenario, ScenarioError, ScenarioFile};

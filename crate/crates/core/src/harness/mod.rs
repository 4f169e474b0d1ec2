//! Scenario documents, the experiment runner and report emission.

mod report;
mod run;
mod scenario;

pub use report::{emit_plot_data, emit_report, Check, OutputFormat, Report, Results, RunInfo};
pub use run::{run_scenario, CounterexampleResults, CylinderRow, DimensionResults, ExpansionRow, PointImage};
pub use scenario::{load_scenario, Kind, OutputSpec, RandomWords, Scenario, ScenarioDoc, Tolerances};

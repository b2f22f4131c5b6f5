//! Spacecraft attitude and gyro-bias experiment for the tangent space
//! filter: orbit and magnetic-field scenario, Farrenkopf gyro simulation,
//! Monte-Carlo filter runs and CSV output.

pub mod config;
pub mod error;
pub mod filter;
pub mod gyro;
pub mod io;
pub mod monte_carlo;
pub mod scenario;

pub use config::ScenarioConfig;
pub use error::{Result, SimError};
pub use filter::{run_filter, FilterLaw, RunOutput, RunRecord};
pub use monte_carlo::{monte_carlo, AggregateRow, BatchOutcome};

//! Command-line runners for operator-entanglement sweeps of coupled kicked tops.

pub mod config;
pub mod error;
pub mod output;
pub mod pool;
pub mod run;

pub use config::{
    DiagonalConfig, RawConfig, SaturationConfig, SpectrumConfig, SweepConfig, Window,
};
pub use error::{CliError, Result};
pub use run::{
    entropy_series, mean_von_neumann, run_diagonal, run_saturation, run_spectrum, run_sweep,
    EntropySample, SweepReport,
};

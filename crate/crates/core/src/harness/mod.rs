//! Experiment orchestration: configuration, experiment runners and CSV output.

mod bench;
mod config;
mod experiments;
pub mod output;

pub use bench::{loglog_slope, run_timing_benchmark, time_selection, write_timing, BenchReport, Speedup, TimingRecord};
pub use config::{resolve_k_grid, ExperimentConfig, ExperimentSection, NetworkEntry, NetworkSource};
pub use experiments::{
    generate_networks, run_curve_experiment, run_real_network_suite, run_robustness_experiment,
    run_simulation_experiment, simulate_network, CurveReport, NetworkRun, PlateauRow, RealNetworkReport,
    RealNetworkResult, RobustnessReport, SimulationReport, SimulationRow,
};

//! Configuration, training and evaluation orchestration, sweeps, metric CSVs
//! and SVG plots.

mod config;
mod evaluate;
mod plot;
mod sweep;
mod train;

pub use config::{AgentConfig, RunConfig, RunSettings};
pub use evaluate::{evaluate, evaluate_totals, read_metrics, MetricsRow, MetricsWriter, PolicySource, PolicySpec};
pub use plot::{render_plots, render_svg};
pub use sweep::{cmd_sweep, SweepVar};
pub use train::{cmd_train, leading_trailing_means, train_agent, unix_now, write_metadata, TrainArtifacts, TrainObserver};

//! Arrival rounds and the sequential per-task decision loop.
//!
//! An episode is one arrival round. Pools start full, every task in the
//! round is decided in (shuffled) arrival order, and grants stay held until
//! the round ends.

mod arrivals;
mod config;
mod engine;
mod menu;
mod metrics;
mod observation;
mod pools;
mod trace;

pub use arrivals::{sample_arrivals, Arrival, SliceArrivalConfig};
pub use config::{Area, EnvConfig, RadioConfig};
pub use engine::{run_episode, DecisionContext, Round, StepResult};
pub use menu::{feasible_action_mask, ActionMask, ActionMenu};
pub use metrics::{aggregate_metrics, MetricTotals, RoundMetrics};
pub use observation::{build_observation, Observation, ObservationBounds, OBS_DIM};
pub use pools::ResourcePools;
pub use trace::{EpisodeSummary, EpisodeTrace, StepRecord};

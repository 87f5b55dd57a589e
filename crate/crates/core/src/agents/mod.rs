//! Decision policies over the shared action menu.

mod baselines;
mod checkpoint;
mod dqn;
mod gae;
mod policy;
mod ppo;

pub use baselines::{offload_qualifies, smallest_qualifying_action, FairShare, Sequential};
pub use checkpoint::{AgentCheckpoint, AgentKind};
pub use dqn::{dqn_act, DqnAgent, DqnConfig, DqnPolicy, EpsilonSchedule, ReplayBuffer, Transition};
pub use gae::compute_gae;
pub use policy::{LocalOnly, Policy, RandomPolicy};
pub use ppo::{PpoAgent, PpoConfig, PpoPolicy, PpoStats, RolloutBuffer};

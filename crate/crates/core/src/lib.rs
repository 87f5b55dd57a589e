//! Seedable simulator of a single-cell 5G multi-access edge computing (MEC)
//! deployment serving two network slices (URLLC and mMTC).
//!
//! Each arrival round draws a batch of offloading requests. A policy decides,
//! task by task, how many communication resource blocks and MEC computation
//! units to grant from pools that deplete over the round. The crate ships the
//! physical and compute models, slice-aware rewards, the episode engine, a
//! small from-scratch neural-network substrate, PPO and DQN agents, three
//! rule-based baselines and an experiment harness.
//!
//! The runnable programs under `examples/` walk through each capability; the
//! `mecsim` binary exposes the harness as `train`, `evaluate`, `sweep` and
//! `plot` subcommands.

pub mod agents;
pub mod episode;
pub mod error;
pub mod harness;
pub mod model;
pub mod nn;
pub mod reward;
pub mod seed;

pub use error::{Error, Result};

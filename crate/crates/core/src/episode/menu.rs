use serde::{Deserialize, Serialize};

use super::pools::ResourcePools;
use crate::model::AllocationDecision;

/// Discretized joint action space. Action `i` is the pair
/// `(comm_options[i / n_comp], comp_options[i % n_comp])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActionMenu {
    pub comm_options: Vec<u32>,
    pub comp_options: Vec<u32>,
}

impl Default for ActionMenu {
    fn default() -> Self {
        ActionMenu {
            comm_options: vec![0, 1, 2, 4, 8, 16],
            comp_options: vec![0, 1, 2, 4, 8, 12],
        }
    }
}

impl ActionMenu {
    pub fn len(&self) -> usize {
        self.comm_options.len() * self.comp_options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pair(&self, index: usize) -> (u32, u32) {
        let n = self.comp_options.len();
        (self.comm_options[index / n], self.comp_options[index % n])
    }

    pub fn decision(&self, index: usize) -> AllocationDecision {
        let (k_comm, k_comp) = self.pair(index);
        AllocationDecision::from_grants(k_comm, k_comp)
    }

    pub fn index_of(&self, k_comm: u32, k_comp: u32) -> Option<usize> {
        let i = self.comm_options.iter().position(|&c| c == k_comm)?;
        let j = self.comp_options.iter().position(|&c| c == k_comp)?;
        Some(i * self.comp_options.len() + j)
    }

    /// Index of the (0, 0) pair.
    pub fn local_index(&self) -> usize {
        0
    }

    /// Indices of offloading pairs (both grants non-zero), ordered by total
    /// grant, ties broken by the smaller communication grant.
    pub fn offload_indices_by_size(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let (c, p) = self.pair(i);
                c > 0 && p > 0
            })
            .collect();
        idx.sort_by_key(|&i| {
            let (c, p) = self.pair(i);
            (c + p, c)
        });
        idx
    }

    pub(crate) fn validate(&self, full: &ResourcePools) -> Result<(), String> {
        for (name, opts, cap) in [
            ("comm_options", &self.comm_options, full.comm_total),
            ("comp_options", &self.comp_options, full.comp_total),
        ] {
            if opts.first() != Some(&0) {
                return Err(format!("{name} must start with 0"));
            }
            if opts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("{name} must be strictly increasing"));
            }
            if opts.last().is_some_and(|&m| m > cap) {
                return Err(format!("{name} exceed the pool total {cap}"));
            }
        }
        Ok(())
    }
}

/// Feasibility flags over menu indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionMask(pub Vec<bool>);

impl ActionMask {
    pub fn is_feasible(&self, index: usize) -> bool {
        self.0.get(index).copied().unwrap_or(false)
    }

    pub fn feasible(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &ok)| ok).map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&ok| ok).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A pair is feasible when both grants fit in what remains. (0, 0) always is.
pub fn feasible_action_mask(menu: &ActionMenu, pools: &ResourcePools) -> ActionMask {
    ActionMask(
        (0..menu.len())
            .map(|i| {
                let (c, p) = menu.pair(i);
                pools.fits(c, p)
            })
            .collect(),
    )
}

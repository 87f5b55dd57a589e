use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::AllocationDecision;

/// Communication RBs and computation units for one arrival round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourcePools {
    pub comm_total: u32,
    pub comp_total: u32,
    pub comm_remaining: u32,
    pub comp_remaining: u32,
}

impl ResourcePools {
    pub fn full(comm_total: u32, comp_total: u32) -> Self {
        ResourcePools {
            comm_total,
            comp_total,
            comm_remaining: comm_total,
            comp_remaining: comp_total,
        }
    }

    pub fn empty(comm_total: u32, comp_total: u32) -> Self {
        ResourcePools {
            comm_total,
            comp_total,
            comm_remaining: 0,
            comp_remaining: 0,
        }
    }

    pub fn fits(&self, k_comm: u32, k_comp: u32) -> bool {
        k_comm <= self.comm_remaining && k_comp <= self.comp_remaining
    }

    /// Removes a grant from the pools. Fails without side effects when the
    /// grant does not fit.
    pub fn grant(&mut self, decision: &AllocationDecision) -> Result<()> {
        if !self.fits(decision.k_comm, decision.k_comp) {
            return Err(Error::Infeasible {
                k_comm: decision.k_comm,
                k_comp: decision.k_comp,
                comm_remaining: self.comm_remaining,
                comp_remaining: self.comp_remaining,
            });
        }
        self.comm_remaining -= decision.k_comm;
        self.comp_remaining -= decision.k_comp;
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.comm_remaining <= self.comm_total && self.comp_remaining <= self.comp_total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grant_subtracts() {
        let mut p = ResourcePools::full(80, 40);
        p.grant(&AllocationDecision::from_grants(1, 10)).unwrap();
        assert_eq!((p.comm_remaining, p.comp_remaining), (79, 30));
        p.grant(&AllocationDecision::LOCAL).unwrap();
        assert_eq!((p.comm_remaining, p.comp_remaining), (79, 30));
    }

    #[test]
    fn oversized_grant_leaves_pools_alone() {
        let mut p = ResourcePools::full(4, 4);
        let before = p;
        assert!(matches!(
            p.grant(&AllocationDecision::from_grants(5, 1)),
            Err(Error::Infeasible { .. })
        ));
        assert_eq!(p, before);
    }
}

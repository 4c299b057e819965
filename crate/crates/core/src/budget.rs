//! Node and wall-clock budgets for the exponential searches.
//!
//! A budget is shared by reference across worker threads. Every unit of
//! expensive work (one winnability test, one class-closure node) calls
//! [`Budget::tick`]; exceeding either limit is reported as
//! [`Error::BudgetExceeded`], never as a partial answer.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug)]
pub struct Budget {
    max_nodes: u64,
    deadline: Option<Instant>,
    used: AtomicU64,
}

impl Budget {
    pub fn new(max_nodes: u64, wall: Option<Duration>) -> Self {
        Budget {
            max_nodes,
            deadline: wall.map(|d| Instant::now() + d),
            used: AtomicU64::new(0),
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self::new(max_nodes, None)
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX, None)
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn tick(&self) -> Result<()> {
        self.charge(1)
    }

    pub fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before.saturating_add(n) > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "node budget of {} exhausted",
                self.max_nodes
            )));
        }
        if let Some(deadline) = self.deadline {
            // Checking the clock on every tick is measurable in the hot loop.
            if before.is_multiple_of(1024) && Instant::now() > deadline {
                return Err(Error::BudgetExceeded("wall-clock budget exhausted".into()));
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::nodes(DEFAULT_NODE_BUDGET)
    }
}

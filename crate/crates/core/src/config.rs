//! Resource budgets shared by the oracles, the canonical computations and the CLI.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Longest history materialized with a full trace.
    pub max_steps: u64,
    /// Longest word kept in a materialized trace.
    pub max_width: usize,
    /// Longest history run in streamed mode.
    pub max_streamed: u64,
    /// Word checkpoint stride for streamed runs (0 disables checkpoints).
    pub checkpoint_stride: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 1_000_000, max_width: 64, max_streamed: 1_000_000_000, checkpoint_stride: 0 }
    }
}

impl Budget {
    /// Step cap for the given trace mode.
    pub fn step_cap(&self, streamed: bool) -> u64 {
        if streamed {
            self.max_streamed
        } else {
            self.max_steps
        }
    }
}

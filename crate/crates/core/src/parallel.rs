//! Manual sharding of deterministic work lists.
//!
//! Work is split into an ordered task list that does not depend on the shard
//! count; shard `i` of `S` owns the tasks whose position is `i` modulo `S`.
//! Partial results are exact integers or sorted records, so merged totals do
//! not depend on the schedule.

use crate::error::{CfError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shard {
    index: usize,
    count: usize,
}

impl Shard {
    pub fn new(index: usize, count: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(CfError::OutOfRange(format!(
                "shard {index} of {count} does not exist"
            )));
        }
        Ok(Shard { index, count })
    }

    /// The single shard that owns everything.
    pub fn whole() -> Self {
        Shard { index: 0, count: 1 }
    }

    /// All shards of a split into `count` parts.
    pub fn all(count: usize) -> Result<Vec<Shard>> {
        (0..count).map(|i| Shard::new(i, count)).collect()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn owns(&self, position: usize) -> bool {
        position % self.count == self.index
    }

    /// Shard 0 also owns work that precedes the task list.
    pub fn is_lead(&self) -> bool {
        self.index == 0
    }
}

impl Default for Shard {
    fn default() -> Self {
        Shard::whole()
    }
}

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock and node-count limits for a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub const fn unlimited() -> Self {
        Budget { time: None, nodes: None }
    }

    pub fn seconds(s: f64) -> Self {
        Budget {
            time: Some(Duration::from_secs_f64(s)),
            nodes: None,
        }
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes = Some(nodes);
        self
    }

    pub fn start(&self) -> Meter {
        Meter {
            deadline: self.time.map(|t| Instant::now() + t),
            node_limit: self.nodes,
            nodes: 0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::seconds(60.0)
    }
}

/// Running consumption against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    nodes: u64,
}

impl Meter {
    pub fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            return Err(Error::Budget(format!("node limit of {} reached", self.nodes - 1)));
        }
        if self.nodes % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::Budget(format!("time limit reached after {} nodes", self.nodes)));
        }
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}

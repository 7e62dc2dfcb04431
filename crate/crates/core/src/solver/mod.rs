//! Exact desk-scale search: covering numbers, covering-hypergraph minima (and
//! their multicover variant), `S_k` digraph minima, and membership tests for
//! the extremal families.

mod bits;
mod cache;
mod cover_search;
mod digraph;
mod membership;
mod oriented;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsys::{CanonicalForm, Digraph, Hypergraph};

pub use cache::{CacheRecord, LoadReport, Problem, ResultsCache, SOLVER_VERSION};
pub use cover_search::{enumerate_extremal, f_lower_bound, solve_d, solve_f};
pub use digraph::{enumerate_digraph_optima, solve_digraph_min};
pub use membership::{is_member_a, is_member_g};
pub use oriented::{solve_oriented_min_vertices, OrientedSearch};

/// Caps on a search. Caps are positive when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
    pub workers: usize,
    /// Lift the default instance-size caps (the bitset capacity still applies).
    pub allow_large: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: None,
            time_limit: None,
            workers: 1,
            allow_large: false,
        }
    }
}

impl SearchBudget {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = Some(nodes);
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.workers == 0
            || self.max_nodes == Some(0)
            || self.time_limit.is_some_and(|t| t.is_zero())
        {
            return Err(Error::invalid("search budget caps must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofState {
    Optimal,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Hypergraph(Hypergraph),
    Digraph(Digraph),
}

impl Certificate {
    pub fn into_hypergraph(self) -> Option<Hypergraph> {
        match self {
            Certificate::Hypergraph(h) => Some(h),
            Certificate::Digraph(_) => None,
        }
    }

    pub fn as_hypergraph(&self) -> Option<&Hypergraph> {
        match self {
            Certificate::Hypergraph(h) => Some(h),
            Certificate::Digraph(_) => None,
        }
    }

    pub fn as_digraph(&self) -> Option<&Digraph> {
        match self {
            Certificate::Digraph(d) => Some(d),
            Certificate::Hypergraph(_) => None,
        }
    }
}

/// Outcome of a minimization.
///
/// With `proof_state == Optimal` the optimum is exact. Otherwise it is the
/// best known upper bound, certified by `certificate`, and `lower_bound` is
/// the last level proven infeasible plus one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveResult {
    pub optimum: u64,
    pub lower_bound: u64,
    pub certificate: Certificate,
    pub all_optima: Option<Vec<CanonicalForm>>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub proof_state: ProofState,
}

#[derive(Debug)]
pub(crate) struct Exhausted;

/// Shared node/time accounting for one solve call.
pub(crate) struct Tracker {
    nodes: AtomicU64,
    aborted: AtomicBool,
    start: Instant,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Tracker {
    pub fn new(budget: &SearchBudget) -> Self {
        let start = Instant::now();
        Tracker {
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            start,
            max_nodes: budget.max_nodes,
            deadline: budget.time_limit.map(|t| start + t),
        }
    }

    /// Counts one node; errs once any cap is hit.
    #[inline]
    pub fn tick(&self) -> Result<(), Exhausted> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Exhausted);
        }
        let over_nodes = self.max_nodes.is_some_and(|m| n > m);
        let over_time = n.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.aborted.store(true, Ordering::Relaxed);
            return Err(Exhausted);
        }
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}

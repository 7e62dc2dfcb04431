//! Fewest vertices of an oriented graph with property `S_k`.
//!
//! Adding arcs never destroys `S_k`, and every oriented graph extends to a
//! tournament on the same vertices, so it suffices to search tournaments. Up to
//! relabeling vertex 1 beats exactly `{2, ..., d+1}` for some `d`, which fixes
//! the first row; the remaining pairs are oriented depth-first with indegree
//! feasibility pruning (every vertex needs indegree at least `k`).

use serde::{Deserialize, Serialize};
use std::time::Duration;

use super::{Exhausted, ProofState, SearchBudget, Tracker};
use crate::coverage::{first_uncovered_in_out, has_property_sk};
use crate::error::{Error, Result};
use crate::setsys::Digraph;

pub const ORIENTED_DEFAULT_MAX: u32 = 7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientedSearch {
    pub k: u32,
    /// Least vertex count admitting `S_k`, if one was found.
    pub min_vertices: Option<u32>,
    pub certificate: Option<Digraph>,
    /// Every `n` up to this value was exhaustively ruled out (or is the answer).
    pub searched_up_to: u32,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub proof_state: ProofState,
}

struct Tournament<'a> {
    n: usize,
    k: u32,
    pairs: Vec<(usize, usize)>,
    out: Vec<u64>,
    indeg: Vec<u32>,
    /// undecided pairs still touching each vertex
    open: Vec<u32>,
    tracker: &'a Tracker,
}

impl Tournament<'_> {
    fn orient(&mut self, from: usize, to: usize) {
        self.out[from] |= 1 << to;
        self.indeg[to] += 1;
        self.open[from] -= 1;
        self.open[to] -= 1;
    }

    fn unorient(&mut self, from: usize, to: usize) {
        self.out[from] &= !(1 << to);
        self.indeg[to] -= 1;
        self.open[from] += 1;
        self.open[to] += 1;
    }

    fn feasible(&self, v: usize) -> bool {
        self.indeg[v] + self.open[v] >= self.k
    }

    fn search(&mut self, idx: usize) -> Result<bool, Exhausted> {
        self.tracker.tick()?;
        if idx == self.pairs.len() {
            return Ok(first_uncovered_in_out(&self.out, self.n as u32, self.k).is_none());
        }
        let (a, b) = self.pairs[idx];
        for (from, to) in [(a, b), (b, a)] {
            self.orient(from, to);
            if self.feasible(a) && self.feasible(b) && self.search(idx + 1)? {
                return Ok(true);
            }
            self.unorient(from, to);
        }
        Ok(false)
    }
}

/// A tournament on `n` vertices with `S_k`, if any exists.
fn tournament_with_sk(n: u32, k: u32, tracker: &Tracker) -> Result<Option<Vec<u64>>, Exhausted> {
    let nu = n as usize;
    // sum of indegrees is C(n,2)
    if (k as u64) * (n as u64) > (n as u64) * (n as u64 - 1) / 2 {
        return Ok(None);
    }
    let pairs: Vec<(usize, usize)> = (1..nu)
        .flat_map(|i| (i + 1..nu).map(move |j| (i, j)))
        .collect();
    for d in 0..nu {
        if ((nu - 1 - d) as u32) < k {
            continue;
        }
        let mut t = Tournament {
            n: nu,
            k,
            pairs: pairs.clone(),
            out: vec![0; nu],
            indeg: vec![0; nu],
            open: vec![nu as u32 - 2; nu],
            tracker,
        };
        t.open[0] = 0;
        for v in 1..nu {
            if v <= d {
                t.out[0] |= 1 << v;
                t.indeg[v] += 1;
            } else {
                t.out[v] |= 1;
                t.indeg[0] += 1;
            }
        }
        if (0..nu).all(|v| t.feasible(v)) && t.search(0)? {
            return Ok(Some(t.out));
        }
    }
    Ok(None)
}

/// Scans `n = k+1, ..., n_max` for the least order of an oriented graph with `S_k`.
pub fn solve_oriented_min_vertices(
    k: u32,
    n_max: u32,
    budget: &SearchBudget,
) -> Result<OrientedSearch> {
    budget.validate()?;
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if n_max > ORIENTED_DEFAULT_MAX + 1 && !budget.allow_large {
        return Err(Error::SearchSpaceTooLarge(format!(
            "oriented search above n={} vertices",
            ORIENTED_DEFAULT_MAX + 1
        )));
    }
    if n_max > 64 {
        return Err(Error::SearchSpaceTooLarge(format!("n_max={n_max}")));
    }
    let tracker = Tracker::new(budget);
    let mut searched = k;
    for n in k + 1..=n_max {
        match tournament_with_sk(n, k, &tracker) {
            Ok(Some(out)) => {
                let d = Digraph::from_out_masks(&out, true)?;
                assert!(
                    has_property_sk(&d, k)?.holds,
                    "tournament search returned a non-witness"
                );
                return Ok(OrientedSearch {
                    k,
                    min_vertices: Some(n),
                    certificate: Some(d),
                    searched_up_to: n,
                    nodes_explored: tracker.nodes(),
                    wall_time: tracker.elapsed(),
                    proof_state: ProofState::Optimal,
                });
            }
            Ok(None) => searched = n,
            Err(Exhausted) => {
                return Ok(OrientedSearch {
                    k,
                    min_vertices: None,
                    certificate: None,
                    searched_up_to: searched,
                    nodes_explored: tracker.nodes(),
                    wall_time: tracker.elapsed(),
                    proof_state: ProofState::BudgetExhausted,
                })
            }
        }
    }
    Ok(OrientedSearch {
        k,
        min_vertices: None,
        certificate: None,
        searched_up_to: searched,
        nodes_explored: tracker.nodes(),
        wall_time: tracker.elapsed(),
        proof_state: ProofState::Optimal,
    })
}

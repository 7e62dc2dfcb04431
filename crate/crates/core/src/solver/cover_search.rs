//! Iterative deepening over edge counts for covering hypergraphs.
//!
//! Every `k`-set is a constraint and its options are the vertices `u ∉ A`,
//! each option bringing the edges `B ∪ {u}`, `B ∈ A^(r-1)`. A node branches on
//! the options of the lexicographically first constraint that still has fewer
//! than `s` covering vertices. Any solution must satisfy that constraint through
//! one of the options, so the branching is complete, and every node adds at
//! least one edge. With `k = r - 1` an option is a single edge and the search
//! computes the covering number `D(n, r)`.
//!
//! Symmetry: vertices in no edge of the partial hypergraph and outside the
//! constraint are interchangeable, so only the smallest of them is tried. At
//! the root this fixes the first edge to `{1..r}` for coverings.
//!
//! Each worker memoizes partial hypergraphs already fully explored at the
//! current depth limit; whether such a state extends is a function of the
//! state alone.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use super::bits::{EdgeBits, CAPACITY};
use super::{thread_pool, Certificate, Exhausted, ProofState, SearchBudget, SolveResult, Tracker};
use crate::bounds::covering_lb;
use crate::constructions::{build_g, greedy_covering, CoveringStrategy};
use crate::coverage::audit;
use crate::error::{Error, Result};
use crate::setsys::{
    binomial, bit, full_mask, k_subsets, mask_of, mask_subsets, CanonicalForm, Canonize,
    Hypergraph, DEFAULT_CANON_LIMIT,
};

const MEMO_CAP: usize = 4_000_000;

/// Largest `n` searched by default for each uniformity.
fn default_size_cap(r: u32) -> u32 {
    match r {
        2 => 12,
        3 => 9,
        4 => 8,
        _ => r + 3,
    }
}

struct Constraint {
    options: Vec<(u32, EdgeBits)>,
}

pub(crate) struct CoverProblem {
    n: u32,
    r: u32,
    k: u32,
    s: u32,
    rsets: Vec<u64>,
    constraints: Vec<Constraint>,
}

impl CoverProblem {
    fn new(n: u32, k: u32, r: u32, s: u32, budget: &SearchBudget) -> Result<Self> {
        if r < 2 || k + 1 < r || n <= k || s == 0 {
            return Err(Error::invalid(format!(
                "search needs n > k >= r-1 >= 1 and s >= 1, got n={n}, k={k}, r={r}, s={s}"
            )));
        }
        if s > n - k {
            return Err(Error::invalid(format!(
                "infeasible: a {k}-set has only {} outside vertices, fewer than s={s}",
                n - k
            )));
        }
        let count = binomial(n as u64, r as u64).unwrap_or(u128::MAX);
        if count > CAPACITY as u128 {
            return Err(Error::SearchSpaceTooLarge(format!(
                "C({n},{r}) = {count} exceeds {CAPACITY} candidate edges"
            )));
        }
        if !budget.allow_large && n > default_size_cap(r) {
            return Err(Error::SearchSpaceTooLarge(format!(
                "n={n} above the default cap {} for r={r}",
                default_size_cap(r)
            )));
        }
        let rsets = mask_subsets(full_mask(n), r);
        let index: HashMap<u64, usize> = rsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let constraints = k_subsets(n, k)
            .map(|a| {
                let set = mask_of(&a);
                let faces = mask_subsets(set, r - 1);
                let options = (1..=n)
                    .filter(|&u| set & bit(u) == 0)
                    .map(|u| {
                        let mut bits = EdgeBits::default();
                        for &b in &faces {
                            bits.set(index[&(b | bit(u))]);
                        }
                        (u, bits)
                    })
                    .collect();
                Constraint { options }
            })
            .collect();
        Ok(CoverProblem {
            n,
            r,
            k,
            s,
            rsets,
            constraints,
        })
    }

    fn is_covering(&self) -> bool {
        self.k + 1 == self.r
    }

    fn cover_count(&self, c: &Constraint, bits: &EdgeBits) -> u32 {
        let mut count = 0;
        for (_, o) in &c.options {
            if o.is_subset_of(bits) {
                count += 1;
                if count >= self.s {
                    break;
                }
            }
        }
        count
    }

    fn first_deficient(&self, bits: &EdgeBits, start: usize) -> Option<usize> {
        (start..self.constraints.len())
            .find(|&i| self.cover_count(&self.constraints[i], bits) < self.s)
    }

    /// Edges still needed at minimum. Exact counting only for coverings, where
    /// one edge meets at most `r` of the `(r-1)`-set constraints.
    fn remaining_lb(&self, bits: &EdgeBits, start: usize) -> u32 {
        if !self.is_covering() {
            return 1;
        }
        let deficit: u32 = self.constraints[start..]
            .iter()
            .map(|c| self.s - self.cover_count(c, bits))
            .sum();
        deficit.div_ceil(self.r)
    }

    fn to_hypergraph(&self, bits: &EdgeBits) -> Hypergraph {
        Hypergraph::from_masks(self.n, self.r, bits.ones().map(|i| self.rsets[i]))
    }

    fn touched(&self, bits: &EdgeBits) -> u64 {
        bits.ones().fold(0, |m, i| m | self.rsets[i])
    }
}

#[derive(Clone)]
struct Node {
    bits: EdgeBits,
    count: u32,
    start: usize,
}

enum Expansion {
    Solved,
    Children(Vec<Node>),
}

fn expand(p: &CoverProblem, node: &Node, limit: u32) -> Expansion {
    let Some(i) = p.first_deficient(&node.bits, node.start) else {
        return Expansion::Solved;
    };
    if node.count + p.remaining_lb(&node.bits, i) > limit {
        return Expansion::Children(Vec::new());
    }
    let c = &p.constraints[i];
    let touched = p.touched(&node.bits);
    let mut fresh_tried = false;
    let mut children = Vec::new();
    for (u, o) in &c.options {
        if o.is_subset_of(&node.bits) {
            continue;
        }
        if touched & bit(*u) == 0 {
            if fresh_tried {
                continue;
            }
            fresh_tried = true;
        }
        let bits = node.bits.union(o);
        let count = bits.count();
        if count <= limit {
            children.push(Node {
                bits,
                count,
                start: i,
            });
        }
    }
    Expansion::Children(children)
}

struct Worker<'a> {
    p: &'a CoverProblem,
    tracker: &'a Tracker,
    limit: u32,
    memo: HashSet<EdgeBits>,
}

impl<'a> Worker<'a> {
    fn new(p: &'a CoverProblem, tracker: &'a Tracker, limit: u32) -> Self {
        Worker {
            p,
            tracker,
            limit,
            memo: HashSet::new(),
        }
    }

    fn remember(&mut self, bits: EdgeBits) {
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(bits);
        }
    }

    /// First solution in depth-first order below `node`.
    fn find(&mut self, node: &Node) -> Result<Option<EdgeBits>, Exhausted> {
        self.tracker.tick()?;
        match expand(self.p, node, self.limit) {
            Expansion::Solved => Ok(Some(node.bits)),
            Expansion::Children(children) => {
                for child in children {
                    if self.memo.contains(&child.bits) {
                        continue;
                    }
                    if let Some(found) = self.find(&child)? {
                        return Ok(Some(found));
                    }
                    self.remember(child.bits);
                }
                Ok(None)
            }
        }
    }

    /// Every solution reachable below `node`, up to the symmetry pruning.
    fn collect(&mut self, node: &Node, out: &mut Vec<EdgeBits>) -> Result<(), Exhausted> {
        self.tracker.tick()?;
        match expand(self.p, node, self.limit) {
            Expansion::Solved => out.push(node.bits),
            Expansion::Children(children) => {
                for child in children {
                    if self.memo.contains(&child.bits) {
                        continue;
                    }
                    self.collect(&child, out)?;
                    self.remember(child.bits);
                }
            }
        }
        Ok(())
    }
}

/// Splits the root into enough subtrees to feed the workers, preserving
/// depth-first order.
fn frontier(
    p: &CoverProblem,
    tracker: &Tracker,
    limit: u32,
    workers: usize,
) -> Result<Vec<Node>, Exhausted> {
    let root = Node {
        bits: EdgeBits::default(),
        count: 0,
        start: 0,
    };
    let mut nodes = vec![root];
    if workers <= 1 {
        return Ok(nodes);
    }
    let target = workers * 8;
    for _ in 0..8 {
        if nodes.len() >= target {
            break;
        }
        let mut next = Vec::new();
        let mut grew = false;
        for node in nodes {
            tracker.tick()?;
            match expand(p, &node, limit) {
                Expansion::Solved => next.push(node),
                Expansion::Children(children) => {
                    grew = true;
                    next.extend(children);
                }
            }
        }
        nodes = next;
        if !grew {
            break;
        }
    }
    Ok(nodes)
}

fn find_at(
    p: &CoverProblem,
    tracker: &Tracker,
    limit: u32,
    workers: usize,
) -> Result<Option<EdgeBits>, Exhausted> {
    let nodes = frontier(p, tracker, limit, workers)?;
    if workers <= 1 {
        let mut w = Worker::new(p, tracker, limit);
        for node in &nodes {
            if let Some(found) = w.find(node)? {
                return Ok(Some(found));
            }
        }
        return Ok(None);
    }
    let pool = thread_pool(workers).map_err(|_| Exhausted)?;
    pool.install(|| {
        nodes
            .par_iter()
            .map_init(|| Worker::new(p, tracker, limit), |w, node| w.find(node))
            .find_map_first(|res| match res {
                Ok(Some(found)) => Some(Ok(Some(found))),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            })
            .unwrap_or(Ok(None))
    })
}

fn collect_at(
    p: &CoverProblem,
    tracker: &Tracker,
    limit: u32,
    workers: usize,
) -> Result<Vec<EdgeBits>, Exhausted> {
    let nodes = frontier(p, tracker, limit, workers)?;
    if workers <= 1 {
        let mut w = Worker::new(p, tracker, limit);
        let mut out = Vec::new();
        for node in &nodes {
            w.collect(node, &mut out)?;
        }
        return Ok(out);
    }
    let pool = thread_pool(workers).map_err(|_| Exhausted)?;
    pool.install(|| {
        nodes
            .par_iter()
            .map_init(
                || Worker::new(p, tracker, limit),
                |w, node| {
                    let mut out = Vec::new();
                    w.collect(node, &mut out).map(|_| out)
                },
            )
            .collect::<Result<Vec<_>, _>>()
            .map(|v| v.into_iter().flatten().collect())
    })
}

/// A lower bound on `h(n, k, r, s)`.
///
/// Coverings need `ceil(s C(n, r-1) / r)` edges. For graphs every vertex has
/// degree at least `k + s - 1`. For `r >= 3` the link of any vertex is an
/// `(r-1)`-uniform hypergraph on `n-1` vertices in which every `(k-1)`-set is
/// covered `s` times, so the minimum degree is at least `h(n-1, k-1, r-1, s)`.
pub fn f_lower_bound(n: u32, k: u32, r: u32, s: u32) -> u64 {
    if r < 2 || k + 1 < r || n <= k {
        return 0;
    }
    if k + 1 == r {
        let faces = binomial(n as u64, r as u64 - 1).unwrap_or(0);
        return (s as u128 * faces).div_ceil(r as u128) as u64;
    }
    if r == 2 {
        return ((k + s - 1) as u64 * n as u64).div_ceil(2);
    }
    (n as u64 * f_lower_bound(n - 1, k - 1, r - 1, s)).div_ceil(r as u64)
}

struct Outcome {
    optimum: u64,
    lower_bound: u64,
    certificate: Hypergraph,
    proof_state: ProofState,
}

fn deepen(
    p: &CoverProblem,
    tracker: &Tracker,
    budget: &SearchBudget,
    lower: u64,
    upper: Hypergraph,
) -> Outcome {
    let ub = upper.len() as u64;
    let mut limit = lower.max(1);
    while limit < ub {
        match find_at(p, tracker, limit as u32, budget.workers) {
            Ok(Some(bits)) => {
                return Outcome {
                    optimum: limit,
                    lower_bound: limit,
                    certificate: p.to_hypergraph(&bits),
                    proof_state: ProofState::Optimal,
                }
            }
            Ok(None) => limit += 1,
            Err(Exhausted) => {
                return Outcome {
                    optimum: ub,
                    lower_bound: limit,
                    certificate: upper,
                    proof_state: ProofState::BudgetExhausted,
                }
            }
        }
    }
    Outcome {
        optimum: ub,
        lower_bound: ub,
        certificate: upper,
        proof_state: ProofState::Optimal,
    }
}

fn finish(
    p: &CoverProblem,
    tracker: &Tracker,
    out: Outcome,
    all_optima: Option<Vec<CanonicalForm>>,
) -> SolveResult {
    let report = audit(&out.certificate, p.k, p.s).expect("search parameters are in audit range");
    assert!(report.covered, "search returned an invalid certificate");
    assert_eq!(out.certificate.len() as u64, out.optimum);
    SolveResult {
        optimum: out.optimum,
        lower_bound: out.lower_bound,
        certificate: Certificate::Hypergraph(out.certificate),
        all_optima,
        nodes_explored: tracker.nodes(),
        wall_time: tracker.elapsed(),
        proof_state: out.proof_state,
    }
}

fn upper_bound(n: u32, k: u32, r: u32, s: u32) -> Result<Hypergraph> {
    if k + 1 == r && s == 1 {
        greedy_covering(n, r)
    } else if s == 1 {
        build_g(n, k, r, &CoveringStrategy::Greedy)
    } else {
        Hypergraph::complete(n, r)
    }
}

/// The covering number `D(n, r)`: fewest `r`-sets whose shadow is every
/// `(r-1)`-subset of `{1..n}`.
pub fn solve_d(n: u32, r: u32, budget: &SearchBudget) -> Result<SolveResult> {
    if r < 2 || n < r {
        return Err(Error::invalid(format!(
            "D(n,r) needs n >= r >= 2, got n={n}, r={r}"
        )));
    }
    budget.validate()?;
    if n == r {
        // a single edge, and the search needs n > k = r - 1 anyway
        let h = Hypergraph::complete(n, r)?;
        return Ok(SolveResult {
            optimum: 1,
            lower_bound: 1,
            certificate: Certificate::Hypergraph(h),
            all_optima: None,
            nodes_explored: 0,
            wall_time: Default::default(),
            proof_state: ProofState::Optimal,
        });
    }
    let p = CoverProblem::new(n, r - 1, r, 1, budget)?;
    let tracker = Tracker::new(budget);
    let lower = covering_lb(n, r)? as u64;
    let out = deepen(&p, &tracker, budget, lower, greedy_covering(n, r)?);
    Ok(finish(&p, &tracker, out, None))
}

/// `h(n, k, r, s)`: fewest edges such that every `k`-set has at least `s`
/// covering vertices (`s = 1` gives `f(n, k, r)`).
pub fn solve_f(n: u32, k: u32, r: u32, s: u32, budget: &SearchBudget) -> Result<SolveResult> {
    budget.validate()?;
    let p = CoverProblem::new(n, k, r, s, budget)?;
    let tracker = Tracker::new(budget);
    let out = deepen(
        &p,
        &tracker,
        budget,
        f_lower_bound(n, k, r, s),
        upper_bound(n, k, r, s)?,
    );
    Ok(finish(&p, &tracker, out, None))
}

/// Solves as [`solve_f`], then lists every optimum up to isomorphism.
pub fn enumerate_extremal(
    n: u32,
    k: u32,
    r: u32,
    s: u32,
    budget: &SearchBudget,
) -> Result<SolveResult> {
    budget.validate()?;
    if n > DEFAULT_CANON_LIMIT {
        return Err(Error::CanonicalLimit {
            n,
            limit: DEFAULT_CANON_LIMIT,
        });
    }
    let p = CoverProblem::new(n, k, r, s, budget)?;
    let tracker = Tracker::new(budget);
    let out = deepen(
        &p,
        &tracker,
        budget,
        f_lower_bound(n, k, r, s),
        upper_bound(n, k, r, s)?,
    );
    if out.proof_state != ProofState::Optimal {
        return Ok(finish(&p, &tracker, out, None));
    }
    match collect_at(&p, &tracker, out.optimum as u32, budget.workers) {
        Ok(found) => {
            let mut classes = BTreeSet::new();
            for bits in found {
                let h = p.to_hypergraph(&bits);
                debug_assert!(audit(&h, k, s).map(|r| r.covered).unwrap_or(false));
                classes.insert(h.canonical_form(DEFAULT_CANON_LIMIT)?);
            }
            Ok(finish(
                &p,
                &tracker,
                out,
                Some(classes.into_iter().collect()),
            ))
        }
        Err(Exhausted) => {
            let out = Outcome {
                proof_state: ProofState::BudgetExhausted,
                ..out
            };
            Ok(finish(&p, &tracker, out, None))
        }
    }
}

//! Fewest arcs in a digraph with property `S_k`.
//!
//! Every vertex needs indegree at least `k` (a `k`-set holding a vertex and all
//! its in-neighbours would otherwise be uncovered), so the search assigns
//! in-neighbourhoods vertex by vertex, sizes at least `k`, for arc totals
//! `m = kn, kn + 1, ...`. A `k`-set `B` is covered iff the in-neighbourhoods of
//! its members share a vertex, which is decided as soon as the last member of
//! `B` is assigned.

use std::collections::BTreeSet;

use super::{Certificate, Exhausted, ProofState, SearchBudget, SolveResult, Tracker};
use crate::coverage::has_property_sk;
use crate::error::{Error, Result};
use crate::setsys::{bit, full_mask, mask_subsets, vertices_of, CanonicalForm, Canonize, Digraph};

/// Beyond this the in-neighbourhood enumeration is hopeless.
const DIGRAPH_CAP: u32 = 8;

struct InSearch<'a> {
    n: u32,
    k: u32,
    tracker: &'a Tracker,
    /// `k`-sets with maximum element `v`, for each `v`
    closing: Vec<Vec<u64>>,
    inn: Vec<u64>,
}

impl InSearch<'_> {
    fn closed_sets_ok(&self, v: u32) -> bool {
        self.closing[v as usize - 1].iter().all(|&b| {
            vertices_of(b)
                .into_iter()
                .fold(full_mask(self.n), |acc, x| acc & self.inn[x as usize - 1])
                != 0
        })
    }

    /// Assigns vertices `v..=n` with exactly `left` arcs; `visit` returns true
    /// to stop the search.
    fn assign(
        &mut self,
        v: u32,
        left: u32,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> Result<bool, Exhausted> {
        self.tracker.tick()?;
        if v > self.n {
            return Ok(left == 0 && visit(&self.inn));
        }
        let later = self.n - v;
        if left < self.k * (later + 1) {
            return Ok(false);
        }
        let max_size = (left - self.k * later).min(self.n - 1);
        let others = full_mask(self.n) & !bit(v);
        let sizes: Vec<u32> = if v == self.n {
            vec![left]
        } else {
            (self.k..=max_size).collect()
        };
        for size in sizes {
            if size > self.n - 1 || size < self.k {
                continue;
            }
            for set in mask_subsets(others, size) {
                self.inn[v as usize - 1] = set;
                if self.closed_sets_ok(v) && self.assign(v + 1, left - size, visit)? {
                    return Ok(true);
                }
            }
        }
        self.inn[v as usize - 1] = 0;
        Ok(false)
    }
}

fn out_masks(inn: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; inn.len()];
    for (v, &m) in inn.iter().enumerate() {
        for u in vertices_of(m) {
            out[u as usize - 1] |= 1 << v;
        }
    }
    out
}

fn check(n: u32, k: u32, budget: &SearchBudget) -> Result<()> {
    budget.validate()?;
    if k < 1 || n < k + 1 {
        return Err(Error::invalid(format!(
            "digraph search needs n >= k+1 >= 2, got n={n}, k={k}"
        )));
    }
    if n > DIGRAPH_CAP && !budget.allow_large {
        return Err(Error::SearchSpaceTooLarge(format!(
            "digraphs on n={n} > {DIGRAPH_CAP} vertices"
        )));
    }
    if n > 64 {
        return Err(Error::SearchSpaceTooLarge(format!("n={n}")));
    }
    Ok(())
}

fn searcher(n: u32, k: u32, tracker: &Tracker) -> InSearch<'_> {
    let mut closing = vec![Vec::new(); n as usize];
    for b in mask_subsets(full_mask(n), k) {
        closing[63 - b.leading_zeros() as usize].push(b);
    }
    InSearch {
        n,
        k,
        tracker,
        closing,
        inn: vec![0; n as usize],
    }
}

fn run(n: u32, k: u32, budget: &SearchBudget, enumerate: bool) -> Result<SolveResult> {
    check(n, k, budget)?;
    let tracker = Tracker::new(budget);
    let mut search = searcher(n, k, &tracker);
    let complete = Digraph::complete(n)?;
    let max_arcs = n * (n - 1);
    for m in k * n..=max_arcs {
        let mut first: Option<Vec<u64>> = None;
        let mut classes = BTreeSet::new();
        let mut canon_err = None;
        let outcome = search.assign(1, m, &mut |inn| {
            if first.is_none() {
                first = Some(inn.to_vec());
            }
            if !enumerate {
                return true;
            }
            match Digraph::from_out_masks(&out_masks(inn), false).and_then(|d| d.canonical_form(n))
            {
                Ok(c) => {
                    classes.insert(c);
                }
                Err(e) => canon_err = Some(e),
            }
            false
        });
        if let Some(e) = canon_err {
            return Err(e);
        }
        match outcome {
            Err(Exhausted) => {
                // best known: the first solution if this level already had one,
                // else the complete digraph
                let cert = match &first {
                    Some(inn) => Digraph::from_out_masks(&out_masks(inn), false)?,
                    None => complete.clone(),
                };
                return Ok(result(
                    cert,
                    m as u64,
                    None,
                    &tracker,
                    ProofState::BudgetExhausted,
                ));
            }
            Ok(_) => {
                if let Some(inn) = first {
                    let cert = Digraph::from_out_masks(&out_masks(&inn), false)?;
                    let all: Option<Vec<CanonicalForm>> =
                        enumerate.then(|| classes.into_iter().collect());
                    return Ok(result(cert, m as u64, all, &tracker, ProofState::Optimal));
                }
            }
        }
    }
    unreachable!("the complete digraph on n >= k+1 vertices has property S_k")
}

fn result(
    cert: Digraph,
    lower: u64,
    all_optima: Option<Vec<CanonicalForm>>,
    tracker: &Tracker,
    proof_state: ProofState,
) -> SolveResult {
    SolveResult {
        optimum: cert.arc_count() as u64,
        lower_bound: lower,
        certificate: Certificate::Digraph(cert),
        all_optima,
        nodes_explored: tracker.nodes(),
        wall_time: tracker.elapsed(),
        proof_state,
    }
}

/// Minimum arc count over digraphs on `n` vertices with property `S_k`.
pub fn solve_digraph_min(n: u32, k: u32, budget: &SearchBudget) -> Result<SolveResult> {
    let res = run(n, k, budget, false)?;
    verify(&res, k);
    Ok(res)
}

/// As [`solve_digraph_min`], also listing every optimum up to isomorphism.
pub fn enumerate_digraph_optima(n: u32, k: u32, budget: &SearchBudget) -> Result<SolveResult> {
    let res = run(n, k, budget, true)?;
    verify(&res, k);
    Ok(res)
}

fn verify(res: &SolveResult, k: u32) {
    let d = res.certificate.as_digraph().expect("digraph certificate");
    assert!(
        has_property_sk(d, k).map(|r| r.holds).unwrap_or(false),
        "digraph search returned a certificate without S_k"
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_minima() {
        let b = SearchBudget::default();
        assert_eq!(solve_digraph_min(3, 2, &b).unwrap().optimum, 6);
        assert_eq!(solve_digraph_min(4, 1, &b).unwrap().optimum, 4);
        assert_eq!(solve_digraph_min(4, 2, &b).unwrap().optimum, 8);
    }

    #[test]
    fn enumerates_classes() {
        let res = enumerate_digraph_optima(3, 1, &SearchBudget::default()).unwrap();
        assert_eq!(res.optimum, 3);
        // directed triangle, and a 2-cycle with the third vertex fed from it
        assert_eq!(res.all_optima.unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(solve_digraph_min(2, 2, &SearchBudget::default()).is_err());
        assert!(solve_digraph_min(3, 0, &SearchBudget::default()).is_err());
    }
}

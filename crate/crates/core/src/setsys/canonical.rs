//! Isomorphism keys by exhaustive relabeling.
//!
//! The key of a structure is the smallest serialization it takes over all `n!`
//! vertex permutations, so two inputs get equal keys exactly when they are
//! isomorphic. Cost is `n! * |edges|`, hence the vertex limit.

use serde::{Deserialize, Serialize};

use super::{Digraph, Hypergraph};
use crate::error::{Error, Result};

pub const DEFAULT_CANON_LIMIT: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalForm {
    /// Sorted edge masks of the minimizing relabeling.
    Hypergraph { n: u32, r: u32, edges: Vec<u64> },
    /// Sorted arcs of the minimizing relabeling.
    Digraph { n: u32, arcs: Vec<(u32, u32)> },
}

impl CanonicalForm {
    /// The canonical representative itself, as a hypergraph.
    pub fn to_hypergraph(&self) -> Option<Hypergraph> {
        match self {
            CanonicalForm::Hypergraph { n, r, edges } => {
                Some(Hypergraph::from_masks(*n, *r, edges.iter().copied()))
            }
            CanonicalForm::Digraph { .. } => None,
        }
    }

    pub fn to_digraph(&self) -> Option<Digraph> {
        match self {
            CanonicalForm::Digraph { n, arcs } => {
                super::make_digraph(*n, arcs.iter().copied(), false).ok()
            }
            CanonicalForm::Hypergraph { .. } => None,
        }
    }
}

pub trait Canonize {
    fn canonical_form(&self, limit: u32) -> Result<CanonicalForm>;
}

/// Calls `visit` once per permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn check_limit(n: u32, limit: u32) -> Result<()> {
    if n > limit {
        Err(Error::CanonicalLimit { n, limit })
    } else {
        Ok(())
    }
}

impl Canonize for Hypergraph {
    fn canonical_form(&self, limit: u32) -> Result<CanonicalForm> {
        check_limit(self.n(), limit)?;
        let edges: Vec<Vec<usize>> = self
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| v as usize - 1).collect())
            .collect();
        let mut best: Option<Vec<u64>> = None;
        let mut scratch = Vec::with_capacity(edges.len());
        for_each_permutation(self.n() as usize, |perm| {
            scratch.clear();
            scratch.extend(
                edges
                    .iter()
                    .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << perm[v])),
            );
            scratch.sort_unstable();
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        });
        Ok(CanonicalForm::Hypergraph {
            n: self.n(),
            r: self.r(),
            edges: best.unwrap_or_default(),
        })
    }
}

impl Canonize for Digraph {
    fn canonical_form(&self, limit: u32) -> Result<CanonicalForm> {
        check_limit(self.n(), limit)?;
        let arcs: Vec<(usize, usize)> = self
            .arcs()
            .map(|(u, v)| (u as usize - 1, v as usize - 1))
            .collect();
        let mut best: Option<Vec<(u32, u32)>> = None;
        let mut scratch = Vec::with_capacity(arcs.len());
        for_each_permutation(self.n() as usize, |perm| {
            scratch.clear();
            scratch.extend(arcs.iter().map(|&(u, v)| (perm[u] + 1, perm[v] + 1)));
            scratch.sort_unstable();
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        });
        Ok(CanonicalForm::Digraph {
            n: self.n(),
            arcs: best.unwrap_or_default(),
        })
    }
}

//! The cover relation and the audits built on it.
//!
//! A vertex `u` covers a set `A` (with `u ∉ A`) in an `r`-uniform hypergraph when
//! `B ∪ {u}` is an edge for every `(r-1)`-subset `B` of `A`. For `|A| = r - 1`
//! this is simply "`A ∪ {u}` is an edge".

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsys::{
    bit, full_mask, k_subsets, mask_of, mask_subsets, vertices_of, Digraph, Hypergraph,
};

/// Outcome of a coverage audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub covered: bool,
    /// Lexicographically first set that is not covered often enough.
    pub witness: Option<Vec<u32>>,
    /// Minimum number of covering vertices over the audited sets; present
    /// whenever every set was audited.
    pub multiplicity_min: Option<u32>,
    pub audited: u64,
}

/// Maps each `(r-1)`-set in the shadow to the vertices completing it to an edge.
#[derive(Clone, Debug)]
pub struct CoverIndex {
    n: u32,
    r: u32,
    completions: HashMap<u64, u64>,
}

impl CoverIndex {
    pub fn new(h: &Hypergraph) -> Self {
        let mut completions: HashMap<u64, u64> = HashMap::new();
        for e in h.edge_masks() {
            let mut rest = e;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                *completions.entry(e & !low).or_default() |= low;
                rest &= rest - 1;
            }
        }
        CoverIndex {
            n: h.n(),
            r: h.r(),
            completions,
        }
    }

    /// Mask of every vertex covering the set `a`.
    pub fn covering_mask(&self, a: u64) -> u64 {
        let mut acc = full_mask(self.n) & !a;
        for b in mask_subsets(a, self.r - 1) {
            acc &= self.completions.get(&b).copied().unwrap_or(0);
            if acc == 0 {
                break;
            }
        }
        acc
    }
}

fn validate_set(h: &Hypergraph, a: &[u32]) -> Result<u64> {
    let mut mask = 0u64;
    for &v in a {
        if v == 0 || v > h.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: h.n(),
            });
        }
        if mask & bit(v) != 0 {
            return Err(Error::RepeatedVertex(v));
        }
        mask |= bit(v);
    }
    if (a.len() as u32) + 1 < h.r() {
        return Err(Error::SetTooSmall {
            size: a.len(),
            min: h.r() - 1,
        });
    }
    Ok(mask)
}

/// Does `u` cover `a` in `h`?
pub fn covers(h: &Hypergraph, u: u32, a: &[u32]) -> Result<bool> {
    let a_mask = validate_set(h, a)?;
    if u == 0 || u > h.n() {
        return Err(Error::VertexOutOfRange {
            vertex: u,
            n: h.n(),
        });
    }
    if a_mask & bit(u) != 0 {
        return Err(Error::VertexInSet(u));
    }
    Ok(mask_subsets(a_mask, h.r() - 1)
        .into_iter()
        .all(|b| h.contains_mask(b | bit(u))))
}

/// Every vertex outside `a` that covers it, ascending.
pub fn covering_vertices(h: &Hypergraph, a: &[u32]) -> Result<Vec<u32>> {
    let a_mask = validate_set(h, a)?;
    Ok(vertices_of(CoverIndex::new(h).covering_mask(a_mask)))
}

fn check_audit_range(h: &Hypergraph, k: u32, s: u32) -> Result<()> {
    if k + 1 < h.r() || k >= h.n() {
        return Err(Error::invalid(format!(
            "audit needs r-1 <= k < n, got k={k} with r={} and n={}",
            h.r(),
            h.n()
        )));
    }
    if s == 0 {
        return Err(Error::invalid("multiplicity s must be at least 1"));
    }
    Ok(())
}

/// Checks that every `k`-set has at least `s` covering vertices, stopping at
/// the first failure.
pub fn audit(h: &Hypergraph, k: u32, s: u32) -> Result<CoverReport> {
    check_audit_range(h, k, s)?;
    let index = CoverIndex::new(h);
    let mut audited = 0u64;
    let mut min = u32::MAX;
    for a in k_subsets(h.n(), k) {
        audited += 1;
        let count = index.covering_mask(mask_of(&a)).count_ones();
        if count < s {
            return Ok(CoverReport {
                covered: false,
                witness: Some(a),
                multiplicity_min: None,
                audited,
            });
        }
        min = min.min(count);
    }
    Ok(CoverReport {
        covered: true,
        witness: None,
        multiplicity_min: Some(min),
        audited,
    })
}

/// Audits every `k`-set in parallel without early exit. The witness is the
/// lexicographically first failing set whatever the schedule.
pub fn audit_exhaustive(h: &Hypergraph, k: u32, s: u32) -> Result<CoverReport> {
    check_audit_range(h, k, s)?;
    let index = CoverIndex::new(h);
    let sets: Vec<Vec<u32>> = k_subsets(h.n(), k).collect();
    let (min, witness) = sets
        .par_iter()
        .map(|a| {
            let count = index.covering_mask(mask_of(a)).count_ones();
            (count, (count < s).then_some(a))
        })
        .reduce(
            || (u32::MAX, None),
            |(c1, w1), (c2, w2)| {
                let w = match (w1, w2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (c1.min(c2), w)
            },
        );
    Ok(CoverReport {
        covered: witness.is_none(),
        witness: witness.cloned(),
        multiplicity_min: Some(min),
        audited: sets.len() as u64,
    })
}

/// Minimum over all `r`-sets of the number of vertices covering them.
pub fn cover_multiplicity(h: &Hypergraph) -> Result<u32> {
    if h.r() + 1 > h.n() {
        return Err(Error::invalid("cover multiplicity needs r <= n - 1"));
    }
    let index = CoverIndex::new(h);
    Ok(k_subsets(h.n(), h.r())
        .map(|rset| index.covering_mask(mask_of(&rset)).count_ones())
        .min()
        .unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkReport {
    pub holds: bool,
    pub witness: Option<Vec<u32>>,
}

/// Property `S_k`: every `k`-set lies in the out-neighbourhood of some vertex.
pub fn has_property_sk(d: &Digraph, k: u32) -> Result<SkReport> {
    if d.n() <= k {
        return Err(Error::invalid(format!(
            "property S_k needs n >= k+1, got n={} and k={k}",
            d.n()
        )));
    }
    let witness = first_uncovered_in_out(d.out_masks(), d.n(), k);
    Ok(SkReport {
        holds: witness.is_none(),
        witness: witness.map(vertices_of),
    })
}

/// First `k`-set (lexicographic) contained in no out-neighbourhood.
pub(crate) fn first_uncovered_in_out(out: &[u64], n: u32, k: u32) -> Option<u64> {
    k_subsets(n, k)
        .map(|b| mask_of(&b))
        .find(|&b| !out.iter().any(|&o| o & b == b))
}

/// `shadow(old) ⊆ shadow(new)`.
pub fn shadow_contains(new: &Hypergraph, old: &Hypergraph) -> Result<bool> {
    if new.n() != old.n() || new.r() != old.r() {
        return Err(Error::ShapeMismatch(new.n(), new.r(), old.n(), old.r()));
    }
    if new.r() < 2 {
        return Err(Error::invalid("shadow needs r >= 2"));
    }
    Ok(old.shadow().is_subhypergraph_of(&new.shadow()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::{make_digraph, make_hypergraph};

    #[test]
    fn covers_examples() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert!(covers(&k5, 5, &[1, 2, 3]).unwrap());

        let h = make_hypergraph(4, 3, [[1, 2, 4], [1, 3, 4]]).unwrap();
        assert!(!covers(&h, 4, &[1, 2, 3]).unwrap());

        let empty = Hypergraph::empty(5, 3).unwrap();
        assert!(!covers(&empty, 1, &[2, 3]).unwrap());
    }

    #[test]
    fn covers_errors() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert!(matches!(
            covers(&k5, 1, &[1, 2]),
            Err(Error::VertexInSet(1))
        ));
        assert!(matches!(
            covers(&k5, 1, &[2]),
            Err(Error::SetTooSmall { .. })
        ));
        assert!(matches!(
            covers(&k5, 6, &[2, 3]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn covering_vertex_examples() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(covering_vertices(&k5, &[1, 2, 3]).unwrap(), vec![4, 5]);
        let h = make_hypergraph(3, 3, [[1, 2, 3]]).unwrap();
        assert_eq!(covering_vertices(&h, &[1, 2]).unwrap(), vec![3]);
    }

    #[test]
    fn audit_complete() {
        for (n, r, k) in [(6, 3, 3), (7, 2, 4), (5, 4, 3)] {
            let h = Hypergraph::complete(n, r).unwrap();
            let rep = audit(&h, k, 1).unwrap();
            assert!(rep.covered);
            assert_eq!(rep.multiplicity_min, Some(n - k));
            assert_eq!(audit_exhaustive(&h, k, 1).unwrap(), rep);
        }
    }

    #[test]
    fn audit_witness_is_first_failure() {
        // star at 1: {1,x} covered by nobody when the only edges touch 1
        let h = make_hypergraph(4, 2, [[1, 2], [1, 3], [1, 4]]).unwrap();
        let rep = audit(&h, 1, 1).unwrap();
        assert!(rep.covered);
        let rep = audit(&h, 2, 1).unwrap();
        assert_eq!(rep.witness, Some(vec![1, 2]));
        let ex = audit_exhaustive(&h, 2, 1).unwrap();
        assert_eq!(ex.witness, Some(vec![1, 2]));
        assert!(!ex.covered);
        assert!(audit(&h, 4, 1).is_err());
        assert!(audit(&h, 2, 0).is_err());
    }

    #[test]
    fn multiplicity() {
        assert_eq!(
            cover_multiplicity(&Hypergraph::complete(7, 3).unwrap()).unwrap(),
            4
        );
        assert_eq!(
            cover_multiplicity(&Hypergraph::empty(6, 3).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn sk_examples() {
        let k3 = Digraph::complete(3).unwrap();
        assert!(has_property_sk(&k3, 2).unwrap().holds);
        let tri = make_digraph(3, [(1, 2), (2, 3), (3, 1)], true).unwrap();
        assert!(has_property_sk(&tri, 1).unwrap().holds);
        let source = make_digraph(3, [(1, 2), (1, 3), (2, 3)], true).unwrap();
        let rep = has_property_sk(&source, 1).unwrap();
        assert_eq!(rep.witness, Some(vec![1]));
        assert!(has_property_sk(&tri, 3).is_err());
    }

    #[test]
    fn shadow_containment() {
        let old = make_hypergraph(4, 3, [[1, 2, 3]]).unwrap();
        assert!(shadow_contains(&old, &old).unwrap());
        let new = make_hypergraph(4, 3, [[1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        assert!(shadow_contains(&new, &old).unwrap());
        let new = make_hypergraph(4, 3, [[1, 2, 4]]).unwrap();
        assert!(!shadow_contains(&new, &old).unwrap());
        let other = make_hypergraph(5, 3, [[1, 2, 4]]).unwrap();
        assert!(shadow_contains(&other, &old).is_err());
    }
}

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::subsets::{bit, vertices_of};
use super::MAX_VERTICES;
use crate::error::{Error, Result};

/// A loop-free directed graph on `{1, ..., n}`.
///
/// With `oriented` set, at most one of `(u, v)` and `(v, u)` is present.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DigraphWire", into = "DigraphWire")]
pub struct Digraph {
    n: u32,
    arcs: BTreeSet<(u32, u32)>,
    oriented: bool,
    out: Vec<u64>,
    inn: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct DigraphWire {
    n: u32,
    arcs: Vec<[u32; 2]>,
    #[serde(default)]
    oriented: bool,
}

impl TryFrom<DigraphWire> for Digraph {
    type Error = Error;

    fn try_from(w: DigraphWire) -> Result<Self> {
        make_digraph(w.n, w.arcs.into_iter().map(|[u, v]| (u, v)), w.oriented)
    }
}

impl From<Digraph> for DigraphWire {
    fn from(d: Digraph) -> Self {
        DigraphWire {
            n: d.n,
            arcs: d.arcs.iter().map(|&(u, v)| [u, v]).collect(),
            oriented: d.oriented,
        }
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.oriented == other.oriented && self.arcs == other.arcs
    }
}

impl Eq for Digraph {}

pub fn make_digraph(
    n: u32,
    arcs: impl IntoIterator<Item = (u32, u32)>,
    oriented: bool,
) -> Result<Digraph> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::VertexCount {
            n,
            max: MAX_VERTICES,
        });
    }
    let mut out = vec![0u64; n as usize];
    let mut inn = vec![0u64; n as usize];
    let mut set = BTreeSet::new();
    for (u, v) in arcs {
        for w in [u, v] {
            if w == 0 || w > n {
                return Err(Error::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if oriented && set.contains(&(v, u)) {
            return Err(Error::NotOriented(u, v));
        }
        set.insert((u, v));
        out[u as usize - 1] |= bit(v);
        inn[v as usize - 1] |= bit(u);
    }
    Ok(Digraph {
        n,
        arcs: set,
        oriented,
        out,
        inn,
    })
}

impl Digraph {
    /// Builds from per-vertex out-neighbourhood masks.
    pub(crate) fn from_out_masks(out: &[u64], oriented: bool) -> Result<Self> {
        let n = out.len() as u32;
        let arcs = out
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| vertices_of(m).into_iter().map(move |v| (i as u32 + 1, v)));
        make_digraph(n, arcs, oriented)
    }

    /// Complete digraph: every ordered pair of distinct vertices.
    pub fn complete(n: u32) -> Result<Self> {
        let arcs = (1..=n).flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)));
        make_digraph(n, arcs, false)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn out_mask(&self, v: u32) -> u64 {
        self.out[v as usize - 1]
    }

    pub fn in_mask(&self, v: u32) -> u64 {
        self.inn[v as usize - 1]
    }

    pub(crate) fn out_masks(&self) -> &[u64] {
        &self.out
    }

    /// `Γ⁻(v)`, ascending.
    pub fn in_neighbours(&self, v: u32) -> Vec<u32> {
        vertices_of(self.in_mask(v))
    }

    pub fn indegree(&self, v: u32) -> u32 {
        self.in_mask(v).count_ones()
    }

    pub fn indegrees(&self) -> Vec<u32> {
        self.inn.iter().map(|m| m.count_ones()).collect()
    }

    /// True if no pair of opposite arcs is present, regardless of the flag.
    pub fn is_antisymmetric(&self) -> bool {
        self.arcs.iter().all(|&(u, v)| !self.arcs.contains(&(v, u)))
    }

    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n as usize {
            return Err(Error::invalid("permutation length differs from n"));
        }
        let arcs = self
            .arcs
            .iter()
            .map(|&(u, v)| (perm[u as usize - 1], perm[v as usize - 1]));
        make_digraph(self.n, arcs, self.oriented)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_arcs() {
        assert!(matches!(
            make_digraph(3, [(1, 1)], false),
            Err(Error::Loop(1))
        ));
        assert!(matches!(
            make_digraph(3, [(1, 4)], false),
            Err(Error::VertexOutOfRange { vertex: 4, .. })
        ));
        assert!(matches!(
            make_digraph(3, [(1, 2), (2, 1)], true),
            Err(Error::NotOriented(2, 1))
        ));
        let d = make_digraph(3, [(1, 2), (2, 1), (1, 2)], false).unwrap();
        assert_eq!(d.arc_count(), 2);
    }

    #[test]
    fn neighbourhoods() {
        let d = make_digraph(3, [(1, 2), (2, 3), (3, 1)], true).unwrap();
        assert_eq!(d.in_neighbours(1), vec![3]);
        assert_eq!(d.indegrees(), vec![1, 1, 1]);
        assert_eq!(Digraph::complete(4).unwrap().arc_count(), 12);
    }

    #[test]
    fn json_shape() {
        let d = make_digraph(3, [(2, 3), (1, 2)], true).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"n":3,"arcs":[[1,2],[2,3]],"oriented":true}"#);
        let back: Digraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}

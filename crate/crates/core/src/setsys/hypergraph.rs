use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::subsets::{bit, mask_of, mask_subsets, vertices_of};
use super::MAX_VERTICES;
use crate::error::{Error, Result};

/// An `r`-uniform hypergraph on the vertex set `{1, ..., n}`.
///
/// Edges are kept as ascending vertex lists, and the edge list itself is in
/// lexicographic order without duplicates, so two equal labeled hypergraphs
/// always serialize identically. A mask mirror of the edge set backs the
/// membership queries.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "HypergraphWire", into = "HypergraphWire")]
pub struct Hypergraph {
    n: u32,
    r: u32,
    edges: Vec<Vec<u32>>,
    masks: HashSet<u64>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphWire {
    n: u32,
    r: u32,
    edges: Vec<Vec<u32>>,
}

impl TryFrom<HypergraphWire> for Hypergraph {
    type Error = Error;

    fn try_from(w: HypergraphWire) -> Result<Self> {
        make_hypergraph(w.n, w.r, w.edges)
    }
}

impl From<Hypergraph> for HypergraphWire {
    fn from(h: Hypergraph) -> Self {
        HypergraphWire {
            n: h.n,
            r: h.r,
            edges: h.edges,
        }
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

/// Validates and canonicalizes an edge list.
pub fn make_hypergraph<I, E>(n: u32, r: u32, edges: I) -> Result<Hypergraph>
where
    I: IntoIterator<Item = E>,
    E: AsRef<[u32]>,
{
    check_shape(n, r)?;
    let mut masks = HashSet::new();
    for edge in edges {
        let edge = edge.as_ref();
        if r > n {
            return Err(Error::UniformityTooLarge { r, n });
        }
        let mut mask = 0u64;
        for &v in edge {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= bit(v);
        }
        if edge.len() != r as usize || mask.count_ones() != r {
            return Err(Error::EdgeSize {
                expected: r,
                got: mask.count_ones() as usize,
            });
        }
        masks.insert(mask);
    }
    Ok(Hypergraph::from_mask_set(n, r, masks))
}

fn check_shape(n: u32, r: u32) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::VertexCount {
            n,
            max: MAX_VERTICES,
        });
    }
    if r == 0 {
        return Err(Error::ZeroUniformity);
    }
    Ok(())
}

impl Hypergraph {
    /// Builds from edge masks that the caller guarantees are `r`-sets within `{1..n}`.
    pub(crate) fn from_mask_set(n: u32, r: u32, masks: HashSet<u64>) -> Self {
        debug_assert!(masks.iter().all(|m| m.count_ones() == r));
        let mut edges: Vec<Vec<u32>> = masks.iter().map(|&m| vertices_of(m)).collect();
        edges.sort_unstable();
        Hypergraph { n, r, edges, masks }
    }

    pub(crate) fn from_masks(n: u32, r: u32, masks: impl IntoIterator<Item = u64>) -> Self {
        Self::from_mask_set(n, r, masks.into_iter().collect())
    }

    pub fn empty(n: u32, r: u32) -> Result<Self> {
        check_shape(n, r)?;
        Ok(Self::from_mask_set(n, r, HashSet::new()))
    }

    /// All `r`-subsets of `{1..n}`.
    pub fn complete(n: u32, r: u32) -> Result<Self> {
        check_shape(n, r)?;
        Ok(Self::from_masks(n, r, mask_subsets(super::full_mask(n), r)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge masks in canonical (lexicographic) order.
    pub fn edge_masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.edges.iter().map(|e| mask_of(e))
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.masks.contains(&mask)
    }

    /// Membership of a vertex set given in any order.
    pub fn contains(&self, edge: &[u32]) -> bool {
        edge.iter().all(|&v| v >= 1 && v <= self.n) && self.masks.contains(&mask_of(edge))
    }

    pub fn with_edge(&self, edge: &[u32]) -> Result<Self> {
        let mut all = self.edges.clone();
        all.push(edge.to_vec());
        make_hypergraph(self.n, self.r, all)
    }

    /// The hypergraph with `edge` removed (a no-op if absent).
    pub fn without_edge(&self, edge: &[u32]) -> Self {
        let target = mask_of(edge);
        let mut masks = self.masks.clone();
        masks.remove(&target);
        Self::from_mask_set(self.n, self.r, masks)
    }

    /// Applies the relabeling `v -> perm[v - 1]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n as usize {
            return Err(Error::invalid("permutation length differs from n"));
        }
        let edges: Vec<Vec<u32>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v as usize - 1]).collect())
            .collect();
        let h = make_hypergraph(self.n, self.r, edges)?;
        if h.len() != self.len() {
            return Err(Error::invalid("relabeling is not a permutation"));
        }
        Ok(h)
    }

    pub fn is_subhypergraph_of(&self, other: &Hypergraph) -> bool {
        self.n == other.n && self.r == other.r && self.masks.iter().all(|m| other.masks.contains(m))
    }

    /// The `(r-1)`-uniform hypergraph of all `(r-1)`-sets contained in some edge.
    pub fn shadow(&self) -> Self {
        assert!(self.r >= 2, "shadow needs r >= 2");
        let mut masks = HashSet::new();
        for &e in &self.masks {
            let mut rest = e;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                masks.insert(e & !low);
                rest &= rest - 1;
            }
        }
        Self::from_mask_set(self.n, self.r - 1, masks)
    }

    /// True when every `(r-1)`-subset of `{1..n}` lies in some edge.
    pub fn is_shadow_complete(&self) -> bool {
        if self.r < 2 || self.r > self.n {
            return false;
        }
        let need = super::binomial(self.n as u64, self.r as u64 - 1).unwrap_or(u128::MAX);
        self.shadow().len() as u128 == need
    }

    /// Number of edges containing each vertex, indexed by `v - 1`.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n as usize];
        for e in &self.edges {
            for &v in e {
                deg[v as usize - 1] += 1;
            }
        }
        deg
    }

    /// Vertex degrees sorted in descending order.
    pub fn degree_sequence(&self) -> Vec<u64> {
        let mut deg = self.degrees();
        deg.sort_unstable_by(|a, b| b.cmp(a));
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_dedups() {
        let h = make_hypergraph(3, 3, [[3, 1, 2]]).unwrap();
        assert_eq!(h.edges(), &[vec![1, 2, 3]]);
        let h = make_hypergraph(5, 2, [[1, 2], [2, 1]]).unwrap();
        assert_eq!(h.edges(), &[vec![1, 2]]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            make_hypergraph(4, 3, [[1, 2, 5]]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 4 })
        ));
        assert!(matches!(
            make_hypergraph(4, 3, [[1, 2]]),
            Err(Error::EdgeSize { expected: 3, .. })
        ));
        assert!(matches!(
            make_hypergraph(4, 3, [[1, 1, 2]]),
            Err(Error::EdgeSize { .. })
        ));
        assert!(matches!(
            make_hypergraph(2, 3, [[1, 2, 3]]),
            Err(Error::UniformityTooLarge { .. })
        ));
        // r > n is fine as long as there are no edges
        assert!(make_hypergraph(2, 3, Vec::<Vec<u32>>::new()).is_ok());
    }

    #[test]
    fn shadows() {
        let h = make_hypergraph(3, 3, [[1, 2, 3]]).unwrap();
        assert_eq!(h.shadow().edges(), &[vec![1, 2], vec![1, 3], vec![2, 3]]);

        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(k5.len(), 10);
        assert_eq!(k5.shadow().len(), 10);
        assert!(k5.is_shadow_complete());

        let h = make_hypergraph(4, 3, [[1, 2, 3], [1, 2, 4]]).unwrap();
        let s = h.shadow();
        assert_eq!(s.len(), 5);
        for pair in [[1, 2], [1, 3], [2, 3], [1, 4], [2, 4]] {
            assert!(s.contains(&pair));
        }
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(
            Hypergraph::complete(5, 3).unwrap().degree_sequence(),
            vec![6; 5]
        );
        let h = make_hypergraph(4, 3, [[1, 2, 3]]).unwrap();
        assert_eq!(h.degree_sequence(), vec![1, 1, 1, 0]);
    }

    #[test]
    fn json_shape() {
        let h = make_hypergraph(4, 2, [[2, 1], [3, 4]]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"n":4,"r":2,"edges":[[1,2],[3,4]]}"#);
        let back: Hypergraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<Hypergraph>(r#"{"n":3,"r":2,"edges":[[1,4]]}"#).is_err());
    }
}

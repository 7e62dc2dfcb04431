//! Explicit covering hypergraphs and `S_k` digraphs.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsys::{
    bit, full_mask, make_digraph, mask_of, mask_subsets, vertices_of, Digraph, Hypergraph,
    MAX_VERTICES,
};
use crate::solver::{self, ProofState, SearchBudget};

/// How the inner `(r-1)`-set covering of the extremal construction is realized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringStrategy {
    /// A minimum covering found by exhaustive search.
    Exact,
    Greedy,
    /// Residue-class covering with patches; `None` picks the residue `m ≡ 0`.
    Modular(Option<u32>),
    /// A caller-provided covering on `{1..m}`, where `m` is the inner vertex count.
    Supplied(Hypergraph),
}

/// The Erdős–Moser graph: vertices `1..k-1` joined to everything, plus an edge
/// cover of `k..n` by a matching (with one path of length two when the count is odd).
pub fn em_graph(n: u32, k: u32) -> Result<Hypergraph> {
    if k < 2 || n <= k {
        return Err(Error::invalid(format!(
            "em_graph needs n > k >= 2, got n={n}, k={k}"
        )));
    }
    let mut masks = HashSet::new();
    for hub in 1..k {
        for v in 1..=n {
            if v != hub {
                masks.insert(bit(hub) | bit(v));
            }
        }
    }
    let rest: Vec<u32> = (k..=n).collect();
    for pair in rest.chunks(2) {
        match pair {
            [a, b] => masks.insert(bit(*a) | bit(*b)),
            // leftover vertex joins its predecessor
            [a] => masks.insert(bit(*a) | bit(*a - 1)),
            _ => unreachable!(),
        };
    }
    Ok(Hypergraph::from_mask_set(n, 2, masks))
}

fn check_covering_params(n: u32, r: u32) -> Result<()> {
    if r < 2 || n < r || n > MAX_VERTICES {
        return Err(Error::invalid(format!(
            "covering needs n >= r >= 2, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// All `r`-sets whose vertex sum is `≡ c (mod n)`, then one patch edge per
/// `(r-1)`-set the residue family misses.
///
/// Each missed set `B` is patched by `B ∪ {y}` for the smallest `y ∉ B` whose
/// edge is not already present. Returns the covering and the number of patches.
pub fn modular_covering(n: u32, r: u32, c: u32) -> Result<(Hypergraph, u64)> {
    check_covering_params(n, r)?;
    if c == 0 || c > n {
        return Err(Error::invalid(format!(
            "residue c must be in 1..={n}, got {c}"
        )));
    }
    let residue = (c % n) as u64;
    let mut edges: HashSet<u64> = mask_subsets(full_mask(n), r)
        .into_iter()
        .filter(|&m| vertices_of(m).iter().map(|&v| v as u64).sum::<u64>() % n as u64 == residue)
        .collect();
    let base = Hypergraph::from_mask_set(n, r, edges.clone());
    let covered: HashSet<u64> = base.shadow().edge_masks().collect();
    let mut patches = 0u64;
    for b in crate::setsys::k_subsets(n, r - 1) {
        let bm = mask_of(&b);
        if covered.contains(&bm) {
            continue;
        }
        let patch = (1..=n)
            .filter(|&y| bm & bit(y) == 0)
            .map(|y| bm | bit(y))
            .find(|e| !edges.contains(e));
        if let Some(e) = patch {
            edges.insert(e);
            patches += 1;
        }
    }
    Ok((Hypergraph::from_mask_set(n, r, edges), patches))
}

/// Repeatedly adds the `r`-set covering the most uncovered `(r-1)`-sets,
/// breaking ties lexicographically.
pub fn greedy_covering(n: u32, r: u32) -> Result<Hypergraph> {
    check_covering_params(n, r)?;
    let rsets = mask_subsets(full_mask(n), r);
    let mut containing: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &e) in rsets.iter().enumerate() {
        for b in mask_subsets(e, r - 1) {
            containing.entry(b).or_default().push(i);
        }
    }
    let mut gain = vec![r; rsets.len()];
    let mut uncovered = containing.len();
    let mut covered: HashSet<u64> = HashSet::new();
    let mut chosen = HashSet::new();
    while uncovered > 0 {
        let (best, _) = gain
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        let e = rsets[best];
        chosen.insert(e);
        for b in mask_subsets(e, r - 1) {
            if covered.insert(b) {
                uncovered -= 1;
                for &j in &containing[&b] {
                    gain[j] -= 1;
                }
            }
        }
    }
    Ok(Hypergraph::from_mask_set(n, r, chosen))
}

/// The extremal construction together with how its inner covering was made.
#[derive(Clone, Debug)]
pub struct BuiltG {
    pub hypergraph: Hypergraph,
    pub inner_edges: usize,
    pub patch_count: Option<u64>,
}

/// Realizes a complete-shadow `r`-uniform covering of `{1..m}` per `strategy`.
pub fn inner_covering(
    m: u32,
    r: u32,
    strategy: &CoveringStrategy,
) -> Result<(Hypergraph, Option<u64>)> {
    match strategy {
        CoveringStrategy::Exact => {
            let res = solver::solve_d(m, r, &SearchBudget::default())?;
            if res.proof_state != ProofState::Optimal {
                return Err(Error::InfeasibleStrategy(format!(
                    "no proven minimum covering for D({m},{r}) within budget"
                )));
            }
            let h = res
                .certificate
                .into_hypergraph()
                .expect("covering search certifies with a hypergraph");
            Ok((h, None))
        }
        CoveringStrategy::Greedy => Ok((greedy_covering(m, r)?, None)),
        CoveringStrategy::Modular(c) => {
            let (h, patches) = modular_covering(m, r, c.unwrap_or(m))?;
            Ok((h, Some(patches)))
        }
        CoveringStrategy::Supplied(h) => {
            if h.n() != m || h.r() != r {
                return Err(Error::InfeasibleStrategy(format!(
                    "supplied covering has n={}, r={}; expected n={m}, r={r}",
                    h.n(),
                    h.r()
                )));
            }
            if !h.is_shadow_complete() {
                return Err(Error::InfeasibleStrategy(
                    "supplied covering misses some (r-1)-set".into(),
                ));
            }
            Ok((h.clone(), None))
        }
    }
}

/// All `r`-sets meeting the hub `{1..k-r+1}`, plus a covering of the
/// `(r-1)`-sets of `{k-r+2..n}`.
pub fn build_g(n: u32, k: u32, r: u32, strategy: &CoveringStrategy) -> Result<Hypergraph> {
    build_g_detailed(n, k, r, strategy).map(|b| b.hypergraph)
}

pub fn build_g_detailed(n: u32, k: u32, r: u32, strategy: &CoveringStrategy) -> Result<BuiltG> {
    if r < 2 || k + 1 < r || n <= k || n > MAX_VERTICES {
        return Err(Error::invalid(format!(
            "construction needs n > k >= r-1 and r >= 2, got n={n}, k={k}, r={r}"
        )));
    }
    let hub_size = k + 1 - r;
    let hub = full_mask(hub_size);
    let mut masks: HashSet<u64> = mask_subsets(full_mask(n), r)
        .into_iter()
        .filter(|e| e & hub != 0)
        .collect();
    let m = n - hub_size;
    let (inner, patch_count) = inner_covering(m, r, strategy)?;
    let inner_edges = inner.len();
    masks.extend(inner.edge_masks().map(|e| e << hub_size));
    Ok(BuiltG {
        hypergraph: Hypergraph::from_mask_set(n, r, masks),
        inner_edges,
        patch_count,
    })
}

/// Complete digraph on `{1..k+1}`, plus arcs into each `i > k+1` from a
/// `k`-subset of the core (`{1..k}` unless overridden in `choices`).
pub fn build_a(n: u32, k: u32, choices: Option<&BTreeMap<u32, Vec<u32>>>) -> Result<Digraph> {
    if k < 1 || n < k + 1 {
        return Err(Error::invalid(format!(
            "build_a needs n >= k+1 >= 2, got n={n}, k={k}"
        )));
    }
    let core = k + 1;
    let mut arcs = Vec::new();
    for u in 1..=core {
        for v in 1..=core {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    let default: Vec<u32> = (1..=k).collect();
    if let Some(map) = choices {
        if let Some(&bad) = map.keys().find(|&&i| i <= core || i > n) {
            return Err(Error::invalid(format!(
                "choice given for vertex {bad}, outside {}..={n}",
                core + 1
            )));
        }
    }
    for i in core + 1..=n {
        let choice = choices.and_then(|m| m.get(&i)).unwrap_or(&default);
        let cm = mask_of(choice);
        if choice.len() != k as usize
            || cm.count_ones() != k
            || choice.iter().any(|&a| a == 0 || a > core)
        {
            return Err(Error::invalid(format!(
                "choice for vertex {i} must be a {k}-subset of 1..={core}, got {choice:?}"
            )));
        }
        arcs.extend(choice.iter().map(|&a| (a, i)));
    }
    make_digraph(n, arcs, false)
}

/// Adds vertex `n+1` with the in-neighbourhood of `v` and no out-arcs.
pub fn duplicate_vertex(d: &Digraph, v: u32) -> Result<Digraph> {
    if v == 0 || v > d.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: d.n(),
        });
    }
    let new = d.n() + 1;
    if new > MAX_VERTICES {
        return Err(Error::VertexCount {
            n: new,
            max: MAX_VERTICES,
        });
    }
    let arcs = d
        .arcs()
        .chain(d.in_neighbours(v).into_iter().map(|u| (u, new)));
    make_digraph(new, arcs, d.oriented())
}

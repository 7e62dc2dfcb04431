use super::{solve_d, ProofState, SearchBudget};
use crate::bounds::inner_size;
use crate::error::{Error, Result};
use crate::setsys::{binomial, full_mask, mask_subsets, vertices_of, Digraph, Hypergraph};

/// Is `h` (up to relabeling) a member of the extremal family for `k`?
///
/// That is: some `(k-r+1)`-set `A` with every `r`-set meeting `A` present, and
/// the remaining edges inside `V \ A` forming a minimum covering of its
/// `(r-1)`-sets. Vertices of `A` have full degree, so candidates for `A` are
/// drawn from those. `d_inner` supplies `D(n-k+r-1, r)`; without it the
/// covering number is computed.
pub fn is_member_g(
    h: &Hypergraph,
    k: u32,
    d_inner: Option<u64>,
    budget: &SearchBudget,
) -> Result<bool> {
    let (n, r) = (h.n(), h.r());
    if r < 2 || k + 1 < r || n <= k {
        return Err(Error::invalid(format!(
            "membership needs n > k >= r-1 and r >= 2, got n={n}, k={k}, r={r}"
        )));
    }
    let hub_size = k + 1 - r;
    let m = inner_size(n, k, r);
    let d = match d_inner {
        Some(d) => d,
        None => {
            let res = solve_d(m, r, budget).map_err(|e| Error::CoveringNumberUnavailable {
                n: m,
                r,
                reason: e.to_string(),
            })?;
            if res.proof_state != ProofState::Optimal {
                return Err(Error::CoveringNumberUnavailable {
                    n: m,
                    r,
                    reason: "search budget exhausted".into(),
                });
            }
            res.optimum
        }
    };
    let total = binomial(n as u64, r as u64).unwrap_or(u128::MAX);
    let meeting = total - binomial(m as u64, r as u64).unwrap_or(0);
    if h.len() as u128 != meeting + d as u128 {
        return Ok(false);
    }
    let full_degree = binomial(n as u64 - 1, r as u64 - 1).unwrap_or(u128::MAX) as u64;
    let degrees = h.degrees();
    let hubs: u64 = (1..=n)
        .filter(|&v| degrees[v as usize - 1] == full_degree)
        .fold(0, |acc, v| acc | 1 << (v - 1));
    if hubs.count_ones() < hub_size {
        return Ok(false);
    }
    for hub in mask_subsets(hubs, hub_size) {
        // hubs have full degree, so everything meeting them is present and the
        // edge count above leaves exactly d edges inside the rest
        let rest = full_mask(n) & !hub;
        let inner: Vec<u64> = h.edge_masks().filter(|e| e & hub == 0).collect();
        debug_assert_eq!(inner.len() as u64, d);
        let faces: std::collections::HashSet<u64> =
            inner.iter().flat_map(|&e| mask_subsets(e, r - 1)).collect();
        let need = binomial(vertices_of(rest).len() as u64, r as u64 - 1).unwrap_or(u128::MAX);
        if faces.len() as u128 == need {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Is `d` a member of the `kn`-arc family: a complete bidirected core on
/// `k+1` vertices, every other vertex receiving arcs from exactly `k` core
/// vertices, and nothing else?
pub fn is_member_a(d: &Digraph, k: u32) -> bool {
    let n = d.n();
    if k < 1 || n < k + 1 || d.arc_count() as u64 != k as u64 * n as u64 {
        return false;
    }
    // a core vertex v has in-neighbourhood core \ {v}
    (1..=n).any(|v| {
        let core = d.in_mask(v) | 1 << (v - 1);
        core.count_ones() == k + 1
            && (1..=n).all(|x| {
                let inn = d.in_mask(x);
                if core >> (x - 1) & 1 == 1 {
                    inn == core & !(1 << (x - 1))
                } else {
                    inn & !core == 0 && inn.count_ones() == k
                }
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_a, build_g, em_graph, CoveringStrategy};

    #[test]
    fn family_g_round_trip() {
        let b = SearchBudget::default();
        let h = build_g(9, 4, 3, &CoveringStrategy::Exact).unwrap();
        assert_eq!(h.len(), 56);
        assert!(is_member_g(&h, 4, None, &b).unwrap());
        assert!(is_member_g(&h, 4, Some(7), &b).unwrap());
        assert!(!is_member_g(&h, 4, Some(8), &b).unwrap());
        assert!(is_member_g(&em_graph(6, 3).unwrap(), 3, None, &b).unwrap());
    }

    #[test]
    fn greedy_inner_covering() {
        let b = SearchBudget::default();
        let h = build_g(9, 4, 3, &CoveringStrategy::Greedy).unwrap();
        let greedy_hits_optimum = h.len() == 56;
        assert_eq!(
            is_member_g(&h, 4, Some(7), &b).unwrap(),
            greedy_hits_optimum
        );
        let h = build_g(8, 3, 2, &CoveringStrategy::Modular(None)).unwrap();
        let minimal = h.len() as u128 == crate::bounds::erdos_moser_f(8, 3).unwrap();
        assert_eq!(is_member_g(&h, 3, Some(3), &b).unwrap(), minimal);
    }

    #[test]
    fn family_a() {
        assert!(is_member_a(&build_a(5, 2, None).unwrap(), 2));
        assert!(!is_member_a(&Digraph::complete(4).unwrap(), 2));
        let d = build_a(4, 2, None).unwrap();
        let extra = crate::setsys::make_digraph(4, d.arcs().chain([(4, 1)]), false).unwrap();
        assert!(!is_member_a(&extra, 2));
        assert!(is_member_a(&build_a(6, 1, None).unwrap(), 1));
    }
}

//! Closed-form values and inequalities for covering hypergraphs.
//!
//! Counting formulas are exact (`u128`, overflow is an error); only the
//! fractional binomial and its inverse use floating point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsys::binomial;

fn choose(n: u32, k: u32) -> Result<u128> {
    binomial(n as u64, k as u64).ok_or(Error::Overflow("binomial coefficient"))
}

fn require_n_above_k(n: u32, k: u32, r: u32) -> Result<()> {
    if n <= k || k + 1 < r || r < 2 {
        return Err(Error::invalid(format!(
            "need n > k >= r-1 and r >= 2, got n={n}, k={k}, r={r}"
        )));
    }
    Ok(())
}

/// Minimum edge count of a graph on `n` vertices in which every `k`-set is
/// covered: `(k-1)(n-1) - C(k-1,2) + ceil((n-k+1)/2)`.
pub fn erdos_moser_f(n: u32, k: u32) -> Result<u128> {
    if k < 2 || n <= k {
        return Err(Error::invalid(format!("need n > k >= 2, got n={n}, k={k}")));
    }
    let km1 = (k - 1) as u128;
    Ok(km1 * (n as u128 - 1) - choose(k - 1, 2)? + (n - k + 1).div_ceil(2) as u128)
}

/// Size of the inner vertex set `n - k + r - 1` of the extremal construction.
pub fn inner_size(n: u32, k: u32, r: u32) -> u32 {
    n - k + r - 1
}

/// `ceil(C(n, r-1) / r)`: no `r`-uniform system with fewer edges has a
/// complete `(r-1)`-shadow on `n` vertices.
pub fn covering_lb(n: u32, r: u32) -> Result<u128> {
    if r < 2 || n < r {
        return Err(Error::invalid(format!(
            "need n >= r >= 2, got n={n}, r={r}"
        )));
    }
    Ok(choose(n, r - 1)?.div_ceil(r as u128))
}

/// Edge count of the extremal construction given the inner covering number:
/// all `r`-sets meeting the `k-r+1` hub vertices, plus `d_inner` edges covering
/// the `(r-1)`-sets of the remaining `n-k+r-1` vertices.
pub fn g_value(n: u32, k: u32, r: u32, d_inner: u128) -> Result<u128> {
    require_n_above_k(n, k, r)?;
    let m = inner_size(n, k, r);
    let bound = covering_lb(m, r)?;
    if d_inner < bound {
        return Err(Error::BelowCoveringBound {
            given: d_inner,
            bound,
        });
    }
    (choose(n, r)? - choose(m, r)?)
        .checked_add(d_inner)
        .ok_or(Error::Overflow("construction size"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "value")]
pub enum SteinerValue {
    /// The construction size if a perfect covering of the inner vertex set
    /// exists. Divisibility alone does not guarantee that it does.
    Candidate(u128),
    /// `C(n-k+r-1, r-1)` is not divisible by `r`, so no perfect covering exists.
    NotIntegral,
}

/// Construction size assuming the inner covering is perfect (every
/// `(r-1)`-set in exactly one edge).
pub fn g_steiner(n: u32, k: u32, r: u32) -> Result<SteinerValue> {
    require_n_above_k(n, k, r)?;
    let m = inner_size(n, k, r);
    let pairs = choose(m, r - 1)?;
    if pairs % r as u128 != 0 {
        return Ok(SteinerValue::NotIntegral);
    }
    Ok(SteinerValue::Candidate(
        choose(n, r)? - choose(m, r)? + pairs / r as u128,
    ))
}

/// `x (x-1) ... (x-r+1) / r!` for real `x >= r - 1`.
pub fn fractional_binomial(x: f64, r: u32) -> Result<f64> {
    if x.is_nan() || x < r as f64 - 1.0 {
        return Err(Error::BelowRegime {
            x,
            min: r.saturating_sub(1),
        });
    }
    Ok(falling(x, r))
}

fn falling(x: f64, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (x - i as f64) / (i as f64 + 1.0))
}

/// A real `x` with `C(x, r)` equal to a given count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalDegree {
    pub x: f64,
    pub r: u32,
}

const BISECTION_REL_TOL: f64 = 1e-9;
const BISECTION_MAX_ITERS: usize = 200;

/// Inverts the fractional binomial: the `x >= r` with `C(x, r) = m`.
pub fn lovasz_x(m: u64, r: u32) -> Result<FractionalDegree> {
    if m == 0 || r == 0 {
        return Err(Error::invalid("lovasz_x needs m >= 1 and r >= 1"));
    }
    let target = m as f64;
    let tol = BISECTION_REL_TOL * target.max(1.0);
    let (mut lo, mut hi) = (r as f64, r as f64 + target);
    let mut x = lo;
    for _ in 0..BISECTION_MAX_ITERS {
        x = 0.5 * (lo + hi);
        if falling(x, r) < target {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    // prefer an exact endpoint when one is within tolerance (integral cases)
    for cand in [x.round(), x, lo, hi] {
        if cand >= r as f64 && (falling(cand, r) - target).abs() <= tol {
            return Ok(FractionalDegree { x: cand, r });
        }
    }
    Ok(FractionalDegree { x, r })
}

/// Shadow lower bound: an `r`-uniform system with `m = C(x, r)` edges has at
/// least `C(x, r-1)` sets in its shadow.
pub fn kk_shadow_lb(m: u64, r: u32) -> Result<f64> {
    if r < 2 {
        return Err(Error::invalid("kk_shadow_lb needs r >= 2"));
    }
    let x = lovasz_x(m, r)?.x;
    Ok(falling(x, r - 1))
}

/// Both sides of the projection inequality `prod_i |P_i| >= |S|^(d-1)`, where
/// `P_i` drops coordinate `i` from every `d`-tuple of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoomisWhitney {
    pub holds: bool,
    pub projection_sizes: Vec<u64>,
    pub product: u128,
    pub power: u128,
}

pub fn loomis_whitney_check(tuples: &[Vec<u32>]) -> Result<LoomisWhitney> {
    let set: std::collections::BTreeSet<&Vec<u32>> = tuples.iter().collect();
    let arity = match set.iter().next() {
        Some(t) => t.len(),
        None => {
            return Ok(LoomisWhitney {
                holds: true,
                projection_sizes: Vec::new(),
                product: 0,
                power: 0,
            })
        }
    };
    if let Some(bad) = set.iter().find(|t| t.len() != arity) {
        return Err(Error::RaggedTuples(arity, bad.len()));
    }
    if arity < 2 {
        return Err(Error::invalid(
            "projection inequality needs tuples of arity >= 2",
        ));
    }
    let projection_sizes: Vec<u64> = (0..arity)
        .map(|i| {
            set.iter()
                .map(|t| {
                    let mut p = (*t).clone();
                    p.remove(i);
                    p
                })
                .collect::<std::collections::BTreeSet<_>>()
                .len() as u64
        })
        .collect();
    let product = projection_sizes
        .iter()
        .try_fold(1u128, |acc, &p| acc.checked_mul(p as u128))
        .ok_or(Error::Overflow("projection product"))?;
    let power = (set.len() as u128)
        .checked_pow(arity as u32 - 1)
        .ok_or(Error::Overflow("projection power"))?;
    Ok(LoomisWhitney {
        holds: product >= power,
        projection_sizes,
        product,
        power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_moser_values() {
        assert_eq!(erdos_moser_f(5, 2).unwrap(), 6);
        assert_eq!(erdos_moser_f(6, 3).unwrap(), 11);
        assert_eq!(erdos_moser_f(4, 3).unwrap(), 6);
        assert!(erdos_moser_f(3, 3).is_err());
    }

    #[test]
    fn g_values() {
        assert_eq!(g_value(9, 4, 3, 7).unwrap(), 56);
        assert_eq!(g_value(6, 4, 3, 3).unwrap(), 19);
        assert_eq!(g_value(6, 3, 3, 4).unwrap(), 14);
        assert!(matches!(
            g_value(6, 3, 3, 3),
            Err(Error::BelowCoveringBound { given: 3, bound: 4 })
        ));
        assert!(matches!(
            g_value(9, 4, 3, 6),
            Err(Error::BelowCoveringBound { given: 6, bound: 7 })
        ));
    }

    #[test]
    fn g_matches_erdos_moser_for_graphs() {
        for n in 3u32..=30 {
            for k in 2..n {
                let d = (n - k + 1).div_ceil(2) as u128;
                assert_eq!(g_value(n, k, 2, d).unwrap(), erdos_moser_f(n, k).unwrap());
                if (n - k + 1) % 2 == 0 {
                    assert_eq!(
                        g_steiner(n, k, 2).unwrap(),
                        SteinerValue::Candidate(erdos_moser_f(n, k).unwrap())
                    );
                } else {
                    assert_eq!(g_steiner(n, k, 2).unwrap(), SteinerValue::NotIntegral);
                }
            }
        }
    }

    #[test]
    fn steiner_values() {
        assert_eq!(g_steiner(9, 4, 3).unwrap(), SteinerValue::Candidate(56));
        assert_eq!(g_steiner(8, 4, 3).unwrap(), SteinerValue::Candidate(41));
        // C(5,2) = 10 is not divisible by 3
        assert_eq!(g_steiner(7, 4, 3).unwrap(), SteinerValue::NotIntegral);
    }

    #[test]
    fn covering_lower_bounds() {
        assert_eq!(covering_lb(7, 3).unwrap(), 7);
        assert_eq!(covering_lb(4, 3).unwrap(), 2);
        for r in 2..8 {
            assert_eq!(covering_lb(r, r).unwrap(), 1);
        }
    }

    #[test]
    fn fractional_binomials() {
        assert_eq!(fractional_binomial(5.0, 3).unwrap(), 10.0);
        assert_eq!(fractional_binomial(3.0, 3).unwrap(), 1.0);
        assert!((fractional_binomial(3.5, 2).unwrap() - 4.375).abs() < 1e-12);
        assert!(fractional_binomial(1.5, 3).is_err());
    }

    #[test]
    fn lovasz_inverse() {
        assert_eq!(lovasz_x(10, 3).unwrap().x, 5.0);
        assert_eq!(lovasz_x(1, 4).unwrap().x, 4.0);
        let root = (1.0 + 33f64.sqrt()) / 2.0;
        assert!((lovasz_x(4, 2).unwrap().x - root).abs() < 1e-8);
        assert!((lovasz_x(4, 2).unwrap().x - 3.3722813).abs() < 1e-7);
    }

    #[test]
    fn shadow_bounds() {
        assert!((kk_shadow_lb(10, 3).unwrap() - 10.0).abs() < 1e-9);
        assert!((kk_shadow_lb(1, 3).unwrap() - 3.0).abs() < 1e-9);
        assert!((kk_shadow_lb(4, 2).unwrap() - 3.3722813).abs() < 1e-7);
    }

    #[test]
    fn loomis_whitney_examples() {
        let single = loomis_whitney_check(&[vec![1, 1]]).unwrap();
        assert!(single.holds);
        assert_eq!((single.product, single.power), (1, 1));

        let mut grid = Vec::new();
        for a in 0..3 {
            for b in 0..4 {
                for c in 0..2 {
                    grid.push(vec![a, b, c]);
                }
            }
        }
        let lw = loomis_whitney_check(&grid).unwrap();
        assert_eq!(lw.projection_sizes, vec![8, 6, 12]);
        assert_eq!(lw.product, lw.power);

        assert!(matches!(
            loomis_whitney_check(&[vec![1, 2], vec![1, 2, 3]]),
            Err(Error::RaggedTuples(..))
        ));
    }

    proptest::proptest! {
        #[test]
        fn fractional_binomial_monotone(x in 2.0f64..40.0, dx in 1e-3f64..5.0, r in 1u32..6) {
            let x = x.max(r as f64 - 1.0);
            proptest::prop_assert!(fractional_binomial(x + dx, r).unwrap() > fractional_binomial(x, r).unwrap());
        }

        #[test]
        fn lovasz_inverts(m in 1u64..100_000, r in 1u32..6) {
            let x = lovasz_x(m, r).unwrap().x;
            let back = fractional_binomial(x, r).unwrap();
            proptest::prop_assert!((back - m as f64).abs() <= 1e-9 * (m as f64).max(1.0));
        }

        #[test]
        fn loomis_whitney_random(cells in proptest::collection::btree_set((0u32..5, 0u32..5, 0u32..5), 1..60)) {
            let tuples: Vec<Vec<u32>> = cells.into_iter().map(|(a, b, c)| vec![a, b, c]).collect();
            proptest::prop_assert!(loomis_whitney_check(&tuples).unwrap().holds);
        }
    }
}

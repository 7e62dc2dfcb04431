//! Subset enumeration and the bitmask conventions shared by the rest of the crate.
//!
//! Vertex `v` (1-based) lives at bit `v - 1` of a `u64` mask.

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[inline]
pub fn bit(v: u32) -> u64 {
    1u64 << (v - 1)
}

pub fn mask_of(vertices: &[u32]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | bit(v))
}

pub fn vertices_of(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// Mask of `{1, ..., n}`.
#[inline]
pub fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Lexicographic stream of the `k`-subsets of `{1, ..., n}`.
#[derive(Clone, Debug)]
pub struct KSubsets {
    n: u32,
    current: Option<Vec<u32>>,
    remaining: u128,
}

pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    let current = (k <= n).then(|| (1..=k).collect());
    KSubsets {
        n,
        current,
        remaining: binomial(n as u64, k as u64).unwrap_or(u128::MAX),
    }
}

impl Iterator for KSubsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        // rightmost position that can still move up
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (k - 1 - i) as u32 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        self.remaining = self.remaining.saturating_sub(1);
        Some(cur)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

impl ExactSizeIterator for KSubsets {}

/// All `k`-subsets of the vertices in `mask`, as masks, in lexicographic order of
/// their sorted vertex lists.
pub fn mask_subsets(mask: u64, k: u32) -> Vec<u64> {
    let verts = vertices_of(mask);
    if k as usize > verts.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for idx in k_subsets(verts.len() as u32, k) {
        out.push(
            idx.iter()
                .fold(0u64, |m, &i| m | bit(verts[i as usize - 1])),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_choose_two() {
        let all: Vec<_> = k_subsets(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.first().unwrap(), &vec![1, 2]);
        assert_eq!(all.last().unwrap(), &vec![3, 4]);
        assert_eq!(k_subsets(4, 2).len(), 6);
    }

    #[test]
    fn empty_and_full_sets() {
        let zero: Vec<_> = k_subsets(7, 0).collect();
        assert_eq!(zero, vec![Vec::<u32>::new()]);
        let full: Vec<_> = k_subsets(5, 5).collect();
        assert_eq!(full, vec![vec![1, 2, 3, 4, 5]]);
        assert_eq!(k_subsets(3, 4).count(), 0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 3), Some(84));
        assert_eq!(binomial(7, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(64, 32), Some(1832624140942590534));
    }

    #[test]
    fn mask_round_trip() {
        assert_eq!(vertices_of(mask_of(&[1, 3, 64])), vec![1, 3, 64]);
        assert_eq!(mask_subsets(mask_of(&[2, 5, 7]), 2).len(), 3);
        assert_eq!(mask_subsets(mask_of(&[2, 5, 7]), 2)[0], mask_of(&[2, 5]));
    }

    proptest::proptest! {
        #[test]
        fn counts_match_binomial(n in 0u32..12, k in 0u32..12) {
            let sets: Vec<_> = k_subsets(n, k).collect();
            proptest::prop_assert_eq!(sets.len() as u128, binomial(n as u64, k as u64).unwrap());
            let mut sorted = sets.clone();
            sorted.sort();
            sorted.dedup();
            proptest::prop_assert_eq!(sorted, sets);
        }
    }
}

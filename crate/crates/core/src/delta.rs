//! Δ-sets: ordered lists of nonzero plane vectors summing to zero.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::vec2::{self, Vec2};

#[derive(Clone)]
pub struct DeltaSet<S> {
    vectors: Vec<Vec2<S>>,
    sums: OnceLock<Vec<Vec2<S>>>,
}

impl<S: PartialEq> PartialEq for DeltaSet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.vectors == other.vectors
    }
}

impl<S: fmt::Debug> fmt::Debug for DeltaSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeltaSet").field("vectors", &self.vectors).finish()
    }
}

const CACHED_LEGS: usize = 16;

/// Facts reported alongside a validated Δ-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaInfo {
    /// Number of permutations of the legs that preserve the ordered list.
    pub aut_size: u64,
    pub three_independent: bool,
}

pub fn validate_delta<S: Scalar>(vectors: Vec<Vec2<S>>) -> Result<(DeltaSet<S>, DeltaInfo)> {
    let delta = DeltaSet::new(vectors)?;
    let info = DeltaInfo { aut_size: delta.aut_size(), three_independent: delta.is_three_independent() };
    Ok((delta, info))
}

impl<S: Scalar> DeltaSet<S> {
    pub fn new(vectors: Vec<Vec2<S>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Parse("empty delta set".into()));
        }
        if let Some(index) = vectors.iter().position(|v| v.is_zero()) {
            return Err(Error::ZeroVector { index });
        }
        let total = vec2::sum(&vectors);
        if !total.is_zero() {
            return Err(Error::Unbalanced { sum: total.to_string() });
        }
        Ok(DeltaSet { vectors, sums: OnceLock::new() })
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, y)| Vec2::from_ints(x, y)).collect())
    }

    /// Degree-`d` projective Δ-set: `d` copies each of (−1,0), (0,−1), (1,1).
    pub fn tropical_projective(d: usize) -> Self {
        let mut v = Vec::with_capacity(3 * d);
        for &(x, y) in &[(-1, 0), (0, -1), (1, 1)] {
            for _ in 0..d {
                v.push(Vec2::from_ints(x, y));
            }
        }
        DeltaSet { vectors: v, sums: OnceLock::new() }
    }

    pub fn vectors(&self) -> &[Vec2<S>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, i: usize) -> &Vec2<S> {
        &self.vectors[i]
    }

    /// `Σ_{i ∈ mask} ξ_i` over the bits of `mask`.
    pub fn mask_sum(&self, mask: u32) -> Vec2<S> {
        let n = self.vectors.len();
        if n <= CACHED_LEGS {
            return self.sums.get_or_init(|| self.subset_sums())[(mask & ((1 << n) - 1)) as usize].clone();
        }
        let mut acc = Vec2::zero();
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            if i < self.vectors.len() {
                acc = acc + self.vectors[i].clone();
            }
        }
        acc
    }

    /// Table of `Σ_{i ∈ mask} ξ_i` for every subset mask.
    pub fn subset_sums(&self) -> Vec<Vec2<S>> {
        let n = self.vectors.len();
        assert!(n <= 20, "subset table too large");
        let mut table = vec![Vec2::zero(); 1 << n];
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            table[mask] = table[mask & (mask - 1)].clone() + self.vectors[low].clone();
        }
        table
    }

    pub fn aut_size(&self) -> u64 {
        let mut seen: Vec<(usize, u64)> = Vec::new();
        for (i, v) in self.vectors.iter().enumerate() {
            match seen.iter_mut().find(|(j, _)| self.vectors[*j].approx_eq(v)) {
                Some(entry) => entry.1 += 1,
                None => seen.push((i, 1)),
            }
        }
        seen.iter().map(|&(_, k)| (1..=k).product::<u64>()).product()
    }

    /// No partition of the indices into three nonempty blocks has all three
    /// block sums parallel.
    pub fn is_three_independent(&self) -> bool {
        self.find_parallel_partition(|_| true).is_none()
    }

    /// For the partitions accepted by `filter` (given as a block label per
    /// index), returns one whose block sums are all parallel.
    pub fn find_parallel_partition(&self, filter: impl Fn(&[u8]) -> bool) -> Option<Vec<u8>> {
        let n = self.vectors.len();
        if n < 3 {
            return None;
        }
        let sums = self.subset_sums();
        let mut labels = vec![0u8; n];
        // Restricted growth strings with exactly three blocks.
        fn rec<S: Scalar>(
            i: usize,
            used: u8,
            labels: &mut Vec<u8>,
            sums: &[Vec2<S>],
            filter: &dyn Fn(&[u8]) -> bool,
        ) -> Option<Vec<u8>> {
            let n = labels.len();
            if n - i < (3 - used) as usize {
                return None;
            }
            if i == n {
                if used != 3 || !filter(labels) {
                    return None;
                }
                let block = |want: u8| {
                    labels.iter().enumerate().filter(|(_, &l)| l == want).fold(0u32, |m, (k, _)| m | 1 << k)
                };
                let (a, b) = (block(0), block(1));
                let (ea, eb) = (&sums[a as usize], &sums[b as usize]);
                return if ea.orientation(eb) == 0 { Some(labels.clone()) } else { None };
            }
            for l in 0..=used.min(2) {
                labels[i] = l;
                let next = if l == used { used + 1 } else { used };
                if let Some(found) = rec(i + 1, next, labels, sums, filter) {
                    return Some(found);
                }
            }
            None
        }
        rec(0, 0, &mut labels, &sums, &filter)
    }

    /// Partitions `I₁ ∋ s`, `I₂ ∋ t`, `|I₃| = 1` never have all block sums parallel.
    pub fn is_st_independent(&self, s: usize, t: usize) -> bool {
        self.find_parallel_partition(|labels| {
            let ls = labels[s];
            let lt = labels[t];
            if ls == lt {
                return false;
            }
            let third = 3 - ls - lt;
            labels.iter().filter(|&&l| l == third).count() == 1
        })
        .is_none()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DeltaSet<T> {
        DeltaSet { vectors: self.vectors.iter().map(|v| Vec2::new(f(&v.x), f(&v.y))).collect(), sums: OnceLock::new() }
    }

    pub fn to_f64(&self) -> DeltaSet<f64> {
        self.map(|s| s.to_f64())
    }

    /// Largest absolute coordinate, used to scale random point boxes.
    pub fn magnitude(&self) -> f64 {
        self.vectors.iter().map(|v| v.x.to_f64().abs().max(v.y.to_f64().abs())).fold(0.0, f64::max)
    }

    /// Returns the set with every coordinate an integer, if it is one.
    pub fn as_integers(&self) -> Option<Vec<(i64, i64)>> {
        self.vectors.iter().map(|v| Some((v.x.to_integer()?, v.y.to_integer()?))).collect()
    }
}

impl DeltaSet<Rational> {
    pub fn from_rationals(pairs: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(x, y)| Vec2::new(x.clone(), y.clone())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(pairs: &[(i64, i64)]) -> Result<DeltaSet<Rational>> {
        DeltaSet::from_ints(pairs)
    }

    #[test]
    fn validation() {
        let (line, info) = validate_delta(d(&[(1, 0), (-1, 0)]).unwrap().vectors).unwrap();
        assert_eq!(line.len(), 2);
        assert_eq!(info, DeltaInfo { aut_size: 1, three_independent: true });
        assert!(matches!(d(&[(1, 0), (0, 1)]), Err(Error::Unbalanced { .. })));
        assert!(matches!(d(&[(0, 0), (0, 0)]), Err(Error::ZeroVector { index: 0 })));
        let (_, info) = validate_delta(d(&[(-1, 0), (-1, 0), (2, 0)]).unwrap().vectors).unwrap();
        assert_eq!(info, DeltaInfo { aut_size: 2, three_independent: false });
    }

    #[test]
    fn three_independence_matches_exhaustive_labelings() {
        // Oracle: every map of indices to three labels with all labels used.
        fn oracle(delta: &DeltaSet<Rational>) -> bool {
            let n = delta.len();
            let mut total = 1;
            for _ in 0..n {
                total *= 3;
            }
            for code in 0..total {
                let mut c = code;
                let mut masks = [0u32; 3];
                for i in 0..n {
                    masks[c % 3] |= 1 << i;
                    c /= 3;
                }
                if masks.iter().any(|&m| m == 0) {
                    continue;
                }
                let a = delta.mask_sum(masks[0]);
                let b = delta.mask_sum(masks[1]);
                if a.cross(&b).is_zero() {
                    return false;
                }
            }
            true
        }
        let cases = [
            vec![(-1, 0), (0, -1), (1, 1)],
            vec![(-1, 0), (-1, 0), (0, -1), (0, -1), (1, 1), (1, 1)],
            vec![(1, 0), (0, 1), (-1, 0), (0, -1)],
            vec![(2, 1), (-1, 3), (-4, -1), (3, -3)],
            vec![(1, 2), (3, -1), (-2, 5), (-2, -6)],
        ];
        for c in cases {
            let delta = d(&c).unwrap();
            assert_eq!(delta.is_three_independent(), oracle(&delta), "{c:?}");
        }
    }

    #[test]
    fn automorphisms_of_tropical_sets() {
        assert_eq!(DeltaSet::<Rational>::tropical_projective(3).aut_size(), 216);
        assert_eq!(DeltaSet::<Rational>::tropical_projective(1).aut_size(), 1);
    }

    #[test]
    fn subset_sums_table() {
        let delta = d(&[(2, 1), (-1, 3), (-4, -1), (3, -3)]).unwrap();
        let t = delta.subset_sums();
        for mask in 0..16u32 {
            assert_eq!(t[mask as usize], delta.mask_sum(mask));
        }
        assert!(t[15].is_zero());
    }
}

//! Label sets stored as sorted, disjoint, non-adjacent closed intervals.
//!
//! Hypothesis outputs in the bundled worlds are frequently of the form
//! "an entire block of a million ids except one", so sets are kept as runs
//! and every operation walks runs instead of elements. Lengths are exact
//! `u128` counts: a single run may span nearly the whole `u64` id space.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A closed interval of label ids, `lo..=hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    pub fn len(&self) -> u128 {
        (self.hi - self.lo) as u128 + 1
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}-{}", self.lo, self.hi)
        }
    }
}

/// A set of `u64` label ids.
///
/// Canonical form: runs sorted by `lo`, pairwise disjoint, and separated by
/// at least one missing id (adjacent runs are merged). Two `LabelSet`s are
/// equal iff they contain the same ids, so derived `Eq`/`Hash` are sound.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LabelSet {
    runs: Vec<Interval>,
}

impl LabelSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(label: u64) -> Self {
        Self {
            runs: vec![Interval { lo: label, hi: label }],
        }
    }

    /// The contiguous set `lo..=hi`. Panics if `lo > hi`.
    pub fn range(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi, "invalid interval {lo}..={hi}");
        Self {
            runs: vec![Interval { lo, hi }],
        }
    }

    /// Builds a set from arbitrary (possibly overlapping, unsorted)
    /// intervals. Panics on an interval with `lo > hi`.
    pub fn from_intervals<I: IntoIterator<Item = (u64, u64)>>(intervals: I) -> Self {
        let mut runs: Vec<Interval> = intervals
            .into_iter()
            .map(|(lo, hi)| {
                assert!(lo <= hi, "invalid interval {lo}..={hi}");
                Interval { lo, hi }
            })
            .collect();
        runs.sort_by_key(|r| r.lo);
        let mut canon: Vec<Interval> = Vec::with_capacity(runs.len());
        for r in runs {
            match canon.last_mut() {
                Some(last) if r.lo <= last.hi.saturating_add(1) => {
                    last.hi = last.hi.max(r.hi);
                }
                _ => canon.push(r),
            }
        }
        Self { runs: canon }
    }

    pub fn from_labels<I: IntoIterator<Item = u64>>(labels: I) -> Self {
        Self::from_intervals(labels.into_iter().map(|l| (l, l)))
    }

    pub fn runs(&self) -> &[Interval] {
        &self.runs
    }

    pub fn len(&self) -> u128 {
        self.runs.iter().map(Interval::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, label: u64) -> bool {
        self.runs
            .binary_search_by(|r| {
                if label < r.lo {
                    std::cmp::Ordering::Greater
                } else if label > r.hi {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let a = self.runs[i];
            let b = other.runs[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if lo <= hi {
                out.push(Interval { lo, hi });
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of an intersection are already sorted, disjoint, and
        // non-adjacent (the originals were separated by gaps).
        LabelSet { runs: out }
    }

    /// |self ∩ other| without materializing the intersection.
    pub fn intersection_len(&self, other: &LabelSet) -> u128 {
        let mut total: u128 = 0;
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let a = self.runs[i];
            let b = other.runs[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if lo <= hi {
                total += (hi - lo) as u128 + 1;
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet::from_intervals(
            self.runs
                .iter()
                .chain(other.runs.iter())
                .map(|r| (r.lo, r.hi)),
        )
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        let mut out: Vec<Interval> = Vec::new();
        let mut j = 0;
        for &a in &self.runs {
            let mut lo = a.lo;
            let mut alive = true;
            // Skip other-runs entirely below the current run.
            while j < other.runs.len() && other.runs[j].hi < a.lo {
                j += 1;
            }
            let mut k = j;
            while alive && k < other.runs.len() && other.runs[k].lo <= a.hi {
                let b = other.runs[k];
                if b.lo > lo {
                    out.push(Interval { lo, hi: b.lo - 1 });
                }
                if b.hi >= a.hi {
                    alive = false; // rest of `a` is covered
                } else {
                    lo = lo.max(b.hi + 1);
                    k += 1;
                }
            }
            if alive && lo <= a.hi {
                out.push(Interval { lo, hi: a.hi });
            }
        }
        LabelSet { runs: out }
    }

    /// |self \ other|.
    pub fn difference_len(&self, other: &LabelSet) -> u128 {
        self.len() - self.intersection_len(other)
    }

    /// The k-th smallest label (0-based), if `k < len`.
    pub fn nth(&self, mut k: u128) -> Option<u64> {
        for r in &self.runs {
            let n = r.len();
            if k < n {
                return Some(r.lo + k as u64);
            }
            k -= n;
        }
        None
    }

    /// A uniformly random element, or `None` for the empty set.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<u64> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        let k = rng.random_range(0..n);
        self.nth(k)
    }

    /// Iterates over all labels in ascending order. Intended for small sets
    /// (tests, oracles); a set spanning a huge range will iterate forever.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|r| r.lo..=r.hi)
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<u64> for LabelSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self::from_labels(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn canonicalization_merges_overlaps_and_adjacency() {
        let s = LabelSet::from_intervals([(4, 5), (1, 3), (9, 9), (6, 6)]);
        assert_eq!(s.runs(), &[Interval { lo: 1, hi: 6 }, Interval { lo: 9, hi: 9 }]);
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn basic_arithmetic() {
        let a = LabelSet::range(1, 3);
        let b = LabelSet::range(2, 5);
        assert_eq!(a.intersection(&b), LabelSet::range(2, 3));
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.union(&b), LabelSet::range(1, 5));
        assert_eq!(a.difference(&b), LabelSet::singleton(1));
        assert_eq!(a.difference_len(&b), 1);
        assert_eq!(b.difference(&a), LabelSet::range(4, 5));
    }

    #[test]
    fn difference_punches_holes() {
        let a = LabelSet::range(0, 99);
        let b = LabelSet::from_labels([10, 50, 51, 52]);
        let d = a.difference(&b);
        assert_eq!(d.len(), 96);
        assert!(!d.contains(10) && !d.contains(51));
        assert!(d.contains(9) && d.contains(11) && d.contains(53));
    }

    #[test]
    fn huge_ranges_have_exact_lengths() {
        let all = LabelSet::range(0, u64::MAX);
        assert_eq!(all.len(), 1u128 << 64);
        let hole = all.difference(&LabelSet::singleton(12345));
        assert_eq!(hole.len(), (1u128 << 64) - 1);
        assert!(!hole.contains(12345));
        assert_eq!(hole.nth(12345), Some(12346));
        let tail = LabelSet::range(u64::MAX - 1, u64::MAX);
        assert_eq!(all.difference(&tail).len(), (1u128 << 64) - 2);
        assert!(all.difference(&all).is_empty());
    }

    #[test]
    fn nth_walks_runs() {
        let s = LabelSet::from_intervals([(0, 2), (10, 11)]);
        let got: Vec<_> = (0..5).map(|k| s.nth(k).unwrap()).collect();
        assert_eq!(got, vec![0, 1, 2, 10, 11]);
        assert_eq!(s.nth(5), None);
    }

    #[test]
    fn uniform_sampling_covers_the_set() {
        let s = LabelSet::from_intervals([(0, 3), (100, 103)]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = std::collections::HashMap::new();
        let draws = 16_000;
        for _ in 0..draws {
            *counts.entry(s.sample_uniform(&mut rng).unwrap()).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 8);
        // 3 sigma around 1/8 of 16k draws.
        let sigma = (draws as f64 * 0.125 * 0.875).sqrt();
        for (_, c) in counts {
            assert!((c as f64 - draws as f64 / 8.0).abs() < 3.5 * sigma);
        }
        assert_eq!(LabelSet::empty().sample_uniform(&mut rng), None);
    }

    // Reference implementation: plain element sets on a small universe.
    fn bitset(s: &LabelSet) -> BTreeSet<u64> {
        s.iter().collect()
    }

    fn arb_set() -> impl Strategy<Value = LabelSet> {
        proptest::collection::vec((0u64..10_000, 0u64..64), 0..12).prop_map(|pairs| {
            LabelSet::from_intervals(pairs.into_iter().map(|(lo, w)| (lo, lo + w)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn interval_arithmetic_matches_bitset_reference(a in arb_set(), b in arb_set(), probe in 0u64..10_100) {
            let (ba, bb) = (bitset(&a), bitset(&b));
            prop_assert_eq!(a.len(), ba.len() as u128);
            prop_assert_eq!(a.contains(probe), ba.contains(&probe));
            prop_assert_eq!(bitset(&a.intersection(&b)), ba.intersection(&bb).copied().collect::<BTreeSet<_>>());
            prop_assert_eq!(bitset(&a.union(&b)), ba.union(&bb).copied().collect::<BTreeSet<_>>());
            prop_assert_eq!(bitset(&a.difference(&b)), ba.difference(&bb).copied().collect::<BTreeSet<_>>());
            prop_assert_eq!(a.intersection_len(&b), ba.intersection(&bb).count() as u128);
            prop_assert_eq!(a.difference_len(&b), ba.difference(&bb).count() as u128);
        }

        #[test]
        fn canonical_form_invariants(a in arb_set(), b in arb_set()) {
            for s in [&a, &b, &a.intersection(&b), &a.union(&b), &a.difference(&b)] {
                for w in s.runs().windows(2) {
                    prop_assert!(w[0].hi < w[1].lo, "runs out of order");
                    prop_assert!(w[1].lo - w[0].hi >= 2, "adjacent runs not merged");
                }
                for r in s.runs() {
                    prop_assert!(r.lo <= r.hi);
                }
            }
        }

        #[test]
        fn nth_matches_sorted_elements(a in arb_set()) {
            let elems: Vec<u64> = a.iter().collect();
            for (k, &e) in elems.iter().enumerate() {
                prop_assert_eq!(a.nth(k as u128), Some(e));
            }
            prop_assert_eq!(a.nth(elems.len() as u128), None);
        }
    }
}

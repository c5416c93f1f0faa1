use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

/// Largest ground set supported by the bitmask representation.
pub const MAX_PROCESSES: usize = 32;

/// A subset of the process indices `{0, .., n-1}` stored as a bitmask.
///
/// The ordering is the canonical one used for every enumeration and memo
/// key: by cardinality first, then lexicographically on the sorted
/// elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ProcessSet(u32);

impl ProcessSet {
    pub const EMPTY: ProcessSet = ProcessSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ProcessSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Builds a set from 0-based indices. Fails on an index `>= MAX_PROCESSES`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut bits = 0u32;
        for i in indices {
            if i >= MAX_PROCESSES {
                return Err(invalid(format!(
                    "process index {i} exceeds the supported maximum {}",
                    MAX_PROCESSES - 1
                )));
            }
            bits |= 1 << i;
        }
        Ok(ProcessSet(bits))
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PROCESSES);
        if n == MAX_PROCESSES {
            ProcessSet(u32::MAX)
        } else {
            ProcessSet((1u32 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_PROCESSES && self.0 & (1 << i) != 0
    }

    pub fn is_subset(self, other: ProcessSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ProcessSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersects(self, other: ProcessSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union(self, other: ProcessSet) -> ProcessSet {
        ProcessSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ProcessSet) -> ProcessSet {
        ProcessSet(self.0 & other.0)
    }

    /// Largest element plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        (u32::BITS - self.0.leading_zeros()) as usize
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = ProcessSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ProcessSet(cur))
        })
    }
}

impl Ord for ProcessSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ProcessSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Printed 1-based, e.g. `{1,2,3}`.
impl fmt::Display for ProcessSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ProcessSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ProcessSet {
        ProcessSet::from_indices(xs.iter().copied()).unwrap()
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![set(&[1, 2]), set(&[0, 1, 2]), set(&[0, 2]), set(&[0, 1])];
        v.sort();
        assert_eq!(v, vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2]), set(&[0, 1, 2])]);
        // lexicographic on sorted elements, not on the bitmask value
        assert!(set(&[0, 3]) < set(&[1, 2]));
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = set(&[0, 2, 5]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(ProcessSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(set(&[0, 2]).to_string(), "{1,3}");
    }

    #[test]
    fn rejects_large_index() {
        assert!(ProcessSet::from_indices([32]).is_err());
    }
}

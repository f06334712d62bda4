//! Multisets on the ground set `{1, ..., N}`, stored as count vectors.
//!
//! The partial order is componentwise. `PartialOrd` implements exactly that
//! order, so `a <= b` means `a_i <= b_i` for every `i`; incomparable
//! multisets compare as `None`. Sorting uses [`Multiset::lex_cmp`].

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multiset(Vec<u32>);

impl Multiset {
    pub fn new(entries: Vec<u32>) -> Self {
        Multiset(entries)
    }

    pub fn zero(len: usize) -> Self {
        Multiset(vec![0; len])
    }

    /// The unit multiset `e_i` (0-based `i`).
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        Multiset(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: u32) {
        self.0[i] = value;
    }

    /// Cardinality `|s| = s_1 + ... + s_N`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of the entries indexed by the bitmask `mask`.
    pub fn size_on(&self, mask: u32) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .sum()
    }

    /// Bitmask of the coordinates with nonzero entry.
    pub fn support(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn with_added(&self, i: usize, amount: u32) -> Self {
        let mut v = self.0.clone();
        v[i] += amount;
        Multiset(v)
    }

    pub fn with_removed(&self, i: usize, amount: u32) -> Self {
        let mut v = self.0.clone();
        v[i] -= amount;
        Multiset(v)
    }

    pub fn plus(&self, other: &Multiset) -> Self {
        Multiset(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; panics on underflow.
    pub fn minus(&self, other: &Multiset) -> Self {
        Multiset(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Multiset) -> Self {
        Multiset(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Componentwise maximum.
    pub fn max(&self, other: &Multiset) -> Self {
        Multiset(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn lex_cmp(&self, other: &Multiset) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// Removes the coordinates in `mask`, keeping the rest in order.
    pub fn project_out(&self, mask: u32) -> Self {
        Multiset(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 0)
                .map(|(_, &v)| v)
                .collect(),
        )
    }

    /// Number of multisets below `self`, i.e. `prod (s_i + 1)`.
    pub fn box_size(&self) -> u128 {
        self.0.iter().map(|&v| v as u128 + 1).product()
    }

    /// All multisets `t <= self` in lexicographic order.
    pub fn below(&self) -> BoxIter {
        BoxIter {
            bound: self.0.clone(),
            next: Some(vec![0; self.0.len()]),
        }
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.0.len() != other.0.len() {
            return None;
        }
        let mut le = true;
        let mut ge = true;
        for (a, b) in self.0.iter().zip(&other.0) {
            le &= a <= b;
            ge &= a >= b;
        }
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl From<Vec<u32>> for Multiset {
    fn from(v: Vec<u32>) -> Self {
        Multiset(v)
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Odometer over a box `0 <= t <= bound`, last coordinate fastest.
pub struct BoxIter {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = Multiset;

    fn next(&mut self) -> Option<Multiset> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if succ[pos] < self.bound[pos] {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Multiset(current))
    }
}

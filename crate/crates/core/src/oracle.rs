//! Brute-force references that share no code with the lattice machinery.
//!
//! The lift is built as an explicit matroid on `|n|` elements: a set `I` is
//! independent when `|I ∩ E_A| <= rk(A)` for every `A`, where `E_A` is the
//! union of the blocks in `A`. Ranks and flats are then found by exhaustive
//! search.

use std::collections::BTreeMap;

use crate::error::{Error, Mask, Result};
use crate::multiset::Multiset;
use crate::polymatroid::CagedPolymatroid;

pub const MAX_LIFT_SIZE: u32 = 12;

/// The lift as a matroid on `|n|` elements, block by block.
#[derive(Clone, Debug)]
pub struct MaterializedLift {
    block_masks: Vec<Mask>,
    ranks: Vec<u32>,
}

impl MaterializedLift {
    pub fn new(c: &CagedPolymatroid) -> Result<Self> {
        let total = c.cage().size();
        if total > MAX_LIFT_SIZE {
            return Err(Error::TooLarge {
                what: "lift ground set",
                size: total as u128,
                bound: MAX_LIFT_SIZE as u128,
            });
        }
        let mut block_masks = Vec::with_capacity(c.ground_size());
        let mut next = 0;
        for &size in c.cage().entries() {
            block_masks.push(((1 << size) - 1) << next);
            next += size;
        }
        let n = c.ground_size();
        let union = |a: Mask| {
            (0..n)
                .filter(|i| a >> i & 1 == 1)
                .fold(0 as Mask, |acc, i| acc | block_masks[i])
        };
        let independent =
            |t: Mask| (0..1u32 << n).all(|a| (t & union(a)).count_ones() <= c.poly().rank(a));
        let size = 1usize << total;
        let mut ranks = vec![0; size];
        for t in 1..size {
            ranks[t] = if independent(t as Mask) {
                t.count_ones()
            } else {
                (0..total)
                    .filter(|e| t >> e & 1 == 1)
                    .map(|e| ranks[t & !(1 << e)])
                    .max()
                    .unwrap_or(0)
            };
        }
        Ok(MaterializedLift { block_masks, ranks })
    }

    pub fn ground_size(&self) -> u32 {
        self.block_masks.iter().map(|m| m.count_ones()).sum()
    }

    pub fn rank(&self, t: Mask) -> u32 {
        self.ranks[t as usize]
    }

    pub fn is_flat(&self, t: Mask) -> bool {
        let r = self.rank(t);
        (0..self.ground_size())
            .filter(|e| t >> e & 1 == 0)
            .all(|e| self.rank(t | 1 << e) > r)
    }

    /// How many elements of each block `t` contains.
    pub fn counts(&self, t: Mask) -> Multiset {
        Multiset::new(
            self.block_masks
                .iter()
                .map(|m| (t & m).count_ones())
                .collect(),
        )
    }

    /// Every flat of the lift, grouped by block counts: count vector to
    /// `(rank, number of flats)`.
    pub fn flat_classes(&self) -> BTreeMap<Vec<u32>, (u32, u64)> {
        let mut classes: BTreeMap<Vec<u32>, (u32, u64)> = BTreeMap::new();
        for t in 0..self.ranks.len() as Mask {
            if self.is_flat(t) {
                let entry = classes
                    .entry(self.counts(t).into_entries())
                    .or_insert((self.rank(t), 0));
                assert_eq!(
                    entry.0,
                    self.rank(t),
                    "flats with equal counts differ in rank"
                );
                entry.1 += 1;
            }
        }
        classes
    }
}

/// `max |b|` over `b <= s` with `|b(A)| <= rk(A)` for all `A`, by enumeration.
pub fn exhaustive_multiset_rank(c: &CagedPolymatroid, s: &Multiset) -> u32 {
    let n = c.ground_size();
    s.below()
        .filter(|b| (0..1u32 << n).all(|a| b.size_on(a) <= c.poly().rank(a)))
        .map(|b| b.size())
        .max()
        .unwrap_or(0)
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (0..k as u64).fold(1, |acc, j| acc * (n as u64 - j) / (j + 1))
}

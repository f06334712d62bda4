//! Polymatroids given by explicit rank tables, and caged polymatroids with
//! their multiset rank function.

use itertools::Itertools;

use crate::error::{Error, Mask, Result};
use crate::multiset::Multiset;

/// Hard limit on the ground set size. Lattice enumeration is practical up to
/// about eight elements; the rank table itself is dense in `2^N`.
pub const MAX_GROUND_SIZE: usize = 20;

/// A polymatroid on `{1, ..., N}`: a normalized, increasing, submodular
/// rank function stored densely by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polymatroid {
    ground_size: usize,
    ranks: Vec<u32>,
}

impl Polymatroid {
    /// Validates a rank table and reports the first violated axiom.
    pub fn new(ground_size: usize, ranks: Vec<u32>) -> Result<Self> {
        if ground_size > MAX_GROUND_SIZE {
            return Err(Error::GroundTooLarge(ground_size));
        }
        let expected = 1usize << ground_size;
        if ranks.len() != expected {
            return Err(Error::TableSize {
                ground_size,
                got: ranks.len(),
                expected,
            });
        }
        if ranks[0] != 0 {
            return Err(Error::NotNormalized(ranks[0]));
        }
        let full = (expected - 1) as Mask;
        for a in 0..expected as Mask {
            for i in 0..ground_size {
                let bit = 1 << i;
                if a & bit == 0 && ranks[a as usize] > ranks[(a | bit) as usize] {
                    return Err(Error::NotIncreasing {
                        a,
                        b: a | bit,
                        rank_a: ranks[a as usize],
                        rank_b: ranks[(a | bit) as usize],
                    });
                }
            }
        }
        // Submodularity is equivalent to the local exchange inequality
        // rk(A+i) + rk(A+j) >= rk(A+i+j) + rk(A) for i, j outside A.
        for a in 0..expected as Mask {
            let outside = full & !a;
            for i in 0..ground_size {
                let bi = 1 << i;
                if outside & bi == 0 {
                    continue;
                }
                for j in i + 1..ground_size {
                    let bj = 1 << j;
                    if outside & bj == 0 {
                        continue;
                    }
                    let r = |m: Mask| ranks[m as usize];
                    if r(a | bi) + r(a | bj) < r(a | bi | bj) + r(a) {
                        return Err(Error::NotSubmodular {
                            a: a | bi,
                            b: a | bj,
                        });
                    }
                }
            }
        }
        Ok(Polymatroid { ground_size, ranks })
    }

    pub fn from_fn(ground_size: usize, f: impl Fn(Mask) -> u32) -> Result<Self> {
        if ground_size > MAX_GROUND_SIZE {
            return Err(Error::GroundTooLarge(ground_size));
        }
        let ranks = (0..1u32 << ground_size).map(f).collect();
        Self::new(ground_size, ranks)
    }

    /// The free polymatroid `B_s` with `rk(A) = sum_{i in A} s_i`.
    pub fn free(s: &Multiset) -> Self {
        Self::from_fn(s.len(), |m| s.size_on(m)).expect("free polymatroids are valid")
    }

    /// The rank-zero polymatroid on `n` elements.
    pub fn zero(ground_size: usize) -> Self {
        Self::from_fn(ground_size, |_| 0).expect("zero polymatroid is valid")
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground_mask(&self) -> Mask {
        ((1u64 << self.ground_size) - 1) as Mask
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, mask: Mask) -> u32 {
        self.ranks[mask as usize]
    }

    pub fn element_rank(&self, i: usize) -> u32 {
        self.ranks[1 << i]
    }

    /// `rk(P) = rk(E)`.
    pub fn total_rank(&self) -> u32 {
        self.ranks[self.ground_mask() as usize]
    }

    pub fn corank(&self, mask: Mask) -> u32 {
        self.total_rank() - self.rank(mask)
    }

    pub fn is_matroid(&self) -> bool {
        (0..self.ranks.len()).all(|m| self.ranks[m] <= (m as Mask).count_ones())
    }

    pub fn loops(&self) -> Mask {
        (0..self.ground_size)
            .filter(|&i| self.element_rank(i) == 0)
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn is_loopless(&self) -> bool {
        self.loops() == 0
    }

    /// Every singleton is a flat of positive rank.
    pub fn is_simple(&self) -> bool {
        (0..self.ground_size).all(|i| self.element_rank(i) > 0 && self.is_flat(1 << i))
    }

    /// The smallest flat containing `mask`: `mask` together with every
    /// element whose addition does not raise the rank.
    pub fn closure(&self, mask: Mask) -> Mask {
        let r = self.rank(mask);
        (0..self.ground_size)
            .filter(|&i| self.rank(mask | 1 << i) == r)
            .fold(mask, |m, i| m | 1 << i)
    }

    pub fn is_flat(&self, mask: Mask) -> bool {
        let r = self.rank(mask);
        (0..self.ground_size).all(|i| mask >> i & 1 == 1 || self.rank(mask | 1 << i) > r)
    }

    /// All flats with their ranks, in increasing mask order.
    pub fn flats(&self) -> Vec<(Mask, u32)> {
        (0..=self.ground_mask())
            .filter(|&m| self.is_flat(m))
            .map(|m| (m, self.rank(m)))
            .collect()
    }

    /// `b` is independent when `sum_{i in A} b_i <= rk(A)` for every `A`.
    pub fn is_independent(&self, b: &Multiset) -> bool {
        assert_eq!(b.len(), self.ground_size, "multiset length mismatch");
        let mut sums = vec![0u32; self.ranks.len()];
        for m in 1..self.ranks.len() {
            let low = m.trailing_zeros() as usize;
            sums[m] = sums[m & (m - 1)] + b.get(low);
            if sums[m] > self.ranks[m] {
                return false;
            }
        }
        true
    }

    /// Independent multisets of cardinality `rk(P)`, in lexicographic order.
    pub fn bases(&self) -> Vec<Multiset> {
        let d = self.total_rank();
        self.tight_cage()
            .below()
            .filter(|b| b.size() == d && self.is_independent(b))
            .collect()
    }

    /// The cage `(rk(1), ..., rk(N))`.
    pub fn tight_cage(&self) -> Multiset {
        Multiset::new(
            (0..self.ground_size)
                .map(|i| self.element_rank(i))
                .collect(),
        )
    }

    /// Adjoins a loop as a new last element.
    pub fn with_loop(&self) -> Polymatroid {
        let n = self.ground_size + 1;
        let low = self.ground_mask();
        Polymatroid::from_fn(n, |m| self.rank(m & low)).expect("adjoining a loop is valid")
    }

    /// Relabels the ground set: element `i` of `self` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Polymatroid {
        assert_eq!(perm.len(), self.ground_size);
        let mut ranks = vec![0; self.ranks.len()];
        for (m, &r) in self.ranks.iter().enumerate() {
            let image = (0..self.ground_size)
                .filter(|i| m >> i & 1 == 1)
                .fold(0usize, |acc, i| acc | 1 << perm[i]);
            ranks[image] = r;
        }
        Polymatroid {
            ground_size: self.ground_size,
            ranks,
        }
    }

    /// Finds a relabeling carrying `self` onto `other`, by brute force over
    /// permutations respecting singleton ranks.
    pub fn isomorphism_to(&self, other: &Polymatroid) -> Option<Vec<usize>> {
        if self.ground_size != other.ground_size || self.total_rank() != other.total_rank() {
            return None;
        }
        let mut a = self.ranks.clone();
        let mut b = other.ranks.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        (0..self.ground_size)
            .permutations(self.ground_size)
            .filter(|perm| {
                (0..self.ground_size).all(|i| self.element_rank(i) == other.element_rank(perm[i]))
            })
            .find(|perm| self.relabel(perm) == *other)
    }
}

/// A polymatroid together with a cage `n` satisfying `n_i >= rk({i})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CagedPolymatroid {
    poly: Polymatroid,
    cage: Multiset,
}

impl CagedPolymatroid {
    pub fn new(poly: Polymatroid, cage: Multiset) -> Result<Self> {
        if cage.len() != poly.ground_size() {
            return Err(Error::CageLength {
                got: cage.len(),
                expected: poly.ground_size(),
            });
        }
        for i in 0..poly.ground_size() {
            if cage.get(i) < poly.element_rank(i) {
                return Err(Error::CageTooSmall {
                    element: i,
                    cage: cage.get(i),
                    rank: poly.element_rank(i),
                });
            }
        }
        Ok(CagedPolymatroid { poly, cage })
    }

    /// Caged by `(rk(1), ..., rk(N))`.
    pub fn tight(poly: Polymatroid) -> Self {
        let cage = poly.tight_cage();
        CagedPolymatroid { poly, cage }
    }

    pub fn poly(&self) -> &Polymatroid {
        &self.poly
    }

    pub fn cage(&self) -> &Multiset {
        &self.cage
    }

    pub fn ground_size(&self) -> usize {
        self.poly.ground_size()
    }

    pub fn total_rank(&self) -> u32 {
        self.poly.total_rank()
    }

    pub fn into_parts(self) -> (Polymatroid, Multiset) {
        (self.poly, self.cage)
    }

    pub fn check_in_cage(&self, s: &Multiset) -> Result<()> {
        if s.len() != self.ground_size() {
            return Err(Error::LengthMismatch {
                got: s.len(),
                expected: self.ground_size(),
            });
        }
        if !s.le(&self.cage) {
            return Err(Error::CageExceeded {
                multiset: s.clone(),
                cage: self.cage.clone(),
            });
        }
        Ok(())
    }

    /// Rank of a multiset `s <= n`:
    /// `min_{B subset E} ( rk(B) + sum_{i not in B} s_i )`.
    pub fn rank(&self, s: &Multiset) -> Result<u32> {
        self.check_in_cage(s)?;
        Ok(self.rank_unchecked(s))
    }

    pub(crate) fn rank_unchecked(&self, s: &Multiset) -> u32 {
        let total = s.size();
        let ranks = self.poly.ranks();
        let mut inside = vec![0u32; ranks.len()];
        let mut best = total;
        for m in 1..ranks.len() {
            let low = m.trailing_zeros() as usize;
            inside[m] = inside[m & (m - 1)] + s.get(low);
            best = best.min(ranks[m] + total - inside[m]);
        }
        best
    }

    /// A basis of `s`: grow `b` from zero, raising coordinates in ascending
    /// order while `b` stays independent.
    pub fn basis_of(&self, s: &Multiset) -> Result<Multiset> {
        self.check_in_cage(s)?;
        let n = self.ground_size();
        let ranks = self.poly.ranks();
        let mut b = Multiset::zero(n);
        // slack[A] = rk(A) - b(A); raising b_i is allowed iff slack > 0 on
        // every A containing i.
        let mut slack: Vec<u32> = ranks.to_vec();
        for i in 0..n {
            let bit = 1usize << i;
            while b.get(i) < s.get(i) {
                let ok = (0..ranks.len()).all(|m| m & bit == 0 || slack[m] > 0);
                if !ok {
                    break;
                }
                b.set(i, b.get(i) + 1);
                for (m, sl) in slack.iter_mut().enumerate() {
                    if m & bit != 0 {
                        *sl -= 1;
                    }
                }
            }
        }
        Ok(b)
    }

    /// Whether every coordinate of `s` is either 0 or saturated.
    pub fn is_geometric(&self, s: &Multiset) -> bool {
        (0..s.len()).all(|i| s.get(i) == 0 || s.get(i) == self.cage.get(i))
    }

    /// The geometric multiset `sum_{i in mask} n_i e_i`.
    pub fn saturated(&self, mask: Mask) -> Multiset {
        Multiset::new(
            (0..self.ground_size())
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        self.cage.get(i)
                    } else {
                        0
                    }
                })
                .collect(),
        )
    }
}

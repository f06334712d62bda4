//! Queries on the multisymmetric lift of a caged polymatroid.
//!
//! The lift lives on `E_1 ⊔ ... ⊔ E_N` with `|E_i| = n_i`. Its rank function
//! is invariant under permuting each block, so a subset is described by its
//! block counts; [`LiftSet`] stores exactly those counts. Nothing here
//! materializes the lifted ground set.

use crate::error::Result;
use crate::multiset::Multiset;
use crate::polymatroid::CagedPolymatroid;

/// A subset of the lifted ground set, up to block permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftSet {
    counts: Multiset,
}

impl LiftSet {
    pub fn new(caged: &CagedPolymatroid, counts: Multiset) -> Result<Self> {
        caged.check_in_cage(&counts)?;
        Ok(LiftSet { counts })
    }

    pub fn counts(&self) -> &Multiset {
        &self.counts
    }

    /// The canonical representative: block `i` contributes its first `s_i`
    /// elements. Elements are numbered consecutively block by block.
    pub fn representative(&self, cage: &Multiset) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for i in 0..cage.len() {
            out.extend(offset..offset + self.counts.get(i) as usize);
            offset += cage.get(i) as usize;
        }
        out
    }
}

/// `rk(A) = min_B ( rk_P(B) + |A \ ∪_{i in B} E_i| )` for any `A` with block
/// counts `s`.
pub fn lift_rank(caged: &CagedPolymatroid, s: &Multiset) -> Result<u32> {
    caged.check_in_cage(s)?;
    let poly = caged.poly();
    let best = (0..=poly.ground_mask())
        .map(|b| poly.rank(b) + s.size() - s.size_on(b))
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// Keeps the saturated coordinates of `s` and zeroes the rest.
pub fn geometric_part(caged: &CagedPolymatroid, s: &Multiset) -> Result<Multiset> {
    caged.check_in_cage(s)?;
    let cage = caged.cage();
    Ok(Multiset::new(
        (0..s.len())
            .map(|i| if s.get(i) == cage.get(i) { s.get(i) } else { 0 })
            .collect(),
    ))
}

/// Whether the sets with counts `s` are flats of the lift: adding any
/// element outside strictly raises the rank.
pub fn lift_flat_check(caged: &CagedPolymatroid, s: &Multiset) -> Result<bool> {
    let r = lift_rank(caged, s)?;
    let cage = caged.cage();
    for i in 0..s.len() {
        if s.get(i) < cage.get(i) && lift_rank(caged, &s.with_added(i, 1))? <= r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a set with counts `b` is a basis of the lift, equivalently
/// whether `b` is a basis of the polymatroid.
pub fn lift_basis_check(caged: &CagedPolymatroid, b: &Multiset) -> Result<bool> {
    caged.check_in_cage(b)?;
    Ok(b.size() == caged.total_rank() && caged.poly().is_independent(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;

    fn m(v: &[u32]) -> Multiset {
        Multiset::new(v.to_vec())
    }

    #[test]
    fn lift_ranks_of_intro_example() {
        let c = fixtures::intro_example_caged();
        assert_eq!(lift_rank(&c, &m(&[0, 0, 0, 1])).unwrap(), 1);
        assert_eq!(lift_rank(&c, &m(&[0, 0, 0, 0])).unwrap(), 0);
        assert_eq!(lift_rank(&c, &m(&[1, 1, 1, 2])).unwrap(), 3);
        assert!(matches!(
            lift_rank(&c, &m(&[0, 0, 0, 3])),
            Err(Error::CageExceeded { .. })
        ));
    }

    #[test]
    fn geometric_parts() {
        let c = fixtures::intro_example_caged();
        assert_eq!(
            geometric_part(&c, &m(&[1, 1, 1, 1])).unwrap(),
            m(&[1, 1, 1, 0])
        );
        assert_eq!(
            geometric_part(&c, &m(&[1, 1, 1, 2])).unwrap(),
            m(&[1, 1, 1, 2])
        );
        let d = fixtures::doubled_point();
        assert_eq!(geometric_part(&d, &m(&[1, 2])).unwrap(), m(&[0, 2]));
    }

    #[test]
    fn flat_checks() {
        let c = fixtures::intro_example_caged();
        assert!(lift_flat_check(&c, &m(&[0, 0, 0, 2])).unwrap());
        assert!(!lift_flat_check(&c, &m(&[1, 1, 0, 0])).unwrap());
        assert!(lift_flat_check(&c, &m(&[1, 1, 1, 2])).unwrap());
    }

    #[test]
    fn basis_checks() {
        let c = fixtures::intro_example_caged();
        assert!(lift_basis_check(&c, &m(&[1, 1, 0, 1])).unwrap());
        assert!(!lift_basis_check(&c, &m(&[0, 0, 0, 0])).unwrap());
        assert!(lift_basis_check(&c, &m(&[0, 0, 1, 2])).unwrap());
        assert!(!lift_basis_check(&c, &m(&[1, 1, 1, 0])).unwrap());
    }

    #[test]
    fn geometric_sets_carry_polymatroid_ranks() {
        let c = fixtures::intro_example_caged();
        for mask in 0..16u32 {
            let s = c.saturated(mask);
            assert_eq!(lift_rank(&c, &s).unwrap(), c.poly().rank(mask));
        }
    }

    #[test]
    fn canonical_representative() {
        let c = fixtures::intro_example_caged();
        let set = LiftSet::new(&c, m(&[1, 0, 1, 1])).unwrap();
        assert_eq!(set.representative(c.cage()), vec![0, 2, 3]);
    }
}

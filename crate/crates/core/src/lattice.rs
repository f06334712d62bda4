//! The lattice of combinatorial flats of a caged polymatroid.
//!
//! A multiset `s <= n` is a combinatorial flat if `rank(s + e_i) > rank(s)`
//! for every `i` with `s_i < n_i`. Flats are enumerated over the cage box
//! using a precomputed rank table.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::polymatroid::CagedPolymatroid;
use crate::poset::AbstractGradedLattice;

pub const DEFAULT_ENUMERATION_BOUND: u128 = 1_000_000;

/// Ranks of every multiset in the cage box, indexed in mixed radix.
#[derive(Clone, Debug)]
pub struct RankCube {
    cage: Multiset,
    strides: Vec<usize>,
    ranks: Vec<u32>,
}

impl RankCube {
    pub fn new(caged: &CagedPolymatroid, bound: u128) -> Result<Self> {
        let cage = caged.cage().clone();
        let size = cage.box_size();
        if size > bound {
            return Err(Error::TooLarge {
                what: "cage box",
                size,
                bound,
            });
        }
        let n = cage.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (cage.get(i + 1) as usize + 1);
        }
        let ranks = cage.below().map(|s| caged.rank_unchecked(&s)).collect();
        Ok(RankCube {
            cage,
            strides,
            ranks,
        })
    }

    pub fn cage(&self) -> &Multiset {
        &self.cage
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Position of `s` in the lexicographic order of the box.
    pub fn index(&self, s: &Multiset) -> usize {
        s.entries()
            .iter()
            .zip(&self.strides)
            .map(|(&v, &st)| v as usize * st)
            .sum()
    }

    pub fn rank(&self, s: &Multiset) -> u32 {
        self.ranks[self.index(s)]
    }

    pub fn rank_at(&self, index: usize) -> u32 {
        self.ranks[index]
    }

    pub fn is_flat(&self, s: &Multiset) -> bool {
        let idx = self.index(s);
        let r = self.ranks[idx];
        (0..s.len()).all(|i| s.get(i) == self.cage.get(i) || self.ranks[idx + self.strides[i]] > r)
    }

    pub fn closure(&self, s: &Multiset) -> Multiset {
        let mut t = s.clone();
        loop {
            let idx = self.index(&t);
            let r = self.ranks[idx];
            let mut changed = false;
            for i in 0..t.len() {
                if t.get(i) < self.cage.get(i) && self.ranks[idx + self.strides[i]] == r {
                    t.set(i, self.cage.get(i));
                    changed = true;
                }
            }
            if !changed {
                return t;
            }
        }
    }
}

/// The smallest combinatorial flat containing `s`.
pub fn closure(caged: &CagedPolymatroid, s: &Multiset) -> Result<Multiset> {
    caged.check_in_cage(s)?;
    let mut t = s.clone();
    loop {
        let r = caged.rank_unchecked(&t);
        let mut changed = false;
        for i in 0..t.len() {
            let n_i = caged.cage().get(i);
            if t.get(i) < n_i && caged.rank_unchecked(&t.with_added(i, 1)) == r {
                t.set(i, n_i);
                changed = true;
            }
        }
        if !changed {
            return Ok(t);
        }
    }
}

pub fn is_flat(caged: &CagedPolymatroid, s: &Multiset) -> Result<bool> {
    caged.check_in_cage(s)?;
    let r = caged.rank_unchecked(s);
    Ok((0..s.len())
        .all(|i| s.get(i) == caged.cage().get(i) || caged.rank_unchecked(&s.with_added(i, 1)) > r))
}

fn require_flat(caged: &CagedPolymatroid, s: &Multiset) -> Result<()> {
    if is_flat(caged, s)? {
        Ok(())
    } else {
        Err(Error::NotAFlat(s.clone()))
    }
}

/// Join of two flats: the closure of their componentwise maximum.
pub fn join(caged: &CagedPolymatroid, s: &Multiset, t: &Multiset) -> Result<Multiset> {
    require_flat(caged, s)?;
    require_flat(caged, t)?;
    closure(caged, &s.max(t))
}

/// Meet of two flats: their componentwise minimum.
pub fn meet(caged: &CagedPolymatroid, s: &Multiset, t: &Multiset) -> Result<Multiset> {
    require_flat(caged, s)?;
    require_flat(caged, t)?;
    Ok(s.meet(t))
}

#[derive(Clone, Debug)]
pub struct ComboFlatLattice {
    cage: Multiset,
    elements: Vec<Multiset>,
    ranks: Vec<u32>,
    covers: Vec<(usize, usize)>,
    index: HashMap<Multiset, usize>,
}

impl ComboFlatLattice {
    pub fn enumerate(caged: &CagedPolymatroid) -> Result<Self> {
        Self::enumerate_bounded(caged, DEFAULT_ENUMERATION_BOUND)
    }

    /// Enumerates the flats in lexicographic order, refusing cages whose box
    /// has more than `bound` points.
    pub fn enumerate_bounded(caged: &CagedPolymatroid, bound: u128) -> Result<Self> {
        let cube = RankCube::new(caged, bound)?;
        Ok(Self::from_cube(&cube))
    }

    pub fn from_cube(cube: &RankCube) -> Self {
        let mut elements = Vec::new();
        let mut ranks = Vec::new();
        for s in cube.cage().below() {
            if cube.is_flat(&s) {
                ranks.push(cube.rank(&s));
                elements.push(s);
            }
        }
        let top = ranks.iter().copied().max().unwrap_or(0) as usize;
        let mut by_rank = vec![Vec::new(); top + 1];
        for (k, &r) in ranks.iter().enumerate() {
            by_rank[r as usize].push(k);
        }
        let mut covers = Vec::new();
        for r in 0..top {
            for &x in &by_rank[r] {
                for &y in &by_rank[r + 1] {
                    if elements[x] <= elements[y] {
                        covers.push((x, y));
                    }
                }
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        ComboFlatLattice {
            cage: cube.cage().clone(),
            elements,
            ranks,
            covers,
            index,
        }
    }

    pub fn cage(&self) -> &Multiset {
        &self.cage
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Multiset] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &Multiset {
        &self.elements[k]
    }

    pub fn rank_of(&self, k: usize) -> u32 {
        self.ranks[k]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn index_of(&self, s: &Multiset) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Multiset) -> bool {
        self.index.contains_key(s)
    }

    /// Pairs `(lower, upper)` of element indices.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn total_rank(&self) -> u32 {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// `|L^k|` for `k = 0, ..., rank`.
    pub fn whitney(&self) -> Vec<usize> {
        let mut out = vec![0; self.total_rank() as usize + 1];
        for &r in &self.ranks {
            out[r as usize] += 1;
        }
        out
    }

    /// `|L^k| <= |L^{d-k}|` for `k <= d/2`.
    pub fn is_top_heavy(&self) -> bool {
        whitney_top_heavy(&self.whitney())
    }

    /// `|L^k| <= |L^{k+1}|` whenever `k + 1 <= d - k`.
    pub fn is_bottom_monotone(&self) -> bool {
        whitney_bottom_monotone(&self.whitney())
    }

    /// Elements other than the bottom with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let mut lower = vec![0usize; self.len()];
        for &(_, y) in &self.covers {
            lower[y] += 1;
        }
        (0..self.len()).filter(|&k| lower[k] == 1).collect()
    }

    /// The poset built from every comparable pair, independent of the
    /// rank-based cover computation.
    pub fn to_abstract(&self) -> Result<AbstractGradedLattice> {
        let labels = self.elements.iter().map(Multiset::to_string).collect();
        let mut relations = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if x != y && self.elements[x] <= self.elements[y] {
                    relations.push((x, y));
                }
            }
        }
        AbstractGradedLattice::from_relations(labels, &relations)
    }

    /// Whether the order is graded with rank function equal to the multiset
    /// rank, checked through the Hasse diagram of the order itself.
    pub fn is_graded(&self) -> bool {
        match self.to_abstract() {
            Ok(l) => (0..l.len()).all(|x| {
                let k = self.index_of_label(l.label(x));
                l.rank(x) == self.ranks[k]
            }),
            Err(_) => false,
        }
    }

    fn index_of_label(&self, label: &str) -> usize {
        self.elements
            .iter()
            .position(|s| s.to_string() == label)
            .expect("label comes from this lattice")
    }

    /// A pair of flats violating `rk(s ∧ t) + rk(s ∨ t) <= rk(s) + rk(t)`,
    /// or whose meet or join falls outside the lattice.
    pub fn semimodular_violation(&self, cube: &RankCube) -> Option<(Multiset, Multiset)> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                let (s, t) = (&self.elements[x], &self.elements[y]);
                let m = s.meet(t);
                let j = cube.closure(&s.max(t));
                let ok = self.contains(&m)
                    && self.contains(&j)
                    && cube.rank(&m) + cube.rank(&j) <= self.ranks[x] + self.ranks[y];
                if !ok {
                    return Some((s.clone(), t.clone()));
                }
            }
        }
        None
    }

    /// Checks that `s ∨ t` is the least upper bound and `s ∧ t` the greatest
    /// lower bound among the flats, by exhaustive comparison.
    pub fn lattice_operation_violation(&self, cube: &RankCube) -> Option<(Multiset, Multiset)> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                let (s, t) = (&self.elements[x], &self.elements[y]);
                let m = s.meet(t);
                let j = cube.closure(&s.max(t));
                let ok = self.elements.iter().all(|u| {
                    let upper_ok = !(s <= u && t <= u) || j <= *u;
                    let lower_ok = !(u <= s && u <= t) || *u <= m;
                    upper_ok && lower_ok
                });
                if !ok {
                    return Some((s.clone(), t.clone()));
                }
            }
        }
        None
    }
}

pub fn whitney_top_heavy(w: &[usize]) -> bool {
    let d = w.len().saturating_sub(1);
    (0..=d / 2).all(|k| w[k] <= w[d - k])
}

pub fn whitney_bottom_monotone(w: &[usize]) -> bool {
    let d = w.len().saturating_sub(1);
    (0..d).filter(|&k| 2 * k < d).all(|k| w[k] <= w[k + 1])
}

/// Multiset pairs violating `rk(s ∨ t) + rk(s ∧ t) <= rk(s) + rk(t)` over the
/// whole cage box, with `s ∨ t` the closure of the componentwise maximum.
pub fn multiset_submodular_violation(cube: &RankCube) -> Option<(Multiset, Multiset)> {
    let all: Vec<Multiset> = cube.cage().below().collect();
    for (a, s) in all.iter().enumerate() {
        for t in &all[a + 1..] {
            let j = cube.closure(&s.max(t));
            let m = s.meet(t);
            if cube.rank(&j) + cube.rank(&m) > cube.rank(s) + cube.rank(t) {
                return Some((s.clone(), t.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(v: &[u32]) -> Multiset {
        Multiset::new(v.to_vec())
    }

    #[test]
    fn intro_example_whitney_numbers() {
        let l = ComboFlatLattice::enumerate(&fixtures::intro_example_caged()).unwrap();
        assert_eq!(l.whitney(), vec![1, 4, 5, 1]);
        assert!(l.is_top_heavy());
        assert!(l.is_bottom_monotone());
        assert!(l.is_graded());
        let rank_two: Vec<String> = l
            .elements()
            .iter()
            .zip(l.ranks())
            .filter(|(_, &r)| r == 2)
            .map(|(s, _)| s.to_string())
            .collect();
        assert_eq!(
            rank_two,
            vec![
                "(0,0,0,2)",
                "(0,0,1,1)",
                "(0,1,0,1)",
                "(1,0,0,1)",
                "(1,1,1,0)"
            ]
        );
    }

    #[test]
    fn closures() {
        let c = fixtures::intro_example_caged();
        assert_eq!(closure(&c, &m(&[1, 1, 0, 0])).unwrap(), m(&[1, 1, 1, 0]));
        assert_eq!(closure(&c, &m(&[1, 0, 0, 1])).unwrap(), m(&[1, 0, 0, 1]));
        assert_eq!(closure(&c, &m(&[1, 0, 0, 2])).unwrap(), m(&[1, 1, 1, 2]));
        let cube = RankCube::new(&c, DEFAULT_ENUMERATION_BOUND).unwrap();
        for s in c.cage().below() {
            assert_eq!(cube.closure(&s), closure(&c, &s).unwrap());
            assert_eq!(cube.rank(&s), c.rank(&s).unwrap());
        }
    }

    #[test]
    fn join_and_meet() {
        let c = fixtures::intro_example_caged();
        let a = m(&[1, 0, 0, 1]);
        let b = m(&[0, 1, 0, 1]);
        assert_eq!(join(&c, &a, &b).unwrap(), m(&[1, 1, 1, 2]));
        assert_eq!(meet(&c, &a, &b).unwrap(), m(&[0, 0, 0, 1]));
        assert!(matches!(
            join(&c, &m(&[1, 1, 0, 0]), &a),
            Err(Error::NotAFlat(_))
        ));
    }

    #[test]
    fn doubled_point_lattice() {
        let l = ComboFlatLattice::enumerate(&fixtures::doubled_point()).unwrap();
        assert_eq!(l.whitney(), vec![1, 2, 1]);
        assert!(l.is_bottom_monotone());
        assert!(l.is_graded());
    }

    #[test]
    fn boolean_and_chain() {
        let b =
            ComboFlatLattice::enumerate(&CagedPolymatroid::tight(fixtures::boolean(3))).unwrap();
        assert_eq!(b.whitney(), vec![1, 3, 3, 1]);
        let ch = ComboFlatLattice::enumerate(&CagedPolymatroid::tight(fixtures::chain(4))).unwrap();
        assert_eq!(ch.whitney(), vec![1, 1, 1, 1, 1]);
        assert_eq!(ch.join_irreducibles(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn enumeration_bound() {
        let c = fixtures::intro_example_caged();
        assert!(matches!(
            ComboFlatLattice::enumerate_bounded(&c, 10),
            Err(Error::TooLarge { size: 24, .. })
        ));
    }

    #[test]
    fn lattice_axioms_hold_on_intro_example() {
        let c = fixtures::intro_example_caged();
        let cube = RankCube::new(&c, DEFAULT_ENUMERATION_BOUND).unwrap();
        let l = ComboFlatLattice::from_cube(&cube);
        assert_eq!(l.semimodular_violation(&cube), None);
        assert_eq!(l.lattice_operation_violation(&cube), None);
        assert_eq!(multiset_submodular_violation(&cube), None);
        let abs = l.to_abstract().unwrap();
        assert!(abs.check_axioms().passed());
    }

    #[test]
    fn whitney_shape_predicates() {
        assert!(whitney_top_heavy(&[1, 4, 5, 1]));
        assert!(!whitney_top_heavy(&[1, 3, 2, 1]));
        assert!(whitney_bottom_monotone(&[1, 4, 5, 1]));
        assert!(!whitney_bottom_monotone(&[1, 4, 3, 5, 1, 1]));
        assert!(whitney_bottom_monotone(&[1, 2, 1]));
        assert!(whitney_bottom_monotone(&[1]));
    }
}

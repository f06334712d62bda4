//! Finite graded posets with a minimum, given by cover relations.
//!
//! Used for the lattice axiom checks, reconstruction of a simple polymatroid
//! from its lattice, and isomorphism testing between lattices.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::polymatroid::{Polymatroid, MAX_GROUND_SIZE};

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub(crate) fn is_superset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0)
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite poset with a unique minimum in which every cover raises the
/// height by one. Elements are stored sorted by rank; the lattice property
/// itself is checked by [`AbstractGradedLattice::check_axioms`].
#[derive(Clone, Debug)]
pub struct AbstractGradedLattice {
    labels: Vec<String>,
    ranks: Vec<u32>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

/// The first axiom violation found by [`AbstractGradedLattice::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    NoJoin(String, String),
    NoMeet(String, String),
    NotSemimodular(String, String),
    IrreduciblesNotDownwardClosed {
        irreducible: String,
        below: String,
    },
    NullityMismatch {
        element: String,
        geometric_part: String,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NoJoin(a, b) => write!(f, "no join of {a} and {b}"),
            AxiomViolation::NoMeet(a, b) => write!(f, "no meet of {a} and {b}"),
            AxiomViolation::NotSemimodular(a, b) => {
                write!(f, "semimodular inequality fails for {a} and {b}")
            }
            AxiomViolation::IrreduciblesNotDownwardClosed { irreducible, below } => write!(
                f,
                "{below} lies below the join-irreducible {irreducible} but is not join-irreducible"
            ),
            AxiomViolation::NullityMismatch {
                element,
                geometric_part,
            } => write!(
                f,
                "nullity of {element} differs from nullity of its geometric part {geometric_part}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub semimodular_lattice: bool,
    pub irreducibles_downward_closed: bool,
    pub nullity_condition: bool,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl AbstractGradedLattice {
    /// Builds the poset generated by the relations `lower < upper`. Relations
    /// need not be covers; the Hasse diagram is recomputed.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::MalformedPoset(format!(
                    "relation ({a}, {b}) references an element outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::MalformedPoset(format!(
                    "{} is related to itself",
                    labels[a]
                )));
            }
            succ[a].push(b);
            indegree[b] += 1;
        }
        // Kahn's algorithm: a topological order exists iff the relation is acyclic.
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        let mut deg = indegree.clone();
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &y in &succ[x] {
                deg[y] -= 1;
                if deg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::MalformedPoset("relations contain a cycle".into()));
        }
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for &x in topo.iter().rev() {
            let mut set = BitSet::new(n);
            set.insert(x);
            for &y in &succ[x] {
                set.union_with(&up[y]);
            }
            up[x] = set;
        }
        // covers: minimal elements of the strict up-set
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for x in 0..n {
            let mut non_minimal = BitSet::new(n);
            for y in up[x].iter().filter(|&y| y != x) {
                for z in up[y].iter().filter(|&z| z != y) {
                    non_minimal.insert(z);
                }
            }
            for y in up[x].iter().filter(|&y| y != x && !non_minimal.contains(y)) {
                upper[x].push(y);
                lower[y].push(x);
            }
        }
        let minima: Vec<usize> = (0..n).filter(|&x| lower[x].is_empty()).collect();
        if minima.len() != 1 {
            return Err(Error::NoMinimum(minima.len()));
        }
        let mut height = vec![0u32; n];
        for &x in &topo {
            for &y in &upper[x] {
                height[y] = height[y].max(height[x] + 1);
            }
        }
        for x in 0..n {
            for &y in &upper[x] {
                if height[y] != height[x] + 1 {
                    return Err(Error::NotGraded {
                        lower: labels[x].clone(),
                        upper: labels[y].clone(),
                    });
                }
            }
        }
        // Re-index by (rank, original position).
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (height[x], x));
        let mut new_index = vec![0; n];
        for (k, &x) in order.iter().enumerate() {
            new_index[x] = k;
        }
        let remap = |v: &[usize]| {
            let mut out: Vec<usize> = v.iter().map(|&x| new_index[x]).collect();
            out.sort_unstable();
            out
        };
        let remap_set = |s: &BitSet| {
            let mut out = BitSet::new(n);
            for x in s.iter() {
                out.insert(new_index[x]);
            }
            out
        };
        let up: Vec<BitSet> = order.iter().map(|&x| remap_set(&up[x])).collect();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (x, set) in up.iter().enumerate() {
            for y in set.iter() {
                down[y].insert(x);
            }
        }
        Ok(AbstractGradedLattice {
            labels: order.iter().map(|&x| labels[x].clone()).collect(),
            ranks: order.iter().map(|&x| height[x]).collect(),
            lower: order.iter().map(|&x| remap(&lower[x])).collect(),
            upper: order.iter().map(|&x| remap(&upper[x])).collect(),
            up,
            down,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rank(&self, x: usize) -> u32 {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.upper[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let bounds = self.up[x].intersection(&self.up[y]);
        // indices are rank-sorted, so the first bound has minimal rank
        let cand = bounds.first()?;
        self.up[cand].is_superset(&bounds).then_some(cand)
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let bounds = self.down[x].intersection(&self.down[y]);
        let cand = bounds.iter().last()?;
        self.down[cand].is_superset(&bounds).then_some(cand)
    }

    pub fn whitney(&self) -> Vec<usize> {
        let top = self.ranks.iter().copied().max().unwrap_or(0) as usize;
        let mut out = vec![0; top + 1];
        for &r in &self.ranks {
            out[r as usize] += 1;
        }
        out
    }

    /// Elements other than the minimum with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&x| self.lower[x].len() == 1)
            .collect()
    }

    /// Join-irreducibles not strictly below another join-irreducible.
    pub fn maximal_join_irreducibles(&self) -> Vec<usize> {
        let ji = self.join_irreducibles();
        ji.iter()
            .copied()
            .filter(|&x| !ji.iter().any(|&y| y != x && self.leq(x, y)))
            .collect()
    }

    /// Checks the three characterizing axioms of lattices of combinatorial
    /// flats: semimodular lattice, downward-closed join-irreducibles, and
    /// `nul(e) = nul(e^geo)`.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport {
            semimodular_lattice: true,
            irreducibles_downward_closed: true,
            nullity_condition: true,
            violation: None,
        };
        let n = self.len();
        let mut is_lattice = true;
        'pairs: for x in 0..n {
            for y in x + 1..n {
                let (Some(j), Some(m)) = (self.join(x, y), self.meet(x, y)) else {
                    let v = if self.join(x, y).is_none() {
                        AxiomViolation::NoJoin(self.labels[x].clone(), self.labels[y].clone())
                    } else {
                        AxiomViolation::NoMeet(self.labels[x].clone(), self.labels[y].clone())
                    };
                    report.semimodular_lattice = false;
                    report.violation.get_or_insert(v);
                    is_lattice = false;
                    break 'pairs;
                };
                if self.ranks[j] + self.ranks[m] > self.ranks[x] + self.ranks[y] {
                    report.semimodular_lattice = false;
                    report
                        .violation
                        .get_or_insert(AxiomViolation::NotSemimodular(
                            self.labels[x].clone(),
                            self.labels[y].clone(),
                        ));
                    break 'pairs;
                }
            }
        }

        let ji = self.join_irreducibles();
        let mut is_ji = vec![false; n];
        for &x in &ji {
            is_ji[x] = true;
        }
        'ji: for &j in &ji {
            for x in self.down[j].iter() {
                if x != self.bottom() && !is_ji[x] {
                    report.irreducibles_downward_closed = false;
                    report
                        .violation
                        .get_or_insert(AxiomViolation::IrreduciblesNotDownwardClosed {
                            irreducible: self.labels[j].clone(),
                            below: self.labels[x].clone(),
                        });
                    break 'ji;
                }
            }
        }

        if is_lattice {
            let maximal = self.maximal_join_irreducibles();
            let nullity = |e: usize| -> i64 {
                ji.iter().filter(|&&j| self.leq(j, e)).count() as i64 - self.ranks[e] as i64
            };
            for e in 0..n {
                let geo = self.geometric_part(e, &maximal);
                if nullity(e) != nullity(geo) {
                    report.nullity_condition = false;
                    report
                        .violation
                        .get_or_insert(AxiomViolation::NullityMismatch {
                            element: self.labels[e].clone(),
                            geometric_part: self.labels[geo].clone(),
                        });
                    break;
                }
            }
        } else {
            report.nullity_condition = false;
        }
        report
    }

    fn geometric_part(&self, e: usize, maximal: &[usize]) -> usize {
        maximal
            .iter()
            .filter(|&&x| self.leq(x, e))
            .fold(self.bottom(), |acc, &x| {
                self.join(acc, x).expect("joins exist in a lattice")
            })
    }

    /// The simple polymatroid whose ground set is the set of maximal
    /// join-irreducibles, with `rk(A)` the rank of the join of `A`.
    /// Elements are ordered as in [`Self::maximal_join_irreducibles`].
    pub fn reconstruct_polymatroid(&self) -> Result<Polymatroid> {
        let report = self.check_axioms();
        if let Some(v) = report.violation {
            return Err(Error::AxiomsFailed(v.to_string()));
        }
        let generators = self.maximal_join_irreducibles();
        if generators.len() > MAX_GROUND_SIZE {
            return Err(Error::GroundTooLarge(generators.len()));
        }
        Polymatroid::from_fn(generators.len(), |mask| {
            let joined = generators
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(self.bottom(), |acc, (_, &x)| {
                    self.join(acc, x).expect("axioms imply a lattice")
                });
            self.ranks[joined]
        })
    }

    /// An order isomorphism `self -> other` as an index map, if one exists.
    pub fn isomorphism(&self, other: &AbstractGradedLattice) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.whitney() != other.whitney() {
            return None;
        }
        let n = self.len();
        let edges_a: usize = self.upper.iter().map(Vec::len).sum();
        let edges_b: usize = other.upper.iter().map(Vec::len).sum();
        if edges_a != edges_b {
            return None;
        }
        let (colors_a, colors_b) = refine_colors(self, other);
        let mut hist_a = colors_a.clone();
        let mut hist_b = colors_b.clone();
        hist_a.sort_unstable();
        hist_b.sort_unstable();
        if hist_a != hist_b {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if extend_isomorphism(self, other, &colors_a, &colors_b, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &AbstractGradedLattice) -> bool {
        self.isomorphism(other).is_some()
    }
}

/// Joint color refinement on rank, down-set size, up-set size and the
/// multisets of neighbor colors, iterated to a fixed point.
fn refine_colors(a: &AbstractGradedLattice, b: &AbstractGradedLattice) -> (Vec<usize>, Vec<usize>) {
    let initial = |l: &AbstractGradedLattice| -> Vec<(u32, usize, usize)> {
        (0..l.len())
            .map(|x| (l.ranks[x], l.down[x].count(), l.up[x].count()))
            .collect()
    };
    let mut table: HashMap<(u32, usize, usize), usize> = HashMap::new();
    let mut assign = |sigs: Vec<(u32, usize, usize)>| -> Vec<usize> {
        sigs.into_iter()
            .map(|s| {
                let next = table.len();
                *table.entry(s).or_insert(next)
            })
            .collect()
    };
    let mut ca = assign(initial(a));
    let mut cb = assign(initial(b));
    let mut classes = count_classes(&ca, &cb);
    loop {
        let mut table: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let mut step = |l: &AbstractGradedLattice, c: &[usize]| -> Vec<usize> {
            (0..l.len())
                .map(|x| {
                    let mut lo: Vec<usize> = l.lower[x].iter().map(|&y| c[y]).collect();
                    let mut hi: Vec<usize> = l.upper[x].iter().map(|&y| c[y]).collect();
                    lo.sort_unstable();
                    hi.sort_unstable();
                    let next = table.len();
                    *table.entry((c[x], lo, hi)).or_insert(next)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let new_classes = count_classes(&na, &nb);
        ca = na;
        cb = nb;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    (ca, cb)
}

fn count_classes(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn extend_isomorphism(
    a: &AbstractGradedLattice,
    b: &AbstractGradedLattice,
    ca: &[usize],
    cb: &[usize],
    x: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if x == a.len() {
        return true;
    }
    // Elements are rank-sorted, so every lower cover of x is already mapped.
    let candidates: Vec<usize> = match a.lower[x].first() {
        Some(&l) => b.upper[map[l]].clone(),
        None => (0..b.len()).collect(),
    };
    for y in candidates {
        if used[y] || ca[x] != cb[y] || a.lower[x].len() != b.lower[y].len() {
            continue;
        }
        if !a.lower[x].iter().all(|&l| b.lower[y].contains(&map[l])) {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend_isomorphism(a, b, ca, cb, x + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean(k: usize) -> AbstractGradedLattice {
        let labels: Vec<String> = (0..1usize << k).map(|m| format!("{m:b}")).collect();
        let mut rel = Vec::new();
        for m in 0..1usize << k {
            for i in 0..k {
                if m >> i & 1 == 0 {
                    rel.push((m, m | 1 << i));
                }
            }
        }
        AbstractGradedLattice::from_relations(labels, &rel).unwrap()
    }

    fn chain(n: usize) -> AbstractGradedLattice {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
        AbstractGradedLattice::from_relations(labels, &rel).unwrap()
    }

    /// The ordinary flats of the intro example: 0 < 1,2,3,4; 1,2,3 < 123;
    /// 123, 4 < 1234.
    fn ordinary_flats_poset() -> Result<AbstractGradedLattice> {
        let labels = ["0", "1", "2", "3", "4", "123", "1234"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rel = [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (2, 5),
            (3, 5),
            (5, 6),
            (4, 6),
        ];
        AbstractGradedLattice::from_relations(labels, &rel)
    }

    #[test]
    fn boolean_lattice_passes_axioms() {
        let l = boolean(3);
        assert_eq!(l.whitney(), vec![1, 3, 3, 1]);
        assert!(l.check_axioms().passed());
        assert_eq!(l.join_irreducibles().len(), 3);
        let p = l.reconstruct_polymatroid().unwrap();
        assert_eq!(p, crate::fixtures::boolean(3));
    }

    #[test]
    fn chain_reconstructs_single_element() {
        let l = chain(4);
        assert!(l.check_axioms().passed());
        assert_eq!(l.join_irreducibles(), vec![1, 2, 3, 4]);
        assert_eq!(l.maximal_join_irreducibles(), vec![4]);
        assert_eq!(
            l.reconstruct_polymatroid().unwrap(),
            crate::fixtures::chain(4)
        );
    }

    #[test]
    fn ordinary_flats_of_intro_example_are_not_graded() {
        assert!(matches!(ordinary_flats_poset(), Err(Error::NotGraded { .. })));
    }

    #[test]
    fn structural_errors() {
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        assert!(matches!(
            AbstractGradedLattice::from_relations(labels.clone(), &[]),
            Err(Error::NoMinimum(2))
        ));
        assert!(matches!(
            AbstractGradedLattice::from_relations(labels.clone(), &[(0, 1), (1, 0)]),
            Err(Error::MalformedPoset(_))
        ));
        assert!(matches!(
            AbstractGradedLattice::from_relations(labels, &[(0, 5)]),
            Err(Error::MalformedPoset(_))
        ));
    }

    #[test]
    fn transitive_relations_are_reduced() {
        let labels = (0..3).map(|i| i.to_string()).collect();
        let l = AbstractGradedLattice::from_relations(labels, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(l.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn non_lattice_is_reported() {
        // bowtie: two atoms below two coatoms below a top
        let labels = (0..6).map(|i| i.to_string()).collect();
        let rel = [
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 5),
            (4, 5),
        ];
        let l = AbstractGradedLattice::from_relations(labels, &rel).unwrap();
        let report = l.check_axioms();
        assert!(matches!(report.violation, Some(AxiomViolation::NoJoin(..))));
        assert!(l.reconstruct_polymatroid().is_err());
    }

    #[test]
    fn non_downward_closed_irreducibles() {
        // 0 < a, b < c < d with a, b both under c: c is not irreducible but d
        // (covering only c) is.
        let labels = ["0", "a", "b", "c", "d"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rel = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
        let l = AbstractGradedLattice::from_relations(labels, &rel).unwrap();
        let report = l.check_axioms();
        assert!(!report.irreducibles_downward_closed);
        assert!(matches!(
            report.violation,
            Some(AxiomViolation::IrreduciblesNotDownwardClosed { .. })
        ));
    }

    #[test]
    fn isomorphism_of_relabelled_lattices() {
        let a = boolean(3);
        let labels: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
        // same Boolean lattice, listed with shuffled indices
        let perm = [0usize, 4, 2, 6, 1, 5, 3, 7];
        let mut rel = Vec::new();
        for m in 0..8usize {
            for i in 0..3 {
                if m >> i & 1 == 0 {
                    rel.push((perm[m], perm[m | 1 << i]));
                }
            }
        }
        let b = AbstractGradedLattice::from_relations(labels, &rel).unwrap();
        let map = a.isomorphism(&b).unwrap();
        for (x, y) in a.covers() {
            assert!(b.upper_covers(map[x]).contains(&map[y]));
        }
        assert!(!a.is_isomorphic(&chain(3)));
        assert!(!a.is_isomorphic(&boolean(2)));
    }
}

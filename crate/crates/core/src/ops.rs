//! Deletion, truncation, reduction, delooping and simplification, plus
//! checks that these operations commute with the multisymmetric lift.

use std::fmt;

use crate::error::{Error, Mask, Result};
use crate::lattice::{RankCube, DEFAULT_ENUMERATION_BOUND};
use crate::multiset::Multiset;
use crate::polymatroid::{CagedPolymatroid, Polymatroid};

/// `P \ A`: the rank function restricted to subsets of `E \ A`, with the
/// remaining elements re-indexed in ascending order.
pub fn delete(p: &Polymatroid, a: Mask) -> Polymatroid {
    let keep: Vec<usize> = (0..p.ground_size()).filter(|&i| a >> i & 1 == 0).collect();
    Polymatroid::from_fn(keep.len(), |m| p.rank(spread(m, &keep)))
        .expect("deletion of a polymatroid is a polymatroid")
}

/// `P|_A = P \ (E \ A)`.
pub fn restrict(p: &Polymatroid, a: Mask) -> Polymatroid {
    delete(p, p.ground_mask() & !a)
}

/// Deletion with the cage projected to the remaining elements.
pub fn delete_caged(c: &CagedPolymatroid, a: Mask) -> CagedPolymatroid {
    let poly = delete(c.poly(), a);
    CagedPolymatroid::new(poly, c.cage().project_out(a)).expect("projected cage stays valid")
}

fn spread(m: Mask, keep: &[usize]) -> Mask {
    keep.iter()
        .enumerate()
        .filter(|(k, _)| m >> k & 1 == 1)
        .fold(0, |acc, (_, &i)| acc | 1 << i)
}

/// `T_S P`: lowers the rank by one on every set `A` with
/// `rk(A) = rk(A ∪ S)`.
pub fn truncate(p: &Polymatroid, s: Mask) -> Result<Polymatroid> {
    if p.total_rank() == 0 {
        return Err(Error::RankZero);
    }
    if s & !p.ground_mask() != 0 {
        return Err(Error::ElementOutOfRange {
            index: (32 - (s & !p.ground_mask()).leading_zeros()) as usize,
            size: p.ground_size(),
        });
    }
    if p.rank(s) == 0 {
        return Err(Error::ZeroRankSet(s));
    }
    Polymatroid::from_fn(p.ground_size(), |a| {
        let r = p.rank(a);
        if r == p.rank(a | s) {
            r - 1
        } else {
            r
        }
    })
}

/// `R_i P`: lowers the rank by one on every `A` with
/// `rk(A) = rk(A \ i) + rk(i)`.
pub fn reduce_polymatroid(p: &Polymatroid, i: usize) -> Result<Polymatroid> {
    check_index(p, i)?;
    let ri = p.element_rank(i);
    if ri == 0 {
        return Err(Error::LoopReduction(i));
    }
    let bit = 1 << i;
    Polymatroid::from_fn(p.ground_size(), |a| {
        let r = p.rank(a);
        if a & bit != 0 && r == p.rank(a & !bit) + ri {
            r - 1
        } else {
            r
        }
    })
}

/// `R_i(P, n)`: drops `n_i` by one, and reduces `P` at `i` when the cage
/// at `i` was tight.
pub fn reduce(c: &CagedPolymatroid, i: usize) -> Result<CagedPolymatroid> {
    check_index(c.poly(), i)?;
    let p = c.poly();
    if p.element_rank(i) == 0 {
        return Err(Error::LoopReduction(i));
    }
    let cage = c.cage().with_removed(i, 1);
    let poly = if c.cage().get(i) > p.element_rank(i) {
        p.clone()
    } else {
        reduce_polymatroid(p, i)?
    };
    CagedPolymatroid::new(poly, cage)
}

fn check_index(p: &Polymatroid, i: usize) -> Result<()> {
    if i >= p.ground_size() {
        return Err(Error::ElementOutOfRange {
            index: i,
            size: p.ground_size(),
        });
    }
    Ok(())
}

/// Deletes every loop.
pub fn deloop(c: &CagedPolymatroid) -> CagedPolymatroid {
    delete_caged(c, c.poly().loops())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Deloop(usize),
    Reduce(usize),
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Deloop(i) => write!(f, "deloop {}", i + 1),
            StepKind::Reduce(i) => write!(f, "reduce {}", i + 1),
        }
    }
}

/// One step of a simplification. Element indices are labels of the input
/// ground set (0-based).
#[derive(Clone, Debug)]
pub struct SimplificationStep {
    pub kind: StepKind,
    pub result: CagedPolymatroid,
}

#[derive(Clone, Debug, Default)]
pub struct SimplificationTrace {
    pub steps: Vec<SimplificationStep>,
    /// Input labels of the surviving elements, in their new order.
    pub labels: Vec<usize>,
}

impl SimplificationTrace {
    pub fn reduce_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Reduce(_)))
            .count()
    }
}

/// Deletes loops, then repeatedly reduces at the smallest element that is
/// not a flat or whose cage exceeds its rank, deleting loops after each
/// reduction. The result is simple with a tight cage.
pub fn simplify(c: &CagedPolymatroid) -> (CagedPolymatroid, SimplificationTrace) {
    simplify_by(c, |eligible| eligible[0])
}

/// [`simplify`] with a caller-chosen pivot among the eligible elements
/// (current indices, ascending).
pub fn simplify_by(
    c: &CagedPolymatroid,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> (CagedPolymatroid, SimplificationTrace) {
    let mut trace = SimplificationTrace {
        steps: Vec::new(),
        labels: (0..c.ground_size()).collect(),
    };
    let mut current = c.clone();
    deloop_traced(&mut current, &mut trace);
    loop {
        let p = current.poly();
        let eligible: Vec<usize> = (0..current.ground_size())
            .filter(|&i| !p.is_flat(1 << i) || current.cage().get(i) > p.element_rank(i))
            .collect();
        if eligible.is_empty() {
            break;
        }
        let i = pick(&eligible);
        current = reduce(&current, i).expect("loopless, so every element has positive rank");
        trace.steps.push(SimplificationStep {
            kind: StepKind::Reduce(trace.labels[i]),
            result: current.clone(),
        });
        deloop_traced(&mut current, &mut trace);
    }
    (current, trace)
}

fn deloop_traced(current: &mut CagedPolymatroid, trace: &mut SimplificationTrace) {
    let loops = current.poly().loops();
    for i in (0..current.ground_size())
        .rev()
        .filter(|&i| loops >> i & 1 == 1)
    {
        *current = delete_caged(current, 1 << i);
        let label = trace.labels.remove(i);
        trace.steps.push(SimplificationStep {
            kind: StepKind::Deloop(label),
            result: current.clone(),
        });
    }
}

/// An operation whose interaction with the lift can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftOp {
    Delete(Mask),
    Truncate(Mask),
    Reduce(usize),
}

/// Compares lift ranks on every multiset of the resulting cage: applying
/// the operation to `(P, n)` and then lifting agrees with lifting and then
/// applying the matching matroid operation.
pub fn verify_lift_commutes(c: &CagedPolymatroid, op: LiftOp) -> Result<bool> {
    match op {
        LiftOp::Delete(a) => {
            let d = delete_caged(c, a);
            let keep: Vec<usize> = (0..c.ground_size()).filter(|&i| a >> i & 1 == 0).collect();
            Ok(d.cage().below().all(|s| {
                let mut full = Multiset::zero(c.ground_size());
                for (k, &i) in keep.iter().enumerate() {
                    full.set(i, s.get(k));
                }
                d.rank_unchecked(&s) == c.rank_unchecked(&full)
            }))
        }
        LiftOp::Truncate(s) => {
            let t = CagedPolymatroid::new(truncate(c.poly(), s)?, c.cage().clone())?;
            let f = c.saturated(s);
            Ok(c.cage().below().all(|x| {
                let r = c.rank_unchecked(&x);
                let drop = u32::from(r == c.rank_unchecked(&x.max(&f)));
                t.rank_unchecked(&x) == r - drop
            }))
        }
        LiftOp::Reduce(i) => {
            let r = reduce(c, i)?;
            Ok(r.cage()
                .below()
                .all(|s| r.rank_unchecked(&s) == c.rank_unchecked(&s)))
        }
    }
}

/// For every `s <= n` whose closure has `i`-th entry below `n_i`, flatness
/// of `s` must agree with flatness of its projection in `P \ i`. Returns a
/// witness if not.
pub fn local_product_violation(c: &CagedPolymatroid, i: usize) -> Result<Option<Multiset>> {
    check_index(c.poly(), i)?;
    let cube = RankCube::new(c, DEFAULT_ENUMERATION_BOUND)?;
    let d = delete_caged(c, 1 << i);
    let dcube = RankCube::new(&d, DEFAULT_ENUMERATION_BOUND)?;
    for s in c.cage().below() {
        if cube.closure(&s).get(i) < c.cage().get(i)
            && cube.is_flat(&s) != dcube.is_flat(&s.project_out(1 << i))
        {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// For a flat `F` with `f = sum_{i in F} n_i e_i`: the flats of `(T_F P, n)`
/// are the flats of `(P, n)` that contain `f` (rank drops by one) or whose
/// every one-step closure misses `f` (rank unchanged). Returns a witness
/// multiset where this fails.
pub fn truncation_flats_violation(c: &CagedPolymatroid, flat: Mask) -> Result<Option<Multiset>> {
    let t = CagedPolymatroid::new(truncate(c.poly(), flat)?, c.cage().clone())?;
    let cube = RankCube::new(c, DEFAULT_ENUMERATION_BOUND)?;
    let tcube = RankCube::new(&t, DEFAULT_ENUMERATION_BOUND)?;
    let f = c.saturated(flat);
    for s in c.cage().below() {
        let predicted = if !cube.is_flat(&s) {
            None
        } else if f <= s {
            Some(cube.rank(&s) - 1)
        } else {
            let misses = (0..s.len())
                .filter(|&i| s.get(i) < c.cage().get(i))
                .all(|i| !f.le(&cube.closure(&s.with_added(i, 1))));
            misses.then(|| cube.rank(&s))
        };
        let actual = tcube.is_flat(&s).then(|| tcube.rank(&s));
        if predicted != actual {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

//! The invariant suite run on every generated instance.
//!
//! Each check returns `Ok(None)` when it holds and `Ok(Some(witness))` when
//! it fails. Errors are reserved for instances outside the size guards.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{cup_over_all_bases, CoeffMode, CohomologyRing};
use crate::error::{Error, Result};
use crate::io::format_multiset;
use crate::lattice::{
    multiset_submodular_violation, ComboFlatLattice, RankCube, DEFAULT_ENUMERATION_BOUND,
};
use crate::lift::lift_flat_check;
use crate::multiset::Multiset;
use crate::ops::{
    delete_caged, local_product_violation, simplify_by, truncation_flats_violation,
    verify_lift_commutes, LiftOp,
};
use crate::oracle::{binomial, exhaustive_multiset_rank, MaterializedLift, MAX_LIFT_SIZE};
use crate::polymatroid::CagedPolymatroid;
use crate::random::Instance;
use crate::realization::RationalSubspace;

pub type Finding = Result<Option<String>>;

/// A caged polymatroid with its rank table and lattice computed once.
pub struct Prepared<'a> {
    pub caged: &'a CagedPolymatroid,
    pub cube: RankCube,
    pub lattice: ComboFlatLattice,
}

impl<'a> Prepared<'a> {
    pub fn new(caged: &'a CagedPolymatroid) -> Result<Self> {
        let cube = RankCube::new(caged, DEFAULT_ENUMERATION_BOUND)?;
        let lattice = ComboFlatLattice::from_cube(&cube);
        Ok(Prepared {
            caged,
            cube,
            lattice,
        })
    }
}

/// Flats of the lift, the strict rank increase test and the materialized
/// lift all pick out the same multisets, with the same ranks.
pub fn definitions_agree(p: &Prepared) -> Finding {
    let c = p.caged;
    for s in c.cage().below() {
        let by_lift = lift_flat_check(c, &s)?;
        let by_rank = p.cube.is_flat(&s);
        if by_lift != by_rank {
            return Ok(Some(format!(
                "{}: lift definition says {by_lift}, rank increase says {by_rank}",
                format_multiset(&s)
            )));
        }
    }
    if c.cage().size() > MAX_LIFT_SIZE {
        return Ok(None);
    }
    let lift = MaterializedLift::new(c)?;
    let classes = lift.flat_classes();
    if classes.len() != p.lattice.len() {
        return Ok(Some(format!(
            "materialized lift has {} flat classes, lattice has {}",
            classes.len(),
            p.lattice.len()
        )));
    }
    for (s, r) in p.lattice.elements().iter().zip(p.lattice.ranks()) {
        let Some(&(lift_rank, count)) = classes.get(s.entries()) else {
            return Ok(Some(format!(
                "{} is not a flat of the materialized lift",
                format_multiset(s)
            )));
        };
        let orbit: u64 = (0..s.len())
            .map(|i| binomial(c.cage().get(i), s.get(i)))
            .product();
        if lift_rank != *r || count != orbit {
            return Ok(Some(format!(
                "{}: rank {r} vs {lift_rank}, {count} lift flats vs orbit size {orbit}",
                format_multiset(s)
            )));
        }
    }
    Ok(None)
}

/// Multiset ranks against exhaustive search over independent multisets.
pub fn multiset_ranks_agree(p: &Prepared) -> Finding {
    for s in p.caged.cage().below() {
        let fast = p.cube.rank(&s);
        let slow = exhaustive_multiset_rank(p.caged, &s);
        if fast != slow {
            return Ok(Some(format!(
                "rank of {} is {fast}, exhaustive {slow}",
                format_multiset(&s)
            )));
        }
    }
    Ok(None)
}

fn pair(s: &Multiset, t: &Multiset) -> String {
    format!("({}) and ({})", format_multiset(s), format_multiset(t))
}

/// Graded, a lattice, semimodular, top-heavy, bottom-monotone, and the
/// abstract lattice axioms.
pub fn lattice_structure(p: &Prepared) -> Finding {
    let l = &p.lattice;
    if !l.is_graded() {
        return Ok(Some("lattice is not graded".into()));
    }
    if let Some((s, t)) = l.lattice_operation_violation(&p.cube) {
        return Ok(Some(format!(
            "join or meet of {} is not a flat",
            pair(&s, &t)
        )));
    }
    if let Some((s, t)) = l.semimodular_violation(&p.cube) {
        return Ok(Some(format!("semimodularity fails for {}", pair(&s, &t))));
    }
    if let Some((s, t)) = multiset_submodular_violation(&p.cube) {
        return Ok(Some(format!(
            "multiset rank not submodular at {}",
            pair(&s, &t)
        )));
    }
    if !l.is_top_heavy() {
        return Ok(Some(format!(
            "Whitney numbers {:?} are not top-heavy (implementation bug)",
            l.whitney()
        )));
    }
    if !l.is_bottom_monotone() {
        return Ok(Some(format!(
            "Whitney numbers {:?} are not bottom-monotone",
            l.whitney()
        )));
    }
    let report = l.to_abstract()?.check_axioms();
    if !report.passed() {
        let why = report.violation.map(|v| v.to_string()).unwrap_or_default();
        return Ok(Some(format!("lattice axioms fail: {why}")));
    }
    Ok(None)
}

/// Simplification under several pivot orders ends in simple polymatroids
/// with tight cages, all isomorphic, each with a lattice isomorphic to the
/// original; reconstruction from the lattice recovers the same polymatroid.
pub fn simplification(p: &Prepared, seed: u64) -> Finding {
    let original = p.lattice.to_abstract()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends = Vec::new();
    for order in 0..3 {
        let (end, _) = simplify_by(p.caged, |eligible| match order {
            0 => eligible[0],
            1 => *eligible.last().unwrap(),
            _ => *eligible.choose(&mut rng).unwrap(),
        });
        ends.push(end);
    }
    for end in &ends {
        if !end.poly().is_simple() || *end.cage() != end.poly().tight_cage() {
            return Ok(Some(format!(
                "simplification ended at a non-simple {:?}",
                end.poly().ranks()
            )));
        }
        if end.poly().isomorphism_to(ends[0].poly()).is_none() {
            return Ok(Some("simplification orders disagree".into()));
        }
    }
    let simple = ComboFlatLattice::enumerate(&ends[0])?.to_abstract()?;
    if !simple.is_isomorphic(&original) {
        return Ok(Some(
            "lattice of the simplification is not isomorphic".into(),
        ));
    }
    let rebuilt = original.reconstruct_polymatroid()?;
    if rebuilt.isomorphism_to(ends[0].poly()).is_none() {
        return Ok(Some(format!(
            "reconstruction {:?} differs from simplification {:?}",
            rebuilt.ranks(),
            ends[0].poly().ranks()
        )));
    }
    Ok(None)
}

/// Deletion of every subset, truncation at every positive-rank subset and
/// reduction at every non-loop commute with the lift.
pub fn lift_commutation(c: &CagedPolymatroid) -> Finding {
    let poly = c.poly();
    let mut ops: Vec<LiftOp> = (0..=poly.ground_mask()).map(LiftOp::Delete).collect();
    if poly.total_rank() > 0 {
        ops.extend(
            (1..=poly.ground_mask())
                .filter(|&s| poly.rank(s) > 0)
                .map(LiftOp::Truncate),
        );
    }
    ops.extend(
        (0..c.ground_size())
            .filter(|&i| poly.element_rank(i) > 0)
            .map(LiftOp::Reduce),
    );
    for op in ops {
        if !verify_lift_commutes(c, op)? {
            return Ok(Some(format!("{op:?} does not commute with the lift")));
        }
    }
    Ok(None)
}

/// The local product structure at every element and the description of
/// flats after truncating at a flat.
pub fn flat_lemmas(c: &CagedPolymatroid) -> Finding {
    for i in 0..c.ground_size() {
        if let Some(s) = local_product_violation(c, i)? {
            return Ok(Some(format!(
                "local product fails at element {} for {}",
                i + 1,
                format_multiset(&s)
            )));
        }
    }
    for (f, r) in c.poly().flats() {
        if r == 0 {
            continue;
        }
        if let Some(s) = truncation_flats_violation(c, f)? {
            return Ok(Some(format!(
                "flats of the truncation at {} mispredicted at {}",
                crate::io::format_subset(f),
                format_multiset(&s)
            )));
        }
    }
    Ok(None)
}

/// The ring in one coefficient mode: Hilbert function, unit, grading,
/// commutativity, associativity. A failed table build is reported with its
/// witness.
pub fn cohomology(p: &Prepared, mode: CoeffMode) -> Finding {
    let ring = match CohomologyRing::new(p.caged, mode) {
        Ok(r) => r,
        Err(e @ (Error::NoAdditiveBasisPair { .. } | Error::InconsistentScalar { .. })) => {
            return Ok(Some(format!("{mode}: {e}")));
        }
        Err(e) => return Err(e),
    };
    let l = ring.lattice();
    let name = |x: usize| format_multiset(l.element(x));
    if ring.hilbert() != l.whitney() {
        return Ok(Some(format!(
            "{mode}: Hilbert function differs from Whitney numbers"
        )));
    }
    if let Some(x) = ring.unit_violation() {
        return Ok(Some(format!("{mode}: unit fails on {}", name(x))));
    }
    if let Some((x, y)) = ring.grading_violation() {
        return Ok(Some(format!(
            "{mode}: grading fails on {} * {}",
            name(x),
            name(y)
        )));
    }
    if let Some((x, y)) = ring.commutativity_violation() {
        return Ok(Some(format!(
            "{mode}: not commutative on {} * {}",
            name(x),
            name(y)
        )));
    }
    if let Some((x, y, z)) = ring.associativity_violation() {
        return Ok(Some(format!(
            "{mode}: not associative on {} * {} * {}",
            name(x),
            name(y),
            name(z)
        )));
    }
    Ok(None)
}

/// Every choice of bases gives the same cup product.
pub fn cup_well_defined(p: &Prepared) -> Finding {
    let l = &p.lattice;
    for s in l.elements() {
        for t in l.elements() {
            let cups = cup_over_all_bases(p.caged, &p.cube, s, t);
            if cups.windows(2).any(|w| w[0] != w[1]) {
                return Ok(Some(format!("cup of {} depends on the bases", pair(s, t))));
            }
        }
    }
    Ok(None)
}

/// A p.g. translate exists within the retry limit, its flag intersections
/// give the multiset ranks, and projecting away any element keeps it p.g.
pub fn realization(v: &RationalSubspace, p: &Prepared, seed: u64) -> Finding {
    if v.caged_polymatroid()? != *p.caged {
        return Ok(Some("subspace does not realize the instance".into()));
    }
    let w = match v.random_pg_translate(seed) {
        Ok(w) => w,
        Err(Error::RetryLimit(k)) => return Ok(Some(format!("no p.g. translate in {k} retries"))),
        Err(e) => return Err(e),
    };
    let flags = w.flag_ranks()?;
    for (s, r) in p.caged.cage().below().zip(flags) {
        if r != p.cube.rank(&s) {
            return Ok(Some(format!(
                "flag codimension {r} at {} differs from multiset rank {}",
                format_multiset(&s),
                p.cube.rank(&s)
            )));
        }
    }
    for i in 0..w.ground_size() {
        let projected = w.project_away(1 << i)?;
        if projected.caged_polymatroid()? != delete_caged(p.caged, 1 << i) {
            return Ok(Some(format!("projecting away {} is not deletion", i + 1)));
        }
        if let Some(witness) = projected.pg_violation()? {
            return Ok(Some(format!(
                "projecting away {} loses p.g. at {}",
                i + 1,
                format_multiset(&witness.s)
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.failure.is_some())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "ok   {}", c.name)?,
                Some(w) => writeln!(f, "FAIL {}: {w}", c.name)?,
            }
        }
        Ok(())
    }
}

/// Runs every check on one instance.
pub fn run_suite(instance: &Instance, seed: u64) -> Result<SuiteReport> {
    let p = Prepared::new(&instance.caged)?;
    let mut report = SuiteReport::default();
    let mut record = |name: &'static str, finding: Finding| -> Result<()> {
        report.checks.push(CheckResult {
            name,
            failure: finding?,
        });
        Ok(())
    };
    record("definitions", definitions_agree(&p))?;
    record("multiset rank", multiset_ranks_agree(&p))?;
    record("lattice", lattice_structure(&p))?;
    record("simplification", simplification(&p, seed))?;
    record("lift commutation", lift_commutation(p.caged))?;
    record("flat lemmas", flat_lemmas(p.caged))?;
    record("cup", cup_well_defined(&p))?;
    record(
        "cohomology binomial",
        cohomology(&p, CoeffMode::ConjecturalBinomial),
    )?;
    record("cohomology ones", cohomology(&p, CoeffMode::AllOnes))?;
    if let Some(v) = &instance.subspace {
        record("realization", realization(v, &p, seed))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::random::Family;

    #[test]
    fn intro_example_passes_everything() {
        let inst = Instance {
            family: Family::Subspace,
            caged: fixtures::intro_example_caged(),
            subspace: Some(fixtures::intro_subspace()),
        };
        let report = run_suite(&inst, 1).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 10);
    }
}

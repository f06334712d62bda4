//! Seeded generators of small caged polymatroids.
//!
//! Three families are drawn from: projections of random rational subspaces,
//! free polymatroids cut down by truncations, and random matroids whose
//! elements are grouped into blocks. The last two may also receive loops and
//! slack in the cage.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Mask, Result};
use crate::linalg::{q, Matrix};
use crate::multiset::Multiset;
use crate::ops::truncate;
use crate::polymatroid::{CagedPolymatroid, Polymatroid, MAX_GROUND_SIZE};
use crate::realization::RationalSubspace;

const MAX_MATROID_SIZE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub max_n: usize,
    pub max_rank: u32,
    pub max_cage: u32,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_n: 4,
            max_rank: 5,
            max_cage: 4,
        }
    }
}

impl RandomParams {
    fn check(&self) -> Result<()> {
        if self.max_n == 0 || self.max_cage == 0 {
            return Err(Error::DimensionMismatch(
                "max-n and max-cage must be positive".into(),
            ));
        }
        if self.max_n > MAX_GROUND_SIZE {
            return Err(Error::GroundTooLarge(self.max_n));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Subspace,
    Truncated,
    Matroid,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Subspace => "subspace",
            Family::Truncated => "truncated-free",
            Family::Matroid => "matroid",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub caged: CagedPolymatroid,
    /// A realization with blocks matching the cage, for the subspace family.
    pub subspace: Option<RationalSubspace>,
}

/// Draws an instance from a family chosen by the seed.
pub fn random_instance(seed: u64, params: &RandomParams) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = match rng.gen_range(0..3) {
        0 => Family::Subspace,
        1 => Family::Truncated,
        _ => Family::Matroid,
    };
    instance_of(&mut rng, family, params)
}

pub fn random_instance_of(family: Family, seed: u64, params: &RandomParams) -> Result<Instance> {
    instance_of(&mut ChaCha8Rng::seed_from_u64(seed), family, params)
}

pub fn random_caged_polymatroid(seed: u64, params: &RandomParams) -> Result<CagedPolymatroid> {
    Ok(random_instance(seed, params)?.caged)
}

fn instance_of(rng: &mut ChaCha8Rng, family: Family, params: &RandomParams) -> Result<Instance> {
    params.check()?;
    if family == Family::Subspace {
        let v = random_subspace(rng, params)?;
        return Ok(Instance {
            family,
            caged: v.caged_polymatroid()?,
            subspace: Some(v),
        });
    }
    let n = rng.gen_range(1..=params.max_n);
    let (p, cage) = match family {
        Family::Truncated => truncated_free(rng, n, params)?,
        _ => grouped_matroid(rng, n, params)?,
    };
    let caged = decorate(rng, p, cage, params)?;
    Ok(Instance {
        family,
        caged,
        subspace: None,
    })
}

/// Sparse small-integer rows, so that coincidences among the blocks are common.
fn random_subspace(rng: &mut ChaCha8Rng, params: &RandomParams) -> Result<RationalSubspace> {
    let n = rng.gen_range(1..=params.max_n);
    let cage = Multiset::new((0..n).map(|_| rng.gen_range(1..=params.max_cage)).collect());
    let width = cage.size() as usize;
    let dim = rng.gen_range(0..=params.max_rank.min(cage.size())) as usize;
    let zero_block = rng.gen_bool(0.15).then(|| rng.gen_range(0..n));
    let mut starts = Vec::with_capacity(n);
    let mut acc = 0;
    for &c in cage.entries() {
        starts.push(acc);
        acc += c as usize;
    }
    let block_of = |col: usize| starts.iter().rposition(|&s| s <= col).unwrap();
    let zero_cols: Vec<bool> = (0..width).map(|_| rng.gen_bool(0.1)).collect();
    let density = rng.gen_range(0.3..0.9);
    let mut rows = vec![vec![q(0); width]; dim];
    for row in rows.iter_mut() {
        for (col, x) in row.iter_mut().enumerate() {
            if zero_cols[col] || zero_block == Some(block_of(col)) || !rng.gen_bool(density) {
                continue;
            }
            let v: i64 = *[-2, -1, 1, 1, 2].choose(rng).unwrap();
            *x = q(v);
        }
    }
    RationalSubspace::new(cage, Matrix::from_rows(width, rows)?)
}

fn random_positive_set(rng: &mut ChaCha8Rng, p: &Polymatroid) -> Mask {
    loop {
        let s = rng.gen_range(1..=p.ground_mask());
        if p.rank(s) > 0 {
            return s;
        }
    }
}

/// Truncates at random positive-rank sets until the rank is at most
/// `max_rank`, then up to two more times while the rank stays positive.
fn truncate_down(rng: &mut ChaCha8Rng, mut p: Polymatroid, max_rank: u32) -> Result<Polymatroid> {
    while p.total_rank() > max_rank {
        let s = random_positive_set(rng, &p);
        p = truncate(&p, s)?;
    }
    for _ in 0..rng.gen_range(0..=2) {
        if p.total_rank() <= 1 {
            break;
        }
        let s = random_positive_set(rng, &p);
        p = truncate(&p, s)?;
    }
    Ok(p)
}

fn truncated_free(
    rng: &mut ChaCha8Rng,
    n: usize,
    params: &RandomParams,
) -> Result<(Polymatroid, Multiset)> {
    let cage = Multiset::new((0..n).map(|_| rng.gen_range(1..=params.max_cage)).collect());
    let p = truncate_down(rng, Polymatroid::free(&cage), params.max_rank)?;
    Ok((p, cage))
}

/// A matroid on the disjoint union of the blocks, read as a polymatroid on
/// the block indices.
fn grouped_matroid(
    rng: &mut ChaCha8Rng,
    n: usize,
    params: &RandomParams,
) -> Result<(Polymatroid, Multiset)> {
    let per_block = params.max_cage.min((MAX_MATROID_SIZE / n as u32).max(1));
    let sizes = Multiset::new((0..n).map(|_| rng.gen_range(1..=per_block)).collect());
    let m = sizes.size() as usize;
    let free = Polymatroid::free(&Multiset::new(vec![1; m]));
    let matroid = truncate_down(rng, free, params.max_rank)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut block_masks = vec![0 as Mask; n];
    let mut next = 0;
    for (i, &size) in sizes.entries().iter().enumerate() {
        for _ in 0..size {
            block_masks[i] |= 1 << order[next];
            next += 1;
        }
    }
    let p = Polymatroid::from_fn(n, |a| {
        let union = (0..n)
            .filter(|i| a >> i & 1 == 1)
            .fold(0, |acc, i| acc | block_masks[i]);
        matroid.rank(union)
    })?;
    Ok((p, sizes))
}

/// Possibly adjoins a loop, shuffles the ground set and loosens the cage.
fn decorate(
    rng: &mut ChaCha8Rng,
    mut p: Polymatroid,
    cage: Multiset,
    params: &RandomParams,
) -> Result<CagedPolymatroid> {
    let mut entries = cage.into_entries();
    if p.ground_size() < params.max_n && rng.gen_bool(0.25) {
        p = p.with_loop();
        entries.push(rng.gen_range(0..=params.max_cage.min(2)));
    }
    let n = p.ground_size();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    p = p.relabel(&perm);
    let mut shuffled = vec![0; n];
    for (i, &c) in entries.iter().enumerate() {
        shuffled[perm[i]] = c;
    }
    for c in shuffled.iter_mut() {
        if *c < params.max_cage && rng.gen_bool(0.2) {
            *c += 1;
        }
    }
    CagedPolymatroid::new(p, Multiset::new(shuffled))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_respect_the_bounds() {
        let params = RandomParams::default();
        for seed in 0..300 {
            let inst = random_instance(seed, &params).unwrap();
            let c = &inst.caged;
            assert!(c.ground_size() >= 1 && c.ground_size() <= params.max_n);
            assert!(c.total_rank() <= params.max_rank);
            assert!(c.cage().entries().iter().all(|&x| x <= params.max_cage));
            if let Some(v) = &inst.subspace {
                assert_eq!(v.caged_polymatroid().unwrap(), *c);
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let params = RandomParams::default();
        for seed in [0, 7, 99] {
            let a = random_caged_polymatroid(seed, &params).unwrap();
            let b = random_caged_polymatroid(seed, &params).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn every_family_shows_up_with_loops_and_slack() {
        let params = RandomParams::default();
        let mut families = Vec::new();
        let (mut loops, mut slack) = (false, false);
        for seed in 0..200 {
            let inst = random_instance(seed, &params).unwrap();
            if !families.contains(&inst.family) {
                families.push(inst.family);
            }
            loops |= !inst.caged.poly().is_loopless();
            slack |= inst.caged.cage() != &inst.caged.poly().tight_cage();
        }
        assert_eq!(families.len(), 3);
        assert!(loops && slack);
    }
}

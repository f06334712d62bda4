//! Subspaces `V ⊆ Q^{n_1} × ... × Q^{n_N}` and their polymatroids.
//!
//! `rk(A)` is the dimension of the projection of `V` onto the blocks in `A`.
//! The coordinate subspace `St_s` kills the first `s_i` coordinates of each
//! block `i`, and `V` is polymatroid general when the multiset rank of every
//! `s <= n` equals `codim_V(V ∩ St_s)`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Mask, Result};
use crate::lattice::DEFAULT_ENUMERATION_BOUND;
use crate::linalg::{q, row_space_intersection, Matrix, Q};
use crate::multiset::Multiset;
use crate::ops::truncate;
use crate::polymatroid::{CagedPolymatroid, Polymatroid};

pub const DEFAULT_COEFF_BOUND: i64 = 101;
pub const DEFAULT_RETRY_LIMIT: usize = 32;

/// A subspace given by spanning rows, stored in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    cage: Multiset,
    rows: Matrix,
}

/// A multiset where the multiset rank and the codimension disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgWitness {
    pub s: Multiset,
    pub multiset_rank: u32,
    pub codim: u32,
}

impl RationalSubspace {
    pub fn new(cage: Multiset, rows: Matrix) -> Result<Self> {
        let width = cage.size() as usize;
        if rows.cols() != width {
            return Err(Error::DimensionMismatch(format!(
                "rows have {} entries but the blocks total {width}",
                rows.cols()
            )));
        }
        Ok(RationalSubspace {
            cage,
            rows: rows.rref().0,
        })
    }

    pub fn from_int_rows(cage: &[u32], rows: &[&[i64]]) -> Result<Self> {
        let cage = Multiset::new(cage.to_vec());
        let width = cage.size() as usize;
        let m = Matrix::from_rows(
            width,
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )?;
        Self::new(cage, m)
    }

    pub fn cage(&self) -> &Multiset {
        &self.cage
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn ground_size(&self) -> usize {
        self.cage.len()
    }

    fn block_start(&self, i: usize) -> usize {
        self.cage.entries()[..i].iter().sum::<u32>() as usize
    }

    /// Column indices of the blocks in `mask`.
    pub fn block_columns(&self, mask: Mask) -> Vec<usize> {
        (0..self.ground_size())
            .filter(|&i| mask >> i & 1 == 1)
            .flat_map(|i| {
                let start = self.block_start(i);
                start..start + self.cage.get(i) as usize
            })
            .collect()
    }

    /// Columns `(i, 1), ..., (i, s_i)` for every block.
    pub fn stabilizer_columns(&self, s: &Multiset) -> Vec<usize> {
        (0..self.ground_size())
            .flat_map(|i| {
                let start = self.block_start(i);
                start..start + s.get(i) as usize
            })
            .collect()
    }

    /// `rk(A) = dim π_A(V)`.
    pub fn polymatroid(&self) -> Result<Polymatroid> {
        Polymatroid::from_fn(self.ground_size(), |a| {
            self.rows.select_columns(&self.block_columns(a)).rank() as u32
        })
    }

    pub fn caged_polymatroid(&self) -> Result<CagedPolymatroid> {
        CagedPolymatroid::new(self.polymatroid()?, self.cage.clone())
    }

    /// `codim_V(V ∩ St_s)`, the rank of the columns that `St_s` kills.
    pub fn stabilizer_codim(&self, s: &Multiset) -> u32 {
        self.rows.select_columns(&self.stabilizer_columns(s)).rank() as u32
    }

    /// Compares multiset ranks with codimensions over the whole cage box and
    /// returns the first disagreement.
    pub fn pg_violation(&self) -> Result<Option<PgWitness>> {
        let size = self.cage.box_size();
        if size > DEFAULT_ENUMERATION_BOUND {
            return Err(Error::TooLarge {
                what: "cage box",
                size,
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
        let c = self.caged_polymatroid()?;
        for s in self.cage.below() {
            let r = c.rank(&s)?;
            let codim = self.stabilizer_codim(&s);
            if r != codim {
                return Ok(Some(PgWitness {
                    s,
                    multiset_rank: r,
                    codim,
                }));
            }
        }
        Ok(None)
    }

    pub fn is_polymatroid_general(&self) -> Result<bool> {
        Ok(self.pg_violation()?.is_none())
    }

    /// Applies the block-diagonal map `v_i -> M_i v_i`.
    pub fn translate(&self, blocks: &[Matrix]) -> Result<RationalSubspace> {
        if blocks.len() != self.ground_size() {
            return Err(Error::DimensionMismatch(format!(
                "{} block matrices for {} blocks",
                blocks.len(),
                self.ground_size()
            )));
        }
        let width = self.cage.size() as usize;
        let mut full = Matrix::zeros(width, width);
        for (i, m) in blocks.iter().enumerate() {
            let n = self.cage.get(i) as usize;
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block {} needs a {n}x{n} matrix",
                    i + 1
                )));
            }
            let start = self.block_start(i);
            for r in 0..n {
                for col in 0..n {
                    full[(start + r, start + col)] = m[(r, col)].clone();
                }
            }
        }
        // rows are row vectors, so v -> M v becomes row -> row M^T
        let moved = self.rows.mul(&full.transpose())?;
        RationalSubspace::new(self.cage.clone(), moved)
    }

    /// Moves `V` by random invertible block-diagonal matrices until it is
    /// polymatroid general. `V` itself is returned if it already is.
    pub fn random_pg_translate(&self, seed: u64) -> Result<RationalSubspace> {
        if self.is_polymatroid_general()? {
            return Ok(self.clone());
        }
        let poly = self.polymatroid()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..DEFAULT_RETRY_LIMIT {
            let blocks: Vec<Matrix> = (0..self.ground_size())
                .map(|i| random_invertible(&mut rng, self.cage.get(i) as usize))
                .collect();
            let moved = self.translate(&blocks)?;
            assert_eq!(
                moved.polymatroid()?,
                poly,
                "block translates preserve the polymatroid"
            );
            if moved.is_polymatroid_general()? {
                return Ok(moved);
            }
        }
        Err(Error::RetryLimit(DEFAULT_RETRY_LIMIT))
    }

    /// Intersects `V` with the preimage of a random hyperplane in the blocks
    /// of `s`, retrying until the result realizes `T_S P` (and stays
    /// polymatroid general when `V` is).
    pub fn realize_truncation(&self, s: Mask, seed: u64) -> Result<RationalSubspace> {
        let poly = self.polymatroid()?;
        let target = truncate(&poly, s)?;
        let keep_pg = self.is_polymatroid_general()?;
        let cols = self.block_columns(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..DEFAULT_RETRY_LIMIT {
            let h: Vec<Q> = cols.iter().map(|_| random_entry(&mut rng)).collect();
            // h(x R) = x (R_S h)
            let c = self.rows.select_columns(&cols).apply(&h)?;
            if c.iter().all(Q::is_zero) {
                continue;
            }
            let functional = Matrix::from_rows(c.len(), vec![c])?;
            let kernel = functional.nullspace();
            let coeffs = Matrix::from_rows(self.dim(), kernel)?;
            let w = RationalSubspace::new(self.cage.clone(), coeffs.mul(&self.rows)?)?;
            if w.polymatroid()? != target {
                continue;
            }
            if keep_pg && !w.is_polymatroid_general()? {
                continue;
            }
            return Ok(w);
        }
        Err(Error::RetryLimit(DEFAULT_RETRY_LIMIT))
    }

    /// `π_{E \ A}(V)`, with the cage projected accordingly.
    pub fn project_away(&self, a: Mask) -> Result<RationalSubspace> {
        let keep = self.block_columns(!a & ((1u64 << self.ground_size()) - 1) as Mask);
        RationalSubspace::new(self.cage.project_out(a), self.rows.select_columns(&keep))
    }

    /// `V ∩ St_s` as rows in the ambient space.
    pub fn stabilizer_intersection(&self, s: &Multiset) -> Result<Matrix> {
        let killed = self.rows.select_columns(&self.stabilizer_columns(s));
        // x R has zero killed coordinates iff x lies in the left kernel of R_killed
        let kernel = killed.transpose().nullspace();
        let coeffs = Matrix::from_rows(self.dim(), kernel)?;
        Ok(coeffs.mul(&self.rows)?.rref().0)
    }

    /// `codim_V(V_{1,s_1} ∩ ... ∩ V_{N,s_N})` for every `s <= n`, where
    /// `V_{i,j} = V ∩ St_{j e_i}`, computed by explicit intersections. Entries
    /// follow the lexicographic order of the cage box.
    pub fn flag_ranks(&self) -> Result<Vec<u32>> {
        if let Some(w) = self.pg_violation()? {
            return Err(Error::NotPG { witness: w.s });
        }
        let n = self.ground_size();
        let flags: Vec<Vec<Matrix>> = (0..n)
            .map(|i| {
                (0..=self.cage.get(i))
                    .map(|j| {
                        let mut s = Multiset::zero(n);
                        s.set(i, j);
                        self.stabilizer_intersection(&s)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for s in self.cage.below() {
            let mut acc = self.rows.clone();
            for (i, flag) in flags.iter().enumerate() {
                acc = row_space_intersection(&acc, &flag[s.get(i) as usize])?;
            }
            out.push((self.dim() - acc.rows()) as u32);
        }
        Ok(out)
    }
}

fn random_entry(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-DEFAULT_COEFF_BOUND..=DEFAULT_COEFF_BOUND))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = random_entry(rng);
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}

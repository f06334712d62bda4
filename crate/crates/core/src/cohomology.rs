//! The graded ring with basis `y_s` indexed by combinatorial flats, where
//! `deg y_s = rank(s)` and products are governed by the cup product and a
//! choice of coefficients `c_b` on independent multisets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ComboFlatLattice, RankCube, DEFAULT_ENUMERATION_BOUND};
use crate::multiset::Multiset;
use crate::polymatroid::CagedPolymatroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    /// `c_b = prod binom(n_i, b_i)`.
    ConjecturalBinomial,
    /// `c_b = 1`.
    AllOnes,
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::ConjecturalBinomial => f.write_str("binomial"),
            CoeffMode::AllOnes => f.write_str("ones"),
        }
    }
}

pub fn coefficient(mode: CoeffMode, cage: &Multiset, b: &Multiset) -> BigRational {
    match mode {
        CoeffMode::AllOnes => BigRational::one(),
        CoeffMode::ConjecturalBinomial => {
            let mut c = BigInt::one();
            for i in 0..b.len() {
                c *= binomial(cage.get(i), b.get(i));
            }
            BigRational::from_integer(c)
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `closure(min(b + b', rk(i)))` for the greedy bases `b`, `b'`.
pub fn cup(c: &CagedPolymatroid, s: &Multiset, t: &Multiset) -> Result<Multiset> {
    for x in [s, t] {
        if !crate::lattice::is_flat(c, x)? {
            return Err(Error::NotAFlat(x.clone()));
        }
    }
    let b = c.basis_of(s)?;
    let b2 = c.basis_of(t)?;
    crate::lattice::closure(c, &clamped_sum(c, &b, &b2))
}

fn clamped_sum(c: &CagedPolymatroid, b: &Multiset, b2: &Multiset) -> Multiset {
    Multiset::new(
        (0..b.len())
            .map(|i| (b.get(i) + b2.get(i)).min(c.poly().element_rank(i)))
            .collect(),
    )
}

/// Every basis of `s`: independent `b <= s` with `|b| = rank(s)`, in
/// lexicographic order.
pub fn bases_of(cube: &RankCube, s: &Multiset) -> Vec<Multiset> {
    let r = cube.rank(s);
    s.below()
        .filter(|b| b.size() == r && cube.rank(b) == r)
        .collect()
}

/// The cup product computed from every pair of bases; a well-defined
/// product yields exactly one value.
pub fn cup_over_all_bases(
    c: &CagedPolymatroid,
    cube: &RankCube,
    s: &Multiset,
    t: &Multiset,
) -> Vec<Multiset> {
    let mut out: Vec<Multiset> = Vec::new();
    for b in bases_of(cube, s) {
        for b2 in bases_of(cube, t) {
            let u = cube.closure(&clamped_sum(c, &b, &b2));
            if !out.contains(&u) {
                out.push(u);
            }
        }
    }
    out
}

/// `y_s * y_t`: zero, or a scalar times a basis element (lattice index).
pub type Product = Option<(usize, BigRational)>;

#[derive(Clone, Debug)]
pub struct CohomologyRing {
    caged: CagedPolymatroid,
    lattice: ComboFlatLattice,
    mode: CoeffMode,
    table: Vec<Vec<Product>>,
}

impl CohomologyRing {
    /// Builds the multiplication table. When ranks add, every pair of bases
    /// `b`, `b'` with `b + b'` a basis of the cup product is examined and all
    /// must give the same scalar `c_{b+b'} / (c_b c_b')`.
    pub fn new(c: &CagedPolymatroid, mode: CoeffMode) -> Result<Self> {
        let cube = RankCube::new(c, DEFAULT_ENUMERATION_BOUND)?;
        let lattice = ComboFlatLattice::from_cube(&cube);
        let d = lattice.total_rank();
        let bases: Vec<Vec<Multiset>> = lattice
            .elements()
            .iter()
            .map(|s| bases_of(&cube, s))
            .collect();
        let cage = c.cage();
        let n = lattice.len();
        let mut table = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                let (rx, ry) = (lattice.rank_of(x), lattice.rank_of(y));
                if rx + ry > d {
                    continue;
                }
                let (s, t) = (lattice.element(x), lattice.element(y));
                let u = cube.closure(&clamped_sum(c, &bases[x][0], &bases[y][0]));
                if cube.rank(&u) != rx + ry {
                    continue;
                }
                let z = lattice.index_of(&u).expect("closures are flats");
                let mut scalar: Option<BigRational> = None;
                for b in &bases[x] {
                    for b2 in &bases[y] {
                        let sum = b.plus(b2);
                        if !sum.le(&u) || cube.rank(&sum) != sum.size() {
                            continue;
                        }
                        let q = coefficient(mode, cage, &sum)
                            / (coefficient(mode, cage, b) * coefficient(mode, cage, b2));
                        match &scalar {
                            None => scalar = Some(q),
                            Some(first) if *first != q => {
                                return Err(Error::InconsistentScalar {
                                    s: s.clone(),
                                    t: t.clone(),
                                    first: first.to_string(),
                                    second: q.to_string(),
                                });
                            }
                            Some(_) => {}
                        }
                    }
                }
                let Some(q) = scalar else {
                    return Err(Error::NoAdditiveBasisPair {
                        s: s.clone(),
                        t: t.clone(),
                        product: u,
                    });
                };
                table[x][y] = Some((z, q));
            }
        }
        Ok(CohomologyRing {
            caged: c.clone(),
            lattice,
            mode,
            table,
        })
    }

    pub fn lattice(&self) -> &ComboFlatLattice {
        &self.lattice
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn caged(&self) -> &CagedPolymatroid {
        &self.caged
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn product(&self, x: usize, y: usize) -> &Product {
        &self.table[x][y]
    }

    pub fn coefficient(&self, b: &Multiset) -> BigRational {
        coefficient(self.mode, self.caged.cage(), b)
    }

    /// Dimension of each graded piece.
    pub fn hilbert(&self) -> Vec<usize> {
        self.lattice.whitney()
    }

    fn times(&self, value: &Product, y: usize) -> Product {
        let (x, q) = value.as_ref()?;
        let (z, r) = self.table[*x][y].as_ref()?;
        Some((*z, q * r))
    }

    pub fn commutativity_violation(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.table[x][y] != self.table[y][x])
    }

    /// Triples with `(y_x y_y) y_z != y_x (y_y y_z)`; triples whose total
    /// degree exceeds the top degree are skipped, as both sides vanish.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let d = self.lattice.total_rank();
        let rank = |k: usize| self.lattice.rank_of(k);
        for x in 0..n {
            for y in 0..n {
                if rank(x) + rank(y) > d {
                    continue;
                }
                let xy = &self.table[x][y];
                for z in 0..n {
                    if rank(x) + rank(y) + rank(z) > d {
                        continue;
                    }
                    let left = self.times(xy, z);
                    let right = match &self.table[y][z] {
                        None => None,
                        Some((yz, q)) => self.table[x][*yz].as_ref().map(|(w, r)| (*w, q * r)),
                    };
                    if left != right {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Whether the bottom element acts as the identity.
    pub fn unit_violation(&self) -> Option<usize> {
        let bottom = 0;
        (0..self.len()).find(|&x| {
            self.table[bottom][x] != Some((x, BigRational::one()))
                || self.table[x][bottom] != Some((x, BigRational::one()))
        })
    }

    /// Products are zero or land in the sum of the degrees.
    pub fn grading_violation(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let rank = |k: usize| self.lattice.rank_of(k);
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| match &self.table[x][y] {
                None => false,
                Some((z, _)) => rank(*z) != rank(x) + rank(y),
            })
    }

    /// The monomial `x_1^{b_1} ... x_N^{b_N}` with `x_i = c_{e_i} y_{closure(e_i)}`,
    /// or zero when `e_i` is dependent.
    pub fn monomial(&self, b: &Multiset) -> Product {
        let mut acc: Product = Some((0, BigRational::one()));
        for i in 0..b.len() {
            if b.get(i) == 0 {
                continue;
            }
            let e = Multiset::unit(b.len(), i);
            if self.caged.poly().element_rank(i) == 0 {
                return None;
            }
            let flat = crate::lattice::closure(&self.caged, &e).expect("e_i lies in the cage");
            let k = self.lattice.index_of(&flat).expect("closure is a flat");
            let scale = self.coefficient(&e);
            for _ in 0..b.get(i) {
                acc = self.times(&acc, k).map(|(z, q)| (z, q * &scale));
            }
        }
        acc
    }

    /// Evaluates every monomial `b <= n` of degree at most the rank and checks
    /// the defining relations of the monomial presentation.
    pub fn check_presentation(&self) -> PresentationReport {
        let c = &self.caged;
        let d = c.total_rank();
        let mut report = PresentationReport {
            dependent_vanish: true,
            proportional: true,
            independent_value: true,
            witness: None,
        };
        let mut values: Vec<(Multiset, Multiset, Product)> = Vec::new();
        for b in c.cage().below().filter(|b| b.size() <= d) {
            let m = self.monomial(&b);
            let independent = c.poly().is_independent(&b);
            if !independent {
                if m.is_some() {
                    report.dependent_vanish = false;
                    report
                        .witness
                        .get_or_insert(format!("dependent {b} does not vanish"));
                }
                continue;
            }
            let flat = crate::lattice::closure(c, &b).expect("b lies in the cage");
            let k = self.lattice.index_of(&flat).expect("closure is a flat");
            if m != Some((k, self.coefficient(&b))) {
                report.independent_value = false;
                report
                    .witness
                    .get_or_insert(format!("monomial of {b} is not c_b y_{flat}"));
            }
            values.push((b, flat, m));
        }
        'outer: for (i, (b, fb, mb)) in values.iter().enumerate() {
            for (b2, fb2, mb2) in &values[i + 1..] {
                if fb != fb2 {
                    continue;
                }
                let lhs = mb.as_ref().map(|(z, q)| (*z, q * self.coefficient(b2)));
                let rhs = mb2.as_ref().map(|(z, q)| (*z, q * self.coefficient(b)));
                if lhs != rhs {
                    report.proportional = false;
                    report
                        .witness
                        .get_or_insert(format!("c_{b2} m_{b} != c_{b} m_{b2}"));
                    break 'outer;
                }
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    pub dependent_vanish: bool,
    pub proportional: bool,
    pub independent_value: bool,
    pub witness: Option<String>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.dependent_vanish && self.proportional && self.independent_value
    }
}

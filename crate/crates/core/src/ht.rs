//! The additive action of `K^n` on `P^n` through unipotent Toeplitz matrices
//! with Bell-polynomial entries, the compatible torus action, orbits,
//! stabilizers, and the embedding of a subspace into the open orbit.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, Matrix, Q};
use crate::multiset::Multiset;

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, m| acc * Q::from_integer(m.into()))
}

fn pow(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

/// The complete Bell polynomial
/// `B_k(x_1, ..., x_k) = sum k! prod_m (x_m / m!)^{j_m} / j_m!` over
/// `j_1 + 2 j_2 + ... + k j_k = k`.
pub fn bell(k: usize, xs: &[Q]) -> Q {
    assert!(
        xs.len() >= k,
        "bell polynomial of degree {k} needs {k} inputs"
    );
    let mut total = Q::zero();
    let mut counts = vec![0usize; k + 1];
    partitions(k, k, &mut counts, &mut |counts| {
        let mut term = Q::one();
        for m in 1..=k {
            let j = counts[m];
            if j > 0 {
                term *= pow(&(&xs[m - 1] / factorial(m)), j) / factorial(j);
            }
        }
        total += term;
    });
    total * factorial(k)
}

/// Calls `visit` with the multiplicities of every partition of `remaining`
/// into parts of size at most `largest`.
fn partitions(
    remaining: usize,
    largest: usize,
    counts: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(counts);
        return;
    }
    for part in (1..=largest.min(remaining)).rev() {
        counts[part] += 1;
        partitions(remaining - part, part, counts, visit);
        counts[part] -= 1;
    }
}

/// `ρ_n(a)` for `a = (a_1, ..., a_n)`: the `(n+1) x (n+1)` lower triangular
/// matrix with entry `B_{i-j}(1! a_1, ..., (i-j)! a_{i-j}) / (i-j)!`.
pub fn rho(a: &[Q]) -> Matrix {
    let n = a.len();
    let scaled: Vec<Q> = a
        .iter()
        .enumerate()
        .map(|(m, x)| x * factorial(m + 1))
        .collect();
    let diagonals: Vec<Q> = (0..=n).map(|k| bell(k, &scaled) / factorial(k)).collect();
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        if i >= j {
            diagonals[i - j].clone()
        } else {
            Q::zero()
        }
    })
}

/// `diag(1, t, t^2, ..., t^n)`.
pub fn lambda(n: usize, t: &Q) -> Result<Matrix> {
    if t.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let mut m = Matrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        m[(k, k)] = pow(t, k);
    }
    Ok(m)
}

/// `t · a = (t a_1, t^2 a_2, ..., t^n a_n)`.
pub fn weighted_rescale(a: &[Q], t: &Q) -> Vec<Q> {
    a.iter()
        .enumerate()
        .map(|(m, x)| x * pow(t, m + 1))
        .collect()
}

/// A point of `P^{n_1} × ... × P^{n_N}`, each factor scaled so that its
/// first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    factors: Vec<Vec<Q>>,
}

impl ProjectivePoint {
    pub fn new(factors: Vec<Vec<Q>>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for (i, f) in factors.into_iter().enumerate() {
            let Some(lead) = f.iter().find(|x| !x.is_zero()).cloned() else {
                return Err(Error::ZeroFactor(i));
            };
            out.push(f.into_iter().map(|x| x / &lead).collect());
        }
        Ok(ProjectivePoint { factors: out })
    }

    /// The torus-fixed point of the orbit indexed by `s`: factor `i` is the
    /// coordinate vector at position `n_i - s_i`.
    pub fn fixed_point(cage: &Multiset, s: &Multiset) -> Self {
        let factors = (0..cage.len())
            .map(|i| {
                let n = cage.get(i) as usize;
                let mut f = vec![Q::zero(); n + 1];
                f[n - s.get(i) as usize] = Q::one();
                f
            })
            .collect();
        ProjectivePoint { factors }
    }

    /// `([1:0:...:0], ..., [1:0:...:0])`, the fixed point of the open orbit.
    pub fn base_point(cage: &Multiset) -> Self {
        Self::fixed_point(cage, cage)
    }

    pub fn factors(&self) -> &[Vec<Q>] {
        &self.factors
    }

    /// Per factor, `n_i` minus the position of the first nonzero coordinate.
    pub fn orbit_index(&self) -> Multiset {
        Multiset::new(
            self.factors
                .iter()
                .map(|f| {
                    let first = f.iter().position(|x| !x.is_zero()).expect("canonical");
                    (f.len() - 1 - first) as u32
                })
                .collect(),
        )
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                let coords: Vec<String> = fac.iter().map(fmt_q).collect();
                format!("[{}]", coords.join(":"))
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

/// `a · p`, factor by factor `ρ_{n_i}(a_i) p_i`.
pub fn act(cage: &Multiset, a: &[Vec<Q>], p: &ProjectivePoint) -> Result<ProjectivePoint> {
    if a.len() != cage.len() || p.factors.len() != cage.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} blocks of parameters and {} factors for {} blocks",
            a.len(),
            p.factors.len(),
            cage.len()
        )));
    }
    let mut factors = Vec::with_capacity(a.len());
    for (i, (block, factor)) in a.iter().zip(&p.factors).enumerate() {
        let n = cage.get(i) as usize;
        if block.len() != n || factor.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "block {} has size {n}",
                i + 1
            )));
        }
        factors.push(rho(block).apply(factor)?);
    }
    ProjectivePoint::new(factors)
}

/// Dimension of the stabilizer `St_s`: `sum (n_i - s_i)`.
pub fn stabilizer_dim(cage: &Multiset, s: &Multiset) -> u32 {
    cage.size() - s.size()
}

/// Whether `a` lies in `St_s`: `a_{i,1} = ... = a_{i,s_i} = 0` for every `i`.
pub fn in_stabilizer(a: &[Vec<Q>], s: &Multiset) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, block)| block[..s.get(i) as usize].iter().all(Q::is_zero))
}

/// Splits a vector of `K^n` into its blocks.
pub fn split_blocks(cage: &Multiset, v: &[Q]) -> Result<Vec<Vec<Q>>> {
    if v.len() != cage.size() as usize {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a space of dimension {}",
            v.len(),
            cage.size()
        )));
    }
    let mut out = Vec::new();
    let mut start = 0;
    for &n in cage.entries() {
        out.push(v[start..start + n as usize].to_vec());
        start += n as usize;
    }
    Ok(out)
}

/// `ι(v) = ρ(v) · base point`, the first columns of the `ρ_{n_i}(v_i)`.
pub fn iota(cage: &Multiset, v: &[Q]) -> Result<ProjectivePoint> {
    let blocks = split_blocks(cage, v)?;
    act(cage, &blocks, &ProjectivePoint::base_point(cage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, q};

    /// `exp(N) = sum_k N^k / k!` for the nilpotent `N = sum_m a_m S^m`,
    /// with `S` the lower shift matrix.
    fn exp_oracle(a: &[Q]) -> Matrix {
        let n = a.len();
        let nil = Matrix::from_fn(n + 1, n + 1, |i, j| {
            if i > j {
                a[i - j - 1].clone()
            } else {
                Q::zero()
            }
        });
        let mut out = Matrix::identity(n + 1);
        let mut power = Matrix::identity(n + 1);
        for k in 1..=n {
            power = power.mul(&nil).unwrap();
            let scale = factorial(k).recip();
            let term = Matrix::from_fn(n + 1, n + 1, |i, j| &power[(i, j)] * &scale);
            out = Matrix::from_fn(n + 1, n + 1, |i, j| &out[(i, j)] + &term[(i, j)]);
        }
        out
    }

    #[test]
    fn small_bell_polynomials() {
        let xs = [q(2), q(3), q(5)];
        assert_eq!(bell(0, &[]), q(1));
        assert_eq!(bell(1, &xs), q(2));
        // x1^2 + x2
        assert_eq!(bell(2, &xs), q(7));
        // x1^3 + 3 x1 x2 + x3
        assert_eq!(bell(3, &xs), q(8 + 18 + 5));
    }

    #[test]
    fn rho_of_degree_two() {
        let a = [frac(1, 3), q(2)];
        let m = rho(&a);
        let expect = Matrix::from_rows(
            3,
            vec![
                vec![q(1), q(0), q(0)],
                vec![frac(1, 3), q(1), q(0)],
                vec![frac(1, 18) + q(2), frac(1, 3), q(1)],
            ],
        )
        .unwrap();
        assert_eq!(m, expect);
        assert_eq!(rho(&[q(0), q(0), q(0)]), Matrix::identity(4));
    }

    #[test]
    fn rho_is_the_exponential() {
        let a = [frac(1, 2), q(-3), frac(2, 7), q(5)];
        assert_eq!(rho(&a), exp_oracle(&a));
    }

    #[test]
    fn torus_conjugation() {
        let t = q(2);
        let a = [q(1), q(1)];
        let l = lambda(2, &t).unwrap();
        let conj = l.mul(&rho(&a)).unwrap().mul(&l.inverse().unwrap()).unwrap();
        assert_eq!(conj, rho(&[q(2), q(4)]));
        assert_eq!(weighted_rescale(&a, &t), vec![q(2), q(4)]);
        assert_eq!(lambda(3, &q(1)).unwrap(), Matrix::identity(4));
        assert!(matches!(lambda(2, &q(0)), Err(Error::ZeroScalar)));
    }

    #[test]
    fn torus_fixes_coordinate_points() {
        let cage = Multiset::new(vec![3]);
        let l = lambda(3, &q(5)).unwrap();
        for s in 0..=3 {
            let p = ProjectivePoint::fixed_point(&cage, &Multiset::new(vec![s]));
            let moved = ProjectivePoint::new(vec![l.apply(&p.factors()[0]).unwrap()]).unwrap();
            assert_eq!(moved, p);
        }
    }

    #[test]
    fn action_on_base_point() {
        let cage = Multiset::new(vec![2]);
        let p = ProjectivePoint::base_point(&cage);
        let a = vec![vec![q(3), q(1)]];
        let moved = act(&cage, &a, &p).unwrap();
        assert_eq!(moved.factors()[0], vec![q(1), q(3), frac(9, 2) + q(1)]);
        let zero = vec![vec![q(0), q(0)]];
        assert_eq!(act(&cage, &zero, &p).unwrap(), p);
    }

    #[test]
    fn orbit_indices() {
        let cage = Multiset::new(vec![2, 2]);
        assert_eq!(ProjectivePoint::base_point(&cage).orbit_index(), cage);
        let p = ProjectivePoint::new(vec![vec![q(0), q(0), q(4)], vec![q(0), q(2), q(1)]]).unwrap();
        assert_eq!(p.orbit_index(), Multiset::new(vec![0, 1]));
        assert_eq!(p.factors()[1], vec![q(0), q(1), frac(1, 2)]);
        assert!(matches!(
            ProjectivePoint::new(vec![vec![q(0), q(0)]]),
            Err(Error::ZeroFactor(0))
        ));
    }

    #[test]
    fn stabilizers() {
        let cage = Multiset::new(vec![3]);
        let s = Multiset::new(vec![2]);
        let p = ProjectivePoint::new(vec![vec![q(0), q(1), q(7), q(-2)]]).unwrap();
        assert_eq!(p.orbit_index(), s);
        let inside = vec![vec![q(0), q(0), q(9)]];
        assert!(in_stabilizer(&inside, &s));
        assert_eq!(act(&cage, &inside, &p).unwrap(), p);
        let outside = vec![vec![q(0), q(1), q(9)]];
        assert!(!in_stabilizer(&outside, &s));
        assert_ne!(act(&cage, &outside, &p).unwrap(), p);
        assert_eq!(stabilizer_dim(&cage, &s), 1);
    }

    #[test]
    fn iota_parametrization() {
        // V = rowspan((1,0,1,1), (0,1,1,-1)) in K^(2,2); (u, v) -> (u, v, u+v, u-v)
        let cage = Multiset::new(vec![2, 2]);
        let (u, v) = (frac(2, 3), q(-5));
        let point = vec![u.clone(), v.clone(), &u + &v, &u - &v];
        let p = iota(&cage, &point).unwrap();
        let half = frac(1, 2);
        let w = &u + &v;
        assert_eq!(p.factors()[0], vec![q(1), u.clone(), &v + &half * &u * &u]);
        assert_eq!(
            p.factors()[1],
            vec![q(1), w.clone(), &u - &v + &half * &w * &w]
        );
        assert_eq!(p.orbit_index(), cage);
        assert_eq!(
            iota(&cage, &[q(0), q(0), q(0), q(0)]).unwrap(),
            ProjectivePoint::base_point(&cage)
        );
    }

    #[test]
    fn iota_on_a_line_uses_bell_values() {
        let cage = Multiset::new(vec![3]);
        let u = frac(3, 2);
        let p = iota(&cage, &[u.clone(), u.clone(), u.clone()]).unwrap();
        let xs = [u.clone(), &u * q(2), &u * q(6)];
        let expect: Vec<Q> = (0..=3).map(|k| bell(k, &xs) / factorial(k)).collect();
        assert_eq!(p.factors()[0], expect);
        assert_eq!(p.factors()[0][2], &u + &u * &u / q(2));
    }
}

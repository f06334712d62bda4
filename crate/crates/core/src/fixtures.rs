//! Small named instances used throughout the tests, the CLI and the docs.

use crate::error::Mask;
use crate::multiset::Multiset;
use crate::polymatroid::{CagedPolymatroid, Polymatroid};
use crate::realization::RationalSubspace;

/// Three planes through a common line in a 3-space plus a line in none of
/// them: `rk(S) = 3 - dim of the intersection of the V_i, i in S`.
pub fn intro_example() -> Polymatroid {
    Polymatroid::from_fn(4, |m: Mask| {
        let planes = m & 0b0111;
        let has_line = m & 0b1000 != 0;
        match (planes.count_ones(), has_line) {
            (0, false) => 0,
            (1, false) => 1,
            (_, false) => 2,
            (0, true) => 2,
            (_, true) => 3,
        }
    })
    .expect("intro example is a polymatroid")
}

/// The intro example caged by `(1, 1, 1, 2)`.
pub fn intro_example_caged() -> CagedPolymatroid {
    CagedPolymatroid::new(intro_example(), Multiset::new(vec![1, 1, 1, 2]))
        .expect("tight cage of the intro example")
}

/// Two copies of the zero subspace in a plane: `rk = 2` on every nonempty
/// set, caged by `(2, 2)`.
pub fn doubled_point() -> CagedPolymatroid {
    let p = Polymatroid::from_fn(2, |m| if m == 0 { 0 } else { 2 }).expect("valid");
    CagedPolymatroid::new(p, Multiset::new(vec![2, 2])).expect("valid cage")
}

/// The polymatroid of rank `n` on one element; its lattice is a chain.
pub fn chain(n: u32) -> Polymatroid {
    Polymatroid::free(&Multiset::new(vec![n]))
}

/// The free matroid on `k` elements; its lattice is Boolean.
pub fn boolean(k: usize) -> Polymatroid {
    Polymatroid::free(&Multiset::new(vec![1; k]))
}

/// A realization of the intro example in `Q^1 × Q^1 × Q^1 × Q^2`: the
/// columns are `(1,0,0), (0,1,0), (1,1,0)` and the pair `(0,0,1), (1,2,3)`.
pub fn intro_subspace() -> RationalSubspace {
    RationalSubspace::from_int_rows(
        &[1, 1, 1, 2],
        &[&[1, 0, 1, 0, 1], &[0, 1, 1, 0, 2], &[0, 0, 0, 1, 3]],
    )
    .expect("five columns")
}

use proptest::prelude::*;

use comboflats::cohomology::{cup, CoeffMode, CohomologyRing};
use comboflats::ht::{
    act, in_stabilizer, iota, lambda, rho, split_blocks, stabilizer_dim, weighted_rescale,
    ProjectivePoint,
};
use comboflats::io::{
    parse_subspace, serialize_polymatroid, serialize_subspace, LatticeFile, PolymatroidFile,
};
use comboflats::lattice::{closure, join, meet, RankCube, DEFAULT_ENUMERATION_BOUND};
use comboflats::linalg::{frac, Q};
use comboflats::ops::{simplify_by, truncate};
use comboflats::random::{random_instance, random_instance_of, Family, RandomParams};
use comboflats::suite::{self, run_suite, Prepared};
use comboflats::{ComboFlatLattice, Multiset};

fn params() -> RandomParams {
    RandomParams::default()
}

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (prop_oneof![-30i64..=-1, 1i64..=30], 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn whole_suite_holds(seed in any::<u64>()) {
        let inst = random_instance(seed, &params()).unwrap();
        let report = run_suite(&inst, seed).unwrap();
        prop_assert!(report.passed(), "seed {}:\n{}", seed, report);
    }

    #[test]
    fn polymatroid_files_round_trip(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let text = serialize_polymatroid(c.poly(), Some(c.cage()));
        let parsed = PolymatroidFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed.polymatroid().unwrap(), c.poly());
        prop_assert_eq!(parsed.cage.as_ref(), Some(c.cage()));
        prop_assert_eq!(serialize_polymatroid(&parsed.polymatroid().unwrap(), parsed.cage.as_ref()), text);
    }

    #[test]
    fn subspace_files_round_trip(seed in any::<u64>()) {
        let v = random_instance_of(Family::Subspace, seed, &params()).unwrap().subspace.unwrap();
        let text = serialize_subspace(&v);
        prop_assert_eq!(&parse_subspace(&text).unwrap(), &v);
    }

    #[test]
    fn lattice_files_round_trip(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let l = ComboFlatLattice::enumerate(&c).unwrap();
        let file = LatticeFile::parse(&comboflats::io::serialize_lattice(&l)).unwrap();
        let parsed = comboflats::AbstractGradedLattice::from_relations(file.labels, &file.covers).unwrap();
        prop_assert!(parsed.is_isomorphic(&l.to_abstract().unwrap()));
    }

    #[test]
    fn truncation_depends_only_on_the_closure(seed in any::<u64>(), pick in any::<u32>()) {
        let p = random_instance(seed, &params()).unwrap().caged.into_parts().0;
        prop_assume!(p.total_rank() > 0);
        let positive: Vec<u32> = (1..=p.ground_mask()).filter(|&s| p.rank(s) > 0).collect();
        let s = positive[pick as usize % positive.len()];
        prop_assert_eq!(truncate(&p, s).unwrap(), truncate(&p, p.closure(s)).unwrap());
    }

    #[test]
    fn every_simplification_order_ends_in_the_same_place(
        seed in any::<u64>(),
        picks in proptest::collection::vec(any::<usize>(), 32),
    ) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let (first, _) = simplify_by(&c, |e| e[0]);
        let mut k = 0;
        let (other, _) = simplify_by(&c, |e| {
            k += 1;
            e[picks[k % picks.len()] % e.len()]
        });
        prop_assert!(other.poly().isomorphism_to(first.poly()).is_some());
        let a = ComboFlatLattice::enumerate(&first).unwrap().to_abstract().unwrap();
        let b = ComboFlatLattice::enumerate(&other).unwrap().to_abstract().unwrap();
        prop_assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn cup_is_independent_of_bases(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let p = Prepared::new(&c).unwrap();
        prop_assert_eq!(suite::cup_well_defined(&p).unwrap(), None);
    }

    #[test]
    fn cup_bounds(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let cube = RankCube::new(&c, DEFAULT_ENUMERATION_BOUND).unwrap();
        let l = ComboFlatLattice::from_cube(&cube);
        for s in l.elements() {
            for t in l.elements() {
                let u = cup(&c, s, t).unwrap();
                prop_assert!(cube.is_flat(&u));
                prop_assert!(s.meet(t) <= u);
                prop_assert!(cube.rank(&u) <= cube.rank(s) + cube.rank(t));
                prop_assert_eq!(&u, &cup(&c, t, s).unwrap());
            }
        }
    }

    #[test]
    fn matroids_multiply_by_joins(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let (p, _) = c.into_parts();
        prop_assume!(p.is_matroid());
        let m = comboflats::CagedPolymatroid::tight(p);
        let ring = CohomologyRing::new(&m, CoeffMode::ConjecturalBinomial).unwrap();
        let l = ring.lattice();
        for x in 0..l.len() {
            for y in 0..l.len() {
                if let Some((z, q)) = ring.product(x, y) {
                    prop_assert_eq!(q, &frac(1, 1));
                    let j = join(&m, l.element(x), l.element(y)).unwrap();
                    prop_assert_eq!(l.element(*z), &j);
                }
            }
        }
    }

    #[test]
    fn joins_and_meets_are_flats(seed in any::<u64>()) {
        let c = random_instance(seed, &params()).unwrap().caged;
        let l = ComboFlatLattice::enumerate(&c).unwrap();
        for s in l.elements() {
            for t in l.elements() {
                let j = join(&c, s, t).unwrap();
                let m = meet(&c, s, t).unwrap();
                prop_assert!(l.contains(&j) && l.contains(&m));
                prop_assert!(s <= &j && t <= &j && &m <= s && &m <= t);
                prop_assert_eq!(&j, &closure(&c, &s.max(t)).unwrap());
            }
        }
    }

    #[test]
    fn projection_preserves_generality(seed in any::<u64>()) {
        let inst = random_instance_of(Family::Subspace, seed, &params()).unwrap();
        let v = inst.subspace.unwrap().random_pg_translate(seed).unwrap();
        prop_assert!(v.is_polymatroid_general().unwrap());
        for a in 0..(1u32 << v.ground_size()) {
            prop_assert!(v.project_away(a).unwrap().is_polymatroid_general().unwrap());
        }
    }

    #[test]
    fn truncation_realizations_match(seed in any::<u64>(), pick in any::<u32>()) {
        let inst = random_instance_of(Family::Subspace, seed, &params()).unwrap();
        let v = inst.subspace.unwrap().random_pg_translate(seed).unwrap();
        let p = v.polymatroid().unwrap();
        prop_assume!(p.total_rank() > 0);
        let positive: Vec<u32> = (1..=p.ground_mask()).filter(|&s| p.rank(s) > 0).collect();
        let s = positive[pick as usize % positive.len()];
        let w = v.realize_truncation(s, seed).unwrap();
        prop_assert_eq!(w.polymatroid().unwrap(), truncate(&p, s).unwrap());
        prop_assert!(w.is_polymatroid_general().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho_is_a_homomorphism(
        n in 1usize..=6,
        a in proptest::collection::vec(rational(), 6),
        b in proptest::collection::vec(rational(), 6),
    ) {
        let (a, b) = (&a[..n], &b[..n]);
        let sum: Vec<Q> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(rho(a).mul(&rho(b)).unwrap(), rho(&sum));
        prop_assert_eq!(rho(a).mul(&rho(b)).unwrap(), rho(b).mul(&rho(a)).unwrap());
    }

    #[test]
    fn torus_normalizes_the_action(
        n in 1usize..=6,
        a in proptest::collection::vec(rational(), 6),
        t in nonzero_rational(),
    ) {
        let a = &a[..n];
        let l = lambda(n, &t).unwrap();
        let conj = l.mul(&rho(a)).unwrap().mul(&l.inverse().unwrap()).unwrap();
        prop_assert_eq!(conj, rho(&weighted_rescale(a, &t)));
    }

    #[test]
    fn orbits_are_invariant(
        cage in proptest::collection::vec(1u32..=3, 1..=3),
        s_seed in proptest::collection::vec(any::<u32>(), 3),
        a in proptest::collection::vec(rational(), 9),
    ) {
        let cage = Multiset::new(cage);
        let s = Multiset::new((0..cage.len()).map(|i| s_seed[i] % (cage.get(i) + 1)).collect());
        let blocks = split_blocks(&cage, &a[..cage.size() as usize]).unwrap();
        let fixed = ProjectivePoint::fixed_point(&cage, &s);
        let moved = act(&cage, &blocks, &fixed).unwrap();
        prop_assert_eq!(moved.orbit_index(), s.clone());
        let again = act(&cage, &blocks, &moved).unwrap();
        prop_assert_eq!(again.orbit_index(), s.clone());
        if in_stabilizer(&blocks, &s) {
            prop_assert_eq!(moved, fixed);
        }
        prop_assert_eq!(stabilizer_dim(&cage, &s), cage.size() - s.size());
    }

    #[test]
    fn iota_is_injective(
        cage in proptest::collection::vec(1u32..=3, 1..=3),
        u in proptest::collection::vec(rational(), 9),
        v in proptest::collection::vec(rational(), 9),
    ) {
        let cage = Multiset::new(cage);
        let k = cage.size() as usize;
        let (u, v) = (&u[..k], &v[..k]);
        let pu = iota(&cage, u).unwrap();
        let pv = iota(&cage, v).unwrap();
        prop_assert_eq!(pu == pv, u == v);
        prop_assert_eq!(pu.orbit_index(), cage);
    }
}

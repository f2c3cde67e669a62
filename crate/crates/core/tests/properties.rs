//! Property tests. The generator seed comes from `QGW_SEED` (default fixed),
//! so runs are reproducible.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use qgw::cyclo::{euler_phi, CycNum};
use qgw::groups::{dihedral_order, function_algebra, make_group, GroupKind};
use qgw::hopf::{haar_state, HopfAlgebraData};
use qgw::linalg::SparseVec;
use qgw::o2sym::{branch, dinf_tame_mult, induced_mult, DInfWord, InducingModule, IrrO2, O2Subgroup, Param, SubIrr};
use qgw::qgw1::Coeff;
use qgw::twist::{dihedral_minus_one_full, twist, DihedralTwist};

const DEFAULT_SEED: u64 = 0x9e37_79b9;

fn config(cases: u32) -> Config {
    let seed = std::env::var("QGW_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn cyc(order: u32) -> impl Strategy<Value = CycNum> {
    let n = euler_phi(order);
    prop::collection::vec((-6i64..=6, 1i64..=4), n).prop_map(move |cs| {
        let coeffs = cs.into_iter().map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect();
        CycNum::from_coeffs(order, coeffs).unwrap()
    })
}

fn field_triple() -> impl Strategy<Value = (u32, CycNum, CycNum, CycNum)> {
    prop::sample::select(vec![4u32, 8, 12]).prop_flat_map(|o| (Just(o), cyc(o), cyc(o), cyc(o)))
}

fn element(dim: usize, order: u32) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec((0..dim, cyc(order)), 1..4).prop_map(SparseVec::from_pairs)
}

fn twisted_elements() -> impl Strategy<Value = (usize, Vec<SparseVec>)> {
    (1usize..=4).prop_flat_map(|half| {
        let k = 2 * half;
        (Just(k), prop::collection::vec(element(2 * k, dihedral_order(k)), 3))
    })
}

fn twisted(k: usize) -> &'static DihedralTwist {
    static CACHE: OnceLock<Vec<DihedralTwist>> = OnceLock::new();
    let all = CACHE.get_or_init(|| [2usize, 4, 6, 8].iter().map(|&k| dihedral_minus_one_full(k).unwrap()).collect());
    &all[k / 2 - 1]
}

fn comult_of_product(h: &HopfAlgebraData, x: &SparseVec, y: &SparseVec) -> bool {
    h.comult_of(&h.mul(x, y)) == h.tensor_mul(&h.comult_of(x), &h.comult_of(y))
}

fn sub_dim(p: SubIrr) -> usize {
    if let SubIrr::DTwo(_) = p {
        2
    } else {
        1
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn cyclotomic_field_axioms((order, a, b, c) in field_triple()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        let up = a.promote(order * 2).unwrap();
        prop_assert_eq!(up.demote(order), Some(a.clone()));
    }

    #[test]
    fn coefficient_serialization_round_trips(a in cyc(12)) {
        let text = serde_json::to_string(&Coeff::encode(&a)).unwrap();
        let back: Coeff = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.decode(12).unwrap(), a);
    }

    #[test]
    fn o2_restriction_preserves_dimension(m in 1usize..60, k in 1usize..30, dihedral in any::<bool>()) {
        let target = if dihedral { O2Subgroup::Dihedral(Param::Finite(k)) } else { O2Subgroup::Cyclic(Param::Finite(k)) };
        let parts = branch(IrrO2::V(m), target);
        prop_assert_eq!(parts.iter().map(|(p, n)| sub_dim(*p) * n).sum::<usize>(), 2);
    }

    #[test]
    fn induced_alpha_has_frobenius_shape(k in 1usize..20, cutoff in 1usize..40) {
        // Ind_{C_k} ℂ contains V_t with multiplicity 2 when k | t, and no other V.
        let m = induced_mult(O2Subgroup::Cyclic(Param::Finite(k)), InducingModule::Trivial, cutoff).unwrap();
        prop_assert_eq!((m.triv, m.sgn), (1, 1));
        for t in 1..=cutoff {
            prop_assert_eq!(m.v[t - 1], if t % k == 0 { 2 } else { 0 });
        }
    }

    #[test]
    fn tame_vectors_match_induction(half in 1usize..20, l_half in 0usize..10, cutoff in 1usize..30) {
        let k = 2 * half;
        let l = 2 * l_half + 1;
        prop_assume!(l <= k / 2);
        let tame = dinf_tame_mult(Param::Finite(k), l, cutoff).unwrap();
        let induced = induced_mult(O2Subgroup::Dihedral(Param::Finite(k)), InducingModule::M2(l), cutoff).unwrap();
        prop_assert_eq!(tame, induced);
    }

    #[test]
    fn infinite_dihedral_group_axioms(a in (-20i64..20, any::<bool>()), b in (-20i64..20, any::<bool>()), c in (-20i64..20, any::<bool>())) {
        let [a, b, c] = [a, b, c].map(|(m, eps)| DInfWord { m, eps });
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&a.inv()), DInfWord::ONE);
        prop_assert_eq!(DInfWord::G1.mul(&DInfWord::G1), DInfWord::ONE);
        prop_assert_eq!(DInfWord::G2.mul(&DInfWord::G2), DInfWord::ONE);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn twisted_structure_on_random_elements((k, xs) in twisted_elements()) {
        let d = twisted(k);
        let h = &d.hopf;
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(h.mul(&h.mul(x, y), z), h.mul(x, &h.mul(y, z)));
        prop_assert!(comult_of_product(h, x, y));
        prop_assert_eq!(h.star_of(&h.mul(x, y)), h.mul(&h.star_of(y), &h.star_of(x)));
        prop_assert_eq!(h.antipode_of(&h.mul(x, y)), h.mul(&h.antipode_of(y), &h.antipode_of(x)));
        // Haar state: invariant and positive on x*x.
        let haar = haar_state(h).unwrap();
        let collapsed = SparseVec::from_pairs(h.comult_of(x).into_iter().map(|(a, b, c)| (b, &c * &haar.eval(&h.basis(a)))));
        prop_assert_eq!(collapsed, h.one().scale(&haar.eval(x)));
        let norm = haar.eval(&h.mul(&h.star_of(x), x));
        prop_assert!(norm.to_complex_f64().0 >= 0.0);
        prop_assert!(norm.is_conj_fixed());
    }

    #[test]
    fn twist_then_untwist_is_identity(half in 1usize..=4) {
        let d = twisted(2 * half);
        let back = twist(&d.hopf, &d.cocycle.inverse_on(&d.hopf)).unwrap();
        prop_assert_eq!(&back.algebra.mult, &d.classical.algebra.mult);
        let f = function_algebra(&make_group(GroupKind::Dihedral(2 * half)), dihedral_order(2 * half));
        prop_assert_eq!(&f.algebra.mult, &d.classical.algebra.mult);
    }
}

use proptest::prelude::*;
use superform::fock::{representation_check, rho, FockVariant};
use superform::group::{act, random_matrix, random_pair, seeded_rng};
use superform::invariants::{relation_check, signature};
use superform::superalgebra::oscillator_algebra;
use superform::superspace::{
    make_standard_gram, parity_reverse, standard_even_block, standard_odd_block, Flavor,
};
use superform::uea::{Strategy as Order, Uea, UeaElement};
use superform::{ExactScalar, Matrix};

fn gaussian() -> impl Strategy<Value = ExactScalar> {
    (-40i64..=40, -40i64..=40, 1i64..=9).prop_map(|(a, b, d)| {
        ExactScalar::ratio(a, d) + ExactScalar::i() * ExactScalar::ratio(b, d)
    })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|ell| (1..=7 - 2 * ell, Just(2 * ell)))
}

fn oscillator_uea(c: &str) -> Uea {
    let b = Matrix::parse(&[&[c], &["0"]]).unwrap();
    let g = make_standard_gram(b, Flavor::SkewSupersymmetric).unwrap();
    Uea::new(oscillator_algebra(&g).unwrap())
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..5, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sqrt_of_a_square_is_in_c_plus(z in gaussian()) {
        prop_assume!(!z.is_zero());
        let sq = &z * &z;
        let r = sq.sqrt_cplus().unwrap();
        prop_assert!(r.in_c_plus());
        prop_assert!(r == z || r == -z.clone());
        prop_assert_eq!(&r * &r, sq);
    }

    #[test]
    fn scalars_round_trip_through_text(z in gaussian()) {
        let back: ExactScalar = z.to_string().parse().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn field_laws(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_invariant((k, two_ell) in shape(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let b = random_matrix(k, two_ell, &mut rng);
        let t = random_pair(k, two_ell, &mut rng).unwrap();
        let c = act(&b, &t).unwrap();
        prop_assert_eq!(signature(&b).unwrap(), signature(&c).unwrap());
        prop_assert_eq!(relation_check(&b).unwrap(), 1);
    }

    #[test]
    fn standard_forms_have_standard_blocks((k, two_ell) in shape(), seed in any::<u64>(), skew in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let flavor = if skew { Flavor::SkewSupersymmetric } else { Flavor::Supersymmetric };
        let b = random_matrix(k, two_ell, &mut rng);
        let b = if skew { b.transpose() } else { b };
        let g = make_standard_gram(b, flavor).unwrap();
        prop_assert!(g.is_standard());
        prop_assert_eq!(g.even_block(), &standard_even_block::<ExactScalar>(flavor, g.even_dim(), ()));
        prop_assert_eq!(g.odd_block(), &standard_odd_block::<ExactScalar>(flavor, g.odd_dim(), ()));
        let full = g.gram_matrix();
        let sign = ExactScalar::from(if skew { -1 } else { 1 });
        // the lower block mirrors the coupling with the flavor's sign
        for i in 0..g.odd_dim() {
            for j in 0..g.even_dim() {
                prop_assert_eq!(&full[(g.even_dim() + i, j)], &(&sign * &full[(j, g.even_dim() + i)]));
            }
        }
        // reversing twice flips the sign of the odd part
        let back = parity_reverse(&parity_reverse(&g).unwrap()).unwrap();
        prop_assert_eq!(back.flavor(), flavor);
        prop_assert_eq!(back.even_block(), g.even_block());
        prop_assert_eq!(back.odd_block(), g.odd_block());
        prop_assert_eq!(back.coupling(), &g.coupling().neg());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_ordering_is_confluent(w in prop::collection::vec(0usize..5, 3), c in prop::sample::select(vec!["0", "1"])) {
        let left = oscillator_uea(c);
        let right = oscillator_uea(c).with_strategy(Order::Rightmost);
        prop_assert_eq!(left.word(&w), right.word(&w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_associative(u in word(), v in word(), w in word()) {
        let alg = oscillator_uea("1");
        let (u, v, w) = (alg.word(&u), alg.word(&v), alg.word(&w));
        let lhs = alg.normal_product(&alg.normal_product(&u, &v), &w);
        let rhs = alg.normal_product(&u, &alg.normal_product(&v, &w));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn super_jacobi(x in word(), y in word(), z in word()) {
        let alg = oscillator_uea("1");
        let par = |w: &UeaElement| i64::from(alg.parity(w).unwrap().unwrap_or(0));
        let (x, y, z) = (alg.word(&x), alg.word(&y), alg.word(&z));
        prop_assume!(!x.is_zero() && !y.is_zero() && !z.is_zero());
        let br = |a: &UeaElement, b: &UeaElement| alg.super_bracket(a, b).unwrap();
        let sign = |a: &UeaElement, b: &UeaElement| {
            ExactScalar::from(if par(a) * par(b) % 2 == 0 { 1 } else { -1 })
        };
        let total = br(&x, &br(&y, &z))
            .scale(&sign(&x, &z))
            .add(&br(&y, &br(&z, &x)).scale(&sign(&y, &x)))
            .add(&br(&z, &br(&x, &y)).scale(&sign(&z, &y)));
        prop_assert!(total.is_zero(), "{}", alg.format(&total));
    }

    #[test]
    fn fock_generators_respect_parity(n in 2usize..9, inhom in any::<bool>()) {
        let variant = if inhom { FockVariant::Inhomogeneous } else { FockVariant::Homogeneous };
        for g in ["b1", "b2", "a", "K", "kappa"] {
            prop_assert!(rho(g, n, variant).unwrap().is_parity_consistent(), "{g}");
        }
    }
}

#[test]
fn fock_checks_stay_clean_as_truncation_grows() {
    for (c, variant) in [("0", FockVariant::Homogeneous), ("1", FockVariant::Inhomogeneous)] {
        let uea = oscillator_uea(c);
        for n in 2..=9 {
            let report = representation_check(uea.algebra(), variant, n).unwrap();
            assert!(report.is_ok(), "{variant} N = {n}: {:?}", report.defects);
        }
    }
}

#[test]
fn b1_annihilates_the_vacuum() {
    use superform::fock::FockBasisVector;
    for variant in [FockVariant::Homogeneous, FockVariant::Inhomogeneous] {
        let b1 = rho("b1", 6, variant).unwrap();
        assert!(b1.apply(FockBasisVector { n: 0, e: 0, f: 0 }).is_empty(), "{variant}");
    }
}

use super::*;
use crate::group::{act, random_pair, seeded_rng};

fn m(rows: &[&[&str]]) -> Matrix<ExactScalar> {
    Matrix::parse(rows).unwrap()
}

fn s(t: &str) -> ExactScalar {
    t.parse().unwrap()
}

fn label(tag: Tag) -> CanonicalLabel {
    CanonicalLabel::new(tag).unwrap()
}

fn all_labels() -> Vec<CanonicalLabel> {
    let mut out: Vec<CanonicalLabel> = Tag::ALL
        .iter()
        .filter(|t| **t != Tag::B2)
        .map(|&t| label(t))
        .collect();
    for a in ["2", "1+i", "i", "1/3"] {
        out.push(CanonicalLabel::b2(s(a)).unwrap());
    }
    out
}

#[test]
fn canonical_blocks_are_fixed_points() {
    for l in all_labels() {
        let b = canonical_matrix(&l).unwrap();
        let d = classify(&b).unwrap();
        assert_eq!(d.parts, vec![l.clone()], "{l}");
        assert!(d.witness.is_exact());
        assert_eq!(d.residual, 0.0);
    }
}

#[test]
fn irrational_alpha_uses_approximate_witness() {
    let l = CanonicalLabel::b2_squared(s("2")).unwrap();
    assert!(canonical_matrix(&l).is_err());
    assert_eq!(l.to_string(), "B2(alpha^2=2)");
    // sum of squared pair determinants is 2, so alpha = sqrt 2
    let b = m(&[&["1", "0"], &["0", "1"], &["0", "1"]]);
    let d = classify(&b).unwrap();
    assert_eq!(d.parts, vec![l, label(Tag::TrivEven)]);
    assert!(!d.witness.is_exact());
    assert!(d.residual <= 1e-30);
    assert!(matches!(classify_with(&b, Mode::Exact), Err(Error::IrrationalRoot(_))));
}

#[test]
fn forced_approximate_mode() {
    let b = m(&[&["1", "1"], &["1", "-1"]]);
    let exact = classify(&b).unwrap();
    assert_eq!(exact.parts, vec![CanonicalLabel::b2_squared(s("4")).unwrap()]);
    assert!(exact.witness.is_exact());
    let approx = classify_with(&b, Mode::Approx(ApproxContext::default())).unwrap();
    assert_eq!(approx.parts, exact.parts);
    assert!(!approx.witness.is_exact());
    assert!(approx.residual <= 1e-30);
}

#[test]
fn reducible_two_by_two() {
    let d = classify(&m(&[&["1", "0"], &["0", "0"]])).unwrap();
    assert_eq!(d.parts, vec![label(Tag::B1), label(Tag::TrivEven)]);
    assert_eq!(d.residual, 0.0);
}

#[test]
fn conjugated_b5_is_recognized() {
    let b5 = canonical_matrix(&label(Tag::B5)).unwrap();
    let mut rng = seeded_rng(11);
    for _ in 0..5 {
        let t = random_pair(3, 4, &mut rng).unwrap();
        let d = classify(&act(&b5, &t).unwrap()).unwrap();
        assert_eq!(d.parts, vec![label(Tag::B5)]);
        assert_eq!(d.residual, 0.0);
    }
}

#[test]
fn equivalence_decisions() {
    let b2 = canonical_matrix(&CanonicalLabel::b2(s("2")).unwrap()).unwrap();
    let b3 = canonical_matrix(&label(Tag::B3)).unwrap();
    assert!(!equivalent(&b2, &b3).unwrap());
    let mut rng = seeded_rng(5);
    let t = random_pair(2, 2, &mut rng).unwrap();
    assert!(equivalent(&b2, &act(&b2, &t).unwrap()).unwrap());
    let b6 = canonical_matrix(&label(Tag::B6)).unwrap();
    let b4_plus = juxtaposition_in::<ExactScalar>(&[label(Tag::B4), label(Tag::TrivEven)], ()).unwrap();
    assert!(!equivalent(&b6, &b4_plus).unwrap());
    assert!(equivalent(&b2, &b6).is_err());
}

#[test]
fn out_of_range_is_rejected() {
    let big = Matrix::zeros(4, 4, ());
    assert!(matches!(classify(&big), Err(Error::OutOfRange(_))));
}

#[test]
fn vector_reduction_examples() {
    let ctx = ApproxContext::default();
    let VectorReduction::Exact(v, x) = reduce_vector(&[s("3"), s("4")], ctx).unwrap() else {
        panic!("3-4-5 is exact");
    };
    assert_eq!(v, vec![s("5"), s("0")]);
    assert_eq!(x.mul_vec(&[s("3"), s("4")]), v);
    let VectorReduction::Exact(v, x) = reduce_vector(&[s("1"), s("i")], ctx).unwrap() else {
        panic!("exact");
    };
    assert_eq!(v, vec![s("1"), s("i")]);
    assert_eq!(x, Matrix::identity(2, ()));
    let b = [s("2"), s("2*i"), s("0")];
    let VectorReduction::Exact(v, x) = reduce_vector(&b, ctx).unwrap() else {
        panic!("exact");
    };
    assert_eq!(v, vec![s("1"), s("i"), s("0")]);
    assert!(crate::group::is_orthogonal(&x));
    let b = [s("0"), s("1"), s("-i")];
    let VectorReduction::Exact(v, x) = reduce_vector(&b, ctx).unwrap() else {
        panic!("exact");
    };
    assert_eq!(v, vec![s("1"), s("i"), s("0")]);
    assert_eq!(x.mul_vec(&b), v);
    let VectorReduction::Approx(v, x) = reduce_vector(&[s("1"), s("1")], ctx).unwrap() else {
        panic!("sqrt 2 is irrational");
    };
    assert!(crate::group::is_orthogonal(&x));
    assert!(v[1].is_zero());
}

#[test]
fn anisotropic_search() {
    let b2 = canonical_matrix(&CanonicalLabel::b2(s("2")).unwrap()).unwrap();
    assert_eq!(find_anisotropic_combination(&b2), Some(vec![s("1"), s("0")]));
    let b3 = canonical_matrix(&label(Tag::B3)).unwrap();
    assert_eq!(find_anisotropic_combination(&b3), None);
    let b = m(&[&["1", "1"], &["i", "-i"]]);
    assert_eq!(find_anisotropic_combination(&b), Some(vec![s("1"), s("1")]));
}

#[test]
fn dimension_bound() {
    assert!(dimension_bound_check(1, 1));
    assert!(!dimension_bound_check(5, 1));
    assert!(!dimension_bound_check(1, 2));
    for l in all_labels().iter().filter(|l| !l.is_trivial()) {
        let (k, two_ell) = l.dims();
        assert!(dimension_bound_check(k, two_ell / 2), "{l}");
    }
}

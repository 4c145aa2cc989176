//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use superform::fock::{osp_action_check, representation_check, FockVariant};
use superform::group::{act, is_orthogonal, random_matrix, random_pair, seeded_rng, TransformPair};
use superform::invariants::{coeff, isotropy_check, p_coeff_formula, p_coeff_sign, p_poly, relation_check, signature};
use superform::reduction::{
    canonical_matrix, classify, classify_with, equivalent, juxtaposition_in, reduce_vector, CanonicalLabel, Mode,
    Tag, VectorReduction, Witness,
};
use superform::superalgebra::oscillator_algebra;
use superform::superspace::{make_standard_gram, normalize_gram, Flavor, GramForm, Normalization};
use superform::uea::{
    adjoint_ideal_check, bracket_table, cocycle_from_table, osp_generators, standard_trivializing_map,
    triviality_check, BracketTable, OspMap, Uea,
};
use superform::{ApproxContext, ApproxScalar, ExactScalar, Matrix};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn s(t: &str) -> ExactScalar {
    t.parse().unwrap()
}

fn label(t: Tag) -> CanonicalLabel {
    CanonicalLabel::new(t).unwrap()
}

fn b2(a: &str) -> CanonicalLabel {
    CanonicalLabel::b2(s(a)).unwrap()
}

fn representatives() -> Vec<CanonicalLabel> {
    vec![
        label(Tag::B1),
        b2("2"),
        b2("1+i"),
        b2("i"),
        label(Tag::B3),
        label(Tag::B4),
        label(Tag::B5),
        label(Tag::B6),
    ]
}

/// Shapes `(k, 2l)` with `k, l >= 1` and `k + 2l <= 7`.
fn shapes() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for ell in 1..=3 {
        for k in 1..=7 - 2 * ell {
            out.push((k, 2 * ell));
        }
    }
    out
}

fn timed(limit: Duration, start: Instant, detail: String) -> Check {
    let t = start.elapsed();
    if t > limit {
        Err(format!("{detail}; took {t:.2?} > {limit:?}"))
    } else {
        Ok(format!("{detail}; {t:.2?}"))
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for l in representatives() {
        let d = classify_with(&canonical_matrix(&l).unwrap(), Mode::Exact).map_err(|e| format!("{l}: {e}"))?;
        if d.parts != [l.clone()] {
            return Err(format!("{l} classified as {:?}", d.parts));
        }
    }
    timed(Duration::from_secs(1), start, "8 canonical blocks classify to themselves".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = seeded_rng(2);
    for l in representatives() {
        let b = canonical_matrix(&l).unwrap();
        let (k, two_ell) = b.shape();
        for _ in 0..100 {
            let t = random_pair(k, two_ell, &mut rng).unwrap();
            let c = act(&b, &t).unwrap();
            let d = classify_with(&c, Mode::Exact).map_err(|e| format!("{l}: {e}"))?;
            if d.parts != [l.clone()] || d.parts[0].alpha_squared() != l.alpha_squared() {
                return Err(format!("conjugate of {l} classified as {:?}", d.parts));
            }
            if d.residual != 0.0 {
                return Err(format!("{l}: residual {}", d.residual));
            }
        }
    }
    timed(Duration::from_secs(60), start, "800 exact conjugations, residual 0".into())
}

fn criterion_3() -> Check {
    let mut rng = seeded_rng(3);
    let mut n = 0;
    for (k, two_ell) in shapes() {
        for _ in 0..100 {
            let b = random_matrix(k, two_ell, &mut rng);
            let t = random_pair(k, two_ell, &mut rng).unwrap();
            let (s1, s2) = (signature(&b).unwrap(), signature(&act(&b, &t).unwrap()).unwrap());
            if s1.p_coeffs != s2.p_coeffs || s1.rank != s2.rank || s1.isotropic_columns != s2.isotropic_columns {
                return Err(format!("invariants moved for\n{b}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} triples over {} shapes", shapes().len()))
}

/// `det(m)` at `λ = t` for `m(λ) = a + λ c`.
fn det_at(a: &Matrix<ExactScalar>, c: &Matrix<ExactScalar>, t: i64) -> ExactScalar {
    a.add(&c.scale(&ExactScalar::from(t))).determinant()
}

fn criterion_4() -> Check {
    let mut rng = seeded_rng(4);
    let mut odd_k = 0;
    for i in 0..200 {
        let (k, two_ell) = shapes()[i % shapes().len()];
        let b = random_matrix(k, two_ell, &mut rng);
        if relation_check(&b).map_err(|e| e.to_string())? != 1 {
            return Err(format!("relation sign -1 for\n{b}"));
        }
        // oracle: λ^k Q(λ) = λ^(2l) P(-λ) at 2l + k + 1 integer points
        let j = superform::matrix::symplectic_unit::<ExactScalar>(two_ell, ());
        let btb = b.transpose().mul(&b);
        let m = b.mul(&j).mul(&b.transpose());
        for t in 1..=(k + two_ell + 1) as i64 {
            let q = det_at(&btb, &j.neg(), t);
            let p = det_at(&m, &Matrix::identity(k, ()), t);
            let lhs = &ExactScalar::from(t).pow(k as u32) * &q;
            let rhs = &ExactScalar::from(t).pow(two_ell as u32) * &p;
            if lhs != rhs {
                return Err(format!("oracle disagrees at λ = {t} for\n{b}"));
            }
        }
        odd_k += k % 2;
    }
    Ok(format!(
        "200 matrices, global sign +1; the printed sign (-1)^k differs on the {odd_k} odd-k cases"
    ))
}

/// Coefficient of `λ^j` in `det(m - λI)` by exact interpolation.
fn interpolated_coeff(m: &Matrix<ExactScalar>, j: usize) -> ExactScalar {
    let k = m.rows();
    let pts: Vec<i64> = (0..=k as i64).collect();
    let vander = Matrix::from_fn(k + 1, k + 1, |r, c| ExactScalar::from(pts[r]).pow(c as u32));
    let values: Vec<ExactScalar> = pts.iter().map(|&t| det_at(m, &Matrix::identity(k, ()).neg(), t)).collect();
    vander.inverse().unwrap().mul_vec(&values)[j].clone()
}

fn criterion_5() -> Check {
    let mut rng = seeded_rng(5);
    let mut n = 0;
    while n < 200 {
        let (k, two_ell) = shapes()[n % shapes().len()];
        if k < 2 {
            let k = 2 + n % 3;
            let b = random_matrix(k, 2, &mut rng);
            check_inv2(&b)?;
        } else {
            check_inv2(&random_matrix(k, two_ell, &mut rng))?;
        }
        n += 1;
    }
    let p1 = |b: &Matrix<ExactScalar>| p_coeff_formula(b).unwrap();
    let b4 = canonical_matrix(&label(Tag::B4)).unwrap();
    if !p1(&b4).is_zero() {
        return Err("p1(B4) != 0".into());
    }
    for a in ["2", "1+i", "i", "1/3"] {
        let orbit3 = Matrix::parse(&[&["1", "0"], &["0", a], &["0", "0"]]).unwrap();
        if p1(&orbit3) != s(a).pow(2) {
            return Err(format!("p1 of the reducible 3x2 matrix with alpha = {a} is not alpha^2"));
        }
    }
    Ok("200 matrices, sign (-1)^k; p1(B4) = 0, p1 = alpha^2 on the reducible 3x2 shape".into())
}

fn check_inv2(b: &Matrix<ExactScalar>) -> Result<(), String> {
    let k = b.rows();
    let p = p_poly(b).unwrap();
    let c = coeff(&p, k - 2).unwrap().clone();
    let formula = p_coeff_formula(b).map_err(|e| e.to_string())?;
    let sign = ExactScalar::from(i64::from(p_coeff_sign(k)));
    let m = b.mul(&superform::matrix::symplectic_unit(b.cols(), ())).mul(&b.transpose());
    if formula != &sign * &c || c != interpolated_coeff(&m, k - 2) {
        return Err(format!("pair-determinant formula fails for\n{b}"));
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut labels = representatives();
    labels.extend([b2("3"), b2("1/3"), b2("2-i"), b2("2*i")]);
    let mut pairs = 0;
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            if a.dims() != b.dims() {
                continue;
            }
            if equivalent(&canonical_matrix(a).unwrap(), &canonical_matrix(b).unwrap()).unwrap() {
                return Err(format!("{a} ~ {b}"));
            }
            pairs += 1;
        }
    }
    // -alpha lies outside C+ and lands on the same orbit as alpha
    let minus = Matrix::parse(&[&["1", "0"], &["0", "-1-i"]]).unwrap();
    if !equivalent(&minus, &canonical_matrix(&b2("1+i")).unwrap()).unwrap() {
        return Err("diag(1, -1-i) should match B2(alpha=1+i)".into());
    }
    let b6 = canonical_matrix(&label(Tag::B6)).unwrap();
    let b4_plus = juxtaposition_in::<ExactScalar>(&[label(Tag::B4), label(Tag::TrivEven)], ()).unwrap();
    if equivalent(&b6, &b4_plus).unwrap() || !isotropy_check(&b6) || isotropy_check(&b4_plus) {
        return Err("B6 vs B4 + TrivEven not separated by isotropy".into());
    }
    Ok(format!("{pairs} same-shape pairs distinct; B6 isotropic, B4 + TrivEven not"))
}

fn criterion_7() -> Check {
    let mut rng = seeded_rng(7);
    let mut violating = Vec::new();
    for k in 0..=7usize {
        for two_ell in (0..=7 - k).step_by(2) {
            let ell = two_ell / 2;
            if k + two_ell == 0 || (ell <= k && k <= 4 * ell) {
                continue;
            }
            violating.push((k, two_ell));
        }
    }
    // (1|0) and (0|2) carry no coupling block; the form is one trivial summand
    violating.retain(|&(k, t)| k + t > 2 || (k, t) == (2, 0));
    let mut n = 0;
    for &(k, two_ell) in &violating {
        for _ in 0..100 {
            let b = random_matrix(k, two_ell, &mut rng);
            let d = classify(&b).map_err(|e| format!("{k}x{two_ell}: {e}"))?;
            if d.parts.len() < 2 {
                return Err(format!("{k}x{two_ell} gave {:?} for\n{b}", d.parts));
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} matrices over {} violating shapes split; (1|0) and (0|2) excluded (no coupling block)",
        violating.len()
    ))
}

fn osp_table(c: &str) -> (Uea, BracketTable) {
    let b = Matrix::parse(&[&[c], &["0"]]).unwrap();
    let alg = oscillator_algebra(&make_standard_gram(b, Flavor::SkewSupersymmetric).unwrap()).unwrap();
    let uea = Uea::new(alg).with_central_unit("K").unwrap();
    let table = bracket_table(&uea, &osp_generators(&uea).unwrap()).unwrap();
    (uea, table)
}

const H: usize = 0;
const EP: usize = 1;
const EM: usize = 2;
const FP: usize = 3;
const FM: usize = 4;
const KAPPA: usize = 5;

fn coords(terms: &[(&str, usize)]) -> Vec<ExactScalar> {
    let mut v = vec![ExactScalar::zero(); 10];
    for (c, i) in terms {
        v[*i] = s(c);
    }
    v
}

fn check_entries(table: &BracketTable, expected: &[(usize, usize, Vec<ExactScalar>)]) -> Result<(), String> {
    for (i, j, v) in expected {
        if table.entry(*i, *j) != v.as_slice() {
            return Err(format!("entry ({i}, {j}) is {:?}", table.entry(*i, *j)));
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    let (_, t) = osp_table("0");
    let expected = vec![
        (H, EP, coords(&[("1", EP)])),
        (H, EM, coords(&[("-1", EM)])),
        (EP, EM, coords(&[("2", H)])),
        (H, FP, coords(&[("1/2", FP)])),
        (H, FM, coords(&[("-1/2", FM)])),
        (FP, FM, coords(&[("1/2", H)])),
        (EP, FM, coords(&[("-1", FP)])),
        (EM, FP, coords(&[("-1", FM)])),
        (FP, FP, coords(&[("1/2", EP)])),
        (FM, FM, coords(&[("-1/2", EM)])),
    ];
    check_entries(&t, &expected)?;
    let listed: Vec<(usize, usize)> = expected.iter().map(|(i, j, _)| (*i, *j)).collect();
    for i in 0..5 {
        for j in i..5 {
            if !listed.contains(&(i, j)) && t.entry(i, j).iter().any(|c| !c.is_zero()) {
                return Err(format!("unlisted bracket ({i}, {j}) is nonzero"));
            }
        }
    }
    Ok("all printed homogeneous brackets reproduced, unlisted ones vanish".into())
}

fn criterion_9() -> Check {
    let (uea, t) = osp_table("1");
    let expected = vec![
        (H, EP, coords(&[("1", EP)])),
        (H, EM, coords(&[("-1", EM)])),
        (EM, FM, coords(&[("1", KAPPA + EM)])),
        (H, FP, coords(&[("1/2", FP), ("1/2", KAPPA + EP)])),
        (EP, EM, coords(&[("2", H)])),
        (H, FM, coords(&[("-1/2", FM), ("1/2", KAPPA + H)])),
        (FP, FM, coords(&[("1/2", H), ("-1/2", KAPPA + FP)])),
        (EP, FM, coords(&[("-1", FP)])),
        (FP, FP, coords(&[("1/2", EP)])),
        (EM, FP, coords(&[("-1", FM), ("-1", KAPPA + H)])),
        (FM, FM, coords(&[("-1/2", EM), ("-1", KAPPA + FM)])),
    ];
    check_entries(&t, &expected)?;
    let kappa = uea.generator_named("kappa").unwrap();
    if !uea.normal_product(&kappa, &kappa).is_zero() {
        return Err("kappa^2 != 0".into());
    }
    if !adjoint_ideal_check(&t) {
        return Err("M is not an abelian ideal with the adjoint action".into());
    }
    Ok("all printed deformed brackets reproduced; kappa^2 = 0; M abelian with adjoint action".into())
}

fn criterion_10() -> Check {
    let (_, t) = osp_table("1");
    let gamma = cocycle_from_table(&t).unwrap();
    let report = triviality_check(&gamma, &standard_trivializing_map());
    if !report.is_trivial() {
        return Err(format!("{} defects for the standard f", report.defects.len()));
    }
    let zero: OspMap = std::array::from_fn(|_| vec![ExactScalar::zero(); 5]);
    let failing: Vec<(usize, usize)> =
        triviality_check(&gamma, &zero).defects.iter().map(|d| (d.a, d.b)).collect();
    let mut nonzero = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            if gamma.gamma[a][b].iter().any(|c| !c.is_zero()) {
                nonzero.push((a, b));
            }
        }
    }
    if failing != nonzero {
        return Err(format!("f = 0 fails on {failing:?}, gamma nonzero on {nonzero:?}"));
    }
    Ok(format!("25/25 pairs pass; f = 0 fails exactly on the {} pairs with gamma != 0", nonzero.len()))
}

fn criterion_11() -> Check {
    let start = Instant::now();
    for (c, variant) in [("0", FockVariant::Homogeneous), ("1", FockVariant::Inhomogeneous)] {
        let (uea, table) = osp_table(c);
        let rep = representation_check(uea.algebra(), variant, 8).unwrap();
        let gens = osp_generators(&uea).unwrap();
        let osp = osp_action_check(&uea, &gens, &table, variant, 8).unwrap();
        if !rep.is_ok() || !osp.is_ok() {
            return Err(format!("{variant}: {:?} {:?}", rep.defects, osp.defects));
        }
    }
    timed(Duration::from_secs(10), start, "N = 8, both variants, no defects".into())
}

fn replay_classification(b: &Matrix<ExactScalar>, ctx: ApproxContext) -> Result<f64, String> {
    let d = classify(b).map_err(|e| e.to_string())?;
    match &d.witness {
        Witness::Exact(t) => {
            let target = juxtaposition_in::<ExactScalar>(&d.parts, ()).map_err(|e| e.to_string())?;
            let ok = act(b, t).unwrap() == target && TransformPair::new(t.x.clone(), t.y.clone()).is_ok();
            Ok(if ok { 0.0 } else { f64::INFINITY })
        }
        Witness::Approx(t) => {
            let target = juxtaposition_in::<ApproxScalar>(&d.parts, ctx).map_err(|e| e.to_string())?;
            let image = act(&b.to_approx(ctx), t).unwrap();
            let (rx, ry) = t.residuals();
            Ok(image.max_relative_distance(&target).max(rx).max(ry))
        }
    }
}

fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix<ExactScalar> {
    loop {
        let m = random_matrix(n, n, rng);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn criterion_12() -> Check {
    let ctx = ApproxContext::default();
    let mut rng = seeded_rng(12);
    let (mut exact, mut approx, mut worst) = (0, 0, 0.0f64);
    for i in 0..300 {
        let (k, two_ell) = shapes()[i % shapes().len()];
        let b = random_matrix(k, two_ell, &mut rng);
        let r = replay_classification(&b, ctx)?;
        if r > 0.0 || !classify(&b).unwrap().witness.is_exact() {
            approx += 1;
        } else {
            exact += 1;
        }
        worst = worst.max(r);
        if r > 1e-30 {
            return Err(format!("classification witness residual {r:e} for\n{b}"));
        }
    }
    let mut normalized = (0, 0);
    for i in 0..200 {
        let (k, two_ell) = shapes()[i % shapes().len()];
        let flavor = if i % 2 == 0 { Flavor::Supersymmetric } else { Flavor::SkewSupersymmetric };
        let b = random_matrix(k, two_ell, &mut rng);
        let b = if flavor == Flavor::Supersymmetric { b } else { b.transpose() };
        let g = make_standard_gram(b, flavor).unwrap();
        let (m, n) = (g.even_dim(), g.odd_dim());
        let scramble = Matrix::block_diag(&[random_invertible(m, &mut rng), random_invertible(n, &mut rng)], ());
        let scrambled = scramble.transpose().mul(&g.gram_matrix()).mul(&scramble);
        let g2 = GramForm::from_full(flavor, m, &scrambled).unwrap();
        match normalize_gram(&g2, ctx).map_err(|e| e.to_string())? {
            Normalization::Exact(nz) => {
                let w = nz.witness();
                if w.transpose().mul(&scrambled).mul(&w) != nz.form.gram_matrix() || !nz.form.is_standard() {
                    return Err("exact normalization witness does not replay".into());
                }
                normalized.0 += 1;
            }
            Normalization::Approx(nz) => {
                let w = nz.witness();
                let image = w.transpose().mul(&scrambled.to_approx(ctx)).mul(&w);
                let r = image.max_relative_distance(&nz.form.gram_matrix());
                worst = worst.max(r);
                if r > 1e-30 || !nz.form.is_standard() {
                    return Err(format!("approximate normalization residual {r:e}"));
                }
                normalized.1 += 1;
            }
        }
    }
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let v: Vec<ExactScalar> = random_matrix(1, k, &mut rng).row(0);
        match reduce_vector(&v, ctx).map_err(|e| e.to_string())? {
            VectorReduction::Exact(out, x) => {
                if x.mul_vec(&v) != out || !is_orthogonal(&x) {
                    return Err("vector reduction witness does not replay".into());
                }
            }
            VectorReduction::Approx(out, x) => {
                let image = Matrix::from_columns(&[x.mul_vec(&v.iter().map(|c| c.to_approx(ctx)).collect::<Vec<_>>())], k, ctx);
                let r = image.max_relative_distance(&Matrix::from_columns(&[out], k, ctx));
                worst = worst.max(r);
                if r > 1e-30 {
                    return Err(format!("vector reduction residual {r:e}"));
                }
            }
        }
    }
    Ok(format!(
        "classify {exact} exact / {approx} approx, normalize {} exact / {} approx, 100 vector reductions; worst {worst:.1e}",
        normalized.0, normalized.1
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 12] = [
        ("classification table", criterion_1),
        ("orbit stability", criterion_2),
        ("invariance", criterion_3),
        ("Q/P relation", criterion_4),
        ("pair-determinant coefficient", criterion_5),
        ("distinct orbits", criterion_6),
        ("dimension bound", criterion_7),
        ("osp(1|2) table", criterion_8),
        ("deformed brackets", criterion_9),
        ("trivial extension", criterion_10),
        ("Fock modules", criterion_11),
        ("witness soundness", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

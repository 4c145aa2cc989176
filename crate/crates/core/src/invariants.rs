//! Orbit invariants of a coupling block `B` (shape `k x 2l`) under
//! `B -> XᵀBY`, `X` orthogonal and `Y` symplectic.
//!
//! * `P_B(t) = det(B J Bᵀ - t I_k)`; every coefficient is invariant.
//! * `Q_B(t) = det(BᵀB - t J)`, tied to `P_B` by
//!   `Q_B(t) = t^(2l-k) P_B(-t)` (no extra `(-1)^k` factor; the sign is
//!   checked rather than assumed, see [`relation_check`]).
//! * rank of `B`, and whether `BᵀB = 0` (every column combination is
//!   isotropic).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{symplectic_unit, Matrix, Poly};
use crate::scalar::{ExactScalar, Scalar};

fn check_even_cols<S: Scalar>(b: &Matrix<S>) -> Result<()> {
    if !b.cols().is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "coupling block needs an even number of columns, got {}",
            b.cols()
        )));
    }
    Ok(())
}

fn j_for<S: Scalar>(b: &Matrix<S>) -> Matrix<S> {
    symplectic_unit(b.cols(), b.context())
}

/// `B J Bᵀ`, the antisymmetric `k x k` matrix behind `P_B`.
pub fn bjbt<S: Scalar>(b: &Matrix<S>) -> Matrix<S> {
    b.mul(&j_for(b)).mul(&b.transpose())
}

/// Coefficients of `P_B`, highest degree first (`k + 1` entries).
pub fn p_poly<S: Scalar>(b: &Matrix<S>) -> Result<Poly<S>> {
    check_even_cols(b)?;
    // det(M - tI) = (-1)^k det(tI - M)
    let mut p = bjbt(b).charpoly();
    if b.rows() % 2 == 1 {
        p = p.into_iter().map(|c| -c).collect();
    }
    Ok(p)
}

/// Coefficients of `Q_B`, highest degree first (`2l + 1` entries).
pub fn q_poly<S: Scalar>(b: &Matrix<S>) -> Result<Poly<S>> {
    check_even_cols(b)?;
    // det(BᵀB - tJ) = det(J) det(-J BᵀB - t) = det(t + J BᵀB) since det J = 1
    // and the size is even.
    let jbtb = j_for(b).mul(&b.transpose()).mul(b);
    Ok(jbtb.neg().charpoly())
}

/// Coefficient of `t^j` in a degree-descending polynomial.
pub fn coeff<S: Scalar>(p: &[S], j: usize) -> Option<&S> {
    p.len().checked_sub(j + 1).map(|i| &p[i])
}

fn reflect<S: Scalar>(p: &[S]) -> Poly<S> {
    // p(-t): flip the sign of odd-degree coefficients
    let deg = p.len() - 1;
    p.iter()
        .enumerate()
        .map(|(i, c)| if (deg - i) % 2 == 1 { -c.clone() } else { c.clone() })
        .collect()
}

/// Multiplies by `t^shift`.
fn shift<S: Scalar>(p: &[S], by: usize) -> Poly<S> {
    let ctx = p[0].context();
    let mut out = p.to_vec();
    out.extend(std::iter::repeat_with(|| S::zero(ctx)).take(by));
    out
}

/// Finds `s` in `{+1, -1}` with `Q_B(t) = s t^(2l-k) P_B(-t)`.
///
/// When `2l < k` both sides are multiplied by `t^(k-2l)` first. Failure
/// for both signs means an arithmetic bug and is reported as
/// [`Error::Verification`].
pub fn relation_check<S: Scalar>(b: &Matrix<S>) -> Result<i8> {
    let (k, two_ell) = b.shape();
    let p = reflect(&p_poly(b)?);
    let q = q_poly(b)?;
    let (lhs, rhs) = if two_ell >= k {
        (q, shift(&p, two_ell - k))
    } else {
        (shift(&q, k - two_ell), p)
    };
    if lhs == rhs {
        return Ok(1);
    }
    if lhs.iter().zip(&rhs).all(|(a, b)| a.clone() + b.clone() == S::zero(a.context())) {
        return Ok(-1);
    }
    Err(Error::Verification(format!(
        "Q_B and P_B(-t) unrelated for B =\n{b}"
    )))
}

/// `sum_{s1 < s2} (R_s1 J R_s2ᵀ)^2` over the rows `R` of `B`.
///
/// Evaluated twice, from row products and from paired-column 2x2 minors;
/// a mismatch is reported as [`Error::Verification`].
pub fn p_coeff_formula<S: Scalar>(b: &Matrix<S>) -> Result<S> {
    check_even_cols(b)?;
    let k = b.rows();
    if k < 2 {
        return Err(Error::Invalid(format!("needs at least two rows, got {k}")));
    }
    let ctx = b.context();
    let m = bjbt(b);
    let mut by_rows = S::zero(ctx);
    let mut by_minors = S::zero(ctx);
    for s1 in 0..k {
        for s2 in s1 + 1..k {
            let r = m[(s1, s2)].clone();
            by_rows = by_rows + r.clone() * r;
            let mut pairs = S::zero(ctx);
            for i in 0..b.cols() / 2 {
                let (c1, c2) = (2 * i, 2 * i + 1);
                pairs = pairs + b[(s1, c1)].clone() * b[(s2, c2)].clone()
                    - b[(s1, c2)].clone() * b[(s2, c1)].clone();
            }
            by_minors = by_minors + pairs.clone() * pairs;
        }
    }
    if by_rows != by_minors {
        return Err(Error::Verification("pair-determinant expansions disagree".into()));
    }
    Ok(by_rows)
}

/// Sign `s(k)` with `p_coeff_formula(B) = s(k) * [t^(k-2)] P_B`.
///
/// For antisymmetric `M` the `t^(k-2)` coefficient of `det(tI - M)` is the
/// sum of squared off-diagonal entries, so `s(k) = (-1)^k`.
pub fn p_coeff_sign(k: usize) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `BᵀB = 0`.
pub fn isotropy_check<S: Scalar>(b: &Matrix<S>) -> bool {
    b.transpose().mul(b).is_zero()
}

/// The invariants bundled for reporting and classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSignature {
    pub k: usize,
    pub two_ell: usize,
    /// `P_B`, highest degree first.
    pub p_coeffs: Vec<ExactScalar>,
    pub rank: usize,
    pub isotropic_columns: bool,
    /// `P_B(0) = det(B J Bᵀ)`.
    pub p0: ExactScalar,
    /// `Q_B(0) = det(BᵀB)`.
    pub q0: ExactScalar,
}

pub fn signature(b: &Matrix<ExactScalar>) -> Result<InvariantSignature> {
    let p_coeffs = p_poly(b)?;
    let p0 = p_coeffs.last().cloned().unwrap_or_else(ExactScalar::one);
    Ok(InvariantSignature {
        k: b.rows(),
        two_ell: b.cols(),
        p0,
        q0: b.transpose().mul(b).determinant(),
        rank: b.rank(),
        isotropic_columns: isotropy_check(b),
        p_coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::poly_eval;

    fn m(rows: &[&[&str]]) -> Matrix<ExactScalar> {
        Matrix::parse(rows).unwrap()
    }

    fn s(t: &str) -> ExactScalar {
        t.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| ExactScalar::from(x)).collect()
    }

    /// `det(M - tI)` at enough points, interpolated independently of
    /// the Berkowitz recursion.
    fn interpolated(mat: &Matrix<ExactScalar>) -> Vec<ExactScalar> {
        let n = mat.rows();
        let pts: Vec<ExactScalar> = (0..=n as i64).map(ExactScalar::from).collect();
        let vals: Vec<ExactScalar> = pts
            .iter()
            .map(|t| mat.sub(&Matrix::identity(n, ()).scale(t)).determinant())
            .collect();
        // Vandermonde solve, degree-descending unknowns
        let v = Matrix::from_fn(n + 1, n + 1, |i, j| pts[i].pow((n - j) as u32));
        let inv = v.inverse().unwrap();
        inv.mul_vec(&vals)
    }

    #[test]
    fn p_poly_examples() {
        assert_eq!(p_poly(&m(&[&["1", "0"]])).unwrap(), ints(&[-1, 0]));
        let b2 = m(&[&["1", "0"], &["0", "1+i"]]);
        let alpha2 = s("1+i") * s("1+i");
        assert_eq!(p_poly(&b2).unwrap(), vec![s("1"), s("0"), alpha2]);
        assert_eq!(p_poly(&m(&[&["1", "0"], &["i", "0"]])).unwrap(), ints(&[1, 0, 0]));
    }

    #[test]
    fn p_poly_matches_interpolation() {
        let b = m(&[&["1", "2", "0", "i"], &["0", "1/2", "1", "1"], &["i", "0", "-1", "3"]]);
        assert_eq!(p_poly(&b).unwrap(), interpolated(&bjbt(&b)));
    }

    #[test]
    fn q_poly_examples() {
        // det([[1, -t], [t, 0]]) = t^2
        assert_eq!(q_poly(&m(&[&["1", "0"]])).unwrap(), ints(&[1, 0, 0]));
        assert_eq!(q_poly(&m(&[&["0", "0"]])).unwrap(), ints(&[1, 0, 0]));
        let b2 = m(&[&["1", "0"], &["0", "2"]]);
        assert_eq!(q_poly(&b2).unwrap(), ints(&[1, 0, 4]));
        // direct evaluation of det(BᵀB - tJ) at a few points
        let b = m(&[&["1", "i", "2", "0"], &["0", "1", "1/3", "1"], &["2", "0", "1", "i"]]);
        let q = q_poly(&b).unwrap();
        let j: Matrix<ExactScalar> = symplectic_unit(4, ());
        for t in 0..5 {
            let t = ExactScalar::from(t);
            let direct = b.transpose().mul(&b).sub(&j.scale(&t)).determinant();
            assert_eq!(poly_eval(&q, &t), direct);
        }
    }

    #[test]
    fn relation_sign_is_plus_one() {
        assert_eq!(relation_check(&m(&[&["1", "0"]])).unwrap(), 1);
        assert_eq!(relation_check(&m(&[&["1", "0"], &["0", "3"]])).unwrap(), 1);
        let tall = m(&[&["1", "0"], &["0", "1"], &["0", "i"], &["2", "1"]]);
        assert_eq!(relation_check(&tall).unwrap(), 1);
    }

    #[test]
    fn coefficient_formula_examples() {
        let b4 = m(&[&["1", "0"], &["0", "1"], &["0", "i"]]);
        assert!(p_coeff_formula(&b4).unwrap().is_zero());
        let orbit3 = m(&[&["1", "0"], &["0", "1+i"], &["0", "0"]]);
        assert_eq!(p_coeff_formula(&orbit3).unwrap(), s("1+i") * s("1+i"));
        assert!(p_coeff_formula(&m(&[&["1", "0"]])).is_err());
    }

    #[test]
    fn isotropy_and_signature() {
        let b3 = m(&[&["1", "0"], &["i", "0"]]);
        let b6 = m(&[&["1", "0"], &["i", "0"], &["0", "1"], &["0", "i"]]);
        assert!(isotropy_check(&b3));
        assert!(isotropy_check(&b6));
        assert!(!isotropy_check(&m(&[&["1", "0"], &["0", "2"]])));
        let sig = signature(&b6).unwrap();
        assert_eq!(sig.rank, 2);
        assert!(sig.isotropic_columns);
        let b5 = m(&[&["1", "0", "0", "0"], &["0", "1", "1", "0"], &["0", "0", "0", "i"]]);
        let sig = signature(&b5).unwrap();
        assert_eq!(sig.rank, 3);
        assert!(!sig.isotropic_columns);
        assert!(coeff(&sig.p_coeffs, 1).unwrap().is_zero());
        let zero = signature(&Matrix::zeros(2, 2, ())).unwrap();
        assert_eq!(zero.rank, 0);
        assert_eq!(zero.p_coeffs, ints(&[1, 0, 0]));
    }
}

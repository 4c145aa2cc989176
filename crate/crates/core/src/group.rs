//! The group `O(k) x Sp(2l)` acting on coupling blocks by `B -> XᵀBY`.
//!
//! Elementary moves are materialized as matrices so that every reduction
//! step composes into a checkable witness. Pair indices are 0-based: pair
//! `i` is the column pair `(2i, 2i+1)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{symplectic_unit, Matrix};
use crate::scalar::{ExactScalar, Scalar};

pub fn is_orthogonal<S: Scalar>(x: &Matrix<S>) -> bool {
    x.is_square() && x.transpose().mul(x) == Matrix::identity(x.rows(), x.context())
}

pub fn is_symplectic<S: Scalar>(y: &Matrix<S>) -> bool {
    if !y.is_square() || !y.rows().is_multiple_of(2) {
        return false;
    }
    let j = symplectic_unit(y.rows(), y.context());
    y.transpose().mul(&j).mul(y) == j
}

/// Relative residuals `(|XᵀX - I|, |YᵀJY - J|)`.
pub fn membership_residuals<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> (f64, f64) {
    let ortho = x
        .transpose()
        .mul(x)
        .max_relative_distance(&Matrix::identity(x.rows(), x.context()));
    let j = symplectic_unit(y.rows(), y.context());
    let sym = y.transpose().mul(&j).mul(y).max_relative_distance(&j);
    (ortho, sym)
}

/// A pair `(X, Y)` with `X` orthogonal and `Y` symplectic.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformPair<S: Scalar = ExactScalar> {
    pub x: Matrix<S>,
    pub y: Matrix<S>,
}

impl<S: Scalar> TransformPair<S> {
    /// Checks membership (exactly, or up to the ambient tolerance).
    pub fn new(x: Matrix<S>, y: Matrix<S>) -> Result<Self> {
        if !is_orthogonal(&x) {
            return Err(Error::Invalid("X is not orthogonal".into()));
        }
        if !is_symplectic(&y) {
            return Err(Error::Invalid("Y is not symplectic".into()));
        }
        Ok(TransformPair { x, y })
    }

    pub fn identity(k: usize, two_ell: usize, ctx: S::Context) -> Self {
        TransformPair {
            x: Matrix::identity(k, ctx),
            y: Matrix::identity(two_ell, ctx),
        }
    }

    /// `(X1 X2, Y1 Y2)`: acting by the result equals acting by `self`, then `other`.
    pub fn compose(&self, other: &Self) -> Self {
        TransformPair {
            x: self.x.mul(&other.x),
            y: self.y.mul(&other.y),
        }
    }

    pub fn inverse(&self) -> Self {
        let j = symplectic_unit(self.y.rows(), self.y.context());
        // Y^-1 = -J Yᵀ J
        TransformPair {
            x: self.x.transpose(),
            y: j.mul(&self.y.transpose()).mul(&j).neg(),
        }
    }

    pub fn residuals(&self) -> (f64, f64) {
        membership_residuals(&self.x, &self.y)
    }
}

/// `XᵀBY`.
pub fn act<S: Scalar>(b: &Matrix<S>, t: &TransformPair<S>) -> Result<Matrix<S>> {
    if t.x.rows() != b.rows() || t.y.rows() != b.cols() {
        return Err(Error::Shape(format!(
            "transform of size ({}, {}) cannot act on a {}x{} block",
            t.x.rows(),
            t.y.rows(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(t.x.transpose().mul(b).mul(&t.y))
}

fn pair_check(ell: usize, i: usize) -> Result<()> {
    if i >= ell {
        return Err(Error::Invalid(format!("pair index {i} out of range for l = {ell}")));
    }
    Ok(())
}

/// `(C_2i, C_2i+1) -> (c C_2i, c^-1 C_2i+1)`.
pub fn elem_pair_rescale<S: Scalar>(ell: usize, i: usize, c: &S) -> Result<Matrix<S>> {
    pair_check(ell, i)?;
    let inv = c.recip().map_err(|_| Error::Invalid("rescaling by zero".into()))?;
    let mut y = Matrix::identity(2 * ell, c.context());
    y[(2 * i, 2 * i)] = c.clone();
    y[(2 * i + 1, 2 * i + 1)] = inv;
    Ok(y)
}

/// `C_2i+1 += c C_2i`.
pub fn elem_pair_shear<S: Scalar>(ell: usize, i: usize, c: &S) -> Result<Matrix<S>> {
    pair_check(ell, i)?;
    let mut y = Matrix::identity(2 * ell, c.context());
    y[(2 * i, 2 * i + 1)] = c.clone();
    Ok(y)
}

/// `(C_2i, C_2i+1) -> (C_2i+1, -C_2i)`.
pub fn elem_pair_swap<S: Scalar>(ell: usize, i: usize, ctx: S::Context) -> Result<Matrix<S>> {
    pair_check(ell, i)?;
    let mut y = Matrix::identity(2 * ell, ctx);
    y[(2 * i, 2 * i)] = S::zero(ctx);
    y[(2 * i + 1, 2 * i + 1)] = S::zero(ctx);
    y[(2 * i + 1, 2 * i)] = S::one(ctx);
    y[(2 * i, 2 * i + 1)] = -S::one(ctx);
    Ok(y)
}

/// `C_2i -= c C_2j` together with `C_2j+1 += c C_2i+1`.
pub fn elem_cross_shear<S: Scalar>(ell: usize, i: usize, j: usize, c: &S) -> Result<Matrix<S>> {
    pair_check(ell, i)?;
    pair_check(ell, j)?;
    if i == j {
        return Err(Error::Invalid("cross shear needs two different pairs".into()));
    }
    let mut y = Matrix::identity(2 * ell, c.context());
    y[(2 * j, 2 * i)] = -c.clone();
    y[(2 * i + 1, 2 * j + 1)] = c.clone();
    Ok(y)
}

/// Exchanges column pairs `i` and `j`.
pub fn elem_pair_block_swap<S: Scalar>(ell: usize, i: usize, j: usize, ctx: S::Context) -> Result<Matrix<S>> {
    pair_check(ell, i)?;
    pair_check(ell, j)?;
    if i == j {
        return Err(Error::Invalid("block swap needs two different pairs".into()));
    }
    let mut perm: Vec<usize> = (0..2 * ell).collect();
    perm.swap(2 * i, 2 * j);
    perm.swap(2 * i + 1, 2 * j + 1);
    Ok(Matrix::from_fn(2 * ell, 2 * ell, |r, c| {
        if perm[c] == r {
            S::one(ctx)
        } else {
            S::zero(ctx)
        }
    }))
}

fn embed_2x2<S: Scalar>(k: usize, i: usize, j: usize, block: [[S; 2]; 2], ctx: S::Context) -> Result<Matrix<S>> {
    if i >= k || j >= k || i == j {
        return Err(Error::Invalid(format!("bad index pair ({i}, {j}) for size {k}")));
    }
    let mut x = Matrix::identity(k, ctx);
    let [[a, b], [c, d]] = block;
    x[(i, i)] = a;
    x[(i, j)] = b;
    x[(j, i)] = c;
    x[(j, j)] = d;
    Ok(x)
}

/// The rotation `(1/sqrt(q)) [[b1, b2], [-b2, b1]]` at rows/columns `(i, j)`,
/// `q = b1^2 + b2^2`. Left multiplication sends `(b1, b2)` to `(sqrt(q), 0)`.
pub fn ortho_rotation<S: Scalar>(k: usize, i: usize, j: usize, b1: &S, b2: &S) -> Result<Matrix<S>> {
    let q = b1.clone() * b1.clone() + b2.clone() * b2.clone();
    if q.is_zero() {
        return Err(Error::IsotropicRotation);
    }
    let r = q.sqrt_cplus()?.recip()?;
    let (a, b) = (r.clone() * b1.clone(), r * b2.clone());
    embed_2x2(k, i, j, [[a.clone(), b.clone()], [-b, a]], b1.context())
}

/// `(1/2b1) [[b1^2+1, i(b1^2-1)], [-i(b1^2-1), b1^2+1]]` at `(i, j)`; sends
/// `(b1, i b1)` to `(1, i)`.
pub fn ortho_isotropic_rescale<S: Scalar>(k: usize, i: usize, j: usize, b1: &S) -> Result<Matrix<S>> {
    let ctx = b1.context();
    if b1.is_zero() {
        return Err(Error::Invalid("isotropic rescale needs b1 != 0".into()));
    }
    let one = S::one(ctx);
    let im = S::from_exact(&ExactScalar::i(), ctx);
    let sq = b1.clone() * b1.clone();
    let f = (b1.clone() + b1.clone()).recip()?;
    let diag = f.clone() * (sq.clone() + one.clone());
    let off = f * im * (sq - one);
    embed_2x2(k, i, j, [[diag.clone(), off.clone()], [-off, diag]], ctx)
}

/// A small random Gaussian rational: numerators in `-3..=3`, denominators
/// in `1..=3`, imaginary part present half of the time.
pub fn random_small_scalar<R: Rng + ?Sized>(rng: &mut R) -> ExactScalar {
    let part = |rng: &mut R| ExactScalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let re = part(rng);
    if rng.gen_bool(0.5) {
        re + part(rng) * ExactScalar::i()
    } else {
        re
    }
}

/// A random `rows x cols` matrix of [`random_small_scalar`] entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<ExactScalar> {
    Matrix::from_fn(rows, cols, |_, _| random_small_scalar(rng))
}

const CAYLEY_ATTEMPTS: usize = 64;

/// `(I - A)(I + A)^-1`, retried while `I + A` is singular.
fn cayley<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    mut generator: impl FnMut(&mut R) -> Matrix<ExactScalar>,
) -> Result<Matrix<ExactScalar>> {
    let id = Matrix::identity(n, ());
    for _ in 0..CAYLEY_ATTEMPTS {
        let a = generator(rng);
        if let Ok(inv) = id.add(&a).inverse() {
            return Ok(id.sub(&a).mul(&inv));
        }
    }
    Err(Error::Invalid("Cayley sampling exhausted its attempts".into()))
}

/// Exact random element of `O(k)`; determinant `-1` half of the time.
pub fn random_orthogonal<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Matrix<ExactScalar>> {
    let mut x = cayley(k, rng, |rng| {
        let mut a = Matrix::zeros(k, k, ());
        for i in 0..k {
            for j in i + 1..k {
                let v = random_small_scalar(rng);
                a[(j, i)] = -v.clone();
                a[(i, j)] = v;
            }
        }
        a
    })?;
    if k > 0 && rng.gen_bool(0.5) {
        for j in 0..k {
            x[(0, j)] = -x[(0, j)].clone();
        }
    }
    Ok(x)
}

/// Exact random element of `Sp(2l)`, via `S = J M` with `M` symmetric.
pub fn random_symplectic<R: Rng + ?Sized>(ell: usize, rng: &mut R) -> Result<Matrix<ExactScalar>> {
    let n = 2 * ell;
    let j: Matrix<ExactScalar> = symplectic_unit(n, ());
    cayley(n, rng, |rng| {
        let mut m = Matrix::zeros(n, n, ());
        for r in 0..n {
            for c in r..n {
                let v = random_small_scalar(rng);
                m[(c, r)] = v.clone();
                m[(r, c)] = v;
            }
        }
        j.mul(&m)
    })
}

/// A random transform pair for `k x 2l` blocks.
pub fn random_pair<R: Rng + ?Sized>(k: usize, two_ell: usize, rng: &mut R) -> Result<TransformPair<ExactScalar>> {
    Ok(TransformPair {
        x: random_orthogonal(k, rng)?,
        y: random_symplectic(two_ell / 2, rng)?,
    })
}

/// The seeded generator used throughout.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

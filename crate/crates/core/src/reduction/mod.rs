//! Canonical forms for coupling blocks of total dimension at most 7.
//!
//! Every coupling block `B` (shape `k x 2l`, `k + 2l <= 7`) is equivalent
//! to a block-diagonal juxtaposition of the irreducible blocks
//!
//! | label | shape | block |
//! |-------|-------|-------|
//! | `B1`  | 1x2 | `[1 0]` |
//! | `B2,α`| 2x2 | `diag(1, α)`, `α ∈ C+` |
//! | `B3`  | 2x2 | `[[1,0],[i,0]]` |
//! | `B4`  | 3x2 | `[[1,0],[0,1],[0,i]]` |
//! | `B5`  | 3x4 | `[[1,0,0,0],[0,1,1,0],[0,0,0,i]]` |
//! | `B6`  | 4x2 | `[[1,0],[i,0],[0,1],[0,i]]` |
//!
//! plus trivial summands with zero coupling: `TrivEven` (1x0) and
//! `TrivOdd` (0x2). [`classify`] returns the parts together with a
//! transform `(X, Y)` such that `XᵀBY` is exactly that juxtaposition.

mod strings;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{membership_residuals, ortho_isotropic_rescale, TransformPair};
use crate::matrix::Matrix;
use crate::scalar::{ApproxContext, ApproxScalar, ExactScalar, Scalar};
use crate::superspace::SuperDims;
use strings::{Operator, Parity, RawPart, Vector};

/// Largest `k + 2l` covered by the classification.
pub const MAX_DIMENSION: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    TrivEven,
    TrivOdd,
}

impl Tag {
    /// Shape `(k, 2l)` of the canonical block.
    pub fn dims(self) -> (usize, usize) {
        match self {
            Tag::B1 => (1, 2),
            Tag::B2 | Tag::B3 => (2, 2),
            Tag::B4 => (3, 2),
            Tag::B5 => (3, 4),
            Tag::B6 => (4, 2),
            Tag::TrivEven => (1, 0),
            Tag::TrivOdd => (0, 2),
        }
    }

    pub fn is_trivial(self) -> bool {
        matches!(self, Tag::TrivEven | Tag::TrivOdd)
    }

    pub const ALL: [Tag; 8] = [
        Tag::B1,
        Tag::B2,
        Tag::B3,
        Tag::B4,
        Tag::B5,
        Tag::B6,
        Tag::TrivEven,
        Tag::TrivOdd,
    ];
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An irreducible (or trivial) summand.
///
/// `B2` carries `α²` rather than `α`: the square is exact even when `α`
/// itself is irrational, and `α` is recovered as its root in C+.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalLabel {
    tag: Tag,
    alpha_squared: Option<ExactScalar>,
}

impl CanonicalLabel {
    /// Any tag except `B2`.
    pub fn new(tag: Tag) -> Result<Self> {
        if tag == Tag::B2 {
            return Err(Error::Invalid("B2 needs a parameter".into()));
        }
        Ok(CanonicalLabel { tag, alpha_squared: None })
    }

    /// `B2,α` from `α²` (nonzero).
    pub fn b2_squared(alpha_squared: ExactScalar) -> Result<Self> {
        if alpha_squared.is_zero() {
            return Err(Error::Invalid("B2 needs alpha != 0".into()));
        }
        Ok(CanonicalLabel {
            tag: Tag::B2,
            alpha_squared: Some(alpha_squared),
        })
    }

    /// `B2,α` from `α`, which must lie in C+.
    pub fn b2(alpha: ExactScalar) -> Result<Self> {
        if !alpha.in_c_plus() {
            return Err(Error::Invalid(format!("alpha = {alpha} is not in C+")));
        }
        CanonicalLabel::b2_squared(&alpha * &alpha)
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn alpha_squared(&self) -> Option<&ExactScalar> {
        self.alpha_squared.as_ref()
    }

    /// `α` when it lies in Q(i).
    pub fn alpha_exact(&self) -> Option<ExactScalar> {
        self.alpha_squared.as_ref().and_then(|a| a.sqrt_cplus().ok())
    }

    /// `α` in the scalar type `S`.
    pub fn alpha_in<S: Scalar>(&self, ctx: S::Context) -> Option<Result<S>> {
        self.alpha_squared
            .as_ref()
            .map(|a| S::from_exact(a, ctx).sqrt_cplus())
    }

    pub fn dims(&self) -> (usize, usize) {
        self.tag.dims()
    }

    pub fn is_trivial(&self) -> bool {
        self.tag.is_trivial()
    }

    fn sort_key(&self) -> (Tag, f64, f64, String) {
        let (re, im) = self
            .alpha_in::<ApproxScalar>(ApproxContext::default())
            .and_then(|a| a.ok())
            .map(|a| a.to_f64_pair())
            .unwrap_or((0.0, 0.0));
        let sq = self.alpha_squared.as_ref().map(|a| a.to_string()).unwrap_or_default();
        (self.tag, re, im, sq)
    }
}

impl PartialOrd for CanonicalLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.sort_key(), other.sort_key());
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alpha_squared {
            None => write!(f, "{}", self.tag),
            Some(sq) => match self.alpha_exact() {
                Some(alpha) => write!(f, "B2(alpha={alpha})"),
                None => write!(f, "B2(alpha^2={sq})"),
            },
        }
    }
}

/// The canonical block of a label, in the scalar type `S`.
pub fn canonical_matrix_in<S: Scalar>(label: &CanonicalLabel, ctx: S::Context) -> Result<Matrix<S>> {
    let exact = |rows: &[&[&str]]| Matrix::parse(rows).map(|m| m.map(|v| S::from_exact(v, ctx)));
    match label.tag {
        Tag::B1 => exact(&[&["1", "0"]]),
        Tag::B2 => {
            let alpha = label.alpha_in::<S>(ctx).expect("B2 has a parameter")?;
            let mut m = Matrix::identity(2, ctx);
            m[(1, 1)] = alpha;
            Ok(m)
        }
        Tag::B3 => exact(&[&["1", "0"], &["i", "0"]]),
        Tag::B4 => exact(&[&["1", "0"], &["0", "1"], &["0", "i"]]),
        Tag::B5 => exact(&[&["1", "0", "0", "0"], &["0", "1", "1", "0"], &["0", "0", "0", "i"]]),
        Tag::B6 => exact(&[&["1", "0"], &["i", "0"], &["0", "1"], &["0", "i"]]),
        Tag::TrivEven => Ok(Matrix::zeros(1, 0, ctx)),
        Tag::TrivOdd => Ok(Matrix::zeros(0, 2, ctx)),
    }
}

/// The canonical block of a label over Q(i); fails with
/// [`Error::IrrationalRoot`] for `B2,α` with irrational `α`.
pub fn canonical_matrix(label: &CanonicalLabel) -> Result<Matrix<ExactScalar>> {
    canonical_matrix_in(label, ())
}

/// Block-diagonal juxtaposition of canonical blocks.
pub fn juxtaposition_in<S: Scalar>(labels: &[CanonicalLabel], ctx: S::Context) -> Result<Matrix<S>> {
    let blocks = labels
        .iter()
        .map(|l| canonical_matrix_in::<S>(l, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::block_diag(&blocks, ctx))
}

/// `l <= k <= 4l`, necessary for an irreducible block of shape `k x 2l`.
pub fn dimension_bound_check(k: usize, ell: usize) -> bool {
    ell <= k && k <= 4 * ell
}

/// How witnesses are computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Exact when every needed root lies in Q(i), approximate otherwise.
    Auto(ApproxContext),
    /// Exact only; irrational roots are an error.
    Exact,
    /// Always approximate.
    Approx(ApproxContext),
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Auto(ApproxContext::default())
    }
}

/// A transform pair over Q(i) or in approximate arithmetic.
#[derive(Clone, Debug)]
pub enum Witness {
    Exact(TransformPair<ExactScalar>),
    Approx(TransformPair<ApproxScalar>),
}

impl Witness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Witness::Exact(_))
    }

    /// Rows of `X` and `Y` in the scalar text grammar. Approximate entries
    /// are written as the exact dyadic rationals they store.
    pub fn exact_rows(&self) -> (Matrix<ExactScalar>, Matrix<ExactScalar>) {
        match self {
            Witness::Exact(t) => (t.x.clone(), t.y.clone()),
            Witness::Approx(t) => (t.x.map(ApproxScalar::to_exact), t.y.map(ApproxScalar::to_exact)),
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub dims: SuperDims,
    /// Sorted by tag, then by `α`; trivial summands last.
    pub parts: Vec<CanonicalLabel>,
    pub witness: Witness,
    /// Largest relative residual of `XᵀBY` against the juxtaposition and of
    /// the group membership identities.
    pub residual: f64,
}

impl CanonicalDecomposition {
    pub fn nontrivial_parts(&self) -> impl Iterator<Item = &CanonicalLabel> {
        self.parts.iter().filter(|p| !p.is_trivial())
    }

    /// A single summand (which is then irreducible).
    pub fn is_irreducible(&self) -> bool {
        self.parts.len() == 1
    }
}

/// `Π sqrt(radicand)^power` times an exact coefficient.
#[derive(Clone, Debug)]
struct Factor {
    coeff: ExactScalar,
    roots: Vec<(ExactScalar, i32)>,
}

impl Factor {
    fn one() -> Self {
        Factor {
            coeff: ExactScalar::one(),
            roots: Vec::new(),
        }
    }

    fn value<S: Scalar>(&self, ctx: S::Context) -> Result<S> {
        let mut acc = S::from_exact(&self.coeff, ctx);
        for (radicand, power) in &self.roots {
            let root = S::from_exact(radicand, ctx).sqrt_cplus()?;
            let root = if *power < 0 { root.recip()? } else { root };
            for _ in 0..power.unsigned_abs() {
                acc = acc * root.clone();
            }
        }
        Ok(acc)
    }
}

/// Images of the canonical basis vectors of one summand.
#[derive(Clone, Debug)]
struct PartColumns {
    label: CanonicalLabel,
    columns: Vec<(Vector, Factor)>,
}

fn out_of_range(k: usize, two_ell: usize) -> Error {
    Error::OutOfRange(format!("k + 2l = {} exceeds {MAX_DIMENSION}", k + two_ell))
}

fn check_shape(b: &Matrix<ExactScalar>) -> Result<SuperDims> {
    let (k, two_ell) = b.shape();
    let dims = SuperDims::new(k, two_ell)?;
    if dims.total() > MAX_DIMENSION {
        return Err(out_of_range(k, two_ell));
    }
    Ok(dims)
}

fn label_of(op: &Operator, part: &RawPart) -> Result<CanonicalLabel> {
    let parity = strings::generator_parity(op, part);
    let tag = match (part, parity) {
        (RawPart::Semisimple { alpha2, .. }, _) => return CanonicalLabel::b2_squared(alpha2.clone()),
        (RawPart::SelfDual { n: 1, .. }, Some(Parity::Even)) => Tag::TrivEven,
        (RawPart::SelfDual { n: 3, .. }, Some(Parity::Odd)) => Tag::B1,
        (RawPart::SelfDual { n: 5, .. }, Some(Parity::Even)) => Tag::B4,
        (RawPart::SelfDual { n: 7, .. }, Some(Parity::Odd)) => Tag::B5,
        (RawPart::Pair { n: 1, .. }, Some(Parity::Odd)) => Tag::TrivOdd,
        (RawPart::Pair { n: 2, .. }, Some(Parity::Even)) => Tag::B3,
        (RawPart::Pair { n: 3, .. }, Some(Parity::Even)) => Tag::B6,
        _ => {
            return Err(Error::Verification(format!(
                "unexpected indecomposable piece {part:?}"
            )))
        }
    };
    CanonicalLabel::new(tag)
}

/// The labels of `B` without building a witness.
pub fn classify_labels(b: &Matrix<ExactScalar>) -> Result<Vec<CanonicalLabel>> {
    check_shape(b)?;
    let op = Operator::new(b);
    let mut labels = strings::decompose(&op)?
        .iter()
        .map(|p| label_of(&op, p))
        .collect::<Result<Vec<_>>>()?;
    labels.sort();
    Ok(labels)
}

fn columns_matrix(op: &Operator, vectors: &[Vector]) -> Matrix<ExactScalar> {
    Matrix::from_columns(vectors, op.dim(), ())
}

/// Chain basis and top pairing of the canonical block of a string label.
fn canonical_chain(label: &CanonicalLabel) -> Result<(Matrix<ExactScalar>, Option<ExactScalar>)> {
    let b = canonical_matrix(label)?;
    let op = Operator::new(&b);
    let parts = strings::decompose(&op)?;
    let [part] = parts.as_slice() else {
        return Err(Error::Verification(format!("canonical block {label} splits")));
    };
    if label_of(&op, part)? != *label {
        return Err(Error::Verification(format!("canonical block {label} relabelled")));
    }
    let scale = match part {
        RawPart::SelfDual { a, .. } => Some(a.clone()),
        _ => None,
    };
    Ok((columns_matrix(&op, &strings::part_vectors(&op, part)), scale))
}

fn part_columns(op: &Operator, part: &RawPart) -> Result<PartColumns> {
    let label = label_of(op, part)?;
    if let RawPart::Semisimple { e, alpha2 } = part {
        let r = op.form(e, e).recip()?;
        let s = (r.clone(), 1);
        let ne = op.apply(e);
        let n2e = op.apply(&ne);
        let n3e = op.apply(&n2e);
        let columns = vec![
            (e.clone(), Factor { coeff: ExactScalar::one(), roots: vec![s.clone()] }),
            (n2e, Factor { coeff: ExactScalar::one(), roots: vec![s.clone(), (alpha2.clone(), -1)] }),
            (n3e, Factor { coeff: -alpha2.recip()?, roots: vec![s.clone()] }),
            (ne, Factor { coeff: ExactScalar::one(), roots: vec![s] }),
        ];
        return Ok(PartColumns { label, columns });
    }
    let (s_can, a_can) = canonical_chain(&label)?;
    let ours = columns_matrix(op, &strings::part_vectors(op, part));
    let t = ours.mul(&s_can.inverse()?);
    let factor = match (part, a_can) {
        (RawPart::SelfDual { a, .. }, Some(a_can)) => Factor {
            coeff: ExactScalar::one(),
            roots: vec![(a_can.checked_div(a)?, 1)],
        },
        _ => Factor::one(),
    };
    let columns = (0..t.cols()).map(|j| (t.col(j), factor.clone())).collect();
    Ok(PartColumns { label, columns })
}

fn assemble<S: Scalar>(
    b: &Matrix<ExactScalar>,
    parts: &[PartColumns],
    ctx: S::Context,
) -> Result<(TransformPair<S>, f64)> {
    let (k, two_ell) = b.shape();
    let mut x_cols: Vec<Vec<S>> = Vec::new();
    let mut y_cols: Vec<Vec<S>> = Vec::new();
    for part in parts {
        let (pk, _) = part.label.dims();
        for (j, (v, factor)) in part.columns.iter().enumerate() {
            let f = factor.value::<S>(ctx)?;
            let col: Vec<S> = v.iter().map(|x| S::from_exact(x, ctx) * f.clone()).collect();
            if j < pk {
                x_cols.push(col[..k].to_vec());
            } else {
                y_cols.push(col[k..].to_vec());
            }
        }
    }
    let x = Matrix::from_columns(&x_cols, k, ctx);
    let y = Matrix::from_columns(&y_cols, two_ell, ctx);
    let labels: Vec<CanonicalLabel> = parts.iter().map(|p| p.label.clone()).collect();
    let target = juxtaposition_in::<S>(&labels, ctx)?;
    let image = x.transpose().mul(&b.map(|v| S::from_exact(v, ctx))).mul(&y);
    let (ortho, sym) = membership_residuals(&x, &y);
    let residual = image.max_relative_distance(&target).max(ortho).max(sym);
    Ok((TransformPair { x, y }, residual))
}

/// Decomposes `B` into canonical summands with a verified witness.
pub fn classify(b: &Matrix<ExactScalar>) -> Result<CanonicalDecomposition> {
    classify_with(b, Mode::default())
}

pub fn classify_with(b: &Matrix<ExactScalar>, mode: Mode) -> Result<CanonicalDecomposition> {
    let dims = check_shape(b)?;
    let op = Operator::new(b);
    let mut parts = strings::decompose(&op)?
        .iter()
        .map(|p| part_columns(&op, p))
        .collect::<Result<Vec<_>>>()?;
    parts.sort_by(|a, b| a.label.cmp(&b.label));
    let labels: Vec<CanonicalLabel> = parts.iter().map(|p| p.label.clone()).collect();

    let exact = || -> Result<CanonicalDecomposition> {
        let (t, residual) = assemble::<ExactScalar>(b, &parts, ())?;
        if residual != 0.0 {
            return Err(Error::Verification(format!("exact witness residual {residual:e}")));
        }
        Ok(CanonicalDecomposition {
            dims,
            parts: labels.clone(),
            witness: Witness::Exact(t),
            residual,
        })
    };
    let approx = |ctx: ApproxContext| -> Result<CanonicalDecomposition> {
        let (t, residual) = assemble::<ApproxScalar>(b, &parts, ctx)?;
        if residual > ctx.eps {
            return Err(Error::Verification(format!(
                "witness residual {residual:e} exceeds {:e}",
                ctx.eps
            )));
        }
        Ok(CanonicalDecomposition {
            dims,
            parts: labels.clone(),
            witness: Witness::Approx(t),
            residual,
        })
    };
    match mode {
        Mode::Exact => exact(),
        Mode::Approx(ctx) => approx(ctx),
        Mode::Auto(ctx) => match exact() {
            Err(Error::IrrationalRoot(_)) => approx(ctx),
            other => other,
        },
    }
}

/// Same orbit under `O(k) x Sp(2l)`.
pub fn equivalent(b1: &Matrix<ExactScalar>, b2: &Matrix<ExactScalar>) -> Result<bool> {
    if b1.shape() != b2.shape() {
        return Err(Error::Shape(format!(
            "cannot compare {}x{} with {}x{}",
            b1.rows(),
            b1.cols(),
            b2.rows(),
            b2.cols()
        )));
    }
    Ok(classify_labels(b1)? == classify_labels(b2)?)
}

/// `q(v) = vᵀv`.
fn quadratic<S: Scalar>(v: &[S]) -> S {
    let ctx = v.first().map(Scalar::context).unwrap_or_default();
    v.iter().fold(S::zero(ctx), |acc, x| acc + x.clone() * x.clone())
}

/// `I - 2uuᵀ/q(u)`.
fn householder<S: Scalar>(u: &[S]) -> Result<Matrix<S>> {
    let ctx = u[0].context();
    let n = u.len();
    let f = (quadratic(u) * S::from_exact(&ExactScalar::from(2), ctx).recip()?).recip()?;
    Ok(Matrix::from_fn(n, n, |i, j| {
        let d = if i == j { S::one(ctx) } else { S::zero(ctx) };
        d - f.clone() * u[i].clone() * u[j].clone()
    }))
}

/// Orthogonal `X` sending an anisotropic `b` to `(sqrt q(b), 0, ..., 0)`.
fn reduce_anisotropic<S: Scalar>(b: &[S]) -> Result<(Vec<S>, Matrix<S>)> {
    let ctx = b[0].context();
    let n = b.len();
    let c = quadratic(b).sqrt_cplus()?;
    let mut target = vec![S::zero(ctx); n];
    target[0] = c.clone();
    let u: Vec<S> = b.iter().zip(&target).map(|(x, t)| x.clone() - t.clone()).collect();
    if u.iter().all(Scalar::is_zero) {
        return Ok((target, Matrix::identity(n, ctx)));
    }
    if !quadratic(&u).is_zero() {
        return Ok((target, householder(&u)?));
    }
    // b0 = c: reflect onto -c e1 instead, then flip the first axis
    let mut u = b.to_vec();
    u[0] = u[0].clone() + c;
    let mut x = householder(&u)?;
    for j in 0..n {
        x[(0, j)] = -x[(0, j)].clone();
    }
    Ok((target, x))
}

/// [`reduce_vector`] in the scalar type `S`.
pub fn reduce_vector_in<S: Scalar>(b: &[S], ctx: S::Context) -> Result<(Vec<S>, Matrix<S>)> {
    let n = b.len();
    if b.iter().all(Scalar::is_zero) {
        return Ok((b.to_vec(), Matrix::identity(n, ctx)));
    }
    if !quadratic(b).is_zero() {
        return reduce_anisotropic(b);
    }
    // isotropic: move a nonzero entry first, rotate the rest onto
    // (±i b0, 0, ...), fix the sign, then rescale to (1, i)
    let pivot = b.iter().position(|x| !x.is_zero()).expect("nonzero");
    let mut perm = Matrix::identity(n, ctx);
    if pivot != 0 {
        perm[(0, 0)] = S::zero(ctx);
        perm[(pivot, pivot)] = S::zero(ctx);
        perm[(0, pivot)] = S::one(ctx);
        perm[(pivot, 0)] = S::one(ctx);
    }
    let b1 = perm.mul_vec(b);
    let (rest, x_rest) = reduce_anisotropic(&b1[1..])?;
    let mut x = Matrix::identity(n, ctx);
    for i in 1..n {
        for j in 1..n {
            x[(i, j)] = x_rest[(i - 1, j - 1)].clone();
        }
    }
    let im = S::from_exact(&ExactScalar::i(), ctx);
    if rest[0] != im.clone() * b1[0].clone() {
        for j in 0..n {
            x[(1, j)] = -x[(1, j)].clone();
        }
    }
    let x = ortho_isotropic_rescale(n, 0, 1, &b1[0])?.mul(&x).mul(&perm);
    let image = x.mul_vec(b);
    Ok((image, x))
}

/// A vector reduction over Q(i) or approximate.
#[derive(Clone, Debug)]
pub enum VectorReduction {
    Exact(Vec<ExactScalar>, Matrix<ExactScalar>),
    Approx(Vec<ApproxScalar>, Matrix<ApproxScalar>),
}

/// Orthogonal `X` with `Xb` equal to `(sqrt q(b), 0, ...)` when `q(b) != 0`,
/// to `(1, i, 0, ...)` when `b` is nonzero isotropic, and to `b` when
/// `b = 0`.
pub fn reduce_vector(b: &[ExactScalar], ctx: ApproxContext) -> Result<VectorReduction> {
    match reduce_vector_in::<ExactScalar>(b, ()) {
        Ok((v, x)) => Ok(VectorReduction::Exact(v, x)),
        Err(Error::IrrationalRoot(_)) => {
            let lifted: Vec<ApproxScalar> = b.iter().map(|v| v.to_approx(ctx)).collect();
            let (v, x) = reduce_vector_in::<ApproxScalar>(&lifted, ctx)?;
            Ok(VectorReduction::Approx(v, x))
        }
        Err(e) => Err(e),
    }
}

/// Coefficients `λ` with `q(Bλ) != 0`, or `None` when `BᵀB = 0`.
///
/// Searches single columns, then `C_i + t C_j` for `t = 1, 2, 3`: if every
/// column is isotropic, `q(C_i + t C_j) = 2t CᵢᵀC_j`, so some pair
/// succeeds unless `BᵀB` vanishes.
pub fn find_anisotropic_combination(b: &Matrix<ExactScalar>) -> Option<Vec<ExactScalar>> {
    let n = b.cols();
    let unit = |i: usize, t: i64| -> Vec<ExactScalar> {
        (0..n)
            .map(|j| if j == i { ExactScalar::from(t) } else { ExactScalar::zero() })
            .collect()
    };
    let q = |lambda: &[ExactScalar]| quadratic(&b.mul_vec(lambda));
    if b.rows() == 0 {
        return None;
    }
    for i in 0..n {
        let l = unit(i, 1);
        if !q(&l).is_zero() {
            return Some(l);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for t in 1..=3 {
                let mut l = unit(i, 1);
                l[j] = ExactScalar::from(t);
                if !q(&l).is_zero() {
                    return Some(l);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests;

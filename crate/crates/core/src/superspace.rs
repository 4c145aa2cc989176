//! Superspaces and their Gram matrices.
//!
//! A form on `V = V0 + V1` is stored as three blocks in a homogeneous
//! basis: the even block, the odd block, and the even-by-odd coupling.
//! The odd-by-even block is implied by the flavor:
//!
//! | flavor                | even block     | odd block      | lower block  |
//! |-----------------------|----------------|----------------|--------------|
//! | supersymmetric        | symmetric      | antisymmetric  | `couplingᵀ`  |
//! | skew-supersymmetric   | antisymmetric  | symmetric      | `-couplingᵀ` |
//!
//! The *standard* shapes are `I_k`/`J_{2l}` (supersymmetric) and
//! `J_{2l}`/`I_k` (skew).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{symplectic_unit, Matrix};
use crate::scalar::{ApproxContext, ApproxScalar, ExactScalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Supersymmetric,
    SkewSupersymmetric,
}

impl Flavor {
    pub fn flipped(self) -> Flavor {
        match self {
            Flavor::Supersymmetric => Flavor::SkewSupersymmetric,
            Flavor::SkewSupersymmetric => Flavor::Supersymmetric,
        }
    }

    /// Sign relating the odd-by-even block to `couplingᵀ`.
    fn lower_sign(self) -> i64 {
        match self {
            Flavor::Supersymmetric => 1,
            Flavor::SkewSupersymmetric => -1,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Supersymmetric => "supersymmetric",
            Flavor::SkewSupersymmetric => "skew-supersymmetric",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "supersymmetric" | "super" => Ok(Flavor::Supersymmetric),
            "skew-supersymmetric" | "skew" => Ok(Flavor::SkewSupersymmetric),
            other => Err(Error::Invalid(format!("unknown flavor {other:?}"))),
        }
    }
}

/// Dimensions `(k, 2l)` of a superspace carrying a supersymmetric form:
/// `k` is the orthogonal part, `2l` the symplectic part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperDims {
    pub k: usize,
    pub two_ell: usize,
}

impl SuperDims {
    pub fn new(k: usize, two_ell: usize) -> Result<Self> {
        if !two_ell.is_multiple_of(2) {
            return Err(Error::Invalid(format!("symplectic dimension {two_ell} is odd")));
        }
        if k + two_ell == 0 {
            return Err(Error::Invalid("empty superspace".into()));
        }
        Ok(SuperDims { k, two_ell })
    }

    pub fn ell(&self) -> usize {
        self.two_ell / 2
    }

    pub fn total(&self) -> usize {
        self.k + self.two_ell
    }
}

impl fmt::Display for SuperDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.k, self.two_ell)
    }
}

/// The standard even block for a flavor.
pub fn standard_even_block<S: Scalar>(flavor: Flavor, n: usize, ctx: S::Context) -> Matrix<S> {
    match flavor {
        Flavor::Supersymmetric => Matrix::identity(n, ctx),
        Flavor::SkewSupersymmetric => symplectic_unit(n, ctx),
    }
}

/// The standard odd block for a flavor.
pub fn standard_odd_block<S: Scalar>(flavor: Flavor, n: usize, ctx: S::Context) -> Matrix<S> {
    standard_even_block(flavor.flipped(), n, ctx)
}

/// A super-(skew)symmetric bilinear form in a homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GramForm<S: Scalar = ExactScalar> {
    flavor: Flavor,
    even_block: Matrix<S>,
    odd_block: Matrix<S>,
    coupling: Matrix<S>,
}

impl<S: Scalar> GramForm<S> {
    /// Validates block shapes and the flavor's symmetry identities.
    pub fn new(
        flavor: Flavor,
        even_block: Matrix<S>,
        odd_block: Matrix<S>,
        coupling: Matrix<S>,
    ) -> Result<Self> {
        let (m, n) = (even_block.rows(), odd_block.rows());
        if !even_block.is_square() || !odd_block.is_square() {
            return Err(Error::Shape("diagonal blocks must be square".into()));
        }
        if coupling.shape() != (m, n) {
            return Err(Error::Shape(format!(
                "coupling is {}x{}, expected {m}x{n}",
                coupling.rows(),
                coupling.cols()
            )));
        }
        let (even_ok, odd_ok) = match flavor {
            Flavor::Supersymmetric => (even_block.is_symmetric(), odd_block.is_antisymmetric()),
            Flavor::SkewSupersymmetric => (even_block.is_antisymmetric(), odd_block.is_symmetric()),
        };
        if !even_ok {
            return Err(Error::Invalid(format!("even block has the wrong symmetry for a {flavor} form")));
        }
        if !odd_ok {
            return Err(Error::Invalid(format!("odd block has the wrong symmetry for a {flavor} form")));
        }
        Ok(GramForm {
            flavor,
            even_block,
            odd_block,
            coupling,
        })
    }

    /// Splits a full Gram matrix whose first `even_dim` basis vectors are even.
    pub fn from_full(flavor: Flavor, even_dim: usize, g: &Matrix<S>) -> Result<Self> {
        if !g.is_square() || even_dim > g.rows() {
            return Err(Error::Shape("bad Gram matrix shape".into()));
        }
        let n = g.rows();
        let upper = g.submatrix(0..even_dim, even_dim..n);
        let lower = g.submatrix(even_dim..n, 0..even_dim);
        let expected = upper.transpose().scale(&S::from_exact(
            &ExactScalar::from(flavor.lower_sign()),
            g.context(),
        ));
        if lower != expected {
            return Err(Error::Invalid(format!("mixed blocks violate the {flavor} identity")));
        }
        GramForm::new(
            flavor,
            g.submatrix(0..even_dim, 0..even_dim),
            g.submatrix(even_dim..n, even_dim..n),
            upper,
        )
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn even_dim(&self) -> usize {
        self.even_block.rows()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_block.rows()
    }

    pub fn even_block(&self) -> &Matrix<S> {
        &self.even_block
    }

    pub fn odd_block(&self) -> &Matrix<S> {
        &self.odd_block
    }

    pub fn coupling(&self) -> &Matrix<S> {
        &self.coupling
    }

    /// The odd-by-even block implied by the flavor.
    pub fn lower_block(&self) -> Matrix<S> {
        let t = self.coupling.transpose();
        match self.flavor {
            Flavor::Supersymmetric => t,
            Flavor::SkewSupersymmetric => t.neg(),
        }
    }

    /// The full `(m+n) x (m+n)` Gram matrix, even basis vectors first.
    pub fn gram_matrix(&self) -> Matrix<S> {
        Matrix::block(&self.even_block, &self.coupling, &self.lower_block(), &self.odd_block)
    }

    /// The `(k, 2l)` dimensions: orthogonal part first, whatever its parity.
    pub fn super_dims(&self) -> (usize, usize) {
        match self.flavor {
            Flavor::Supersymmetric => (self.even_dim(), self.odd_dim()),
            Flavor::SkewSupersymmetric => (self.odd_dim(), self.even_dim()),
        }
    }

    pub fn is_standard(&self) -> bool {
        let ctx = self.coupling.context();
        let symplectic = match self.flavor {
            Flavor::Supersymmetric => self.odd_dim(),
            Flavor::SkewSupersymmetric => self.even_dim(),
        };
        symplectic % 2 == 0
            && self.even_block == standard_even_block(self.flavor, self.even_dim(), ctx)
            && self.odd_block == standard_odd_block(self.flavor, self.odd_dim(), ctx)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coupling.is_zero()
    }
}

/// Assembles the standard Gram form with the given coupling block.
///
/// The coupling is `k x 2l` for supersymmetric forms and `2l x k` for skew
/// ones (rows always index even basis vectors).
pub fn make_standard_gram<S: Scalar>(coupling: Matrix<S>, flavor: Flavor) -> Result<GramForm<S>> {
    let ctx = coupling.context();
    let (m, n) = coupling.shape();
    let symplectic = match flavor {
        Flavor::Supersymmetric => n,
        Flavor::SkewSupersymmetric => m,
    };
    if symplectic % 2 != 0 {
        return Err(Error::Invalid(format!(
            "symplectic block must have even size, got {symplectic}"
        )));
    }
    GramForm::new(
        flavor,
        standard_even_block(flavor, m, ctx),
        standard_odd_block(flavor, n, ctx),
        coupling,
    )
}

/// Nondegenerate diagonal blocks, nonzero coupling and a nonzero diagonal block.
pub fn is_pre_oscillator<S: Scalar>(g: &GramForm<S>) -> bool {
    let nondegenerate = |m: &Matrix<S>| !m.determinant().is_zero();
    nondegenerate(&g.even_block)
        && nondegenerate(&g.odd_block)
        && !g.coupling.is_zero()
        && !(g.even_block.is_zero() && g.odd_block.is_zero())
}

/// The corresponding form on the parity-reversed space.
///
/// Even and odd parts trade places; the new coupling is the old odd-by-even
/// block, so a supersymmetric coupling `B` becomes `Bᵀ` with lower block
/// `-B`. Only standard forms are accepted.
pub fn parity_reverse<S: Scalar>(g: &GramForm<S>) -> Result<GramForm<S>> {
    if !g.is_standard() {
        return Err(Error::Invalid("parity reversal needs a standard form".into()));
    }
    Ok(parity_reverse_blocks(g))
}

/// Parity reversal on arbitrary blocks, without the standardness check.
pub fn parity_reverse_blocks<S: Scalar>(g: &GramForm<S>) -> GramForm<S> {
    GramForm {
        flavor: g.flavor.flipped(),
        even_block: g.odd_block.clone(),
        odd_block: g.even_block.clone(),
        coupling: g.lower_block(),
    }
}

/// A standard form together with the even change of basis producing it.
#[derive(Clone, Debug)]
pub struct Normalized<S: Scalar> {
    pub form: GramForm<S>,
    /// Change of basis on the even part (columns are new basis vectors).
    pub m0: Matrix<S>,
    pub m1: Matrix<S>,
    /// Largest relative entry of `MᵀGM - standard`.
    pub residual: f64,
}

impl<S: Scalar> Normalized<S> {
    pub fn witness(&self) -> Matrix<S> {
        let ctx = self.m0.context();
        Matrix::block_diag(&[self.m0.clone(), self.m1.clone()], ctx)
    }
}

/// Output of [`normalize_gram`]: exact when no irrational root was needed.
#[derive(Clone, Debug)]
pub enum Normalization {
    Exact(Normalized<ExactScalar>),
    Approx(Normalized<ApproxScalar>),
}

impl Normalization {
    pub fn residual(&self) -> f64 {
        match self {
            Normalization::Exact(n) => n.residual,
            Normalization::Approx(n) => n.residual,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Normalization::Exact(_))
    }
}

/// Brings a form with nondegenerate diagonal blocks to standard shape.
///
/// Runs over Q(i) when possible and falls back to approximate arithmetic
/// (precision and tolerance from `ctx`) when a pivot has an irrational root.
pub fn normalize_gram(g: &GramForm<ExactScalar>, ctx: ApproxContext) -> Result<Normalization> {
    match normalize_gram_in::<ExactScalar>(g, ()) {
        Ok(n) => Ok(Normalization::Exact(n)),
        Err(Error::IrrationalRoot(_)) => {
            let n = normalize_gram_in::<ApproxScalar>(g, ctx)?;
            if n.residual > ctx.eps {
                return Err(Error::Verification(format!(
                    "normalization residual {:e} exceeds {:e}",
                    n.residual, ctx.eps
                )));
            }
            Ok(Normalization::Approx(n))
        }
        Err(e) => Err(e),
    }
}

/// [`normalize_gram`] carried out entirely in the scalar type `S`.
pub fn normalize_gram_in<S: Scalar>(g: &GramForm<ExactScalar>, ctx: S::Context) -> Result<Normalized<S>> {
    let lift = |m: &Matrix<ExactScalar>| m.map(|v| S::from_exact(v, ctx));
    for (block, name) in [(&g.even_block, "even"), (&g.odd_block, "odd")] {
        if block.determinant().is_zero() {
            return Err(Error::Degenerate(name));
        }
    }
    let reduce = |block: &Matrix<ExactScalar>| -> Result<Matrix<S>> {
        let b = lift(block);
        if block.is_symmetric() {
            orthonormal_basis(&b, ctx)
        } else {
            symplectic_basis(&b, ctx)
        }
    };
    let m0 = reduce(&g.even_block)?;
    let m1 = reduce(&g.odd_block)?;
    let full = lift(&g.gram_matrix());
    let m = Matrix::block_diag(&[m0.clone(), m1.clone()], ctx);
    let image = m.transpose().mul(&full).mul(&m);
    let (e, o) = (g.even_dim(), g.odd_dim());
    let n = e + o;
    let form = GramForm::new(
        g.flavor,
        standard_even_block(g.flavor, e, ctx),
        standard_odd_block(g.flavor, o, ctx),
        image.submatrix(0..e, e..n),
    )?;
    let residual = image.max_relative_distance(&form.gram_matrix());
    if residual > 0.0 && std::any::TypeId::of::<S>() == std::any::TypeId::of::<ExactScalar>() {
        return Err(Error::Verification(format!("exact normalization residual {residual:e}")));
    }
    Ok(Normalized { form, m0, m1, residual })
}

fn bilinear<S: Scalar>(g: &Matrix<S>, u: &[S], v: &[S]) -> S {
    let gv = g.mul_vec(v);
    let ctx = g.context();
    u.iter()
        .zip(&gv)
        .fold(S::zero(ctx), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn axpy<S: Scalar>(y: &[S], c: &S, x: &[S]) -> Vec<S> {
    y.iter()
        .zip(x)
        .map(|(a, b)| a.clone() + c.clone() * b.clone())
        .collect()
}

fn unit_vectors<S: Scalar>(n: usize, ctx: S::Context) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one(ctx) } else { S::zero(ctx) })
                .collect()
        })
        .collect()
}

/// Columns `M` with `MᵀGM = I` for a nondegenerate symmetric `G`.
fn orthonormal_basis<S: Scalar>(g: &Matrix<S>, ctx: S::Context) -> Result<Matrix<S>> {
    let n = g.rows();
    let mut pool = unit_vectors::<S>(n, ctx);
    let mut out = Vec::with_capacity(n);
    while !pool.is_empty() {
        let (drop, v) = anisotropic_in_pool(g, &pool, ctx).ok_or(Error::Degenerate("symmetric"))?;
        let q = bilinear(g, &v, &v);
        let root = q.sqrt_cplus()?;
        let v: Vec<S> = v.iter().map(|x| x.div(&root)).collect::<Result<_>>()?;
        pool.remove(drop);
        pool = pool
            .into_iter()
            .map(|w| {
                let c = -bilinear(g, &v, &w);
                axpy(&w, &c, &v)
            })
            .collect();
        out.push(v);
    }
    Ok(Matrix::from_columns(&out, n, ctx))
}

/// A pool vector, or a small combination of two, with `q(v) != 0`; also
/// returns which pool index may be dropped once `v` is split off.
fn anisotropic_in_pool<S: Scalar>(g: &Matrix<S>, pool: &[Vec<S>], ctx: S::Context) -> Option<(usize, Vec<S>)> {
    for (i, v) in pool.iter().enumerate() {
        if !bilinear(g, v, v).is_zero() {
            return Some((i, v.clone()));
        }
    }
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            for t in 1..=3 {
                let t = S::from_exact(&ExactScalar::from(t), ctx);
                let v = axpy(&pool[i], &t, &pool[j]);
                if !bilinear(g, &v, &v).is_zero() {
                    return Some((i, v));
                }
            }
        }
    }
    None
}

/// Columns `M` with `MᵀGM = J_{2l}` for a nondegenerate antisymmetric `G`.
fn symplectic_basis<S: Scalar>(g: &Matrix<S>, ctx: S::Context) -> Result<Matrix<S>> {
    let n = g.rows();
    let mut pool = unit_vectors::<S>(n, ctx);
    let mut out = Vec::with_capacity(n);
    while !pool.is_empty() {
        let (i, j, w) = (0..pool.len())
            .flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let w = bilinear(g, &pool[i], &pool[j]);
                (!w.is_zero()).then_some((i, j, w))
            })
            .ok_or(Error::Degenerate("antisymmetric"))?;
        let e = pool[i].clone();
        let f: Vec<S> = pool[j].iter().map(|x| x.div(&w)).collect::<Result<_>>()?;
        pool.remove(j);
        pool.remove(i);
        pool = pool
            .into_iter()
            .map(|x| {
                let x = axpy(&x, &-bilinear(g, &x, &f), &e);
                let c = bilinear(g, &x, &e);
                axpy(&x, &c, &f)
            })
            .collect();
        out.push(e);
        out.push(f);
    }
    Ok(Matrix::from_columns(&out, n, ctx))
}

//! Exact decomposition of a coupling block into indecomposable pieces.
//!
//! For a standard supersymmetric form with coupling `B` put
//! `Φ = diag(I_k, J_2l)` and `N = [[0, B], [-J Bᵀ, 0]]`, so that the full
//! Gram matrix is `Φ (I + N)`. `N` is odd, satisfies
//! `Φ(Nx, y) = ε(x) Φ(x, Ny)` with `ε = -1` on even and `+1` on odd
//! vectors, and a transform `diag(X, Y)` acts on it by conjugation. The
//! orbit of `B` is therefore the conjugacy class of `N` inside the
//! isometry group of `Φ`, which is recorded by:
//!
//! * the invertible (Fitting) part of `N`; in dimension at most 7 it is
//!   2+2 dimensional and determined by one scalar,
//! * the strings `v, Nv, ..., N^(n-1) v` of the nilpotent part: either
//!   self-dual (`Φ(v, N^(n-1) v) != 0`) or paired with a second string of
//!   the same length.
//!
//! Strings are split off one at a time, longest first, after normalizing
//! the generator so that the Gram matrix of the string basis only pairs
//! `N^i` with `N^(n-1-i)`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

pub(crate) type Vector = Vec<ExactScalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub(crate) fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn shifted(self, by: usize) -> Parity {
        if by.is_multiple_of(2) {
            self
        } else {
            self.flip()
        }
    }
}

/// An indecomposable piece found in the coupling operator.
#[derive(Clone, Debug)]
pub(crate) enum RawPart {
    /// Normalized self-dual string with `a = Φ(v, N^(n-1) v)`.
    SelfDual { n: usize, v: Vector, a: ExactScalar },
    /// Normalized pair: `Φ(v, N^(n-1) w) = 1`, all other pairings zero.
    Pair { n: usize, v: Vector, w: Vector },
    /// Invertible part: `N^4 = -alpha2` on it; `e` is even with `Φ(e, e) != 0`.
    Semisimple { e: Vector, alpha2: ExactScalar },
}

pub(crate) struct Operator {
    k: usize,
    dim: usize,
    n: Matrix<ExactScalar>,
}

fn axpy(y: &[ExactScalar], c: &ExactScalar, x: &[ExactScalar]) -> Vector {
    y.iter().zip(x).map(|(a, b)| a + &(c * b)).collect()
}

fn scaled(c: &ExactScalar, x: &[ExactScalar]) -> Vector {
    x.iter().map(|v| c * v).collect()
}

fn is_zero(v: &[ExactScalar]) -> bool {
    v.iter().all(ExactScalar::is_zero)
}

fn broken(what: &str) -> Error {
    Error::Verification(format!("string decomposition: {what}"))
}

impl Operator {
    pub(crate) fn new(b: &Matrix<ExactScalar>) -> Self {
        let (k, two_ell) = b.shape();
        let dim = k + two_ell;
        let mut n = Matrix::zeros(dim, dim, ());
        for i in 0..k {
            for j in 0..two_ell {
                n[(i, k + j)] = b[(i, j)].clone();
            }
        }
        // -J Bᵀ: row 2p is -(Bᵀ row 2p+1), row 2p+1 is Bᵀ row 2p
        for p in 0..two_ell / 2 {
            for i in 0..k {
                n[(k + 2 * p, i)] = -b[(i, 2 * p + 1)].clone();
                n[(k + 2 * p + 1, i)] = b[(i, 2 * p)].clone();
            }
        }
        Operator { k, dim, n }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn apply(&self, v: &[ExactScalar]) -> Vector {
        self.n.mul_vec(v)
    }

    pub(crate) fn apply_pow(&self, v: &[ExactScalar], p: usize) -> Vector {
        (0..p).fold(v.to_vec(), |acc, _| self.apply(&acc))
    }

    /// `Φ(u, v)`.
    pub(crate) fn form(&self, u: &[ExactScalar], v: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for i in 0..self.k {
            if !u[i].is_zero() && !v[i].is_zero() {
                acc = acc + &u[i] * &v[i];
            }
        }
        let mut i = self.k;
        while i < self.dim {
            acc = acc + &u[i] * &v[i + 1] - &u[i + 1] * &v[i];
            i += 2;
        }
        acc
    }

    pub(crate) fn parity(&self, v: &[ExactScalar]) -> Option<Parity> {
        let even = v[..self.k].iter().any(|x| !x.is_zero());
        let odd = v[self.k..].iter().any(|x| !x.is_zero());
        match (even, odd) {
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    fn unit(&self, i: usize) -> Vector {
        (0..self.dim)
            .map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
            .collect()
    }

    fn coords(&self, p: Parity) -> std::ops::Range<usize> {
        match p {
            Parity::Even => 0..self.k,
            Parity::Odd => self.k..self.dim,
        }
    }

    /// Chain basis `v, Nv, ..., N^(n-1) v`.
    pub(crate) fn chain(&self, v: &[ExactScalar], n: usize) -> Vec<Vector> {
        let mut out = vec![v.to_vec()];
        for _ in 1..n {
            let next = self.apply(out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }
}

/// A graded subspace given by bases of its even and odd parts.
#[derive(Clone, Debug, Default)]
struct Graded {
    even: Vec<Vector>,
    odd: Vec<Vector>,
}

impl Graded {
    fn part(&self, p: Parity) -> &Vec<Vector> {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    fn part_mut(&mut self, p: Parity) -> &mut Vec<Vector> {
        match p {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        }
    }

    fn len(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    fn all(&self) -> impl Iterator<Item = &Vector> {
        self.even.iter().chain(&self.odd)
    }
}

/// Independent subset of `vectors` (exact rank test).
fn independent(op: &Operator, vectors: Vec<Vector>) -> Vec<Vector> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = Matrix::from_columns(&vectors, op.dim, ());
    m.independent_columns()
        .into_iter()
        .map(|j| vectors[j].clone())
        .collect()
}

/// Kernel and image of `N^dim`, each split by parity.
fn fitting(op: &Operator) -> (Graded, Graded) {
    let mut power = Matrix::identity(op.dim, ());
    for _ in 0..op.dim {
        power = op.n.mul(&power);
    }
    let mut kernel = Graded::default();
    let mut image = Graded::default();
    for p in [Parity::Even, Parity::Odd] {
        let cols: Vec<usize> = op.coords(p).collect();
        let restricted = power.select_columns(&cols);
        for c in restricted.nullspace() {
            let mut v = vec![ExactScalar::zero(); op.dim];
            for (slot, x) in cols.iter().zip(c) {
                v[*slot] = x;
            }
            kernel.part_mut(p).push(v);
        }
        let images: Vec<Vector> = cols
            .iter()
            .map(|&i| power.mul_vec(&op.unit(i)))
            .filter(|v| !is_zero(v))
            .collect();
        let target = p.shifted(op.dim);
        *image.part_mut(target) = independent(op, images);
    }
    (kernel, image)
}

/// Homogeneous candidates drawn from a basis: the basis vectors, then
/// `u_i + t u_j` for `t = 1, 2, 3`. A nonzero quadratic function on the
/// span is nonzero on one of them.
fn candidates(basis: &[Vector]) -> impl Iterator<Item = Vector> + '_ {
    let singles = basis.iter().cloned();
    let pairs = (0..basis.len()).flat_map(move |i| {
        (i + 1..basis.len()).flat_map(move |j| {
            (1..=3).map(move |t| axpy(&basis[i], &ExactScalar::from(t), &basis[j]))
        })
    });
    singles.chain(pairs)
}

fn semisimple_part(op: &Operator, image: &Graded) -> Result<Option<RawPart>> {
    if image.len() == 0 {
        return Ok(None);
    }
    if image.even.len() != 2 || image.odd.len() != 2 {
        return Err(Error::OutOfRange(format!(
            "invertible part of dimension ({}|{})",
            image.even.len(),
            image.odd.len()
        )));
    }
    let e = candidates(&image.even)
        .find(|v| !op.form(v, v).is_zero())
        .ok_or_else(|| broken("invertible part is degenerate"))?;
    let n4 = op.apply_pow(&e, 4);
    let i = e.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    let alpha2 = -n4[i].checked_div(&e[i])?;
    if axpy(&n4, &alpha2, &e).iter().any(|x| !x.is_zero()) {
        return Err(broken("N^4 is not scalar on the invertible part"));
    }
    Ok(Some(RawPart::Semisimple { e, alpha2 }))
}

fn nilpotency_index(op: &Operator, space: &Graded) -> usize {
    let mut n = 0;
    for v in space.all() {
        let mut w = v.clone();
        let mut len = 0;
        while !is_zero(&w) {
            w = op.apply(&w);
            len += 1;
        }
        n = n.max(len);
    }
    n
}

fn normalize_self_dual(op: &Operator, mut v: Vector, n: usize) -> Result<RawPart> {
    let top = op.apply_pow(&v, n - 1);
    let a = op.form(&v, &top);
    // kill Φ(v, N^m v) for m = n-3, n-5, ..., keeping higher m untouched
    let mut m = n as isize - 3;
    while m >= 0 {
        let mu = m as usize;
        let am = op.form(&v, &op.apply_pow(&v, mu));
        if !am.is_zero() {
            let p = n - 1 - mu;
            let np = op.apply_pow(&v, p);
            let c1 = op.form(&np, &op.apply_pow(&v, mu)) + &a;
            if c1.is_zero() {
                return Err(broken("self-dual string cannot be normalized"));
            }
            let c = -am.checked_div(&c1)?;
            v = axpy(&v, &c, &np);
        }
        m -= 2;
    }
    for m in 0..n - 1 {
        if !op.form(&v, &op.apply_pow(&v, m)).is_zero() {
            return Err(broken("self-dual normalization left a pairing"));
        }
    }
    Ok(RawPart::SelfDual { n, v, a })
}

fn normalize_pair(op: &Operator, mut v: Vector, mut w: Vector, n: usize) -> Result<RawPart> {
    let pv = op.parity(&v).ok_or_else(|| broken("inhomogeneous generator"))?;
    let f = |x: &[ExactScalar], y: &[ExactScalar], m: usize| op.form(x, &op.apply_pow(y, m));
    let lead = f(&v, &w, n - 1);
    w = scaled(&lead.recip()?, &w);

    // isotropic strings: Φ(v, N^m v) = 0, then Φ(w, N^m w) = 0
    for m in (0..n - 1).rev() {
        let am = f(&v, &v, m);
        if am.is_zero() {
            continue;
        }
        let p = n - 1 - m;
        let np = op.apply_pow(&w, p);
        if op.parity(&np) != Some(pv) {
            return Err(broken("parity clash while isolating a pair"));
        }
        let c1 = op.form(&np, &op.apply_pow(&v, m)) + f(&v, &w, n - 1);
        if c1.is_zero() {
            return Err(broken("pair cannot be normalized"));
        }
        v = axpy(&v, &-am.checked_div(&c1)?, &np);
    }
    let pw = op.parity(&w).ok_or_else(|| broken("inhomogeneous generator"))?;
    for m in (0..n - 1).rev() {
        let am = f(&w, &w, m);
        if am.is_zero() {
            continue;
        }
        let p = n - 1 - m;
        let np = op.apply_pow(&v, p);
        if op.parity(&np) != Some(pw) {
            return Err(broken("parity clash while isolating a pair"));
        }
        let c1 = op.form(&np, &op.apply_pow(&w, m)) + f(&w, &v, n - 1);
        if c1.is_zero() {
            return Err(broken("pair cannot be normalized"));
        }
        w = axpy(&w, &-am.checked_div(&c1)?, &np);
    }
    // cross pairings below the top degree
    for m in (0..n - 1).rev() {
        let e = f(&v, &w, m);
        if e.is_zero() {
            continue;
        }
        let p = n - 1 - m;
        w = axpy(&w, &-e, &op.apply_pow(&w, p));
    }
    for m in 0..n {
        let cross = f(&v, &w, m);
        let expected = if m == n - 1 { ExactScalar::one() } else { ExactScalar::zero() };
        if !f(&v, &v, m).is_zero() || !f(&w, &w, m).is_zero() || cross != expected {
            return Err(broken("pair normalization left a pairing"));
        }
    }
    Ok(RawPart::Pair { n, v, w })
}

/// Finds and normalizes one maximal string in `space`.
fn split_string(op: &Operator, space: &Graded, n: usize) -> Result<RawPart> {
    for p in [Parity::Even, Parity::Odd] {
        if let Some(v) = candidates(space.part(p)).find(|v| !op.form(v, &op.apply_pow(v, n - 1)).is_zero()) {
            return normalize_self_dual(op, v, n);
        }
    }
    let v_parities: &[Parity] = if n.is_multiple_of(2) {
        &[Parity::Even]
    } else {
        &[Parity::Even, Parity::Odd]
    };
    for &p in v_parities {
        let q = p.shifted(n - 1);
        for v in space.part(p) {
            for w in space.part(q) {
                if !op.form(v, &op.apply_pow(w, n - 1)).is_zero() {
                    return normalize_pair(op, v.clone(), w.clone(), n);
                }
            }
        }
    }
    Err(broken("no nondegenerate string of maximal length"))
}

/// The `Φ`-orthogonal complement of `taken` inside `space`.
fn complement(op: &Operator, space: &Graded, taken: &[Vector]) -> Graded {
    let mut out = Graded::default();
    for p in [Parity::Even, Parity::Odd] {
        let basis = space.part(p);
        if basis.is_empty() {
            continue;
        }
        let rows: Vec<Vec<ExactScalar>> = taken
            .iter()
            .map(|s| basis.iter().map(|b| op.form(s, b)).collect())
            .collect();
        let constraints = Matrix::from_rows(rows, basis.len()).expect("rectangular");
        for c in constraints.nullspace() {
            let mut v = vec![ExactScalar::zero(); op.dim];
            for (coef, b) in c.iter().zip(basis) {
                if !coef.is_zero() {
                    v = axpy(&v, coef, b);
                }
            }
            out.part_mut(p).push(v);
        }
    }
    out
}

/// The string vectors spanned by a part, in chain order.
pub(crate) fn part_vectors(op: &Operator, part: &RawPart) -> Vec<Vector> {
    match part {
        RawPart::SelfDual { n, v, .. } => op.chain(v, *n),
        RawPart::Pair { n, v, w } => {
            let mut out = op.chain(v, *n);
            out.extend(op.chain(w, *n));
            out
        }
        RawPart::Semisimple { e, .. } => op.chain(e, 4),
    }
}

/// Splits the operator of `B` into normalized indecomposable pieces.
pub(crate) fn decompose(op: &Operator) -> Result<Vec<RawPart>> {
    let (mut space, image) = fitting(op);
    let mut parts = Vec::new();
    if let Some(ss) = semisimple_part(op, &image)? {
        parts.push(ss);
    }
    while space.len() > 0 {
        let n = nilpotency_index(op, &space);
        let part = split_string(op, &space, n)?;
        let taken = part_vectors(op, &part);
        let rest = complement(op, &space, &taken);
        if rest.len() + taken.len() != space.len() {
            return Err(broken("complement has the wrong dimension"));
        }
        space = rest;
        parts.push(part);
    }
    Ok(parts)
}

/// Parity of the generator of a string part.
pub(crate) fn generator_parity(op: &Operator, part: &RawPart) -> Option<Parity> {
    match part {
        RawPart::SelfDual { v, .. } | RawPart::Pair { v, .. } => op.parity(v),
        RawPart::Semisimple { .. } => Some(Parity::Even),
    }
}

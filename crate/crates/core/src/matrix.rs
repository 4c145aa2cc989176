//! Small dense matrices over a [`Scalar`] field.
//!
//! Sizes never exceed a handful of rows, so everything is a plain row-major
//! `Vec`. Elimination routines rely on `is_zero`, which is exact over Q(i).

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{ApproxContext, ApproxScalar, ExactScalar, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Polynomial coefficients, highest degree first.
pub type Poly<S> = Vec<S>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, ctx: S::Context) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: S::Context) -> Self {
        let mut m = Matrix::zeros(n, n, ctx);
        for i in 0..n {
            m[(i, i)] = S::one(ctx);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {} has {} entries, expected {}",
                bad + 1,
                rows[bad].len(),
                cols
            )));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Column matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(columns: &[Vec<S>], rows: usize, ctx: S::Context) -> Self {
        let mut m = Matrix::zeros(rows, columns.len(), ctx);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| c.clone() * v.clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let ctx = self.ctx_or(rhs);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero(ctx);
            for t in 0..self.cols {
                let a = &self[(i, t)];
                let b = &rhs[(t, j)];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * b.clone();
            }
            acc
        })
    }

    /// Matrix product; panics on a shape mismatch (internal use).
    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("matrix shapes")
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length");
        let ctx = self.ctx_or(self);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero(ctx);
                for (t, x) in v.iter().enumerate() {
                    acc = acc + self[(i, t)].clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "matrix shapes");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "matrix shapes");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)].clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r0, c0) = a.shape();
        Matrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < r0, j < c0) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - c0)].clone(),
            (false, true) => c[(i - r0, j)].clone(),
            (false, false) => d[(i - r0, j - c0)].clone(),
        })
    }

    /// Block diagonal juxtaposition of the given matrices.
    pub fn block_diag(parts: &[Self], ctx: S::Context) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols, ctx);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m[(r + i, c + j)] = p[(i, j)].clone();
                }
            }
            r += p.rows;
            c += p.cols;
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_zero()))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..=i).all(|j| (self[(i, j)].clone() + self[(j, i)].clone()).is_zero())
            })
    }

    /// Largest entrywise [`Scalar::relative_distance`] to `other`.
    pub fn max_relative_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "matrix shapes");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.relative_distance(b))
            .fold(0.0, f64::max)
    }

    fn ctx_or(&self, other: &Self) -> S::Context {
        self.data
            .first()
            .or(other.data.first())
            .map(Scalar::context)
            .unwrap_or_default()
    }

    pub fn context(&self) -> S::Context {
        self.ctx_or(self)
    }

    /// Row echelon form by Gaussian elimination; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let ctx = self.context();
        let mut rref = self.clone();
        let pivots = rref.echelon();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![S::zero(ctx); self.cols];
            v[free] = S::one(ctx);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a maximal linearly independent subset of the columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.clone().echelon()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let ctx = self.context();
        let aug = Matrix::block(
            self,
            &Matrix::identity(n, ctx),
            &Matrix::zeros(0, n, ctx),
            &Matrix::zeros(0, n, ctx),
        );
        let mut aug = aug;
        let pivots = aug.echelon();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::DivisionByZero);
        }
        Ok(aug.submatrix(0..n, n..2 * n))
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let ctx = self.context();
        if n == 0 {
            return S::one(ctx);
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = S::one(ctx);
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return S::zero(ctx);
                };
                a.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(k, k)].clone() * a[(i, j)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = num.div(&prev).expect("Bareiss divisor is a previous pivot");
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    /// Coefficients of `det(t I - self)`, highest degree first, by the
    /// division-free Berkowitz recursion.
    pub fn charpoly(&self) -> Poly<S> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let ctx = self.context();
        // coefficient vector of the characteristic polynomial of the leading
        // r x r block, built up one row/column at a time.
        let mut poly: Vec<S> = vec![S::one(ctx)];
        for r in 0..n {
            // A_r = [[a, R], [C, M]] where M is the leading r x r block
            let a = self[(r, r)].clone();
            let row: Vec<S> = (0..r).map(|j| self[(r, j)].clone()).collect();
            let col: Vec<S> = (0..r).map(|i| self[(i, r)].clone()).collect();
            let m = self.submatrix(0..r, 0..r);
            // Toeplitz column: 1, -a, -R C, -R M C, -R M^2 C, ...
            let mut toeplitz = vec![S::one(ctx), -a];
            let mut v = col;
            for _ in 0..r {
                let dot = row
                    .iter()
                    .zip(&v)
                    .fold(S::zero(ctx), |acc, (x, y)| acc + x.clone() * y.clone());
                toeplitz.push(-dot);
                v = m.mul_vec(&v);
            }
            // new poly = T * old poly (lower triangular Toeplitz, (r+2) x (r+1))
            let mut next = vec![S::zero(ctx); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, p) in poly.iter().enumerate() {
                    if i >= j && i - j < toeplitz.len() {
                        *slot = slot.clone() + toeplitz[i - j].clone() * p.clone();
                    }
                }
            }
            poly = next;
        }
        poly
    }
}

impl Matrix<ExactScalar> {
    /// Builds an exact matrix from scalar-grammar strings.
    pub fn parse(rows: &[&[&str]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(parsed, cols)
    }

    pub fn to_approx(&self, ctx: ApproxContext) -> Matrix<ApproxScalar> {
        self.map(|v| v.to_approx(ctx))
    }
}

/// The block-diagonal symplectic unit `J_{2l} = diag(J, ..., J)` with
/// `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_unit<S: Scalar>(two_ell: usize, ctx: S::Context) -> Matrix<S> {
    assert!(two_ell.is_multiple_of(2), "symplectic unit needs even size");
    let mut j = Matrix::zeros(two_ell, two_ell, ctx);
    for p in 0..two_ell / 2 {
        j[(2 * p, 2 * p + 1)] = S::one(ctx);
        j[(2 * p + 1, 2 * p)] = -S::one(ctx);
    }
    j
}

/// Evaluates a degree-descending polynomial at `x` (Horner).
pub fn poly_eval<S: Scalar>(p: &[S], x: &S) -> S {
    let ctx = x.context();
    p.iter()
        .fold(S::zero(ctx), |acc, c| acc * x.clone() + c.clone())
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

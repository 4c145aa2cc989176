//! Finite-dimensional Lie superalgebras given by structure constants, and
//! the oscillator extension `A = V + CK + Cκ` of a skew-supersymmetric form.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;
use crate::superspace::{Flavor, GramForm};

/// `0` for even, `1` for odd.
pub type Parity = u8;

/// A Lie superalgebra with basis `x_0, ..., x_(n-1)`:
/// `[x_i, x_j] = Σ_k c[i][j][k] x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperAlgebra {
    names: Vec<String>,
    parities: Vec<Parity>,
    structure: Vec<Vec<Vec<ExactScalar>>>,
}

impl SuperAlgebra {
    /// An abelian algebra on the given basis.
    pub fn abelian(names: Vec<String>, parities: Vec<Parity>) -> Result<Self> {
        if names.len() != parities.len() {
            return Err(Error::Shape("one parity per basis element".into()));
        }
        if parities.iter().any(|&p| p > 1) {
            return Err(Error::Invalid("parities are 0 or 1".into()));
        }
        let n = names.len();
        Ok(SuperAlgebra {
            names,
            parities,
            structure: vec![vec![vec![ExactScalar::zero(); n]; n]; n],
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// `[x_i, x_j]` as a coefficient vector.
    pub fn bracket(&self, i: usize, j: usize) -> &[ExactScalar] {
        &self.structure[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &ExactScalar {
        &self.structure[i][j][k]
    }

    /// Overwrites one structure constant (no consistency check).
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, value: ExactScalar) {
        self.structure[i][j][k] = value;
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket_vectors(&self, u: &[ExactScalar], v: &[ExactScalar]) -> Vec<ExactScalar> {
        let n = self.dim();
        let mut out = vec![ExactScalar::zero(); n];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// Structure constants in the basis `x'_a = Σ_i m[i][a] x_i`.
    ///
    /// `m` must be invertible and parity preserving.
    pub fn change_basis(&self, m: &Matrix<ExactScalar>) -> Result<SuperAlgebra> {
        let n = self.dim();
        if m.shape() != (n, n) {
            return Err(Error::Shape("basis change must be square".into()));
        }
        let inv = m.inverse()?;
        let mut out = SuperAlgebra::abelian(self.names.clone(), self.parities.clone())?;
        for a in 0..n {
            for b in 0..n {
                let image = self.bracket_vectors(&m.col(a), &m.col(b));
                out.structure[a][b] = inv.mul_vec(&image);
            }
        }
        Ok(out)
    }

    /// Nonzero structure constants as `[x_i, x_j] = c * x_k`, `i <= j`.
    pub fn structure_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        lines.push(format!(
                            "[{}, {}] = {} * {}",
                            self.names[i], self.names[j], c, self.names[k]
                        ));
                    }
                }
            }
        }
        lines
    }
}

impl fmt::Display for SuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.structure_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn basis_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 && prefix == "a" {
        return vec!["a".into()];
    }
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `A = V + CK + Cκ` with `[x, y] = (x|y) K` for equal parities,
/// `(x|y) κ` otherwise, and `K` (even), `κ` (odd) central.
///
/// Even basis vectors are named `b1, b2, ...`, odd ones `a` (or
/// `a1, a2, ...`), followed by `K` and `kappa`.
pub fn oscillator_algebra(g: &GramForm<ExactScalar>) -> Result<SuperAlgebra> {
    if g.flavor() != Flavor::SkewSupersymmetric {
        return Err(Error::Invalid("oscillator algebras need a skew-supersymmetric form".into()));
    }
    let (m, n) = (g.even_dim(), g.odd_dim());
    let mut names = basis_names("b", m);
    names.extend(basis_names("a", n));
    names.push("K".into());
    names.push("kappa".into());
    let mut parities = vec![0; m];
    parities.extend(vec![1; n]);
    parities.extend([0, 1]);
    let mut alg = SuperAlgebra::abelian(names, parities)?;
    let full = g.gram_matrix();
    let (k_idx, kappa_idx) = (m + n, m + n + 1);
    for i in 0..m + n {
        for j in 0..m + n {
            let target = if alg.parities[i] == alg.parities[j] { k_idx } else { kappa_idx };
            alg.structure[i][j][target] = full[(i, j)].clone();
        }
    }
    Ok(alg)
}

/// One failed axiom instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Violation {
    /// `c[i][j][k] != 0` with `p(k) != p(i) + p(j)`.
    Parity { i: usize, j: usize, k: usize },
    /// `[x_i, x_j] + (-1)^(p_i p_j) [x_j, x_i]`.
    SkewSymmetry { i: usize, j: usize, defect: Vec<ExactScalar> },
    /// The cyclic super Jacobi sum for `(x_i, x_j, x_k)`.
    Jacobi { i: usize, j: usize, k: usize, defect: Vec<ExactScalar> },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sign(odd: bool) -> ExactScalar {
    ExactScalar::from(if odd { -1 } else { 1 })
}

fn unit(n: usize, i: usize) -> Vec<ExactScalar> {
    (0..n)
        .map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
        .collect()
}

/// Parity homogeneity, super skew-symmetry and the super Jacobi identity
/// `(-1)^(p(x)p(z)) [x,[y,z]] + (-1)^(p(y)p(x)) [y,[z,x]] + (-1)^(p(z)p(y)) [z,[x,y]] = 0`
/// on all basis elements.
pub fn check_super_axioms(alg: &SuperAlgebra) -> AxiomReport {
    let n = alg.dim();
    let p = &alg.parities;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in alg.structure[i][j].iter().enumerate() {
                if !c.is_zero() && p[k] != (p[i] + p[j]) % 2 {
                    violations.push(Violation::Parity { i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let s = sign(p[i] == 1 && p[j] == 1);
            let defect: Vec<ExactScalar> = alg.structure[i][j]
                .iter()
                .zip(&alg.structure[j][i])
                .map(|(a, b)| a + &(&s * b))
                .collect();
            if defect.iter().any(|d| !d.is_zero()) {
                violations.push(Violation::SkewSymmetry { i, j, defect });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let nested = |x: usize, y: usize, z: usize| {
                    let inner = alg.bracket(y, z).to_vec();
                    let outer = alg.bracket_vectors(&unit(n, x), &inner);
                    let s = sign(p[x] == 1 && p[z] == 1);
                    outer.into_iter().map(|v| &s * &v).collect::<Vec<_>>()
                };
                let (a, b, c) = (nested(i, j, k), nested(j, k, i), nested(k, i, j));
                let defect: Vec<ExactScalar> = (0..n).map(|t| &(&a[t] + &b[t]) + &c[t]).collect();
                if defect.iter().any(|d| !d.is_zero()) {
                    violations.push(Violation::Jacobi { i, j, k, defect });
                }
            }
        }
    }
    AxiomReport { violations }
}

//! Truncated Fock modules `C[x] ⊗ Cξ` and `C[x] ⊗ Λ(ξ, κ)` for the
//! oscillator algebras on `(b1, b2, a, K, kappa)`.
//!
//! Basis vectors are monomials `x^n ξ^e κ^f` with `n <= N`. Multiplication
//! by `x` kills `x^N`, so identities are only checked on low degrees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;
use crate::superalgebra::{Parity, SuperAlgebra};
use crate::uea::{span_names, BracketTable, OspGenerators, Uea, UeaElement, OSP_PARITIES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FockVariant {
    /// `b1 ↦ ∂x`, no κ factor; `kappa ↦ 0`.
    Homogeneous,
    /// `b1 ↦ ∂x + κ∂ξ`, `kappa ↦ κ·`.
    Inhomogeneous,
}

impl fmt::Display for FockVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FockVariant::Homogeneous => "homogeneous",
            FockVariant::Inhomogeneous => "inhomogeneous",
        })
    }
}

impl FromStr for FockVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homogeneous" => Ok(FockVariant::Homogeneous),
            "inhomogeneous" => Ok(FockVariant::Inhomogeneous),
            _ => Err(Error::Invalid(format!("unknown Fock variant {s}"))),
        }
    }
}

/// `x^n ξ^e κ^f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockBasisVector {
    pub n: usize,
    pub e: u8,
    pub f: u8,
}

impl FockBasisVector {
    pub fn parity(&self) -> Parity {
        (self.e + self.f) % 2
    }
}

impl fmt::Display for FockBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.n {
            0 => {}
            1 => parts.push("x".to_string()),
            n => parts.push(format!("x^{n}")),
        }
        if self.e == 1 {
            parts.push("xi".into());
        }
        if self.f == 1 {
            parts.push("kappa".into());
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// The truncated basis in index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    pub variant: FockVariant,
    pub max_degree: usize,
}

impl FockSpace {
    pub fn new(variant: FockVariant, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::Invalid("truncation degree must be at least 1".into()));
        }
        Ok(FockSpace { variant, max_degree })
    }

    fn kappa_slots(&self) -> usize {
        match self.variant {
            FockVariant::Homogeneous => 1,
            FockVariant::Inhomogeneous => 2,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.kappa_slots() * (self.max_degree + 1)
    }

    pub fn index(&self, v: FockBasisVector) -> Option<usize> {
        if v.n > self.max_degree || v.e > 1 || v.f as usize >= self.kappa_slots() {
            return None;
        }
        Some((v.n * 2 + v.e as usize) * self.kappa_slots() + v.f as usize)
    }

    pub fn vector(&self, i: usize) -> FockBasisVector {
        let slots = self.kappa_slots();
        let f = (i % slots) as u8;
        let rest = i / slots;
        FockBasisVector { n: rest / 2, e: (rest % 2) as u8, f }
    }

    pub fn basis(&self) -> impl Iterator<Item = FockBasisVector> + '_ {
        (0..self.dim()).map(|i| self.vector(i))
    }

    fn operator(&self, parity: Parity, image: impl Fn(FockBasisVector) -> Vec<(FockBasisVector, ExactScalar)>) -> FockOperator {
        let mut m = Matrix::zeros(self.dim(), self.dim(), ());
        for j in 0..self.dim() {
            for (v, c) in image(self.vector(j)) {
                if let Some(i) = self.index(v) {
                    m[(i, j)] = &m[(i, j)] + &c;
                }
            }
        }
        FockOperator { space: *self, parity, matrix: m }
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator { space: *self, parity: 0, matrix: Matrix::identity(self.dim(), ()) }
    }

    pub fn zero(&self, parity: Parity) -> FockOperator {
        FockOperator { space: *self, parity, matrix: Matrix::zeros(self.dim(), self.dim(), ()) }
    }

    pub fn d_x(&self) -> FockOperator {
        self.operator(0, |v| match v.n {
            0 => vec![],
            n => vec![(FockBasisVector { n: n - 1, ..v }, ExactScalar::from(n as i64))],
        })
    }

    /// Multiplication by `x`; `x^N` is sent to zero.
    pub fn mul_x(&self) -> FockOperator {
        self.operator(0, |v| vec![(FockBasisVector { n: v.n + 1, ..v }, ExactScalar::one())])
    }

    /// Left multiplication by `ξ` with `ξ² = 1/2`.
    pub fn mul_xi(&self) -> FockOperator {
        self.operator(1, |v| match v.e {
            0 => vec![(FockBasisVector { e: 1, ..v }, ExactScalar::one())],
            _ => vec![(FockBasisVector { e: 0, ..v }, "1/2".parse().unwrap())],
        })
    }

    /// `∂ξ(x^n ξ^e κ^f) = e x^n κ^f`.
    pub fn d_xi(&self) -> FockOperator {
        self.operator(1, |v| match v.e {
            0 => vec![],
            _ => vec![(FockBasisVector { e: 0, ..v }, ExactScalar::one())],
        })
    }

    /// Left multiplication by `κ`, moved past `ξ^e`.
    pub fn mul_kappa(&self) -> FockOperator {
        self.operator(1, |v| match v.f {
            0 => vec![(FockBasisVector { f: 1, ..v }, ExactScalar::from(if v.e == 1 { -1 } else { 1 }))],
            _ => vec![],
        })
    }
}

/// A parity-homogeneous linear map on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    pub space: FockSpace,
    pub parity: Parity,
    pub matrix: Matrix<ExactScalar>,
}

impl FockOperator {
    pub fn compose(&self, other: &Self) -> Self {
        FockOperator {
            space: self.space,
            parity: (self.parity + other.parity) % 2,
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FockOperator { space: self.space, parity: self.parity, matrix: self.matrix.add(&other.matrix) }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        FockOperator { space: self.space, parity: self.parity, matrix: self.matrix.scale(c) }
    }

    /// `ST - (-1)^(p(S)p(T)) TS`.
    pub fn super_commutator(&self, other: &Self) -> Self {
        let st = self.compose(other);
        let ts = other.compose(self);
        let sign = ExactScalar::from(if self.parity == 1 && other.parity == 1 { 1 } else { -1 });
        st.add(&ts.scale(&sign))
    }

    /// The image of a basis vector as a list of nonzero coordinates.
    pub fn apply(&self, v: FockBasisVector) -> Vec<(FockBasisVector, ExactScalar)> {
        let Some(j) = self.space.index(v) else {
            return Vec::new();
        };
        (0..self.space.dim())
            .filter(|&i| !self.matrix[(i, j)].is_zero())
            .map(|i| (self.space.vector(i), self.matrix[(i, j)].clone()))
            .collect()
    }

    /// Nonzero entries only between vectors whose parities differ by `parity`.
    pub fn is_parity_consistent(&self) -> bool {
        let s = &self.space;
        (0..s.dim()).all(|i| {
            (0..s.dim()).all(|j| {
                self.matrix[(i, j)].is_zero() || (s.vector(i).parity() + s.vector(j).parity()) % 2 == self.parity
            })
        })
    }

    /// Input basis vectors of degree `<= max_degree` on which `self` and
    /// `other` differ.
    pub fn differences(&self, other: &Self, max_degree: usize) -> Vec<FockBasisVector> {
        let s = &self.space;
        (0..s.dim())
            .filter(|&j| s.vector(j).n <= max_degree)
            .filter(|&j| (0..s.dim()).any(|i| self.matrix[(i, j)] != other.matrix[(i, j)]))
            .map(|j| s.vector(j))
            .collect()
    }
}

const GENERATORS: [&str; 5] = ["b1", "b2", "a", "K", "kappa"];

/// The operator assigned to a generator of `A`.
pub fn rho(generator: &str, max_degree: usize, variant: FockVariant) -> Result<FockOperator> {
    let s = FockSpace::new(variant, max_degree)?;
    let inhomogeneous = variant == FockVariant::Inhomogeneous;
    Ok(match generator {
        "b1" if inhomogeneous => s.d_x().add(&s.mul_kappa().compose(&s.d_xi())),
        "b1" => s.d_x(),
        "b2" => s.mul_x(),
        "a" => s.mul_xi(),
        "K" => s.identity(),
        "kappa" if inhomogeneous => s.mul_kappa(),
        "kappa" => s.zero(1),
        other => return Err(Error::Invalid(format!("unknown generator {other}"))),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockDefect {
    pub identity: String,
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FockReport {
    pub checked: usize,
    pub defects: Vec<FockDefect>,
}

impl FockReport {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }

    fn record(&mut self, identity: String, lhs: &FockOperator, rhs: &FockOperator, max_degree: usize) {
        self.checked += 1;
        let bad = lhs.differences(rhs, max_degree);
        if !bad.is_empty() {
            self.defects.push(FockDefect { identity, inputs: bad.iter().map(|v| v.to_string()).collect() });
        }
    }
}

fn check_shape(alg: &SuperAlgebra) -> Result<()> {
    let names: Vec<&str> = alg.names().iter().map(String::as_str).collect();
    if names != GENERATORS {
        return Err(Error::Shape("expected the basis b1, b2, a, K, kappa".into()));
    }
    Ok(())
}

/// `[ρ(u), ρ(v)] = ρ([u, v])` for all generator pairs, on degrees `<= N - 2`.
pub fn representation_check(alg: &SuperAlgebra, variant: FockVariant, max_degree: usize) -> Result<FockReport> {
    check_shape(alg)?;
    if max_degree < 2 {
        return Err(Error::Invalid("representation checks need N >= 2".into()));
    }
    let ops: Vec<FockOperator> = GENERATORS
        .iter()
        .map(|g| rho(g, max_degree, variant))
        .collect::<Result<_>>()?;
    let mut report = FockReport::default();
    for i in 0..5 {
        for j in 0..5 {
            let lhs = ops[i].super_commutator(&ops[j]);
            let parity = (alg.parity(i) + alg.parity(j)) % 2;
            let mut rhs = ops[0].space.zero(parity);
            for (k, c) in alg.bracket(i, j).iter().enumerate() {
                if !c.is_zero() {
                    rhs = rhs.add(&ops[k].scale(c));
                }
            }
            report.record(format!("[{}, {}]", GENERATORS[i], GENERATORS[j]), &lhs, &rhs, max_degree - 2);
        }
    }
    Ok(report)
}

/// Evaluates a normal-ordered element as an operator.
pub fn evaluate(uea: &Uea, u: &UeaElement, max_degree: usize, variant: FockVariant) -> Result<FockOperator> {
    check_shape(uea.algebra())?;
    let ops: Vec<FockOperator> = GENERATORS
        .iter()
        .map(|g| rho(g, max_degree, variant))
        .collect::<Result<_>>()?;
    let space = ops[0].space;
    let parity = uea.parity(u)?.unwrap_or(0);
    let mut out = space.zero(parity);
    for (m, c) in u.terms() {
        let mut term = space.identity();
        for &x in m {
            term = term.compose(&ops[x]);
        }
        out = out.add(&term.scale(c));
    }
    out.parity = parity;
    Ok(out)
}

/// Rechecks every entry of `table` as an operator identity on degrees
/// `<= N - 4`.
pub fn osp_action_check(
    uea: &Uea,
    gens: &OspGenerators,
    table: &BracketTable,
    variant: FockVariant,
    max_degree: usize,
) -> Result<FockReport> {
    if max_degree < 4 {
        return Err(Error::Invalid("osp action checks need N >= 4".into()));
    }
    let kappa = uea.generator_named("kappa")?;
    let mut span = Vec::with_capacity(10);
    for g in gens.as_array() {
        span.push(evaluate(uea, g, max_degree, variant)?);
    }
    for (t, g) in gens.as_array().into_iter().enumerate() {
        let mut op = evaluate(uea, &uea.normal_product(&kappa, g), max_degree, variant)?;
        op.parity = (OSP_PARITIES[t] + 1) % 2;
        span.push(op);
    }
    let names = span_names();
    let mut report = FockReport::default();
    for i in 0..span.len() {
        for j in 0..span.len() {
            let lhs = span[i].super_commutator(&span[j]);
            let mut rhs = span[0].space.zero(lhs.parity);
            for (k, c) in table.entry(i, j).iter().enumerate() {
                if !c.is_zero() {
                    rhs = rhs.add(&span[k].scale(c));
                }
            }
            report.record(format!("[{}, {}]", names[i], names[j]), &lhs, &rhs, max_degree - 4);
        }
    }
    Ok(report)
}

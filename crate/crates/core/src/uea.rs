//! Normal ordering in the universal enveloping algebra `U(A)` of a
//! [`SuperAlgebra`], and the `osp(1|2)` computations built on it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;
use crate::superalgebra::{Parity, SuperAlgebra};

/// Nondecreasing basis indices; odd indices appear at most once.
pub type Monomial = Vec<usize>;

/// Which disorder is rewritten first. Both give the same normal form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// A linear combination of normal monomials. Zero coefficients are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UeaElement {
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: ExactScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(Vec::new(), c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[usize]) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(ExactScalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ExactScalar::from(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }
}

/// Formats `Σ c_i * name_i`, dropping unit coefficients.
pub(crate) fn format_combination(terms: &[(ExactScalar, String)]) -> String {
    let mut out = String::new();
    for (c, name) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let text = c.to_string();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) if c.is_real() => (true, rest.to_string()),
            _ => (false, text),
        };
        let body = if c.is_real() { body } else { format!("({body})") };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match (body.as_str(), name.is_empty()) {
            (b, true) => out.push_str(b),
            ("1", false) => out.push_str(name),
            (b, false) => {
                out.push_str(b);
                out.push('*');
                out.push_str(name);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `U(A)` with a fixed rewriting strategy.
///
/// With a central unit `K`, computations take place in `U(A)/(K - 1)`.
#[derive(Clone, Debug)]
pub struct Uea {
    alg: SuperAlgebra,
    central_unit: Option<usize>,
    strategy: Strategy,
}

impl Uea {
    pub fn new(alg: SuperAlgebra) -> Self {
        Uea { alg, central_unit: None, strategy: Strategy::Leftmost }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Sets the named even central element to `1`.
    pub fn with_central_unit(mut self, name: &str) -> Result<Self> {
        let k = self
            .alg
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("no basis element named {name}")))?;
        let n = self.alg.dim();
        let central = (0..n).all(|j| self.alg.bracket(k, j).iter().all(|c| c.is_zero()));
        if self.alg.parity(k) != 0 || !central {
            return Err(Error::Invalid(format!("{name} is not even and central")));
        }
        self.central_unit = Some(k);
        Ok(self)
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.alg
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn generator(&self, i: usize) -> UeaElement {
        self.word(&[i])
    }

    pub fn generator_named(&self, name: &str) -> Result<UeaElement> {
        self.alg
            .index_of(name)
            .map(|i| self.generator(i))
            .ok_or_else(|| Error::Invalid(format!("no basis element named {name}")))
    }

    /// The normal form of the product `x_(w_0) x_(w_1) ...`.
    pub fn word(&self, w: &[usize]) -> UeaElement {
        let mut out = UeaElement::zero();
        let mut stack = vec![(w.to_vec(), ExactScalar::one())];
        while let Some((mut word, c)) = stack.pop() {
            if let Some(k) = self.central_unit {
                word.retain(|&x| x != k);
            }
            let Some(pos) = self.disorder(&word) else {
                out.add_term(word, c);
                continue;
            };
            let (x, y) = (word[pos], word[pos + 1]);
            let splice = |mid: &[usize]| {
                let mut v = word[..pos].to_vec();
                v.extend_from_slice(mid);
                v.extend_from_slice(&word[pos + 2..]);
                v
            };
            if x == y {
                // x x = 1/2 [x, x] for odd x
                let half = &c * &"1/2".parse::<ExactScalar>().unwrap();
                for (k, v) in self.alg.bracket(x, x).iter().enumerate() {
                    if !v.is_zero() {
                        stack.push((splice(&[k]), &half * v));
                    }
                }
                continue;
            }
            let odd = self.alg.parity(x) == 1 && self.alg.parity(y) == 1;
            let sign = ExactScalar::from(if odd { -1 } else { 1 });
            stack.push((splice(&[y, x]), &c * &sign));
            for (k, v) in self.alg.bracket(x, y).iter().enumerate() {
                if !v.is_zero() {
                    stack.push((splice(&[k]), &c * v));
                }
            }
        }
        out
    }

    fn disorder(&self, w: &[usize]) -> Option<usize> {
        let bad = |i: &usize| {
            let (x, y) = (w[*i], w[*i + 1]);
            x > y || (x == y && self.alg.parity(x) == 1)
        };
        let mut positions = 0..w.len().saturating_sub(1);
        match self.strategy {
            Strategy::Leftmost => positions.find(bad),
            Strategy::Rightmost => positions.rev().find(bad),
        }
    }

    pub fn normal_product(&self, u: &UeaElement, v: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m1, c1) in &u.terms {
            for (m2, c2) in &v.terms {
                let mut w = m1.clone();
                w.extend_from_slice(m2);
                out = out.add(&self.word(&w).scale(&(c1 * c2)));
            }
        }
        out
    }

    /// `None` for zero, `Some(p)` for parity-homogeneous elements.
    pub fn parity(&self, u: &UeaElement) -> Result<Option<Parity>> {
        let mut parity = None;
        for m in u.terms.keys() {
            let p = (m.iter().map(|&i| self.alg.parity(i) as usize).sum::<usize>() % 2) as Parity;
            match parity {
                Some(q) if q != p => return Err(Error::Invalid("element is not parity homogeneous".into())),
                _ => parity = Some(p),
            }
        }
        Ok(parity)
    }

    /// `uv - (-1)^(p(u)p(v)) vu`.
    pub fn super_bracket(&self, u: &UeaElement, v: &UeaElement) -> Result<UeaElement> {
        let (pu, pv) = (self.parity(u)?, self.parity(v)?);
        let odd = pu == Some(1) && pv == Some(1);
        let vu = self.normal_product(v, u);
        let vu = if odd { vu.scale(&ExactScalar::from(-1)) } else { vu };
        Ok(self.normal_product(u, v).sub(&vu))
    }

    pub fn format(&self, u: &UeaElement) -> String {
        let terms: Vec<(ExactScalar, String)> = u
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), self.format_monomial(m)))
            .collect();
        format_combination(&terms)
    }

    fn format_monomial(&self, m: &[usize]) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let j = m[i..].iter().take_while(|&&x| x == m[i]).count();
            let name = self.alg.name(m[i]);
            parts.push(if j == 1 { name.to_string() } else { format!("{name}^{j}") });
            i += j;
        }
        parts.join("*")
    }
}

/// Names of the `osp(1|2)` basis in table order.
pub const OSP_NAMES: [&str; 5] = ["H", "E+", "E-", "F+", "F-"];

/// Parities of [`OSP_NAMES`].
pub const OSP_PARITIES: [Parity; 5] = [0, 0, 0, 1, 1];

/// The quadratic elements `H, E+, E-, F+, F-`.
#[derive(Clone, Debug, PartialEq)]
pub struct OspGenerators {
    pub h: UeaElement,
    pub e_plus: UeaElement,
    pub e_minus: UeaElement,
    pub f_plus: UeaElement,
    pub f_minus: UeaElement,
}

impl OspGenerators {
    pub fn as_array(&self) -> [&UeaElement; 5] {
        [&self.h, &self.e_plus, &self.e_minus, &self.f_plus, &self.f_minus]
    }
}

fn q(t: &str) -> ExactScalar {
    t.parse().expect("rational literal")
}

/// `H = 1/4 b2 b1 + 1/4 b1 b2`, `E+ = 1/2 b2^2`, `E- = -1/2 b1^2`,
/// `F+ = 1/4 a b2 + 1/4 b2 a`, `F- = 1/4 a b1 + 1/4 b1 a`.
pub fn osp_generators(uea: &Uea) -> Result<OspGenerators> {
    let names: Vec<&str> = uea.alg.names().iter().map(String::as_str).collect();
    if names != ["b1", "b2", "a", "K", "kappa"] || uea.alg.parities() != [0, 0, 1, 0, 1] {
        return Err(Error::Shape("expected the basis b1, b2, a, K, kappa".into()));
    }
    let (b1, b2, a) = (0, 1, 2);
    let quarter_sym = |x: usize, y: usize| uea.word(&[x, y]).add(&uea.word(&[y, x])).scale(&q("1/4"));
    Ok(OspGenerators {
        h: quarter_sym(b2, b1),
        e_plus: uea.word(&[b2, b2]).scale(&q("1/2")),
        e_minus: uea.word(&[b1, b1]).scale(&q("-1/2")),
        f_plus: quarter_sym(a, b2),
        f_minus: quarter_sym(a, b1),
    })
}

/// Brackets of the span `{H, E±, F±} ∪ κ{H, E±, F±}`, in coordinates.
///
/// `entries[i][j]` is `[s_i, s_j]` with `s_0..s_4` the generators and
/// `s_(5+t) = κ s_t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketTable {
    pub entries: Vec<Vec<Vec<ExactScalar>>>,
}

/// Span element names, generators first.
pub fn span_names() -> Vec<String> {
    let mut out: Vec<String> = OSP_NAMES.iter().map(|s| s.to_string()).collect();
    out.extend(OSP_NAMES.iter().map(|s| format!("kappa*{s}")));
    out
}

fn span_parity(i: usize) -> Parity {
    (OSP_PARITIES[i % 5] + (i / 5) as Parity) % 2
}

/// Coordinates of `target` in the span of `basis`.
fn solve_in_span(basis: &[UeaElement], target: &UeaElement) -> Option<Vec<ExactScalar>> {
    let mut keys: Vec<&Monomial> = basis.iter().flat_map(|b| b.terms.keys()).collect();
    keys.extend(target.terms.keys());
    keys.sort();
    keys.dedup();
    let n = basis.len();
    let rows: Vec<Vec<ExactScalar>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<ExactScalar> = basis.iter().map(|b| b.coefficient(k)).collect();
            row.push(-target.coefficient(k));
            row
        })
        .collect();
    let m = Matrix::from_rows(rows, n + 1).ok()?;
    let kernel = m.nullspace();
    let v = kernel.iter().find(|v| !v[n].is_zero())?;
    let scale = v[n].recip().ok()?;
    Some(v[..n].iter().map(|x| x * &scale).collect())
}

/// Fails with the offending bracket if some bracket leaves the span.
pub fn bracket_table(uea: &Uea, gens: &OspGenerators) -> Result<BracketTable> {
    let kappa = uea.generator_named("kappa")?;
    let mut span: Vec<UeaElement> = gens.as_array().into_iter().cloned().collect();
    for t in 0..5 {
        let s = uea.normal_product(&kappa, &span[t]);
        span.push(s);
    }
    let names = span_names();
    let mut entries = Vec::with_capacity(span.len());
    for (i, x) in span.iter().enumerate() {
        let mut row = Vec::with_capacity(span.len());
        for (j, y) in span.iter().enumerate() {
            let value = uea.super_bracket(x, y)?;
            let coords = solve_in_span(&span, &value).ok_or_else(|| {
                Error::Verification(format!(
                    "[{}, {}] = {} leaves the span",
                    names[i],
                    names[j],
                    uea.format(&value)
                ))
            })?;
            row.push(coords);
        }
        entries.push(row);
    }
    Ok(BracketTable { entries })
}

impl BracketTable {
    pub fn entry(&self, i: usize, j: usize) -> &[ExactScalar] {
        &self.entries[i][j]
    }

    /// `[x, y]` or `{x, y}` for the generator pairs `i <= j`.
    pub fn lines(&self) -> Vec<String> {
        let names = span_names();
        let mut out = Vec::new();
        for i in 0..5 {
            for j in i..5 {
                let (l, r) = if OSP_PARITIES[i] == 1 && OSP_PARITIES[j] == 1 { ('{', '}') } else { ('[', ']') };
                let terms: Vec<(ExactScalar, String)> =
                    self.entries[i][j].iter().cloned().zip(names.iter().cloned()).collect();
                out.push(format!("{l}{}, {}{r} = {}", OSP_NAMES[i], OSP_NAMES[j], format_combination(&terms)));
            }
        }
        out
    }
}

/// `[a, b]_L = [a, b] + κ γ(a, b)` split into its two parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleTable {
    /// `γ(a, b)` in the `osp(1|2)` basis, for all 25 ordered pairs.
    pub gamma: Vec<Vec<Vec<ExactScalar>>>,
    /// The undeformed bracket `[a, b]`.
    pub bracket: Vec<Vec<Vec<ExactScalar>>>,
}

pub fn cocycle_from_table(table: &BracketTable) -> Result<CocycleTable> {
    let mut gamma = vec![vec![Vec::new(); 5]; 5];
    let mut bracket = vec![vec![Vec::new(); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            let e = &table.entries[i][j];
            if e.len() != 10 {
                return Err(Error::Shape("bracket table entries have 10 coordinates".into()));
            }
            bracket[i][j] = e[..5].to_vec();
            gamma[i][j] = e[5..].to_vec();
        }
    }
    Ok(CocycleTable { gamma, bracket })
}

impl CocycleTable {
    pub fn lines(&self) -> Vec<String> {
        let names: Vec<String> = OSP_NAMES.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let terms: Vec<(ExactScalar, String)> =
                    self.gamma[i][j].iter().cloned().zip(names.iter().cloned()).collect();
                out.push(format!("gamma({}, {}) = {}", OSP_NAMES[i], OSP_NAMES[j], format_combination(&terms)));
            }
        }
        out
    }

    fn bracket_vectors(&self, u: &[ExactScalar], v: &[ExactScalar]) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(); 5];
        for i in 0..5 {
            for j in 0..5 {
                if u[i].is_zero() || v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for (k, b) in self.bracket[i][j].iter().enumerate() {
                    out[k] = &out[k] + &(&c * b);
                }
            }
        }
        out
    }
}

/// A linear map on `osp(1|2)` given by the images of `H, E+, E-, F+, F-`.
pub type OspMap = [Vec<ExactScalar>; 5];

/// `f(H) = f(E±) = 0`, `f(F+) = E+`, `f(F-) = H`.
pub fn standard_trivializing_map() -> OspMap {
    let e = |i: usize| (0..5).map(|j| ExactScalar::from(i64::from(i == j))).collect::<Vec<_>>();
    let z = vec![ExactScalar::zero(); 5];
    [z.clone(), z.clone(), z, e(1), e(0)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrivialityDefect {
    pub a: usize,
    pub b: usize,
    pub gamma: Vec<ExactScalar>,
    pub coboundary: Vec<ExactScalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrivialityReport {
    pub defects: Vec<TrivialityDefect>,
}

impl TrivialityReport {
    pub fn is_trivial(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Compares `γ(a, b)` with
/// `(-1)^p(a) [a, f(b)] - (-1)^((p(a)+1)p(b)) [b, f(a)] - f([a, b])`
/// on all ordered basis pairs, using the undeformed bracket.
pub fn triviality_check(gamma: &CocycleTable, f: &OspMap) -> TrivialityReport {
    let e = |i: usize| (0..5).map(|j| ExactScalar::from(i64::from(i == j))).collect::<Vec<_>>();
    let apply_f = |v: &[ExactScalar]| {
        let mut out = vec![ExactScalar::zero(); 5];
        for (i, c) in v.iter().enumerate() {
            for k in 0..5 {
                out[k] = &out[k] + &(c * &f[i][k]);
            }
        }
        out
    };
    let mut defects = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            let (pa, pb) = (OSP_PARITIES[a], OSP_PARITIES[b]);
            let s1 = ExactScalar::from(if pa == 1 { -1 } else { 1 });
            let s2 = ExactScalar::from(if (pa + 1) * pb % 2 == 1 { -1 } else { 1 });
            let t1 = gamma.bracket_vectors(&e(a), &f[b]);
            let t2 = gamma.bracket_vectors(&e(b), &f[a]);
            let t3 = apply_f(&gamma.bracket[a][b]);
            let rhs: Vec<ExactScalar> = (0..5)
                .map(|k| &(&(&s1 * &t1[k]) - &(&s2 * &t2[k])) - &t3[k])
                .collect();
            if rhs != gamma.gamma[a][b] {
                defects.push(TrivialityDefect { a, b, gamma: gamma.gamma[a][b].clone(), coboundary: rhs });
            }
        }
    }
    TrivialityReport { defects }
}

/// `M = κ{H, E±, F±}` is abelian and `[x, κy] = (-1)^p(x) κ[x, y]`.
pub fn adjoint_ideal_check(table: &BracketTable) -> bool {
    let zero = vec![ExactScalar::zero(); 10];
    for i in 5..10 {
        for j in 5..10 {
            if table.entries[i][j] != zero {
                return false;
            }
        }
    }
    for x in 0..5 {
        let s = ExactScalar::from(if span_parity(x) == 1 { -1 } else { 1 });
        for y in 0..5 {
            let mut expected = zero.clone();
            for k in 0..5 {
                expected[5 + k] = &s * &table.entries[x][y][k];
            }
            if table.entries[x][5 + y] != expected {
                return false;
            }
        }
    }
    true
}

//! Complex scalars: exact Gaussian rationals and high-precision approximations.
//!
//! Every bilinear form here is complex-*bilinear*, so no operation ever
//! conjugates implicitly. The exact type [`ExactScalar`] is the field
//! Q(i); [`ApproxScalar`] is a binary floating complex with a configurable
//! mantissa and a comparison tolerance, used only where a witness needs a
//! square root that leaves Q(i).
//!
//! Square roots are normalised into the half plane
//! C+ = { Re z > 0 } ∪ { Re z = 0, Im z > 0 }, which contains exactly one of
//! the two roots of any nonzero number.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_base::{Abs, SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};

/// Binary float used for both components of [`ApproxScalar`].
pub type Float = FBig<HalfEven>;

/// Arithmetic shared by the exact and approximate scalar types.
///
/// Generic code (matrices, witness assembly, residual checks) is written
/// against this trait so the same routine runs over Q(i) or in
/// approximate mode.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Ambient settings carried by every value (unit for exact scalars).
    type Context: Copy + fmt::Debug + Default + Send + Sync;

    fn context(&self) -> Self::Context;
    fn from_exact(value: &ExactScalar, ctx: Self::Context) -> Self;

    fn zero(ctx: Self::Context) -> Self {
        Self::from_exact(&ExactScalar::zero(), ctx)
    }

    fn one(ctx: Self::Context) -> Self {
        Self::from_exact(&ExactScalar::one(), ctx)
    }

    /// Exact zero test, or `|self| <= eps` in approximate mode.
    fn is_zero(&self) -> bool;
    fn recip(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.recip()?)
    }

    /// The unique square root lying in C+.
    fn sqrt_cplus(&self) -> Result<Self>;
    fn in_c_plus(&self) -> bool;

    /// Modulus as a double, for reporting.
    fn modulus(&self) -> f64;

    /// `|a - b| / max(1, |a|, |b|)`, the quantity compared against `eps`.
    fn relative_distance(&self, other: &Self) -> f64;
}

/// Membership in C+: `Re s > 0`, or `Re s = 0` and `Im s > 0`.
pub fn in_c_plus<S: Scalar>(s: &S) -> bool {
    s.in_c_plus()
}

/// The square root of `s` that lies in C+.
///
/// In exact mode this fails with [`Error::IrrationalRoot`] when the root is
/// not in Q(i); zero has no representative in C+ and always fails.
pub fn sqrt_cplus<S: Scalar>(s: &S) -> Result<S> {
    s.sqrt_cplus()
}

// ---------------------------------------------------------------------------
// Exact Gaussian rationals
// ---------------------------------------------------------------------------

/// An element `re + im*i` of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: RBig,
    im: RBig,
}

impl ExactScalar {
    pub fn new(re: RBig, im: RBig) -> Self {
        ExactScalar { re, im }
    }

    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::from(1)
    }

    pub fn i() -> Self {
        ExactScalar::new(RBig::ZERO, RBig::ONE)
    }

    /// `num/den` as a real scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar::new(RBig::from(num) / RBig::from(den), RBig::ZERO)
    }

    /// `re + im*i` from integers.
    pub fn gaussian(re: i64, im: i64) -> Self {
        ExactScalar::new(RBig::from(re), RBig::from(im))
    }

    pub fn re(&self) -> &RBig {
        &self.re
    }

    pub fn im(&self) -> &RBig {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re == RBig::ZERO && self.im == RBig::ZERO
    }

    pub fn is_real(&self) -> bool {
        self.im == RBig::ZERO
    }

    /// Squared modulus `re^2 + im^2`, a nonnegative rational.
    pub fn norm(&self) -> RBig {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(ExactScalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = ExactScalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, exp: i32) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            self.recip().map(|r| r.pow(exp.unsigned_abs()))
        }
    }

    pub fn in_c_plus(&self) -> bool {
        match self.re.cmp(&RBig::ZERO) {
            Ordering::Greater => true,
            Ordering::Equal => self.im > RBig::ZERO,
            Ordering::Less => false,
        }
    }

    /// Exact C+ square root; see [`sqrt_cplus`].
    pub fn sqrt_cplus(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::SqrtOfZero);
        }
        let irrational = || Error::IrrationalRoot(self.to_string());
        // |gamma|^2 = |s| must be rational, then x^2 = (a + |s|)/2 and
        // y^2 = (|s| - a)/2 must both be rational squares.
        let modulus = rational_sqrt(&self.norm()).ok_or_else(irrational)?;
        let two = RBig::from(2);
        let x = rational_sqrt(&((&modulus + &self.re) / &two)).ok_or_else(irrational)?;
        let y = rational_sqrt(&((&modulus - &self.re) / &two)).ok_or_else(irrational)?;
        let root = if x == RBig::ZERO {
            ExactScalar::new(x, y)
        } else if self.im < RBig::ZERO {
            ExactScalar::new(x, -y)
        } else {
            ExactScalar::new(x, y)
        };
        debug_assert!(&root * &root == *self && root.in_c_plus());
        Ok(root)
    }

    pub fn to_approx(&self, ctx: ApproxContext) -> ApproxScalar {
        ApproxScalar {
            re: rational_to_float(&self.re, ctx.precision),
            im: rational_to_float(&self.im, ctx.precision),
            ctx,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Rounds an exact scalar to the precision of `ctx`. The result is within
/// `ctx.eps` of the input.
pub fn exact_to_approx(s: &ExactScalar, ctx: ApproxContext) -> ApproxScalar {
    s.to_approx(ctx)
}

fn rational_sqrt(q: &RBig) -> Option<RBig> {
    if *q < RBig::ZERO {
        return None;
    }
    let num = ubig_sqrt_exact(&q.numerator().clone().abs().try_into().ok()?)?;
    let den = ubig_sqrt_exact(q.denominator())?;
    Some(RBig::from_parts(IBig::from(num), den))
}

fn ubig_sqrt_exact(n: &UBig) -> Option<UBig> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_to_float(q: &RBig, precision: usize) -> Float {
    q.to_float::<HalfEven, 2>(precision).value()
}

fn rational_to_f64(q: &RBig) -> f64 {
    q.to_f64().value()
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::new(RBig::from(v), RBig::ZERO)
    }
}

impl From<RBig> for ExactScalar {
    fn from(v: RBig) -> Self {
        ExactScalar::new(v, RBig::ZERO)
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    };
}

exact_binop!(Add, add, |a, b| ExactScalar::new(&a.re + &b.re, &a.im + &b.im));
exact_binop!(Sub, sub, |a, b| ExactScalar::new(&a.re - &b.re, &a.im - &b.im));
exact_binop!(Mul, mul, |a, b| ExactScalar::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Scalar for ExactScalar {
    type Context = ();

    fn context(&self) {}

    fn from_exact(value: &ExactScalar, _: ()) -> Self {
        value.clone()
    }

    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }

    fn recip(&self) -> Result<Self> {
        ExactScalar::recip(self)
    }

    fn sqrt_cplus(&self) -> Result<Self> {
        ExactScalar::sqrt_cplus(self)
    }

    fn in_c_plus(&self) -> bool {
        ExactScalar::in_c_plus(self)
    }

    fn modulus(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }

    fn relative_distance(&self, other: &Self) -> f64 {
        if self == other {
            return 0.0;
        }
        let d = (self - other).modulus();
        d / 1f64.max(self.modulus()).max(other.modulus())
    }
}

// Grammar: "a/b+c/d*i", terms omitted when zero, "i" / "-i" for unit
// imaginary parts.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = RBig::ZERO;
        if self.im == zero {
            return write!(f, "{}", self.re);
        }
        let imag = |f: &mut fmt::Formatter<'_>, v: &RBig| {
            if *v == RBig::ONE {
                write!(f, "i")
            } else {
                write!(f, "{}*i", v)
            }
        };
        if self.re == zero {
            if self.im < zero {
                write!(f, "-")?;
            }
            return imag(f, &self.im.clone().abs());
        }
        write!(f, "{}", self.re)?;
        write!(f, "{}", if self.im < zero { "-" } else { "+" })?;
        imag(f, &self.im.clone().abs())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScalarParser::new(s).parse()
    }
}

struct ScalarParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn new(src: &'a str) -> Self {
        ScalarParser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::ParseScalar {
            input: self.src.to_string(),
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<ExactScalar> {
        self.skip_ws();
        if self.peek().is_none() {
            return self.fail("empty scalar");
        }
        let mut value = ExactScalar::zero();
        let mut terms = 0;
        let mut seen_imag = false;
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { break };
            let sign = match c {
                b'+' | b'-' => {
                    self.pos += 1;
                    self.skip_ws();
                    if c == b'-' {
                        -1
                    } else {
                        1
                    }
                }
                _ if terms == 0 => 1,
                _ => return self.fail("expected '+' or '-' between terms"),
            };
            let (coeff, imaginary) = self.term()?;
            if imaginary {
                if seen_imag {
                    return self.fail("more than one imaginary term");
                }
                seen_imag = true;
            } else if terms > 0 {
                return self.fail("real term must come first");
            }
            let coeff = if sign < 0 { -coeff } else { coeff };
            value = if imaginary {
                value + ExactScalar::new(RBig::ZERO, coeff)
            } else {
                value + ExactScalar::from(coeff)
            };
            terms += 1;
            if terms > 2 {
                return self.fail("too many terms");
            }
        }
        Ok(value)
    }

    // number ["*i"] | "i"
    fn term(&mut self) -> Result<(RBig, bool)> {
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok((RBig::ONE, true));
        }
        let num = self.integer()?;
        let mut value = RBig::from(num);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den == IBig::ZERO {
                return self.fail("zero denominator");
            }
            if den < IBig::ZERO {
                return self.fail("denominator must be positive");
            }
            value = RBig::from_parts(value.numerator().clone(), den.unsigned_abs());
        }
        self.skip_ws();
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() != Some(b'i') {
                return self.fail("expected 'i' after '*'");
            }
            self.pos += 1;
            return Ok((value, true));
        }
        Ok((value, false))
    }

    fn integer(&mut self) -> Result<IBig> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected digits");
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }
}

// ---------------------------------------------------------------------------
// Approximate complex numbers
// ---------------------------------------------------------------------------

/// Mantissa precision (bits) and comparison tolerance for approximate mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxContext {
    pub precision: usize,
    pub eps: f64,
}

impl Default for ApproxContext {
    fn default() -> Self {
        ApproxContext {
            precision: 128,
            eps: 1e-30,
        }
    }
}

/// A complex number with binary float components.
///
/// Equality is tolerance-based: `a == b` iff
/// `|a - b| <= eps * max(1, |a|, |b|)`.
#[derive(Clone, Debug)]
pub struct ApproxScalar {
    re: Float,
    im: Float,
    ctx: ApproxContext,
}

impl ApproxScalar {
    pub fn new(re: Float, im: Float, ctx: ApproxContext) -> Self {
        ApproxScalar {
            re: re.with_precision(ctx.precision).value(),
            im: im.with_precision(ctx.precision).value(),
            ctx,
        }
    }

    pub fn from_f64(re: f64, im: f64, ctx: ApproxContext) -> Self {
        let conv = |x: f64| Float::try_from(x).expect("finite float");
        ApproxScalar::new(conv(re), conv(im), ctx)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn ctx(&self) -> ApproxContext {
        self.ctx
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// The exact dyadic rational this value stores.
    pub fn to_exact(&self) -> ExactScalar {
        let conv = |x: &Float| RBig::try_from(x.clone()).unwrap_or(RBig::ZERO);
        ExactScalar::new(conv(&self.re), conv(&self.im))
    }

    fn modulus_float(&self) -> Float {
        let sq = &self.re * &self.re + &self.im * &self.im;
        if sq == Float::ZERO {
            sq
        } else {
            sq.sqrt()
        }
    }

    fn eps_float(&self) -> Float {
        Float::try_from(self.ctx.eps)
            .expect("finite eps")
            .with_precision(self.ctx.precision)
            .value()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let diff = (self.clone() - other.clone()).modulus_float();
        let one = Float::ONE.with_precision(self.ctx.precision).value();
        let scale = one.max(self.modulus_float()).max(other.modulus_float());
        diff <= self.eps_float() * scale
    }

    fn combine(&self, re: Float, im: Float) -> Self {
        ApproxScalar::new(re, im, self.ctx)
    }
}

impl PartialEq for ApproxScalar {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Add for ApproxScalar {
    type Output = ApproxScalar;
    fn add(self, rhs: Self) -> Self {
        self.combine(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for ApproxScalar {
    type Output = ApproxScalar;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for ApproxScalar {
    type Output = ApproxScalar;
    fn mul(self, rhs: Self) -> Self {
        self.combine(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for ApproxScalar {
    type Output = ApproxScalar;
    fn neg(self) -> Self {
        ApproxScalar {
            re: -self.re,
            im: -self.im,
            ctx: self.ctx,
        }
    }
}

impl Scalar for ApproxScalar {
    type Context = ApproxContext;

    fn context(&self) -> ApproxContext {
        self.ctx
    }

    fn from_exact(value: &ExactScalar, ctx: ApproxContext) -> Self {
        value.to_approx(ctx)
    }

    fn is_zero(&self) -> bool {
        self.modulus_float() <= self.eps_float()
    }

    fn recip(&self) -> Result<Self> {
        if self.re == Float::ZERO && self.im == Float::ZERO {
            return Err(Error::DivisionByZero);
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Ok(self.combine(&self.re / &n, -(&self.im / &n)))
    }

    fn sqrt_cplus(&self) -> Result<Self> {
        if self.re == Float::ZERO && self.im == Float::ZERO {
            return Err(Error::SqrtOfZero);
        }
        let r = self.modulus_float();
        let two = Float::from(2u8);
        // Principal branch; it lies in C+ for every nonzero input.
        if self.re >= Float::ZERO {
            let t = ((&r + &self.re) / &two).sqrt();
            let im = &self.im / (&two * &t);
            Ok(self.combine(t, im))
        } else {
            let t = ((&r - &self.re) / &two).sqrt();
            let re = self.im.clone().abs() / (&two * &t);
            let im = if self.im < Float::ZERO { -t } else { t };
            Ok(self.combine(re, im))
        }
    }

    fn in_c_plus(&self) -> bool {
        self.re > Float::ZERO || (self.re == Float::ZERO && self.im > Float::ZERO)
    }

    fn modulus(&self) -> f64 {
        self.modulus_float().to_f64().value()
    }

    fn relative_distance(&self, other: &Self) -> f64 {
        let diff = (self.clone() - other.clone()).modulus_float();
        let one = Float::ONE.with_precision(self.ctx.precision).value();
        let scale = one.max(self.modulus_float()).max(other.modulus_float());
        (diff / scale).to_f64().value()
    }
}

impl fmt::Display for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im == 0.0 {
            write!(f, "{re:e}")
        } else if re == 0.0 {
            write!(f, "{im:e}*i")
        } else {
            write!(f, "{re:e}{}{:e}*i", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

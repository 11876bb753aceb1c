//! Exact arithmetic over the rationals and a single quadratic extension
//! Q(sqrt d), plus dense univariate polynomials with such coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(String),
    #[error("incompatible discriminants {0} and {1}")]
    IncompatibleDiscriminants(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a root of the polynomial")]
    NotARoot(String),
    #[error("cannot parse '{0}'")]
    Parse(String),
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let err = || ExactError::Parse(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

/// Splits `m = s^2 t` with `t` squarefree.
fn squarefree_split(m: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut t = BigUint::one();
    let mut rest = m.clone();
    let mut f = BigUint::from(2u32);
    while &f * &f <= rest {
        let mut count = 0u32;
        while (&rest % &f).is_zero() {
            rest /= &f;
            count += 1;
        }
        for _ in 0..count / 2 {
            s *= &f;
        }
        if count % 2 == 1 {
            t *= &f;
        }
        f += 1u32;
    }
    t *= rest;
    (s, t)
}

/// Element `a + b sqrt(d)` of Q(sqrt d).
///
/// Canonical form: `d` is a squarefree integer greater than one, or `d = 0`
/// together with `b = 0` for plain rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtNumber {
    rat_part: Rational,
    surd_part: Rational,
    discriminant: BigInt,
}

pub fn quad_normalize(a: Rational, b: Rational, d: Rational) -> Result<QuadExtNumber, ExactError> {
    if d.is_negative() {
        return Err(ExactError::NegativeDiscriminant(format_rational(&d)));
    }
    if b.is_zero() || d.is_zero() {
        return Ok(QuadExtNumber::rational(a));
    }
    // sqrt(p/q) = sqrt(p q) / q
    let q = d.denom().clone();
    let m = (d.numer() * &q).to_biguint().expect("nonnegative");
    let (s, t) = squarefree_split(&m);
    let scale = Rational::new(BigInt::from(s), q);
    if t.is_one() {
        return Ok(QuadExtNumber::rational(a + b * scale));
    }
    Ok(QuadExtNumber {
        rat_part: a,
        surd_part: b * scale,
        discriminant: BigInt::from(t),
    })
}

impl QuadExtNumber {
    pub fn rational(a: Rational) -> Self {
        QuadExtNumber {
            rat_part: a,
            surd_part: Rational::zero(),
            discriminant: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    /// `sqrt(x)` for a nonnegative rational.
    pub fn sqrt_of(x: &Rational) -> Result<Self, ExactError> {
        quad_normalize(Rational::zero(), Rational::one(), x.clone())
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rat_part(&self) -> &Rational {
        &self.rat_part
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd_part
    }

    pub fn discriminant(&self) -> Rational {
        Rational::from_integer(self.discriminant.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rat_part.is_zero() && self.surd_part.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd_part.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat_part)
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rat_part.is_integer()
    }

    fn common_disc(&self, other: &Self) -> Result<BigInt, ExactError> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(BigInt::zero()),
            (false, true) => Ok(self.discriminant.clone()),
            (true, false) => Ok(other.discriminant.clone()),
            (false, false) if self.discriminant == other.discriminant => {
                Ok(self.discriminant.clone())
            }
            _ => Err(ExactError::IncompatibleDiscriminants(
                self.discriminant.to_string(),
                other.discriminant.to_string(),
            )),
        }
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadExtNumber {
                rat_part: a,
                surd_part: b,
                discriminant: d,
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_disc(other)?;
        Ok(Self::build(
            &self.rat_part + &other.rat_part,
            &self.surd_part + &other.surd_part,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_disc(other)?;
        let dr = Rational::from_integer(d.clone());
        let a = &self.rat_part * &other.rat_part + &self.surd_part * &other.surd_part * dr;
        let b = &self.rat_part * &other.surd_part + &self.surd_part * &other.rat_part;
        Ok(Self::build(a, b, d))
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let dr = self.discriminant();
        let norm = &self.rat_part * &self.rat_part - &self.surd_part * &self.surd_part * dr;
        Ok(Self::build(
            &self.rat_part / &norm,
            -&self.surd_part / &norm,
            self.discriminant.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::build(
            &self.rat_part * k,
            &self.surd_part * k,
            self.discriminant.clone(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign of the real number `a + b sqrt(d)`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat_part);
        let sb = sign_of(&self.surd_part);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.rat_part * &self.rat_part;
        let b2d = &self.surd_part * &self.surd_part * self.discriminant();
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering, ExactError> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_prec(64)
    }

    /// Floating-point value with `extra_bits` of working precision beyond
    /// the 53-bit target, rounded once at the end.
    pub fn to_f64_prec(&self, extra_bits: u32) -> f64 {
        if self.is_rational() {
            return rational_to_f64(&self.rat_part);
        }
        // b sqrt(d) = sign(b) sqrt(b^2 d), approximated by a dyadic rational
        let b2d = &self.surd_part * &self.surd_part * self.discriminant();
        let mag_bits = b2d.numer().bits() as i64 - b2d.denom().bits() as i64;
        let k = (53 + extra_bits as i64 + (-mag_bits / 2).max(0) + 8) as usize;
        let scaled = (b2d.numer() << (2 * k)) / b2d.denom();
        let root = scaled.sqrt();
        let mut surd = Rational::new(root, BigInt::one() << k);
        if self.surd_part.is_negative() {
            surd = -surd;
        }
        rational_to_f64(&(&self.rat_part + surd))
    }
}

fn sign_of(x: &Rational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for huge numerators/denominators
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db - 60;
        let q = if shift >= 0 {
            x.numer() / (x.denom() << shift as usize)
        } else {
            (x.numer() << (-shift) as usize) / x.denom()
        };
        q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

impl From<Rational> for QuadExtNumber {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for QuadExtNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadExtNumber> for &QuadExtNumber {
            type Output = QuadExtNumber;
            /// # Panics
            /// On mixed discriminants; use the checked variant to handle them.
            fn $method(self, rhs: &QuadExtNumber) -> QuadExtNumber {
                self.$checked(rhs).expect("mixed quadratic extensions")
            }
        }
        impl $tr<QuadExtNumber> for QuadExtNumber {
            type Output = QuadExtNumber;
            fn $method(self, rhs: QuadExtNumber) -> QuadExtNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadExtNumber {
    type Output = QuadExtNumber;
    fn neg(self) -> QuadExtNumber {
        QuadExtNumber::build(
            -&self.rat_part,
            -&self.surd_part,
            self.discriminant.clone(),
        )
    }
}

impl Neg for QuadExtNumber {
    type Output = QuadExtNumber;
    fn neg(self) -> QuadExtNumber {
        -&self
    }
}

impl fmt::Display for QuadExtNumber {
    /// `a`, or `a + b*sqrt(d)` / `a - |b|*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.rat_part));
        }
        let (op, b) = if self.surd_part.is_negative() {
            ("-", -&self.surd_part)
        } else {
            ("+", self.surd_part.clone())
        };
        write!(
            f,
            "{} {} {}*sqrt({})",
            format_rational(&self.rat_part),
            op,
            format_rational(&b),
            self.discriminant
        )
    }
}

impl FromStr for QuadExtNumber {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, ExactError> {
        let t = s.trim();
        let err = || ExactError::Parse(s.to_string());
        let Some(open) = t.find("*sqrt(") else {
            return parse_rational(t).map(Self::rational);
        };
        let close = t.rfind(')').ok_or_else(err)?;
        let d = parse_rational(&t[open + 6..close])?;
        if !t[close + 1..].trim().is_empty() {
            return Err(err());
        }
        let head = &t[..open];
        // split "a + b" / "a - b" at the last binary operator
        let pos = head
            .rfind(" + ")
            .or_else(|| head.rfind(" - "))
            .ok_or_else(err)?;
        let a = parse_rational(&head[..pos])?;
        let mut b = parse_rational(&head[pos + 3..])?;
        if &head[pos..pos + 3] == " - " {
            b = -b;
        }
        quad_normalize(a, b, d)
    }
}

impl serde::Serialize for QuadExtNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QuadExtNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense polynomial in one variable, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coefficients: Vec<QuadExtNumber>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<QuadExtNumber>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Self::new(cs.iter().cloned().map(QuadExtNumber::rational).collect())
    }

    pub fn zero() -> Self {
        Polynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn constant(c: QuadExtNumber) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(QuadExtNumber::one())
    }

    /// `w - root`.
    pub fn linear(root: &QuadExtNumber) -> Self {
        Self::new(vec![-root, QuadExtNumber::one()])
    }

    pub fn coefficients(&self) -> &[QuadExtNumber] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&QuadExtNumber> {
        self.coefficients.last()
    }

    pub fn scale(&self, c: &QuadExtNumber) -> Self {
        Self::new(self.coefficients.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&rat_int(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &QuadExtNumber) -> Result<QuadExtNumber, ExactError> {
        let mut acc = QuadExtNumber::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c)?;
        }
        Ok(acc)
    }

    /// `p(w + c)` by repeated synthetic division (Taylor shift).
    pub fn shift(&self, c: &QuadExtNumber) -> Self {
        let mut a = self.coefficients.clone();
        let n = a.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = &a[k + 1] * c;
                a[k] = &a[k] + &t;
            }
        }
        Self::new(a)
    }

    /// Quotient `q` with `p = (w - root) q`.
    pub fn divide_root(&self, root: &QuadExtNumber) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n = self.coefficients.len();
        let mut q = vec![QuadExtNumber::zero(); n - 1];
        let mut carry = QuadExtNumber::zero();
        for k in (0..n).rev() {
            let v = self.coefficients[k].checked_add(&carry.checked_mul(root)?)?;
            if k == 0 {
                if !v.is_zero() {
                    return Err(ExactError::NotARoot(root.to_string()));
                }
            } else {
                q[k - 1] = v.clone();
            }
            carry = v;
        }
        Ok(Self::new(q))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let n = self.coefficients.len().max(other.coefficients.len());
        let zero = QuadExtNumber::zero();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coefficients.get(k).unwrap_or(&zero);
            let b = other.coefficients.get(k).unwrap_or(&zero);
            out.push(a.checked_add(b)?);
        }
        Ok(Self::new(out))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![QuadExtNumber::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(&a.checked_mul(b)?)?;
            }
        }
        Ok(Self::new(out))
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("mixed quadratic extensions")
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(&QuadExtNumber::from_int(-1))
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("mixed quadratic extensions")
    }
}

pub fn poly_eval(p: &Polynomial, x: &QuadExtNumber) -> Result<QuadExtNumber, ExactError> {
    p.eval(x)
}

pub fn poly_divide_root(p: &Polynomial, root: &QuadExtNumber) -> Result<Polynomial, ExactError> {
    p.divide_root(root)
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// n!! with the convention (-1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// H_p = sum_{k=1}^p 1/k.
pub fn harmonic(p: u64) -> Rational {
    (1..=p).fold(Rational::zero(), |acc, k| acc + rat(1, k as i64))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

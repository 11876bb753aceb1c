//! Mellin symbol calculus for type-A cone operators
//! `r^{-2} [ sum_j a_j(r) (-r d_r)^j + b(r) Lambda ]`, resolved per eigenvalue.
//!
//! Symbols are exact rational functions of the Mellin covariable `w`,
//! kept in reduced factored form.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, rat, rat_int, ExactError, Polynomial, QuadExtNumber, Rational};
use crate::spectrum::{sphere_spectrum, BaseSpectrum, SpectrumError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("operator is not type-A: {0}")]
    NotTypeA(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("conormal symbol has a double root at ell = {0} (Delta w = 0)")]
    DegenerateConormal(usize),
    #[error("order {j} exceeds truncation order {max}")]
    BeyondTruncation { j: usize, max: usize },
    #[error("pole at w = {location} lies on the contour Re w = {contour} (ell = {ell}, j = {j})")]
    ContourViolation {
        location: String,
        contour: String,
        ell: usize,
        j: usize,
    },
    #[error("gamma = {0} outside the admissible strip")]
    GammaNotAdmissible(String),
    #[error("pole of order {0} is not supported")]
    UnexpectedPoleOrder(u32),
    #[error("{0} is not a pole of the symbol")]
    PoleNotFound(String),
    #[error("operator family mismatch: {0}")]
    FamilyMismatch(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// `scalar * numerator(w) / prod (w - root)^mult`, reduced, numerator monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MellinSymbol {
    scalar: QuadExtNumber,
    numerator: Polynomial,
    factors: Vec<(QuadExtNumber, u32)>,
}

fn sort_roots(v: &mut Vec<(QuadExtNumber, u32)>) -> Result<(), ExactError> {
    // insertion sort with exact, fallible comparison
    for i in 1..v.len() {
        let mut k = i;
        while k > 0 && v[k - 1].0.compare(&v[k].0)? == Ordering::Greater {
            v.swap(k - 1, k);
            k -= 1;
        }
    }
    Ok(())
}

impl MellinSymbol {
    pub fn zero() -> Self {
        MellinSymbol {
            scalar: QuadExtNumber::zero(),
            numerator: Polynomial::one(),
            factors: Vec::new(),
        }
    }

    pub fn constant(c: QuadExtNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MellinSymbol {
            scalar: c,
            numerator: Polynomial::one(),
            factors: Vec::new(),
        }
    }

    /// `scalar / prod (w - root)`.
    pub fn from_roots(scalar: QuadExtNumber, roots: &[QuadExtNumber]) -> Result<Self, ExactError> {
        Self::from_parts(
            scalar,
            Polynomial::one(),
            roots.iter().map(|r| (r.clone(), 1)).collect(),
        )
    }

    pub fn from_parts(
        scalar: QuadExtNumber,
        numerator: Polynomial,
        factors: Vec<(QuadExtNumber, u32)>,
    ) -> Result<Self, ExactError> {
        if scalar.is_zero() || numerator.is_zero() {
            return Ok(Self::zero());
        }
        let lc = numerator.leading().expect("nonzero").clone();
        let mut numerator = numerator.scale(&lc.inv()?);
        let scalar = scalar.checked_mul(&lc)?;

        let mut merged: Vec<(QuadExtNumber, u32)> = Vec::new();
        for (r, m) in factors {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(x, _)| *x == r) {
                Some(e) => e.1 += m,
                None => merged.push((r, m)),
            }
        }
        for (root, m) in merged.iter_mut() {
            while *m > 0 && numerator.degree().unwrap_or(0) > 0 && numerator.eval(root)?.is_zero() {
                numerator = numerator.divide_root(root)?;
                *m -= 1;
            }
        }
        merged.retain(|(_, m)| *m > 0);
        sort_roots(&mut merged)?;
        Ok(MellinSymbol {
            scalar,
            numerator,
            factors: merged,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scalar(&self) -> &QuadExtNumber {
        &self.scalar
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn factors(&self) -> &[(QuadExtNumber, u32)] {
        &self.factors
    }

    pub fn multiplicity_of(&self, root: &QuadExtNumber) -> u32 {
        self.factors
            .iter()
            .find(|(r, _)| r == root)
            .map_or(0, |(_, m)| *m)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::from_parts(
            self.scalar.checked_mul(&other.scalar)?,
            self.numerator.checked_mul(&other.numerator)?,
            factors,
        )
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<Self, ExactError> {
        if self.is_zero() || p.is_zero() {
            return Ok(Self::zero());
        }
        Self::from_parts(
            self.scalar.clone(),
            self.numerator.checked_mul(p)?,
            self.factors.clone(),
        )
    }

    pub fn scale(&self, c: &QuadExtNumber) -> Result<Self, ExactError> {
        Self::from_parts(
            self.scalar.checked_mul(c)?,
            self.numerator.clone(),
            self.factors.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        MellinSymbol {
            scalar: -&self.scalar,
            ..self.clone()
        }
    }

    fn expanded_numerator(&self, extra: &[(QuadExtNumber, u32)]) -> Result<Polynomial, ExactError> {
        let mut p = self.numerator.scale(&self.scalar);
        for (r, m) in extra {
            let have = self.multiplicity_of(r);
            for _ in have..*m {
                p = p.checked_mul(&Polynomial::linear(r))?;
            }
        }
        Ok(p)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut lcm = self.factors.clone();
        for (r, m) in &other.factors {
            match lcm.iter_mut().find(|(x, _)| x == r) {
                Some(e) => e.1 = e.1.max(*m),
                None => lcm.push((r.clone(), *m)),
            }
        }
        let total = self
            .expanded_numerator(&lcm)?
            .checked_add(&other.expanded_numerator(&lcm)?)?;
        Self::from_parts(QuadExtNumber::one(), total, lcm)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_add(&other.neg())
    }

    /// Substitution `w -> w + c`.
    pub fn shift(&self, c: &QuadExtNumber) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut factors = Vec::with_capacity(self.factors.len());
        for (r, m) in &self.factors {
            factors.push((r.checked_sub(c)?, *m));
        }
        Ok(MellinSymbol {
            scalar: self.scalar.clone(),
            numerator: self.numerator.shift(c),
            factors,
        })
    }

    pub fn shift_int(&self, c: i64) -> Result<Self, ExactError> {
        self.shift(&QuadExtNumber::from_int(c))
    }

    pub fn denominator(&self) -> Polynomial {
        self.factors.iter().fold(Polynomial::one(), |acc, (r, m)| {
            (0..*m).fold(acc, |a, _| &a * &Polynomial::linear(r))
        })
    }

    pub fn eval(&self, w: &QuadExtNumber) -> Result<QuadExtNumber, SymbolError> {
        if self.is_zero() {
            return Ok(QuadExtNumber::zero());
        }
        let den = self.denominator().eval(w)?;
        if den.is_zero() {
            return Err(SymbolError::PoleNotFound(format!("evaluation at pole {w}")));
        }
        Ok(self.scalar.checked_mul(&self.numerator.eval(w)?)?.checked_div(&den)?)
    }

    pub fn eval_complex(&self, w: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::zero();
        }
        let mut num = Complex64::zero();
        for c in self.numerator.coefficients().iter().rev() {
            num = num * w + c.to_f64();
        }
        let mut den = Complex64::one();
        for (r, m) in &self.factors {
            den *= (w - r.to_f64()).powu(*m);
        }
        num * self.scalar.to_f64() / den
    }

    /// True when the symbol is the constant `c`.
    pub fn is_constant(&self, c: &QuadExtNumber) -> bool {
        if c.is_zero() {
            return self.is_zero();
        }
        self.factors.is_empty() && self.numerator.degree() == Some(0) && &self.scalar == c
    }
}

impl fmt::Display for MellinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "({})", self.scalar)?;
        if self.numerator.degree() != Some(0) {
            let terms: Vec<String> = self
                .numerator
                .coefficients()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("({c})*w^{k}"))
                .collect();
            write!(f, "*[{}]", terms.join(" + "))?;
        }
        for (r, m) in &self.factors {
            if *m == 1 {
                write!(f, "/(w - ({r}))")?;
            } else {
                write!(f, "/(w - ({r}))^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    root: QuadExtNumber,
    multiplicity: u32,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    scalar: QuadExtNumber,
    numerator: Vec<QuadExtNumber>,
    denominator: Vec<FactorJson>,
}

impl Serialize for MellinSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymbolJson {
            scalar: self.scalar.clone(),
            numerator: self.numerator.coefficients().to_vec(),
            denominator: self
                .factors
                .iter()
                .map(|(r, m)| FactorJson {
                    root: r.clone(),
                    multiplicity: *m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MellinSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SymbolJson::deserialize(d)?;
        MellinSymbol::from_parts(
            j.scalar,
            Polynomial::new(j.numerator),
            j.denominator.into_iter().map(|f| (f.root, f.multiplicity)).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorFamily {
    /// `Delta_n - kappa^2`; kappa^2 = 0 is the Laplacian.
    ShiftedLaplacian { kappa_sq: Rational },
    /// `Delta_3 + 2Z/r - 2 kappa^2` (n = 3).
    Coulomb { z: Rational, kappa_sq: Rational },
    Custom,
}

type MemoCell = Arc<OnceLock<Result<Arc<MellinSymbol>, SymbolError>>>;

#[derive(Default, Debug)]
struct SymbolMemo {
    cells: Mutex<HashMap<(usize, usize), MemoCell>>,
}

impl SymbolMemo {
    fn cell(&self, key: (usize, usize)) -> MemoCell {
        let mut map = self.cells.lock().expect("memo lock poisoned");
        map.entry(key).or_default().clone()
    }
}

/// Type-A operator on the stretched cone over a base with known spectrum.
#[derive(Debug, Clone)]
pub struct ConeOperator {
    pub name: String,
    pub n: u32,
    pub a2: Vec<Rational>,
    pub a1: Vec<Rational>,
    pub a0: Vec<Rational>,
    pub b: Vec<Rational>,
    pub base: Arc<dyn BaseSpectrum>,
    pub truncation_order: usize,
    pub family: OperatorFamily,
    memo: Arc<SymbolMemo>,
}

fn coeff(series: &[Rational], i: usize) -> Rational {
    series.get(i).cloned().unwrap_or_else(Rational::zero)
}

impl ConeOperator {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n: u32,
        a2: Vec<Rational>,
        a1: Vec<Rational>,
        a0: Vec<Rational>,
        b: Vec<Rational>,
        base: Arc<dyn BaseSpectrum>,
        truncation_order: usize,
        family: OperatorFamily,
    ) -> Result<Self, SymbolError> {
        if n < 3 {
            return Err(SymbolError::InvalidOperator(format!("n = {n} < 3")));
        }
        if base.dimension_of_base() + 1 != n {
            return Err(SymbolError::InvalidOperator(format!(
                "base dimension {} does not match n = {n}",
                base.dimension_of_base()
            )));
        }
        if coeff(&a2, 0) != Rational::one() {
            return Err(SymbolError::NotTypeA("leading coefficient a2^(0) must be 1".into()));
        }
        let a1_0 = coeff(&a1, 0);
        let disc = &a1_0 * &a1_0 - rat_int(4) * coeff(&a0, 0);
        if !disc.is_positive() {
            return Err(SymbolError::NotTypeA(format!(
                "(a1^(0))^2 - 4 a0^(0) = {} is not positive",
                format_rational(&disc)
            )));
        }
        if !coeff(&b, 0).is_negative() {
            return Err(SymbolError::NotTypeA("b^(0) must be negative".into()));
        }
        Ok(ConeOperator {
            name: name.into(),
            n,
            a2,
            a1,
            a0,
            b,
            base,
            truncation_order,
            family,
            memo: Arc::default(),
        })
    }

    /// `Delta_n - kappa^2` on R^n, written over S^{n-1}.
    pub fn shifted_laplacian(n: u32, kappa_sq: Rational, truncation_order: usize) -> Result<Self, SymbolError> {
        let base = Arc::new(sphere_spectrum(n)?);
        Self::new(
            "shifted-laplacian",
            n,
            vec![Rational::one()],
            vec![rat_int(-(n as i64 - 2))],
            vec![Rational::zero(), Rational::zero(), -kappa_sq.clone()],
            vec![rat_int(-1)],
            base,
            truncation_order,
            OperatorFamily::ShiftedLaplacian { kappa_sq },
        )
    }

    pub fn laplacian(n: u32, truncation_order: usize) -> Result<Self, SymbolError> {
        let mut op = Self::shifted_laplacian(n, Rational::zero(), truncation_order)?;
        op.name = "laplacian".into();
        Ok(op)
    }

    /// `-2(H + kappa^2)` for an electron in the field of a nucleus of charge Z.
    pub fn coulomb(z: Rational, kappa_sq: Rational, truncation_order: usize) -> Result<Self, SymbolError> {
        let base = Arc::new(sphere_spectrum(3)?);
        Self::new(
            "coulomb",
            3,
            vec![Rational::one()],
            vec![rat_int(-1)],
            vec![
                Rational::zero(),
                rat_int(2) * &z,
                rat_int(-2) * &kappa_sq,
            ],
            vec![rat_int(-1)],
            base,
            truncation_order,
            OperatorFamily::Coulomb { z, kappa_sq },
        )
    }

    pub fn with_truncation(mut self, truncation_order: usize) -> Self {
        self.truncation_order = truncation_order;
        self
    }

    pub fn coefficient_a(&self, j: usize, i: usize) -> Rational {
        match j {
            0 => coeff(&self.a0, i),
            1 => coeff(&self.a1, i),
            2 => coeff(&self.a2, i),
            _ => Rational::zero(),
        }
    }

    pub fn coefficient_b(&self, i: usize) -> Rational {
        coeff(&self.b, i)
    }

    /// Highest power of r present in the coefficient series.
    pub fn series_length(&self) -> usize {
        [&self.a0, &self.a1, &self.a2, &self.b]
            .iter()
            .map(|s| s.len())
            .max()
            .unwrap_or(0)
    }

    pub fn eigenvalue(&self, ell: usize) -> Result<Rational, SymbolError> {
        Ok(self.base.eigenvalue(ell)?)
    }

    /// `h_i(w, lambda_ell) = a2^(i) w^2 + a1^(i) w + a0^(i) + b^(i) lambda_ell`.
    pub fn h_slice(&self, i: usize, ell: usize) -> Result<Polynomial, SymbolError> {
        let lam = self.eigenvalue(ell)?;
        Ok(Polynomial::from_rationals(&[
            coeff(&self.a0, i) + coeff(&self.b, i) * lam,
            coeff(&self.a1, i),
            coeff(&self.a2, i),
        ]))
    }

    /// Compatibility with a fundamental solution at the tip:
    /// `a0^(0) = -a1^(0)(n-2) - (n-2)^2`.
    pub fn is_fundamental_solution_compatible(&self) -> bool {
        let m = rat_int(self.n as i64 - 2);
        coeff(&self.a0, 0) == -coeff(&self.a1, 0) * &m - &m * &m
    }

    pub fn parameter_kappa_sq(&self) -> Option<&Rational> {
        match &self.family {
            OperatorFamily::ShiftedLaplacian { kappa_sq } | OperatorFamily::Coulomb { kappa_sq, .. } => Some(kappa_sq),
            OperatorFamily::Custom => None,
        }
    }

    pub fn parameter_z(&self) -> Option<&Rational> {
        match &self.family {
            OperatorFamily::Coulomb { z, .. } => Some(z),
            _ => None,
        }
    }
}

pub fn delta_w(op: &ConeOperator, ell: usize) -> Result<QuadExtNumber, SymbolError> {
    let a1 = coeff(&op.a1, 0);
    let rad = &a1 * &a1 / rat_int(4) - coeff(&op.a0, 0) - coeff(&op.b, 0) * op.eigenvalue(ell)?;
    if rad.is_negative() {
        return Err(SymbolError::NotTypeA(format!(
            "negative radicand {} at ell = {ell}",
            format_rational(&rad)
        )));
    }
    Ok(QuadExtNumber::sqrt_of(&rad)?)
}

/// Centre `2 - a1^(0)/2` of the poles of `h0^(-1)`.
pub fn pole_centre(op: &ConeOperator) -> Rational {
    rat_int(2) - coeff(&op.a1, 0) / rat_int(2)
}

/// `h0^(-1)(w) = 1 / h0(w - 2)`, poles at `2 - a1/2 -+ Delta w`.
pub fn conormal_inverse(op: &ConeOperator, ell: usize) -> Result<MellinSymbol, SymbolError> {
    let dw = delta_w(op, ell)?;
    if dw.is_zero() {
        return Err(SymbolError::DegenerateConormal(ell));
    }
    let c = QuadExtNumber::rational(pole_centre(op));
    let roots = [c.checked_sub(&dw)?, c.checked_add(&dw)?];
    let scalar = QuadExtNumber::rational(Rational::one() / coeff(&op.a2, 0));
    Ok(MellinSymbol::from_roots(scalar, &roots)?)
}

fn compute_symbol(op: &ConeOperator, ell: usize, j: usize) -> Result<Arc<MellinSymbol>, SymbolError> {
    let h0inv = conormal_inverse(op, ell)?;
    if j == 0 {
        return Ok(Arc::new(h0inv));
    }
    let mut acc = MellinSymbol::zero();
    for i in 1..=j {
        let hi = op.h_slice(i, ell)?.shift(&QuadExtNumber::from_int(-2));
        if hi.is_zero() {
            continue;
        }
        let prev = memo_symbol(op, ell, j - i)?;
        if prev.is_zero() {
            continue;
        }
        let term = prev.shift_int(-(i as i64))?.mul_poly(&hi)?;
        acc = acc.checked_add(&term)?;
    }
    Ok(Arc::new(acc.checked_mul(&h0inv)?.neg()))
}

fn memo_symbol(op: &ConeOperator, ell: usize, j: usize) -> Result<Arc<MellinSymbol>, SymbolError> {
    let cell = op.memo.cell((ell, j));
    cell.get_or_init(|| compute_symbol(op, ell, j)).clone()
}

/// `h_j^(-1)(w, lambda_ell)` from the recursion, memoized per `(ell, j)`.
pub fn asymptotic_symbol(op: &ConeOperator, ell: usize, j: usize) -> Result<Arc<MellinSymbol>, SymbolError> {
    if j > op.truncation_order {
        return Err(SymbolError::BeyondTruncation {
            j,
            max: op.truncation_order,
        });
    }
    // fill lower orders first so the recursion never nests deeply
    for k in 0..j {
        memo_symbol(op, ell, k)?;
    }
    memo_symbol(op, ell, j)
}

/// Weight gamma of the Mellin contour `Re w = (n+4)/2 - gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourSpec {
    #[serde(with = "crate::spectrum::rational_string")]
    pub gamma: Rational,
}

impl ContourSpec {
    pub fn new(gamma: Rational) -> Self {
        ContourSpec { gamma }
    }

    pub fn real_part(&self, n: u32) -> Rational {
        rat(n as i64 + 4, 2) - &self.gamma
    }
}

/// Midpoint of the ell = 0 admissible strip.
pub fn default_contour(op: &ConeOperator) -> ContourSpec {
    ContourSpec::new(rat(op.n as i64, 2) + coeff(&op.a1, 0) / rat_int(2))
}

/// Checks `n/2 + a1/2 - Dw(0) < gamma < n/2 + a1/2 + Dw(0)`.
pub fn check_contour(op: &ConeOperator, contour: &ContourSpec) -> Result<(), SymbolError> {
    let mid = default_contour(op).gamma;
    let dw = delta_w(op, 0)?;
    let off = QuadExtNumber::rational(&contour.gamma - mid).abs();
    if off.compare(&dw)? == Ordering::Less {
        Ok(())
    } else {
        Err(SymbolError::GammaNotAdmissible(format_rational(&contour.gamma)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "left-of-contour")]
    Left,
    #[serde(rename = "right-of-contour")]
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleDatum {
    pub location: QuadExtNumber,
    pub order: u32,
    pub side: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res: Option<QuadExtNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res1: Option<QuadExtNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res2: Option<QuadExtNumber>,
}

pub fn classify_poles(
    sym: &MellinSymbol,
    op: &ConeOperator,
    ell: usize,
    j: usize,
    contour: &ContourSpec,
) -> Result<Vec<PoleDatum>, SymbolError> {
    let re = QuadExtNumber::rational(contour.real_part(op.n));
    let mut out = Vec::with_capacity(sym.factors().len());
    for (root, m) in sym.factors() {
        if *m > 2 {
            return Err(SymbolError::UnexpectedPoleOrder(*m));
        }
        let side = match root.compare(&re)? {
            Ordering::Less => Side::Left,
            Ordering::Greater => Side::Right,
            Ordering::Equal => {
                return Err(SymbolError::ContourViolation {
                    location: root.to_string(),
                    contour: format_rational(&contour.real_part(op.n)),
                    ell,
                    j,
                })
            }
        };
        out.push(PoleDatum {
            location: root.clone(),
            order: *m,
            side,
            res: None,
            res1: None,
            res2: None,
        });
    }
    Ok(out)
}

/// Fills `res` (order 1) or `res1`, `res2` (order 2) exactly.
pub fn residue(sym: &MellinSymbol, pole: &PoleDatum) -> Result<PoleDatum, SymbolError> {
    let w0 = &pole.location;
    let m = sym.multiplicity_of(w0);
    if m == 0 {
        return Err(SymbolError::PoleNotFound(w0.to_string()));
    }
    if m != pole.order {
        return Err(SymbolError::UnexpectedPoleOrder(pole.order));
    }
    // g(w) = scalar N(w) / P(w), P the remaining factors;
    // g'/g = N'/N - sum k/(w - r)
    let mut p = QuadExtNumber::one();
    let mut dlog = QuadExtNumber::zero();
    for (r, k) in sym.factors() {
        if r != w0 {
            let d = w0.checked_sub(r)?;
            let dinv = d.inv()?;
            for _ in 0..*k {
                p = p.checked_mul(&d)?;
                dlog = dlog.checked_add(&dinv)?;
            }
        }
    }
    let n0 = sym.numerator().eval(w0)?;
    let g = sym.scalar().checked_mul(&n0)?.checked_div(&p)?;
    let mut out = pole.clone();
    match m {
        1 => out.res = Some(g),
        2 => {
            let dn = sym.numerator().derivative().eval(w0)?;
            let gp = sym
                .scalar()
                .checked_mul(&dn.checked_sub(&n0.checked_mul(&dlog)?)?)?
                .checked_div(&p)?;
            out.res1 = Some(g);
            out.res2 = Some(gp);
        }
        k => return Err(SymbolError::UnexpectedPoleOrder(k)),
    }
    Ok(out)
}

/// Classified poles of `h_j^(-1)(., lambda_ell)` with residues filled in.
pub fn poles_with_residues(
    op: &ConeOperator,
    ell: usize,
    j: usize,
    contour: &ContourSpec,
) -> Result<Vec<PoleDatum>, SymbolError> {
    let sym = asymptotic_symbol(op, ell, j)?;
    classify_poles(&sym, op, ell, j, contour)?
        .iter()
        .map(|p| residue(&sym, p))
        .collect()
}

/// Outcome of the exact symbol identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub holds: bool,
    /// First order j at which the identity fails, with the offending residual.
    pub failure: Option<(usize, MellinSymbol)>,
}

/// Checks `sum_{i=0}^j h_{j-i}^(-1)(w+2-i) h_i(w) = delta_{j0}` for `j <= max_j`.
pub fn defining_identity_check(op: &ConeOperator, ell: usize, max_j: usize) -> Result<IdentityReport, SymbolError> {
    defining_identity_check_with(op, ell, max_j, &|j| {
        asymptotic_symbol(op, ell, j).map(|s| (*s).clone())
    })
}

/// Same check against an arbitrary symbol table.
pub fn defining_identity_check_with(
    op: &ConeOperator,
    ell: usize,
    max_j: usize,
    table: &dyn Fn(usize) -> Result<MellinSymbol, SymbolError>,
) -> Result<IdentityReport, SymbolError> {
    for j in 0..=max_j {
        let mut acc = MellinSymbol::zero();
        for i in 0..=j {
            let hi = op.h_slice(i, ell)?;
            if hi.is_zero() {
                continue;
            }
            let s = table(j - i)?.shift_int(2 - i as i64)?;
            acc = acc.checked_add(&s.mul_poly(&hi)?)?;
        }
        let target = if j == 0 {
            QuadExtNumber::one()
        } else {
            QuadExtNumber::zero()
        };
        if !acc.is_constant(&target) {
            return Ok(IdentityReport {
                holds: false,
                failure: Some((j, acc)),
            });
        }
    }
    Ok(IdentityReport {
        holds: true,
        failure: None,
    })
}

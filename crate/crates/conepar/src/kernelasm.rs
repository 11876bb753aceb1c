//! Kernel assembly from residues, the K0/K1 split, the fundamental-solution
//! limit and convergence-controlled summation of the resulting series.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{rational_to_f64, QuadExtNumber, Rational};
use crate::spectrum::{PiMultiple, SpectrumError};
use crate::symbolcalc::{
    default_contour, poles_with_residues, ConeOperator, ContourSpec, OperatorFamily, Side, SymbolError,
};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const GOLDEN: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("order-2 pole at w = {0} left of the contour")]
    LeftDoublePole(String),
    #[error("operator is not fundamental-solution compatible")]
    NotFsCompatible,
    #[error("r = {0} must be positive")]
    NonPositiveRadius(f64),
    #[error("diagonal r = r~ is excluded")]
    Diagonal,
    #[error("tail bound {bound:e} exceeds tolerance {tol:e} at order {max_order} (partial sum {value})")]
    TailBound {
        value: f64,
        bound: f64,
        tol: f64,
        max_order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "r-greater")]
    RGreater,
    #[serde(rename = "r-less")]
    RLess,
}

/// `coefficient * r^{r_exponent} * rt^{rtilde_exponent} * [ln r] * [ln rt]` on one region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTerm {
    pub ell: usize,
    pub order: usize,
    pub coefficient: QuadExtNumber,
    pub r_exponent: QuadExtNumber,
    pub rtilde_exponent: QuadExtNumber,
    pub log_r: bool,
    pub log_rtilde: bool,
    pub region: Region,
}

impl KernelTerm {
    /// Value at `(r, rt)`, without the region indicator and the `r^j` prefactor.
    pub fn eval(&self, r: f64, rt: f64) -> f64 {
        let mut v = self.coefficient.to_f64() * r.powf(self.r_exponent.to_f64()) * rt.powf(self.rtilde_exponent.to_f64());
        if self.log_r {
            v *= r.ln();
        }
        if self.log_rtilde {
            v *= rt.ln();
        }
        v
    }
}

/// Terms of `K_j` at eigenvalue index `ell`, one group per pole.
pub fn kernel_terms(
    op: &ConeOperator,
    ell: usize,
    j: usize,
    contour: &ContourSpec,
) -> Result<Vec<KernelTerm>, KernelError> {
    let poles = poles_with_residues(op, ell, j, contour)?;
    let n = QuadExtNumber::from_int(op.n as i64);
    let two = QuadExtNumber::from_int(2);
    let mut out = Vec::new();
    for p in poles {
        let re = two.checked_sub(&p.location).map_err(SymbolError::from)?;
        let te = p.location.checked_sub(&n).map_err(SymbolError::from)?;
        let term = |coefficient: QuadExtNumber, log_r: bool, log_rtilde: bool, region: Region| KernelTerm {
            ell,
            order: j,
            coefficient,
            r_exponent: re.clone(),
            rtilde_exponent: te.clone(),
            log_r,
            log_rtilde,
            region,
        };
        match (p.side, p.order) {
            (Side::Right, 1) => {
                let res = p.res.expect("residue filled");
                if !res.is_zero() {
                    out.push(term(-res, false, false, Region::RGreater));
                }
            }
            (Side::Right, _) => {
                let r1 = p.res1.expect("residue filled");
                let r2 = p.res2.expect("residue filled");
                // -(Res2 + Res1 d/dw) r^{2-w} rt^{w-n} = Res1 ln(r/rt) - Res2
                if !r1.is_zero() {
                    out.push(term(r1.clone(), true, false, Region::RGreater));
                    out.push(term(-r1, false, true, Region::RGreater));
                }
                if !r2.is_zero() {
                    out.push(term(-r2, false, false, Region::RGreater));
                }
            }
            (Side::Left, 1) => {
                let res = p.res.expect("residue filled");
                if !res.is_zero() {
                    out.push(term(res, false, false, Region::RLess));
                }
            }
            (Side::Left, _) => return Err(KernelError::LeftDoublePole(p.location.to_string())),
        }
    }
    Ok(out)
}

/// Splits r-greater terms into `(K0, K1)`; r-less terms are ignored.
///
/// `ln rt` parts go to K1, `ln r` parts to K0; the rest by the sign of the
/// rt-exponent with `H0(0) = 1`, `H1(0) = 0`.
pub fn kernel_split(terms: &[KernelTerm]) -> (Vec<KernelTerm>, Vec<KernelTerm>) {
    let mut k0 = Vec::new();
    let mut k1 = Vec::new();
    for t in terms.iter().filter(|t| t.region == Region::RGreater) {
        if t.log_rtilde {
            k1.push(t.clone());
        } else if t.log_r || t.rtilde_exponent.signum() >= 0 {
            k0.push(t.clone());
        } else {
            k1.push(t.clone());
        }
    }
    (k0, k1)
}

/// One entry of `k_j`: `coefficient * pi^{pi_power} * r^{2-n} * [ln r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsTerm {
    pub coefficient: QuadExtNumber,
    pub log_r: bool,
}

/// `k(r) = sum_j r^j k_j(r)` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalSolutionSeries {
    pub operator: String,
    pub n: u32,
    pub pi_power: i32,
    pub terms: Vec<Vec<FsTerm>>,
    #[serde(serialize_with = "ser_params")]
    pub parameters: BTreeMap<String, Rational>,
    /// `C` of the Fibonacci majorant.
    pub tail_constant: f64,
    pub heuristic_bound: bool,
    #[serde(skip)]
    p0: PiMultiple,
    /// `(plain, log)` coefficients per order, as floats.
    #[serde(skip)]
    floats: Vec<(f64, f64)>,
}

fn ser_params<S: serde::Serializer>(m: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &crate::exactnum::format_rational(v))?;
    }
    map.end()
}

/// `k_j` as the rt -> 0 limit of the l = 0 part of K0.
pub fn spherical_limit(op: &ConeOperator, j: usize) -> Result<Vec<FsTerm>, KernelError> {
    if !op.is_fundamental_solution_compatible() {
        return Err(KernelError::NotFsCompatible);
    }
    let contour = default_contour(op);
    let terms = kernel_terms(op, 0, j, &contour)?;
    let (k0, _) = kernel_split(&terms);
    let p0 = op.base.p0_constant();
    let scale = QuadExtNumber::rational(p0.coeff.clone());
    let mut plain = QuadExtNumber::zero();
    let mut logc = QuadExtNumber::zero();
    for t in k0.iter().filter(|t| t.rtilde_exponent.is_zero()) {
        let c = t.coefficient.checked_mul(&scale).map_err(SymbolError::from)?;
        let slot = if t.log_r { &mut logc } else { &mut plain };
        *slot = slot.checked_add(&c).map_err(SymbolError::from)?;
    }
    let mut out = Vec::new();
    if !plain.is_zero() {
        out.push(FsTerm {
            coefficient: plain,
            log_r: false,
        });
    }
    if !logc.is_zero() {
        out.push(FsTerm {
            coefficient: logc,
            log_r: true,
        });
    }
    Ok(out)
}

fn abs_f(x: &Rational) -> f64 {
    rational_to_f64(x).abs()
}

/// Majorant constant `C` and whether it is covered by the convergence proof.
pub fn tail_constant(op: &ConeOperator) -> (f64, bool) {
    let two_a = 2.0 * GOLDEN;
    match &op.family {
        OperatorFamily::Coulomb { z, kappa_sq } => (two_a * abs_f(z).max(abs_f(kappa_sq).sqrt()), false),
        OperatorFamily::ShiftedLaplacian { kappa_sq } if op.n == 3 => (two_a * abs_f(kappa_sq).sqrt(), false),
        _ => {
            let ord1 = [op.a0.get(1), op.a1.get(1), op.a2.get(1), op.b.get(1)]
                .into_iter()
                .flatten()
                .map(abs_f)
                .fold(0.0, f64::max);
            let ord2 = [op.a0.get(2), op.a1.get(2), op.a2.get(2), op.b.get(2)]
                .into_iter()
                .flatten()
                .map(abs_f)
                .fold(0.0, f64::max);
            (two_a * (ord1 / 2.0).max(ord2.sqrt()), true)
        }
    }
}

/// Exact series through `max_order`.
pub fn fundamental_solution_series(
    op: &ConeOperator,
    max_order: usize,
) -> Result<FundamentalSolutionSeries, KernelError> {
    let op = if op.truncation_order < max_order {
        op.clone().with_truncation(max_order)
    } else {
        op.clone()
    };
    let terms = (0..=max_order)
        .map(|j| spherical_limit(&op, j))
        .collect::<Result<Vec<_>, _>>()?;
    let mut parameters = BTreeMap::new();
    if let Some(k) = op.parameter_kappa_sq() {
        parameters.insert("kappa_sq".to_string(), k.clone());
    }
    if let Some(z) = op.parameter_z() {
        parameters.insert("Z".to_string(), z.clone());
    }
    let (tail_constant, heuristic_bound) = tail_constant(&op);
    let p0 = op.base.p0_constant();
    let floats = terms
        .iter()
        .map(|ts| {
            ts.iter().fold((0.0, 0.0), |(a, b), t| {
                if t.log_r {
                    (a, b + t.coefficient.to_f64())
                } else {
                    (a + t.coefficient.to_f64(), b)
                }
            })
        })
        .collect();
    Ok(FundamentalSolutionSeries {
        operator: op.name.clone(),
        n: op.n,
        pi_power: p0.pi_power,
        terms,
        parameters,
        tail_constant,
        heuristic_bound,
        p0,
        floats,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
    pub max_order: usize,
    pub heuristic_bound: bool,
}

impl FundamentalSolutionSeries {
    pub fn max_order(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn p0(&self) -> &PiMultiple {
        &self.p0
    }

    /// Partial sum through `max_order` (clamped to the available orders).
    pub fn partial_sum(&self, r: f64, max_order: usize) -> f64 {
        let pi = std::f64::consts::PI.powi(self.pi_power);
        let lr = r.ln();
        let base = r.powi(2 - self.n as i32);
        let mut acc = 0.0;
        let mut rj = 1.0;
        for (plain, log) in self.floats.iter().take(max_order + 1) {
            acc += (plain + log * lr) * rj;
            rj *= r;
        }
        acc * base * pi
    }

    /// Majorant for `sum_{p > max_order}` following the Fibonacci bound.
    pub fn tail_bound(&self, r: f64, max_order: usize) -> f64 {
        let c = self.tail_constant;
        if c == 0.0 && max_order >= 2 {
            return 0.0;
        }
        let pref = self.p0.to_f64() / 5f64.sqrt();
        let lr = r.ln();
        let n = self.n as f64;
        let ln_c = c.ln();
        // ln((p-2)!) at p = max_order + 1
        let first = max_order + 1;
        let mut lf2: f64 = (2..first.saturating_sub(1)).map(|k| (k as f64).ln()).sum();
        let mut total = 0.0;
        for p in first..first + 100_000 {
            let pf = p as f64;
            let lf1 = lf2 + ((p - 1).max(1) as f64).ln();
            let t2 = if p >= 2 { ((pf - 2.0) * ln_c - lf2).exp() } else { 0.0 };
            let lp = lr.abs() + pf.ln() + (pf - 1.0).max(1.0).ln() + 2.0 * EULER_GAMMA;
            let t1 = if p >= 1 { ((pf - 1.0) * ln_c - lf1).exp() * lp } else { 0.0 };
            let term = r.powf(pf + 2.0 - n) * (t2 + t1);
            total += term;
            if pf > 2.0 * c * r + 2.0 && (term <= total * 1e-18 || term < 1e-300) {
                break;
            }
            lf2 = lf1;
        }
        pref * total
    }
}

/// Partial sum through `max_order` with its tail majorant; fails when the bound exceeds `tol`.
pub fn sum_series(
    series: &FundamentalSolutionSeries,
    r: f64,
    max_order: usize,
    tol: f64,
) -> Result<SeriesSum, KernelError> {
    if !(r > 0.0) {
        return Err(KernelError::NonPositiveRadius(r));
    }
    let max_order = max_order.min(series.max_order());
    let value = series.partial_sum(r, max_order);
    let bound = series.tail_bound(r, max_order);
    if !(bound <= tol) {
        return Err(KernelError::TailBound {
            value,
            bound,
            tol,
            max_order,
        });
    }
    Ok(SeriesSum {
        value,
        tail_bound: bound,
        max_order,
        heuristic_bound: series.heuristic_bound,
    })
}

/// Kernel terms indexed `[ell][j]`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub max_ell: usize,
    pub max_order: usize,
    pub terms: Vec<Vec<Vec<KernelTerm>>>,
}

pub fn kernel_table(
    op: &ConeOperator,
    max_ell: usize,
    max_order: usize,
    contour: &ContourSpec,
) -> Result<KernelTable, KernelError> {
    let op = if op.truncation_order < max_order {
        op.clone().with_truncation(max_order)
    } else {
        op.clone()
    };
    let terms = (0..=max_ell)
        .map(|ell| {
            (0..=max_order)
                .map(|j| kernel_terms(&op, ell, j, contour))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KernelTable {
        max_ell,
        max_order,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub max_ell: usize,
    pub max_order: usize,
}

/// `sum_j r^j sum_l K_j^l(r, rt) p_l(angle)` from a precomputed table.
pub fn kernel_eval_table(
    op: &ConeOperator,
    table: &KernelTable,
    r: f64,
    rt: f64,
    angle: f64,
) -> Result<KernelValue, KernelError> {
    if !(r > 0.0) {
        return Err(KernelError::NonPositiveRadius(r));
    }
    if !(rt > 0.0) {
        return Err(KernelError::NonPositiveRadius(rt));
    }
    if r == rt {
        return Err(KernelError::Diagonal);
    }
    let region = if r > rt { Region::RGreater } else { Region::RLess };
    let mut total = 0.0;
    for (ell, per_j) in table.terms.iter().enumerate() {
        let pl = op.base.projection_kernel(ell, angle)?;
        let mut radial = 0.0;
        let mut rj = 1.0;
        for terms in per_j {
            let s: f64 = terms.iter().filter(|t| t.region == region).map(|t| t.eval(r, rt)).sum();
            radial += rj * s;
            rj *= r;
        }
        total += radial * pl;
    }
    Ok(KernelValue {
        value: total,
        max_ell: table.max_ell,
        max_order: table.max_order,
    })
}

pub fn kernel_eval(
    op: &ConeOperator,
    r: f64,
    rt: f64,
    angle: f64,
    max_ell: usize,
    max_order: usize,
    contour: &ContourSpec,
) -> Result<KernelValue, KernelError> {
    if r == rt {
        return Err(KernelError::Diagonal);
    }
    let table = kernel_table(op, max_ell, max_order, contour)?;
    kernel_eval_table(op, &table, r, rt, angle)
}

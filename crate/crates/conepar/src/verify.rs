//! Independent numeric oracles: contour integrals for residues, quadrature
//! pairings of fundamental solutions against test functions, and
//! finite-difference annihilation checks.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{rational_to_f64, QuadExtNumber};
use crate::kernelasm::{fundamental_solution_series, kernel_eval_table, kernel_table, KernelError};
use crate::reference::{parametrix_kernel_n3, ReferenceError};
use crate::symbolcalc::{asymptotic_symbol, default_contour, residue, ConeOperator, MellinSymbol, OperatorFamily, PoleDatum, Side, SymbolError};
use crate::words::{cardinality, cardinality_binomial, enumerate_words, word_symbol, WordsError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{0} is not a pole of the symbol")]
    PoleNotFound(String),
    #[error("pole at {location} has order {actual}, requested {requested}")]
    OrderMismatch { location: String, actual: u32, requested: u32 },
    #[error("pole spacing is zero at {0} (unreduced symbol)")]
    ZeroSpacing(String),
    #[error("quadrature did not reach {tol:e} (estimate {estimate:e} after {intervals} intervals)")]
    Quadrature { tol: f64, estimate: f64, intervals: usize },
    #[error("invalid test function: {0}")]
    TestFunction(String),
    #[error("finite-difference step {0} outside (0, 0.5)")]
    Step(f64),
    #[error("step error estimate {estimate:e} exceeds tolerance {tol:e}; refine h")]
    StepTooLarge { estimate: f64, tol: f64 },
    #[error("grid point {0} is not positive")]
    Grid(f64),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("suite {suite} does not apply: {reason}")]
    NotApplicable { suite: String, reason: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error(transparent)]
    Words(#[from] WordsError),
}

pub const ORACLE_NODES: usize = 4096;

/// Numeric residue data for one pole.
///
/// `res` is the plain contour integral `(2 pi i)^{-1} \oint f`; for an order-2
/// pole `res1` is `(2 pi i)^{-1} \oint (w - w0) f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResidue {
    pub res: Complex64,
    pub res1: Option<Complex64>,
    pub radius: f64,
    /// Difference between N and N/2 node trapezoid sums.
    pub error_estimate: f64,
    /// Largest `|f| rho` on the circle; the roundoff scale of the sums.
    pub magnitude: f64,
}

/// `sym` in the local variable `x = w - w0`: numerator Taylor-shifted exactly,
/// poles stored as offsets, so circle evaluation avoids cancellation.
struct LocalSymbol {
    scalar: f64,
    numerator: Vec<f64>,
    poles: Vec<(f64, u32)>,
}

impl LocalSymbol {
    fn new(sym: &MellinSymbol, w0: &QuadExtNumber) -> Result<Self, VerifyError> {
        let numerator = sym.numerator().shift(w0).coefficients().iter().map(|c| c.to_f64()).collect();
        let poles = sym
            .factors()
            .iter()
            .map(|(r, m)| Ok((r.checked_sub(w0).map_err(SymbolError::from)?.to_f64(), *m)))
            .collect::<Result<_, VerifyError>>()?;
        Ok(Self {
            scalar: sym.scalar().to_f64(),
            numerator,
            poles,
        })
    }

    fn eval(&self, x: Complex64) -> Complex64 {
        let num = self.numerator.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
        let den = self.poles.iter().fold(Complex64::new(1.0, 0.0), |acc, (d, m)| acc * (x - d).powu(*m));
        num * self.scalar / den
    }
}

fn circle_sums(f: &LocalSymbol, rho: f64, nodes: usize, weight_power: i32) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag: f64 = 0.0;
    for k in 0..nodes {
        let th = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let x = Complex64::from_polar(rho, th);
        let term = f.eval(x) * x * x.powi(weight_power);
        mag = mag.max(term.norm());
        acc += term;
    }
    (acc / nodes as f64, mag)
}

/// Residue of `sym` at `pole` by trapezoid integration over a circle of half
/// the distance to the nearest other pole.
pub fn contour_residue_oracle(sym: &MellinSymbol, pole: &QuadExtNumber, order: u32) -> Result<OracleResidue, VerifyError> {
    let m = sym.multiplicity_of(pole);
    if m == 0 {
        return Err(VerifyError::PoleNotFound(pole.to_string()));
    }
    if m != order {
        return Err(VerifyError::OrderMismatch {
            location: pole.to_string(),
            actual: m,
            requested: order,
        });
    }
    let mut nearest = f64::INFINITY;
    for (r, _) in sym.factors() {
        if r != pole {
            let d = pole.checked_sub(r).map_err(SymbolError::from)?.abs().to_f64();
            if d == 0.0 {
                return Err(VerifyError::ZeroSpacing(pole.to_string()));
            }
            nearest = nearest.min(d);
        }
    }
    let rho = if nearest.is_finite() { nearest / 2.0 } else { 1.0 };
    let local = LocalSymbol::new(sym, pole)?;
    let (res, mag) = circle_sums(&local, rho, ORACLE_NODES, 0);
    let (half, _) = circle_sums(&local, rho, ORACLE_NODES / 2, 0);
    let mut err = (res - half).norm();
    let mut magnitude = mag;
    let res1 = if order == 2 {
        let (r1, m1) = circle_sums(&local, rho, ORACLE_NODES, 1);
        let (h1, _) = circle_sums(&local, rho, ORACLE_NODES / 2, 1);
        err = err.max((r1 - h1).norm());
        magnitude = magnitude.max(m1);
        Some(r1)
    } else {
        None
    };
    Ok(OracleResidue {
        res,
        res1,
        radius: rho,
        error_estimate: err,
        magnitude,
    })
}

/// Relative deviation, falling back to the trapezoid magnitude when the exact value is zero.
pub fn residue_deviation(numeric: Complex64, exact: &QuadExtNumber, magnitude: f64) -> f64 {
    let e = exact.to_f64();
    let denom = if e == 0.0 { magnitude.max(f64::MIN_POSITIVE) } else { e.abs() };
    (numeric - Complex64::new(e, 0.0)).norm() / denom
}

/// Compares every exact residue of `sym` with the contour oracle; returns the worst deviation.
pub fn residue_agreement(sym: &MellinSymbol) -> Result<f64, VerifyError> {
    let mut worst: f64 = 0.0;
    for (root, m) in sym.factors() {
        let datum = residue(
            sym,
            &PoleDatum {
                location: root.clone(),
                order: *m,
                side: Side::Left,
                res: None,
                res1: None,
                res2: None,
            },
        )?;
        let o = contour_residue_oracle(sym, root, *m)?;
        match m {
            1 => worst = worst.max(residue_deviation(o.res, datum.res.as_ref().expect("order 1"), o.magnitude)),
            _ => {
                let r1 = o.res1.expect("order 2");
                worst = worst.max(residue_deviation(r1, datum.res1.as_ref().expect("order 2"), o.magnitude));
                worst = worst.max(residue_deviation(o.res, datum.res2.as_ref().expect("order 2"), o.magnitude));
            }
        }
    }
    Ok(worst)
}

/// One term `P(r) * exp(1 - 1/(1 - (r/R)^2))` of a radial test function.
#[derive(Debug, Clone, PartialEq)]
struct BumpComponent {
    radius: f64,
    poly: Vec<f64>,
}

impl BumpComponent {
    /// `(w, D w, D^2 w)` with `D = r d/dr`.
    fn derivs(&self, r: f64) -> [f64; 3] {
        if r >= self.radius {
            return [0.0; 3];
        }
        let s = (r / self.radius).powi(2);
        let om = 1.0 - s;
        let phi = (1.0 - 1.0 / om).exp();
        let df = -2.0 * s / (om * om);
        let d2f = -4.0 * s * (1.0 + s) / (om * om * om);
        let dphi = phi * df;
        let d2phi = phi * (df * df + d2f);
        let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
        let mut rk = 1.0;
        for (k, c) in self.poly.iter().enumerate() {
            let t = c * rk;
            let kf = k as f64;
            p += t;
            dp += kf * t;
            d2p += kf * kf * t;
            rk *= r;
        }
        [p * phi, dp * phi + p * dphi, d2p * phi + 2.0 * dp * dphi + p * d2phi]
    }
}

/// Radial test function: a finite sum of polynomial-times-bump terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTestFunction {
    components: Vec<BumpComponent>,
}

impl RadialTestFunction {
    /// `exp(1 - 1/(1 - (r/R)^2))`, equal to 1 at the origin.
    pub fn bump(radius: f64) -> Result<Self, VerifyError> {
        Self::poly_bump(radius, &[1.0])
    }

    /// `(c_0 + c_1 r + ...) * bump(radius)`.
    pub fn poly_bump(radius: f64, coeffs: &[f64]) -> Result<Self, VerifyError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(VerifyError::TestFunction(format!("support radius {radius}")));
        }
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(VerifyError::TestFunction("polynomial coefficients".into()));
        }
        Ok(Self {
            components: vec![BumpComponent {
                radius,
                poly: coeffs.to_vec(),
            }],
        })
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let scaled = |c: &BumpComponent, s: f64| BumpComponent {
            radius: c.radius,
            poly: c.poly.iter().map(|x| x * s).collect(),
        };
        Self {
            components: self
                .components
                .iter()
                .map(|c| scaled(c, a))
                .chain(other.components.iter().map(|c| scaled(c, b)))
                .collect(),
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.components.iter().map(|c| c.radius).fold(0.0, f64::max)
    }

    pub fn value_at_zero(&self) -> f64 {
        self.components.iter().map(|c| c.poly[0]).sum()
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.derivs(r)[0]
    }

    /// `(w, r w', (r d/dr)^2 w)`.
    pub fn derivs(&self, r: f64) -> [f64; 3] {
        self.components.iter().fold([0.0; 3], |acc, c| {
            let d = c.derivs(r);
            [acc[0] + d[0], acc[1] + d[1], acc[2] + d[2]]
        })
    }
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and `|K15 - G7|` on `[a, b]`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for i in 0..7 {
        let x = h * GK_X[i];
        let s = f(c - x) + f(c + x);
        k += GK_WK[i] * s;
        if i % 2 == 1 {
            g += GK_WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

pub const MAX_INTERVALS: usize = 4000;

/// Globally adaptive G7K15 quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64), VerifyError> {
    let mut heap = BinaryHeap::new();
    // a few initial pieces, finer towards 0 where the integrand carries logarithms
    let cuts = [0.0, 1e-6, 1e-3, 0.05, 0.25, 0.5, 0.75, 1.0];
    for w in cuts.windows(2) {
        let (x0, x1) = (a + (b - a) * w[0], a + (b - a) * w[1]);
        let (value, err) = gk15(f, x0, x1);
        heap.push(Piece { a: x0, b: x1, value, err });
    }
    loop {
        let (total, err): (f64, f64) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
        if !total.is_finite() {
            return Err(VerifyError::Quadrature {
                tol,
                estimate: f64::INFINITY,
                intervals: heap.len(),
            });
        }
        if err <= tol {
            return Ok((total, err));
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(VerifyError::Quadrature {
                tol,
                estimate: err,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        for (x0, x1) in [(worst.a, m), (m, worst.b)] {
            let (value, err) = gk15(f, x0, x1);
            heap.push(Piece { a: x0, b: x1, value, err });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingResult {
    pub value: f64,
    pub error_estimate: f64,
    pub expected: f64,
}

/// `<A k, w>` through the transposed radial operator:
/// `|S^{n-1}| int_0^R r^{n-3} k(r) sum_i r^i sum_j a_j^(i) ((n-2+i) + r d/dr)^j w dr`.
pub fn distributional_pairing(
    op: &ConeOperator,
    fs: &dyn Fn(f64) -> f64,
    test: &RadialTestFunction,
    quad_tol: f64,
) -> Result<PairingResult, VerifyError> {
    let n = op.n as i32;
    let len = op.series_length();
    let coeffs: Vec<[f64; 3]> = (0..len)
        .map(|i| {
            [
                rational_to_f64(&op.coefficient_a(0, i)),
                rational_to_f64(&op.coefficient_a(1, i)),
                rational_to_f64(&op.coefficient_a(2, i)),
            ]
        })
        .collect();
    let area = 1.0 / op.base.p0_constant().to_f64();
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let [w, dw, d2w] = test.derivs(r);
        let mut bracket = 0.0;
        let mut ri = 1.0;
        for (i, a) in coeffs.iter().enumerate() {
            let c = (n - 2 + i as i32) as f64;
            let t = a[0] * w + a[1] * (c * w + dw) + a[2] * (c * c * w + 2.0 * c * dw + d2w);
            bracket += ri * t;
            ri *= r;
        }
        r.powi(n - 3) * fs(r) * bracket
    };
    let (v, e) = integrate(&integrand, 0.0, test.support_radius(), quad_tol / area)?;
    Ok(PairingResult {
        value: area * v,
        error_estimate: area * e,
        expected: test.value_at_zero(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnihilationReport {
    pub max_residual: f64,
    pub step: f64,
    /// Richardson estimate of the stencil error, from steps h and 2h.
    pub step_error_estimate: f64,
}

impl AnnihilationReport {
    /// Decides `max_residual < tol`, refusing when the stencil error could flip the answer.
    pub fn passes(&self, tol: f64) -> Result<bool, VerifyError> {
        if self.step_error_estimate >= tol {
            return Err(VerifyError::StepTooLarge {
                estimate: self.step_error_estimate,
                tol,
            });
        }
        Ok(self.max_residual < tol)
    }
}

fn stencil_residual(op: &ConeOperator, f: &dyn Fn(f64) -> f64, lambda: f64, r: f64, h: f64) -> f64 {
    let t = r.ln();
    let v: Vec<f64> = (-2..=2).map(|k| f((t + k as f64 * h).exp())).collect();
    let f_t = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let f_tt = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    let mut total = 0.0;
    let mut ri = 1.0;
    for i in 0..op.series_length() {
        let a2 = rational_to_f64(&op.coefficient_a(2, i));
        let a1 = rational_to_f64(&op.coefficient_a(1, i));
        let a0 = rational_to_f64(&op.coefficient_a(0, i));
        let b = rational_to_f64(&op.coefficient_b(i));
        total += ri * (a2 * f_tt - a1 * f_t + (a0 + b * lambda) * v[2]);
        ri *= r;
    }
    total
}

/// `max |r^2 A_l f|` over the grid, with `A_l` the operator at eigenvalue `lambda_l`,
/// differentiated by 5-point stencils in `t = ln r`.
pub fn annihilation_check(
    op: &ConeOperator,
    f: &dyn Fn(f64) -> f64,
    ell: usize,
    r_grid: &[f64],
    h: f64,
) -> Result<AnnihilationReport, VerifyError> {
    if !(h > 0.0 && h < 0.5) {
        return Err(VerifyError::Step(h));
    }
    let lambda = rational_to_f64(&op.eigenvalue(ell)?);
    let mut max_residual: f64 = 0.0;
    let mut est: f64 = 0.0;
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(VerifyError::Grid(r));
        }
        let a = stencil_residual(op, f, lambda, r, h);
        let b = stencil_residual(op, f, lambda, r, 2.0 * h);
        max_residual = max_residual.max(a.abs());
        est = est.max((a - b).abs() / 15.0);
    }
    Ok(AnnihilationReport {
        max_residual,
        step: h,
        step_error_estimate: est,
    })
}

/// One named check of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            residual: if holds { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            suite: suite.to_string(),
            checks,
            passed,
        }
    }
}

pub const SUITES: [&str; 4] = ["residues", "pairing", "kernel-compare", "words"];

/// Limits shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteLimits {
    pub max_ell: usize,
    pub max_order: usize,
    pub tol: f64,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        Self {
            max_ell: 3,
            max_order: 6,
            tol: 1e-10,
        }
    }
}

pub fn residue_suite(op: &ConeOperator, limits: SuiteLimits) -> Result<SuiteReport, VerifyError> {
    let op = op.clone().with_truncation(op.truncation_order.max(limits.max_order));
    let mut checks = Vec::new();
    for ell in 0..=limits.max_ell {
        for j in 0..=limits.max_order {
            let sym = asymptotic_symbol(&op, ell, j)?;
            checks.push(Check::new(format!("ell={ell} j={j}"), residue_agreement(&sym)?, limits.tol));
        }
    }
    Ok(SuiteReport::new("residues", checks))
}

/// Pairing of the series fundamental solution against three bumps.
pub fn pairing_suite(op: &ConeOperator, limits: SuiteLimits) -> Result<SuiteReport, VerifyError> {
    let order = limits.max_order.max(20);
    let series = fundamental_solution_series(op, order)?;
    let fs = |r: f64| series.partial_sum(r, order);
    let tests = [
        ("bump R=1", RadialTestFunction::bump(1.0)?),
        ("bump R=0.6", RadialTestFunction::bump(0.6)?),
        ("(1+r-r^2) bump R=1.3", RadialTestFunction::poly_bump(1.3, &[1.0, 1.0, -1.0])?),
    ];
    let mut checks = Vec::new();
    for (name, t) in &tests {
        let p = distributional_pairing(op, &fs, t, 1e-10)?;
        let rel = (p.value - p.expected).abs() / p.expected.abs();
        checks.push(Check::new(*name, rel, limits.tol.max(1e-6)));
    }
    Ok(SuiteReport::new("pairing", checks))
}

/// Engine kernel against the Bessel-based parametrix; shifted Laplacian n = 3 only.
pub fn kernel_compare_suite(op: &ConeOperator, limits: SuiteLimits) -> Result<SuiteReport, VerifyError> {
    let kappa_sq = match (&op.family, op.n) {
        (OperatorFamily::ShiftedLaplacian { kappa_sq }, 3) => rational_to_f64(kappa_sq),
        _ => {
            return Err(VerifyError::NotApplicable {
                suite: "kernel-compare".into(),
                reason: "needs the shifted Laplacian with n = 3".into(),
            })
        }
    };
    let kappa = kappa_sq.sqrt();
    let order = limits.max_order.max(30);
    let contour = default_contour(op);
    let table = kernel_table(op, limits.max_ell, order, &contour)?;
    let mut checks = Vec::new();
    for r in [0.3, 0.7, 1.2] {
        for rt in [0.2, 0.5, 0.9] {
            if r == rt {
                continue;
            }
            for angle in [0.0, 1.0, 2.5] {
                let a = kernel_eval_table(op, &table, r, rt, angle)?.value;
                let b = parametrix_kernel_n3(kappa, r, rt, angle, limits.max_ell as u32)?;
                checks.push(Check::new(format!("r={r} rt={rt} angle={angle}"), (a - b).abs(), limits.tol.max(1e-8)));
            }
        }
    }
    Ok(SuiteReport::new("kernel-compare", checks))
}

pub fn words_suite(op: &ConeOperator, limits: SuiteLimits) -> Result<SuiteReport, VerifyError> {
    let mut checks = Vec::new();
    for p in 0..=20u64 {
        let c = cardinality(p);
        let ok = c == cardinality_binomial(p) && c == enumerate_words(p).len().into();
        checks.push(Check::exact(format!("|S_{p}|"), ok));
    }
    if !matches!(op.family, OperatorFamily::Coulomb { .. }) {
        return Ok(SuiteReport::new("words", checks));
    }
    let op = op.clone().with_truncation(op.truncation_order.max(limits.max_order));
    for ell in 0..=limits.max_ell {
        for p in 1..=limits.max_order as u64 {
            let w = word_symbol(&op, ell, p)?;
            let r = asymptotic_symbol(&op, ell, p as usize)?;
            checks.push(Check::exact(format!("word sum ell={ell} p={p}"), w == *r));
        }
    }
    Ok(SuiteReport::new("words", checks))
}

pub fn run_suite(op: &ConeOperator, suite: &str, limits: SuiteLimits) -> Result<SuiteReport, VerifyError> {
    match suite {
        "residues" => residue_suite(op, limits),
        "pairing" => pairing_suite(op, limits),
        "kernel-compare" => kernel_compare_suite(op, limits),
        "words" => words_suite(op, limits),
        other => Err(VerifyError::UnknownSuite(other.to_string())),
    }
}

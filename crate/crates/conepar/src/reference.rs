//! Closed-form references: modified Bessel functions, standard and modified
//! fundamental solutions, the n = 3 parametrix and Green kernels, and the
//! Coulomb series at kappa = 0.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{double_factorial, factorial, harmonic, rat, rat_int, rational_to_f64, Rational};
use crate::kernelasm::EULER_GAMMA;
use crate::spectrum::legendre;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReferenceError {
    #[error("argument {0} must be positive")]
    NonPositive(f64),
    #[error("argument {0} is not finite")]
    NotFinite(f64),
    #[error("order {0} is neither an integer nor a half-integer")]
    BadOrder(f64),
    #[error("dimension {0} not supported here")]
    BadDimension(u32),
    #[error("diagonal r = r~ is excluded")]
    Diagonal,
}

/// Exact tables of factorials, double factorials and harmonic numbers, plus
/// the working precision of the exact Bessel series.
#[derive(Debug, Clone)]
pub struct SpecialFunctionTable {
    /// Relative truncation threshold of the Bessel series is `2^-precision_bits`.
    pub precision_bits: u32,
    factorials: Vec<BigInt>,
    double_factorials: Vec<BigInt>,
    harmonics: Vec<Rational>,
}

impl SpecialFunctionTable {
    /// 180 bits, a little over 54 decimal digits.
    pub fn new(max_index: usize) -> Self {
        let factorials = (0..=max_index as u64).map(factorial).collect();
        // index k holds (k-1)!!
        let double_factorials = (0..=max_index as i64).map(|k| double_factorial(k - 1)).collect();
        let harmonics = (0..=max_index as u64).map(harmonic).collect();
        SpecialFunctionTable {
            precision_bits: 180,
            factorials,
            double_factorials,
            harmonics,
        }
    }

    pub fn factorial(&self, n: usize) -> BigInt {
        self.factorials.get(n).cloned().unwrap_or_else(|| factorial(n as u64))
    }

    /// `n!!` for `n >= -1`.
    pub fn double_factorial(&self, n: i64) -> BigInt {
        self.double_factorials
            .get((n + 1) as usize)
            .cloned()
            .unwrap_or_else(|| double_factorial(n))
    }

    pub fn harmonic(&self, p: usize) -> Rational {
        self.harmonics.get(p).cloned().unwrap_or_else(|| harmonic(p as u64))
    }
}

impl Default for SpecialFunctionTable {
    fn default() -> Self {
        Self::new(64)
    }
}

fn exact(x: f64) -> Result<Rational, ReferenceError> {
    if !x.is_finite() {
        return Err(ReferenceError::NotFinite(x));
    }
    if x <= 0.0 {
        return Err(ReferenceError::NonPositive(x));
    }
    Ok(Rational::from_float(x).expect("finite"))
}

fn pow_i(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        x.pow(e as i32)
    } else {
        x.recip().pow((-e) as i32)
    }
}

/// `Gamma(s + 1/2) / sqrt(pi)` for integer `s`.
fn half_gamma(s: i64) -> Rational {
    if s >= 0 {
        Rational::new(double_factorial(2 * s - 1), BigInt::from(2).pow(s as u32))
    } else {
        // g(s) = g(s+1) / (s + 1/2)
        let mut g = Rational::one();
        for t in (s..0).rev() {
            g /= rat(2 * t + 1, 2);
        }
        g
    }
}

/// `R_m(x) = sum_k (x/2)^{2k+m} / (k! g(k+m+1))`, so `I_{m+1/2}(x) = sqrt(x/(2 pi)) R_m(x)`.
fn half_series(m: i64, x: &Rational, bits: u32) -> Rational {
    let h = x / rat_int(2);
    let h2 = &h * &h;
    let eps = Rational::new(BigInt::one(), BigInt::one() << bits);
    let half = rat(1, 2);
    let mut s = m + 1;
    let mut term = pow_i(&h, m) / half_gamma(s);
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        sum += &term;
        let ratio = &h2 / (rat_int(k + 1) * rat(2 * s + 1, 2));
        let next = &term * &ratio;
        k += 1;
        s += 1;
        if ratio.abs() < half && next.abs() <= &eps * sum.abs() {
            break;
        }
        term = next;
    }
    sum
}

/// `I_{m+1/2}(x)` for any integer `m`.
pub fn bessel_i_half(m: i64, x: f64) -> Result<f64, ReferenceError> {
    let xe = exact(x)?;
    let r = half_series(m, &xe, 180);
    Ok((x / (2.0 * PI)).sqrt() * rational_to_f64(&r))
}

/// `I_m(x)` for integer `m >= 0`.
pub fn bessel_i_int(m: u32, x: f64) -> Result<f64, ReferenceError> {
    let xe = exact(x)?;
    let h = &xe / rat_int(2);
    let h2 = &h * &h;
    let eps = Rational::new(BigInt::one(), BigInt::one() << 180u32);
    let mut term = h.pow(m as i32) / Rational::from_integer(factorial(m as u64));
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        sum += &term;
        let next = &term * &h2 / rat_int((k + 1) * (k + 1 + m as i64));
        k += 1;
        if next <= &eps * &sum {
            break;
        }
        term = next;
    }
    Ok(rational_to_f64(&sum))
}

/// `I_nu(x)` for integer or half-integer `nu`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64, ReferenceError> {
    let twice = 2.0 * nu;
    if twice.fract() != 0.0 {
        return Err(ReferenceError::BadOrder(nu));
    }
    let t = twice as i64;
    if t % 2 == 0 {
        if t < 0 {
            // I_{-m} = I_m for integer m
            return bessel_i_int((-t / 2) as u32, x);
        }
        bessel_i_int((t / 2) as u32, x)
    } else {
        bessel_i_half((t - 1) / 2, x)
    }
}

/// `K_{l+1/2}(x) = (pi/2) (-1)^l (I_{-l-1/2}(x) - I_{l+1/2}(x))`, difference taken exactly.
pub fn bessel_k_half(ell: u32, x: f64) -> Result<f64, ReferenceError> {
    let xe = exact(x)?;
    // both series grow like e^x while the difference decays like e^-x
    let bits = 180 + (3.0 * x).ceil() as u32;
    let l = ell as i64;
    let d = half_series(-l - 1, &xe, bits) - half_series(l, &xe, bits);
    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * PI / 2.0 * (x / (2.0 * PI)).sqrt() * rational_to_f64(&d))
}

fn psi_int(m: u64) -> f64 {
    rational_to_f64(&harmonic(m - 1)) - EULER_GAMMA
}

/// `K_m(x)` for integer `m >= 0` by the logarithmic series.
pub fn bessel_k_int(m: u32, x: f64) -> Result<f64, ReferenceError> {
    exact(x)?;
    let h = x / 2.0;
    let q = h * h;
    let mut first = 0.0;
    for k in 0..m {
        let c = rational_to_f64(&Rational::new(factorial((m - k - 1) as u64), factorial(k as u64)));
        first += c * (-q).powi(k as i32);
    }
    first *= 0.5 * h.powi(-(m as i32));
    let log_part = if m % 2 == 0 { -1.0 } else { 1.0 } * h.ln() * bessel_i_int(m, x)?;
    let mut tail = 0.0;
    let mut pw = 1.0 / rational_to_f64(&Rational::from_integer(factorial(m as u64)));
    for k in 0..200u64 {
        let t = (psi_int(k + 1) + psi_int(m as u64 + k + 1)) * pw;
        tail += t;
        if t.abs() < 1e-18 * tail.abs() && k > 2 {
            break;
        }
        pw *= q / ((k + 1) as f64 * (m as u64 + k + 1) as f64);
    }
    tail *= if m % 2 == 0 { 0.5 } else { -0.5 } * h.powi(m as i32);
    Ok(first + log_part + tail)
}

fn s_ell_exact(ell: u32, x: &Rational) -> Rational {
    let l = ell as i64;
    (0..=l / 2)
        .map(|m| {
            let c = Rational::new(
                double_factorial(2 * (l - m) - 1),
                BigInt::from(2).pow(m as u32) * factorial(m as u64),
            );
            let c = if m % 2 == 0 { c } else { -c };
            c * pow_i(x, -1 - l + 2 * m)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `S_l(x) = sum_{m <= l/2} x^{-1-l+2m} (-1)^m (2(l-m)-1)!! / (2^m m!)`.
pub fn s_ell(ell: u32, x: f64) -> Result<f64, ReferenceError> {
    Ok(rational_to_f64(&s_ell_exact(ell, &exact(x)?)))
}

/// `(2l+1)/(4 pi) P_l(cos angle)`.
pub fn projection_s2(ell: u32, angle: f64) -> f64 {
    (2 * ell + 1) as f64 / (4.0 * PI) * legendre(ell as usize, angle.cos())
}

fn check_pair(r: f64, rt: f64) -> Result<(), ReferenceError> {
    for v in [r, rt] {
        if !(v > 0.0) {
            return Err(ReferenceError::NonPositive(v));
        }
    }
    if r == rt {
        return Err(ReferenceError::Diagonal);
    }
    Ok(())
}

fn sign(ell: u32) -> Rational {
    if ell % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

// With I_{m+1/2}(x) = sqrt(x/(2 pi)) R_m(x), every n = 3 kernel term below is
// kappa times an exact combination of R series; the cancellation between
// I_{-l-1/2} and S_l is then carried out without rounding.

/// Parametrix kernel of `Delta_3 - kappa^2`, truncated at `max_ell`.
pub fn parametrix_kernel_n3(kappa: f64, r: f64, rt: f64, angle: f64, max_ell: u32) -> Result<f64, ReferenceError> {
    check_pair(r, rt)?;
    let k = exact(kappa)?;
    let a = &k * exact(r)?;
    let b = &k * exact(rt)?;
    let bits = 180;
    let mut total = 0.0;
    for ell in 0..=max_ell {
        let l = ell as i64;
        let rp_a = half_series(l, &a, bits);
        let mut radial = -(&rp_a * s_ell_exact(ell, &b)) / rat_int(2);
        if r > rt {
            let rm_a = half_series(-l - 1, &a, bits);
            let rp_b = half_series(l, &b, bits);
            let rm_b = half_series(-l - 1, &b, bits);
            radial += sign(ell) * (&rp_a * rm_b - rm_a * rp_b) / rat_int(4);
        }
        total += kappa * rational_to_f64(&radial) * projection_s2(ell, angle);
    }
    Ok(total)
}

/// Green kernel `-sum K_{l+1/2}(kappa r>) I_{l+1/2}(kappa r<) p_l / sqrt(r rt)`.
pub fn green_kernel_n3(kappa: f64, r: f64, rt: f64, angle: f64, max_ell: u32) -> Result<f64, ReferenceError> {
    check_pair(r, rt)?;
    let (big, small) = if r > rt { (r, rt) } else { (rt, r) };
    let k = exact(kappa)?;
    let a = &k * exact(big)?;
    let b = &k * exact(small)?;
    let bits = 180 + (3.0 * kappa * big).ceil() as u32;
    let mut total = 0.0;
    for ell in 0..=max_ell {
        let l = ell as i64;
        let kd = half_series(-l - 1, &a, bits) - half_series(l, &a, bits);
        let radial = -sign(ell) * kd * half_series(l, &b, bits) / rat_int(4);
        total += kappa * rational_to_f64(&radial) * projection_s2(ell, angle);
    }
    Ok(total)
}

/// Radial factor `I_{l+1/2}(kappa r)/sqrt(r)` of the parametrix/Green difference.
pub fn difference_factor_r(ell: u32, kappa: f64, r: f64) -> Result<f64, ReferenceError> {
    Ok(bessel_i_half(ell as i64, kappa * r)? / r.sqrt())
}

fn difference_bracket(ell: u32, b: &Rational, bits: u32) -> Rational {
    let l = ell as i64;
    sign(ell) * (half_series(-l - 1, b, bits) - half_series(l, b, bits)) / rat_int(2) - s_ell_exact(ell, b)
}

/// `rt` factor `K_{l+1/2}(kappa rt)/sqrt(rt) - sqrt(pi kappa/2) S_l(kappa rt)`.
pub fn difference_factor_rt(ell: u32, kappa: f64, rt: f64) -> Result<f64, ReferenceError> {
    let b = exact(kappa)? * exact(rt)?;
    let bits = 180 + (3.0 * kappa * rt).ceil() as u32;
    Ok((kappa / (2.0 * PI)).sqrt() * PI * rational_to_f64(&difference_bracket(ell, &b, bits)))
}

/// Parametrix minus Green kernel, as the separable sum of difference factors.
pub fn kernel_difference_n3(kappa: f64, r: f64, rt: f64, angle: f64, max_ell: u32) -> Result<f64, ReferenceError> {
    check_pair(r, rt)?;
    let k = exact(kappa)?;
    let a = &k * exact(r)?;
    let b = &k * exact(rt)?;
    let bits = 180 + (3.0 * kappa * rt).ceil() as u32;
    let mut total = 0.0;
    for ell in 0..=max_ell {
        let v = half_series(ell as i64, &a, 180) * difference_bracket(ell, &b, bits) / rat_int(2);
        total += kappa * rational_to_f64(&v) * projection_s2(ell, angle);
    }
    Ok(total)
}

/// Area of the unit sphere in R^n.
pub fn sphere_area(n: u32) -> f64 {
    let p0 = crate::spectrum::sphere_p0(n);
    1.0 / p0.to_f64()
}

/// `-(2 pi)^{-n/2} kappa^{(n-2)/2} r^{(2-n)/2} K_{(n-2)/2}(kappa r)`.
pub fn standard_fs(n: u32, kappa: f64, r: f64) -> Result<f64, ReferenceError> {
    if n < 3 {
        return Err(ReferenceError::BadDimension(n));
    }
    exact(kappa)?;
    exact(r)?;
    let nu = (n as f64 - 2.0) / 2.0;
    let k = if n % 2 == 1 {
        bessel_k_half((n - 3) / 2, kappa * r)?
    } else {
        bessel_k_int((n - 2) / 2, kappa * r)?
    };
    Ok(-(2.0 * PI).powf(-(n as f64) / 2.0) * kappa.powf(nu) * r.powf(-nu) * k)
}

/// `-r^{2-n} / ((n-2) omega_n)`.
pub fn laplace_fs(n: u32, r: f64) -> f64 {
    -r.powi(2 - n as i32) / ((n as f64 - 2.0) * sphere_area(n))
}

/// Modified fundamental solution for even `n` with free constant `alpha`.
pub fn modified_fs_even(n: u32, kappa: f64, r: f64, alpha: f64) -> Result<f64, ReferenceError> {
    if n < 4 || n % 2 == 1 {
        return Err(ReferenceError::BadDimension(n));
    }
    exact(r)?;
    let m = (n - 2) / 2;
    let half_n = n as f64 / 2.0;
    let kr2 = (kappa * r) * (kappa * r);
    let mut first = 0.0;
    for k in 0..=(n as i64 - 4) / 2 {
        let c = Rational::new(factorial(((n as i64 - 4) / 2 - k) as u64), BigInt::from(4).pow(k as u32) * factorial(k as u64));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        first += sign * rational_to_f64(&c) * kr2.powi(k as i32);
    }
    first *= -r.powi(2 - n as i32) / (4.0 * PI.powf(half_n));

    // r^{(2-n)/2} I_m(kappa r) = (kappa/2)^m sum c_k (kappa r)^{2k}
    let mut smooth = 0.0;
    let mut third = 0.0;
    let mut c = 1.0 / rational_to_f64(&Rational::from_integer(factorial(m as u64)));
    let mut pw = 1.0;
    for k in 0..400u64 {
        let t = c * pw;
        let hsum = rational_to_f64(&(harmonic(k) + harmonic(m as u64 + k)));
        smooth += t;
        third += (hsum - alpha) * t;
        if k > 2 && t.abs() < 1e-20 * smooth.abs() {
            break;
        }
        c /= 4.0 * (k + 1) as f64 * (m as u64 + k + 1) as f64;
        pw *= kr2;
    }
    let sgn_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    let second = sgn_m * (2.0 * PI).powf(-half_n) * kappa.powi(m as i32) * (kappa / 2.0).powi(m as i32) * smooth * r.ln();
    let third = -sgn_m * kappa.powi(n as i32 - 2) * (4.0 * PI).powf(-half_n) * third;
    Ok(first + second + third)
}

/// `k(Z, 0, r)` by the harmonic-number series, truncated at `max_p`.
pub fn coulomb_closed(z: f64, r: f64, max_p: u32) -> Result<f64, ReferenceError> {
    exact(r)?;
    let lr = r.ln();
    let mut s = 1.0 - 2.0 * z * r * lr;
    // c_p = (-2Z)^p / (p! (p-1)!)
    let mut c = -2.0 * z;
    for p in 2..=max_p as u64 {
        c *= -2.0 * z / (p as f64 * (p - 1) as f64);
        let h = rational_to_f64(&(harmonic(p) + harmonic(p - 1) - rat_int(1)));
        s += c * r.powi(p as i32) * (lr - h);
    }
    Ok(-s / (4.0 * PI * r))
}

/// Exact coefficients `a_k = kappa^{2k} / (4^k k! Gamma(m+k+1))` of
/// `(kappa/2)^{-m} r^{-m} I_m(kappa r) = sum a_k r^{2k}`, `m = (n-2)/2`,
/// with `sqrt(pi)` dropped from the half-integer Gamma values.
pub fn smooth_kernel_coefficients(n: u32, kappa_sq: &Rational, order: usize) -> Vec<Rational> {
    (0..=order as i64)
        .map(|k| {
            let g = if n % 2 == 0 {
                Rational::from_integer(factorial(((n as i64 - 2) / 2 + k) as u64))
            } else {
                half_gamma((n as i64 - 1) / 2 + k)
            };
            kappa_sq.pow(k as i32) / (rat_int(4).pow(k as i32) * Rational::from_integer(factorial(k as u64)) * g)
        })
        .collect()
}

/// Residuals `2k(2k+n-2) a_k - kappa^2 a_{k-1}` of the radial shifted Laplacian
/// applied to `sum a_k r^{2k}`; all vanish for a kernel element.
pub fn radial_annihilation_residuals(n: u32, kappa_sq: &Rational, coeffs: &[Rational]) -> Vec<Rational> {
    (1..coeffs.len())
        .map(|k| {
            let k2 = 2 * k as i64;
            &coeffs[k] * rat_int(k2 * (k2 + n as i64 - 2)) - kappa_sq * &coeffs[k - 1]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn half_integer_closed_forms() {
        let x: f64 = 1.0;
        let i_half = bessel_i_half(0, x).unwrap();
        assert!(close(i_half, (2.0 / (PI * x)).sqrt() * x.sinh(), 1e-15));
        assert!((i_half - 0.937_674_888_245_487_6).abs() < 1e-15);
        let x = 2.0;
        let d = bessel_i_half(-1, x).unwrap() - bessel_i_half(0, x).unwrap();
        assert!(close(d, (2.0 / (PI * x)).sqrt() * (-x).exp(), 1e-14));
        assert!(close(bessel_i(0.5, x).unwrap(), bessel_i_half(0, x).unwrap(), 0.0));
    }

    #[test]
    fn k_half_examples() {
        let k = bessel_k_half(0, 1.0).unwrap();
        assert!((k - 0.461_068_504_447_894_4).abs() < 1e-15);
        for x in [0.3, 1.0, 4.0, 11.0] {
            let k = bessel_k_half(0, x).unwrap();
            assert!(close(x * (2.0 * x).exp() * k * k, PI / 2.0, 1e-13));
        }
        // K_{3/2}(x) = sqrt(pi/(2x)) e^-x (1 + 1/x)
        for x in [0.5, 2.0, 7.5] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x);
            assert!(close(bessel_k_half(1, x).unwrap(), want, 1e-13));
        }
        for ell in 0..6 {
            let scaled: Vec<f64> = [5.0, 10.0, 20.0]
                .iter()
                .map(|&x: &f64| bessel_k_half(ell, x).unwrap() * x.exp() * x.sqrt())
                .collect();
            assert!(scaled.iter().all(|v| v.is_finite() && *v > 0.0 && *v < 1e6));
        }
        assert!(bessel_k_half(0, 0.0).is_err());
    }

    #[test]
    fn wronskian_identity() {
        // I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x
        for ell in 0..=6u32 {
            for x in [0.5, 1.0, 2.0, 5.0] {
                let w = bessel_i_half(ell as i64, x).unwrap() * bessel_k_half(ell + 1, x).unwrap()
                    + bessel_i_half(ell as i64 + 1, x).unwrap() * bessel_k_half(ell, x).unwrap();
                assert!(close(w, 1.0 / x, 1e-13), "ell={ell} x={x}");
            }
        }
    }

    #[test]
    fn integer_orders() {
        // small-argument limit of I_1(x)/x
        assert!(close(bessel_i_int(1, 1e-6).unwrap() / 1e-6, 0.5, 1e-9));
        assert!(close(bessel_i_int(0, 1.0).unwrap(), 1.266_065_877_752_008_4, 1e-15));
        assert!(close(bessel_k_int(0, 1.0).unwrap(), 0.421_024_438_240_708_3, 1e-14));
        assert!(close(bessel_k_int(1, 1.0).unwrap(), 0.601_907_230_197_234_6, 1e-14));
        assert!(close(bessel_k_int(2, 0.5).unwrap(), 7.550_183_551_240_869, 1e-13));
        assert!(bessel_i(0.3, 1.0).is_err());
    }

    #[test]
    fn s_ell_examples() {
        assert!(close(s_ell(0, 0.7).unwrap(), 1.0 / 0.7, 1e-15));
        assert!(close(s_ell(1, 1.0).unwrap(), 1.0, 1e-15));
        assert!(close(s_ell(2, 1.0).unwrap(), 2.5, 1e-15));
    }

    #[test]
    fn fs_closed_forms() {
        let v = standard_fs(3, 1.0, 1.0).unwrap();
        assert!(close(v, -(-1f64).exp() / (4.0 * PI), 1e-14));
        assert!((v + 0.029_274_915_762_159_6).abs() < 1e-12);
        for (kappa, r) in [(0.5, 2.0), (2.0, 0.3)] {
            let want = -(-(kappa * r) as f64).exp() / (4.0 * PI * r);
            assert!(close(standard_fs(3, kappa, r).unwrap(), want, 1e-13));
        }
        assert!(close(laplace_fs(3, 2.0), -1.0 / (8.0 * PI), 1e-15));
        assert!(close(laplace_fs(4, 1.0), -1.0 / (4.0 * PI * PI), 1e-15));
    }

    #[test]
    fn modified_vs_standard_is_smooth() {
        // the difference tends to a finite limit as r -> 0
        let d = |r: f64| modified_fs_even(4, 1.0, r, 1.0).unwrap() - standard_fs(4, 1.0, r).unwrap();
        let (a, b) = (d(1e-3), d(1e-4));
        assert!((a - b).abs() < 1e-5);
        assert!(modified_fs_even(5, 1.0, 1.0, 0.0).is_err());
        // alpha enters through the smooth kernel element 2 I_1(kappa r)/(kappa r) only
        let r = 0.8;
        let da = modified_fs_even(4, 1.0, r, 2.0).unwrap() - modified_fs_even(4, 1.0, r, 1.0).unwrap();
        let want = -2.0 * bessel_i_int(1, r).unwrap() / r / (16.0 * PI * PI);
        assert!(close(da, want, 1e-12));
    }

    #[test]
    fn coulomb_closed_limits() {
        assert!(close(coulomb_closed(0.0, 0.7, 20).unwrap(), -1.0 / (4.0 * PI * 0.7), 1e-15));
        // at r = 1 only harmonic constants remain
        let v = coulomb_closed(1.0, 1.0, 40).unwrap();
        let mut s = 1.0;
        let mut c = -2.0;
        for p in 2..=40u64 {
            c *= -2.0 / (p as f64 * (p - 1) as f64);
            s -= c * rational_to_f64(&(harmonic(p) + harmonic(p - 1) - rat_int(1)));
        }
        assert!(close(v, -s / (4.0 * PI), 1e-15));
    }

    #[test]
    fn radial_annihilation_exact() {
        for n in [3u32, 4, 5, 6, 7] {
            let k2 = rat(7, 3);
            let a = smooth_kernel_coefficients(n, &k2, 25);
            assert!(radial_annihilation_residuals(n, &k2, &a).iter().all(|x| x.is_zero()));
            let bad: Vec<Rational> = a.iter().map(|c| c * rat(11, 10)).chain([rat_int(1)]).collect();
            assert!(!radial_annihilation_residuals(n, &k2, &bad).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn green_examples() {
        let v = green_kernel_n3(1.0, 2.0, 1.0, 0.0, 60).unwrap();
        assert!((v + (-1f64).exp() / (4.0 * PI)).abs() < 1e-6);
        let a = green_kernel_n3(0.7, 1.3, 0.4, 1.1, 30).unwrap();
        let b = green_kernel_n3(0.7, 0.4, 1.3, 1.1, 30).unwrap();
        assert!(close(a, b, 1e-14));
        assert!(green_kernel_n3(1.0, 1.0, 1.0, 0.0, 3).is_err());
    }

    #[test]
    fn parametrix_minus_green() {
        for (r, rt) in [(1.5, 0.5), (0.4, 1.2)] {
            for angle in [0.0, 0.9, 2.5] {
                let p = parametrix_kernel_n3(0.5, r, rt, angle, 4).unwrap();
                let g = green_kernel_n3(0.5, r, rt, angle, 4).unwrap();
                let d = kernel_difference_n3(0.5, r, rt, angle, 4).unwrap();
                assert!((p - g - d).abs() < 1e-8);
            }
        }
        // small kappa: Laplace expansion limit at aligned points r=2, rt=1
        let v = parametrix_kernel_n3(1e-4, 2.0, 1.0, 0.0, 40).unwrap();
        assert!((v + 1.0 / (4.0 * PI)).abs() < 1e-6);
    }
}

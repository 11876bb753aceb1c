//! Spectral data of the cone base: eigenvalues of the positive operator
//! Lambda_X, multiplicities, projection kernels and the constant kernel p0.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{double_factorial, factorial, format_rational, rat_int, rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("sphere dimension n = {0} unsupported (need n >= 3)")]
    DimensionTooSmall(u32),
    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("projection kernel not available for this base ({0})")]
    KernelUnavailable(String),
    #[error("eigenvalue index {0} beyond the supplied spectrum")]
    IndexOutOfRange(usize),
    #[error("invalid custom spectrum: {0}")]
    Invalid(String),
}

/// Value `coeff * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiMultiple {
    #[serde(with = "rational_string")]
    pub coeff: Rational,
    pub pi_power: i32,
}

impl PiMultiple {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * PI.powi(self.pi_power)
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*pi^{}", format_rational(&self.coeff), self.pi_power)
    }
}

pub(crate) mod rational_string {
    use crate::exactnum::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Spectral provider for the base manifold X.
///
/// Eigenvalues must be exact rationals, nondecreasing, with lambda_0 = 0.
pub trait BaseSpectrum: Send + Sync + fmt::Debug {
    fn dimension_of_base(&self) -> u32;
    fn eigenvalue(&self, ell: usize) -> Result<Rational, SpectrumError>;
    fn multiplicity(&self, ell: usize) -> Result<BigInt, SpectrumError>;
    /// Kernel p_ell at geodesic separation `gamma`.
    fn projection_kernel(&self, ell: usize, gamma: f64) -> Result<f64, SpectrumError>;
    fn p0_constant(&self) -> PiMultiple;
    fn describe(&self) -> String;
}

/// The unit sphere S^{n-1} with Lambda = -Laplace_{S^{n-1}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSpectrum {
    n: u32,
}

pub fn sphere_spectrum(n: u32) -> Result<SphereSpectrum, SpectrumError> {
    if n < 3 {
        return Err(SpectrumError::DimensionTooSmall(n));
    }
    Ok(SphereSpectrum { n })
}

impl SphereSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }
}

/// 1/area(S^{n-1}) as a rational multiple of a power of pi.
pub fn sphere_p0(n: u32) -> PiMultiple {
    if n % 2 == 1 {
        // (n-2)!! / (2^{(n+1)/2} pi^{(n-1)/2})
        let num = double_factorial(n as i64 - 2);
        let den = BigInt::one() << ((n + 1) / 2) as usize;
        PiMultiple {
            coeff: Rational::new(num, den),
            pi_power: -(((n - 1) / 2) as i32),
        }
    } else {
        // Gamma(n/2) / (2 pi^{n/2})
        let h = (n / 2) as u64;
        PiMultiple {
            coeff: Rational::new(factorial(h - 1), BigInt::from(2)),
            pi_power: -(h as i32),
        }
    }
}

/// Legendre polynomial P_ell(x) by the three-term recurrence.
pub fn legendre(ell: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if ell == 0 {
        return p0;
    }
    for k in 1..ell {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

impl BaseSpectrum for SphereSpectrum {
    fn dimension_of_base(&self) -> u32 {
        self.n - 1
    }

    fn eigenvalue(&self, ell: usize) -> Result<Rational, SpectrumError> {
        let l = ell as i64;
        Ok(rat_int(l * (l + self.n as i64 - 2)))
    }

    fn multiplicity(&self, ell: usize) -> Result<BigInt, SpectrumError> {
        // (2l+n-2) prod_{j=1}^{n-3} (l+j) / (n-2)!
        let l = ell as i64;
        let n = self.n as i64;
        let mut num = BigInt::from(2 * l + n - 2);
        for j in 1..=(n - 3) {
            num *= l + j;
        }
        Ok(num / factorial((n - 2) as u64))
    }

    fn projection_kernel(&self, ell: usize, gamma: f64) -> Result<f64, SpectrumError> {
        if !(0.0..=PI).contains(&gamma) {
            return Err(SpectrumError::AngleOutOfRange(gamma));
        }
        if self.n != 3 {
            return Err(SpectrumError::KernelUnavailable(format!(
                "S^{} (only S^2 is built in)",
                self.n - 1
            )));
        }
        Ok((2 * ell + 1) as f64 / (4.0 * PI) * legendre(ell, gamma.cos()))
    }

    fn p0_constant(&self) -> PiMultiple {
        sphere_p0(self.n)
    }

    fn describe(&self) -> String {
        format!("sphere S^{}", self.n - 1)
    }
}

/// Finite custom spectrum supplied as exact (eigenvalue, multiplicity) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomSpectrum {
    dimension_of_base: u32,
    levels: Vec<(Rational, BigInt)>,
    p0: PiMultiple,
}

impl CustomSpectrum {
    pub fn new(
        dimension_of_base: u32,
        levels: Vec<(Rational, BigInt)>,
        p0: PiMultiple,
    ) -> Result<Self, SpectrumError> {
        let Some((first, _)) = levels.first() else {
            return Err(SpectrumError::Invalid("empty spectrum".into()));
        };
        if !first.is_zero() {
            return Err(SpectrumError::Invalid("lowest eigenvalue must be 0".into()));
        }
        if levels.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(SpectrumError::Invalid("eigenvalues must be nondecreasing".into()));
        }
        if levels.iter().any(|(_, m)| !m.is_positive()) {
            return Err(SpectrumError::Invalid("multiplicities must be >= 1".into()));
        }
        if !p0.coeff.is_positive() {
            return Err(SpectrumError::Invalid("p0 must be positive".into()));
        }
        Ok(CustomSpectrum {
            dimension_of_base,
            levels,
            p0,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

impl BaseSpectrum for CustomSpectrum {
    fn dimension_of_base(&self) -> u32 {
        self.dimension_of_base
    }

    fn eigenvalue(&self, ell: usize) -> Result<Rational, SpectrumError> {
        self.levels
            .get(ell)
            .map(|l| l.0.clone())
            .ok_or(SpectrumError::IndexOutOfRange(ell))
    }

    fn multiplicity(&self, ell: usize) -> Result<BigInt, SpectrumError> {
        self.levels
            .get(ell)
            .map(|l| l.1.clone())
            .ok_or(SpectrumError::IndexOutOfRange(ell))
    }

    fn projection_kernel(&self, ell: usize, _gamma: f64) -> Result<f64, SpectrumError> {
        if ell == 0 {
            return Ok(self.p0.to_f64());
        }
        Err(SpectrumError::KernelUnavailable("custom base".into()))
    }

    fn p0_constant(&self) -> PiMultiple {
        self.p0.clone()
    }

    fn describe(&self) -> String {
        format!("custom base with {} levels", self.levels.len())
    }
}

/// Convenience: multiplicity as f64 (for quadrature checks).
pub fn multiplicity_f64(base: &dyn BaseSpectrum, ell: usize) -> Result<f64, SpectrumError> {
    Ok(base.multiplicity(ell)?.to_f64().unwrap_or(f64::INFINITY))
}

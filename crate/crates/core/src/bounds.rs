//! Effective-bound calculators in overflow-proof log-scale arithmetic:
//! the isogeny-degree constant kappa, the height-difference and lower
//! height bounds, and the tower-sized smoothness constant built from
//! factorials of 10^10.

use std::cmp::Ordering;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("operation {0} is not supported at level 1")]
    Level1Unsupported(&'static str),
    #[error("cannot promote a value with non-positive log10 ({0})")]
    PromotionOutOfRange(f64),
    #[error("invalid input: {0}")]
    BadInput(&'static str),
}

/// A positive real stored on a logarithmic tower: level 0 keeps log10(x),
/// level 1 keeps log10(log10(x)) for constants whose log10 itself overflows
/// any direct representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScale {
    pub level: u8,
    pub exponent: f64,
}

/// log10(10^a + 10^b) without overflow.
fn log_sum_exp10(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

impl LogScale {
    pub fn from_value(x: f64) -> Result<Self, BoundsError> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(BoundsError::BadInput("from_value needs a finite positive real"));
        }
        Ok(LogScale { level: 0, exponent: x.log10() })
    }

    pub fn from_log10(l: f64) -> Self {
        LogScale { level: 0, exponent: l }
    }

    pub fn from_log10_log10(l: f64) -> Self {
        LogScale { level: 1, exponent: l }
    }

    /// The plain value when it fits in a double.
    pub fn value(&self) -> Option<f64> {
        match self.level {
            0 if self.exponent < 308.0 => Some(10f64.powf(self.exponent)),
            _ => None,
        }
    }

    /// log10 of the value when that fits in a double (always at level 0).
    pub fn log10_value(&self) -> Option<f64> {
        match self.level {
            0 => Some(self.exponent),
            1 if self.exponent < 308.0 => Some(10f64.powf(self.exponent)),
            _ => None,
        }
    }

    /// Lifts a level-0 value one level up; requires log10(x) > 0.
    pub fn promote(&self) -> Result<Self, BoundsError> {
        match self.level {
            1 => Ok(*self),
            _ if self.exponent > 0.0 => {
                Ok(LogScale { level: 1, exponent: self.exponent.log10() })
            }
            _ => Err(BoundsError::PromotionOutOfRange(self.exponent)),
        }
    }

    pub fn mul(&self, other: &LogScale) -> LogScale {
        match (self.level, other.level) {
            (0, 0) => LogScale { level: 0, exponent: self.exponent + other.exponent },
            _ => {
                // log10(ab) = 10^{e_a} + 10^{e_b} on the promoted exponents.
                let ea = self.promote().expect("multiplicand too small to promote").exponent;
                let eb = other.promote().expect("multiplicand too small to promote").exponent;
                LogScale { level: 1, exponent: log_sum_exp10(ea, eb) }
            }
        }
    }

    /// Value addition; only supported at level 0 (level-1 values only
    /// multiply and compare).
    pub fn add(&self, other: &LogScale) -> Result<LogScale, BoundsError> {
        if self.level != 0 || other.level != 0 {
            return Err(BoundsError::Level1Unsupported("add"));
        }
        Ok(LogScale { level: 0, exponent: log_sum_exp10(self.exponent, other.exponent) })
    }

    /// Monotone cross-level comparison.
    pub fn cmp_value(&self, other: &LogScale) -> Ordering {
        match (self.level, other.level) {
            (a, b) if a == b => self.exponent.partial_cmp(&other.exponent).unwrap(),
            (0, 1) => match self.promote() {
                Ok(p) => p.exponent.partial_cmp(&other.exponent).unwrap(),
                Err(_) => Ordering::Less,
            },
            _ => other.cmp_value(self).reverse(),
        }
    }
}

impl std::fmt::Display for LogScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.level {
            0 => write!(f, "10^{:.6}", self.exponent),
            _ => write!(f, "10^10^{:.6}", self.exponent),
        }
    }
}

/// log10 of the isogeny-degree constant
/// kappa = ((14g)^{64 g^2} degK max(h, ln degK, 1)^2)^{2^10 g^3}:
/// 2^10 g^3 (64 g^2 log10(14g) + log10 degK + 2 log10 max(h, ln degK, 1)).
pub fn kappa_log(g: u32, deg_k: u32, h: f64) -> Result<LogScale, BoundsError> {
    if g < 1 || deg_k < 1 {
        return Err(BoundsError::BadInput("kappa_log needs g >= 1 and degK >= 1"));
    }
    let gf = g as f64;
    let dk = deg_k as f64;
    let hmax = h.max(dk.ln()).max(1.0);
    let inner = 64.0 * gf * gf * (14.0 * gf).log10() + dk.log10() + 2.0 * hmax.log10();
    Ok(LogScale::from_log10(1024.0 * gf.powi(3) * inner))
}

/// Height-difference bound (1/2) ln kappa from a level-0 kappa.
pub fn height_diff_bound(kappa: &LogScale) -> Result<f64, BoundsError> {
    if kappa.level != 0 {
        return Err(BoundsError::Level1Unsupported("height_diff_bound"));
    }
    Ok(0.5 * kappa.exponent * std::f64::consts::LN_10)
}

/// Lower height bound -dim ln(2 pi^2) / 2.
pub fn bost_lower(dim: u32) -> f64 {
    -(dim as f64) * (2.0 * PI * PI).ln() / 2.0
}

/// Height bound for the complementary factor:
/// h_B + (1/2) ln kappa(dim_B, degK, h_B) + dim_B ln(2 pi^2) / 2.
pub fn isogeny_factor_height_bound(
    g: u32,
    deg_k: u32,
    h_b: f64,
    dim_b: u32,
) -> Result<f64, BoundsError> {
    if dim_b < 1 || g < dim_b {
        return Err(BoundsError::BadInput("needs 1 <= dim_b <= g"));
    }
    let kappa = kappa_log(dim_b, deg_k, h_b)?;
    Ok(h_b + height_diff_bound(&kappa)? - bost_lower(dim_b))
}

/// log10(n!) by Stirling with the 1/(12n) correction; the second value is
/// the magnitude bound 1/(360 n^3 ln 10) on the truncation error.
pub fn log10_factorial(n: f64) -> (f64, f64) {
    assert!(n >= 1.0, "factorial log needs n >= 1");
    let ln10 = std::f64::consts::LN_10;
    let val = (n * n.ln() - n + 0.5 * (2.0 * PI * n).ln() + 1.0 / (12.0 * n)) / ln10;
    let err = 1.0 / (360.0 * n.powi(3) * ln10);
    (val, err)
}

/// The tower constant N = (10^10)! prod_q (Nm q)^{(10^10 degK)!}. Empty
/// norm list: level-0 log10((10^10)!). Otherwise level 1:
/// log10 N = log10((10^10)!) + (10^10 degK)! Sigma log10 Nm q, combined by
/// log-sum-exp on the two addends' own log10s.
pub fn snowden_constant_log(deg_k: u32, s_norms: &[u64]) -> Result<LogScale, BoundsError> {
    if deg_k < 1 {
        return Err(BoundsError::BadInput("degK must be at least 1"));
    }
    if s_norms.iter().any(|&q| q < 2) {
        return Err(BoundsError::BadInput("norms must be at least 2"));
    }
    let (fact10, _) = log10_factorial(1e10);
    if s_norms.is_empty() {
        return Ok(LogScale::from_log10(fact10));
    }
    let (fact_deg, _) = log10_factorial(1e10 * deg_k as f64);
    let sum_logs: f64 = s_norms.iter().map(|&q| (q as f64).log10()).sum();
    // Addend logs on the log10(N) scale.
    let log_t1 = fact10.log10();
    let log_t2 = fact_deg + sum_logs.log10();
    Ok(LogScale::from_log10_log10(log_sum_exp10(log_t1, log_t2)))
}

//! Exact arithmetic in Z[zeta6] and its fraction field.
//!
//! Elements are stored in the power basis {1, zeta6} with arbitrary-precision
//! integer coefficients, where zeta6 = exp(pi*i/3) satisfies
//! zeta6^2 = zeta6 - 1. The conjugate of zeta6 is 1 - zeta6, the norm form is
//! a^2 + ab + b^2, and the unit group is exactly the sixth roots of unity.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// zeta6^k for k = 0..5 as (a, b) pairs in the power basis.
const ZETA_POWERS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Element a + b*zeta6 of Z[zeta6].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycZ6 {
    pub a: BigInt,
    pub b: BigInt,
}

impl CycZ6 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        CycZ6 { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        CycZ6::new(0, 0)
    }

    pub fn one() -> Self {
        CycZ6::new(1, 0)
    }

    /// zeta6^k for any integer k (negative allowed).
    pub fn root_of_unity(k: i64) -> Self {
        let (a, b) = ZETA_POWERS[k.rem_euclid(6) as usize];
        CycZ6::new(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in Z, i.e. the zeta6 coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Complex conjugate: conj(a + b*zeta6) = (a + b) - b*zeta6.
    pub fn conj(&self) -> Self {
        CycZ6 { a: &self.a + &self.b, b: -&self.b }
    }

    /// Field norm x * conj(x) = a^2 + ab + b^2, always a nonnegative integer.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    /// Image under the embedding zeta6 -> exp(pi*i/3).
    pub fn embed(&self) -> Complex64 {
        let a = bigint_to_f64(&self.a);
        let b = bigint_to_f64(&self.b);
        Complex64::new(a + 0.5 * b, b * 0.75f64.sqrt())
    }

    /// Image under the other embedding zeta6 -> exp(-pi*i/3).
    pub fn embed_conj(&self) -> Complex64 {
        self.conj().embed()
    }

    /// Build Sum_k counts[k] * zeta6^k from per-root tallies; the workhorse
    /// for character sums, which only ever add sixth roots of unity.
    pub fn from_root_counts(counts: &[i64; 6]) -> Self {
        let mut a = 0i64;
        let mut b = 0i64;
        for (k, &c) in counts.iter().enumerate() {
            let (za, zb) = ZETA_POWERS[k];
            a += c * za;
            b += c * zb;
        }
        CycZ6::new(a, b)
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("bigint magnitude exceeds f64 range")
}

impl Add for &CycZ6 {
    type Output = CycZ6;
    fn add(self, rhs: &CycZ6) -> CycZ6 {
        CycZ6 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &CycZ6 {
    type Output = CycZ6;
    fn sub(self, rhs: &CycZ6) -> CycZ6 {
        CycZ6 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Neg for &CycZ6 {
    type Output = CycZ6;
    fn neg(self) -> CycZ6 {
        CycZ6 { a: -&self.a, b: -&self.b }
    }
}

impl Mul for &CycZ6 {
    type Output = CycZ6;
    /// (a1 + b1 z)(a2 + b2 z) with z^2 = z - 1.
    fn mul(self, rhs: &CycZ6) -> CycZ6 {
        let bb = &self.b * &rhs.b;
        CycZ6 {
            a: &self.a * &rhs.a - &bb,
            b: &self.a * &rhs.b + &self.b * &rhs.a + &bb,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for CycZ6 {
            type Output = CycZ6;
            fn $method(self, rhs: CycZ6) -> CycZ6 {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycZ6> for CycZ6 {
            type Output = CycZ6;
            fn $method(self, rhs: &CycZ6) -> CycZ6 {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for CycZ6 {
    type Output = CycZ6;
    fn neg(self) -> CycZ6 {
        -&self
    }
}

impl fmt::Display for CycZ6 {
    /// Canonical textual form "a+b*z6" (or "a-b*z6"), exact decimal integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*z6", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*z6", self.a, self.b)
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct ParseCycError(pub String);

impl fmt::Display for ParseCycError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed Z[zeta6] literal: {}", self.0)
    }
}

impl std::error::Error for ParseCycError {}

impl FromStr for CycZ6 {
    type Err = ParseCycError;

    /// Parses the canonical "a+b*z6" / "a-b*z6" form emitted by Display.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let tail = body
            .strip_suffix("*z6")
            .ok_or_else(|| ParseCycError(s.to_string()))?;
        // Split at the sign separating a from b: scan from the right, skipping
        // the sign that may open the string or follow nothing.
        let bytes = tail.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                split = Some(i);
                break;
            }
        }
        let i = split.ok_or_else(|| ParseCycError(s.to_string()))?;
        let a: BigInt = tail[..i].parse().map_err(|_| ParseCycError(s.to_string()))?;
        let sign = if bytes[i] == b'-' { -1 } else { 1 };
        let babs: BigInt = tail[i + 1..].parse().map_err(|_| ParseCycError(s.to_string()))?;
        Ok(CycZ6 { a, b: babs * sign })
    }
}

/// Element of Q(zeta6) written as num/den with den a positive integer and
/// gcd(content(num), den) = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycQ6 {
    pub num: CycZ6,
    pub den: BigInt,
}

impl CycQ6 {
    pub fn new(num: CycZ6, den: impl Into<BigInt>) -> Self {
        let mut q = CycQ6 { num, den: den.into() };
        q.reduce();
        q
    }

    pub fn from_int(num: CycZ6) -> Self {
        CycQ6 { num, den: BigInt::one() }
    }

    pub fn zero() -> Self {
        CycQ6::from_int(CycZ6::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        let g = gcd_big(gcd_big(self.num.a.abs(), self.num.b.abs()), self.den.abs());
        if !g.is_one() && !g.is_zero() {
            self.num.a = &self.num.a / &g;
            self.num.b = &self.num.b / &g;
            self.den = &self.den / &g;
        }
    }

    /// num/den * n, exact; integral when den | n * content(num).
    pub fn scale_int(&self, n: impl Into<BigInt>) -> CycQ6 {
        let n = n.into();
        CycQ6::new(CycZ6 { a: &self.num.a * &n, b: &self.num.b * &n }, self.den.clone())
    }

    /// The exact integral value when den = 1.
    pub fn as_integral(&self) -> Option<&CycZ6> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn embed(&self) -> Complex64 {
        self.num.embed() / bigint_to_f64(&self.den)
    }
}

impl fmt::Display for CycQ6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

fn gcd_big(x: BigInt, y: BigInt) -> BigInt {
    let mut a = x.abs();
    let mut b = y.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

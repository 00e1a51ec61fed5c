//! Finite fields F_q with q = p^k = 1 (mod 6), their sextic characters, and
//! the Gauss/Jacobi/hypergeometric character sums built on them.
//!
//! Field elements are integers in [0, q) encoding polynomial coefficients in
//! base p (little-endian), reduced modulo a deterministically chosen monic
//! irreducible. A full exponential/discrete-log table pins the generator and
//! makes every character evaluation a table lookup, capped at q <= 10^6.

use crate::cyclotomic::{CycQ6, CycZ6};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_Q: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} is not 1 mod 6")]
    NotOneMod6(u64),
    #[error("q = {0} exceeds the table cap {MAX_Q}")]
    TooLarge(u64),
    #[error("k must be positive")]
    ZeroDegree,
}

/// F_{p^k} with exp/dlog tables; immutable and freely shareable across threads.
/// Debug omits the tables, which can hold up to MAX_Q entries.
pub struct FqField {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Monic modulus coefficients c_0..c_k (c_k = 1); for k = 1 this is [0, 1].
    pub modulus: Vec<u64>,
    /// Smallest element index (>= 2) generating the multiplicative group.
    pub g: u64,
    exp: Vec<u64>,
    dlog: Vec<u64>,
}

impl std::fmt::Debug for FqField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FqField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

const DLOG_ZERO: u64 = u64::MAX;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FqField {
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p.checked_pow(k).ok_or(FieldError::TooLarge(u64::MAX))?;
        if q > MAX_Q {
            return Err(FieldError::TooLarge(q));
        }
        if q % 6 != 1 {
            return Err(FieldError::NotOneMod6(q));
        }
        let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
        let mut field = FqField { p, k, q, modulus, g: 0, exp: Vec::new(), dlog: Vec::new() };
        field.g = field.find_generator();
        field.build_tables();
        Ok(field)
    }

    /// Polynomial coefficients of the element (little-endian, length k).
    fn decode(&self, mut x: u64) -> Vec<u64> {
        let mut cs = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            cs.push(x % self.p);
            x /= self.p;
        }
        cs
    }

    fn encode(&self, cs: &[u64]) -> u64 {
        let mut x = 0;
        for &c in cs.iter().rev() {
            x = x * self.p + (c % self.p);
        }
        x
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return (x + y) % self.p;
        }
        let (a, b) = (self.decode(x), self.decode(y));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&sum)
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return (x + self.p - y % self.p) % self.p;
        }
        let (a, b) = (self.decode(x), self.decode(y));
        let diff: Vec<u64> = a
            .iter()
            .zip(&b)
            .map(|(u, v)| (u + self.p - v % self.p) % self.p)
            .collect();
        self.encode(&diff)
    }

    pub fn neg(&self, x: u64) -> u64 {
        self.sub(0, x)
    }

    /// Schoolbook polynomial product reduced by the monic modulus; used only
    /// to bootstrap the tables and for table-free contexts.
    pub fn mul_raw(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return (x * y) % self.p;
        }
        let (a, b) = (self.decode(x), self.decode(y));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in a.iter().enumerate() {
            for (j, &v) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for j in 0..k {
                    let t = (c * (self.modulus[j] % self.p)) % self.p;
                    prod[i - k + j] = (prod[i - k + j] + self.p * self.p - t) % self.p;
                }
            }
        }
        self.encode(&prod[..k])
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            return 0;
        }
        self.exp[((self.dlog[x as usize] + self.dlog[y as usize]) % (self.q - 1)) as usize]
    }

    pub fn inv(&self, x: u64) -> u64 {
        assert!(x != 0, "inverse of zero");
        self.exp[((self.q - 1 - self.dlog[x as usize]) % (self.q - 1)) as usize]
    }

    pub fn pow(&self, x: u64, n: u64) -> u64 {
        if x == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let e = (self.dlog[x as usize] as u128 * n as u128 % (self.q - 1) as u128) as u64;
        self.exp[e as usize]
    }

    /// Discrete log base g; None at 0.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        if x == 0 {
            None
        } else {
            Some(self.dlog[x as usize])
        }
    }

    /// g^e.
    pub fn exp_g(&self, e: u64) -> u64 {
        self.exp[(e % (self.q - 1)) as usize]
    }

    /// The constant n mod p embedded as a field element (handles negatives).
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Absolute trace to F_p, returned as an integer below p.
    pub fn trace_to_fp(&self, x: u64) -> u64 {
        let mut t = 0;
        let mut cur = x;
        for _ in 0..self.k {
            t = self.add(t, cur);
            cur = self.pow_raw(cur, self.p);
        }
        debug_assert!(t < self.p, "trace must land in the prime field");
        t
    }

    fn pow_raw(&self, mut x: u64, mut n: u64) -> u64 {
        let mut r = 1;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul_raw(r, x);
            }
            x = self.mul_raw(x, x);
            n >>= 1;
        }
        r
    }

    fn multiplicative_order(&self, x: u64) -> u64 {
        let mut cur = x;
        let mut n = 1;
        while cur != 1 {
            cur = self.mul_raw(cur, x);
            n += 1;
            if n > self.q {
                return 0;
            }
        }
        n
    }

    fn find_generator(&self) -> u64 {
        for cand in 2..self.q {
            if self.multiplicative_order(cand) == self.q - 1 {
                return cand;
            }
        }
        unreachable!("F_q* is cyclic, a generator exists")
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![1u64; n];
        for i in 1..n {
            exp[i] = self.mul_raw(exp[i - 1], self.g);
        }
        let mut dlog = vec![DLOG_ZERO; self.q as usize];
        for (i, &v) in exp.iter().enumerate() {
            dlog[v as usize] = i as u64;
        }
        self.exp = exp;
        self.dlog = dlog;
    }

    /// eta^j(x) as an exact CycZ6, with the convention chi(0) = 0 for every j
    /// (including j = 0). eta is the sextic character with eta(g) = zeta6.
    pub fn eta(&self, x: u64, j: i64) -> CycZ6 {
        if x == 0 {
            return CycZ6::zero();
        }
        CycZ6::root_of_unity(j * self.dlog[x as usize] as i64)
    }

    /// Index into zeta6^* of eta^j(x); None at 0.
    fn eta_index(&self, x: u64, j: i64) -> Option<usize> {
        if x == 0 {
            None
        } else {
            Some((j * self.dlog[x as usize] as i64).rem_euclid(6) as usize)
        }
    }
}

/// Deterministic modulus: the monic degree-k polynomial over F_p with the
/// smallest coefficient index (sum c_i p^i) that is irreducible.
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let kk = k as usize;
    'cand: for idx in 0..p.pow(k) {
        let mut coeffs = Vec::with_capacity(kk + 1);
        let mut x = idx;
        for _ in 0..kk {
            coeffs.push(x % p);
            x /= p;
        }
        coeffs.push(1);
        // Trial division by every monic polynomial of degree 1..=k/2.
        for d in 1..=(kk / 2) {
            for div_idx in 0..p.pow(d as u32) {
                let mut div = Vec::with_capacity(d + 1);
                let mut y = div_idx;
                for _ in 0..d {
                    div.push(y % p);
                    y /= p;
                }
                div.push(1);
                if poly_divides(&div, &coeffs, p) {
                    continue 'cand;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// True when monic d divides monic f over F_p.
fn poly_divides(d: &[u64], f: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dd = d.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap() % p;
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for i in 0..=dd {
                let t = (lead * (d[i] % p)) % p;
                rem[shift + i] = (rem[shift + i] + p * p - t) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

/// Multiplicative character eta^exponent of order 6/gcd(6, exponent).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MultChar {
    /// Exponent of the sextic character; the character is x -> zeta6^{e*dlog x}.
    pub exponent: i64,
}

impl MultChar {
    pub fn sextic() -> Self {
        MultChar { exponent: 1 }
    }

    pub fn trivial() -> Self {
        MultChar { exponent: 0 }
    }

    pub fn power(j: i64) -> Self {
        MultChar { exponent: j }
    }

    pub fn order(&self) -> u8 {
        let e = self.exponent.rem_euclid(6) as u64;
        (6 / gcd(6, if e == 0 { 6 } else { e })) as u8
    }

    pub fn conj(&self) -> Self {
        MultChar { exponent: -self.exponent }
    }

    pub fn value(&self, field: &FqField, x: u64) -> CycZ6 {
        field.eta(x, self.exponent)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// J(chi, psi) = Sum_x chi(x) psi(1-x), exact in Z[zeta6].
pub fn jacobi_sum(field: &FqField, chi: MultChar, psi: MultChar) -> CycZ6 {
    let mut counts = [0i64; 6];
    for x in 1..field.q {
        let Some(i) = field.eta_index(x, chi.exponent) else { continue };
        let Some(j) = field.eta_index(field.sub(1, x), psi.exponent) else { continue };
        counts[(i + j) % 6] += 1;
    }
    CycZ6::from_root_counts(&counts)
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
pub struct NeumaierSum {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, z: Complex64) {
        let t = self.sum_re + z.re;
        self.c_re += if self.sum_re.abs() >= z.re.abs() {
            (self.sum_re - t) + z.re
        } else {
            (z.re - t) + self.sum_re
        };
        self.sum_re = t;
        let t = self.sum_im + z.im;
        self.c_im += if self.sum_im.abs() >= z.im.abs() {
            (self.sum_im - t) + z.im
        } else {
            (z.im - t) + self.sum_im
        };
        self.sum_im = t;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

/// G(chi) = Sum_{x != 0} chi(x) exp(2 pi i Tr(x)/p); G(triv) = -1 under the
/// chi(0) = 0 convention.
pub fn gauss_sum(field: &FqField, chi: MultChar) -> Complex64 {
    // Precompute the p-th and 6-th roots of unity once.
    let psi: Vec<Complex64> = (0..field.p)
        .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / field.p as f64))
        .collect();
    let zeta6: Vec<Complex64> = (0..6)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 / 3.0))
        .collect();
    let mut acc = NeumaierSum::default();
    for x in 1..field.q {
        let k = field.eta_index(x, chi.exponent).unwrap();
        acc.add(zeta6[k] * psi[field.trace_to_fp(x) as usize]);
    }
    acc.value()
}

/// Finite-field Gauss 2F1 via the single character sum
///   2F1[A,B;C|x] = eps(x) * (B Cbar(-1)/q) * Sum_y B(y) (Bbar C)(1-y) Abar(1-xy),
/// returned exactly in (1/q) Z[zeta6]. The calibrated normalization factor is
/// the identity (see `calibration`).
pub fn fhyp_2f1(field: &FqField, a: MultChar, b: MultChar, c: MultChar, x: u64) -> CycQ6 {
    CycQ6::new(fhyp_numerator(field, a, b, c, x), field.q as i64)
}

/// q * 2F1[A,B;C|x] as an exact cyclotomic integer.
pub fn fhyp_numerator(field: &FqField, a: MultChar, b: MultChar, c: MultChar, x: u64) -> CycZ6 {
    if x == 0 {
        return CycZ6::zero();
    }
    let minus_one = field.from_int(-1);
    let pref = field.eta(minus_one, b.exponent - c.exponent);
    let mut counts = [0i64; 6];
    for y in 0..field.q {
        let Some(i1) = field.eta_index(y, b.exponent) else { continue };
        let Some(i2) = field.eta_index(field.sub(1, y), c.exponent - b.exponent) else {
            continue;
        };
        let Some(i3) = field.eta_index(field.sub(1, field.mul(x, y)), -a.exponent) else {
            continue;
        };
        counts[(i1 + i2 + i3) % 6] += 1;
    }
    &pref * &CycZ6::from_root_counts(&counts)
}

/// Outcome of the Hasse-Davenport consistency battery on one field.
pub struct HasseDavenportReport {
    /// J(eta^2, eta^3), exact.
    pub lhs: CycZ6,
    /// eta^2(2) * J(eta, eta^4), exact.
    pub rhs: CycZ6,
    pub exact_equal: bool,
    /// Relative error of G(eta)G(eta^4) = -eta^{-2}(2) G(eta^2)G(triv)G(eta^3).
    pub complex_rel_err: f64,
}

pub fn check_hasse_davenport(field: &FqField) -> HasseDavenportReport {
    let lhs = jacobi_sum(field, MultChar::power(2), MultChar::power(3));
    let two = field.from_int(2);
    let rhs = &field.eta(two, 2) * &jacobi_sum(field, MultChar::power(1), MultChar::power(4));
    let g = |j| gauss_sum(field, MultChar::power(j));
    let clhs = g(1) * g(4);
    let crhs = -field.eta(two, -2).embed() * g(2) * g(0) * g(3);
    let complex_rel_err = (clhs - crhs).norm() / crhs.norm().max(1.0);
    HasseDavenportReport { exact_equal: lhs == rhs, lhs, rhs, complex_rel_err }
}

/// Outcome of the reflection identities at one argument.
pub struct ReflectionReport {
    /// 2F1[eta,eta^2;eta^5|x] = eta(x) eta^2(1-x) (J(eta^2,eta^3)/J(eta,eta^4))
    ///                          * 2F1[eta^-1,eta^-2;eta^-5|x], exactly.
    pub reflection_ok: bool,
    /// 2F1[eta,eta^2;eta^5|x] = eta(x((1-x)/4)^2) * 2F1[eta^-1,...|x], exactly.
    pub sixth_power_ok: bool,
}

pub fn check_reflection_identity(field: &FqField, x: u64) -> ReflectionReport {
    assert!(x != 0 && x != 1, "reflection needs x outside {{0, 1}}");
    let f1 = fhyp_numerator(field, MultChar::power(1), MultChar::power(2), MultChar::power(5), x);
    let f2 =
        fhyp_numerator(field, MultChar::power(-1), MultChar::power(-2), MultChar::power(-5), x);
    let j23 = jacobi_sum(field, MultChar::power(2), MultChar::power(3));
    let j14 = jacobi_sum(field, MultChar::power(1), MultChar::power(4));
    // Clear the Jacobi-ratio denominator: compare f1 * N(j14) with
    // eta(x) eta^2(1-x) * j23 * conj(j14) * f2; N(j14) = j14 * conj(j14) = q.
    let nj = CycZ6::new(j14.norm(), 0);
    let lhs = &f1 * &nj;
    let one_minus = field.sub(1, x);
    let rhs = &(&(&field.eta(x, 1) * &field.eta(one_minus, 2)) * &(&j23 * &j14.conj())) * &f2;
    let reflection_ok = lhs == rhs;

    let inv4 = field.inv(field.from_int(4));
    let w = field.mul(x, field.pow(field.mul(one_minus, inv4), 2));
    let sixth_power_ok = f1 == &field.eta(w, 1) * &f2;
    ReflectionReport { reflection_ok, sixth_power_ok }
}

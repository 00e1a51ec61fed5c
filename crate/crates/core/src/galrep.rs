//! Finite-group computations behind the two Galois-representation lemmas:
//! the span/Nakayama trace-rigidity argument over finite local rings, and
//! the classification of 2x2 matrix-group images (reducible, dihedral,
//! exceptional A4/S4/A5, or containing a subfield SL2) together with the
//! perfectness/irreducibility checks used by modularity lifting.

use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GalrepError {
    #[error("ring parameter invalid: {0}")]
    BadRing(&'static str),
    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureOverflow { cap: usize },
    #[error("generator is not invertible over the ring")]
    SingularGenerator,
    #[error("frobenius set is empty")]
    EmptyFrobSet,
    #[error("set not spanning: frobenius span has rank {rank_frob} < full rank {rank_full}")]
    SetNotSpanning { rank_frob: usize, rank_full: usize },
    #[error("traces disagree on the frobenius set at element {index}")]
    TraceMismatchOnFrobSet { index: usize },
    #[error("classification precondition failed: image does not contain a subfield SL2")]
    NotContainsSL2,
    #[error("matrix classification requires a field (m = 1)")]
    NotAField,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Finite local ring (Z/ell^m)[x]/(lift of a degree-f irreducible): fields
/// F_{ell^f} at m = 1, quotients Z/ell^m at f = 1, Galois rings in general.
/// Elements are coefficient vectors of length f with entries below ell^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub ell: u64,
    pub m: u32,
    pub f: u32,
    pub ellm: u64,
    /// Monic modulus of degree f with coefficients below ell (the trivial
    /// lift of the residue-field modulus).
    pub modulus: Vec<u64>,
}

pub type Elem = Vec<u64>;

impl Ring {
    pub fn new(ell: u64, m: u32, f: u32) -> Result<Self, GalrepError> {
        if !is_prime_u64(ell) {
            return Err(GalrepError::BadRing("ell must be prime"));
        }
        if m < 1 || f < 1 {
            return Err(GalrepError::BadRing("m and f must be at least 1"));
        }
        let ellm = ell
            .checked_pow(m)
            .filter(|&v| v <= 1 << 20)
            .ok_or(GalrepError::BadRing("ell^m too large"))?;
        if (ell as u128).pow(f) > 1 << 20 {
            return Err(GalrepError::BadRing("residue field too large"));
        }
        let modulus = smallest_irreducible_poly(ell, f);
        Ok(Ring { ell, m, f, ellm, modulus })
    }

    pub fn field(ell: u64, f: u32) -> Result<Self, GalrepError> {
        Ring::new(ell, 1, f)
    }

    pub fn quotient(ell: u64, m: u32) -> Result<Self, GalrepError> {
        Ring::new(ell, m, 1)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.f as usize]
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.ellm as i64) as u64;
        e
    }

    /// Decodes an index in 0..ellm^f as base-ellm digits, little-endian.
    pub fn decode(&self, mut idx: u64) -> Elem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = idx % self.ellm;
            idx /= self.ellm;
        }
        e
    }

    pub fn element_count(&self) -> u64 {
        self.ellm.pow(self.f)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.ellm).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.ellm - y) % self.ellm)
            .collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| (self.ellm - x) % self.ellm).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let f = self.f as usize;
        let mut prod = vec![0u64; 2 * f - 1];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % self.ellm;
            }
        }
        // Monic reduction by the modulus.
        for i in (f..2 * f - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..f {
                let sub = c * self.modulus[j] % self.ellm;
                prod[i - f + j] = (prod[i - f + j] + self.ellm - sub) % self.ellm;
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Units are the elements with nonzero residue mod ell.
    pub fn is_unit(&self, a: &Elem) -> bool {
        a.iter().any(|&c| c % self.ell != 0)
    }

    pub fn residue(&self, a: &Elem) -> Elem {
        a.iter().map(|&c| c % self.ell).collect()
    }

    fn residue_ring(&self) -> Ring {
        Ring {
            ell: self.ell,
            m: 1,
            f: self.f,
            ellm: self.ell,
            modulus: self.modulus.clone(),
        }
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Inverse of a unit: Fermat inverse in the residue field, then Hensel
    /// lifting x -> x(2 - ax), which doubles the ell-adic precision.
    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(self.is_unit(a), "inverse of a non-unit");
        let res = self.residue_ring();
        let r = res.pow(&self.residue(a), self.ell.pow(self.f) - 2);
        let mut x: Elem = r;
        if self.m > 1 {
            let two = self.from_int(2);
            for _ in 0..self.m.ilog2() + 1 {
                let ax = self.mul(a, &x);
                x = self.mul(&x, &self.sub(&two, &ax));
            }
        }
        debug_assert_eq!(self.mul(a, &x), self.one());
        x
    }
}

/// Smallest-index monic irreducible over F_ell of degree f: lower
/// coefficients enumerate first, irreducibility by trial division against
/// monic polynomials of degree at most f/2.
fn smallest_irreducible_poly(ell: u64, f: u32) -> Vec<u64> {
    let f = f as usize;
    if f == 1 {
        return vec![0, 1];
    }
    let count = ell.pow(f as u32);
    'cand: for idx in 0..count {
        let mut poly = vec![0u64; f + 1];
        poly[f] = 1;
        let mut v = idx;
        for c in poly.iter_mut().take(f) {
            *c = v % ell;
            v /= ell;
        }
        for d in 1..=f / 2 {
            let dcount = ell.pow(d as u32);
            for didx in 0..dcount {
                let mut dpoly = vec![0u64; d + 1];
                dpoly[d] = 1;
                let mut w = didx;
                for c in dpoly.iter_mut().take(d) {
                    *c = w % ell;
                    w /= ell;
                }
                if poly_divides(ell, &dpoly, &poly) {
                    continue 'cand;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_divides(ell: u64, d: &[u64], n: &[u64]) -> bool {
    let mut rem: Vec<u64> = n.to_vec();
    let dd = d.len() - 1;
    while rem.len() > dd && rem.iter().any(|&c| c != 0) {
        let lead = *rem.last().unwrap();
        if lead == 0 {
            rem.pop();
            continue;
        }
        let shift = rem.len() - 1 - dd;
        for i in 0..=dd {
            rem[shift + i] = (rem[shift + i] + ell - lead * d[i] % ell) % ell;
        }
        while rem.len() > 1 && *rem.last().unwrap() == 0 {
            rem.pop();
        }
        if rem.len() - 1 < dd {
            break;
        }
    }
    rem.iter().all(|&c| c == 0)
}

// ------------------------------------------------------------------ matrices

/// 2x2 matrix over a Ring, entries row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [Elem; 4]);

impl Mat2 {
    pub fn identity(ring: &Ring) -> Self {
        Mat2([ring.one(), ring.zero(), ring.zero(), ring.one()])
    }

    pub fn from_ints(ring: &Ring, e: [i64; 4]) -> Self {
        Mat2([
            ring.from_int(e[0]),
            ring.from_int(e[1]),
            ring.from_int(e[2]),
            ring.from_int(e[3]),
        ])
    }

    pub fn mul(ring: &Ring, a: &Mat2, b: &Mat2) -> Mat2 {
        let p = |i: usize, j: usize, k: usize, l: usize| {
            ring.add(&ring.mul(&a.0[i], &b.0[j]), &ring.mul(&a.0[k], &b.0[l]))
        };
        Mat2([p(0, 0, 1, 2), p(0, 1, 1, 3), p(2, 0, 3, 2), p(2, 1, 3, 3)])
    }

    pub fn det(ring: &Ring, a: &Mat2) -> Elem {
        ring.sub(&ring.mul(&a.0[0], &a.0[3]), &ring.mul(&a.0[1], &a.0[2]))
    }

    pub fn trace(ring: &Ring, a: &Mat2) -> Elem {
        ring.add(&a.0[0], &a.0[3])
    }

    pub fn is_invertible(ring: &Ring, a: &Mat2) -> bool {
        ring.is_unit(&Mat2::det(ring, a))
    }

    pub fn inv(ring: &Ring, a: &Mat2) -> Mat2 {
        let dinv = ring.inv(&Mat2::det(ring, a));
        Mat2([
            ring.mul(&a.0[3], &dinv),
            ring.mul(&ring.neg(&a.0[1]), &dinv),
            ring.mul(&ring.neg(&a.0[2]), &dinv),
            ring.mul(&a.0[0], &dinv),
        ])
    }

    pub fn scalar_mul(ring: &Ring, c: &Elem, a: &Mat2) -> Mat2 {
        Mat2([
            ring.mul(c, &a.0[0]),
            ring.mul(c, &a.0[1]),
            ring.mul(c, &a.0[2]),
            ring.mul(c, &a.0[3]),
        ])
    }

    pub fn is_scalar(ring: &Ring, a: &Mat2) -> bool {
        ring.is_zero(&a.0[1]) && ring.is_zero(&a.0[2]) && a.0[0] == a.0[3]
    }
}

/// Breadth-first closure of the generated matrix group, deterministic
/// insertion order, hard element cap.
pub fn closure(ring: &Ring, gens: &[Mat2], cap: usize) -> Result<Vec<Mat2>, GalrepError> {
    for g in gens {
        if !Mat2::is_invertible(ring, g) {
            return Err(GalrepError::SingularGenerator);
        }
    }
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut order: Vec<Mat2> = Vec::new();
    let id = Mat2::identity(ring);
    seen.insert(id.clone());
    order.push(id);
    let mut frontier = 0;
    while frontier < order.len() {
        let cur = order[frontier].clone();
        frontier += 1;
        for g in gens {
            let next = Mat2::mul(ring, &cur, g);
            if seen.insert(next.clone()) {
                if order.len() >= cap {
                    return Err(GalrepError::ClosureOverflow { cap });
                }
                order.push(next);
            }
        }
    }
    Ok(order)
}

/// Greedy small generating set drawn from `candidates`: scan in order and
/// keep each element outside the subgroup generated so far. Returns the
/// generated subgroup and the chosen generators. The scan is deterministic
/// and settles on a handful of generators for the groups in play, keeping
/// every later commutator or conjugation pass quadratic in a small number.
fn greedy_span(
    ring: &Ring,
    candidates: &[Mat2],
    cap: usize,
) -> Result<(Vec<Mat2>, Vec<Mat2>), GalrepError> {
    let id = Mat2::identity(ring);
    let mut gens: Vec<Mat2> = Vec::new();
    let mut elements = vec![id.clone()];
    let mut have: HashSet<Mat2> = HashSet::new();
    have.insert(id);
    for e in candidates {
        if !have.contains(e) {
            gens.push(e.clone());
            elements = closure(ring, &gens, cap)?;
            have = elements.iter().cloned().collect();
        }
    }
    Ok((elements, gens))
}

/// Small generating set of the group whose full element list is given.
fn greedy_generators(ring: &Ring, elements: &[Mat2]) -> Result<Vec<Mat2>, GalrepError> {
    // A subset of a group generates a subgroup of it, so the closure cap
    // elements.len() + 1 can never trip.
    Ok(greedy_span(ring, elements, elements.len() + 1)?.1)
}

fn closure_pairs(
    ring: &Ring,
    gens: &[(Mat2, Mat2)],
    cap: usize,
) -> Result<Vec<(Mat2, Mat2)>, GalrepError> {
    for (a, b) in gens {
        if !Mat2::is_invertible(ring, a) || !Mat2::is_invertible(ring, b) {
            return Err(GalrepError::SingularGenerator);
        }
    }
    let mut seen: HashSet<(Mat2, Mat2)> = HashSet::new();
    let mut order: Vec<(Mat2, Mat2)> = Vec::new();
    let id = (Mat2::identity(ring), Mat2::identity(ring));
    seen.insert(id.clone());
    order.push(id);
    let mut frontier = 0;
    while frontier < order.len() {
        let cur = order[frontier].clone();
        frontier += 1;
        for g in gens {
            let next = (Mat2::mul(ring, &cur.0, &g.0), Mat2::mul(ring, &cur.1, &g.1));
            if seen.insert(next.clone()) {
                if order.len() >= cap {
                    return Err(GalrepError::ClosureOverflow { cap });
                }
                order.push(next);
            }
        }
    }
    Ok(order)
}

// ------------------------------------------------------- span / trace lemma

/// A pair of 2-dimensional representations of the same finite group over
/// the same ring, modeled by the closure of the generator image pairs
/// inside GL2(R) x GL2(R).
pub struct RepPair {
    pub ring: Ring,
    pub elements: Vec<(Mat2, Mat2)>,
}

impl RepPair {
    pub fn from_generator_pairs(
        ring: &Ring,
        gens: &[(Mat2, Mat2)],
        cap: usize,
    ) -> Result<Self, GalrepError> {
        Ok(RepPair { ring: ring.clone(), elements: closure_pairs(ring, gens, cap)? })
    }
}

/// Incremental row-echelon basis over the residue field for vectors in
/// k^width; rows are unit-pivot normalized.
struct KSpan {
    res: Ring,
    width: usize,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl KSpan {
    fn new(ring: &Ring, width: usize) -> Self {
        KSpan { res: ring.residue_ring(), width, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the basis; returns true when v enlarges the span.
    fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        for (pivot, row) in &self.rows {
            if !self.res.is_zero(&v[*pivot]) {
                let c = v[*pivot].clone();
                for i in 0..self.width {
                    let t = self.res.mul(&c, &row[i]);
                    v[i] = self.res.sub(&v[i], &t);
                }
            }
        }
        let pivot = match v.iter().position(|e| !self.res.is_zero(e)) {
            Some(p) => p,
            None => return false,
        };
        let inv = self.res.inv(&v[pivot]);
        for e in v.iter_mut() {
            *e = self.res.mul(e, &inv);
        }
        self.rows.push((pivot, v));
        true
    }
}

fn vectorize(ring: &Ring, pair: &(Mat2, Mat2)) -> Vec<Elem> {
    let mut v = Vec::with_capacity(8);
    for e in &pair.0 .0 {
        v.push(ring.residue(e));
    }
    for e in &pair.1 .0 {
        v.push(ring.residue(e));
    }
    v
}

#[derive(Debug)]
pub struct SpanCertificate {
    pub spans: bool,
    pub rank_frob: usize,
    pub rank_full: usize,
    /// Element indices whose vectorizations form a spanning basis.
    pub basis: Vec<usize>,
}

/// Nakayama span test: the residue-field span of the conjugacy classes of
/// the frobenius elements must equal the span of the whole image inside
/// M_2(k)^2. Frobenius data only pins down conjugacy classes, so the set is
/// closed under conjugation before spanning.
pub fn span_check(
    rep: &RepPair,
    frob_set: &[usize],
) -> Result<SpanCertificate, GalrepError> {
    if frob_set.is_empty() {
        return Err(GalrepError::EmptyFrobSet);
    }
    let ring = &rep.ring;
    let mut full = KSpan::new(ring, 8);
    let mut basis = Vec::new();
    for (i, pair) in rep.elements.iter().enumerate() {
        if full.insert(vectorize(ring, pair)) {
            basis.push(i);
        }
    }
    let rank_full = full.rank();

    let inverses: Vec<(Mat2, Mat2)> = rep
        .elements
        .iter()
        .map(|(a, b)| (Mat2::inv(ring, a), Mat2::inv(ring, b)))
        .collect();
    let mut frob = KSpan::new(ring, 8);
    'outer: for &idx in frob_set {
        let g = &rep.elements[idx];
        for (h, hinv) in rep.elements.iter().zip(&inverses) {
            let conj = (
                Mat2::mul(ring, &Mat2::mul(ring, &h.0, &g.0), &hinv.0),
                Mat2::mul(ring, &Mat2::mul(ring, &h.1, &g.1), &hinv.1),
            );
            frob.insert(vectorize(ring, &conj));
            if frob.rank() == rank_full {
                break 'outer;
            }
        }
    }
    let rank_frob = frob.rank();
    Ok(SpanCertificate { spans: rank_frob == rank_full, rank_frob, rank_full, basis })
}

/// Greedily grows a frobenius set along the candidate order until the
/// conjugacy-class span of the chosen elements matches the full span;
/// returns the chosen indices (kept only when they enlarged the span).
/// With candidates covering the whole group this always terminates with a
/// spanning set.
pub fn greedy_spanning_frob_set(rep: &RepPair, candidates: &[usize]) -> Vec<usize> {
    let ring = &rep.ring;
    let mut full = KSpan::new(ring, 8);
    for pair in &rep.elements {
        full.insert(vectorize(ring, pair));
    }
    let rank_full = full.rank();
    let inverses: Vec<(Mat2, Mat2)> = rep
        .elements
        .iter()
        .map(|(a, b)| (Mat2::inv(ring, a), Mat2::inv(ring, b)))
        .collect();
    let mut span = KSpan::new(ring, 8);
    let mut chosen = Vec::new();
    for &idx in candidates {
        if span.rank() == rank_full {
            break;
        }
        let g = &rep.elements[idx];
        let before = span.rank();
        for (h, hinv) in rep.elements.iter().zip(&inverses) {
            let conj = (
                Mat2::mul(ring, &Mat2::mul(ring, &h.0, &g.0), &hinv.0),
                Mat2::mul(ring, &Mat2::mul(ring, &h.1, &g.1), &hinv.1),
            );
            span.insert(vectorize(ring, &conj));
            if span.rank() == rank_full {
                break;
            }
        }
        if span.rank() > before {
            chosen.push(idx);
        }
    }
    chosen
}

#[derive(Debug)]
pub struct TraceReport {
    pub checked: usize,
    pub counterexamples: Vec<usize>,
    pub ok: bool,
}

/// The rigidity conclusion: once traces agree on a spanning frobenius set,
/// they agree on every element. Precondition failures are reported
/// distinctly (trace mismatch on the set vs set not spanning).
pub fn trace_conclusion_check(
    rep: &RepPair,
    frob_set: &[usize],
) -> Result<TraceReport, GalrepError> {
    let ring = &rep.ring;
    for &idx in frob_set {
        let (a, b) = &rep.elements[idx];
        if Mat2::trace(ring, a) != Mat2::trace(ring, b) {
            return Err(GalrepError::TraceMismatchOnFrobSet { index: idx });
        }
    }
    let cert = span_check(rep, frob_set)?;
    if !cert.spans {
        return Err(GalrepError::SetNotSpanning {
            rank_frob: cert.rank_frob,
            rank_full: cert.rank_full,
        });
    }
    let mut counterexamples = Vec::new();
    for (i, (a, b)) in rep.elements.iter().enumerate() {
        if Mat2::trace(ring, a) != Mat2::trace(ring, b) {
            counterexamples.push(i);
        }
    }
    Ok(TraceReport {
        checked: rep.elements.len(),
        ok: counterexamples.is_empty(),
        counterexamples,
    })
}

// ------------------------------------------------------------- Dickson

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalTag {
    A4,
    S4,
    A5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DicksonClass {
    Reducible,
    Dihedral,
    Exceptional(ExceptionalTag),
    ContainsSL2 { q0: u64 },
    ProjectivelySmall { order: usize },
}

impl std::fmt::Display for DicksonClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DicksonClass::Reducible => write!(f, "reducible"),
            DicksonClass::Dihedral => write!(f, "dihedral"),
            DicksonClass::Exceptional(ExceptionalTag::A4) => write!(f, "exceptional-A4"),
            DicksonClass::Exceptional(ExceptionalTag::S4) => write!(f, "exceptional-S4"),
            DicksonClass::Exceptional(ExceptionalTag::A5) => write!(f, "exceptional-A5"),
            DicksonClass::ContainsSL2 { q0 } => write!(f, "contains-SL2({q0})"),
            DicksonClass::ProjectivelySmall { order } => {
                write!(f, "projectively-small({order})")
            }
        }
    }
}

pub const CLOSURE_CAP: usize = 100_000;

fn require_field(ring: &Ring) -> Result<(), GalrepError> {
    if ring.m != 1 {
        return Err(GalrepError::NotAField);
    }
    Ok(())
}

/// Quadratic extension of the field and the image of x under the embedding
/// (a root of the base modulus in the extension, found by scanning).
fn quadratic_extension(ring: &Ring) -> (Ring, Elem) {
    let ext = Ring::field(ring.ell, 2 * ring.f).expect("extension field");
    let count = ext.element_count();
    for idx in 0..count {
        let theta = ext.decode(idx);
        // Horner evaluation of the base modulus at theta.
        let mut acc = ext.from_int(ring.modulus[ring.f as usize] as i64);
        for i in (0..ring.f as usize).rev() {
            acc = ext.mul(&acc, &theta);
            acc = ext.add(&acc, &ext.from_int(ring.modulus[i] as i64));
        }
        if ext.is_zero(&acc) {
            return (ext, theta);
        }
    }
    unreachable!("base modulus always splits in the quadratic extension");
}

fn embed_elem(ring: &Ring, ext: &Ring, theta: &Elem, e: &Elem) -> Elem {
    let mut acc = ext.zero();
    for i in (0..ring.f as usize).rev() {
        acc = ext.mul(&acc, theta);
        acc = ext.add(&acc, &ext.from_int(e[i] as i64));
    }
    acc
}

fn embed_mat(ring: &Ring, ext: &Ring, theta: &Elem, m: &Mat2) -> Mat2 {
    Mat2([
        embed_elem(ring, ext, theta, &m.0[0]),
        embed_elem(ring, ext, theta, &m.0[1]),
        embed_elem(ring, ext, theta, &m.0[2]),
        embed_elem(ring, ext, theta, &m.0[3]),
    ])
}

/// True when some line of P^1 over the quadratic extension is stabilized by
/// every matrix in the list (detects reducibility over the closure, since
/// 2x2 eigenvalues live in the quadratic extension).
pub fn stabilized_line_exists(ring: &Ring, mats: &[Mat2]) -> Result<bool, GalrepError> {
    require_field(ring)?;
    let (ext, theta) = quadratic_extension(ring);
    let embedded: Vec<Mat2> = mats.iter().map(|m| embed_mat(ring, &ext, &theta, m)).collect();
    let one = ext.one();
    let zero = ext.zero();
    let mut lines: Vec<(Elem, Elem)> = (0..ext.element_count())
        .map(|i| (one.clone(), ext.decode(i)))
        .collect();
    lines.push((zero, one.clone()));
    for (v0, v1) in lines {
        let mut all_fix = true;
        for g in &embedded {
            let w0 = ext.add(&ext.mul(&g.0[0], &v0), &ext.mul(&g.0[1], &v1));
            let w1 = ext.add(&ext.mul(&g.0[2], &v0), &ext.mul(&g.0[3], &v1));
            let cross = ext.sub(&ext.mul(&w0, &v1), &ext.mul(&w1, &v0));
            if !ext.is_zero(&cross) {
                all_fix = false;
                break;
            }
        }
        if all_fix {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Canonical representative of the scalar class of a matrix over a field:
/// scaled so its first nonzero entry is 1.
fn projective_canon(ring: &Ring, m: &Mat2) -> Mat2 {
    let i = m.0.iter().position(|e| !ring.is_zero(e)).expect("nonzero matrix");
    Mat2::scalar_mul(ring, &ring.inv(&m.0[i]), m)
}

/// Distinct projective classes, keyed by canonical form, with one matrix
/// representative each.
fn projective_classes(ring: &Ring, elements: &[Mat2]) -> HashMap<Mat2, Mat2> {
    let mut classes = HashMap::new();
    for m in elements {
        classes.entry(projective_canon(ring, m)).or_insert_with(|| m.clone());
    }
    classes
}

/// Order of the image of m in the projective group: least n >= 1 with m^n
/// scalar.
fn projective_order(ring: &Ring, m: &Mat2) -> usize {
    let mut acc = m.clone();
    let mut n = 1;
    while !Mat2::is_scalar(ring, &acc) {
        acc = Mat2::mul(ring, &acc, m);
        n += 1;
    }
    n
}

pub fn matrix_order(ring: &Ring, m: &Mat2) -> usize {
    let id = Mat2::identity(ring);
    let mut acc = m.clone();
    let mut n = 1;
    while acc != id {
        acc = Mat2::mul(ring, &acc, m);
        n += 1;
    }
    n
}

/// PSL2/PGL2 orders over F_{q0}.
fn psl2_order(q0: u64) -> u64 {
    q0 * (q0 * q0 - 1) / 2
}

fn pgl2_order(q0: u64) -> u64 {
    q0 * (q0 * q0 - 1)
}

/// Whether n equals a subfield PSL2 or PGL2 order for some power of ell;
/// returns the matching q0.
fn subfield_order_match(ell: u64, n: u64) -> Option<u64> {
    let mut q0 = ell;
    while psl2_order(q0) <= n {
        if psl2_order(q0) == n || pgl2_order(q0) == n {
            return Some(q0);
        }
        match q0.checked_mul(ell) {
            Some(next) => q0 = next,
            None => break,
        }
    }
    None
}

/// Normal closure of the subgroup generated by `seed` inside the group
/// generated by `amb_gens`: grow the generating set with ambient conjugates
/// until the subgroup is conjugation-stable. Returns the element list and a
/// reduced (greedy) generating set.
fn normal_closure(
    ring: &Ring,
    seed: &[Mat2],
    amb_gens: &[Mat2],
    cap: usize,
) -> Result<(Vec<Mat2>, Vec<Mat2>), GalrepError> {
    let id = Mat2::identity(ring);
    let mut gens: Vec<Mat2> = Vec::new();
    let mut gen_set: HashSet<Mat2> = HashSet::new();
    for s in seed {
        if *s != id && gen_set.insert(s.clone()) {
            gens.push(s.clone());
        }
    }
    if gens.is_empty() {
        return Ok((vec![id], gens));
    }
    let amb_inv: Vec<Mat2> = amb_gens.iter().map(|g| Mat2::inv(ring, g)).collect();
    loop {
        let elements = closure(ring, &gens, cap)?;
        let element_set: HashSet<Mat2> = elements.iter().cloned().collect();
        let mut grew = false;
        'scan: for (g, ginv) in amb_gens.iter().zip(&amb_inv) {
            for h in &elements {
                let conj = Mat2::mul(ring, &Mat2::mul(ring, g, h), ginv);
                if !element_set.contains(&conj) {
                    if gen_set.insert(conj.clone()) {
                        gens.push(conj);
                        grew = true;
                    }
                    break 'scan;
                }
            }
        }
        if !grew {
            let small = greedy_generators(ring, &elements)?;
            return Ok((elements, small));
        }
    }
}

/// One step of the derived series: the subgroup element list and a small
/// generating set of the commutator subgroup of the group generated by
/// `gens`.
fn derived_step(
    ring: &Ring,
    gens: &[Mat2],
    cap: usize,
) -> Result<(Vec<Mat2>, Vec<Mat2>), GalrepError> {
    // The derived subgroup depends only on the generated group, so an
    // oversized generating list is reduced first; the pairwise commutator
    // seeding below is quadratic in the generator count.
    let reduced: Vec<Mat2>;
    let gens = if gens.len() > 16 {
        reduced = greedy_generators(ring, &closure(ring, gens, cap)?)?;
        &reduced[..]
    } else {
        gens
    };
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut seed = Vec::new();
    for a in gens {
        for b in gens {
            let comm = Mat2::mul(
                ring,
                &Mat2::mul(ring, a, b),
                &Mat2::inv(ring, &Mat2::mul(ring, b, a)),
            );
            if seen.insert(comm.clone()) {
                seed.push(comm);
            }
        }
    }
    normal_closure(ring, &seed, gens, cap)
}

/// Solvability of the projective image: the derived series of the matrix
/// group must terminate inside the scalars.
fn projectively_solvable(ring: &Ring, gens: &[Mat2], cap: usize) -> Result<bool, GalrepError> {
    let mut current: Vec<Mat2> = gens.to_vec();
    let mut prev_size = usize::MAX;
    loop {
        let (derived, dgens) = derived_step(ring, &current, cap)?;
        if derived.iter().all(|m| Mat2::is_scalar(ring, m)) {
            return Ok(true);
        }
        if derived.len() == prev_size {
            return Ok(false);
        }
        prev_size = derived.len();
        current = dgens;
    }
}

/// Element-order multisets of the three exceptional projective groups.
fn exceptional_fingerprint(order: usize, orders: &HashMap<usize, usize>) -> Option<ExceptionalTag> {
    let expect = |pairs: &[(usize, usize)]| {
        pairs.len() == orders.len()
            && pairs.iter().all(|(o, c)| orders.get(o) == Some(c))
    };
    match order {
        12 if expect(&[(1, 1), (2, 3), (3, 8)]) => Some(ExceptionalTag::A4),
        24 if expect(&[(1, 1), (2, 9), (3, 8), (4, 6)]) => Some(ExceptionalTag::S4),
        60 if expect(&[(1, 1), (2, 15), (3, 20), (5, 24)]) => Some(ExceptionalTag::A5),
        _ => None,
    }
}

/// Dickson-style classification of the subgroup generated by 2x2 matrices
/// over F_q: reducible (common line over the quadratic extension), dihedral
/// (index-2 cyclic projective image), exceptional A4/S4/A5 by order
/// fingerprint, or a subfield PSL2/PGL2 sandwich certified by order match
/// plus nonsolvability.
pub fn dickson_classify(ring: &Ring, gens: &[Mat2]) -> Result<DicksonClass, GalrepError> {
    require_field(ring)?;
    let elements = closure(ring, gens, CLOSURE_CAP)?;
    if stabilized_line_exists(ring, gens)? {
        return Ok(DicksonClass::Reducible);
    }
    let classes = projective_classes(ring, &elements);
    let ph_order = classes.len();
    let mut order_counts: HashMap<usize, usize> = HashMap::new();
    for rep in classes.values() {
        *order_counts.entry(projective_order(ring, rep)).or_insert(0) += 1;
    }
    if ph_order.is_multiple_of(2) && order_counts.contains_key(&(ph_order / 2)) {
        return Ok(DicksonClass::Dihedral);
    }
    let subfield_collision = subfield_order_match(ring.ell, ph_order as u64);
    if subfield_collision.is_none() {
        if let Some(tag) = exceptional_fingerprint(ph_order, &order_counts) {
            return Ok(DicksonClass::Exceptional(tag));
        }
    }
    if let Some(q0) = subfield_order_match(ring.ell, ph_order as u64) {
        let f = ring.f as u64;
        let d = q0.ilog(ring.ell) as u64;
        let solvable = projectively_solvable(ring, gens, CLOSURE_CAP)?;
        if d <= 2 * f && !solvable {
            return Ok(DicksonClass::ContainsSL2 { q0 });
        }
    }
    Ok(DicksonClass::ProjectivelySmall { order: ph_order })
}

/// Independent classification oracle with different computational paths:
/// reducibility over all elements, dihedral via explicit cyclic subgroup
/// sets, exceptional groups via derived-chain signatures, and the subfield
/// case via the normal closure of the order-p elements.
pub fn dickson_oracle(ring: &Ring, gens: &[Mat2]) -> Result<DicksonClass, GalrepError> {
    require_field(ring)?;
    let elements = closure(ring, gens, CLOSURE_CAP)?;
    if stabilized_line_exists(ring, &elements)? {
        return Ok(DicksonClass::Reducible);
    }
    let classes = projective_classes(ring, &elements);
    let ph_order = classes.len();

    // Dihedral: an explicit cyclic projective subgroup of index 2.
    let mut cyclic_sizes: HashSet<usize> = HashSet::new();
    for rep in classes.values() {
        let mut subgroup = HashSet::new();
        let mut acc = Mat2::identity(ring);
        loop {
            subgroup.insert(projective_canon(ring, &acc));
            acc = Mat2::mul(ring, &acc, rep);
            if Mat2::is_scalar(ring, &acc) {
                break;
            }
        }
        cyclic_sizes.insert(subgroup.len());
    }
    if ph_order.is_multiple_of(2) && cyclic_sizes.contains(&(ph_order / 2)) {
        return Ok(DicksonClass::Dihedral);
    }

    // Derived chain of projective sizes.
    let mut chain = vec![ph_order];
    let mut current: Vec<Mat2> = gens.to_vec();
    loop {
        let (derived, dgens) = derived_step(ring, &current, CLOSURE_CAP)?;
        let size = projective_classes(ring, &derived).len();
        if size == *chain.last().unwrap() {
            break;
        }
        chain.push(size);
        if size == 1 {
            break;
        }
        current = dgens;
    }
    let subfield_collision = subfield_order_match(ring.ell, ph_order as u64).is_some();
    if !subfield_collision {
        let tag = match chain.as_slice() {
            [12, 4, 1] => Some(ExceptionalTag::A4),
            [24, 12, 4, 1] => Some(ExceptionalTag::S4),
            [60] => Some(ExceptionalTag::A5),
            _ => None,
        };
        if let Some(tag) = tag {
            return Ok(DicksonClass::Exceptional(tag));
        }
    }

    // Subfield case: subgroup generated by the order-p elements.
    let (normal, wgens) = order_p_subgroup(ring, &elements)?;
    if normal.len() > 1 {
        let pn = projective_classes(ring, &normal).len() as u64;
        let mut q0 = ring.ell;
        while psl2_order(q0) <= pn {
            if psl2_order(q0) == pn {
                // Nonsolvability: the derived series of the witness must
                // stabilize above the scalars.
                if !projectively_solvable(ring, &wgens, CLOSURE_CAP)? {
                    return Ok(DicksonClass::ContainsSL2 { q0 });
                }
            }
            q0 *= ring.ell;
        }
    }
    Ok(DicksonClass::ProjectivelySmall { order: ph_order })
}

pub fn mat_pow(ring: &Ring, m: &Mat2, mut n: u64) -> Mat2 {
    let mut base = m.clone();
    let mut acc = Mat2::identity(ring);
    while n > 0 {
        if n & 1 == 1 {
            acc = Mat2::mul(ring, &acc, &base);
        }
        base = Mat2::mul(ring, &base, &base);
        n >>= 1;
    }
    acc
}

/// Elements of exact matrix order ell (prime): non-identity with m^ell = 1.
fn order_p_elements(ring: &Ring, elements: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2::identity(ring);
    elements
        .iter()
        .filter(|m| **m != id && mat_pow(ring, m, ring.ell) == id)
        .cloned()
        .collect()
}

/// Subgroup generated by all elements of matrix order ell, with a small
/// generating set; normal in the ambient group since the full order-ell set
/// is conjugation-stable.
fn order_p_subgroup(
    ring: &Ring,
    elements: &[Mat2],
) -> Result<(Vec<Mat2>, Vec<Mat2>), GalrepError> {
    let unipotents = order_p_elements(ring, elements);
    if unipotents.is_empty() {
        return Ok((vec![Mat2::identity(ring)], Vec::new()));
    }
    greedy_span(ring, &unipotents, CLOSURE_CAP)
}

// ------------------------------------------------------------ Taylor-Wiles

#[derive(Debug)]
pub struct TaylorWilesReport {
    pub q0: u64,
    pub witness_order: usize,
    pub commutators_checked: usize,
    pub perfect: bool,
    pub kernel_irreducible: bool,
    pub ok: bool,
}

/// Constructive perfectness + irreducibility check on the subfield-SL2
/// witness: the subgroup generated by the order-p elements must equal its
/// own commutator set closure (checked exhaustively), and the kernel of
/// det^char_exponent must act without a stable line over the quadratic
/// extension.
pub fn taylor_wiles_check(
    ring: &Ring,
    gens: &[Mat2],
    char_exponent: u64,
) -> Result<TaylorWilesReport, GalrepError> {
    let class = dickson_classify(ring, gens)?;
    let q0 = match class {
        DicksonClass::ContainsSL2 { q0 } => q0,
        _ => return Err(GalrepError::NotContainsSL2),
    };
    let elements = closure(ring, gens, CLOSURE_CAP)?;
    let (witness, _) = order_p_subgroup(ring, &elements)?;
    let n = witness.len();
    if n * n > 4_000_000 {
        return Err(GalrepError::ClosureOverflow { cap: 4_000_000 });
    }
    let mut commutators: HashSet<Mat2> = HashSet::new();
    for a in &witness {
        let ainv = Mat2::inv(ring, a);
        for b in &witness {
            let comm = Mat2::mul(
                ring,
                &Mat2::mul(ring, a, b),
                &Mat2::mul(ring, &ainv, &Mat2::inv(ring, b)),
            );
            commutators.insert(comm);
        }
    }
    let witness_set: HashSet<Mat2> = witness.iter().cloned().collect();
    let commutator_group = closure(
        ring,
        &commutators.iter().cloned().collect::<Vec<_>>(),
        CLOSURE_CAP,
    )?;
    let perfect = commutator_group.len() == witness_set.len()
        && commutator_group.iter().all(|m| witness_set.contains(m));

    let one = ring.one();
    let kernel: Vec<Mat2> = elements
        .iter()
        .filter(|m| ring.pow(&Mat2::det(ring, m), char_exponent) == one)
        .cloned()
        .collect();
    let kernel_irreducible = !stabilized_line_exists(ring, &kernel)?;
    Ok(TaylorWilesReport {
        q0,
        witness_order: n,
        commutators_checked: n * n,
        perfect,
        kernel_irreducible,
        ok: perfect && kernel_irreducible,
    })
}

//! Centralized numeric tolerances with their justification.
//!
//! Exact checks (cyclotomic integers, point counts, span certificates) never
//! consult this module; everything here guards a floating-point comparison.

/// Homomorphism checks on the complex embedding of Z[zeta6].
///
/// Inputs are exact integers below 2^40; one multiply and one add in f64
/// round to ~1e-16 relative, so 1e-12 leaves four orders of margin.
pub const EMBED_HOM_REL: f64 = 1e-12;

/// |G(chi)|^2 = q and other Gauss-sum moduli, relative.
///
/// A Gauss sum accumulates q <= 1e6 unit-modulus terms; Neumaier summation
/// keeps the error near machine epsilon times sqrt(q).
pub const GAUSS_ABS_REL: f64 = 1e-9;

/// Jacobi-sum vs Gauss-sum quotient consistency, relative.
///
/// Involves a complex division of two Gauss sums, which doubles the
/// accumulated error compared to GAUSS_ABS_REL.
pub const JACOBI_GAUSS_REL: f64 = 1e-8;

/// Zeta-numerator reciprocal roots: modulus must equal sqrt(q).
///
/// Roots come from companion-matrix eigenvalues of a degree-6 integer
/// polynomial with coefficients up to q^3; backward-stable QR gives ~1e-10
/// here, and the contract asks for 1e-6.
pub const WEIL_MODULUS: f64 = 1e-6;

/// Multiset stability of reciprocal roots under alpha -> q/alpha.
pub const ZETA_STABILITY: f64 = 1e-5;

/// Frobenius trace embeddings against the Weil bound 2*sqrt(q).
pub const TRACE_EMBED_EPS: f64 = 1e-9;

/// Gauss 2F1 values where two evaluation strategies overlap.
pub const HYP_OVERLAP_REL: f64 = 1e-9;

/// Gauss 2F1 relative accuracy contract for desk-scale parameters.
pub const HYP_REL: f64 = 1e-11;

/// Euler-integral quadrature oracle vs closed form, absolute.
pub const QUAD_ORACLE: f64 = 1e-8;

/// Beta/Gamma functional identities (reflection, symmetry, B = GG/G).
pub const BETA_GAMMA: f64 = 1e-12;

/// Lattice-stabilization coefficients: distance to the nearest integer.
///
/// One order looser than evaluation accuracy to absorb the conditioning of
/// the real 4x4 solve.
pub const LATTICE_COEFF: f64 = 1e-7;

/// Residual of the 4x4 lattice solve.
pub const LATTICE_RESIDUAL: f64 = 1e-8;

/// Quaternion relations I^2 = -3, M^2 = 2, IM + MI = 0.
pub const QM_RELATION: f64 = 1e-10;

/// Schwarz-function consistency against const * s(X^6) column ratios.
pub const SCHWARZ_CONST_REL: f64 = 1e-9;

/// Limit of s at the f1 = 1 boundary vs the Gamma-ratio prediction.
pub const SCHWARZ_LIMIT: f64 = 1e-6;

/// Lattice rank certification: smallest singular value of the generator
/// matrix must exceed this.
pub const LATTICE_RANK_MIN_SV: f64 = 1e-8;

/// LogScale round-trip and closed-form bound formulas, relative.
pub const LOGSCALE_REL: f64 = 1e-12;

/// kappa closed form vs high-precision golden, relative.
pub const KAPPA_REL: f64 = 1e-6;

/// Stabilization of boundedness sequences, significant digits.
pub const SEQ_STABILIZE_DIGITS: u32 = 6;

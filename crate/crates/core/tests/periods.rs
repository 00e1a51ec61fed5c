//! Archimedean layer: hypergeometric evaluation against frozen values,
//! transform overlap on shared domains, gamma/beta constants, period
//! vectors, the six-generator lattice, the quaternionic action, and the
//! Schwarz function.
// Golden constants are kept at the oracle's full printed precision.
#![allow(clippy::excessive_precision)]

use num_complex::Complex64;
use proptest::prelude::*;
use prym_core::periods::{
    beta, beta_miracle, calibrate_t_prime, check_diagonal_relations, check_extension_on_curve,
    check_qm_stabilizes, check_quaternion_relations, check_schwarz_consistency,
    euler_integral_quadrature, euler_transform_value, gamma, hilbert_symbol, hyp2f1, hyp2f1_eps,
    lattice_build, period_vectors, pfaff_transform_value, project, qm_matrix,
    quaternion_discriminant, schwarz_limit_prediction, schwarz_params_first,
    schwarz_params_second, schwarz_s, HypParams, PeriodError, PeriodLattice, Rational, HYP_EPS,
};
use prym_core::tol;
use std::sync::OnceLock;

fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

#[test]
fn hyp2f1_frozen_values() {
    let first = schwarz_params_first();
    let second = schwarz_params_second();
    let cases: [(HypParams, Complex64, Complex64); 10] = [
        (first, cr(0.2), cr(1.0146210395012052)),
        (first, cr(0.3), cr(1.0231210620740568)),
        (first, cr(0.5), cr(1.0436829093773934)),
        (first, cr(0.9), cr(1.1244370070252483)),
        (second, cr(0.2), cr(1.1112425122547688)),
        (second, cr(0.5), cr(1.3807060866498961)),
        (HypParams::of(1, 2, 1, 3, 7, 6), cr(0.2), cr(1.0315861672635093)),
        (HypParams::of(1, 2, 2, 3, 5, 6), cr(0.2), cr(1.0929673823688033)),
        (HypParams::of(1, 3, 1, 2, 7, 6), cr(0.5), cr(1.0958671472034706)),
        (
            first,
            Complex64::new(0.3, 0.4),
            Complex64::new(1.0155438791756213, 0.033497031916482858),
        ),
    ];
    for (p, z, want) in cases {
        let got = hyp2f1(&p, z).unwrap();
        assert!(rel(got, want) <= tol::HYP_REL, "params={p:?} z={z} got={got} want={want}");
    }
    // Loose-precision evaluation stays within its requested accuracy.
    let coarse = hyp2f1_eps(&first, cr(0.3), 1e-6).unwrap();
    assert!(rel(coarse, cr(1.0231210620740568)) <= 1e-5);
}

#[test]
fn hyp2f1_rejects_unreachable_points() {
    let first = schwarz_params_first();
    match hyp2f1(&first, cr(4.0)) {
        Err(PeriodError::NoRegion(z)) => assert_eq!(z, cr(4.0)),
        other => panic!("expected NoRegion, got {other:?}"),
    }
}

#[test]
fn gamma_beta_frozen_values() {
    let cases = [
        (gamma(1.0 / 3.0), 2.6789385347077476),
        (gamma(1.0 / 6.0), 5.5663160017802352),
        (gamma(-1.0 / 3.0), -4.0623538182792013),
        (beta(1.0 / 3.0, 0.5), 4.2065463159763628),
        (beta(2.0 / 3.0, 0.5), 2.5871095592297905),
        (beta(1.0 / 3.0, 5.0 / 6.0), 3.2595537920578602),
        (beta(1.0 / 3.0, 1.0 / 3.0), 5.2999162508563499),
        (beta(2.0 / 3.0, 1.0 / 6.0), 6.6774760471338323),
    ];
    for (got, want) in cases {
        assert!(((got - want) / want).abs() <= tol::BETA_GAMMA, "got={got} want={want}");
    }
    // Symmetry and the gamma quotient identity.
    assert_eq!(beta(1.0 / 3.0, 0.5), beta(0.5, 1.0 / 3.0));
    let via_gamma = gamma(1.0 / 3.0) * gamma(0.5) / gamma(1.0 / 3.0 + 0.5);
    assert!(((beta(1.0 / 3.0, 0.5) - via_gamma) / via_gamma).abs() <= tol::BETA_GAMMA);
}

#[test]
fn euler_transform_frozen_value() {
    let first = schwarz_params_first();
    let direct = hyp2f1(&first, cr(0.4)).unwrap();
    let via_euler = euler_transform_value(&first, cr(0.4), HYP_EPS).unwrap();
    assert!(rel(direct, cr(1.03269524532685)) <= 1e-13);
    assert!(rel(via_euler, direct) <= tol::HYP_OVERLAP_REL);
}

#[test]
fn euler_integral_quadrature_oracle() {
    let first = schwarz_params_first();
    let closed = beta(1.0 / 3.0, 0.5) * hyp2f1(&first, cr(0.3)).unwrap().re;
    let quad = euler_integral_quadrature(&first, 0.3);
    assert!((closed - 4.3038061344654471).abs() <= 1e-12);
    assert!((quad - closed).abs() <= tol::QUAD_ORACLE, "quad={quad} closed={closed}");
    let second = schwarz_params_second();
    let closed2 = beta(2.0 / 3.0, 0.5) * hyp2f1(&second, cr(0.5)).unwrap().re;
    let quad2 = euler_integral_quadrature(&second, 0.5);
    assert!((quad2 - closed2).abs() <= tol::QUAD_ORACLE, "quad={quad2} closed={closed2}");
}

#[test]
fn rational_and_parameter_bookkeeping() {
    assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
    assert_eq!(Rational::new(-6, -3), Rational::new(2, 1));
    assert!(Rational::new(0, 5).is_nonpositive_integer());
    assert!(Rational::new(-3, 1).is_nonpositive_integer());
    assert!(!Rational::new(2, 1).is_nonpositive_integer());
    assert!(!Rational::new(-1, 2).is_nonpositive_integer());

    let first = schwarz_params_first();
    assert_eq!(first.exponent_at_one(), Rational::new(1, 3));
    assert_eq!(first.third_grading(), Some(1));
    assert_eq!(first.shifted(), HypParams::of(1, 3, 1, 2, 7, 6));

    let second = schwarz_params_second();
    assert_eq!(second.exponent_at_one(), Rational::new(-1, 3));
    assert_eq!(second.third_grading(), Some(-1));
    assert_eq!(second.shifted(), HypParams::of(2, 3, 1, 2, 5, 6));
}

#[test]
fn period_vectors_frozen_at_reference_point() {
    let pv = period_vectors(cr(0.2), 0, HYP_EPS).unwrap();
    let want_mu = [
        Complex64::new(12.804151187477707, 7.3924801348349206),
        Complex64::new(0.0, 0.0),
        Complex64::new(8.6247183782305198, -4.9794834773561031),
    ];
    let want_nu = [
        Complex64::new(-3.8570913161030369, 2.2268927096410563),
        Complex64::new(-13.594093962547946, -23.54566142599837),
        Complex64::new(-14.315476224692404, -8.2650440519038467),
    ];
    assert_eq!(pv.mu[1], Complex64::new(0.0, 0.0));
    for i in [0usize, 2] {
        assert!(rel(pv.mu[i], want_mu[i]) <= 1e-12, "mu[{i}] = {}", pv.mu[i]);
    }
    for (i, (&got, &want)) in pv.nu.iter().zip(&want_nu).enumerate() {
        assert!(rel(got, want) <= 1e-12, "nu[{i}] = {got}");
    }

    assert!(matches!(
        period_vectors(cr(0.0), 0, HYP_EPS).unwrap_err(),
        PeriodError::BadLambda(_)
    ));
    assert!(matches!(
        period_vectors(cr(1.0), 0, HYP_EPS).unwrap_err(),
        PeriodError::BadLambda(_)
    ));
}

#[test]
fn diagonal_relations_hold_with_correct_sign() {
    let rep = check_diagonal_relations();
    assert!(rep.squared_ok);
    assert!(rep.cubed_ok);
    assert!(!rep.squared_negated_ok);
}

fn reference_lattice() -> &'static PeriodLattice {
    static LAT: OnceLock<PeriodLattice> = OnceLock::new();
    LAT.get_or_init(|| {
        let pv = period_vectors(cr(0.2), 0, HYP_EPS).unwrap();
        lattice_build(&pv).unwrap()
    })
}

#[test]
fn lattice_rank_and_frozen_singular_values() {
    let lat = reference_lattice();
    let sv = lat.singular_values();
    let want = [74.667744, 44.341294, 24.568939, 19.153333, 7.9632537, 6.1942725];
    assert_eq!(sv.len(), 6);
    for (got, want) in sv.iter().zip(want) {
        assert!(((got - want) / want).abs() <= 1e-6, "sv got={got} want={want}");
    }
    assert!(sv[5] > tol::LATTICE_RANK_MIN_SV);
}

#[test]
fn lattice_membership_accepts_and_rejects() {
    let lat = reference_lattice();
    let pv = period_vectors(cr(0.2), 0, HYP_EPS).unwrap();
    let v: [Complex64; 3] = std::array::from_fn(|i| pv.mu[i] + cr(2.0) * pv.nu[i]);
    let m = lat.membership(&v).unwrap();
    assert!(m.is_member, "coeff_dev={} residual={}", m.coeff_dev, m.residual);
    assert_eq!(m.rounded, [1, 2, 0, 0, 0, 0]);

    let half: [Complex64; 3] = std::array::from_fn(|i| cr(0.5) * pv.mu[i]);
    let h = lat.membership(&half).unwrap();
    assert!(!h.is_member);
}

#[test]
fn qm_matrix_frozen_and_stabilizing() {
    let m = qm_matrix(0.5, 0);
    assert_eq!(m.x, 0.5);
    assert!(((m.y - 0.62666224187057308) / m.y).abs() <= 1e-12);
    assert!(rel(m.m12, cr(-0.62666224187057308)) <= 1e-12, "m12={}", m.m12);
    assert!(rel(m.m21, cr(-3.1915118964724024)) <= 1e-12, "m21={}", m.m21);
    assert!((m.squared_scalar() - cr(2.0)).norm() <= tol::QM_RELATION);

    let pv = period_vectors(cr(0.015625), 0, HYP_EPS).unwrap();
    let rows = check_qm_stabilizes(&pv, &m).unwrap();
    assert_eq!(rows.len(), 4);
    let want: [(&str, [i64; 4]); 4] = [
        ("M*pmu", [0, 0, 2, 0]),
        ("M*Dpmu", [0, 0, 2, -2]),
        ("M*pnu", [1, 0, 0, 0]),
        ("M*Dpnu", [1, -1, 0, 0]),
    ];
    for (row, (label, expected)) in rows.iter().zip(want) {
        assert_eq!(row.label, label);
        assert_eq!(row.expected, expected);
        assert!(row.ok, "{label}: coeff_dev={} residual={}", row.coeff_dev, row.residual);
    }
    // The projection drops the middle (always-zero mu) coordinate.
    assert_eq!(project(&pv.mu), [pv.mu[0], pv.mu[2]]);
}

#[test]
fn beta_miracle_equals_two() {
    let v = beta_miracle();
    assert!((v - cr(2.0)).norm() / 2.0 <= tol::BETA_GAMMA, "got {v}");
}

#[test]
fn twist_calibration_picks_zero() {
    assert_eq!(calibrate_t_prime(0.5, HYP_EPS).unwrap(), 0);
    assert_eq!(calibrate_t_prime(0.3, HYP_EPS).unwrap(), 0);
}

#[test]
fn hilbert_symbols_and_discriminants() {
    let expect = [(2u64, -1i32), (3, -1), (5, 1), (7, 1), (11, 1), (13, 1)];
    let mut product = 1;
    for (p, want) in expect {
        let got = hilbert_symbol(-3, 2, p);
        assert_eq!(got, want, "p={p}");
        product *= got;
    }
    // The infinite place is +1 (2 > 0), so the finite product is 1.
    assert_eq!(product, 1);
    // Symmetry in the arguments.
    for (a, b, p) in [(-3i64, 2i64, 5u64), (6, 10, 3), (-1, -1, 2), (5, 7, 7)] {
        assert_eq!(hilbert_symbol(a, b, p), hilbert_symbol(b, a, p));
    }
    assert_eq!(quaternion_discriminant(-3, 2), 6);
    assert_eq!(quaternion_discriminant(-1, -1), 2);
    assert_eq!(quaternion_discriminant(1, 1), 1);
}

#[test]
fn quaternion_relations_hold() {
    let rep = check_quaternion_relations(0.5, 0);
    assert!(rep.i_squared_err <= tol::QM_RELATION);
    assert!(rep.m_squared_err <= tol::QM_RELATION);
    assert!(rep.anticommute_err <= tol::QM_RELATION);
    assert_eq!(rep.discriminant, 6);
    assert!(rep.ok);
}

#[test]
fn schwarz_values_and_limit_predictions() {
    let first = schwarz_params_first();
    let second = schwarz_params_second();
    let s1 = schwarz_s(&first, cr(0.5)).unwrap();
    let s2 = schwarz_s(&second, cr(0.5)).unwrap();
    assert!(rel(s1, cr(0.93544373288444077)) <= tol::HYP_REL, "s1={s1}");
    assert!(rel(s2, cr(1.0690113844864832)) <= tol::HYP_REL, "s2={s2}");

    let l1 = schwarz_limit_prediction(&first);
    let l2 = schwarz_limit_prediction(&second);
    assert!(((l1 - 1.2905282699202322) / l1).abs() <= 1e-12, "l1={l1}");
    assert!(((l2 - 0.77487647756977084) / l2).abs() <= 1e-12, "l2={l2}");
}

#[test]
fn schwarz_extends_over_the_curve() {
    for p in [schwarz_params_first(), schwarz_params_second()] {
        let rep = check_extension_on_curve(&p).unwrap();
        assert!(rep.x_stabilized, "params={p:?}");
        assert!(rep.y_limit_err <= tol::SCHWARZ_LIMIT, "params={p:?} err={}", rep.y_limit_err);
        assert!(rep.ok, "params={p:?}");
        assert_eq!(rep.x_ratios.len(), 5);
    }
}

#[test]
fn schwarz_consistency_constants_frozen() {
    let rep = check_schwarz_consistency(0.2).unwrap();
    assert!(rep.ok);
    assert!(rep.err_first <= tol::SCHWARZ_CONST_REL);
    assert!(rep.err_second <= tol::SCHWARZ_CONST_REL);
    let want_first = Complex64::new(-0.19371911939244271, 0.33553135718521215);
    let want_second = Complex64::new(-0.64526413496011612, -1.1176302660529021);
    assert!(rel(rep.const_first, want_first) <= tol::SCHWARZ_CONST_REL);
    assert!(rel(rep.const_second, want_second) <= tol::SCHWARZ_CONST_REL);
    assert!(check_schwarz_consistency(0.5).unwrap().ok);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transforms_agree_on_overlap(z in 0.05f64..0.45) {
        for p in [schwarz_params_first(), schwarz_params_second()] {
            let direct = hyp2f1(&p, cr(z)).unwrap();
            let euler = euler_transform_value(&p, cr(z), HYP_EPS).unwrap();
            let pfaff = pfaff_transform_value(&p, cr(z), HYP_EPS).unwrap();
            prop_assert!(rel(euler, direct) <= tol::HYP_OVERLAP_REL,
                "euler {euler} vs {direct} at z={z}");
            prop_assert!(rel(pfaff, direct) <= tol::HYP_OVERLAP_REL,
                "pfaff {pfaff} vs {direct} at z={z}");
        }
    }

    #[test]
    fn hyp2f1_symmetric_in_upper_parameters(z in 0.0f64..0.8) {
        let ab = hyp2f1(&HypParams::of(1, 6, 1, 3, 5, 6), cr(z)).unwrap();
        let ba = hyp2f1(&HypParams::of(1, 3, 1, 6, 5, 6), cr(z)).unwrap();
        prop_assert!((ab - ba).norm() <= 1e-12 * ab.norm().max(1.0));
    }

    #[test]
    fn mu_middle_component_vanishes(lam in 0.05f64..0.95) {
        let pv = period_vectors(cr(lam), 0, HYP_EPS).unwrap();
        prop_assert_eq!(pv.mu[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn integer_combinations_are_members(coeffs in proptest::array::uniform6(-3i64..=3)) {
        let lat = reference_lattice();
        let mut v = [Complex64::new(0.0, 0.0); 3];
        for (j, &n) in coeffs.iter().enumerate() {
            for (vi, g) in v.iter_mut().zip(&lat.gens[j]) {
                *vi += cr(n as f64) * *g;
            }
        }
        let m = lat.membership(&v).unwrap();
        prop_assert!(m.is_member, "coeffs={coeffs:?} dev={} res={}", m.coeff_dev, m.residual);
        // The generator matrix is invertible, so coefficients are recovered.
        prop_assert_eq!(m.rounded, coeffs);
    }
}

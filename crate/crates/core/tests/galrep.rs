//! Finite local rings, 2x2 matrix groups, the span/trace rigidity argument,
//! the image classification with its independent oracle, and the
//! perfectness/irreducibility report.

use proptest::prelude::*;
use prym_core::galrep::{
    closure, dickson_classify, dickson_oracle, greedy_spanning_frob_set, mat_pow, matrix_order,
    span_check, stabilized_line_exists, taylor_wiles_check, trace_conclusion_check, DicksonClass,
    GalrepError, Mat2, RepPair, Ring, CLOSURE_CAP,
};

fn sl2_f5_gens(ring: &Ring) -> Vec<Mat2> {
    vec![Mat2::from_ints(ring, [1, 1, 0, 1]), Mat2::from_ints(ring, [0, -1, 1, 0])]
}

fn s3_gens(ring: &Ring) -> Vec<Mat2> {
    // r has order 3 (char poly x^2 + x + 1), s has order 2, s r s = r^2.
    vec![Mat2::from_ints(ring, [0, -1, 1, -1]), Mat2::from_ints(ring, [0, 1, 1, 0])]
}

#[test]
fn ring_construction_and_errors() {
    let f7 = Ring::field(7, 1).unwrap();
    assert_eq!((f7.ell, f7.m, f7.f, f7.ellm), (7, 1, 1, 7));
    assert_eq!(f7.element_count(), 7);

    let z8 = Ring::quotient(2, 3).unwrap();
    assert_eq!((z8.ell, z8.m, z8.ellm), (2, 3, 8));
    assert_eq!(z8.element_count(), 8);

    let gr = Ring::new(3, 2, 2).unwrap();
    assert_eq!((gr.ell, gr.m, gr.f, gr.ellm), (3, 2, 2, 9));
    assert_eq!(gr.element_count(), 81);

    assert!(matches!(Ring::new(4, 1, 1), Err(GalrepError::BadRing(_))));
    assert!(matches!(Ring::new(2, 0, 1), Err(GalrepError::BadRing(_))));
    assert!(matches!(Ring::new(2, 21, 1), Err(GalrepError::BadRing(_))));
    assert!(matches!(Ring::field(2, 21), Err(GalrepError::BadRing(_))));
}

#[test]
fn unit_counts_and_inverses() {
    // Local rings: units are exactly the elements with nonzero residue.
    for (ring, unit_count) in [
        (Ring::quotient(2, 3).unwrap(), 4u64),
        (Ring::quotient(3, 3).unwrap(), 18),
        (Ring::new(3, 2, 2).unwrap(), 72),
    ] {
        let mut units = 0;
        for idx in 0..ring.element_count() {
            let a = ring.decode(idx);
            if ring.is_unit(&a) {
                units += 1;
                let prod = ring.mul(&a, &ring.inv(&a));
                assert_eq!(prod, ring.one(), "ring {}^{} idx {idx}", ring.ell, ring.m);
            } else {
                assert!(ring.is_zero(&ring.residue(&a)));
            }
        }
        assert_eq!(units, unit_count, "ring {}^{} f={}", ring.ell, ring.m, ring.f);
    }
}

#[test]
fn mat2_arithmetic_and_orders() {
    let f7 = Ring::field(7, 1).unwrap();
    let id = Mat2::identity(&f7);
    let a = Mat2::from_ints(&f7, [1, 1, 0, 1]);
    let b = Mat2::from_ints(&f7, [0, -1, 1, 0]);

    let ab = Mat2::mul(&f7, &a, &b);
    let ba = Mat2::mul(&f7, &b, &a);
    assert_eq!(Mat2::trace(&f7, &ab), Mat2::trace(&f7, &ba));
    let det_ab = Mat2::det(&f7, &ab);
    assert_eq!(det_ab, f7.mul(&Mat2::det(&f7, &a), &Mat2::det(&f7, &b)));

    assert!(Mat2::is_invertible(&f7, &a));
    assert_eq!(Mat2::mul(&f7, &a, &Mat2::inv(&f7, &a)), id);
    assert!(!Mat2::is_invertible(&f7, &Mat2::from_ints(&f7, [1, 1, 1, 1])));

    assert!(Mat2::is_scalar(&f7, &Mat2::from_ints(&f7, [3, 0, 0, 3])));
    assert!(!Mat2::is_scalar(&f7, &Mat2::from_ints(&f7, [1, 0, 0, 2])));
    let c = f7.from_int(2);
    assert_eq!(Mat2::scalar_mul(&f7, &c, &id), Mat2::from_ints(&f7, [2, 0, 0, 2]));

    assert_eq!(mat_pow(&f7, &a, 0), id);
    assert_eq!(matrix_order(&f7, &a), 7);
    assert_eq!(matrix_order(&f7, &b), 4);
    assert_eq!(mat_pow(&f7, &b, 4), id);
    // Unipotent order grows with the nilpotency of the modulus.
    let z8 = Ring::quotient(2, 3).unwrap();
    assert_eq!(matrix_order(&z8, &Mat2::from_ints(&z8, [1, 1, 0, 1])), 8);
}

#[test]
fn closure_sizes_of_known_groups() {
    let f7 = Ring::field(7, 1).unwrap();
    assert_eq!(closure(&f7, &s3_gens(&f7), CLOSURE_CAP).unwrap().len(), 6);

    let f3 = Ring::field(3, 1).unwrap();
    let sl2_f3 = vec![Mat2::from_ints(&f3, [1, 1, 0, 1]), Mat2::from_ints(&f3, [0, -1, 1, 0])];
    assert_eq!(closure(&f3, &sl2_f3, CLOSURE_CAP).unwrap().len(), 24);

    let f5 = Ring::field(5, 1).unwrap();
    assert_eq!(closure(&f5, &sl2_f5_gens(&f5), CLOSURE_CAP).unwrap().len(), 120);
    let mut gl2 = sl2_f5_gens(&f5);
    gl2.push(Mat2::from_ints(&f5, [2, 0, 0, 1]));
    assert_eq!(closure(&f5, &gl2, CLOSURE_CAP).unwrap().len(), 480);

    assert_eq!(
        closure(&f5, &sl2_f5_gens(&f5), 10).unwrap_err(),
        GalrepError::ClosureOverflow { cap: 10 }
    );
    assert_eq!(
        closure(&f5, &[Mat2::from_ints(&f5, [1, 1, 1, 1])], 10).unwrap_err(),
        GalrepError::SingularGenerator
    );
}

#[test]
fn span_rigidity_on_s3() {
    let f7 = Ring::field(7, 1).unwrap();
    let r = Mat2::from_ints(&f7, [0, -1, 1, -1]);
    let s = Mat2::from_ints(&f7, [0, 1, 1, 0]);
    let p = Mat2::from_ints(&f7, [1, 1, 0, 1]);
    let pinv = Mat2::inv(&f7, &p);
    let conj = |g: &Mat2| Mat2::mul(&f7, &Mat2::mul(&f7, &p, g), &pinv);

    let pairs = vec![(r.clone(), conj(&r)), (s.clone(), conj(&s))];
    let rep = RepPair::from_generator_pairs(&f7, &pairs, CLOSURE_CAP).unwrap();
    assert_eq!(rep.elements.len(), 6);

    // One frobenius element per matrix-order class (orders 1, 2, 3).
    let mut frob = Vec::new();
    for want in [1usize, 2, 3] {
        let idx = rep
            .elements
            .iter()
            .position(|(g, _)| matrix_order(&f7, g) == want)
            .unwrap();
        frob.push(idx);
    }
    let cert = span_check(&rep, &frob).unwrap();
    assert!(cert.spans, "rank {}/{}", cert.rank_frob, cert.rank_full);
    let report = trace_conclusion_check(&rep, &frob).unwrap();
    assert!(report.ok);
    assert_eq!(report.checked, 6);
    assert!(report.counterexamples.is_empty());

    assert_eq!(span_check(&rep, &[]).unwrap_err(), GalrepError::EmptyFrobSet);
}

#[test]
fn greedy_frob_set_spans() {
    let f7 = Ring::field(7, 1).unwrap();
    let pairs: Vec<(Mat2, Mat2)> =
        s3_gens(&f7).into_iter().map(|g| (g.clone(), g)).collect();
    let rep = RepPair::from_generator_pairs(&f7, &pairs, CLOSURE_CAP).unwrap();
    let all: Vec<usize> = (0..rep.elements.len()).collect();
    let chosen = greedy_spanning_frob_set(&rep, &all);
    assert!(!chosen.is_empty() && chosen.len() <= 4);
    assert!(span_check(&rep, &chosen).unwrap().spans);
    assert!(trace_conclusion_check(&rep, &chosen).unwrap().ok);
}

#[test]
fn twisted_pair_is_caught() {
    // Twin twisted by the determinant character: traces agree exactly on
    // the det = 1 kernel, which cannot span, and disagree off it.
    let f5 = Ring::field(5, 1).unwrap();
    let gens = [Mat2::from_ints(&f5, [2, 0, 0, 1]), Mat2::from_ints(&f5, [-1, 1, -1, 0])];
    let pairs: Vec<(Mat2, Mat2)> = gens
        .iter()
        .map(|g| {
            let d = Mat2::det(&f5, g);
            (g.clone(), Mat2::scalar_mul(&f5, &d, g))
        })
        .collect();
    let rep = RepPair::from_generator_pairs(&f5, &pairs, CLOSURE_CAP).unwrap();

    let one = f5.one();
    let kernel: Vec<usize> = rep
        .elements
        .iter()
        .enumerate()
        .filter(|(_, (a, _))| Mat2::det(&f5, a) == one)
        .map(|(i, _)| i)
        .collect();
    assert!(!kernel.is_empty());
    match trace_conclusion_check(&rep, &kernel).unwrap_err() {
        GalrepError::SetNotSpanning { rank_frob, rank_full } => {
            assert!(rank_frob < rank_full);
        }
        other => panic!("expected SetNotSpanning, got {other:?}"),
    }

    // An element with det != 1 and nonzero trace witnesses the mismatch.
    let two = f5.from_int(2);
    let bad = rep
        .elements
        .iter()
        .position(|(a, _)| {
            Mat2::det(&f5, a) == two && !f5.is_zero(&Mat2::trace(&f5, a))
        })
        .unwrap();
    assert_eq!(
        trace_conclusion_check(&rep, &[bad]).unwrap_err(),
        GalrepError::TraceMismatchOnFrobSet { index: bad }
    );
}

#[test]
fn dickson_classification_direct_cases() {
    let f5 = Ring::field(5, 1).unwrap();
    let f7 = Ring::field(7, 1).unwrap();

    let cases: Vec<(&Ring, Vec<Mat2>, DicksonClass)> = vec![
        // Upper triangular: common stable line.
        (
            &f7,
            vec![Mat2::from_ints(&f7, [1, 1, 0, 1]), Mat2::from_ints(&f7, [3, 0, 0, 1])],
            DicksonClass::Reducible,
        ),
        // A single unipotent, and a scalar group: both stabilize lines.
        (&f7, vec![Mat2::from_ints(&f7, [1, 1, 0, 1])], DicksonClass::Reducible),
        (&f7, vec![Mat2::from_ints(&f7, [3, 0, 0, 3])], DicksonClass::Reducible),
        // Split torus normalizer: projective dihedral image.
        (
            &f5,
            vec![Mat2::from_ints(&f5, [2, 0, 0, 1]), Mat2::from_ints(&f5, [0, 1, 1, 0])],
            DicksonClass::Dihedral,
        ),
        (&f5, sl2_f5_gens(&f5), DicksonClass::ContainsSL2 { q0: 5 }),
        (
            &f7,
            vec![
                Mat2::from_ints(&f7, [1, 1, 0, 1]),
                Mat2::from_ints(&f7, [0, -1, 1, 0]),
                Mat2::from_ints(&f7, [3, 0, 0, 1]),
            ],
            DicksonClass::ContainsSL2 { q0: 7 },
        ),
    ];
    for (ring, gens, want) in cases {
        let main = dickson_classify(ring, &gens).unwrap();
        let oracle = dickson_oracle(ring, &gens).unwrap();
        assert_eq!(main, want, "main, ell={}", ring.ell);
        assert_eq!(oracle, want, "oracle, ell={}", ring.ell);
    }

    let z4 = Ring::quotient(2, 2).unwrap();
    assert_eq!(
        dickson_classify(&z4, &[Mat2::identity(&z4)]).unwrap_err(),
        GalrepError::NotAField
    );
}

#[test]
fn stabilized_line_matches_reducibility() {
    let f7 = Ring::field(7, 1).unwrap();
    let borel = vec![Mat2::from_ints(&f7, [1, 1, 0, 1]), Mat2::from_ints(&f7, [3, 0, 0, 1])];
    assert!(stabilized_line_exists(&f7, &borel).unwrap());
    let f5 = Ring::field(5, 1).unwrap();
    assert!(!stabilized_line_exists(&f5, &sl2_f5_gens(&f5)).unwrap());
    // The nonsplit torus only reveals its line over the quadratic extension.
    let nonsplit = vec![Mat2::from_ints(&f5, [1, 2, 1, 1])];
    assert!(stabilized_line_exists(&f5, &nonsplit).unwrap());
}

#[test]
fn taylor_wiles_on_sl2_f5() {
    let f5 = Ring::field(5, 1).unwrap();
    let rep = taylor_wiles_check(&f5, &sl2_f5_gens(&f5), 1).unwrap();
    assert_eq!(rep.q0, 5);
    assert_eq!(rep.witness_order, 120);
    assert_eq!(rep.commutators_checked, 14400);
    assert!(rep.perfect);
    assert!(rep.kernel_irreducible);
    assert!(rep.ok);

    let borel = vec![Mat2::from_ints(&f5, [1, 1, 0, 1]), Mat2::from_ints(&f5, [2, 0, 0, 1])];
    assert_eq!(taylor_wiles_check(&f5, &borel, 1).unwrap_err(), GalrepError::NotContainsSL2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold(ring_pick in 0usize..3, ia in 0u64..81, ib in 0u64..81, ic in 0u64..81) {
        let ring = match ring_pick {
            0 => Ring::field(7, 1).unwrap(),
            1 => Ring::quotient(2, 3).unwrap(),
            _ => Ring::new(2, 2, 2).unwrap(),
        };
        let n = ring.element_count();
        let (a, b, c) = (ring.decode(ia % n), ring.decode(ib % n), ring.decode(ic % n));
        prop_assert_eq!(ring.add(&a, &b), ring.add(&b, &a));
        prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(
            ring.mul(&a, &ring.add(&b, &c)),
            ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
        );
        prop_assert_eq!(ring.mul(&a, &ring.one()), a.clone());
        prop_assert_eq!(ring.add(&a, &ring.neg(&a)), ring.zero());
        prop_assert_eq!(ring.pow(&a, 3), ring.mul(&ring.mul(&a, &a), &a));
    }

    #[test]
    fn dickson_is_conjugation_invariant(entries in proptest::array::uniform4(0i64..5)) {
        let f5 = Ring::field(5, 1).unwrap();
        let p = Mat2::from_ints(&f5, entries);
        prop_assume!(Mat2::is_invertible(&f5, &p));
        let pinv = Mat2::inv(&f5, &p);
        let conj = |g: &Mat2| Mat2::mul(&f5, &Mat2::mul(&f5, &p, g), &pinv);

        let borel = vec![Mat2::from_ints(&f5, [1, 1, 0, 1]), Mat2::from_ints(&f5, [2, 0, 0, 1])];
        for gens in [sl2_f5_gens(&f5), borel] {
            let base = dickson_classify(&f5, &gens).unwrap();
            let conjugated: Vec<Mat2> = gens.iter().map(&conj).collect();
            prop_assert_eq!(dickson_classify(&f5, &conjugated).unwrap(), base);
        }
    }

    #[test]
    fn closure_is_a_group(seed_a in proptest::array::uniform4(0i64..7), seed_b in proptest::array::uniform4(0i64..7)) {
        let f7 = Ring::field(7, 1).unwrap();
        let a = Mat2::from_ints(&f7, seed_a);
        let b = Mat2::from_ints(&f7, seed_b);
        prop_assume!(Mat2::is_invertible(&f7, &a) && Mat2::is_invertible(&f7, &b));
        let elements = closure(&f7, &[a, b], CLOSURE_CAP).unwrap();
        // Lagrange: the subgroup order divides |GL2(F7)| = 2016 *... = (49-1)(49-7).
        let gl2_order = (49 - 1) * (49 - 7);
        prop_assert_eq!(gl2_order % elements.len(), 0, "order {}", elements.len());
        // Closed under inverse.
        let set: std::collections::HashSet<Mat2> = elements.iter().cloned().collect();
        for m in elements.iter().take(20) {
            prop_assert!(set.contains(&Mat2::inv(&f7, m)));
        }
    }
}

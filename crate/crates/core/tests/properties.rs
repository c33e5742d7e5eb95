use std::sync::Arc;

use proptest::prelude::*;

use convdom::weight::check_axioms;
use convdom::*;

type C = Complex<f64>;

fn kinds() -> impl Strategy<Value = GroupKind> {
    prop_oneof![
        Just(GroupKind::Lattice(1)),
        Just(GroupKind::Lattice(2)),
        Just(GroupKind::Lattice(3)),
        Just(GroupKind::Heisenberg3),
        Just(GroupKind::Free2),
    ]
}

fn element_in(g: &Arc<Group>, r: usize, idx: usize) -> Element {
    let b = g.ball(r).unwrap();
    b.element(idx % b.len()).clone()
}

fn matrix(g: &Arc<Group>, seed: u64, k: usize, n: usize) -> CdMatrix<f64> {
    let mut s = seed;
    CdMatrix::from_fn(g, k, n, Extent::Exact, |_, _| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
        let b = ((s >> 7 & 0xffff) as f64 / 65536.0) - 0.5;
        C::new(a, b)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws(kind in kinds(), i in 0usize..400, j in 0usize..400, k in 0usize..400) {
        let g = Group::with_config(kind, GroupConfig { allow_out_of_hypothesis: true, ..GroupConfig::for_kind(kind) });
        let (a, b, c) = (element_in(&g, 3, i), element_in(&g, 3, j), element_in(&g, 3, k));
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        let ab = g.mul(&a, &b);
        prop_assert!(g.word_length(&ab).unwrap() <= g.word_length(&a).unwrap() + g.word_length(&b).unwrap());
        prop_assert_eq!(g.word_length(&g.inv(&a)).unwrap(), g.word_length(&a).unwrap());
        let s = a.to_string();
        prop_assert_eq!(g.parse_element(&s).unwrap(), a);
    }

    #[test]
    fn compose_is_associative(kind in kinds(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let g = Group::with_config(kind, GroupConfig { allow_out_of_hypothesis: true, ..GroupConfig::for_kind(kind) });
        let (a, b, c) = (matrix(&g, s1, 1, 2), matrix(&g, s2, 1, 2), matrix(&g, s3, 1, 2));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn cd_norm_is_submultiplicative(kind in kinds(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = Group::with_config(kind, GroupConfig { allow_out_of_hypothesis: true, ..GroupConfig::for_kind(kind) });
        let (a, b) = (matrix(&g, s1, 1, 3), matrix(&g, s2, 2, 3));
        let p = a.compose(&b).unwrap();
        prop_assert!(p.cd_norm() <= a.cd_norm() * b.cd_norm() * (1.0 + 1e-12));
        prop_assert!((a.adjoint().unwrap().cd_norm() - a.cd_norm()).abs() <= 1e-12);
    }

    #[test]
    fn adjoint_reverses_products(kind in kinds(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = Group::with_config(kind, GroupConfig { allow_out_of_hypothesis: true, ..GroupConfig::for_kind(kind) });
        let (a, b) = (matrix(&g, s1, 1, 2), matrix(&g, s2, 1, 2));
        let left = a.compose(&b).unwrap().adjoint().unwrap();
        let right = b.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn envelope_csv_round_trip(kind in kinds(), vals in prop::collection::vec(0.0f64..10.0, 1..20)) {
        let g = Group::with_config(kind, GroupConfig { allow_out_of_hypothesis: true, ..GroupConfig::for_kind(kind) });
        let b = g.ball(2).unwrap();
        let e = Envelope::from_pairs(&g, b.elements().iter().cloned().zip(vals)).unwrap();
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        let back = Envelope::<f64>::read_csv(&g, buf.as_slice()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn convolution_is_multiplicative_on_l1(s in 0.0f64..3.0, i in 0usize..50, j in 0usize..50) {
        let g = Group::new(GroupKind::Heisenberg3);
        let b = g.ball(1).unwrap();
        let x = b.element(1 + i % (b.len() - 1)).clone();
        let a = Envelope::from_pairs(&g, [(x, 1.0 + s), (g.identity(), 0.5)]).unwrap();
        let c = Envelope::from_pairs(&g, [(element_in(&g, 2, j), 2.0)]).unwrap();
        let ac = a.convolve(&c).unwrap();
        prop_assert!((ac.l1_norm() - a.l1_norm() * c.l1_norm()).abs() <= 1e-12);
    }
}

#[test]
fn weights_satisfy_axioms() {
    for kind in [GroupKind::Lattice(1), GroupKind::Lattice(2), GroupKind::Heisenberg3] {
        let g = Group::new(kind);
        for w in ["const", "poly:s=2", "subexp:c=0.5,beta=0.5", "exp:c=0.7"] {
            let w: Weight = w.parse().unwrap();
            let r = check_axioms(&w, &g, 3).unwrap();
            assert!(r.submultiplicative && r.symmetric, "{kind} {w}: {r:?}");
        }
    }
    let z2 = Group::new(GroupKind::Lattice(2));
    let r = check_axioms(&"prodz2:s=2".parse().unwrap(), &z2, 3).unwrap();
    assert!(r.submultiplicative && r.symmetric);
}

#[test]
fn single_precision_matches_double() {
    let g = Group::new(GroupKind::Heisenberg3);
    let a = matrix(&g, 9, 1, 3);
    let a32 = CdMatrixF32::from_fn(&g, 1, 3, Extent::Exact, |z, y| {
        let v = a.entry(z, y);
        Complex::new(v.re as f32, v.im as f32)
    })
    .unwrap();
    let p64 = a.compose(&a).unwrap().cd_norm();
    let p32 = a32.compose(&a32).unwrap().cd_norm() as f64;
    assert!((p64 - p32).abs() <= 1e-5 * p64);
}

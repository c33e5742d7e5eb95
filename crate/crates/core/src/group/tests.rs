use proptest::prelude::*;

use super::*;

const H3_SIZES: [usize; 11] = [1, 5, 17, 53, 135, 299, 593, 1069, 1793, 2845, 4309];

#[test]
fn heisenberg_ball_sizes() {
    let g = Group::new(GroupKind::Heisenberg3);
    assert_eq!(g.ball_sizes(10).unwrap(), H3_SIZES.to_vec());
}

#[test]
fn lattice_ball_sizes() {
    let z1 = Group::new(GroupKind::Lattice(1));
    let z2 = Group::new(GroupKind::Lattice(2));
    for (n, s) in z1.ball_sizes(12).unwrap().into_iter().enumerate() {
        assert_eq!(s, 2 * n + 1);
    }
    for (n, s) in z2.ball_sizes(12).unwrap().into_iter().enumerate() {
        assert_eq!(s, 2 * n * n + 2 * n + 1);
    }
}

#[test]
fn free_group_ball_sizes() {
    let f = Group::new(GroupKind::Free2);
    for (n, s) in f.ball_sizes(6).unwrap().into_iter().enumerate() {
        assert_eq!(s, 2 * 3usize.pow(n as u32) - 1);
    }
}

#[test]
fn central_element_length() {
    let g = Group::new(GroupKind::Heisenberg3);
    assert_eq!(g.word_length(&Element::new(&[0, 0, 1])).unwrap(), 4);
    assert_eq!(g.word_length(&Element::new(&[0, 0, -1])).unwrap(), 4);
    assert_eq!(g.word_length(&Element::new(&[1, 1, 1])).unwrap(), 2);
    assert_eq!(g.word_length(&Element::new(&[1, 1, 0])).unwrap(), 2);
}

#[test]
fn heisenberg_product_and_inverse() {
    let k = GroupKind::Heisenberg3;
    let g = Element::new(&[1, 2, 3]);
    let h = Element::new(&[4, 5, 6]);
    assert_eq!(k.mul(&g, &h), Element::new(&[5, 7, 14]));
    assert_eq!(k.inv(&g), Element::new(&[-1, -2, -1]));
}

#[test]
fn canonical_order_is_prefix_stable() {
    let g = Group::new(GroupKind::Heisenberg3);
    let b6 = g.ball(6).unwrap();
    let b4 = g.ball(4).unwrap();
    assert_eq!(&b6.elements()[..b4.len()], b4.elements());
    assert_eq!(b6.prefix_len(4), b4.len());
    for w in b6.elements().windows(2) {
        let a = g.canon(&w[0]).unwrap();
        let b = g.canon(&w[1]).unwrap();
        assert!(a < b);
    }
}

#[test]
fn radius_and_size_limits() {
    let g = Group::new(GroupKind::Heisenberg3);
    assert!(matches!(g.ball(11), Err(Error::RadiusLimit { .. })));
    assert!(matches!(
        g.word_length(&Element::new(&[20, 0, 0])),
        Err(Error::OutOfRadius { .. })
    ));
    let small = Group::with_config(
        GroupKind::Heisenberg3,
        GroupConfig {
            max_radius: 10,
            size_limit: 100,
            allow_out_of_hypothesis: false,
        },
    );
    match small.ball(6) {
        Err(Error::ResourceLimit { radius, size, .. }) => {
            assert_eq!(radius, 4);
            assert!(size > 100);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn free_group_is_guarded() {
    let f = Group::new(GroupKind::Free2);
    assert!(matches!(f.require_hypotheses(), Err(Error::OutOfHypothesis(_))));
    let mut c = GroupConfig::for_kind(GroupKind::Free2);
    c.allow_out_of_hypothesis = true;
    assert!(Group::with_config(GroupKind::Free2, c).require_hypotheses().is_ok());
    assert!(Group::new(GroupKind::Heisenberg3).require_hypotheses().is_ok());
}

#[test]
fn mismatched_elements_are_rejected() {
    let g = Group::new(GroupKind::Lattice(2));
    assert!(g.try_mul(&Element::new(&[1]), &Element::new(&[1, 2])).is_err());
    assert!(g.parse_element("1,2,3").is_err());
    let f = Group::new(GroupKind::Free2);
    assert!(f.parse_element("1,-1").is_err());
    assert!(f.parse_element("3").is_err());
    assert_eq!(f.parse_element("").unwrap(), f.identity());
}

#[test]
fn element_text_round_trip() {
    for s in ["3,-2", "0,0,1", "-7", ""] {
        let e: Element = s.parse().unwrap();
        assert_eq!(e.to_string(), s);
    }
    assert_eq!(" H3 ".parse::<GroupKind>().unwrap(), GroupKind::Heisenberg3);
    assert_eq!("z2".parse::<GroupKind>().unwrap(), GroupKind::Lattice(2));
    assert!("Q".parse::<GroupKind>().is_err());
}

#[test]
fn power_length_matches_direct_measurement() {
    let g = Group::with_max_radius(GroupKind::Heisenberg3, 10);
    let x = Element::new(&[1, -1, 0]);
    assert_eq!(g.power_length(&x, 4).unwrap(), 8);
    let c = Element::new(&[0, 0, 1]);
    let mut p = g.identity();
    for _ in 0..2 {
        p = g.mul(&p, &c);
    }
    assert_eq!(g.power_length(&c, 2).unwrap(), g.word_length(&p).unwrap());
}

#[test]
fn growth_degrees() {
    let cases = [
        (GroupKind::Lattice(1), 12, 1.0, 0.1),
        (GroupKind::Lattice(2), 8, 2.0, 0.2),
        (GroupKind::Heisenberg3, 8, 4.0, 0.4),
    ];
    for (k, n, d, tol) in cases {
        let g = Group::new(k);
        let sizes: Vec<(usize, usize)> = g.ball_sizes(n).unwrap().into_iter().enumerate().collect();
        let fit = growth_fit(&sizes).unwrap();
        assert!((fit.degree - d).abs() <= tol, "{k}: {}", fit.degree);
    }
    assert!(growth_fit(&[(0, 1), (1, 3)]).is_err());
    let z = growth_fit(&[(1, 3), (2, 5), (3, 7)]).unwrap();
    assert_eq!(z.points, 2);
    assert!((z.degree - 1.0).abs() < 1e-12);
}

fn h3_elem() -> impl Strategy<Value = Element> {
    (-6i64..=6, -6i64..=6, -20i64..=20).prop_map(|(a, b, c)| Element::new(&[a, b, c]))
}

fn f2_word() -> impl Strategy<Value = Element> {
    proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)], 0..8)
        .prop_map(|letters| {
            let k = GroupKind::Free2;
            letters
                .into_iter()
                .fold(k.identity(), |acc, l| k.mul(&acc, &Element::new(&[l])))
        })
}

proptest! {
    #[test]
    fn heisenberg_axioms(x in h3_elem(), y in h3_elem(), z in h3_elem()) {
        let k = GroupKind::Heisenberg3;
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.inv(&x)), k.identity());
        prop_assert_eq!(k.mul(&k.identity(), &x), x.clone());
    }

    #[test]
    fn free_group_axioms(x in f2_word(), y in f2_word(), z in f2_word()) {
        let k = GroupKind::Free2;
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.inv(&x)), k.identity());
        prop_assert!(k.validate(&k.mul(&x, &y)).is_ok());
    }

    #[test]
    fn lengths_are_symmetric_and_subadditive(i in 0usize..135, j in 0usize..135) {
        let g = Group::new(GroupKind::Heisenberg3);
        let b = g.ball(4).unwrap();
        let (x, y) = (b.element(i), b.element(j));
        let lx = g.word_length(x).unwrap();
        prop_assert_eq!(lx, b.length(i));
        prop_assert_eq!(g.word_length(&g.inv(x)).unwrap(), lx);
        let lxy = g.word_length(&g.mul(x, y)).unwrap();
        prop_assert!(lxy <= lx + b.length(j));
    }
}

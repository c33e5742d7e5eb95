use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{Element, Group, GroupKind};
use crate::scalar::Complex;
use crate::Error;

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn random_exact(g: &Arc<Group>, k: usize, n: usize, seed: u64) -> CdMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CdMatrix::from_fn(g, k, n, Extent::Exact, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
    .unwrap()
}

fn random_window(g: &Arc<Group>, k: usize, n: usize, seed: u64) -> CdMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CdMatrix::from_fn(g, k, n, Extent::Window, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
    .unwrap()
}

#[test]
fn shifts_compose_like_the_group() {
    let g = Group::new(GroupKind::Heisenberg3);
    let a = Element::new(&[1, 0, 0]);
    let b = Element::new(&[0, 1, 0]);
    let la = CdMatrix::<f64>::shift(&g, &a, 6).unwrap();
    let lb = CdMatrix::<f64>::shift(&g, &b, 6).unwrap();
    let lab = la.compose(&lb).unwrap();
    let expected = CdMatrix::<f64>::shift(&g, &g.mul(&a, &b), 5).unwrap();
    assert_eq!(lab, expected);
    assert_eq!(lab.column_radius(), 5);
}

#[test]
fn single_diagonal_product_rule() {
    // D^n_v D^m_w = D^{(T_{w^-1} n) m}_{vw}
    let g = Group::new(GroupKind::Heisenberg3);
    let v = Element::new(&[1, 1, 0]);
    let w = Element::new(&[0, -1, 0]);
    let nfun = |y: &Element| c(1.0 + y.coords()[0] as f64, y.coords()[2] as f64);
    let mfun = |y: &Element| c(y.coords()[1] as f64, 0.5);
    let mut dn = CdMatrix::<f64>::zero(&g, 8, Extent::Exact).unwrap();
    dn.insert_diagonal(&v, dn.columns().elements().iter().map(nfun).collect()).unwrap();
    let mut dm = CdMatrix::<f64>::zero(&g, 6, Extent::Exact).unwrap();
    dm.insert_diagonal(&w, dm.columns().elements().iter().map(mfun).collect()).unwrap();
    let p = dn.compose(&dm).unwrap();
    let vw = g.mul(&v, &w);
    let d = p.diagonal(&vw).unwrap();
    for (j, y) in p.columns().elements().iter().enumerate() {
        let expected = nfun(&g.mul(&w, y)) * mfun(y);
        assert!((d[j] - expected).norm() < 1e-14);
    }
    assert_eq!(p.num_diagonals(), 1);
}

#[test]
fn cd_norm_of_two_diagonals() {
    let g = Group::new(GroupKind::Lattice(1));
    let mut a = CdMatrix::<f64>::identity(&g, 10).unwrap();
    a.insert_diagonal(&Element::new(&[1]), vec![c(-0.5, 0.0); 21]).unwrap();
    assert_eq!(a.cd_norm(), 1.5);
    let w = "poly:s=1".parse().unwrap();
    assert_eq!(a.cd_norm_weighted(&w).unwrap(), 2.0);
}

#[test]
fn dense_round_trip_is_exact() {
    let g = Group::new(GroupKind::Heisenberg3);
    let ball = g.ball(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = DenseSection::from_fn(&g, &ball, |_, _| c(rng.gen(), rng.gen())).unwrap();
    let a = CdMatrix::from_dense(&m).unwrap();
    let back = a.to_dense(&ball).unwrap();
    assert_eq!(back.data(), m.data());
}

#[test]
fn dense_product_agrees_on_certified_region() {
    for kind in [GroupKind::Lattice(2), GroupKind::Heisenberg3] {
        let g = Group::new(kind);
        for seed in 0..3 {
            let h = random_exact(&g, 2, 4, seed);
            let f = random_exact(&g, 2, 4, seed + 100);
            let p = h.compose(&f).unwrap();
            let ball = g.ball(5).unwrap();
            let lhs = p.to_dense(&ball).unwrap();
            let rhs = h.to_dense(&ball).unwrap().matmul(&f.to_dense(&ball).unwrap()).unwrap();
            let region = product_region(&f, &p, &ball);
            assert_eq!(region.count(), ball.len() * ball.prefix_len(3));
            assert!(lhs.max_abs_diff_on(&rhs, &region).unwrap() < 1e-12);
        }
    }
}

#[test]
fn windowed_product_shrinks_and_certifies() {
    let g = Group::new(GroupKind::Lattice(2));
    let h = random_window(&g, 1, 6, 1);
    let f = random_window(&g, 2, 6, 2);
    let p = h.compose(&f).unwrap();
    assert_eq!(p.column_radius(), 4);
    assert_eq!(p.extent(), Extent::Window);
    let ball = g.ball(6).unwrap();
    assert!(p.to_dense(&ball).is_err());
    let small = g.ball(4).unwrap();
    let lhs = p.to_dense(&small).unwrap();
    let rhs = h.to_dense(&small).unwrap().matmul(&f.to_dense(&small).unwrap()).unwrap();
    let region = product_region(&f, &p, &small);
    assert_eq!(region.count(), small.len() * small.prefix_len(2));
    assert!(lhs.max_abs_diff_on(&rhs, &region).unwrap() < 1e-12);
    let too_far = CdMatrix::<f64>::identity(&g, 1).unwrap();
    assert!(matches!(too_far.compose(&f), Err(Error::Truncation { .. })));
}

#[test]
fn adjoint_is_conjugate_transpose() {
    let g = Group::new(GroupKind::Heisenberg3);
    let a = random_exact(&g, 2, 3, 5);
    let s = a.adjoint().unwrap();
    assert_eq!(s.column_radius(), 5);
    let ball = g.ball(5).unwrap();
    let lhs = s.to_dense(&ball).unwrap();
    let rhs = a.to_dense(&ball).unwrap().adjoint();
    assert_eq!(lhs.data(), rhs.data());
    assert_eq!(s.adjoint().unwrap(), a);
    assert_eq!(s.cd_norm(), a.cd_norm());
}

#[test]
fn windowed_adjoint_shrinks() {
    let g = Group::new(GroupKind::Lattice(1));
    let a = random_window(&g, 2, 10, 3);
    let s = a.adjoint().unwrap();
    assert_eq!(s.column_radius(), 8);
    let ball = g.ball(8).unwrap();
    let lhs = s.to_dense(&ball).unwrap();
    let rhs = a.to_dense(&ball).unwrap().adjoint();
    for j in 0..ball.prefix_len(6) {
        for i in 0..ball.len() {
            assert_eq!(lhs.get(i, j), rhs.get(i, j));
        }
    }
}

#[test]
fn apply_is_dominated_on_certified_rows() {
    let g = Group::new(GroupKind::Lattice(2));
    let a = random_exact(&g, 2, 5, 9);
    let env = a.envelope().unwrap();
    let ball = g.ball(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let v: Vec<C> = (0..ball.len()).map(|_| c(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let x = VectorSection::new(&ball, v.clone()).unwrap();
    let out = a.apply(&x).unwrap();
    let dense = a.to_dense(&ball).unwrap().apply(&v);
    let mut certified = 0;
    for (i, xi) in ball.elements().iter().enumerate() {
        if !out.certified[i] {
            continue;
        }
        certified += 1;
        assert!((out.values.values()[i] - dense[i]).norm() < 1e-12);
        let bound: f64 = ball
            .elements()
            .iter()
            .enumerate()
            .map(|(j, y)| env.get(&g.mul(xi, &g.inv(y))) * v[j].norm())
            .sum();
        assert!(out.values.values()[i].norm() <= bound + 1e-12);
    }
    assert_eq!(certified, ball.prefix_len(4));
}

#[test]
fn star_power_matches_repeated_products() {
    let g = Group::new(GroupKind::Lattice(1));
    let a = random_exact(&g, 1, 3, 21);
    let mut p = a.clone();
    for _ in 1..5 {
        p = p.compose(&a).unwrap();
    }
    assert!(a.star_power(5).unwrap().approx_eq(&p, 1e-12));
    assert!(a.star_power(13).is_err());
}

#[test]
fn csv_round_trip() {
    let g = Group::new(GroupKind::Heisenberg3);
    let a = random_exact(&g, 1, 2, 8);
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("a");
    a.save(&stem).unwrap();
    let b = CdMatrix::<f64>::load(&g, &stem).unwrap();
    assert_eq!(a, b);
    assert_eq!(b.meta().diagonal_radius, 1);
    let z2 = Group::new(GroupKind::Lattice(2));
    assert!(CdMatrix::<f64>::load(&z2, &stem).is_err());
}

#[test]
fn lu_inverse_and_singularity() {
    let g = Group::new(GroupKind::Lattice(2));
    let ball = g.ball(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = DenseSection::from_fn(&g, &ball, |i, j| {
        let d = if i == j { 4.0 } else { 0.0 };
        c(d + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1))
    })
    .unwrap();
    let inv = m.inverse(1e-12).unwrap();
    let id = m.matmul(&inv).unwrap();
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((id.get(i, j) - c(e, 0.0)).norm() < 1e-12);
        }
    }
    // lambda(1) + lambda(-1) has odd sections with a zero eigenvalue
    let z = Group::new(GroupKind::Lattice(1));
    let mut t = CdMatrix::<f64>::shift(&z, &Element::new(&[1]), 10).unwrap();
    t = t.add(&CdMatrix::shift(&z, &Element::new(&[-1]), 10).unwrap()).unwrap();
    let s = t.to_dense(&z.ball(10).unwrap()).unwrap();
    assert!(matches!(s.inverse(1e-12), Err(Error::SingularSection { radius: 10, .. })));
}

#[test]
fn single_precision_path() {
    let g = Group::new(GroupKind::Lattice(1));
    let a = CdMatrix::<f32>::shift(&g, &Element::new(&[1]), 4).unwrap();
    let b = a.compose(&a).unwrap();
    assert_eq!(b.cd_norm(), 1.0f32);
    assert_eq!(b.entry(&Element::new(&[2]), &Element::new(&[0])), Complex::new(1.0f32, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative_and_norm_submultiplicative(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
        let g = Group::new(GroupKind::Heisenberg3);
        let a = random_exact(&g, 1, 2, s1);
        let b = random_exact(&g, 1, 2, s2);
        let d = random_exact(&g, 1, 2, s3);
        let left = a.compose(&b).unwrap().compose(&d).unwrap();
        let right = a.compose(&b.compose(&d).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
        let ab = a.compose(&b).unwrap();
        prop_assert!(ab.cd_norm() <= a.cd_norm() * b.cd_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn involution_reverses_products(s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = Group::new(GroupKind::Lattice(2));
        let a = random_exact(&g, 1, 2, s1);
        let b = random_exact(&g, 2, 2, s2);
        let lhs = a.compose(&b).unwrap().adjoint().unwrap();
        let rhs = b.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }
}

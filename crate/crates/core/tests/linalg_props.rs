mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slab_core::linalg::{entrywise_lr_norm, random_unitary, schatten_norm, schur_product, singular_values};
use slab_core::{ComplexMatrix, C64};

fn sp(a: &ComplexMatrix, p: f64) -> f64 {
    schatten_norm(a, p).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn p_triangle((m, n, a, b) in matrix_pair(6), p in sub_one_exponent()) {
        let (a, b) = (build(m, n, &a), build(m, n, &b));
        let lhs = sp(&a.add(&b).unwrap(), p).powf(p);
        let rhs = sp(&a, p).powf(p) + sp(&b, p).powf(p);
        prop_assert!(excess(lhs, rhs) <= 1e-9, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn triangle_for_p_at_least_one((m, n, a, b) in matrix_pair(6), p in 1.0..4.0f64) {
        let (a, b) = (build(m, n, &a), build(m, n, &b));
        prop_assert!(excess(sp(&a.add(&b).unwrap(), p), sp(&a, p) + sp(&b, p)) <= 1e-9);
    }

    #[test]
    fn unitary_invariance((m, n, a) in matrix_data(7), p in exponent(), seed in any::<u64>()) {
        let a = build(m, n, &a);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (random_unitary(m, &mut r).unwrap(), random_unitary(n, &mut r).unwrap());
        let rotated = u.matmul(&a).unwrap().matmul(&v).unwrap();
        prop_assert!(excess(sp(&rotated, p), sp(&a, p)).abs() <= 1e-9);
    }

    #[test]
    fn homogeneity((m, n, a) in matrix_data(6), p in exponent(), c in complex()) {
        let a = build(m, n, &a);
        let c = C64::new(c.0, c.1);
        prop_assume!(c.norm() > 1e-3);
        prop_assert!(excess(sp(&a.scale(c).unwrap(), p), c.norm() * sp(&a, p)).abs() <= 1e-10);
    }

    #[test]
    fn frobenius_and_operator((m, n, a) in matrix_data(8)) {
        let a = build(m, n, &a);
        let s = singular_values(&a).unwrap();
        prop_assert!(excess(sp(&a, 2.0), a.frobenius()).abs() <= 1e-10);
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
        // Largest singular value lies between the largest entry and the Frobenius norm.
        prop_assert!(s[0] >= a.max_abs() * (1.0 - 1e-12) && s[0] <= a.frobenius() * (1.0 + 1e-12));
    }

    #[test]
    fn schatten_decreases_in_p((m, n, a) in matrix_data(6), p in 0.2..1.0f64, q in 1.0..3.0f64) {
        let a = build(m, n, &a);
        prop_assert!(excess(sp(&a, q), sp(&a, p)) <= 1e-10);
    }

    #[test]
    fn entrywise_dominance((m, n, a) in matrix_data(6), r in prop_oneof![Just(1.0 / 3.0), Just(0.5), Just(1.0), Just(1.5), Just(2.0), 0.2..2.0f64]) {
        let a = build(m, n, &a);
        prop_assert!(excess(sp(&a, r), entrywise_lr_norm(&a, r).unwrap()) <= 1e-10);
    }

    #[test]
    fn schur_product_commutes_with_selection((m, n, a, b) in matrix_pair(6), seed in any::<u64>()) {
        let (a, b) = (build(m, n, &a), build(m, n, &b));
        let rows: Vec<usize> = (0..m).rev().collect();
        let cols: Vec<usize> = (0..n).map(|k| (k + seed as usize) % n).collect();
        let lhs = schur_product(&a.select(&rows, &cols).unwrap(), &b.select(&rows, &cols).unwrap()).unwrap();
        let rhs = schur_product(&a, &b).unwrap().select(&rows, &cols).unwrap();
        prop_assert!(lhs == rhs);
    }

    #[test]
    fn adjoint_and_transpose_preserve_norms((m, n, a) in matrix_data(6), p in exponent()) {
        let a = build(m, n, &a);
        prop_assert!(excess(sp(&a.adjoint(), p), sp(&a, p)).abs() <= 1e-10);
    }

    #[test]
    fn text_round_trip((m, n, a) in matrix_data(5)) {
        let a = build(m, n, &a);
        prop_assert!(ComplexMatrix::parse_text(&a.to_text()).unwrap() == a);
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use slab_core::besov::{besov_norm, BesovParams};
use slab_core::{SmoothCutoffSpec, TrigPolynomial, C64};

fn norm(f: &TrigPolynomial, s: f64, p: f64, q: f64) -> f64 {
    besov_norm(f, BesovParams::new(s, p, q).unwrap(), &SmoothCutoffSpec::VPartition)
        .unwrap()
        .norm
}

fn positive_exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.3..3.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homogeneous(v in trig(40), c in complex(), s in 0.0..2.0f64, p in positive_exponent(), q in positive_exponent()) {
        let f = trig_poly(&v);
        let c = C64::new(c.0, c.1);
        prop_assume!(c.norm() > 1e-3);
        let (a, b) = (norm(&f.scale(c), s, p, q), c.norm() * norm(&f, s, p, q));
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1e-300));
    }

    #[test]
    fn quasi_triangle(u in trig(40), v in trig(40), s in 0.0..2.0f64, p in positive_exponent(), q in positive_exponent()) {
        let (f, g) = (trig_poly(&u), trig_poly(&v));
        let r = p.min(q).min(1.0);
        let lhs = norm(&f.add(&g), s, p, q).powf(r);
        let rhs = norm(&f, s, p, q).powf(r) + norm(&g, s, p, q).powf(r);
        prop_assert!(excess(lhs, rhs) <= 1e-6, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn decreasing_in_q(v in trig(40), s in 0.0..2.0f64, p in positive_exponent(), q in 0.3..2.0f64, dq in 0.0..3.0f64) {
        let f = trig_poly(&v);
        prop_assert!(excess(norm(&f, s, p, q + dq), norm(&f, s, p, q)) <= 1e-9);
        prop_assert!(excess(norm(&f, s, p, f64::INFINITY), norm(&f, s, p, q)) <= 1e-9);
    }

    #[test]
    fn increasing_in_smoothness(v in trig(40), s in -1.0..2.0f64, ds in 0.0..1.0f64, p in positive_exponent(), q in positive_exponent()) {
        let f = trig_poly(&v);
        prop_assert!(excess(norm(&f, s, p, q), norm(&f, s + ds, p, q)) <= 1e-9);
    }
}

//! Shared strategies for the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use slab_core::{AnalyticSymbol, ComplexMatrix, PExponent, TrigPolynomial, C64};

pub fn complex() -> impl Strategy<Value = (f64, f64)> {
    (-4.0..4.0, -4.0..4.0)
}

pub fn to_c64(v: &[(f64, f64)]) -> Vec<C64> {
    v.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

/// Dimensions and row-major entries of a random matrix.
pub fn matrix_data(max: usize) -> impl Strategy<Value = (usize, usize, Vec<(f64, f64)>)> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| (Just(m), Just(n), prop::collection::vec(complex(), m * n)))
}

pub fn build(m: usize, n: usize, v: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::from_row_major(m, n, &to_c64(v)).unwrap()
}

pub type MatrixPair = (usize, usize, Vec<(f64, f64)>, Vec<(f64, f64)>);

/// Two matrices of the same shape.
pub fn matrix_pair(max: usize) -> impl Strategy<Value = MatrixPair> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        (
            Just(m),
            Just(n),
            prop::collection::vec(complex(), m * n),
            prop::collection::vec(complex(), m * n),
        )
    })
}

pub fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0 / 3.0), Just(0.5), Just(2.0 / 3.0), Just(1.0), 0.2..1.0]
}

pub fn sub_one_exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0 / 3.0), Just(0.5), Just(2.0 / 3.0), 0.2..0.95]
}

pub fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

pub fn analytic(max_degree: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(complex(), 1..=max_degree + 1)
}

pub fn analytic_symbol(v: &[(f64, f64)]) -> AnalyticSymbol {
    AnalyticSymbol::new(to_c64(v)).unwrap()
}

/// Coefficients of a trigonometric polynomial centred at zero.
pub fn trig(max_half: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    (0..=max_half).prop_flat_map(|h| prop::collection::vec(complex(), 2 * h + 1))
}

pub fn trig_poly(v: &[(f64, f64)]) -> TrigPolynomial {
    TrigPolynomial::symmetric(to_c64(v)).unwrap()
}

/// `(a - b) / max(|b|, tiny)`.
pub fn excess(a: f64, b: f64) -> f64 {
    (a - b) / b.abs().max(1e-300)
}

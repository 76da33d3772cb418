//! Certified upper bounds and the exact structural formulas.

use super::{mult_lower_rank1_with, AscentOptions};
use crate::error::{input, Result};
use crate::linalg::{operator_norm, schatten_norm, ComplexMatrix, PExponent, C64};
use crate::symbols::{lp_norm, split_hankel_lower, AnalyticSymbol, SmoothCutoffSpec, Spectrum, TrigPolynomial, DEFAULT_OVERSAMPLE};

/// `‖A‖_{S_{p#}}`; the operator norm at `p = 1`.
pub fn mult_upper_hadamard(a: &ComplexMatrix, p: PExponent) -> Result<f64> {
    if p.is_one() {
        operator_norm(a)
    } else {
        Ok(schatten_norm(a, p.sharp().value())?.value)
    }
}

/// `(2m)^{1/p-1} ‖ψ‖_p` for an analytic polynomial of degree `m - 1`.
pub fn mult_upper_hankel_poly(psi: &AnalyticSymbol, p: PExponent) -> Result<f64> {
    let Some(deg) = psi.effective_degree() else {
        return Ok(0.0);
    };
    let m = (deg + 1) as f64;
    let norm = lp_norm(psi, p.p(), DEFAULT_OVERSAMPLE)?;
    Ok((2.0 * m).powf(p.inv_sharp()) * norm.value)
}

/// `(4m)^{1/p-1} ‖ψ‖_p` for a trigonometric polynomial of degree `m - 1`.
pub fn mult_upper_hankel_trig(psi: &TrigPolynomial, p: PExponent) -> Result<f64> {
    let psi = psi.trimmed();
    if psi.is_zero() {
        return Ok(0.0);
    }
    let m = (psi.degree() + 1) as f64;
    let norm = lp_norm(&psi, p.p(), DEFAULT_OVERSAMPLE)?;
    Ok((4.0 * m).powf(p.inv_sharp()) * norm.value)
}

/// The symbol of a Hankel matrix, read off its first row and last column.
/// Returns `None` when the matrix is not Hankel.
pub fn hankel_symbol_of(a: &ComplexMatrix) -> Option<AnalyticSymbol> {
    let (rows, cols) = (a.rows(), a.cols());
    let tol = 1e-12 * a.max_abs().max(f64::MIN_POSITIVE);
    let coeff = |d: usize| if d < cols { a.get(0, d) } else { a.get(d - cols + 1, cols - 1) };
    for r in 0..rows {
        for c in 0..cols {
            if (a.get(r, c) - coeff(r + c)).norm() > tol {
                return None;
            }
        }
    }
    AnalyticSymbol::new((0..rows + cols - 1).map(coeff).collect()).ok()
}

/// The `2m` rank-one matrices whose average is `Γ_ψ ⋆ (a bᵀ)` on the
/// `m × m` corner, with `m = deg ψ + 1` and `ζ_j = e^{2πij/2m}`.
///
/// Entry `(r, c)` of the `j`-th matrix is `ψ(ζ_j) a_r b_c ζ̄_j^{r+c}`.
pub fn hankel_rank_one_average(psi: &AnalyticSymbol, a: &[C64], b: &[C64]) -> Result<Vec<ComplexMatrix>> {
    let m = psi.effective_degree().unwrap_or(0) + 1;
    for (name, v) in [("a", a), ("b", b)] {
        if let Some(k) = v.iter().enumerate().skip(m).find(|(_, z)| z.norm() != 0.0).map(|(k, _)| k) {
            return input(format!("vector {name} has a nonzero entry at {k}, outside [0, {m})"));
        }
    }
    let pad = |v: &[C64]| -> Vec<C64> { (0..m).map(|k| v.get(k).copied().unwrap_or_default()).collect() };
    let (a, b) = (pad(a), pad(b));
    let dense = psi.to_dense();
    let two_m = 2 * m;
    (0..two_m)
        .map(|j| {
            let zeta = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / two_m as f64);
            let value: C64 = dense.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * zeta + c);
            ComplexMatrix::from_fn(m, m, |r, c| {
                let phase = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (((r + c) * j) % two_m) as f64 / two_m as f64);
                value * a[r] * b[c] * phase
            })
        })
        .collect()
}

/// `(Σ v_k^{p#})^{1/p#}`, the maximum at `p = 1`.
pub fn block_diagonal_norm(values: &[f64], p: PExponent) -> Result<f64> {
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return input(format!("block values must be finite and nonnegative, got {v}"));
    }
    Ok(p.sharp().aggregate(values))
}

fn check_cuts(cuts: &[usize], len: usize, what: &str) -> Result<()> {
    if cuts.first() != Some(&0) || cuts.last() != Some(&len) || cuts.windows(2).any(|w| w[1] <= w[0]) {
        return input(format!("{what} cuts {cuts:?} must increase strictly from 0 to {len}"));
    }
    Ok(())
}

/// `(Σ_l v_l^{p♭})^{1/p♭}` over horizontal strips `[cuts[l-1], cuts[l])`.
pub fn strip_upper_bound(a: &ComplexMatrix, row_cuts: &[usize], values: &[f64], p: PExponent) -> Result<f64> {
    check_cuts(row_cuts, a.rows(), "strip")?;
    if values.len() + 1 != row_cuts.len() {
        return input(format!("{} strips need {} values, got {}", row_cuts.len() - 1, row_cuts.len() - 1, values.len()));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return input(format!("strip values must be finite and nonnegative, got {v}"));
    }
    Ok(crate::linalg::lq_aggregate(values, p.flat()))
}

/// Horizontal strip `[r0, r1)` of `a`, with every other row set to zero.
pub fn strip(a: &ComplexMatrix, r0: usize, r1: usize) -> Result<ComplexMatrix> {
    if r0 > r1 || r1 > a.rows() {
        return input(format!("strip [{r0}, {r1}) outside {} rows", a.rows()));
    }
    a.map(|r, _, z| if (r0..r1).contains(&r) { z } else { C64::new(0.0, 0.0) })
}

/// Strip bound with each strip certified by [`mult_upper_hadamard`].
pub fn strip_upper_hadamard(a: &ComplexMatrix, row_cuts: &[usize], p: PExponent) -> Result<f64> {
    check_cuts(row_cuts, a.rows(), "strip")?;
    let values = row_cuts
        .windows(2)
        .map(|w| mult_upper_hadamard(&a.block(w[0], w[1], 0, a.cols())?, p))
        .collect::<Result<Vec<_>>>()?;
    strip_upper_bound(a, row_cuts, &values, p)
}

/// Part of the Hankel matrix of `ψ` strictly below the diagonal, `n × n`.
pub fn gamma_minus_matrix<S: Spectrum + ?Sized>(psi: &S, n: usize) -> Result<ComplexMatrix> {
    Ok(split_hankel_lower(psi, n)?.0)
}

/// Entrywise `ℓ^{p#}` norm of the below-diagonal Hankel part of a lacunary
/// symbol (frequencies with `n_0 > 0` and `n_{l+1} ≥ 2 n_l`); the supremum of
/// the coefficients at `p = 1`.
pub fn gamma_minus_upper(psi: &AnalyticSymbol, p: PExponent) -> Result<f64> {
    let freqs = psi.frequencies();
    if freqs.first() == Some(&0) {
        return input("the constant term must vanish");
    }
    if let Some(w) = freqs.windows(2).find(|w| w[1] < 2 * w[0]) {
        return input(format!("frequencies {} and {} violate n_(l+1) >= 2 n_l", w[0], w[1]));
    }
    let mut values = Vec::new();
    for &n in &freqs {
        let modulus = psi.coeff(n as i64).norm();
        // Antidiagonal n has ceil(n/2) entries strictly below the diagonal.
        values.extend(std::iter::repeat_n(modulus, n.div_ceil(2)));
    }
    Ok(p.sharp().aggregate(&values))
}

/// `A^{m,n}`: entries with row below `m` or column below `n` set to zero.
pub fn corner_cut(a: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    if m > a.rows() || n > a.cols() {
        return input(format!("corner ({m}, {n}) outside a {}×{} matrix", a.rows(), a.cols()));
    }
    a.map(|r, c, z| if r >= m && c >= n { z } else { C64::new(0.0, 0.0) })
}

/// `(m+1) × (m+1)` matrix of ones.
pub fn q_corner(m: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::ones(m + 1, m + 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Compares `|ψ̂(n)|` with the Fejér-averaged neighbourhood bound
/// `(Σ_{|j|≤m} (1 - |j|/(m+1)) |ψ̂(n+j)|² / (m+1))^{(1-p)/(2-p)} · M^{p/(2-p)}`
/// where `M` bounds the Hankel multiplier norm.
pub fn coefficient_bound_check<S: Spectrum + ?Sized>(psi: &S, n: u64, m: u64, mult_upper: f64, p: PExponent) -> Result<CoefficientBound> {
    if m > n {
        return input(format!("window half-width {m} exceeds the index {n}"));
    }
    if !(mult_upper >= 0.0 && mult_upper.is_finite()) {
        return input(format!("multiplier bound must be finite and nonnegative, got {mult_upper}"));
    }
    let pv = p.p();
    let lhs = psi.coeff(n as i64).norm();
    let terms: Vec<f64> = (-(m as i64)..=m as i64)
        .map(|j| (1.0 - j.unsigned_abs() as f64 / (m + 1) as f64) * psi.coeff(n as i64 + j).norm_sqr())
        .collect();
    let mean = crate::linalg::compensated_sum(terms) / (m + 1) as f64;
    let rhs = mean.powf((1.0 - pv) / (2.0 - pv)) * mult_upper.powf(pv / (2.0 - pv));
    Ok(CoefficientBound {
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierRow {
    pub m: u64,
    pub lower: f64,
    pub upper: f64,
}

/// Brackets `‖A ⋆ Γ_{F(·/m)} - A‖_{𝔐_p}` for each `m`, where the Hankel
/// matrix has entries `F((j+k)/m)`.
pub fn mollifier_convergence(a: &ComplexMatrix, f: &SmoothCutoffSpec, m_list: &[u64], p: PExponent, opts: &AscentOptions) -> Result<Vec<MollifierRow>> {
    f.validate_plateau()?;
    m_list
        .iter()
        .map(|&m| {
            if m == 0 {
                return input("dilation m must be positive");
            }
            let diff = a.map(|r, c, z| z * (f.eval((r + c) as f64 / m as f64) - 1.0))?;
            let (lower, upper) = if diff.max_abs() == 0.0 {
                (0.0, 0.0)
            } else {
                (mult_lower_rank1_with(&diff, p, opts)?.value, mult_upper_hadamard(&diff, p)?)
            };
            Ok(MollifierRow { m, lower, upper })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::hankel_matrix;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn hadamard_examples() {
        assert!((mult_upper_hadamard(&ComplexMatrix::identity(2).unwrap(), p(0.5)).unwrap() - 2.0).abs() < 1e-12);
        assert!((mult_upper_hadamard(&ComplexMatrix::ones(2, 2).unwrap(), p(0.5)).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(mult_upper_hadamard(&ComplexMatrix::zeros(3, 3).unwrap(), p(0.5)).unwrap(), 0.0);
        assert!((mult_upper_hadamard(&ComplexMatrix::ones(2, 2).unwrap(), p(1.0)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hankel_poly_examples() {
        let one = AnalyticSymbol::from_real(&[1.0]).unwrap();
        assert!((mult_upper_hankel_poly(&one, p(0.5)).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(mult_upper_hankel_poly(&AnalyticSymbol::zero(), p(0.5)).unwrap(), 0.0);
        for n in [1usize, 3, 7] {
            let z = AnalyticSymbol::monomial(n, C64::new(1.0, 0.0)).unwrap();
            let pe = p(0.4);
            let bound = mult_upper_hankel_poly(&z, pe).unwrap();
            let truth = ((n + 1) as f64).powf(pe.inv_sharp());
            assert!(bound >= truth && bound / truth <= 2f64.powf(pe.inv_sharp()) + 1e-12);
        }
    }

    #[test]
    fn rank_one_average_reconstructs() {
        let psi = AnalyticSymbol::new(vec![C64::new(1.0, 0.5), C64::new(-0.3, 0.2), C64::new(0.7, 0.0)]).unwrap();
        let a = [C64::new(0.2, 0.1), C64::new(1.0, 0.0), C64::new(-0.5, 0.3)];
        let b = [C64::new(0.4, 0.0), C64::new(0.0, -1.0), C64::new(0.1, 0.1)];
        let terms = hankel_rank_one_average(&psi, &a, &b).unwrap();
        assert_eq!(terms.len(), 6);
        let sum = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc.add(t).unwrap());
        let avg = sum.scale(C64::new(1.0 / 6.0, 0.0)).unwrap();
        let gamma = hankel_matrix(&psi, 3, 3).unwrap();
        let outer = ComplexMatrix::from_fn(3, 3, |r, c| a[r] * b[c]).unwrap();
        let target = crate::linalg::schur_product(&gamma, &outer).unwrap();
        assert!(avg.sub(&target).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn rank_one_average_constant_symbol() {
        let one = AnalyticSymbol::from_real(&[1.0]).unwrap();
        let e = [C64::new(1.0, 0.0)];
        let terms = hankel_rank_one_average(&one, &e, &e).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(terms.iter().all(|t| (t.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15));
        let zero = hankel_rank_one_average(&AnalyticSymbol::zero(), &e, &e).unwrap();
        assert!(zero.iter().all(|t| t.max_abs() == 0.0));
        assert!(hankel_rank_one_average(&one, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], &e).is_err());
    }

    #[test]
    fn block_and_strip_examples() {
        assert_eq!(block_diagonal_norm(&[0.7], p(0.5)).unwrap(), 0.7);
        assert!((block_diagonal_norm(&[1.0, 1.0], p(0.5)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(block_diagonal_norm(&[1.0, 1.0], p(1.0)).unwrap(), 1.0);
        let a = ComplexMatrix::ones(4, 4).unwrap();
        assert!((strip_upper_bound(&a, &[0, 2, 4], &[1.0, 1.0], p(0.5)).unwrap() - 2f64.powf(1.5)).abs() < 1e-12);
        assert!((strip_upper_bound(&a, &[0, 4], &[0.3], p(0.5)).unwrap() - 0.3).abs() < 1e-15);
        assert!(strip_upper_bound(&a, &[0, 3, 2, 4], &[1.0, 1.0, 1.0], p(0.5)).is_err());
    }

    #[test]
    fn gamma_minus_examples() {
        let z = AnalyticSymbol::monomial(1, C64::new(0.0, 3.0)).unwrap();
        assert!((gamma_minus_upper(&z, p(0.5)).unwrap() - 3.0).abs() < 1e-15);
        let zz = AnalyticSymbol::from_real(&[0.0, 1.0, 1.0]).unwrap();
        assert!((gamma_minus_upper(&zz, p(0.5)).unwrap() - 2.0).abs() < 1e-15);
        let lac = AnalyticSymbol::from_sparse(&[(1, C64::new(0.5, 0.0)), (4, C64::new(2.0, 0.0)), (9, C64::new(1.0, 0.0))]).unwrap();
        assert_eq!(gamma_minus_upper(&lac, p(1.0)).unwrap(), 2.0);
        let bad = AnalyticSymbol::from_real(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(gamma_minus_upper(&bad, p(0.5)).is_err());
        // Entry count against the explicit matrix.
        let m = gamma_minus_matrix(&lac, 10).unwrap();
        let direct = crate::linalg::entrywise_lr_norm(&m, 1.0).unwrap();
        assert!((gamma_minus_upper(&lac, p(0.5)).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn corners() {
        let a = ComplexMatrix::from_fn(3, 4, |r, c| C64::new((r * 4 + c) as f64 + 1.0, 0.0)).unwrap();
        assert_eq!(corner_cut(&a, 0, 0).unwrap(), a);
        assert_eq!(corner_cut(&a, 3, 4).unwrap().max_abs(), 0.0);
        assert_eq!(corner_cut(&a, 1, 2).unwrap().get(1, 1), C64::new(0.0, 0.0));
        assert_eq!(q_corner(2).unwrap(), ComplexMatrix::ones(3, 3).unwrap());
    }

    #[test]
    fn coefficient_bound_equality_for_monomials() {
        for n in [0u64, 3, 10] {
            let z = AnalyticSymbol::monomial(n as usize, C64::new(1.0, 0.0)).unwrap();
            let pe = p(0.6);
            let upper = ((n + 1) as f64).powf(pe.inv_sharp());
            let r = coefficient_bound_check(&z, n, n, upper, pe).unwrap();
            assert!(r.ok && (r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-9, "{r:?}");
        }
        let r = coefficient_bound_check(&AnalyticSymbol::zero(), 2, 1, 0.0, p(0.5)).unwrap();
        assert!(r.ok && r.lhs == 0.0 && r.rhs == 0.0);
        assert!(coefficient_bound_check(&AnalyticSymbol::zero(), 1, 2, 0.0, p(0.5)).is_err());
    }

    #[test]
    fn hankel_symbol_roundtrip() {
        let psi = AnalyticSymbol::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let h = hankel_matrix(&psi, 2, 3).unwrap();
        assert_eq!(hankel_symbol_of(&h).unwrap(), psi);
        assert!(hankel_symbol_of(&ComplexMatrix::identity(3).unwrap()).is_none());
    }

    #[test]
    fn mollifier_vanishes_on_covered_support() {
        let psi = AnalyticSymbol::from_real(&[1.0, -2.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let a = hankel_matrix(&psi, 9, 9).unwrap();
        let rows = mollifier_convergence(&a, &SmoothCutoffSpec::default(), &[64, 4], p(0.5), &AscentOptions::new(3, 1)).unwrap();
        assert_eq!(rows[0].upper, 0.0);
        assert!(rows[1].upper > 0.0 && rows[1].lower <= rows[1].upper * (1.0 + 1e-9));
    }
}

//! Dirichlet-type kernels.

use super::{AnalyticSymbol, TrigPolynomial};
use crate::error::{input, Result};
use crate::linalg::C64;

/// `D_n = Σ_{|k| <= n} z^k`.
pub fn dirichlet_kernel(n: u64) -> Result<TrigPolynomial> {
    if n == 0 || n > (1 << 40) {
        return input(format!("Dirichlet kernel order must lie in [1, 2^40], got {n}"));
    }
    let d = n as i64;
    TrigPolynomial::from_fn(-d, d, |_| C64::new(1.0, 0.0))
}

/// `Q_n = D_n^2 / (2n + 1)`, whose coefficients are `(2n + 1 - |k|) / (2n + 1)`.
pub fn fejer_square(n: u64) -> Result<TrigPolynomial> {
    if n == 0 || n > (1 << 40) {
        return input(format!("kernel order must lie in [1, 2^40], got {n}"));
    }
    let w = 2 * n as i64 + 1;
    TrigPolynomial::from_fn(-(w - 1), w - 1, |k| C64::new((w - k.abs()) as f64 / w as f64, 0.0))
}

/// Coefficients of `D_m^{power}` shifted to start at index 0, in exact arithmetic.
fn dirichlet_power(m: u64, power: u32) -> Result<Vec<u128>> {
    let width = 2 * m as usize + 1;
    let mut acc: Vec<u128> = vec![1];
    for _ in 0..power {
        // Convolution with a run of `width` ones is a sliding-window sum.
        let mut next = vec![0u128; acc.len() + width - 1];
        let mut window: u128 = 0;
        for (i, slot) in next.iter_mut().enumerate() {
            if i < acc.len() {
                window = window.checked_add(acc[i]).ok_or_else(overflow)?;
            }
            if i >= width {
                window -= acc[i - width];
            }
            *slot = window;
        }
        acc = next;
    }
    Ok(acc)
}

fn overflow() -> crate::Error {
    crate::Error::Input("Dirichlet power coefficients overflow 128-bit integers".into())
}

/// `Φ_n^{(N)} = z^{4^n} D_{2^n}^{N+1} / (2^{n+1} + 1)^N` as an analytic symbol.
pub fn phi_witness(n: u32, big_n: u32) -> Result<AnalyticSymbol> {
    if n == 0 || big_n == 0 {
        return input("phi witness needs n >= 1 and N >= 1");
    }
    if n > 12 {
        return input(format!("phi witness supports n <= 12, got {n}"));
    }
    let m = 1u64 << n;
    let shift = 1u64 << (2 * n);
    let lowest = shift as i64 - (big_n as i64 + 1) * m as i64;
    if lowest < 0 {
        return input(format!(
            "z^{shift} D_{m}^{} has negative frequencies; require N + 1 <= 2^n",
            big_n + 1
        ));
    }
    let numerators = dirichlet_power(m, big_n + 1)?;
    let denom = ((2 * m + 1) as f64).powi(big_n as i32);
    let coeffs: Vec<C64> = numerators.iter().map(|&c| C64::new(c as f64 / denom, 0.0)).collect();
    AnalyticSymbol::with_offset(lowest as usize, coeffs)
}

/// `ζ ↦ f(e^{iθ} ζ)`: coefficient `k` picks up `e^{ikθ}`.
pub fn rotate(psi: &AnalyticSymbol, theta: f64) -> AnalyticSymbol {
    psi.map(|k, c| c * C64::from_polar(1.0, theta * k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Spectrum;

    #[test]
    fn dirichlet_one() {
        let d = dirichlet_kernel(1).unwrap();
        assert_eq!(d.support(), Some((-1, 1)));
        for k in -1..=1 {
            assert_eq!(d.coeff(k), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn fejer_square_is_normalised_square() {
        let n = 5;
        let d = dirichlet_kernel(n).unwrap();
        let q = fejer_square(n).unwrap();
        let sq = d.mul(&d).scale(C64::new(1.0 / (2 * n + 1) as f64, 0.0));
        for k in -12..=12 {
            assert!((q.coeff(k) - sq.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_matches_float_convolution() {
        let phi = phi_witness(3, 2).unwrap();
        let d = dirichlet_kernel(8).unwrap();
        let cube = d.mul(&d).mul(&d).shift(64).scale(C64::new(1.0 / 17.0_f64.powi(2), 0.0));
        for k in 0..=100 {
            assert!((phi.coeff(k) - cube.coeff(k)).norm() < 1e-13, "k={k}");
        }
        assert_eq!(phi.support(), Some((64 - 24, 64 + 24)));
    }

    #[test]
    fn phi_large_order_is_exact_and_cheap() {
        let phi = phi_witness(12, 1).unwrap();
        assert_eq!(phi.support(), Some((4096 * 4096 - 8192, 4096 * 4096 + 8192)));
        // Centre coefficient of D_m^2 is 2m + 1, so Φ peaks at one.
        assert!((phi.coeff(4096 * 4096) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi_overflow_is_an_input_error() {
        assert!(phi_witness(12, 11).is_err());
    }
}

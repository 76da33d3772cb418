//! `L^p` quasi-norms on the circle by Riemann means on FFT grids.

use rustfft::FftPlanner;

use super::Spectrum;
use crate::error::{input, Result};
use crate::linalg::{compensated_sum, C64};

pub const DEFAULT_OVERSAMPLE: usize = 8;
const RELATIVE_CHANGE: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 4;

/// Result of an adaptive `L^p` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpNorm {
    pub value: f64,
    /// Grid size used for `value`.
    pub grid: usize,
    pub converged: bool,
    /// Value on the previous (half-size) grid.
    pub previous: f64,
}

/// Values of `f(e^{2πik/M})` for `k < M`, up to a unimodular factor.
///
/// The factor is `e^{2πi·lo·k/M}` where `lo` is the lowest stored index; it
/// does not affect moduli.
pub fn sample_on_grid<S: Spectrum + ?Sized>(f: &S, grid: usize) -> Result<Vec<C64>> {
    let Some((lo, hi)) = f.support() else {
        return Ok(vec![C64::new(0.0, 0.0); grid]);
    };
    let span = (hi - lo) as usize + 1;
    if grid < span {
        return input(format!("grid of {grid} points cannot resolve {span} frequencies"));
    }
    let mut buf = vec![C64::new(0.0, 0.0); grid];
    for k in lo..=hi {
        buf[(k - lo) as usize] = f.coeff(k);
    }
    FftPlanner::new().plan_fft_inverse(grid).process(&mut buf);
    Ok(buf)
}

/// Riemann mean `((1/M) Σ |f|^p)^{1/p}` on a fixed grid of `M` points.
pub fn lp_norm_on_grid<S: Spectrum + ?Sized>(f: &S, p: f64, grid: usize) -> Result<f64> {
    if !(p > 0.0) {
        return input(format!("L^p exponent must be positive, got {p}"));
    }
    let values = sample_on_grid(f, grid)?;
    Ok(mean_power(&values, p))
}

fn mean_power(values: &[C64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    }
    let scale = values.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    let mean = compensated_sum(values.iter().map(|z| (z.norm() / scale).powf(p))) / values.len() as f64;
    scale * mean.powf(1.0 / p)
}

/// `‖f‖_{L^p}` with grid doubling until the relative change drops below `1e-6`.
///
/// The starting grid has `oversample × (span + 1)` points, where `span` is the
/// width of the frequency support; this equals the degree for analytic symbols
/// starting at zero and is invariant under modulation. After four doublings
/// without convergence the last value is returned with `converged = false`.
pub fn lp_norm<S: Spectrum + ?Sized>(f: &S, p: f64, oversample: usize) -> Result<LpNorm> {
    if !(p > 0.0) {
        return input(format!("L^p exponent must be positive, got {p}"));
    }
    if oversample < 4 {
        return input(format!("oversample must be at least 4, got {oversample}"));
    }
    let Some((lo, hi)) = f.support() else {
        return Ok(LpNorm {
            value: 0.0,
            grid: oversample,
            converged: true,
            previous: 0.0,
        });
    };
    let mut grid = oversample * ((hi - lo) as usize + 1);
    let mut previous = lp_norm_on_grid(f, p, grid)?;
    let mut value = previous;
    for _ in 0..MAX_DOUBLINGS {
        grid *= 2;
        let next = lp_norm_on_grid(f, p, grid)?;
        previous = value;
        value = next;
        if (value - previous).abs() <= RELATIVE_CHANGE * value.abs() {
            return Ok(LpNorm {
                value,
                grid,
                converged: true,
                previous,
            });
        }
    }
    log::warn!(
        "L^{p} quadrature did not settle after {MAX_DOUBLINGS} doublings: {previous:.10e} then {value:.10e} on {grid} points"
    );
    Ok(LpNorm {
        value,
        grid,
        converged: false,
        previous,
    })
}

/// Maximum modulus on a grid of `oversample × (span + 1)` points.
pub fn sup_norm<S: Spectrum + ?Sized>(f: &S, oversample: usize) -> Result<f64> {
    let Some((lo, hi)) = f.support() else {
        return Ok(0.0);
    };
    let grid = oversample.max(4) * ((hi - lo) as usize + 1);
    lp_norm_on_grid(f, f64::INFINITY, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{dirichlet_kernel, AnalyticSymbol};

    #[test]
    fn monomial_has_unit_norm() {
        let f = AnalyticSymbol::monomial(7, C64::new(0.0, 1.0)).unwrap();
        for p in [0.3, 1.0, 2.0] {
            assert!((lp_norm(&f, p, 8).unwrap().value - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dirichlet_two_norm() {
        for n in [1, 4, 17] {
            let v = lp_norm(&dirichlet_kernel(n).unwrap(), 2.0, 8).unwrap();
            assert!((v.value - ((2 * n + 1) as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn one_plus_z_l1() {
        let f = AnalyticSymbol::from_real(&[1.0, 1.0]).unwrap();
        let v = lp_norm(&f, 1.0, 64).unwrap();
        assert!(v.converged);
        assert!((v.value - 4.0 / std::f64::consts::PI).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn dirichlet_quarter_lower_bound() {
        let d4 = dirichlet_kernel(4).unwrap();
        let integral = lp_norm(&d4, 0.5, 8).unwrap().value.powf(0.5);
        assert!(integral >= 4.0_f64.powf(-0.5) / 3.0);
    }

    #[test]
    fn rejects_small_oversample() {
        assert!(lp_norm(&dirichlet_kernel(1).unwrap(), 1.0, 2).is_err());
    }
}

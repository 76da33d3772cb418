//! Smooth cutoffs and the polynomials sampled from them.

use super::{AnalyticSymbol, Spectrum, TrigPolynomial};
use crate::error::{input, Result};
use crate::linalg::C64;

fn sigma(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// C^∞ step rising from 0 at `t <= 0` to 1 at `t >= 1`, with `B(t) + B(1-t) = 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = sigma(t);
        a / (a + sigma(1.0 - t))
    }
}

/// Dyadic partition function supported on `[1/2, 2]` with `v(1) = 1`.
pub fn v_partition(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let u = x.log2();
    if (-1.0..=0.0).contains(&u) {
        smooth_step(u + 1.0)
    } else if u > 0.0 && u <= 1.0 {
        smooth_step(1.0 - u)
    } else {
        0.0
    }
}

/// Even plateau function: 1 on `[-1, 1]`, 0 outside `[-2, 2]`.
pub fn omega(s: f64) -> f64 {
    let a = s.abs();
    if a <= 1.0 {
        1.0
    } else if a < 2.0 {
        smooth_step(2.0 - a)
    } else {
        0.0
    }
}

/// A concrete smooth cutoff function on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothCutoffSpec {
    /// The dyadic partition function `v`.
    VPartition,
    /// `s ↦ ω(dilation · s)`.
    OmegaPlateau { dilation: f64 },
    /// Piecewise-linear interpolation of samples, constant beyond the end points.
    CustomSamples { xs: Vec<f64>, values: Vec<f64> },
}

impl Default for SmoothCutoffSpec {
    /// `ω(2s)`, the plateau used for sampled polynomials.
    fn default() -> Self {
        SmoothCutoffSpec::OmegaPlateau { dilation: 2.0 }
    }
}

impl SmoothCutoffSpec {
    pub fn custom(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return input("custom cutoff needs at least two (x, value) samples of equal length");
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return input("custom cutoff abscissae must be strictly increasing");
        }
        if xs.iter().chain(&values).any(|v| !v.is_finite()) {
            return input("custom cutoff samples must be finite");
        }
        Ok(SmoothCutoffSpec::CustomSamples { xs, values })
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            SmoothCutoffSpec::VPartition => v_partition(s),
            SmoothCutoffSpec::OmegaPlateau { dilation } => omega(dilation * s),
            SmoothCutoffSpec::CustomSamples { xs, values } => {
                let n = xs.len();
                if s <= xs[0] {
                    return values[0];
                }
                if s >= xs[n - 1] {
                    return values[n - 1];
                }
                let i = xs.partition_point(|&x| x <= s) - 1;
                let w = (s - xs[i]) / (xs[i + 1] - xs[i]);
                values[i] * (1.0 - w) + values[i + 1] * w
            }
        }
    }

    /// Radius `S` with support in `[-S, S]`; `None` if the support is unbounded.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            SmoothCutoffSpec::VPartition => Some(2.0),
            SmoothCutoffSpec::OmegaPlateau { dilation } => {
                if *dilation > 0.0 && dilation.is_finite() {
                    Some(2.0 / dilation)
                } else {
                    None
                }
            }
            SmoothCutoffSpec::CustomSamples { xs, values } => {
                if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
                    None
                } else {
                    Some(xs[0].abs().max(xs[xs.len() - 1].abs()))
                }
            }
        }
    }

    /// Checks that the spec is the dyadic partition: nonnegative, supported in
    /// `[1/2, 2]`, and summing to one over dyadic dilations on a dense grid.
    pub fn validate_partition(&self) -> Result<()> {
        let grid = 4096;
        for i in 0..=grid {
            let x = 1.0 + i as f64 / grid as f64 * 1023.0;
            let total: f64 = (0..12).map(|n| self.eval(x / f64::powi(2.0, n))).sum();
            if (total - 1.0).abs() > 1e-10 {
                return input(format!("cutoff is not a dyadic partition: sum at x={x} is {total}"));
            }
        }
        for i in 0..=grid {
            let x = -4.0 + 8.0 * i as f64 / grid as f64;
            let v = self.eval(x);
            if v < 0.0 || (v != 0.0 && !(0.5..=2.0).contains(&x)) {
                return input(format!("cutoff value {v} at x={x} violates support [1/2, 2]"));
            }
        }
        Ok(())
    }

    /// Checks the plateau properties: even, values in `[0, 1]`, one near zero.
    pub fn validate_plateau(&self) -> Result<()> {
        let radius = self
            .support_radius()
            .ok_or_else(|| crate::Error::Input("plateau cutoff must have bounded support".into()))?;
        let grid = 4096;
        for i in 0..=grid {
            let x = radius * 1.5 * i as f64 / grid as f64;
            let (a, b) = (self.eval(x), self.eval(-x));
            if (a - b).abs() > 1e-12 || !(0.0..=1.0).contains(&a) {
                return input(format!("cutoff is not an even [0,1]-valued plateau at x={x}"));
            }
        }
        if self.eval(0.0) != 1.0 {
            return input("plateau cutoff must equal one at the origin");
        }
        Ok(())
    }
}

/// `F_(m) = Σ_k F(k/m) z^k` over `|k| <= S m`.
pub fn sampled_polynomial(f: &SmoothCutoffSpec, m: u64) -> Result<TrigPolynomial> {
    if m == 0 {
        return input("sampling density m must be at least 1");
    }
    let radius = f
        .support_radius()
        .ok_or_else(|| crate::Error::Input("cutoff with unbounded support cannot be sampled".into()))?;
    let d = (radius * m as f64).floor() as i64;
    TrigPolynomial::from_fn(-d, d, |k| C64::new(f.eval(k as f64 / m as f64), 0.0))
}

/// Littlewood–Paley block `n` of a symbol.
///
/// Block 0 keeps indices `|k| <= 1`; block `n >= 1` multiplies coefficient `k`
/// by `v(k / 2^n)`; block `-n` uses `v(-k / 2^n)`.
pub fn dyadic_block<S: Spectrum + ?Sized>(psi: &S, n: i64, v: &SmoothCutoffSpec) -> Result<TrigPolynomial> {
    if *v != SmoothCutoffSpec::VPartition {
        v.validate_partition()?;
    }
    if n.unsigned_abs() > 62 {
        return input(format!("dyadic block index {n} is out of range"));
    }
    let trig = psi.to_trig();
    if n == 0 {
        return Ok(trig.map(|k, c| if k.abs() <= 1 { c } else { C64::new(0.0, 0.0) }));
    }
    let scale = f64::powi(2.0, n.unsigned_abs() as i32);
    let sign = n.signum() as f64;
    Ok(trig.map(|k, c| {
        let w = v.eval(sign * k as f64 / scale);
        if w == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            c * w
        }
    }))
}

/// Block indices that can be nonzero for the given symbol, in increasing order.
pub fn dyadic_range<S: Spectrum + ?Sized>(psi: &S) -> Vec<i64> {
    let Some((lo, hi)) = psi.support() else {
        return vec![];
    };
    let top = |k: i64| -> i64 {
        if k <= 1 {
            0
        } else {
            // v(k/2^n) can be nonzero only for 2^{n-1} < k < 2^{n+1}.
            64 - (k as u64 - 1).leading_zeros() as i64
        }
    };
    let neg = if lo < -1 { top(-lo) } else { 0 };
    let pos = if hi > 1 { top(hi) } else { 0 };
    (-neg..=pos).collect()
}

/// `Ω_n = Σ_k ω(k/2^n) z^k`.
pub fn omega_kernel(n: u32) -> Result<TrigPolynomial> {
    if n > 40 {
        return input(format!("Ω_{n} is too large to materialise"));
    }
    let scale = f64::powi(2.0, n as i32);
    let d = 2_i64 << n;
    TrigPolynomial::from_fn(-d, d, |k| C64::new(omega(k as f64 / scale), 0.0))
}

/// `R_n = Σ_{k>=0} r(k/2^n) z^k` for a cutoff `r` supported in `[1/2, 2]`.
pub fn r_kernel(n: u32, r: &SmoothCutoffSpec) -> Result<AnalyticSymbol> {
    if n > 40 {
        return input(format!("R_{n} is too large to materialise"));
    }
    let scale = f64::powi(2.0, n as i32);
    let d = 2_usize << n;
    AnalyticSymbol::new((0..=d).map(|k| C64::new(r.eval(k as f64 / scale), 0.0)).collect())
}

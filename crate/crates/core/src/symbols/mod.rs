//! Coefficient sequences on the circle and the matrices built from them.

mod cutoff;
mod kernels;
mod lacunary;
mod quadrature;

pub use cutoff::{
    dyadic_block, dyadic_range, omega, omega_kernel, r_kernel, sampled_polynomial, smooth_step, v_partition,
    SmoothCutoffSpec,
};
pub use kernels::{dirichlet_kernel, fejer_square, phi_witness, rotate};
pub use lacunary::{lacunary_cover, GapProfile};
pub use quadrature::{lp_norm, lp_norm_on_grid, sample_on_grid, sup_norm, LpNorm, DEFAULT_OVERSAMPLE};

use std::collections::BTreeMap;

use crate::error::{input, Error, Result};
use crate::linalg::{parse_reals, ComplexMatrix, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Anything with finitely many Fourier coefficients on a contiguous window.
pub trait Spectrum {
    /// Index of the first stored coefficient.
    fn offset(&self) -> i64;
    /// Stored coefficients starting at `offset()`.
    fn stored(&self) -> &[C64];

    fn coeff(&self, k: i64) -> C64 {
        let i = k - self.offset();
        if i < 0 {
            return ZERO;
        }
        self.stored().get(i as usize).copied().unwrap_or(ZERO)
    }

    /// Smallest and largest index carrying a nonzero coefficient.
    fn support(&self) -> Option<(i64, i64)> {
        let s = self.stored();
        let first = s.iter().position(|z| *z != ZERO)?;
        let last = s.iter().rposition(|z| *z != ZERO)?;
        Some((self.offset() + first as i64, self.offset() + last as i64))
    }

    fn to_trig(&self) -> TrigPolynomial {
        TrigPolynomial {
            offset: self.offset(),
            coeffs: self.stored().to_vec(),
        }
    }
}

/// Analytic polynomial `Σ_{k≥0} c_k z^k`.
///
/// Leading zeros can be stored implicitly through an offset so that sparse
/// high-frequency symbols stay cheap.
#[derive(Debug, Clone)]
pub struct AnalyticSymbol {
    offset: usize,
    coeffs: Vec<C64>,
}

impl PartialEq for AnalyticSymbol {
    fn eq(&self, other: &Self) -> bool {
        let len = self.len().max(other.len());
        (0..len as i64).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl AnalyticSymbol {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        Self::with_offset(0, coeffs)
    }

    /// Coefficients for indices `offset, offset + 1, ...`; lower ones are zero.
    pub fn with_offset(offset: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return input("symbol coefficients must be finite");
        }
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Ok(Self { offset, coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            offset: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn monomial(k: usize, c: C64) -> Result<Self> {
        Self::with_offset(k, vec![c])
    }

    /// From `(index, coefficient)` pairs; missing indices are zero.
    pub fn from_sparse(terms: &[(usize, C64)]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![ZERO; hi - lo + 1];
        for &(k, c) in terms {
            coeffs[k - lo] += c;
        }
        Self::with_offset(lo, coeffs)
    }

    fn len(&self) -> usize {
        self.offset + self.coeffs.len()
    }

    /// Stored degree, including explicit zero padding.
    pub fn degree(&self) -> usize {
        self.len() - 1
    }

    /// Index of the last nonzero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|z| *z != ZERO).map(|i| i + self.offset)
    }

    /// Dense coefficients `c_0, ..., c_degree`.
    pub fn to_dense(&self) -> Vec<C64> {
        (0..self.len() as i64).map(|k| self.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((lo, hi)) => Self {
                offset: lo as usize,
                coeffs: (lo..=hi).map(|k| self.coeff(k)).collect(),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.offset.min(other.offset);
        let hi = self.len().max(other.len());
        let coeffs = (lo..hi)
            .map(|k| self.coeff(k as i64) + other.coeff(k as i64))
            .collect();
        Self { offset: lo, coeffs }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(usize, C64) -> C64) -> Self {
        Self {
            offset: self.offset,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(self.offset + i, c))
                .collect(),
        }
    }

    /// Nonzero coefficient indices in increasing order.
    pub fn frequencies(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(k, _)| k + self.offset)
            .collect()
    }

    /// Parses `k re im` lines; `k` must be nonnegative.
    pub fn parse_text(text: &str) -> Result<Self> {
        let terms = parse_symbol_lines(text)?;
        if let Some((&k, _)) = terms.iter().next() {
            if k < 0 {
                return input(format!("analytic symbol has negative index {k}"));
            }
        }
        let sparse: Vec<(usize, C64)> = terms.into_iter().map(|(k, c)| (k as usize, c)).collect();
        Self::from_sparse(&sparse)
    }

    pub fn to_text(&self) -> String {
        symbol_text(self.offset as i64, &self.coeffs)
    }
}

impl Spectrum for AnalyticSymbol {
    fn offset(&self) -> i64 {
        self.offset as i64
    }
    fn stored(&self) -> &[C64] {
        &self.coeffs
    }
}

/// Trigonometric polynomial `Σ_k c_k z^k` on a finite window of integers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    offset: i64,
    coeffs: Vec<C64>,
}

impl TrigPolynomial {
    /// Coefficients for indices `offset, offset + 1, ...`.
    pub fn new(offset: i64, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return input("trigonometric coefficients must be finite");
        }
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Ok(Self { offset, coeffs })
    }

    /// Coefficients on the symmetric window `[-d, d]` given as `2d + 1` values.
    pub fn symmetric(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return input("symmetric window needs an odd number of coefficients");
        }
        let d = (coeffs.len() / 2) as i64;
        Self::new(-d, coeffs)
    }

    pub fn zero() -> Self {
        Self {
            offset: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> C64) -> Result<Self> {
        if hi < lo {
            return Ok(Self::zero());
        }
        Self::new(lo, (lo..=hi).map(&mut f).collect())
    }

    pub fn from_sparse(terms: &[(i64, C64)]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![ZERO; (hi - lo + 1) as usize];
        for &(k, c) in terms {
            coeffs[(k - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `max |k|` over nonzero coefficients, zero for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.support().map_or(0, |(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// True when `c_{-k} = conj(c_k)` to the given tolerance.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let d = self.degree() as i64;
        (0..=d).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }

    pub fn map(&self, mut f: impl FnMut(i64, C64) -> C64) -> Self {
        Self {
            offset: self.offset,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(self.offset + i as i64, c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.coeffs.len() as i64).max(other.offset + other.coeffs.len() as i64) - 1;
        Self {
            offset: lo,
            coeffs: (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|_, z| z * c)
    }

    /// Product of polynomials (convolution of coefficients).
    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self {
            offset: self.offset + other.offset,
            coeffs,
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            offset: self.offset + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Value at `e^{it}`.
    pub fn eval_angle(&self, t: f64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * C64::from_polar(1.0, t * (self.offset + i as i64) as f64))
            .sum()
    }

    /// Coefficients with nonnegative index as an analytic symbol.
    pub fn analytic_part(&self) -> AnalyticSymbol {
        let hi = self.offset + self.coeffs.len() as i64 - 1;
        if hi < 0 {
            return AnalyticSymbol::zero();
        }
        let lo = self.offset.max(0);
        AnalyticSymbol {
            offset: lo as usize,
            coeffs: (lo..=hi).map(|k| self.coeff(k)).collect(),
        }
    }

    /// Trims zero coefficients at both ends.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((lo, hi)) => Self {
                offset: lo,
                coeffs: (lo..=hi).map(|k| self.coeff(k)).collect(),
            },
        }
    }

    /// `Σ |c_k|^2`, the squared `L^2` norm on the circle.
    pub fn energy(&self) -> f64 {
        crate::linalg::compensated_sum(self.coeffs.iter().map(|z| z.norm_sqr()))
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let terms: Vec<(i64, C64)> = parse_symbol_lines(text)?.into_iter().collect();
        Self::from_sparse(&terms)
    }

    pub fn to_text(&self) -> String {
        symbol_text(self.offset, &self.coeffs)
    }
}

impl Spectrum for TrigPolynomial {
    fn offset(&self) -> i64 {
        self.offset
    }
    fn stored(&self) -> &[C64] {
        &self.coeffs
    }
}

impl From<&AnalyticSymbol> for TrigPolynomial {
    fn from(s: &AnalyticSymbol) -> Self {
        s.to_trig()
    }
}

fn parse_symbol_lines(text: &str) -> Result<BTreeMap<i64, C64>> {
    let mut terms = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected `k re im`, got `{l}`"),
            });
        }
        let k: i64 = toks[0].parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{}` is not an integer index", toks[0]),
        })?;
        let v = parse_reals(&toks[1..].join(" "), line)?;
        if terms.insert(k, C64::new(v[0], v[1])).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("index {k} appears twice"),
            });
        }
    }
    Ok(terms)
}

fn symbol_text(offset: i64, coeffs: &[C64]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if *c != ZERO {
            out.push_str(&format!("{} {:.16e} {:.16e}\n", offset + i as i64, c.re, c.im));
        }
    }
    out
}

/// `rows x cols` window of the Hankel matrix `{ψ̂(j+k)}`.
pub fn hankel_matrix<S: Spectrum + ?Sized>(psi: &S, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(rows, cols, |j, k| psi.coeff((j + k) as i64))
}

/// `n x n` window of the Toeplitz matrix `{t_{j-k}}`.
pub fn toeplitz_matrix<S: Spectrum + ?Sized>(t: &S, n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, n, |j, k| t.coeff(j as i64 - k as i64))
}

/// Splits the `n x n` Hankel window into its strictly-below-diagonal part and the rest.
pub fn split_hankel_lower<S: Spectrum + ?Sized>(psi: &S, n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let lower = ComplexMatrix::from_fn(n, n, |j, k| if j > k { psi.coeff((j + k) as i64) } else { ZERO })?;
    let upper = ComplexMatrix::from_fn(n, n, |j, k| if j > k { ZERO } else { psi.coeff((j + k) as i64) })?;
    Ok((lower, upper))
}

/// Drops the first `k` coefficients: `(S*)^k ψ`.
pub fn backward_shift(psi: &AnalyticSymbol, k: usize) -> AnalyticSymbol {
    if k > psi.degree() {
        return AnalyticSymbol::zero();
    }
    let kept: Vec<(usize, C64)> = (k..=psi.degree())
        .map(|j| (j - k, psi.coeff(j as i64)))
        .filter(|t| t.1 != ZERO)
        .collect();
    AnalyticSymbol::from_sparse(&kept).expect("coefficients already validated")
}

/// The symbol with coefficients `ψ̂(jN + s)`.
pub fn arithmetic_restriction(psi: &AnalyticSymbol, step: usize, start: usize) -> Result<AnalyticSymbol> {
    if step == 0 || start >= step {
        return input(format!("restriction needs step >= 1 and 0 <= start < step, got N={step}, s={start}"));
    }
    let coeffs: Vec<C64> = (start..=psi.degree()).step_by(step).map(|k| psi.coeff(k as i64)).collect();
    AnalyticSymbol::new(coeffs)
}

//! Dense complex matrices, singular values and Schatten quasi-norms.
//!
//! Small matrices go through a one-sided Jacobi SVD, which keeps tiny singular
//! values accurate relative to themselves. Larger ones use the bidiagonal SVD
//! from `nalgebra`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{input, Error, Result};

pub type C64 = Complex64;

/// Singular values below this fraction of the largest one are treated as zero
/// before any power is taken.
pub const SINGULAR_FLOOR: f64 = 1e-14;

/// Matrices whose smaller dimension is at most this size use the Jacobi SVD.
const JACOBI_MAX_DIM: usize = 3;

/// Conjugate exponent `p / (1 - p)`, infinite at `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sharp {
    Finite(f64),
    Infinite,
}

impl Sharp {
    /// `(Σ x^q)^{1/q}`, or `max x` for the infinite exponent.
    pub fn aggregate(&self, values: &[f64]) -> f64 {
        match *self {
            Sharp::Finite(q) => lq_aggregate(values, q),
            Sharp::Infinite => values.iter().fold(0.0_f64, |m, &v| m.max(v.abs())),
        }
    }

    /// `1 / q`, zero for the infinite exponent.
    pub fn reciprocal(&self) -> f64 {
        match *self {
            Sharp::Finite(q) => 1.0 / q,
            Sharp::Infinite => 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Sharp::Finite(q) => q,
            Sharp::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Sharp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sharp::Finite(q) => write!(f, "{q}"),
            Sharp::Infinite => write!(f, "inf"),
        }
    }
}

/// A validated exponent `p` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return input(format!("exponent p must lie in (0, 1], got {p}"));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_one(&self) -> bool {
        self.p == 1.0
    }

    pub fn sharp(&self) -> Sharp {
        if self.is_one() {
            Sharp::Infinite
        } else {
            Sharp::Finite(self.p / (1.0 - self.p))
        }
    }

    /// `1/p - 1`, which equals `1 / p_sharp`.
    pub fn inv_sharp(&self) -> f64 {
        1.0 / self.p - 1.0
    }

    /// `2p / (2 - p)`.
    pub fn flat(&self) -> f64 {
        2.0 * self.p / (2.0 - self.p)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Neumaier-compensated sum in the order given.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `(Σ |x|^q)^{1/q}` summed in descending order of magnitude.
pub fn lq_aggregate(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    }
    let mut powered: Vec<f64> = values.iter().map(|v| v.abs().powf(q)).collect();
    powered.sort_by(|a, b| b.total_cmp(a));
    compensated_sum(powered).powf(1.0 / q)
}

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows(), self.cols())
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return input(format!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        if entries.len() != rows * cols {
            return input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return input(format!("non-finite entry at row {}, col {}", pos / cols, pos % cols));
        }
        Ok(Self {
            data: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Builds a matrix from a closure. Panics on empty shapes; non-finite values
    /// are rejected at construction.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return input(format!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        let data = DMatrix::from_fn(rows, cols, f);
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return input("non-finite entry in generated matrix");
        }
        Ok(Self { data })
    }

    pub fn from_dmatrix(data: DMatrix<C64>) -> Result<Self> {
        Self::from_fn(data.nrows(), data.ncols(), |r, c| data[(r, c)])
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |r, c| C64::new(if r == c { 1.0 } else { 0.0 }, 0.0))
    }

    /// The `(m+1) x (m+1)` all-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| C64::new(1.0, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[(r, c)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.data[(r, c)]);
            }
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(usize, usize, C64) -> C64) -> Result<Self> {
        Self::from_fn(self.rows(), self.cols(), |r, c| f(r, c, self.data[(r, c)]))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, factor: C64) -> Result<Self> {
        self.map(|_, _, z| z * factor)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Ok(Self {
            data: &self.data * &other.data,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    /// Copy of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<Self> {
        if r0 >= r1 || c0 >= c1 || r1 > self.rows() || c1 > self.cols() {
            return input(format!(
                "block [{r0},{r1})x[{c0},{c1}) is empty or outside a {}x{} matrix",
                self.rows(),
                self.cols()
            ));
        }
        Self::from_fn(r1 - r0, c1 - c0, |r, c| self.data[(r0 + r, c0 + c)])
    }

    /// Copy of the listed rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&r| r >= self.rows()) || cols.iter().any(|&c| c >= self.cols()) {
            return input("selected index outside the matrix");
        }
        Self::from_fn(rows.len(), cols.len(), |r, c| self.data[(rows[r], cols[c])])
    }

    /// `diag(y) A diag(x)`: rows scaled by `y`, columns by `x`.
    pub fn scale_rows_cols(&self, y: &[f64], x: &[f64]) -> Result<Self> {
        if y.len() != self.rows() || x.len() != self.cols() {
            return input("scaling vectors do not match the matrix shape");
        }
        self.map(|r, c, z| z * (y[r] * x[c]))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        lq_aggregate(&self.data.iter().map(|z| z.norm()).collect::<Vec<_>>(), 2.0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return input(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Ok(())
    }

    /// Text form: `rows cols`, then one `re im` line per entry in row-major order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows(), self.cols());
        for z in self.row_major() {
            out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `rows cols` header".into(),
        })?;
        let dims = parse_reals(header, line)?;
        if dims.len() != 2 || dims.iter().any(|d| d.fract() != 0.0 || *d < 1.0) {
            return Err(Error::Parse {
                line,
                message: format!("expected two positive integers, got `{header}`"),
            });
        }
        let (rows, cols) = (dims[0] as usize, dims[1] as usize);
        let mut entries = Vec::with_capacity(rows * cols);
        for (line, text) in lines {
            let v = parse_reals(text, line)?;
            if v.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `re im`, got `{text}`"),
                });
            }
            entries.push(C64::new(v[0], v[1]));
        }
        Self::from_row_major(rows, cols, &entries)
    }
}

impl FromStr for ComplexMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

pub(crate) fn parse_reals(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("`{tok}` is not a number"),
            })
        })
        .collect()
}

/// Schatten quasi-norm together with the floor that was applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenValue {
    pub value: f64,
    pub p: f64,
    /// Absolute threshold below which singular values were dropped.
    pub floor: f64,
    /// Number of singular values that fell under the floor.
    pub floored: usize,
}

/// Singular values of a matrix with at most three rows and three columns,
/// given row-major, in descending order. Unused slots are zero.
pub fn tiny_singular_values(rows: usize, cols: usize, entries: &[C64]) -> [f64; 3] {
    debug_assert!(rows <= 3 && cols <= 3 && entries.len() == rows * cols);
    let mut out = [0.0; 3];
    if rows == 0 || cols == 0 {
        return out;
    }
    if rows == 1 || cols == 1 {
        out[0] = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        return out;
    }
    // Elementary symmetric functions of the squared singular values, taken
    // from minors so that small values keep absolute accuracy ~ eps * s_max.
    let at = |r: usize, c: usize| entries[r * cols + c];
    let e1: f64 = entries.iter().map(|z| z.norm_sqr()).sum();
    let mut e2 = 0.0;
    for r1 in 0..rows {
        for r2 in (r1 + 1)..rows {
            for c1 in 0..cols {
                for c2 in (c1 + 1)..cols {
                    e2 += (at(r1, c1) * at(r2, c2) - at(r1, c2) * at(r2, c1)).norm_sqr();
                }
            }
        }
    }
    if rows.min(cols) == 2 {
        let disc = (e1 * e1 - 4.0 * e2).max(0.0).sqrt();
        let l1 = 0.5 * (e1 + disc);
        out[0] = l1.sqrt();
        out[1] = if l1 > 0.0 { (e2 / l1).min(l1).sqrt() } else { 0.0 };
        return out;
    }
    let det = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1))
        - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
        + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    let e3 = det.norm_sqr();
    if e1 == 0.0 {
        return out;
    }
    // Largest eigenvalue of the 3x3 Gram matrix by the trigonometric formula,
    // which is well conditioned at repeated roots.
    let mut g = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| at(k, i).conj() * at(k, j)).sum();
        }
    }
    let q = (g[0][0].re + g[1][1].re + g[2][2].re) / 3.0;
    let off = g[0][1].norm_sqr() + g[0][2].norm_sqr() + g[1][2].norm_sqr();
    let diag = (g[0][0].re - q).powi(2) + (g[1][1].re - q).powi(2) + (g[2][2].re - q).powi(2);
    let pp = ((diag + 2.0 * off) / 6.0).sqrt();
    let l1 = if pp <= f64::EPSILON * q.abs() {
        q
    } else {
        let b = |i: usize, j: usize| (g[i][j] - if i == j { C64::new(q, 0.0) } else { C64::new(0.0, 0.0) }) / pp;
        let det_b = (b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
            - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
            + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0)))
            .re;
        let r = (0.5 * det_b).clamp(-1.0, 1.0);
        q + 2.0 * pp * (r.acos() / 3.0).cos()
    };
    let prod = e3 / l1;
    let sum = ((e2 - prod) / l1).max(0.0);
    let l2 = 0.5 * (sum + (sum * sum - 4.0 * prod).max(0.0).sqrt());
    if l2 < 1e-8 * l1 && prod > 0.0 {
        // The smallest value would only be known to about sqrt(eps) * s_max.
        let m = DMatrix::from_row_slice(3, 3, entries);
        if let Ok(mut s) = jacobi_singular_values(&m) {
            s.sort_by(|x, y| y.total_cmp(x));
            out.copy_from_slice(&s[..3]);
            return out;
        }
    }
    out[0] = l1.sqrt();
    out[1] = l2.sqrt();
    out[2] = if l2 > 0.0 { (prod / l2).min(l2).sqrt() } else { 0.0 };
    out
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() <= 3 && a.cols() <= 3 {
        let s = tiny_singular_values(a.rows(), a.cols(), &a.row_major());
        return Ok(s[..a.rows().min(a.cols())].to_vec());
    }
    let mut s = if a.rows().min(a.cols()) <= JACOBI_MAX_DIM {
        jacobi_singular_values(a.as_dmatrix())?
    } else {
        bidiagonal_singular_values(a.as_dmatrix())?
    };
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

fn bidiagonal_singular_values(a: &DMatrix<C64>) -> Result<Vec<f64>> {
    let n = a.nrows().min(a.ncols());
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 200 * n.max(10))
        .ok_or_else(|| {
            Error::Numeric(format!(
                "SVD did not converge for a {}x{} matrix (max |a| = {:e})",
                a.nrows(),
                a.ncols(),
                a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
            ))
        })?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// One-sided Hestenes–Jacobi on the columns of the thinner orientation.
fn jacobi_singular_values(a: &DMatrix<C64>) -> Result<Vec<f64>> {
    let (m, n, mut cols) = if a.ncols() <= a.nrows() {
        let cols: Vec<Vec<C64>> = (0..a.ncols())
            .map(|c| a.column(c).iter().copied().collect())
            .collect();
        (a.nrows(), a.ncols(), cols)
    } else {
        let cols: Vec<Vec<C64>> = (0..a.nrows())
            .map(|r| a.row(r).iter().map(|z| z.conj()).collect())
            .collect();
        (a.ncols(), a.nrows(), cols)
    };
    let tol = 1e-15;
    let max_sweeps = 80;
    let mut norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
    for _sweep in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..m {
                    gamma += cols[i][k].conj() * cols[j][k];
                }
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                for k in 0..m {
                    let xi = ci[k];
                    let xj = cj[k] * phase.conj();
                    ci[k] = xi * c - xj * s;
                    cj[k] = xi * s + xj * c;
                }
                norms[i] = ci.iter().map(|z| z.norm_sqr()).sum();
                norms[j] = cj.iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            return Ok(norms.iter().map(|v| v.sqrt()).collect());
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi SVD did not converge in {max_sweeps} sweeps for a {}x{} matrix",
        a.nrows(),
        a.ncols()
    )))
}

/// Schatten norm of a descending list of singular values.
pub fn schatten_from_singular_values(s: &[f64], p: f64) -> SchattenValue {
    let smax = s.first().copied().unwrap_or(0.0);
    let floor = SINGULAR_FLOOR * smax;
    if s.len() <= 3 {
        return small_schatten(s, p, smax, floor);
    }
    let kept: Vec<f64> = s.iter().copied().filter(|&v| v > floor).collect();
    let floored = s.len() - kept.len();
    let value = if smax == 0.0 {
        0.0
    } else if p.is_infinite() {
        smax
    } else {
        // Factor out s_max so large entries cannot overflow the powers.
        let powered: Vec<f64> = kept.iter().map(|v| (v / smax).powf(p)).collect();
        smax * compensated_sum(powered).powf(1.0 / p)
    };
    SchattenValue {
        value,
        p,
        floor,
        floored,
    }
}

fn small_schatten(s: &[f64], p: f64, smax: f64, floor: f64) -> SchattenValue {
    let mut floored = 0;
    let mut total = 0.0;
    for &v in s {
        if v > floor {
            total += (v / smax).powf(p);
        } else {
            floored += 1;
        }
    }
    let value = if smax == 0.0 {
        0.0
    } else if p.is_infinite() {
        smax
    } else {
        smax * total.powf(1.0 / p)
    };
    SchattenValue {
        value,
        p,
        floor,
        floored,
    }
}

/// `(Σ s_j^p)^{1/p}` over the singular values of `a`.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<SchattenValue> {
    if !(p > 0.0) || p.is_nan() {
        return input(format!("Schatten exponent must be positive, got {p}"));
    }
    let s = singular_values(a)?;
    Ok(schatten_from_singular_values(&s, p))
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Entrywise product of two matrices of equal shape.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_shape(b)?;
    Ok(ComplexMatrix {
        data: a.data.component_mul(&b.data),
    })
}

/// `(Σ |a_jk|^r)^{1/r}` for `r` in `(0, 2]`, which dominates the Schatten `r` norm.
pub fn entrywise_lr_norm(a: &ComplexMatrix, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 2.0) {
        return input(format!(
            "entrywise exponent must lie in (0, 2] for the comparison with S_r, got {r}"
        ));
    }
    let moduli: Vec<f64> = a.data.iter().map(|z| z.norm()).collect();
    Ok(lq_aggregate(&moduli, r))
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed unitary from the QR factorisation of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let g = random_gaussian_matrix(n, n, rng)?;
    let qr = g.as_dmatrix().clone().qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phases so the distribution is Haar.
    let q = DMatrix::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    });
    ComplexMatrix::from_dmatrix(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_trace_norm() {
        let i3 = ComplexMatrix::identity(3).unwrap();
        assert!((schatten_norm(&i3, 1.0).unwrap().value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn all_ones_is_rank_one() {
        let q = ComplexMatrix::ones(3, 3).unwrap();
        let v = schatten_norm(&q, 0.5).unwrap();
        assert!((v.value - 3.0).abs() < 1e-12);
        assert_eq!(v.floored, 2);
    }

    #[test]
    fn scaled_outer_product() {
        let x = [0.6, 0.8];
        let y = [1.0 / 3.0_f64.sqrt(); 3];
        let a = ComplexMatrix::from_fn(3, 2, |r, k| C64::new(0.0, 5.0 * y[r] * x[k])).unwrap();
        for p in [0.2, 0.5, 1.0, 2.0] {
            assert!((schatten_norm(&a, p).unwrap().value - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn schur_with_ones_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_gaussian_matrix(3, 3, &mut rng).unwrap();
        let ones = ComplexMatrix::ones(3, 3).unwrap();
        assert_eq!(schur_product(&a, &ones).unwrap(), a);
        let d = schur_product(&a, &ComplexMatrix::identity(3).unwrap()).unwrap();
        for r in 0..3 {
            for k in 0..3 {
                let expect = if r == k { a.get(r, k) } else { c(0.0) };
                assert_eq!(d.get(r, k), expect);
            }
        }
    }

    #[test]
    fn point_mass_multiplier_preserves_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_gaussian_matrix(3, 3, &mut rng).unwrap();
        let tau = C64::from_polar(1.0, 0.7);
        let m = ComplexMatrix::from_fn(3, 3, |j, k| tau.conj().powu(j as u32) * tau.powu(k as u32)).unwrap();
        let lhs = singular_values(&schur_product(&m, &b).unwrap()).unwrap();
        let rhs = singular_values(&b).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).abs() < 1e-12 * rhs[0]);
        }
    }

    #[test]
    fn entrywise_norm_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert!((entrywise_lr_norm(&i2, 2.0).unwrap() - 2.0_f64.sqrt()).abs() < 1e-15);
        let q1 = ComplexMatrix::ones(2, 2).unwrap();
        assert!((entrywise_lr_norm(&q1, 1.0).unwrap() - 4.0).abs() < 1e-15);
        assert!((schatten_norm(&q1, 1.0).unwrap().value - 2.0).abs() < 1e-14);
        assert!(entrywise_lr_norm(&q1, 2.5).is_err());
    }

    #[test]
    fn entrywise_dominates_schatten_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_gaussian_matrix(3, 3, &mut rng).unwrap();
        assert!(entrywise_lr_norm(&a, 0.5).unwrap() >= schatten_norm(&a, 0.5).unwrap().value);
    }

    #[test]
    fn rejects_non_finite_entries() {
        let e = ComplexMatrix::from_row_major(1, 2, &[c(1.0), C64::new(f64::NAN, 0.0)]);
        assert!(matches!(e, Err(Error::Input(_))));
    }

    #[test]
    fn jacobi_and_bidiagonal_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &(r, k) in &[(5, 5), (7, 3), (3, 9), (40, 40)] {
            let a = random_gaussian_matrix(r, k, &mut rng).unwrap();
            let mut s1 = jacobi_singular_values(a.as_dmatrix()).unwrap();
            let mut s2 = bidiagonal_singular_values(a.as_dmatrix()).unwrap();
            s1.sort_by(|x, y| y.total_cmp(x));
            s2.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in s1.iter().zip(&s2) {
                assert!((x - y).abs() < 1e-11 * s1[0], "{x} vs {y}");
            }
        }
    }

    #[test]
    fn tiny_path_matches_bidiagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for &(r, k) in &[(2, 2), (3, 3), (2, 3), (3, 2), (1, 3), (3, 1)] {
            for _ in 0..20 {
                let a = random_gaussian_matrix(r, k, &mut rng).unwrap();
                let s1 = tiny_singular_values(r, k, &a.row_major());
                let s2 = bidiagonal_singular_values(a.as_dmatrix()).unwrap();
                let mut s2 = s2.clone();
                s2.sort_by(|x, y| y.total_cmp(x));
                for (x, y) in s1.iter().zip(&s2) {
                    assert!((x - y).abs() < 1e-12 * s2[0], "{r}x{k}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_gaussian_matrix(4, 3, &mut rng).unwrap();
        let b: ComplexMatrix = a.to_text().parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exponent_derived_values() {
        let p = PExponent::new(0.5).unwrap();
        assert_eq!(p.sharp(), Sharp::Finite(1.0));
        assert!((p.flat() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(PExponent::new(1.0).unwrap().sharp(), Sharp::Infinite);
        assert!(PExponent::new(1.5).is_err());
        assert!(PExponent::new(0.0).is_err());
    }
}

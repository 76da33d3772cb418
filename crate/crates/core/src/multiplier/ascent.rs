//! Rank-one witness search: maximise `‖diag(y) A diag(x)‖_{S_p}` over
//! nonnegative unit vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::BlockPartition;
use crate::error::{input, Result};
use crate::linalg::{schatten_from_singular_values, singular_values, tiny_singular_values, ComplexMatrix, PExponent, C64};

/// `‖diag(y) A diag(x)‖_{S_p}` with zero rows and columns compressed away.
#[derive(Debug, Clone)]
pub struct RankOneObjective {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
    live_rows: Vec<bool>,
    live_cols: Vec<bool>,
    p: f64,
}

impl RankOneObjective {
    pub fn new(a: &ComplexMatrix, p: PExponent) -> Self {
        let entries = a.row_major();
        let (rows, cols) = (a.rows(), a.cols());
        let zero = C64::new(0.0, 0.0);
        let live_rows = (0..rows).map(|r| (0..cols).any(|c| entries[r * cols + c] != zero)).collect();
        let live_cols = (0..cols).map(|c| (0..rows).any(|r| entries[r * cols + c] != zero)).collect();
        Self {
            rows,
            cols,
            entries,
            live_rows,
            live_cols,
            p: p.p(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Objective value; `x` scales columns and `y` scales rows.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut rs = [0usize; 3];
        let mut cs = [0usize; 3];
        let (mut nr, mut nc) = (0, 0);
        let mut small = true;
        for r in 0..self.rows {
            if y[r] > 0.0 && self.live_rows[r] {
                if nr == 3 {
                    small = false;
                    break;
                }
                rs[nr] = r;
                nr += 1;
            }
        }
        if small {
            for c in 0..self.cols {
                if x[c] > 0.0 && self.live_cols[c] {
                    if nc == 3 {
                        small = false;
                        break;
                    }
                    cs[nc] = c;
                    nc += 1;
                }
            }
        }
        if small {
            if nr == 0 || nc == 0 {
                return 0.0;
            }
            let mut buf = [C64::new(0.0, 0.0); 9];
            for i in 0..nr {
                for j in 0..nc {
                    buf[i * nc + j] = self.entries[rs[i] * self.cols + cs[j]] * (y[rs[i]] * x[cs[j]]);
                }
            }
            let s = tiny_singular_values(nr, nc, &buf[..nr * nc]);
            return schatten_from_singular_values(&s[..nr.min(nc)], self.p).value;
        }
        let rows: Vec<usize> = (0..self.rows).filter(|&r| y[r] > 0.0 && self.live_rows[r]).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| x[c] > 0.0 && self.live_cols[c]).collect();
        if rows.is_empty() || cols.is_empty() {
            return 0.0;
        }
        let m = ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.entries[rows[i] * self.cols + cols[j]] * (y[rows[i]] * x[cols[j]])
        })
        .expect("finite entries scaled by finite weights");
        match singular_values(&m) {
            Ok(s) => schatten_from_singular_values(&s, self.p).value,
            Err(e) => {
                log::debug!("objective evaluation failed: {e}");
                0.0
            }
        }
    }
}

/// Tuning for [`mult_lower_rank1_with`].
#[derive(Debug, Clone)]
pub struct AscentOptions {
    /// Number of random starts, in addition to the structured ones.
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    pub rel_tol: f64,
    /// Angular tolerance of each one-dimensional golden-section search.
    pub golden_tol: f64,
    /// Include uniform, coordinate, block and profile starts.
    pub structured: bool,
    pub partition: Option<BlockPartition>,
    /// Additional `(x, y)` starting witnesses.
    pub extra_starts: Vec<(Vec<f64>, Vec<f64>)>,
    /// Skip local polishing and only evaluate the starts.
    pub evaluate_only: bool,
}

impl AscentOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            max_sweeps: 200,
            rel_tol: 1e-8,
            golden_tol: 1e-7,
            structured: true,
            partition: None,
            extra_starts: Vec::new(),
            evaluate_only: false,
        }
    }
}

/// Best rank-one witness found by the ascent.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
    pub method: String,
    /// Number of starts that were polished (or evaluated).
    pub restarts_used: usize,
    pub seed: u64,
    /// Index of the start that produced the best value.
    pub best_start: usize,
    /// Starts that reached the relative-improvement stopping rule.
    pub converged_starts: usize,
}

/// Seeded multistart ascent with default tuning.
pub fn mult_lower_rank1(a: &ComplexMatrix, p: PExponent, restarts: usize, seed: u64) -> Result<LowerBound> {
    if restarts == 0 {
        return input("the ascent needs at least one restart");
    }
    mult_lower_rank1_with(a, p, &AscentOptions::new(restarts, seed))
}

pub fn mult_lower_rank1_with(a: &ComplexMatrix, p: PExponent, opts: &AscentOptions) -> Result<LowerBound> {
    if opts.restarts == 0 && !opts.structured && opts.extra_starts.is_empty() {
        return input("no starting witnesses: enable structured starts or request restarts");
    }
    let obj = RankOneObjective::new(a, p);
    let mut starts = Vec::new();
    for (x, y) in &opts.extra_starts {
        if x.len() != a.cols() || y.len() != a.rows() {
            return input("extra start does not match the matrix shape");
        }
        starts.push((normalized(x.clone()), normalized(y.clone())));
    }
    if opts.structured {
        starts.extend(structured_starts(a, opts.partition.as_ref())?);
    }
    let structured_count = starts.len();

    let mut best: Option<(f64, Vec<f64>, Vec<f64>, usize)> = None;
    let mut converged_starts = 0;
    let total = structured_count + opts.restarts;
    for index in 0..total {
        let (x0, y0) = if index < structured_count {
            starts[index].clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(index as u64);
            (random_simplex_root(a.cols(), &mut rng), random_simplex_root(a.rows(), &mut rng))
        };
        let (value, x, y, converged) = if opts.evaluate_only {
            (obj.eval(&x0, &y0), x0, y0, true)
        } else {
            polish(&obj, x0, y0, opts)
        };
        if converged {
            converged_starts += 1;
        } else {
            log::debug!("start {index} stopped after {} sweeps without settling", opts.max_sweeps);
        }
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, x, y, index));
        }
    }
    let (value, witness_x, witness_y, best_start) = best.expect("at least one start");
    Ok(LowerBound {
        value,
        witness_x,
        witness_y,
        method: if opts.evaluate_only { "witness".into() } else { "rank-one-ascent".into() },
        restarts_used: total,
        seed: opts.seed,
        best_start,
        converged_starts,
    })
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    for t in v.iter_mut() {
        *t = t.abs();
    }
    let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|t| *t /= n);
    } else {
        let u = 1.0 / (v.len() as f64).sqrt();
        v.iter_mut().for_each(|t| *t = u);
    }
    v
}

/// Square roots of a flat Dirichlet draw: uniform squared entries on the simplex.
fn random_simplex_root<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|d| (d / total).sqrt()).collect()
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn indicator(n: usize, range: std::ops::Range<usize>) -> Vec<f64> {
    let w = 1.0 / (range.len() as f64).sqrt();
    (0..n).map(|i| if range.contains(&i) { w } else { 0.0 }).collect()
}

fn structured_starts(a: &ComplexMatrix, partition: Option<&BlockPartition>) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let (rows, cols) = (a.rows(), a.cols());
    let ux = vec![1.0 / (cols as f64).sqrt(); cols];
    let uy = vec![1.0 / (rows as f64).sqrt(); rows];
    let mut starts = vec![(ux.clone(), uy.clone())];
    let (mut bi, mut bj, mut bv) = (0, 0, -1.0);
    for i in 0..rows {
        for j in 0..cols {
            let v = a.get(i, j).norm();
            if v > bv {
                (bi, bj, bv) = (i, j, v);
            }
        }
    }
    starts.push((unit(cols, bj), unit(rows, bi)));
    for j in 0..cols {
        starts.push((unit(cols, j), uy.clone()));
    }
    for i in 0..rows {
        starts.push((ux.clone(), unit(rows, i)));
    }
    if let Some(part) = partition {
        part.check_shape(a)?;
        for (rr, cc) in part.diagonal_blocks() {
            starts.push((indicator(cols, cc), indicator(rows, rr)));
        }
    }
    if rows == cols && rows > 1 && is_toeplitz(a) {
        for width in [rows, rows.div_ceil(2)] {
            let profile: Vec<f64> = (0..rows)
                .map(|k| {
                    let offset = (rows - width) / 2;
                    if k < offset || k >= offset + width {
                        0.0
                    } else {
                        let t = (k - offset + 1) as f64 / (width + 1) as f64;
                        (std::f64::consts::PI * t).sin().powi(2)
                    }
                })
                .collect();
            let profile = normalized(profile);
            starts.push((profile.clone(), profile));
        }
    }
    Ok(starts)
}

fn is_toeplitz(a: &ComplexMatrix) -> bool {
    let tol = 1e-12 * a.max_abs().max(f64::MIN_POSITIVE);
    (1..a.rows()).all(|i| (1..a.cols()).all(|j| (a.get(i, j) - a.get(i - 1, j - 1)).norm() <= tol))
}

/// Sets coordinate `i` to `sin θ` and rescales the rest to norm `cos θ`.
fn with_angle(v: &[f64], i: usize, theta: f64, rest_norm: f64, out: &mut [f64]) {
    let (s, c) = theta.sin_cos();
    if rest_norm > 0.0 {
        let f = c / rest_norm;
        for (k, o) in out.iter_mut().enumerate() {
            *o = if k == i { s } else { v[k] * f };
        }
    } else {
        let u = if v.len() > 1 { c / ((v.len() - 1) as f64).sqrt() } else { 0.0 };
        for (k, o) in out.iter_mut().enumerate() {
            *o = if k == i { s } else { u };
        }
    }
}

fn polish(obj: &RankOneObjective, mut x: Vec<f64>, mut y: Vec<f64>, opts: &AscentOptions) -> (f64, Vec<f64>, Vec<f64>, bool) {
    let mut value = obj.eval(&x, &y);
    let mut trial = Vec::new();
    for _ in 0..opts.max_sweeps {
        let sweep_start = value;
        for side in 0..2 {
            let len = if side == 0 { x.len() } else { y.len() };
            if len < 2 {
                continue;
            }
            for i in 0..len {
                let v = if side == 0 { x.clone() } else { y.clone() };
                let rest_norm = (v.iter().map(|t| t * t).sum::<f64>() - v[i] * v[i]).max(0.0).sqrt();
                trial.resize(len, 0.0);
                let mut f = |theta: f64, buf: &mut Vec<f64>| -> f64 {
                    with_angle(&v, i, theta, rest_norm, buf);
                    if side == 0 {
                        obj.eval(buf, &y)
                    } else {
                        obj.eval(&x, buf)
                    }
                };
                let (theta, best) = golden_max(&mut f, &mut trial, opts.golden_tol);
                if best > value {
                    value = best;
                    with_angle(&v, i, theta, rest_norm, &mut trial);
                    if side == 0 {
                        x.copy_from_slice(&trial);
                    } else {
                        y.copy_from_slice(&trial);
                    }
                }
            }
        }
        if value - sweep_start <= opts.rel_tol * value.abs() {
            return (value, x, y, true);
        }
    }
    (value, x, y, false)
}

/// Golden-section search for a maximum on `[0, π/2]`, also checking both ends.
fn golden_max(f: &mut impl FnMut(f64, &mut Vec<f64>) -> f64, buf: &mut Vec<f64>, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (0.0, std::f64::consts::FRAC_PI_2);
    let mut best = (a, f(a, buf));
    let fb = f(b, buf);
    if fb > best.1 {
        best = (b, fb);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c, buf);
    let mut fd = f(d, buf);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c, buf);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d, buf);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

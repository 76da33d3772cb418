//! Brute-force reference for matrices up to 3×3, independent of the ascent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{input, Result};
use crate::linalg::{schatten_from_singular_values, schatten_norm, tiny_singular_values, ComplexMatrix, PExponent, C64};

const QUARTER: f64 = std::f64::consts::FRAC_PI_2;
const COARSE_STEPS: usize = 20;
const ZOOM_CANDIDATES: usize = 20;
const ZOOM_STEPS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Final angular spacing in radians.
    pub resolution: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            resolution: 0.01,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// Best objective value over a grid of nonnegative unit pairs plus random samples.
pub fn mult_oracle_small(a: &ComplexMatrix, p: PExponent, resolution: f64) -> Result<f64> {
    mult_oracle_small_with(
        a,
        p,
        OracleOptions {
            resolution,
            ..OracleOptions::default()
        },
    )
}

/// Points of the nonnegative part of the unit sphere in `R^n` by angles.
fn sphere_point(angles: &[f64], n: usize, out: &mut [f64; 3]) {
    match n {
        1 => out[0] = 1.0,
        2 => {
            out[0] = angles[0].cos();
            out[1] = angles[0].sin();
        }
        _ => {
            let (s, c) = angles[0].sin_cos();
            out[0] = c;
            out[1] = s * angles[1].cos();
            out[2] = s * angles[1].sin();
        }
    }
}

struct Small {
    rows: usize,
    cols: usize,
    entries: [C64; 9],
    p: f64,
}

impl Small {
    fn value(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        let mut buf = [C64::new(0.0, 0.0); 9];
        for i in 0..self.rows {
            for j in 0..self.cols {
                buf[i * self.cols + j] = self.entries[i * self.cols + j] * (y[i] * x[j]);
            }
        }
        let s = tiny_singular_values(self.rows, self.cols, &buf[..self.rows * self.cols]);
        schatten_from_singular_values(&s[..self.rows.min(self.cols)], self.p).value
    }

    fn at(&self, angles: &[f64]) -> f64 {
        let ax = self.cols.saturating_sub(1);
        let (mut x, mut y) = ([0.0; 3], [0.0; 3]);
        sphere_point(&angles[..ax], self.cols, &mut x);
        sphere_point(&angles[ax..], self.rows, &mut y);
        self.value(&x, &y)
    }
}

/// Visits every point of a product grid `centre + h·(i − steps)` clamped to `[0, π/2]`.
fn for_grid(centre: &[f64], h: f64, steps: usize, mut f: impl FnMut(&[f64])) {
    let dim = centre.len();
    let side = 2 * steps + 1;
    let total = side.pow(dim as u32);
    let mut point = vec![0.0; dim];
    for idx in 0..total {
        let mut rem = idx;
        for (d, slot) in point.iter_mut().enumerate() {
            let i = rem % side;
            rem /= side;
            *slot = (centre[d] + h * (i as f64 - steps as f64)).clamp(0.0, QUARTER);
        }
        f(&point);
    }
}

pub fn mult_oracle_small_with(a: &ComplexMatrix, p: PExponent, opts: OracleOptions) -> Result<f64> {
    if a.rows() > 3 || a.cols() > 3 {
        return input(format!("the oracle handles at most 3×3 matrices, got {}×{}", a.rows(), a.cols()));
    }
    if !(opts.resolution > 0.0 && opts.resolution < QUARTER) {
        return input(format!("oracle resolution must lie in (0, π/2), got {}", opts.resolution));
    }
    let mut entries = [C64::new(0.0, 0.0); 9];
    entries[..a.rows() * a.cols()].copy_from_slice(&a.row_major());
    let small = Small {
        rows: a.rows(),
        cols: a.cols(),
        entries,
        p: p.p(),
    };
    let dim = (a.rows() - 1) + (a.cols() - 1);
    let mut best = (f64::NEG_INFINITY, vec![0.0; dim]);

    let coarse_h = QUARTER / COARSE_STEPS as f64;
    if coarse_h <= opts.resolution || dim <= 2 {
        // Full product grid at the requested spacing.
        let steps = (QUARTER / opts.resolution).ceil() as usize;
        let h = QUARTER / steps as f64;
        let half = steps.div_ceil(2);
        let centre = vec![h * half as f64; dim];
        for_grid(&centre, h, half, |pt| {
            let v = small.at(pt);
            if v > best.0 {
                best = (v, pt.to_vec());
            }
        });
    } else {
        // Coarse grid, then repeated local refinement of the best cells.
        let mut cells: Vec<(f64, Vec<f64>)> = Vec::new();
        let half = COARSE_STEPS / 2;
        let centre = vec![coarse_h * half as f64; dim];
        for_grid(&centre, coarse_h, half, |pt| cells.push((small.at(pt), pt.to_vec())));
        cells.sort_by(|l, r| r.0.total_cmp(&l.0));
        cells.truncate(ZOOM_CANDIDATES);
        for (value, mut centre) in cells {
            let mut local = value;
            let mut h = coarse_h / ZOOM_STEPS as f64;
            loop {
                let mut next = (local, centre.clone());
                for_grid(&centre, h, ZOOM_STEPS, |pt| {
                    let v = small.at(pt);
                    if v > next.0 {
                        next = (v, pt.to_vec());
                    }
                });
                (local, centre) = next;
                if h < opts.resolution {
                    break;
                }
                h *= 0.5;
            }
            if local > best.0 {
                best = (local, centre);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut draw = |n: usize, out: &mut [f64; 3]| {
        let mut norm = 0.0;
        for slot in out.iter_mut().take(n) {
            let g: f64 = rng.sample(StandardNormal);
            *slot = g.abs();
            norm += g * g;
        }
        let norm = norm.sqrt().max(f64::MIN_POSITIVE);
        out.iter_mut().take(n).for_each(|t| *t /= norm);
    };
    let mut sampled_best = (f64::NEG_INFINITY, [0.0; 3], [0.0; 3]);
    for _ in 0..opts.samples {
        let (mut x, mut y) = ([0.0; 3], [0.0; 3]);
        draw(small.cols, &mut x);
        draw(small.rows, &mut y);
        let v = small.value(&x, &y);
        if v > sampled_best.0 {
            sampled_best = (v, x, y);
        }
    }

    // Re-evaluate the winner with the general SVD backend.
    let (x, y) = if sampled_best.0 > best.0 {
        (sampled_best.1, sampled_best.2)
    } else {
        let ax = small.cols - 1;
        let (mut x, mut y) = ([0.0; 3], [0.0; 3]);
        sphere_point(&best.1[..ax], small.cols, &mut x);
        sphere_point(&best.1[ax..], small.rows, &mut y);
        (x, y)
    };
    let b = a.scale_rows_cols(&y[..small.rows], &x[..small.cols])?;
    Ok(schatten_norm(&b, p.p())?.value)
}

//! Discrete measures on the circle and their Toeplitz multipliers.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;

use crate::error::{input, Error, Result};
use crate::linalg::{lq_aggregate, parse_reals, ComplexMatrix, PExponent, C64};
use crate::symbols::{lp_norm, lp_norm_on_grid, omega, SmoothCutoffSpec, Spectrum, TrigPolynomial, DEFAULT_OVERSAMPLE};

/// Atoms closer than this (in radians, around the circle) count as equal.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Finite sum of point masses `Σ w_m δ_{e^{iθ_m}}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, C64)>,
}

impl DiscreteMeasure {
    /// Angles are reduced to `[0, 2π)`; coinciding atoms are rejected.
    pub fn new(atoms: Vec<(f64, C64)>) -> Result<Self> {
        let mut reduced = Vec::with_capacity(atoms.len());
        for (theta, w) in atoms {
            if !theta.is_finite() || !w.re.is_finite() || !w.im.is_finite() {
                return input(format!("atom ({theta}, {w}) is not finite"));
            }
            reduced.push((theta.rem_euclid(TAU), w));
        }
        for i in 0..reduced.len() {
            for j in i + 1..reduced.len() {
                if circular_distance(reduced[i].0, reduced[j].0) <= ANGLE_TOLERANCE {
                    return input(format!(
                        "atoms {i} and {j} sit at the same angle {}; merge them explicitly",
                        reduced[i].0
                    ));
                }
            }
        }
        Ok(Self { atoms: reduced })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point_mass(theta: f64, weight: C64) -> Result<Self> {
        Self::new(vec![(theta, weight)])
    }

    pub fn atoms(&self) -> &[(f64, C64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `μ̂(k) = Σ w_m e^{-ikθ_m}`.
    pub fn fourier_coefficient(&self, k: i64) -> C64 {
        self.atoms
            .iter()
            .map(|&(theta, w)| w * C64::from_polar(1.0, -((k as f64 * theta).rem_euclid(TAU))))
            .sum()
    }

    /// `(Σ |w_m|^p)^{1/p}`, the multiplier norm of the Toeplitz matrix of `μ`.
    pub fn mp_norm(&self, p: PExponent) -> f64 {
        let w: Vec<f64> = self.atoms.iter().map(|a| a.1.norm()).collect();
        lq_aggregate(&w, p.p())
    }

    /// Sum of two measures; atoms at the same angle have their weights added.
    pub fn add(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for &(theta, w) in &other.atoms {
            match atoms.iter_mut().find(|a| circular_distance(a.0, theta) <= ANGLE_TOLERANCE) {
                Some(a) => a.1 += w,
                None => atoms.push((theta, w)),
            }
        }
        Self { atoms }
    }

    /// Smallest distance between two atoms, `None` with fewer than two atoms.
    pub fn min_separation(&self) -> Option<f64> {
        let mut best = None::<f64>;
        for i in 0..self.atoms.len() {
            for j in i + 1..self.atoms.len() {
                let d = circular_distance(self.atoms[i].0, self.atoms[j].0);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    /// Lines `theta re im`; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let v = parse_reals(t, i + 1)?;
            if v.len() != 3 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `theta re im`, got {} fields", v.len()),
                });
            }
            atoms.push((v[0], C64::new(v[1], v[2])));
        }
        Self::new(atoms)
    }

    pub fn to_text(&self) -> String {
        self.atoms
            .iter()
            .map(|(t, w)| format!("{t:.16e} {:.16e} {:.16e}\n", w.re, w.im))
            .collect()
    }
}

/// `n × n` matrix `{μ̂(j - k)}`.
pub fn toeplitz_window(mu: &DiscreteMeasure, n: usize) -> Result<ComplexMatrix> {
    shifted_toeplitz_window(mu, n, 0)
}

/// `n × n` matrix `{μ̂(j - k - m)}`.
pub fn shifted_toeplitz_window(mu: &DiscreteMeasure, n: usize, m: i64) -> Result<ComplexMatrix> {
    if n == 0 {
        return input("window size must be at least 1");
    }
    let coeffs: Vec<C64> = (-(n as i64) + 1 - m..n as i64 - m).map(|k| mu.fourier_coefficient(k)).collect();
    let base = n as i64 - 1;
    ComplexMatrix::from_fn(n, n, |j, k| coeffs[(j as i64 - k as i64 + base) as usize])
}

/// `n × n` matrix `{μ̂(j + k)}`.
pub fn hankel_window(mu: &DiscreteMeasure, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return input("window size must be at least 1");
    }
    let coeffs: Vec<C64> = (0..2 * n as i64 - 1).map(|k| mu.fourier_coefficient(k)).collect();
    ComplexMatrix::from_fn(n, n, |j, k| coeffs[j + k])
}

/// Rank-one witness built from a function concentrated on a short arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Largest `|⟨f_{τ_m}, f_{τ_l}⟩|` over distinct atoms.
    pub gram_max: f64,
    /// Frequency cutoff of the smoothing.
    pub cutoff: usize,
}

/// Largest Gram off-diagonal accepted by [`arc_witness`].
pub const ARC_GRAM_LIMIT: f64 = 0.01;

/// Witness `x = y = |f̂|` on a window of `samples` indices, where `f` is the
/// normalised indicator of an arc of the given width, smoothed by `ω(·/K)` with
/// `2K ≤ samples/2 - 1`.
pub fn arc_witness(mu: &DiscreteMeasure, arc_width: f64, samples: usize) -> Result<ArcWitness> {
    if !(arc_width > 0.0 && arc_width < PI) {
        return input(format!("arc width must lie in (0, π), got {arc_width}"));
    }
    if samples < 8 {
        return input(format!("the witness window needs at least 8 samples, got {samples}"));
    }
    if let Some(sep) = mu.min_separation() {
        if sep < arc_width {
            return input(format!(
                "atoms {sep:.3e} apart are closer than the arc width {arc_width:.3e}; narrow the arc"
            ));
        }
    }
    let centre = samples / 2;
    let cutoff = (samples / 2 - 1) / 2;
    let raw = |j: i64| -> f64 {
        let base = if j == 0 { arc_width / TAU } else { (j as f64 * arc_width / 2.0).sin() / (PI * j as f64) };
        base * omega(j as f64 / cutoff as f64)
    };
    let mut coeffs = vec![0.0; samples];
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = raw(k as i64 - centre as i64);
    }
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Numeric("arc function vanished on the window".into()));
    }
    coeffs.iter_mut().for_each(|c| *c /= norm);

    let atoms = mu.atoms();
    let mut gram_max = 0.0_f64;
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let delta = atoms[i].0 - atoms[j].0;
            let g: C64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| C64::from_polar(c * c, (k as f64 - centre as f64) * delta))
                .sum();
            gram_max = gram_max.max(g.norm());
        }
    }
    if gram_max >= ARC_GRAM_LIMIT {
        return input(format!(
            "rotated arc functions overlap (Gram {gram_max:.3e} >= {ARC_GRAM_LIMIT}); narrow the arc or enlarge the window"
        ));
    }
    let x: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    Ok(ArcWitness {
        y: x.clone(),
        x,
        gram_max,
        cutoff,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub n: u32,
    pub value: f64,
    /// `2^{n(1 - 1/p)}`.
    pub scale: f64,
    pub ratio: f64,
}

/// `‖μ * Ω_n‖_p` for each `n`, where `μ * Ω_n` has coefficients `μ̂(k) ω(k/2^n)`.
pub fn omega_convolution_decay(mu: &DiscreteMeasure, w: &SmoothCutoffSpec, p: f64, ns: &[u32]) -> Result<Vec<DecayRow>> {
    w.validate_plateau()?;
    let radius = w.support_radius().expect("validated plateau has bounded support");
    ns.iter()
        .map(|&n| {
            if n > 24 {
                return input(format!("scale {n} is too large"));
            }
            let two_n = f64::powi(2.0, n as i32);
            let hi = (radius * two_n).ceil() as i64;
            let poly = TrigPolynomial::from_fn(-hi, hi, |k| mu.fourier_coefficient(k) * w.eval(k as f64 / two_n))?;
            let value = lp_norm(&poly, p, DEFAULT_OVERSAMPLE)?.value;
            let scale = two_n.powf(1.0 - 1.0 / p);
            Ok(DecayRow {
                n,
                value,
                scale,
                ratio: value / scale,
            })
        })
        .collect()
}

/// `(1/(N+1)) Σ_{k=0}^{N} |μ̂(k)|²`.
pub fn wiener_mean(mu: &DiscreteMeasure, n: usize) -> Result<f64> {
    if n == 0 {
        return input("Wiener mean needs N >= 1");
    }
    let terms: Vec<f64> = (0..=n as i64).map(|k| mu.fourier_coefficient(k).norm_sqr()).collect();
    Ok(crate::linalg::compensated_sum(terms) / (n + 1) as f64)
}

/// One term `α Ω_n(x - s)` of a greedy decomposition, `x` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomTerm {
    pub alpha: C64,
    pub n: u32,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDecomposition {
    pub terms: Vec<AtomTerm>,
    /// `‖f - Σ α Ω_n(· - s)‖_p` on the working grid.
    pub residual_lp: f64,
    /// Residual `L²` norm relative to that of `f`.
    pub relative_residual: f64,
    /// `Σ |α|^p 2^{n(p-1)}`.
    pub weighted_p_sum: f64,
    /// `Σ |α|`.
    pub l1_sum: f64,
    /// `‖residual‖_p^p` after each accepted term, starting with `‖f‖_p^p`.
    pub p_energy_history: Vec<f64>,
    pub converged: bool,
}

/// Coefficients of `Ω_n(x - s)` at `k`: `ω(k/2^n) e^{-2πiks}`.
fn atom_coeff(n: u32, s: f64, k: i64) -> C64 {
    let w = omega(k as f64 / f64::powi(2.0, n as i32));
    C64::from_polar(w, -TAU * (k as f64 * s).rem_euclid(1.0))
}

/// How many of the best `L²` candidates are tried at each step.
const CANDIDATES_PER_STEP: usize = 32;

/// Least-squares coefficients of `target` on the atoms, and the residual.
fn refit(target: &[C64], atoms: &[(u32, f64)], half: i64) -> Option<(Vec<C64>, Vec<C64>)> {
    let columns: Vec<Vec<C64>> = atoms
        .iter()
        .map(|&(n, s)| (-half..=half).map(|k| if k.unsigned_abs() <= 1 << (n + 1) { atom_coeff(n, s, k) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>();
    let k = atoms.len();
    let gram = DMatrix::from_fn(k, k, |i, j| dot(&columns[i], &columns[j]));
    let rhs = DVector::from_fn(k, |i, _| dot(&columns[i], target));
    let alpha = gram.cholesky()?.solve(&rhs);
    let mut residual = target.to_vec();
    for (col, a) in columns.iter().zip(alpha.iter()) {
        residual.iter_mut().zip(col).for_each(|(r, c)| *r -= a * c);
    }
    Some((alpha.iter().copied().collect(), residual))
}

/// Residual p-energy, atom, coefficients and residual of a refit candidate.
type Candidate = (f64, (u32, f64), Vec<C64>, Vec<C64>);

/// Greedy pursuit with the periodised atoms `Ω_n(x - s)`.
///
/// Each step scans scales `n = 0, …, ⌈log₂(deg f + 1)⌉` and shifts
/// `s = i / 2^{n+3}`, ranks candidates by their `L²` correlation with the
/// residual, refits all chosen coefficients by least squares for the best
/// candidates and keeps the one that lowers `‖residual‖_p^p` the most.
/// Stops once the residual `L²` norm drops below `tol` times that of `f`.
pub fn greedy_atomic_decompose(f: &TrigPolynomial, p: f64, max_terms: usize, tol: f64) -> Result<AtomicDecomposition> {
    if !(p > 0.0 && p < 1.0) {
        return input(format!("greedy decomposition needs p in (0, 1), got {p}"));
    }
    if max_terms == 0 {
        return input("max_terms must be at least 1");
    }
    if !(tol > 0.0) {
        return input(format!("tolerance must be positive, got {tol}"));
    }
    let f = f.trimmed();
    let degree = f.degree();
    let n_max = (64 - degree.leading_zeros()).max(1);
    if n_max > 20 {
        return input(format!("degree {degree} is too large for the atom search"));
    }
    let half = 1i64 << (n_max + 1);
    let grid = 16 * half as usize;
    let target: Vec<C64> = (-half..=half).map(|k| f.coeff(k)).collect();
    let mut residual = target.clone();
    let as_poly = |r: &[C64]| TrigPolynomial::new(-half, r.to_vec());
    let energy = |r: &[C64]| r.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let start_energy = energy(&residual);
    let p_energy = |r: &[C64]| -> Result<f64> { Ok(lp_norm_on_grid(&as_poly(r)?, p, grid)?.powf(p)) };

    let mut atoms: Vec<(u32, f64)> = Vec::new();
    let mut alphas: Vec<C64> = Vec::new();
    let mut history = vec![p_energy(&residual)?];
    let mut planner = FftPlanner::new();
    let finish = |atoms: &[(u32, f64)], alphas: &[C64], residual: &[C64], history: Vec<f64>, converged: bool| -> Result<AtomicDecomposition> {
        let terms: Vec<AtomTerm> = atoms.iter().zip(alphas).map(|(&(n, s), &alpha)| AtomTerm { alpha, n, s }).collect();
        let last = *history.last().unwrap();
        Ok(AtomicDecomposition {
            weighted_p_sum: terms.iter().map(|t| t.alpha.norm().powf(p) * f64::powi(2.0, t.n as i32).powf(p - 1.0)).sum(),
            l1_sum: terms.iter().map(|t| t.alpha.norm()).sum(),
            terms,
            residual_lp: last.powf(1.0 / p),
            relative_residual: if start_energy > 0.0 { (energy(residual) / start_energy).sqrt() } else { 0.0 },
            p_energy_history: history,
            converged,
        })
    };
    if start_energy == 0.0 {
        return finish(&atoms, &alphas, &residual, history, true);
    }

    loop {
        if energy(&residual) <= tol * tol * start_energy {
            return finish(&atoms, &alphas, &residual, history, true);
        }
        if atoms.len() >= max_terms {
            break;
        }
        let mut candidates: Vec<(f64, u32, f64)> = Vec::new();
        for n in 0..=n_max {
            let reach = 1i64 << (n + 1);
            let m = 1usize << (n + 3);
            let weights: Vec<f64> = (-reach..=reach).map(|k| omega(k as f64 / f64::powi(2.0, n as i32))).collect();
            let norm2: f64 = weights.iter().map(|w| w * w).sum();
            let mut buf = vec![C64::new(0.0, 0.0); m];
            for (i, k) in (-reach..=reach).enumerate() {
                buf[k.rem_euclid(m as i64) as usize] += residual[(k + half) as usize] * weights[i];
            }
            planner.plan_fft_inverse(m).process(&mut buf);
            for (i, corr) in buf.into_iter().enumerate() {
                let s = i as f64 / m as f64;
                if !atoms.contains(&(n, s)) {
                    candidates.push((corr.norm_sqr() / norm2, n, s));
                }
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
        let current = *history.last().unwrap();
        let mut best: Option<Candidate> = None;
        for &(_, n, s) in candidates.iter().take(CANDIDATES_PER_STEP) {
            let mut trial_atoms = atoms.clone();
            trial_atoms.push((n, s));
            let Some((coeffs, trial)) = refit(&target, &trial_atoms, half) else { continue };
            let e = p_energy(&trial)?;
            if e < current && best.as_ref().is_none_or(|b| e < b.0) {
                best = Some((e, (n, s), coeffs, trial));
            }
        }
        let Some((e, atom, coeffs, trial)) = best else {
            return Err(Error::Stagnation {
                accepted: atoms.len(),
                residual_energy: energy(&residual),
                residual: Box::new(as_poly(&residual)?.trimmed()),
            });
        };
        atoms.push(atom);
        alphas = coeffs;
        residual = trial;
        history.push(e);
    }
    let converged = energy(&residual) <= tol * tol * start_energy;
    finish(&atoms, &alphas, &residual, history, converged)
}

/// `Ω_n(x - s)` as a trigonometric polynomial.
pub fn shifted_omega(n: u32, s: f64) -> Result<TrigPolynomial> {
    let reach = 1i64 << (n + 1);
    TrigPolynomial::from_fn(-reach, reach, |k| atom_coeff(n, s, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::omega_kernel;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn fourier_coefficients() {
        let d0 = DiscreteMeasure::point_mass(0.0, c(1.0)).unwrap();
        assert!((0..5).all(|k| (d0.fourier_coefficient(k) - c(1.0)).norm() < 1e-15));
        let d = DiscreteMeasure::point_mass(0.7, c(1.0)).unwrap();
        assert!((d.fourier_coefficient(3) - C64::from_polar(1.0, -2.1)).norm() < 1e-14);
        assert_eq!(DiscreteMeasure::empty().fourier_coefficient(4), c(0.0));
    }

    #[test]
    fn mp_norm_examples() {
        let p = PExponent::new(0.5).unwrap();
        assert!((DiscreteMeasure::point_mass(1.0, c(1.0)).unwrap().mp_norm(p) - 1.0).abs() < 1e-15);
        assert!((DiscreteMeasure::point_mass(1.0, c(2.0)).unwrap().mp_norm(p) - 2.0).abs() < 1e-15);
        let two = DiscreteMeasure::new(vec![(0.0, c(1.0)), (PI, c(1.0))]).unwrap();
        assert!((two.mp_norm(p) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn windows() {
        let d0 = DiscreteMeasure::point_mass(0.0, c(1.0)).unwrap();
        assert_eq!(toeplitz_window(&d0, 3).unwrap(), ComplexMatrix::ones(3, 3).unwrap());
        let d = DiscreteMeasure::point_mass(0.4, c(1.0)).unwrap();
        let w = toeplitz_window(&d, 4).unwrap();
        assert!((w.get(3, 1) - C64::from_polar(1.0, -0.8)).norm() < 1e-14);
        let s = crate::linalg::singular_values(&w).unwrap();
        assert!(s[1] < 1e-12);
        let sum = toeplitz_window(&d0.add(&d), 4).unwrap();
        assert!(sum.sub(&toeplitz_window(&d0, 4).unwrap().add(&w).unwrap()).unwrap().max_abs() < 1e-14);
        let sh = shifted_toeplitz_window(&d, 3, 2).unwrap();
        assert!((sh.get(0, 0) - d.fourier_coefficient(-2)).norm() < 1e-15);
        assert!(DiscreteMeasure::new(vec![(0.0, c(1.0)), (TAU, c(1.0))]).is_err());
    }

    #[test]
    fn arc_witness_examples() {
        let single = DiscreteMeasure::point_mass(1.0, c(1.0)).unwrap();
        let w = arc_witness(&single, 0.3, 32).unwrap();
        assert!((w.x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        let two = DiscreteMeasure::new(vec![(0.0, c(1.0)), (PI, c(1.0))]).unwrap();
        let w = arc_witness(&two, PI / 8.0, 64).unwrap();
        assert!(w.gram_max < ARC_GRAM_LIMIT);
        let close = DiscreteMeasure::new(vec![(0.0, c(1.0)), (0.1, c(1.0))]).unwrap();
        assert!(arc_witness(&close, 0.3, 64).is_err());
    }

    #[test]
    fn wiener_means() {
        let d = DiscreteMeasure::point_mass(2.0, c(1.0)).unwrap();
        assert!((wiener_mean(&d, 17).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(wiener_mean(&DiscreteMeasure::empty(), 3).unwrap(), 0.0);
        let two = DiscreteMeasure::new(vec![(1.0, c(1.0)), (1.0 + 2f64.sqrt(), c(1.0))]).unwrap();
        assert!((wiener_mean(&two, 4096).unwrap() - 2.0).abs() < 0.1);
    }

    #[test]
    fn greedy_recovers_single_atom() {
        let f = omega_kernel(5).unwrap();
        let d = greedy_atomic_decompose(&f, 0.5, 4, 1e-9).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.converged && d.relative_residual < 1e-12, "{d:?}");
        let zero = greedy_atomic_decompose(&TrigPolynomial::zero(), 0.5, 4, 1e-3).unwrap();
        assert!(zero.terms.is_empty());
    }

    #[test]
    fn greedy_two_scales() {
        let f = shifted_omega(4, 0.0).unwrap().add(&shifted_omega(6, 0.5).unwrap());
        let d = greedy_atomic_decompose(&f, 0.5, 8, 1e-3).unwrap();
        assert!(d.converged && d.terms.len() <= 8, "{d:?}");
        assert!(d.p_energy_history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn omega_decay_for_point_mass() {
        let d0 = DiscreteMeasure::point_mass(0.0, c(1.0)).unwrap();
        let rows = omega_convolution_decay(&d0, &SmoothCutoffSpec::OmegaPlateau { dilation: 1.0 }, 0.5, &[5, 7, 9]).unwrap();
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        assert!(ratios.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.02), "{ratios:?}");
        let empty = omega_convolution_decay(&DiscreteMeasure::empty(), &SmoothCutoffSpec::OmegaPlateau { dilation: 1.0 }, 0.5, &[3]).unwrap();
        assert_eq!(empty[0].value, 0.0);
    }
}

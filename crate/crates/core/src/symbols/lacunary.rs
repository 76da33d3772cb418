//! Covers of lacunary frequency sets by separated intervals.

use crate::error::{input, Error, Result};

/// Disjoint intervals `[ξ_k, η_k)` separated by gaps of ratio at least `d`,
/// each of relative length below `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub xi: Vec<u64>,
    pub eta: Vec<u64>,
    pub d: f64,
    pub big_d: f64,
}

impl GapProfile {
    pub fn new(xi: Vec<u64>, eta: Vec<u64>, d: f64, big_d: f64) -> Result<Self> {
        let g = Self { xi, eta, d, big_d };
        g.validate()?;
        Ok(g)
    }

    /// Checks `ξ_k < η_k < ξ_{k+1}`, `ξ_{k+1}/η_k > d` and `η_k/ξ_k < D`.
    pub fn validate(&self) -> Result<()> {
        if self.xi.is_empty() || self.xi.len() != self.eta.len() {
            return input("gap profile needs equally many (and at least one) ξ and η");
        }
        if !(self.d > 1.0 && self.big_d > 1.0) {
            return input(format!("gap constants must exceed one, got d={}, D={}", self.d, self.big_d));
        }
        for k in 0..self.xi.len() {
            let (x, e) = (self.xi[k], self.eta[k]);
            if x == 0 || x >= e {
                return input(format!("interval {k} is [{x}, {e})"));
            }
            if e as f64 / x as f64 >= self.big_d {
                return input(format!("interval {k}: η/ξ = {e}/{x} is not below D = {}", self.big_d));
            }
            if let Some(&next) = self.xi.get(k + 1) {
                if e >= next || next as f64 / e as f64 <= self.d {
                    return input(format!("gap after interval {k}: ξ/η = {next}/{e} is not above d = {}", self.d));
                }
            }
        }
        Ok(())
    }

    /// Index of the interval containing `n`.
    pub fn interval_of(&self, n: u64) -> Option<usize> {
        let k = self.xi.partition_point(|&x| x <= n);
        (k > 0 && n < self.eta[k - 1]).then(|| k - 1)
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

/// Covers a finite union of at most `N` lacunary sequences of ratio `ρ` by a
/// gap profile.
///
/// Among any `N + 1` consecutive ratios `n_{j+1}/n_j` one exceeds `ρ^{1/N}`;
/// cutting the sequence at those ratios yields runs of at most `N + 1` terms.
/// Each run becomes `[first, last + 1)`. Runs that touch (`last + 1` equal to
/// the next first term) are merged. The reported `d` is the midpoint between 1
/// and the smallest separation ratio; `D` is the largest length ratio plus one.
pub fn lacunary_cover(n: &[u64], rho: f64, big_n: u32) -> Result<GapProfile> {
    if n.is_empty() {
        return input("lacunary cover needs at least one term");
    }
    if !(rho > 1.0 && rho.is_finite()) || big_n == 0 {
        return input(format!("lacunary cover needs ρ > 1 and N >= 1, got ρ={rho}, N={big_n}"));
    }
    if n[0] == 0 || n.windows(2).any(|w| w[1] <= w[0]) {
        return input("frequencies must be strictly increasing positive integers");
    }
    let threshold = rho.powf(1.0 / big_n as f64);
    let is_gap = |j: usize| n[j + 1] as f64 / n[j] as f64 > threshold;
    let ratios = n.len() - 1;
    let window = big_n as usize + 1;
    if ratios >= window {
        for start in 0..=(ratios - window) {
            if !(start..start + window).any(is_gap) {
                return Err(Error::Classification(format!(
                    "no ratio above ρ^(1/N) = {threshold:.6} among n[{start}..={}] = {:?}",
                    start + window,
                    &n[start..=start + window]
                )));
            }
        }
    }
    let mut xi = vec![n[0]];
    let mut eta = Vec::new();
    for j in 0..ratios {
        if is_gap(j) {
            eta.push(n[j] + 1);
            xi.push(n[j + 1]);
        }
    }
    eta.push(n[ratios] + 1);

    let (mut mxi, mut meta) = (vec![xi[0]], vec![eta[0]]);
    for k in 1..xi.len() {
        if xi[k] == *meta.last().unwrap() {
            *meta.last_mut().unwrap() = eta[k];
        } else {
            mxi.push(xi[k]);
            meta.push(eta[k]);
        }
    }
    let min_sep = (1..mxi.len())
        .map(|k| mxi[k] as f64 / meta[k - 1] as f64)
        .fold(f64::INFINITY, f64::min);
    let d = if min_sep.is_finite() { 0.5 * (1.0 + min_sep) } else { 0.5 * (1.0 + threshold) };
    let max_len = mxi
        .iter()
        .zip(&meta)
        .map(|(&x, &e)| e as f64 / x as f64)
        .fold(1.0, f64::max);
    GapProfile::new(mxi, meta, d, max_len + 1.0)
}

//! Besov norms through Littlewood–Paley blocks, lacunary scores and
//! finite-difference seminorms.

use crate::error::{input, Error, Result};
use crate::linalg::{lq_aggregate, PExponent, C64};
use crate::symbols::{
    dyadic_block, dyadic_range, lacunary_cover, lp_norm, lp_norm_on_grid, sample_on_grid, GapProfile,
    SmoothCutoffSpec, Spectrum, TrigPolynomial, DEFAULT_OVERSAMPLE,
};

/// Smoothness `s`, integrability `p` and summability `q` (`q = ∞` allowed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        if !s.is_finite() || !(p > 0.0 && p.is_finite()) || !(q > 0.0) {
            return input(format!("Besov parameters need finite s, p > 0 and q in (0, ∞], got ({s}, {p}, {q})"));
        }
        Ok(Self { s, p, q })
    }
}

/// One dyadic block of a Besov evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRow {
    pub n: i64,
    pub block_lp: f64,
    pub weighted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesovReport {
    pub norm: f64,
    pub blocks: Vec<BlockRow>,
    /// False if any block quadrature stopped without meeting its tolerance.
    pub converged: bool,
}

/// `(Σ_n 2^{|n| s q} ‖ψ * V_n‖_p^q)^{1/q}`, or the supremum when `q = ∞`.
pub fn besov_norm<S: Spectrum + ?Sized>(psi: &S, params: BesovParams, v: &SmoothCutoffSpec) -> Result<BesovReport> {
    let mut blocks = Vec::new();
    let mut converged = true;
    for n in dyadic_range(psi) {
        let block = dyadic_block(psi, n, v)?;
        let lp = lp_norm(&block, params.p, DEFAULT_OVERSAMPLE)?;
        converged &= lp.converged;
        let weight = 2f64.powf(n.unsigned_abs() as f64 * params.s);
        blocks.push(BlockRow {
            n,
            block_lp: lp.value,
            weighted: weight * lp.value,
        });
    }
    let weighted: Vec<f64> = blocks.iter().map(|b| b.weighted).collect();
    Ok(BesovReport {
        norm: lq_aggregate(&weighted, params.q),
        blocks,
        converged,
    })
}

/// Frequencies `n_j` with amplitudes `λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LacunarySymbolSpec {
    pub frequencies: Vec<u64>,
    pub amplitudes: Vec<C64>,
}

impl LacunarySymbolSpec {
    pub fn new(frequencies: Vec<u64>, amplitudes: Vec<C64>) -> Result<Self> {
        if frequencies.len() != amplitudes.len() || frequencies.is_empty() {
            return input("lacunary spec needs equally many frequencies and amplitudes");
        }
        if frequencies[0] == 0 || frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return input("lacunary frequencies must be strictly increasing positive integers");
        }
        Ok(Self { frequencies, amplitudes })
    }

    pub fn to_symbol(&self) -> Result<crate::symbols::AnalyticSymbol> {
        let terms: Vec<(usize, C64)> = self
            .frequencies
            .iter()
            .zip(&self.amplitudes)
            .map(|(&n, &a)| (n as usize, a))
            .collect();
        crate::symbols::AnalyticSymbol::from_sparse(&terms)
    }
}

/// Asymptotic model for the weighted amplitudes `n_j^{1/p#}|λ_j| ~ C j^{-a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub decay_exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LacunaryScore {
    pub in_mp: bool,
    /// The `ℓ^{p#}` score of the given (finite) terms.
    pub score: f64,
    pub rho: f64,
    pub big_n: u32,
    pub cover: GapProfile,
}

/// Classifies a lacunary symbol by the `ℓ^{p#}` norm of `n_j^{1/p#}|λ_j|`.
///
/// With `cover = None` the lacunarity parameters are searched over
/// `N = 1..=4` and `ρ = 2.0, 1.9, ..., 1.1`; the first success is reported.
pub fn lacunary_membership(
    spec: &LacunarySymbolSpec,
    p: PExponent,
    cover: Option<(f64, u32)>,
    tail: Option<TailModel>,
) -> Result<LacunaryScore> {
    let (rho, big_n, profile) = match cover {
        Some((rho, big_n)) => (rho, big_n, lacunary_cover(&spec.frequencies, rho, big_n)?),
        None => auto_cover(&spec.frequencies)?,
    };
    let score = match p.sharp() {
        crate::Sharp::Infinite => spec.amplitudes.iter().fold(0.0_f64, |m, a| m.max(a.norm())),
        sharp => {
            let terms: Vec<f64> = spec
                .frequencies
                .iter()
                .zip(&spec.amplitudes)
                .map(|(&n, a)| (n as f64).powf(sharp.reciprocal()) * a.norm())
                .collect();
            sharp.aggregate(&terms)
        }
    };
    let in_mp = match tail {
        None => score.is_finite(),
        Some(t) => match p.sharp() {
            crate::Sharp::Infinite => t.decay_exponent >= 0.0,
            crate::Sharp::Finite(q) => t.decay_exponent * q > 1.0,
        },
    };
    Ok(LacunaryScore {
        in_mp,
        score,
        rho,
        big_n,
        cover: profile,
    })
}

fn auto_cover(n: &[u64]) -> Result<(f64, u32, GapProfile)> {
    let mut last = None;
    for big_n in 1..=4 {
        for step in (11..=20).rev() {
            let rho = step as f64 / 10.0;
            match lacunary_cover(n, rho, big_n) {
                Ok(g) => return Ok((rho, big_n, g)),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(Error::Classification(format!(
        "no lacunary cover with N <= 4 and ρ >= 1.1: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// `‖ψ‖` in `B^{1/p#}_{p,p#}` after checking that the spectrum sits inside the
/// profile's intervals.
pub fn gap_necessary_score<S: Spectrum + ?Sized>(psi: &S, profile: &GapProfile, p: PExponent) -> Result<f64> {
    profile.validate()?;
    let trig = psi.to_trig();
    let offending: Vec<i64> = match trig.support() {
        None => vec![],
        Some((lo, hi)) => (lo..=hi)
            .filter(|&k| trig.coeff(k) != C64::new(0.0, 0.0))
            .filter(|&k| k < 0 || profile.interval_of(k as u64).is_none())
            .collect(),
    };
    if !offending.is_empty() {
        let shown: Vec<String> = offending.iter().take(20).map(|k| k.to_string()).collect();
        return input(format!(
            "{} coefficient(s) outside the gap profile, e.g. indices {}",
            offending.len(),
            shown.join(", ")
        ));
    }
    let params = BesovParams::new(p.inv_sharp(), p.p(), p.sharp().value())?;
    Ok(besov_norm(psi, params, &SmoothCutoffSpec::VPartition)?.norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifferenceReport {
    /// `max(rotation_sup, radial_sup)`.
    pub value: f64,
    pub rotation_sup: f64,
    pub radial_sup: f64,
    /// Rotation supremum over every other grid point.
    pub half_grid_rotation_sup: f64,
}

/// Supremum of `‖f(ζ·) - f‖_p / |ζ - 1|^s` over `grid` rotations together with
/// the radial variant `‖f - f_r‖_p / (1 - r)^s` over `r = 1 - 2^{-k}`.
pub fn finite_difference_besov<S: Spectrum + ?Sized>(psi: &S, s: f64, p: f64, grid: usize) -> Result<FiniteDifferenceReport> {
    if !(s > 0.0 && s < 1.0) || !(p > 0.0) {
        return input(format!("finite differences need s in (0,1) and p > 0, got s={s}, p={p}"));
    }
    if grid < 64 {
        return input(format!("rotation grid must have at least 64 points, got {grid}"));
    }
    let Some((lo, hi)) = psi.support() else {
        return Ok(FiniteDifferenceReport {
            value: 0.0,
            rotation_sup: 0.0,
            radial_sup: 0.0,
            half_grid_rotation_sup: 0.0,
        });
    };
    let span = (hi - lo) as usize + 1;
    let points = grid * (DEFAULT_OVERSAMPLE * span).div_ceil(grid);
    let mut values = sample_on_grid(psi, points)?;
    // Undo the modulation left by the sampler so that rotations act as shifts.
    for (l, v) in values.iter_mut().enumerate() {
        let turns = (lo.rem_euclid(points as i64) as u128 * l as u128 % points as u128) as f64 / points as f64;
        *v *= C64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns);
    }
    let stride = points / grid;
    let mut rotation_sup: f64 = 0.0;
    let mut half_sup: f64 = 0.0;
    for k in 1..grid {
        let shift = k * stride;
        let mean = crate::linalg::compensated_sum(
            (0..points).map(|l| (values[(l + shift) % points] - values[l]).norm().powf(p)),
        ) / points as f64;
        let dist = 2.0 * (std::f64::consts::PI * k as f64 / grid as f64).sin().abs();
        let ratio = mean.powf(1.0 / p) / dist.powf(s);
        rotation_sup = rotation_sup.max(ratio);
        if k % 2 == 0 {
            half_sup = half_sup.max(ratio);
        }
    }
    let trig: TrigPolynomial = psi.to_trig();
    let mut radial_sup: f64 = 0.0;
    for k in 1..=40 {
        let gap = 2f64.powi(-k);
        let r = 1.0 - gap;
        let diff = trig.map(|j, c| c * (1.0 - r.powf(j.unsigned_abs() as f64)));
        let norm = lp_norm_on_grid(&diff, p, points)?;
        radial_sup = radial_sup.max(norm / gap.powf(s));
    }
    Ok(FiniteDifferenceReport {
        value: rotation_sup.max(radial_sup),
        rotation_sup,
        radial_sup,
        half_grid_rotation_sup: half_sup,
    })
}

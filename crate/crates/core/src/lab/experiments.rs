use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ExperimentConfig, RatioRecord, Registered};
use crate::besov::{besov_norm, gap_necessary_score, lacunary_membership, BesovParams, LacunarySymbolSpec};
use crate::error::{input, Error, Result};
use crate::linalg::{schatten_from_singular_values, schatten_norm, singular_values, PExponent, C64};
use crate::measures::{
    arc_witness, greedy_atomic_decompose, omega_convolution_decay, shifted_omega, toeplitz_window, wiener_mean,
    DiscreteMeasure,
};
use crate::multiplier::{
    check_bracket, coefficient_bound_check, hankel_scores, mollifier_convergence, mult_lower_rank1_with,
    mult_upper_hadamard, mult_upper_hankel_poly, r_family_score, strip_upper_hadamard, AscentOptions,
    RankOneObjective,
};
use crate::symbols::{
    backward_shift, dyadic_block, fejer_square, hankel_matrix, lp_norm, phi_witness, rotate, sample_on_grid,
    sampled_polynomial, v_partition, AnalyticSymbol, GapProfile, SmoothCutoffSpec, Spectrum, TrigPolynomial,
    DEFAULT_OVERSAMPLE,
};

const P_GRID: &str = "1/2,2/3";

pub(crate) static REGISTRY: &[Registered] = &[
    Registered {
        name: "fm-scaling",
        anchor: "the L^p quasi-norm of the sampled polynomial sum_k F(k/m) z^k of a smooth compactly supported F is comparable to m^(1-1/p)",
        defaults: &[("p", "1/3,1/2,1"), ("m", "16,32,64,128,256,512")],
        bounded: true,
        run: fm_scaling,
    },
    Registered {
        name: "hankel-sp-block",
        anchor: "for psi with spectrum in (2^(n-1), 2^(n+1)) the Schatten S_p quasi-norm of its Hankel matrix is comparable to 2^(n/p) ||psi||_p",
        defaults: &[("p", P_GRID), ("n", "4,5,6,7,8,9"), ("symbol", "random"), ("seed", "11")],
        bounded: true,
        run: hankel_sp_block,
    },
    Registered {
        name: "hankel-mp-block",
        anchor: "for psi with spectrum in (2^(n-1), 2^(n+1)) the Schur multiplier norm of its Hankel matrix on S_p is comparable to 2^(n/p#) ||psi||_p",
        defaults: &[("p", P_GRID), ("n", "4,5,6,7,8,9"), ("symbol", "random"), ("seed", "11")],
        bounded: true,
        run: hankel_mp_block,
    },
    Registered {
        name: "global-bounds",
        anchor: "the Hankel multiplier norm on S_p lies between multiples of the B^(1/p#)_(p,inf) and B^(1/p#)_(p,p) norms of the symbol",
        defaults: &[("p", P_GRID), ("degree", "48"), ("instances", "4"), ("seed", "21")],
        bounded: true,
        run: global_bounds,
    },
    Registered {
        name: "lacunary",
        anchor: "for lacunary symbols sum lambda_j z^(n_j) the Hankel multiplier norm on S_p is comparable to the l^(p#) norm of n_j^(1/p#) |lambda_j|",
        defaults: &[("p", "1/2"), ("model", "finite,divergent"), ("j_max", "8")],
        bounded: true,
        run: lacunary,
    },
    Registered {
        name: "gap-necessary",
        anchor: "if the spectrum of psi lies in separated intervals of bounded length ratio then the B^(1/p#)_(p,p#) norm is dominated by the Hankel multiplier norm on S_p",
        defaults: &[("p", P_GRID), ("intervals", "3"), ("instances", "3"), ("seed", "31")],
        bounded: true,
        run: gap_necessary,
    },
    Registered {
        name: "gap-sufficient",
        anchor: "for spectra in rapidly separating short intervals membership in B^(1/p#)_(p,p#) suffices for the Hankel matrix to multiply S_p",
        defaults: &[("p", P_GRID), ("intervals", "3"), ("instances", "3"), ("seed", "41")],
        bounded: true,
        run: gap_sufficient,
    },
    Registered {
        name: "strip-sufficient",
        anchor: "the Hankel multiplier norm on S_p is dominated by the B^(1/p#)_(r,r-flat) norm for p <= r <= min(1, p-flat)",
        defaults: &[("p", P_GRID), ("degree", "48"), ("instances", "4"), ("seed", "51")],
        bounded: true,
        run: strip_sufficient,
    },
    Registered {
        name: "bozejko-score",
        anchor: "the B^(1/p#)_(2,p#) norm compared with the Hankel multiplier norm on S_p",
        defaults: &[("p", P_GRID), ("degree", "48"), ("instances", "4"), ("seed", "51")],
        bounded: true,
        run: bozejko_score,
    },
    Registered {
        name: "rn-lower",
        anchor: "the Hankel multiplier norm on S_p dominates 2^(n/p#) ||psi * V_n||_p uniformly in n",
        defaults: &[("p", P_GRID), ("levels", "1,2,3,4,5"), ("instances", "2"), ("seed", "61")],
        bounded: true,
        run: rn_lower,
    },
    Registered {
        name: "toeplitz-measure",
        anchor: "the Toeplitz matrix of a discrete measure multiplies S_p with norm (sum |w|^p)^(1/p) exactly",
        defaults: &[
            ("p", "1/3,1/2,2/3"),
            ("window", "32,64,128,256"),
            ("measure", "pair"),
            ("atoms", "4"),
            ("instances", "1"),
            ("seed", "71"),
            ("arc_width", "auto"),
        ],
        bounded: true,
        run: toeplitz_measure,
    },
    Registered {
        name: "omega-decay",
        anchor: "a discrete measure mu satisfies ||mu * Omega_n||_p comparable to 2^(n(1-1/p)) (sum |w|^p)^(1/p)",
        defaults: &[
            ("p", P_GRID),
            ("n", "4,5,6,7,8,9,10"),
            ("measure", "pair"),
            ("atoms", "3"),
            ("instances", "1"),
            ("seed", "81"),
        ],
        bounded: true,
        run: omega_decay,
    },
    Registered {
        name: "atomic-greedy",
        anchor: "trigonometric polynomials decompose into shifted atoms Omega_n(x - s) with sum |alpha|^p 2^(n(p-1)) controlled by ||f||_p^p",
        defaults: &[
            ("p", P_GRID),
            ("instances", "3"),
            ("atoms", "3"),
            ("scales", "3,4,5,6"),
            ("max_terms", "12"),
            ("tol", "1e-6"),
            ("seed", "91"),
        ],
        bounded: false,
        run: atomic_greedy,
    },
    Registered {
        name: "besov-witness",
        anchor: "for 2/3 < p < 1 the sums sum a_n Phi_n(e^(in/2^n) z) with a_n = 1/n stay bounded in B^(1/p#)_(p,p-flat) while their L^1 norms grow like sum 1/n",
        defaults: &[("p", "0.8,0.9"), ("extra_terms", "8")],
        bounded: false,
        run: besov_witness,
    },
    Registered {
        name: "dirichlet-sum",
        anchor: "sum_n |Q_(2^n)(e^(in/2^n) z)| / (2^(n+1)+1) is bounded uniformly on the circle",
        defaults: &[("levels", "12"), ("grid_factor", "8")],
        bounded: true,
        run: dirichlet_sum,
    },
    Registered {
        name: "wiener-mean",
        anchor: "the means (N+1)^(-1) sum_(k<=N) |mu-hat(k)|^2 tend to the sum of squared atom weights",
        defaults: &[
            ("window", "256,512,1024,2048,4096"),
            ("measure", "pair"),
            ("atoms", "3"),
            ("instances", "1"),
            ("seed", "101"),
        ],
        bounded: true,
        run: wiener_mean_experiment,
    },
    Registered {
        name: "coefficient-bound",
        anchor: "a Taylor coefficient is bounded by a Fejer-weighted local l^2 mean and the Hankel multiplier norm on S_p",
        defaults: &[("p", P_GRID), ("instances", "10"), ("degree", "32"), ("seed", "111")],
        bounded: false,
        run: coefficient_bound,
    },
    Registered {
        name: "mollifier",
        anchor: "Schur products with the Hankel matrices of F((j+k)/m) converge to the identity multiplier as m grows",
        defaults: &[("p", P_GRID), ("size", "12"), ("m", "1,2,4,8,16,32,64"), ("seed", "121")],
        bounded: false,
        run: mollifier,
    },
    Registered {
        name: "shift-monotone",
        anchor: "the backward shift never increases the Hankel multiplier norm on S_p",
        defaults: &[("p", P_GRID), ("degree", "40"), ("shifts", "0,1,2,4,8,16"), ("instances", "2"), ("seed", "131")],
        bounded: false,
        run: shift_monotone,
    },
];

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gauss(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

fn exponents(cfg: &ExperimentConfig) -> Result<Vec<PExponent>> {
    cfg.f64_list("p")?.into_iter().map(PExponent::new).collect()
}

fn record(cfg: &ExperimentConfig, params: String, low: f64, high: f64, reference: f64) -> Result<RatioRecord> {
    RatioRecord::new(&cfg.experiment, params, low, high, reference)
}

fn lp(f: &(impl Spectrum + ?Sized), p: f64) -> Result<f64> {
    Ok(lp_norm(f, p, DEFAULT_OVERSAMPLE)?.value)
}

/// Random symbol of the given degree with coefficients decaying like `(k+1)^{-a}`.
fn random_decaying_symbol(degree: usize, r: &mut ChaCha8Rng) -> Result<AnalyticSymbol> {
    let a: f64 = r.random_range(0.0..2.0);
    let coeffs = (0..=degree).map(|k| gauss(r) * (k as f64 + 1.0).powf(-a)).collect();
    AnalyticSymbol::new(coeffs)
}

/// Uniform witnesses on the leading `L x L` windows, `L = 1, 2, 4, ..., n`.
fn leading_windows(n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut sizes: Vec<usize> = std::iter::successors(Some(1usize), |l| Some(l * 2)).take_while(|&l| l < n).collect();
    sizes.push(n);
    sizes
        .into_iter()
        .map(|l| {
            let v: Vec<f64> = (0..n).map(|i| if i < l { 1.0 } else { 0.0 }).collect();
            (v.clone(), v)
        })
        .collect()
}

fn witness_options(extra: Vec<(Vec<f64>, Vec<f64>)>) -> AscentOptions {
    let mut opts = AscentOptions::new(0, 0);
    opts.evaluate_only = true;
    opts.extra_starts = extra;
    opts
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    lower: f64,
    upper: f64,
}

/// Witness lower bound and the Hadamard / polynomial certificates on the
/// smallest window that carries the whole symbol.
fn hankel_bracket(psi: &AnalyticSymbol, p: PExponent, extra: Vec<(Vec<f64>, Vec<f64>)>, row_cuts: Option<&[usize]>) -> Result<Bracket> {
    let n = psi.degree() + 1;
    let a = hankel_matrix(psi, n, n)?;
    let mut starts = leading_windows(n);
    starts.extend(extra);
    let lower = mult_lower_rank1_with(&a, p, &witness_options(starts))?.value;
    let mut upper = mult_upper_hadamard(&a, p)?.min(mult_upper_hankel_poly(psi, p)?);
    if let Some(cuts) = row_cuts {
        upper = upper.min(strip_upper_hadamard(&a, cuts, p)?);
    }
    check_bracket(lower, upper, "hankel")?;
    Ok(Bracket { lower, upper })
}

fn dyadic_cuts(n: usize) -> Vec<usize> {
    let mut cuts = vec![0];
    let mut c = 1;
    while c < n {
        cuts.push(c);
        c *= 2;
    }
    cuts.push(n);
    cuts
}

fn fm_scaling(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let f = SmoothCutoffSpec::default();
    let mut out = Vec::new();
    for p in exponents(cfg)? {
        for m in cfg.u64_list("m")? {
            let v = lp(&sampled_polynomial(&f, m)?, p.p())?;
            let reference = (m as f64).powf(1.0 - 1.0 / p.p());
            out.push(record(cfg, format!("p={};m={m}", p.p()), v, v, reference)?);
        }
    }
    Ok(out)
}

fn block_symbol(kind: &str, n: u64, seed: u64) -> Result<AnalyticSymbol> {
    if !(1..=12).contains(&n) {
        return input(format!("block level n must lie in 1..=12, got {n}"));
    }
    match kind {
        "random" => {
            let mut r = rng(seed, n);
            let lo = (1usize << (n - 1)) + 1;
            let hi = (1usize << (n + 1)) - 1;
            let terms: Vec<(usize, C64)> = (lo..=hi).map(|k| (k, gauss(&mut r))).collect();
            AnalyticSymbol::from_sparse(&terms)
        }
        "monomial" => AnalyticSymbol::monomial(3 << n, C64::new(1.0, 0.0)),
        other => input(format!("symbol must be random or monomial, got `{other}`")),
    }
}

/// Singular values of the full Hankel window and of the leading half and quarter windows.
struct BlockSpectra {
    full: Vec<f64>,
    full_size: usize,
    leading: Vec<(usize, Vec<f64>)>,
}

fn block_spectra(psi: &AnalyticSymbol, n: u64) -> Result<BlockSpectra> {
    let size = psi.degree() + 1;
    let a = hankel_matrix(psi, size, size)?;
    let full = singular_values(&a)?;
    let mut leading = Vec::new();
    for l in [1usize << (n - 1), 1usize << n] {
        if l < size {
            leading.push((l, singular_values(&a.block(0, l, 0, l)?)?));
        }
    }
    Ok(BlockSpectra {
        full,
        full_size: size,
        leading,
    })
}

fn hankel_sp_block(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let (kind, seed) = (cfg.string("symbol")?, cfg.u64("seed")?);
    let ps = exponents(cfg)?;
    let mut out = Vec::new();
    for n in cfg.u64_list("n")? {
        let psi = block_symbol(kind, n, seed)?;
        let s = singular_values(&hankel_matrix(&psi, psi.degree() + 1, psi.degree() + 1)?)?;
        for &p in &ps {
            let v = schatten_from_singular_values(&s, p.p()).value;
            let reference = 2f64.powf(n as f64 / p.p()) * lp(&psi, p.p())?;
            out.push(record(cfg, format!("p={};n={n};symbol={kind}", p.p()), v, v, reference)?);
        }
    }
    Ok(out)
}

fn hankel_mp_block(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let (kind, seed) = (cfg.string("symbol")?, cfg.u64("seed")?);
    let ps = exponents(cfg)?;
    let mut out = Vec::new();
    for n in cfg.u64_list("n")? {
        let psi = block_symbol(kind, n, seed)?;
        let spectra = block_spectra(&psi, n)?;
        for &p in &ps {
            // Uniform witnesses on leading windows: diag(y) Γ diag(x) = Γ_L / L.
            let mut lower = schatten_from_singular_values(&spectra.full, p.p()).value / spectra.full_size as f64;
            for (l, s) in &spectra.leading {
                lower = lower.max(schatten_from_singular_values(s, p.p()).value / *l as f64);
            }
            let hadamard = if p.is_one() {
                spectra.full[0]
            } else {
                schatten_from_singular_values(&spectra.full, p.sharp().value()).value
            };
            let upper = hadamard.min(mult_upper_hankel_poly(&psi, p)?);
            check_bracket(lower, upper, "hankel block")?;
            let reference = 2f64.powf(n as f64 * p.inv_sharp()) * lp(&psi, p.p())?;
            out.push(record(cfg, format!("p={};n={n};symbol={kind}", p.p()), lower, upper, reference)?);
        }
    }
    Ok(out)
}

fn besov(psi: &AnalyticSymbol, s: f64, p: f64, q: f64) -> Result<f64> {
    Ok(besov_norm(psi, BesovParams::new(s, p, q)?, &SmoothCutoffSpec::VPartition)?.norm)
}

fn global_bounds(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let (degree, seed) = (cfg.usize("degree")?, cfg.u64("seed")?);
    let mut out = Vec::new();
    for i in 0..cfg.u64("instances")? {
        let psi = random_decaying_symbol(degree, &mut rng(seed, i))?;
        for p in exponents(cfg)? {
            let sc = hankel_scores(&psi, p)?;
            let b = hankel_bracket(&psi, p, vec![], None)?;
            let base = format!("p={};instance={i}", p.p());
            out.push(record(cfg, format!("{base};side=lower"), b.lower, b.upper, sc.global_lower)?);
            out.push(record(cfg, format!("{base};side=upper"), b.lower, b.upper, sc.global_upper)?);
        }
    }
    Ok(out)
}

/// Witness for `Σ λ_j z^{2^j}`: on rows `R_j = [2^{j-2}, 2^{j-1})` and columns
/// `2^j - R_j` the Hankel matrix is `λ_j` times an anti-identity.
fn lacunary_witness(lambdas: &[f64], p: PExponent, size: usize) -> (Vec<f64>, Vec<f64>) {
    let blocks: Vec<(usize, usize, f64)> = lambdas
        .iter()
        .enumerate()
        .map(|(i, &lam)| {
            let j = i as u32 + 1;
            let (start, len) = if j == 1 { (0, 1) } else { (1usize << (j - 2), 1usize << (j - 2)) };
            (start, len, lam.abs() * (len as f64).powf(p.inv_sharp()))
        })
        .collect();
    let weights: Vec<f64> = match p.sharp() {
        crate::Sharp::Infinite => {
            let best = blocks.iter().enumerate().fold(0, |b, (i, v)| if v.2 > blocks[b].2 { i } else { b });
            (0..blocks.len()).map(|i| if i == best { 1.0 } else { 0.0 }).collect()
        }
        crate::Sharp::Finite(q) => blocks.iter().map(|b| b.2.powf(q / 2.0)).collect(),
    };
    let (mut x, mut y) = (vec![0.0; size], vec![0.0; size]);
    for (i, (start, len, _)) in blocks.iter().enumerate() {
        let j = i as u32 + 1;
        let w = weights[i] / (*len as f64).sqrt();
        for r in *start..start + len {
            y[r] = w;
            x[(1usize << j) - r] = w;
        }
    }
    (x, y)
}

fn lacunary(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let j_max = cfg.u64("j_max")? as u32;
    if !(2..=11).contains(&j_max) {
        return input(format!("j_max must lie in 2..=11, got {j_max}"));
    }
    let mut out = Vec::new();
    for p in exponents(cfg)? {
        if p.is_one() {
            return input("the lacunary experiment needs p < 1");
        }
        let sharp = p.sharp().value();
        for model in cfg.strings("model")? {
            let lambda = |j: u32| -> Result<f64> {
                let base = 2f64.powf(-(j as f64) / sharp);
                match model.as_str() {
                    "finite" => Ok(base * (j as f64).powf(-2.0 / sharp)),
                    "divergent" => Ok(base),
                    other => input(format!("model must be finite or divergent, got `{other}`")),
                }
            };
            for big_j in 2..=j_max {
                let lambdas = (1..=big_j).map(lambda).collect::<Result<Vec<f64>>>()?;
                let spec = LacunarySymbolSpec::new(
                    (1..=big_j).map(|j| 1u64 << j).collect(),
                    lambdas.iter().map(|&l| C64::new(l, 0.0)).collect(),
                )?;
                let score = lacunary_membership(&spec, p, None, None)?.score;
                let psi = spec.to_symbol()?;
                let witness = lacunary_witness(&lambdas, p, psi.degree() + 1);
                let b = hankel_bracket(&psi, p, vec![witness], None)?;
                out.push(record(cfg, format!("p={};model={model};J={big_j}", p.p()), b.lower, b.upper, score)?);
            }
        }
    }
    Ok(out)
}

fn gap_symbol(profile: &GapProfile, amplitude: impl Fn(usize) -> f64, r: &mut ChaCha8Rng) -> Result<AnalyticSymbol> {
    let mut terms = Vec::new();
    for k in 0..profile.len() {
        for j in profile.xi[k]..profile.eta[k] {
            terms.push((j as usize, gauss(r) * amplitude(k)));
        }
    }
    AnalyticSymbol::from_sparse(&terms)
}

fn gap_records(cfg: &ExperimentConfig, profile: &GapProfile, amplitude: impl Fn(usize) -> f64, extra: &str) -> Result<Vec<RatioRecord>> {
    let seed = cfg.u64("seed")?;
    let mut out = Vec::new();
    for i in 0..cfg.u64("instances")? {
        let psi = gap_symbol(profile, &amplitude, &mut rng(seed, i))?;
        for p in exponents(cfg)? {
            if p.is_one() {
                return input("gap experiments need p < 1");
            }
            let score = gap_necessary_score(&psi, profile, p)?;
            let b = hankel_bracket(&psi, p, vec![], None)?;
            out.push(record(cfg, format!("p={};instance={i}{extra}", p.p()), b.lower, b.upper, score)?);
        }
    }
    Ok(out)
}

fn interval_count(cfg: &ExperimentConfig) -> Result<u32> {
    let k = cfg.u64("intervals")? as u32;
    if !(1..=4).contains(&k) {
        return input(format!("intervals must lie in 1..=4, got {k}"));
    }
    Ok(k)
}

fn gap_necessary(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let big_k = interval_count(cfg)?;
    let xi: Vec<u64> = (1..=big_k).map(|k| 2 * 4u64.pow(k)).collect();
    let eta: Vec<u64> = (1..=big_k).map(|k| 3 * 4u64.pow(k)).collect();
    let profile = GapProfile::new(xi, eta, 2.0, 2.0)?;
    gap_records(cfg, &profile, |k| 4f64.powi(-(k as i32 + 1)), "")
}

fn gap_sufficient(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let big_k = interval_count(cfg)?;
    let xi: Vec<u64> = (1..=big_k).map(|k| 8u64.pow(k)).collect();
    let eta: Vec<u64> = (1..=big_k).map(|k| 8u64.pow(k) + (1 << k)).collect();
    let profile = GapProfile::new(xi.clone(), eta.clone(), 2.0, 2.0)?;
    let mut out = Vec::new();
    for p in exponents(cfg)? {
        if p.is_one() {
            return input("gap experiments need p < 1");
        }
        // Partial sum of the separation series that the sufficient condition requires to converge.
        let series: f64 = (1..xi.len())
            .map(|k| ((eta[k] - xi[k] + eta[k - 1]) as f64 / eta[k] as f64).powf(2.0 * p.inv_sharp()))
            .sum();
        let mut sub = cfg.clone();
        sub.set("p", &p.p().to_string())?;
        out.extend(gap_records(&sub, &profile, |k| 8f64.powi(-(k as i32 + 1)), &format!(";series={series:.6e}"))?);
    }
    Ok(out)
}

fn decaying_instances(cfg: &ExperimentConfig) -> Result<Vec<AnalyticSymbol>> {
    let (degree, seed) = (cfg.usize("degree")?, cfg.u64("seed")?);
    (0..cfg.u64("instances")?)
        .map(|i| random_decaying_symbol(degree, &mut rng(seed, i)))
        .collect()
}

fn strip_sufficient(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (i, psi) in decaying_instances(cfg)?.iter().enumerate() {
        let cuts = dyadic_cuts(psi.degree() + 1);
        for p in exponents(cfg)? {
            let b = hankel_bracket(psi, p, vec![], Some(&cuts))?;
            let mut rs = vec![p.p()];
            let top = p.flat().min(1.0);
            if top > p.p() + 1e-12 {
                rs.push(top);
            }
            for r in rs {
                let score = r_family_score(psi, p, r)?;
                out.push(record(cfg, format!("p={};instance={i};r={r}", p.p()), b.lower, b.upper, score)?);
            }
        }
    }
    Ok(out)
}

fn bozejko_score(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (i, psi) in decaying_instances(cfg)?.iter().enumerate() {
        for p in exponents(cfg)? {
            let b = hankel_bracket(psi, p, vec![], None)?;
            let score = hankel_scores(psi, p)?.bozejko;
            out.push(record(cfg, format!("p={};instance={i}", p.p()), b.lower, b.upper, score)?);
        }
    }
    Ok(out)
}

fn rn_lower(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let levels = cfg.u64_list("levels")?;
    let top = *levels.iter().max().expect("validated nonempty");
    if levels.contains(&0) || top > 8 {
        return input("levels must lie in 1..=8");
    }
    let seed = cfg.u64("seed")?;
    let degree = 1usize << (top + 1);
    let mut out = Vec::new();
    for i in 0..cfg.u64("instances")? {
        let psi = random_decaying_symbol(degree, &mut rng(seed, i))?;
        let size = degree + 1;
        let gamma = hankel_matrix(&psi, size, size)?;
        for p in exponents(cfg)? {
            let upper = mult_upper_hadamard(&gamma, p)?.min(mult_upper_hankel_poly(&psi, p)?);
            for &n in &levels {
                let scale = 2f64.powi(n as i32);
                let v = TrigPolynomial::from_fn(0, 2 << n, |k| C64::new(v_partition(k as f64 / scale), 0.0))?;
                let block = dyadic_block(&psi, n as i64, &SmoothCutoffSpec::VPartition)?;
                // ‖Γ_ψ ⋆ Γ_V‖_{S_p} / ‖Γ_V‖_{S_p} is a lower bound for the multiplier norm.
                let num = schatten_norm(&hankel_matrix(&block, size, size)?, p.p())?.value;
                let den = schatten_norm(&hankel_matrix(&v, size, size)?, p.p())?.value;
                let lower = num / den;
                check_bracket(lower, upper, "rn-lower")?;
                let reference = 2f64.powf(n as f64 * p.inv_sharp()) * lp(&block, p.p())?;
                out.push(record(cfg, format!("p={};instance={i};n={n}", p.p()), lower, upper, reference)?);
            }
        }
    }
    Ok(out)
}

/// Measures named by the `measure` key: a fixed unit pair or seeded random atoms.
fn measures(cfg: &ExperimentConfig) -> Result<Vec<DiscreteMeasure>> {
    let count = cfg.u64("instances")?;
    match cfg.string("measure")? {
        "pair" => Ok(vec![DiscreteMeasure::new(vec![(0.5, C64::new(1.0, 0.0)), (2.5, C64::new(1.0, 0.0))])?]),
        "random" => {
            let atoms = cfg.usize("atoms")?.max(1);
            let seed = cfg.u64("seed")?;
            (0..count).map(|i| random_measure(atoms, 0.5, &mut rng(seed, i))).collect()
        }
        other => input(format!("measure must be pair or random, got `{other}`")),
    }
}

/// Between one and `max_atoms` atoms, pairwise at least `min_sep` apart.
pub(crate) fn random_measure(max_atoms: usize, min_sep: f64, r: &mut ChaCha8Rng) -> Result<DiscreteMeasure> {
    let count = r.random_range(1..=max_atoms);
    let mut atoms: Vec<(f64, C64)> = Vec::new();
    while atoms.len() < count {
        let theta: f64 = r.random_range(0.0..std::f64::consts::TAU);
        let far = atoms.iter().all(|(t, _)| {
            let d = (t - theta).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d) >= min_sep
        });
        if far {
            atoms.push((theta, gauss(r)));
        }
    }
    DiscreteMeasure::new(atoms)
}

/// Arc width used when none is configured: half the atom separation, at most one.
pub fn default_arc_width(mu: &DiscreteMeasure) -> f64 {
    mu.min_separation().map_or(1.0, |s| (0.5 * s).min(1.0))
}

/// Arc-witness lower bound for the `n x n` Toeplitz window of `μ`.
pub fn toeplitz_arc_lower(mu: &DiscreteMeasure, p: PExponent, n: usize, width: f64) -> Result<f64> {
    let w = arc_witness(mu, width, n)?;
    let a = toeplitz_window(mu, n)?;
    Ok(RankOneObjective::new(&a, p).eval(&w.x, &w.y))
}

fn toeplitz_measure(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let width_key = cfg.string("arc_width")?.to_string();
    let mut out = Vec::new();
    for (i, mu) in measures(cfg)?.iter().enumerate() {
        let width = if width_key == "auto" {
            default_arc_width(mu)
        } else {
            super::config::parse_number("arc_width", &width_key)?
        };
        for p in exponents(cfg)? {
            let exact = mu.mp_norm(p);
            for n in cfg.u64_list("window")? {
                let lower = toeplitz_arc_lower(mu, p, n as usize, width)?;
                check_bracket(lower, exact, "measure norm")?;
                out.push(record(cfg, format!("p={};instance={i};N={n}", p.p()), lower, exact, exact)?);
            }
        }
    }
    Ok(out)
}

fn omega_decay(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let ns: Vec<u32> = cfg.u64_list("n")?.into_iter().map(|n| n as u32).collect();
    let mut out = Vec::new();
    for (i, mu) in measures(cfg)?.iter().enumerate() {
        for p in exponents(cfg)? {
            let mass = mu.mp_norm(p);
            for row in omega_convolution_decay(mu, &SmoothCutoffSpec::default(), p.p(), &ns)? {
                out.push(record(cfg, format!("p={};instance={i};n={}", p.p(), row.n), row.value, row.value, row.scale * mass)?);
            }
        }
    }
    Ok(out)
}

/// `Σ α_i Ω_{n_i}(x - s_i)` with shifts on the `2^{-(n+3)}` grid.
pub fn random_atom_sum(atoms: usize, scales: &[u32], r: &mut ChaCha8Rng) -> Result<TrigPolynomial> {
    if scales.is_empty() {
        return input("need at least one scale");
    }
    let mut f = TrigPolynomial::zero();
    for _ in 0..atoms {
        let n = scales[r.random_range(0..scales.len())];
        let s = r.random_range(0..(8u64 << n)) as f64 / (8u64 << n) as f64;
        f = f.add(&shifted_omega(n, s)?.scale(gauss(r)));
    }
    Ok(f)
}

fn atomic_greedy(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let scales: Vec<u32> = cfg.u64_list("scales")?.into_iter().map(|n| n as u32).collect();
    let (atoms, max_terms, tol, seed) = (cfg.usize("atoms")?, cfg.usize("max_terms")?, cfg.f64("tol")?, cfg.u64("seed")?);
    let mut out = Vec::new();
    for i in 0..cfg.u64("instances")? {
        let f = random_atom_sum(atoms, &scales, &mut rng(seed, i))?;
        for p in exponents(cfg)? {
            if p.is_one() {
                return input("the greedy decomposition needs p < 1");
            }
            let d = greedy_atomic_decompose(&f, p.p(), max_terms, tol)?;
            let start = d.p_energy_history[0];
            let last = *d.p_energy_history.last().expect("history starts with the input");
            let base = format!("p={};instance={i};terms={}", p.p(), d.terms.len());
            out.push(record(cfg, format!("{base};quantity=residual"), last, last, start)?);
            out.push(record(cfg, format!("{base};quantity=weighted-sum"), d.weighted_p_sum, d.weighted_p_sum, start)?);
        }
    }
    Ok(out)
}

/// Smallest `N >= 1` with `p (N + 1) > 1`.
pub fn minimal_witness_order(p: f64) -> u32 {
    let mut n = 1;
    while p * (n as f64 + 1.0) <= 1.0 {
        n += 1;
    }
    n
}

/// Partial sums `Σ_{n=N}^{m} (1/n) Φ_n^{(N)}(e^{in/2^n} ζ)` for `m = N, ..., N + extra`.
pub fn witness_partial_sums(p: f64, extra: u32) -> Result<Vec<(u32, AnalyticSymbol)>> {
    let big_n = minimal_witness_order(p);
    if big_n + extra > 12 {
        return input(format!("witness sums need N + extra <= 12, got {}", big_n + extra));
    }
    let mut f = AnalyticSymbol::zero();
    let mut out = Vec::new();
    for n in big_n..=big_n + extra {
        let term = rotate(&phi_witness(n, big_n)?, n as f64 / 2f64.powi(n as i32));
        f = f.add(&term.scale(C64::new(1.0 / n as f64, 0.0)));
        out.push((n, f.clone()));
    }
    Ok(out)
}

fn besov_witness(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let extra = cfg.u64("extra_terms")? as u32;
    let mut out = Vec::new();
    for p in cfg.f64_list("p")? {
        let pe = PExponent::new(p)?;
        if pe.is_one() {
            return input("the witness experiment needs p < 1");
        }
        let big_n = minimal_witness_order(p);
        let mut harmonic = 0.0;
        for (m, f) in witness_partial_sums(p, extra)? {
            harmonic += 1.0 / m as f64;
            let b = besov(&f, pe.inv_sharp(), p, pe.flat())?;
            let l1 = lp(&f, 1.0)?;
            let base = format!("p={p};N={big_n};m={m}");
            out.push(record(cfg, format!("{base};quantity=besov"), b, b, 1.0)?);
            out.push(record(cfg, format!("{base};quantity=l1"), l1, l1, harmonic)?);
        }
    }
    Ok(out)
}

/// Grid maxima of `Σ_{n≤K} |Q_{2^n}(e^{in/2^n} ζ)| / (2^{n+1} + 1)` for `K = 0..=levels`.
pub fn dirichlet_partial_sups(levels: u32, grid_factor: usize) -> Result<Vec<f64>> {
    if levels > 16 || grid_factor == 0 {
        return input("levels must be at most 16 and grid_factor positive");
    }
    let grid = (grid_factor * (4usize << levels)).next_power_of_two();
    let mut acc = vec![0.0; grid];
    let mut out = Vec::new();
    for n in 0..=levels {
        let q = fejer_square(1u64 << n)?;
        let theta = n as f64 / 2f64.powi(n as i32);
        let rotated = q.map(|k, c| c * C64::from_polar(1.0, theta * k as f64));
        let weight = 1.0 / ((2u64 << n) + 1) as f64;
        for (a, v) in acc.iter_mut().zip(sample_on_grid(&rotated, grid)?) {
            *a += weight * v.norm();
        }
        out.push(acc.iter().cloned().fold(0.0, f64::max));
    }
    Ok(out)
}

fn dirichlet_sum(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let levels = cfg.u64("levels")? as u32;
    let sups = dirichlet_partial_sups(levels, cfg.usize("grid_factor")?)?;
    sups.iter()
        .enumerate()
        .map(|(k, &s)| record(cfg, format!("K={k}"), s, s, 1.0))
        .collect()
}

fn wiener_mean_experiment(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (i, mu) in measures(cfg)?.iter().enumerate() {
        let energy: f64 = mu.atoms().iter().map(|a| a.1.norm_sqr()).sum();
        for n in cfg.u64_list("window")? {
            let v = wiener_mean(mu, n as usize)?;
            out.push(record(cfg, format!("instance={i};N={n}"), v, v, energy)?);
        }
    }
    Ok(out)
}

fn coefficient_bound(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let (max_degree, seed) = (cfg.usize("degree")?, cfg.u64("seed")?);
    let mut out = Vec::new();
    for i in 0..cfg.u64("instances")? {
        let mut r = rng(seed, i);
        let degree = r.random_range(1..=max_degree.max(1));
        let psi = random_decaying_symbol(degree, &mut r)?;
        let size = degree + 1;
        let a = hankel_matrix(&psi, size, size)?;
        for p in exponents(cfg)? {
            let upper = mult_upper_hadamard(&a, p)?.min(mult_upper_hankel_poly(&psi, p)?);
            let mut worst: f64 = 0.0;
            for n in 0..=degree as u64 {
                for m in 0..=n {
                    let c = coefficient_bound_check(&psi, n, m, upper, p)?;
                    if c.rhs > 0.0 {
                        worst = worst.max(c.lhs / c.rhs);
                    } else if c.lhs > 0.0 {
                        return Err(Error::Numeric(format!("coefficient bound has zero right side at n={n}, m={m}")));
                    }
                }
            }
            out.push(record(cfg, format!("p={};instance={i};degree={degree}", p.p()), worst, worst, 1.0)?);
        }
    }
    Ok(out)
}

fn mollifier(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let size = cfg.usize("size")?;
    if size == 0 {
        return input("size must be positive");
    }
    let psi = random_decaying_symbol(2 * size - 2, &mut rng(cfg.u64("seed")?, 0))?;
    let a = hankel_matrix(&psi, size, size)?;
    let ms = cfg.u64_list("m")?;
    let mut out = Vec::new();
    for p in exponents(cfg)? {
        let reference = mult_upper_hadamard(&a, p)?;
        let opts = witness_options(leading_windows(size));
        for row in mollifier_convergence(&a, &SmoothCutoffSpec::default(), &ms, p, &opts)? {
            check_bracket(row.lower, row.upper, "mollifier")?;
            out.push(record(cfg, format!("p={};m={}", p.p(), row.m), row.lower, row.upper, reference)?);
        }
    }
    Ok(out)
}

fn shift_monotone(cfg: &ExperimentConfig) -> Result<Vec<RatioRecord>> {
    let shifts = cfg.u64_list("shifts")?;
    let mut out = Vec::new();
    for (i, psi) in decaying_instances(cfg)?.iter().enumerate() {
        for p in exponents(cfg)? {
            let base = hankel_bracket(psi, p, vec![], None)?;
            for &k in &shifts {
                let shifted = backward_shift(psi, k as usize);
                let b = if shifted.is_zero() {
                    Bracket { lower: 0.0, upper: 0.0 }
                } else {
                    hankel_bracket(&shifted, p, vec![], None)?
                };
                out.push(record(cfg, format!("p={};instance={i};shift={k}", p.p()), b.lower, b.upper, base.upper)?);
            }
        }
    }
    Ok(out)
}

//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p slab-core --test acceptance`. Criteria listed in
//! `KNOWN_FAILURES` are still evaluated and reported as FAIL, but do not turn
//! the exit status nonzero; any other failure does.
#![allow(clippy::needless_range_loop)]

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use slab_core::besov::{besov_norm, BesovParams};
use slab_core::lab::{
    bracket_audit, witness_partial_sums, default_arc_width, fit_scaling, parse_table, random_atom_sum, run_experiment,
    toeplitz_arc_lower, verify, ExperimentConfig, RatioRecord,
};
use slab_core::linalg::{random_gaussian_matrix, schatten_norm};
use slab_core::measures::{greedy_atomic_decompose, wiener_mean, DiscreteMeasure};
use slab_core::multiplier::{
    coefficient_bound_check, hankel_rank_one_average, mult_lower_rank1, mult_lower_rank1_with, mult_oracle_small,
    mult_upper_hadamard, upper_certificates, AscentOptions, UpperChoice,
};
use slab_core::symbols::{hankel_matrix, lp_norm, sampled_polynomial, DEFAULT_OVERSAMPLE};
use slab_core::{AnalyticSymbol, ComplexMatrix, PExponent, SmoothCutoffSpec, C64};

/// Criteria expected to fail; see the project notes for the analysis.
const KNOWN_FAILURES: &[u32] = &[7];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

/// Sum of singular values from the eigenvalues of the smaller Gram matrix.
fn trace_norm_by_eigen(a: &ComplexMatrix) -> f64 {
    let m = a.as_dmatrix();
    let gram: DMatrix<C64> = if m.nrows() >= m.ncols() { m.adjoint() * m } else { m * m.adjoint() };
    gram.symmetric_eigen().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum()
}

fn c1_schatten() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst2, mut worst1) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let (m, n) = (r.random_range(1..=64), r.random_range(1..=64));
        let a = random_gaussian_matrix(m, n, &mut r).unwrap();
        let l2: f64 = a.row_major().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst2 = worst2.max((schatten_norm(&a, 2.0).unwrap().value - l2).abs() / l2);
        let tr = trace_norm_by_eigen(&a);
        worst1 = worst1.max((schatten_norm(&a, 1.0).unwrap().value - tr).abs() / tr);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst2 <= 1e-10 && worst1 <= 1e-8 && secs < 10.0,
        format!("p=2 rel err {worst2:.2e} (<=1e-10), p=1 rel err {worst1:.2e} (<=1e-8), {secs:.2}s (<10s)"),
    )
}

fn c2_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for i in 0..50 {
        let n = if i < 25 { 2 } else { 3 };
        let a = random_gaussian_matrix(n, n, &mut r).unwrap();
        for p in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
            let lower = mult_lower_rank1(&a, pe(p), 200, i as u64).unwrap().value;
            let oracle = mult_oracle_small(&a, pe(p), 0.01).unwrap();
            worst = worst.max((lower - oracle).abs() / oracle);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 0.01 && secs < 300.0,
        format!("{count} cases, worst relative gap {worst:.2e} (<=1e-2), {secs:.1}s (<300s)"),
    )
}

fn c3_closed_forms() -> Outcome {
    let mut worst_id = 0.0_f64;
    for n in 1..=6 {
        let id = ComplexMatrix::identity(n).unwrap();
        for p in [0.5, 2.0 / 3.0] {
            let exact = (n as f64).powf(1.0 / p - 1.0);
            let lower = mult_lower_rank1(&id, pe(p), 20, n as u64).unwrap().value;
            worst_id = worst_id.max((lower - exact).abs() / exact);
        }
    }
    let mut r = rng(3);
    let mut worst_rank1 = 0.0_f64;
    for n in 1..=6 {
        let tau: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, r.random_range(0.0..TAU))).collect();
        let a = ComplexMatrix::from_fn(n, n, |j, k| tau[j].conj() * tau[k]).unwrap();
        for p in [1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0] {
            let lower = mult_lower_rank1(&a, pe(p), 20, n as u64).unwrap().value;
            worst_rank1 = worst_rank1.max((lower - 1.0).abs());
        }
    }
    outcome(
        worst_id <= 5e-3 && worst_rank1 <= 1e-6,
        format!("identity rel err {worst_id:.2e} (<=5e-3), unimodular rank-one err {worst_rank1:.2e} (<=1e-6)"),
    )
}

fn c4_bracket() -> Outcome {
    let audit = bracket_audit(500, 4).unwrap();
    outcome(
        audit.violations == 0 && audit.instances >= 500,
        format!("500 matrices, {} certificate checks, {} violations", audit.instances, audit.violations),
    )
}

fn random_measure(r: &mut ChaCha8Rng, min_sep: f64) -> DiscreteMeasure {
    let count = r.random_range(1..=4);
    let mut atoms: Vec<(f64, C64)> = Vec::new();
    while atoms.len() < count {
        let t: f64 = r.random_range(0.0..TAU);
        if atoms.iter().all(|(s, _)| {
            let d = (s - t).rem_euclid(TAU);
            d.min(TAU - d) >= min_sep
        }) {
            atoms.push((t, gauss(r)));
        }
    }
    DiscreteMeasure::new(atoms).unwrap()
}

fn c5_toeplitz() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    let (mut worst_low, mut worst_excess) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..20 {
        let mu = random_measure(&mut r, 0.5);
        for p in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
            let exact = mu.atoms().iter().map(|(_, w)| w.norm().powf(p)).sum::<f64>().powf(1.0 / p);
            let lower = toeplitz_arc_lower(&mu, pe(p), 256, default_arc_width(&mu)).unwrap();
            worst_low = worst_low.min(lower / exact);
            worst_excess = worst_excess.max((lower - exact) / exact);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_low >= 0.95 && worst_excess <= 1e-9 && secs < 600.0,
        format!("min ratio {worst_low:.6} (>=0.95), max excess {worst_excess:.2e} (<=1e-9), {secs:.1}s"),
    )
}

fn experiment(name: &str, overrides: &[(&str, &str)]) -> Vec<RatioRecord> {
    let mut cfg = ExperimentConfig::for_experiment(name).unwrap();
    for (k, v) in overrides {
        cfg.set(k, v).unwrap();
    }
    run_experiment(&cfg).unwrap().records
}

fn variation(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

fn c6_blocks() -> Outcome {
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for name in ["hankel-sp-block", "hankel-mp-block"] {
        let records = experiment(name, &[("symbol", "random"), ("n", "4,5,6,7,8,9"), ("p", "1/2,2/3")]);
        for p in ["0.5", "0.6666666666666666"] {
            let v = variation(
                records
                    .iter()
                    .filter(|r| r.param("p") == Some(p))
                    .flat_map(|r| [r.ratio_low, r.ratio_high]),
            );
            worst = worst.max(v);
            parts.push(format!("{name} p={:.3}: {v:.2}", p.parse::<f64>().unwrap()));
        }
    }
    outcome(worst < 20.0, format!("ratio variation {} (<20)", parts.join(", ")))
}

/// `ω(2x)` built from the `exp(-1/t)` smooth step, independent of the library.
fn plateau(x: f64) -> f64 {
    let sigma = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let step = |t: f64| sigma(t) / (sigma(t) + sigma(1.0 - t));
    let s = (2.0 * x).abs();
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        step(2.0 - s)
    }
}

/// `‖Σ_k F(k/m) z^k‖_p` by direct evaluation on a uniform grid.
fn direct_lp(m: u64, p: f64, grid: usize) -> f64 {
    let coeffs: Vec<(f64, f64)> = (-(m as i64)..=m as i64).map(|k| (k as f64, plateau(k as f64 / m as f64))).collect();
    let mut acc = 0.0;
    for g in 0..grid {
        let t = TAU * g as f64 / grid as f64;
        // Coefficients are real and even, so the sum is a cosine series.
        let v: f64 = coeffs.iter().map(|(k, c)| c * (k * t).cos()).sum();
        acc += v.abs().powf(p);
    }
    (acc / grid as f64).powf(1.0 / p)
}

fn c7_fm_scaling() -> Outcome {
    let records = experiment("fm-scaling", &[]);
    let csv = {
        let mut s = String::from("experiment,params,measured_low,measured_high,reference_scale,ratio_low,ratio_high\n");
        for r in &records {
            s.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e},{:e}\n",
                r.experiment, r.params, r.measured_low, r.measured_high, r.reference_scale, r.ratio_low, r.ratio_high
            ));
        }
        parse_table(&s).unwrap()
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, label) in [(1.0 / 3.0, "0.3333333333333333"), (0.5, "0.5"), (1.0, "1")] {
        let table = csv.filter("p", label).unwrap();
        let fit = fit_scaling(&table, "m", "measured_high").unwrap();
        let target = 1.0 - 1.0 / p;
        let err = (fit.slope - target).abs();
        pass &= err <= 0.05;
        // Independent check of the quadrature at the end points of the range.
        let oracle_slope = (direct_lp(512, p, 1 << 15) / direct_lp(16, p, 1 << 12)).ln() / 32f64.ln();
        let impl_slope = (lp_norm(&sampled_polynomial(&SmoothCutoffSpec::default(), 512).unwrap(), p, DEFAULT_OVERSAMPLE)
            .unwrap()
            .value
            / lp_norm(&sampled_polynomial(&SmoothCutoffSpec::default(), 16).unwrap(), p, DEFAULT_OVERSAMPLE)
                .unwrap()
                .value)
            .ln()
            / 32f64.ln();
        pass &= (oracle_slope - impl_slope).abs() <= 1e-3;
        let rows = table.rows.len();
        let top = (table.value(rows - 1, "measured_high").unwrap() / table.value(rows - 2, "measured_high").unwrap()).ln()
            / (table.value(rows - 1, "m").unwrap() / table.value(rows - 2, "m").unwrap()).ln();
        parts.push(format!(
            "p={p:.3}: slope {:.4} target {target:.4} err {err:.4} (<=0.05), top-octave slope {top:.4}, two-point slope {impl_slope:.4} vs direct {oracle_slope:.4}",
            fit.slope
        ));
    }
    outcome(pass, parts.join("; "))
}

fn random_symbol(degree: usize, r: &mut ChaCha8Rng) -> AnalyticSymbol {
    let decay: f64 = r.random_range(0.0..2.0);
    AnalyticSymbol::new((0..=degree).map(|k| gauss(r) * (k as f64 + 1.0).powf(-decay)).collect()).unwrap()
}

fn c8_rank_one_average() -> Outcome {
    let mut r = rng(8);
    let (mut worst_id, mut worst_dom) = (0.0_f64, f64::NEG_INFINITY);
    for i in 0..50 {
        let m = r.random_range(1..=32);
        let psi = random_symbol(m - 1, &mut r);
        let a: Vec<C64> = (0..m).map(|_| gauss(&mut r)).collect();
        let b: Vec<C64> = (0..m).map(|_| gauss(&mut r)).collect();
        let parts = hankel_rank_one_average(&psi, &a, &b).unwrap();
        let coeffs = psi.to_dense();
        for row in 0..m {
            for col in 0..m {
                let mean: C64 = parts.iter().map(|part| part.get(row, col)).sum::<C64>() / parts.len() as f64;
                let target = coeffs.get(row + col).copied().unwrap_or_default() * a[row] * b[col];
                worst_id = worst_id.max((mean - target).norm() / target.norm().max(1.0));
            }
        }
        let p = [1.0 / 3.0, 0.5, 2.0 / 3.0][i % 3];
        let bound = (2.0 * m as f64).powf(1.0 / p - 1.0) * lp_norm(&psi, p, DEFAULT_OVERSAMPLE).unwrap().value;
        let gamma = hankel_matrix(&psi, m, m).unwrap();
        let mut opts = AscentOptions::new(1, i as u64);
        opts.max_sweeps = 10;
        opts.golden_tol = 1e-4;
        // Large windows: structured starts only, without polishing.
        opts.evaluate_only = m > 12;
        let lower = mult_lower_rank1_with(&gamma, pe(p), &opts).unwrap().value;
        worst_dom = worst_dom.max(lower / bound);
    }
    outcome(
        worst_id <= 1e-12 && worst_dom <= 1.0 + 1e-9,
        format!("50 instances, identity err {worst_id:.2e} (<=1e-12), max lower/bound {worst_dom:.4} (<=1)"),
    )
}

fn c9_coefficients() -> Outcome {
    let mut r = rng(9);
    let (mut checks, mut violations) = (0usize, 0usize);
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let degree = r.random_range(1..=32);
        let psi = random_symbol(degree, &mut r);
        let p = pe([1.0 / 3.0, 0.5, 2.0 / 3.0][i % 3]);
        let gamma = hankel_matrix(&psi, degree + 1, degree + 1).unwrap();
        for (_, upper) in upper_certificates(&gamma, p, UpperChoice::All, None).unwrap() {
            for n in 0..=32u64 {
                for m in 0..=n {
                    let c = coefficient_bound_check(&psi, n, m, upper, p).unwrap();
                    checks += 1;
                    if !c.ok {
                        violations += 1;
                    }
                    if c.rhs > 0.0 {
                        worst = worst.max(c.lhs / c.rhs);
                    }
                }
            }
        }
    }
    let mut eq_err = 0.0_f64;
    for n in 0..=32usize {
        let psi = AnalyticSymbol::monomial(n, C64::new(1.0, 0.0)).unwrap();
        let gamma = hankel_matrix(&psi, n + 1, n + 1).unwrap();
        for p in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
            let upper = mult_upper_hadamard(&gamma, pe(p)).unwrap();
            let c = coefficient_bound_check(&psi, n as u64, n as u64, upper, pe(p)).unwrap();
            eq_err = eq_err.max((c.lhs / c.rhs - 1.0).abs());
        }
    }
    outcome(
        violations == 0 && eq_err <= 1e-9,
        format!("{checks} checks, {violations} violations, max lhs/rhs {worst:.4}; monomial equality err {eq_err:.2e} (<=1e-9)"),
    )
}

fn c10_audits() -> Outcome {
    let report = verify("all").unwrap();
    let required = [
        "block-triangular-schatten",
        "entrywise-dominance",
        "sup-vs-lp",
        "l1-vs-lp",
        "hankel-below-toeplitz",
        "shift-monotone",
        "submatrix-monotone",
    ];
    let mut pass = report.passed();
    let mut parts = Vec::new();
    for name in required {
        match report.find(name) {
            Some(c) => {
                pass &= c.violations == 0 && c.instances >= 100;
                parts.push(format!("{name} {}/{}", c.violations, c.instances));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.check.to_string()).collect();
    outcome(
        pass,
        format!(
            "violations/instances: {}; {} checks in total, failing: [{}]",
            parts.join(", "),
            report.checks.len(),
            failed.join(", ")
        ),
    )
}

/// Least-squares slope of `y` against `x`.
fn linear_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn c11_lacunary() -> Outcome {
    let records = experiment("lacunary", &[("p", "1/2"), ("j_max", "8")]);
    let slopes = |model: &str, low: bool| {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.param("model") == Some(model))
            .filter_map(|r| {
                let j: f64 = r.param("J")?.parse().ok()?;
                (j >= 4.0).then_some((j, if low { r.measured_low } else { r.measured_high }))
            })
            .collect();
        linear_slope(&pts)
    };
    let (fin_lo, fin_hi) = (slopes("finite", true), slopes("finite", false));
    let (div_lo, div_hi) = (slopes("divergent", true), slopes("divergent", false));
    let pass = fin_hi < 0.05 && fin_lo < 0.05 && div_lo > 0.05 && div_hi > 0.2;
    outcome(
        pass,
        format!(
            "bracket slope per level over J=4..8: finite lower {fin_lo:.4} upper {fin_hi:.4} (<0.05); divergent lower {div_lo:.4} (>0.05) upper {div_hi:.4} (>0.2)"
        ),
    )
}

fn c12_besov_witness() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [0.8, 0.9] {
        let e = pe(p);
        let sums = witness_partial_sums(p, 8).unwrap();
        let params = BesovParams::new(e.inv_sharp(), p, e.flat()).unwrap();
        let besov: Vec<f64> = sums
            .iter()
            .map(|(_, f)| besov_norm(f, params, &SmoothCutoffSpec::VPartition).unwrap().norm)
            .collect();
        let l1: Vec<f64> = sums.iter().map(|(_, f)| lp_norm(f, 1.0, DEFAULT_OVERSAMPLE).unwrap().value).collect();
        let var = variation(besov.iter().copied());
        let literal = sums.iter().zip(&l1).all(|((m, _), v)| *v >= 0.8 * (*m as f64).ln());
        let first = sums[0].0;
        let incremental_margin = sums
            .iter()
            .zip(&l1)
            .map(|((m, _), v)| (v - l1[0]) - 0.8 * (first + 1..=*m).map(|k| 1.0 / k as f64).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        pass &= var < 2.0 && literal;
        let (m_last, _) = sums.last().unwrap();
        parts.push(format!(
            "p={p}: Besov variation {var:.3} (<2), ||f_m||_1 at m={m_last} {:.4} vs 0.8 ln m {:.4} ({}), incremental-reading margin {incremental_margin:.4}",
            l1.last().unwrap(),
            0.8 * (*m_last as f64).ln(),
            if literal { "holds for all m" } else { "violated" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c13_wiener() -> Outcome {
    let mut r = rng(13);
    let mut measures = vec![DiscreteMeasure::new(vec![(0.5, C64::new(1.0, 0.0)), (2.5, C64::new(1.0, 0.0))]).unwrap()];
    while measures.len() < 10 {
        let (a, b) = (r.random_range(0.0..TAU), r.random_range(0.0..TAU));
        let d = (a - b).rem_euclid(TAU);
        if d.min(TAU - d) >= 0.1 {
            measures.push(DiscreteMeasure::new(vec![(a, gauss(&mut r)), (b, gauss(&mut r))]).unwrap());
        }
    }
    let mut worst = 0.0_f64;
    for mu in &measures {
        let target: f64 = mu.atoms().iter().map(|(_, w)| w.norm_sqr()).sum();
        worst = worst.max((wiener_mean(mu, 4096).unwrap() - target).abs() / target);
    }
    outcome(worst <= 0.05, format!("10 two-atom measures, worst relative error {worst:.2e} at N=4096 (<=5e-2)"))
}

fn c14_greedy() -> Outcome {
    let mut worst = 0.0_f64;
    let mut max_terms = 0;
    for i in 0..10u64 {
        let f = random_atom_sum(3, &[3, 4, 5, 6], &mut rng(1400 + i)).unwrap();
        for p in [0.5, 2.0 / 3.0] {
            let d = greedy_atomic_decompose(&f, p, 12, 1e-12).unwrap();
            let first = d.p_energy_history[0];
            let best = d.p_energy_history.iter().copied().fold(f64::INFINITY, f64::min);
            worst = worst.max(best / first);
            max_terms = max_terms.max(d.terms.len());
        }
    }
    outcome(
        worst < 1e-3 && max_terms <= 12,
        format!("20 decompositions, worst residual p-energy ratio {worst:.2e} (<1e-3), at most {max_terms} terms (<=12)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        (1, "schatten correctness", c1_schatten),
        (2, "oracle agreement", c2_oracle),
        (3, "closed-form multiplier values", c3_closed_forms),
        (4, "bracket soundness", c4_bracket),
        (5, "exact Toeplitz identity", c5_toeplitz),
        (6, "two-sided block estimates", c6_blocks),
        (7, "sampled polynomial scaling", c7_fm_scaling),
        (8, "rank-one decomposition of Hankel Schur products", c8_rank_one_average),
        (9, "coefficient bound", c9_coefficients),
        (10, "inequality audits", c10_audits),
        (11, "lacunary characterisation", c11_lacunary),
        (12, "witness series", c12_besov_witness),
        (13, "Wiener means", c13_wiener),
        (14, "greedy atomic decomposition", c14_greedy),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_FAILURES.contains(&id) { " [known]" } else { "" };
        println!("criterion {id}: {status}{note} {name}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass && !KNOWN_FAILURES.contains(&id) {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::experiments::{dirichlet_partial_sups, random_measure, toeplitz_arc_lower, default_arc_width};
use crate::besov::{besov_norm, BesovParams};
use crate::error::{input, Result};
use crate::linalg::{
    entrywise_lr_norm, random_gaussian_matrix, random_unitary, schatten_norm, schur_product, ComplexMatrix,
    PExponent, C64,
};
use crate::measures::{greedy_atomic_decompose, hankel_window, shifted_toeplitz_window, toeplitz_window};
use crate::multiplier::{
    block_diagonal_norm, estimate_multiplier, hankel_rank_one_average, mult_lower_rank1_with, mult_upper_hadamard,
    mult_upper_hankel_poly, AscentOptions, BlockPartition, EstimateOptions, RankOneObjective,
};
use crate::symbols::{
    backward_shift, dyadic_block, dyadic_range, hankel_matrix, lp_norm, sup_norm, AnalyticSymbol, SmoothCutoffSpec,
    Spectrum, TrigPolynomial, DEFAULT_OVERSAMPLE,
};

pub const SUITES: &[&str] = &["core", "symbols", "besov", "multiplier", "measures"];

/// Result of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub check: &'static str,
    pub instances: usize,
    pub violations: usize,
    /// Largest observed value of the check's slack statistic; a check passes
    /// when every statistic stays at or below its limit.
    pub worst: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verify suite={} check={} instances={} violations={} worst={:.3e} status={}",
            self.suite,
            self.check,
            self.instances,
            self.violations,
            self.worst,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn find(&self, check: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check)
    }

    /// One line per check plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out: String = self.checks.iter().map(|c| format!("{c}\n")).collect();
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!(
            "verify summary checks={} failed={failed} status={}\n",
            self.checks.len(),
            if failed == 0 { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Runs a suite (`core`, `symbols`, `besov`, `multiplier`, `measures` or `all`) with fixed seeds.
pub fn verify(suite: &str) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let selected: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return input(format!("unknown suite `{other}`; choose one of {}, all", SUITES.join(", "))),
    };
    for s in selected {
        match s {
            "core" => core_suite(&mut checks)?,
            "symbols" => symbols_suite(&mut checks)?,
            "besov" => besov_suite(&mut checks)?,
            "multiplier" => multiplier_suite(&mut checks)?,
            "measures" => measures_suite(&mut checks)?,
            _ => unreachable!("filtered above"),
        }
    }
    Ok(VerifyReport { checks })
}

/// Accumulates instances and violations of one check.
struct Tally {
    suite: &'static str,
    check: &'static str,
    instances: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(suite: &'static str, check: &'static str) -> Self {
        Self {
            suite,
            check,
            instances: 0,
            violations: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    /// Records one instance whose slack statistic must not exceed `limit`.
    fn observe(&mut self, stat: f64, limit: f64) {
        self.instances += 1;
        if !(stat <= limit) {
            self.violations += 1;
            log::warn!("{}:{} statistic {stat:.6e} exceeds {limit:.3e}", self.suite, self.check);
        }
        if stat.is_nan() {
            self.worst = f64::NAN;
        } else {
            self.worst = self.worst.max(stat);
        }
    }

    fn finish(self, out: &mut Vec<CheckOutcome>) {
        out.push(CheckOutcome {
            suite: self.suite,
            check: self.check,
            instances: self.instances,
            violations: self.violations,
            worst: if self.instances == 0 { 0.0 } else { self.worst },
        });
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

fn random_shape(r: &mut ChaCha8Rng, max: usize) -> (usize, usize) {
    (r.random_range(1..=max), r.random_range(1..=max))
}

/// Relative excess of `lhs` over `rhs`.
fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

const P_SET: [f64; 4] = [1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0];

fn core_suite(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut r = rng(1);
    let mut t = Tally::new("core", "p-triangle");
    for i in 0..100 {
        let (m, n) = random_shape(&mut r, 8);
        let a = random_gaussian_matrix(m, n, &mut r)?;
        let b = random_gaussian_matrix(m, n, &mut r)?.scale(C64::new(0.1f64.powi(i % 3), 0.0))?;
        for p in P_SET {
            let lhs = schatten_norm(&a.add(&b)?, p)?.value.powf(p);
            let rhs = schatten_norm(&a, p)?.value.powf(p) + schatten_norm(&b, p)?.value.powf(p);
            t.observe(excess(lhs, rhs), 1e-9);
        }
    }
    t.finish(out);

    let mut t = Tally::new("core", "unitary-invariance");
    for _ in 0..50 {
        let (m, n) = random_shape(&mut r, 8);
        let a = random_gaussian_matrix(m, n, &mut r)?;
        let (u, v) = (random_unitary(m, &mut r)?, random_unitary(n, &mut r)?);
        let rotated = u.matmul(&a)?.matmul(&v)?;
        for p in P_SET {
            let (x, y) = (schatten_norm(&a, p)?.value, schatten_norm(&rotated, p)?.value);
            t.observe(excess(y, x).abs(), 1e-9);
        }
    }
    t.finish(out);

    let mut t = Tally::new("core", "schur-permutation");
    for _ in 0..50 {
        let (m, n) = random_shape(&mut r, 8);
        let (a, b) = (random_gaussian_matrix(m, n, &mut r)?, random_gaussian_matrix(m, n, &mut r)?);
        let rows = permutation(m, &mut r);
        let cols = permutation(n, &mut r);
        let lhs = schur_product(&a.select(&rows, &cols)?, &b.select(&rows, &cols)?)?;
        let rhs = schur_product(&a, &b)?.select(&rows, &cols)?;
        t.observe(lhs.sub(&rhs)?.max_abs(), 0.0);
    }
    t.finish(out);

    let mut t = Tally::new("core", "entrywise-dominance");
    for _ in 0..100 {
        let (m, n) = random_shape(&mut r, 8);
        let a = random_gaussian_matrix(m, n, &mut r)?;
        for q in [1.0 / 3.0, 0.5, 1.0, 1.5, 2.0] {
            t.observe(excess(schatten_norm(&a, q)?.value, entrywise_lr_norm(&a, q)?), 1e-10);
        }
    }
    t.finish(out);
    Ok(())
}

fn permutation(n: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, r.random_range(0..=i));
    }
    v
}

fn random_analytic(degree: usize, r: &mut ChaCha8Rng) -> Result<AnalyticSymbol> {
    AnalyticSymbol::new((0..=degree).map(|_| gauss(r)).collect())
}

fn random_trig(half: i64, r: &mut ChaCha8Rng) -> Result<TrigPolynomial> {
    TrigPolynomial::from_fn(-half, half, |_| gauss(r))
}

fn lp(f: &(impl Spectrum + ?Sized), p: f64) -> Result<f64> {
    Ok(lp_norm(f, p, DEFAULT_OVERSAMPLE)?.value)
}

fn symbols_suite(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut r = rng(2);
    let mut t = Tally::new("symbols", "partition-reconstruction");
    for _ in 0..50 {
        let half = r.random_range(0..200);
        let f = random_trig(half, &mut r)?;
        let mut sum = TrigPolynomial::zero();
        for n in dyadic_range(&f) {
            sum = sum.add(&dyadic_block(&f, n, &SmoothCutoffSpec::VPartition)?);
        }
        let err = (-half..=half).map(|k| (sum.coeff(k) - f.coeff(k)).norm()).fold(0.0, f64::max);
        t.observe(err, 1e-12);
    }
    t.finish(out);

    let mut t = Tally::new("symbols", "lp-monotone");
    for _ in 0..50 {
        let f = random_trig(r.random_range(0..40), &mut r)?;
        let vals = [1.0 / 3.0, 0.5, 1.0, 2.0].map(|p| lp(&f, p));
        for w in vals.windows(2) {
            let (a, b) = (w[0].as_ref().map_err(clone_err)?, w[1].as_ref().map_err(clone_err)?);
            t.observe(excess(*a, *b), 1e-9);
        }
    }
    t.finish(out);

    let mut t = Tally::new("symbols", "sup-vs-lp");
    let mut t2 = Tally::new("symbols", "l1-vs-lp");
    for _ in 0..100 {
        let n = r.random_range(0..40);
        let f = random_analytic(n, &mut r)?;
        let sup = sup_norm(&f, DEFAULT_OVERSAMPLE)?;
        for p in [1.0 / 3.0, 0.5, 1.0] {
            let bound = std::f64::consts::E * ((n + 1) as f64).powf(1.0 / p) * lp(&f, p)?;
            t.observe(excess(sup, bound), 1e-9);
        }
        for p in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
            let bound = (1.0_f64 - p).exp() * ((n + 1) as f64).powf(1.0 / p - 1.0) * lp(&f, p)?;
            t2.observe(excess(lp(&f, 1.0)?, bound), 1e-9);
        }
    }
    t.finish(out);
    t2.finish(out);

    // The partial sums must level off: growth over the second half of the levels stays small.
    let mut t = Tally::new("symbols", "dirichlet-sum-bounded");
    let sups = dirichlet_partial_sups(12, 8)?;
    for s in &sups[6..] {
        t.observe(s / sups[6] - 1.0, 0.01);
    }
    t.finish(out);
    Ok(())
}

fn clone_err(e: &crate::Error) -> crate::Error {
    crate::Error::Numeric(e.to_string())
}

fn besov_suite(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut r = rng(3);
    let v = SmoothCutoffSpec::VPartition;
    let norm = |f: &TrigPolynomial, s: f64, p: f64, q: f64| -> Result<f64> { Ok(besov_norm(f, BesovParams::new(s, p, q)?, &v)?.norm) };

    let mut t = Tally::new("besov", "homogeneity");
    for _ in 0..20 {
        let f = random_trig(r.random_range(1..60), &mut r)?;
        let c = gauss(&mut r);
        for (s, p, q) in [(0.5, 0.5, 0.5), (1.0, 1.0, f64::INFINITY), (2.0, 2.0 / 3.0, 2.0)] {
            let (a, b) = (norm(&f.scale(c), s, p, q)?, c.norm() * norm(&f, s, p, q)?);
            t.observe(excess(a, b).abs(), 1e-6);
        }
    }
    t.finish(out);

    let mut t = Tally::new("besov", "q-triangle");
    for _ in 0..20 {
        let (f, g) = (random_trig(r.random_range(1..60), &mut r)?, random_trig(r.random_range(1..60), &mut r)?);
        for (p, q) in [(1.0, 1.0 / 3.0), (1.0, 0.5), (2.0, 1.0), (2.0, 0.5)] {
            let lhs = norm(&f.add(&g), 0.5, p, q)?.powf(q);
            let rhs = norm(&f, 0.5, p, q)?.powf(q) + norm(&g, 0.5, p, q)?.powf(q);
            t.observe(excess(lhs, rhs), 1e-6);
        }
    }
    t.finish(out);

    let mut t = Tally::new("besov", "q-nesting");
    for _ in 0..20 {
        let f = random_trig(r.random_range(1..60), &mut r)?;
        let qs = [0.5, 1.0, 2.0, f64::INFINITY];
        for p in [0.5, 1.0] {
            let vals = qs.iter().map(|&q| norm(&f, 1.0, p, q)).collect::<Result<Vec<_>>>()?;
            for w in vals.windows(2) {
                t.observe(excess(w[1], w[0]), 1e-9);
            }
        }
    }
    t.finish(out);

    // At most three blocks meet a spectrum inside (2^{n-1}, 2^{n+1}).
    let mut t = Tally::new("besov", "single-block-scale");
    for n in 3..=8u32 {
        let lo = (1usize << (n - 1)) + 1;
        let hi = (1usize << (n + 1)) - 1;
        let terms: Vec<(usize, C64)> = (lo..=hi).map(|k| (k, gauss(&mut r))).collect();
        let psi = AnalyticSymbol::from_sparse(&terms)?;
        for p in [0.5, 2.0 / 3.0, 1.0] {
            let b = besov_norm(&psi, BesovParams::new(1.0 / p, p, p)?, &v)?.norm;
            let scale = 2f64.powf(n as f64 / p) * lp(&psi, p)?;
            let factor = 4.0 * 6f64.powf(1.0 / p);
            t.observe((b / scale).max(scale / b), factor);
        }
    }
    t.finish(out);
    Ok(())
}

fn quick_ascent(restarts: usize, seed: u64) -> AscentOptions {
    let mut o = AscentOptions::new(restarts, seed);
    o.max_sweeps = 25;
    o.golden_tol = 1e-5;
    o.rel_tol = 1e-7;
    o
}

fn lower(a: &ComplexMatrix, p: PExponent, opts: &AscentOptions) -> Result<f64> {
    Ok(mult_lower_rank1_with(a, p, opts)?.value)
}

fn random_block_triangular(sizes: &[usize], r: &mut ChaCha8Rng) -> Result<(ComplexMatrix, Vec<usize>)> {
    let mut cuts = vec![0];
    for s in sizes {
        cuts.push(cuts.last().unwrap() + s);
    }
    let n = *cuts.last().unwrap();
    let block_of = |i: usize| cuts.partition_point(|&c| c <= i) - 1;
    let a = ComplexMatrix::from_fn(n, n, |i, j| if block_of(i) >= block_of(j) { gauss(r) } else { C64::new(0.0, 0.0) })?;
    Ok((a, cuts))
}

/// Brackets `count` generated matrices (dense, Hankel, block-diagonal and
/// block-triangular) and compares the lower bound with every certificate.
pub fn bracket_audit(count: usize, seed: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("multiplier", "bracket-soundness");
    let mut r = rng(seed);
    for i in 0..count {
        let p = PExponent::new(P_SET[i % P_SET.len()])?;
        let kind = i % 4;
        let (a, partition) = match kind {
            0 => {
                let (m, n) = random_shape(&mut r, 5);
                (random_gaussian_matrix(m, n, &mut r)?, None)
            }
            1 => {
                let psi = random_analytic(r.random_range(1..8), &mut r)?;
                let n = psi.degree() + 1;
                (hankel_matrix(&psi, n, n)?, None)
            }
            2 => {
                let sizes: Vec<usize> = (0..r.random_range(2..=3)).map(|_| r.random_range(1..=2)).collect();
                let part = BlockPartition::diagonal(&sizes)?;
                let n: usize = sizes.iter().sum();
                let a = ComplexMatrix::from_fn(n, n, |i, j| {
                    let bi = part.row_cuts.partition_point(|&c| c <= i);
                    let bj = part.col_cuts.partition_point(|&c| c <= j);
                    if bi == bj { gauss(&mut r) } else { C64::new(0.0, 0.0) }
                })?;
                (a, Some(part))
            }
            _ => {
                let sizes: Vec<usize> = (0..2).map(|_| r.random_range(1..=2)).collect();
                let (a, cuts) = random_block_triangular(&sizes, &mut r)?;
                (a, Some(BlockPartition::new(cuts.clone(), cuts)?))
            }
        };
        let mut opts = EstimateOptions::new(2, seed + i as u64);
        opts.ascent = quick_ascent(2, seed + i as u64);
        opts.ascent.partition = partition;
        match estimate_multiplier(&a, p, &opts) {
            Ok(e) => {
                for (_, v) in &e.certificates {
                    t.observe(excess(e.lower, *v), 1e-9);
                }
            }
            Err(crate::Error::BracketViolation { lower, upper, .. }) => t.observe(excess(lower, upper), 1e-9),
            Err(e) => return Err(e),
        }
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    Ok(out.remove(0))
}

fn multiplier_suite(out: &mut Vec<CheckOutcome>) -> Result<()> {
    out.push(bracket_audit(200, 40)?);

    let mut r = rng(4);
    let mut t = Tally::new("multiplier", "homogeneity");
    for i in 0..30 {
        let (m, n) = random_shape(&mut r, 4);
        let a = random_gaussian_matrix(m, n, &mut r)?;
        let c = gauss(&mut r);
        let ca = a.scale(c)?;
        let p = PExponent::new(P_SET[i % 4])?;
        let opts = quick_ascent(2, i as u64);
        let lo = mult_lower_rank1_with(&a, p, &opts)?;
        // The witness found for A certifies |c| times its value for cA.
        let reeval = RankOneObjective::new(&ca, p).eval(&lo.witness_x, &lo.witness_y);
        t.observe(excess(reeval, c.norm() * lo.value).abs(), 1e-9);
        t.observe(excess(mult_upper_hadamard(&ca, p)?, c.norm() * mult_upper_hadamard(&a, p)?).abs(), 1e-9);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "permutation");
    for i in 0..30 {
        let (m, n) = random_shape(&mut r, 3);
        let a = random_gaussian_matrix(m, n, &mut r)?;
        let (rows, cols) = (permutation(m, &mut r), permutation(n, &mut r));
        let pa = a.select(&rows, &cols)?;
        let p = PExponent::new(P_SET[i % 4])?;
        let opts = quick_ascent(10, i as u64);
        let (x, y) = (lower(&a, p, &opts)?, lower(&pa, p, &opts)?);
        t.observe(excess(x, y).abs(), 1e-3);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "block-diagonal-formula");
    for i in 0..30 {
        let sizes: Vec<usize> = (0..r.random_range(2..=3)).map(|_| r.random_range(1..=3)).collect();
        let part = BlockPartition::diagonal(&sizes)?;
        let n: usize = sizes.iter().sum();
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let bi = part.row_cuts.partition_point(|&c| c <= i);
            let bj = part.col_cuts.partition_point(|&c| c <= j);
            if bi == bj { gauss(&mut r) } else { C64::new(0.0, 0.0) }
        })?;
        let p = PExponent::new(P_SET[i % 3])?;
        let opts = quick_ascent(2, i as u64);
        let mut block_lowers = Vec::new();
        for (rr, cc) in part.diagonal_blocks() {
            block_lowers.push(lower(&a.block(rr.start, rr.end, cc.start, cc.end)?, p, &opts)?);
        }
        let mut est = EstimateOptions::new(2, i as u64);
        est.ascent = quick_ascent(2, i as u64);
        est.ascent.partition = Some(part);
        let whole = estimate_multiplier(&a, p, &est)?;
        t.observe(block_diagonal_norm(&block_lowers, p)? - whole.lower, 1e-6);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "block-triangular-schatten");
    let mut t5 = Tally::new("multiplier", "block-triangular-multiplier");
    for i in 0..100 {
        let sizes: Vec<usize> = (0..r.random_range(2..=3)).map(|_| r.random_range(1..=3)).collect();
        let (a, cuts) = random_block_triangular(&sizes, &mut r)?;
        let p = PExponent::new(P_SET[i % 3])?;
        let diag = (0..sizes.len())
            .map(|k| a.block(cuts[k], cuts[k + 1], cuts[k], cuts[k + 1]))
            .collect::<Result<Vec<_>>>()?;
        let lhs: f64 = diag.iter().map(|d| schatten_norm(d, p.p()).map(|v| v.value.powf(p.p()))).sum::<Result<f64>>()?;
        let rhs = schatten_norm(&a, p.p())?.value.powf(p.p());
        t.observe(excess(lhs, rhs), 1e-9);
        if i < 30 {
            let q = p.sharp().value();
            let opts = quick_ascent(1, i as u64);
            let lhs: f64 = diag.iter().map(|d| lower(d, p, &opts).map(|v| v.powf(q))).sum::<Result<f64>>()?;
            t5.observe(excess(lhs, mult_upper_hadamard(&a, p)?.powf(q)), 1e-9);
        }
    }
    t.finish(out);
    t5.finish(out);

    let mut t = Tally::new("multiplier", "upper-p-triangle");
    for i in 0..50 {
        let (m, n) = random_shape(&mut r, 6);
        let (a, b) = (random_gaussian_matrix(m, n, &mut r)?, random_gaussian_matrix(m, n, &mut r)?);
        let p = PExponent::new(P_SET[i % 4])?;
        let pv = p.p();
        let lhs = mult_upper_hadamard(&a.add(&b)?, p)?.powf(pv);
        let rhs = mult_upper_hadamard(&a, p)?.powf(pv) + mult_upper_hadamard(&b, p)?.powf(pv);
        t.observe(excess(lhs, rhs), 1e-9);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "submatrix-monotone");
    let mut i = 0;
    while t.instances < 100 {
        i += 1;
        let (m, n) = (r.random_range(2..=4), r.random_range(2..=4));
        let a = random_gaussian_matrix(m, n, &mut r)?;
        let rows: Vec<usize> = (0..m).filter(|_| r.random_bool(0.7)).collect();
        let cols: Vec<usize> = (0..n).filter(|_| r.random_bool(0.7)).collect();
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let p = PExponent::new(P_SET[i % 4])?;
        let sub = a.select(&rows, &cols)?;
        let opts = quick_ascent(1, i as u64);
        let lb = mult_lower_rank1_with(&sub, p, &opts)?;
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; m];
        rows.iter().zip(&lb.witness_y).for_each(|(&k, &v)| y[k] = v);
        cols.iter().zip(&lb.witness_x).for_each(|(&k, &v)| x[k] = v);
        let mut full_opts = opts.clone();
        full_opts.extra_starts.push((x, y));
        t.observe(lb.value - lower(&a, p, &full_opts)?, 1e-12);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "shift-monotone");
    for i in 0..100 {
        let psi = random_analytic(r.random_range(2..8), &mut r)?;
        let p = PExponent::new(P_SET[i % 4])?;
        let shifted = backward_shift(&psi, 1);
        let n = psi.degree() + 1;
        let (g, gs) = (hankel_matrix(&psi, n, n)?, hankel_matrix(&shifted, n - 1, n)?);
        let opts = quick_ascent(1, i as u64);
        let lb = mult_lower_rank1_with(&gs, p, &opts)?;
        // Rows of Γ_{S*ψ} are rows 1.. of Γ_ψ.
        let mut y = vec![0.0];
        y.extend(&lb.witness_y);
        let mut full_opts = opts.clone();
        full_opts.extra_starts.push((lb.witness_x.clone(), y));
        let whole = lower(&g, p, &full_opts)?;
        t.observe(lb.value - whole, 1e-12);
        let upper = mult_upper_hadamard(&g, p)?.min(mult_upper_hankel_poly(&psi, p)?);
        t.observe(excess(lb.value, upper), 1e-9);
    }
    t.finish(out);

    let mut t = Tally::new("multiplier", "rank-one-average-identity");
    let mut tb = Tally::new("multiplier", "rank-one-average-dominance");
    for i in 0..50 {
        let m = r.random_range(1..=32);
        let psi = random_analytic(m - 1, &mut r)?;
        let a: Vec<C64> = (0..m).map(|_| gauss(&mut r)).collect();
        let b: Vec<C64> = (0..m).map(|_| gauss(&mut r)).collect();
        let parts = hankel_rank_one_average(&psi, &a, &b)?;
        let target = hankel_matrix(&psi, m, m)?.map(|j, k, z| z * a[j] * b[k])?;
        let mut mean = ComplexMatrix::zeros(m, m)?;
        for part in &parts {
            mean = mean.add(part)?;
        }
        let mean = mean.scale(C64::new(1.0 / parts.len() as f64, 0.0))?;
        let scale = target.max_abs().max(1.0);
        t.observe(mean.sub(&target)?.max_abs() / scale, 1e-12);
        if m <= 6 {
            let p = PExponent::new(P_SET[i % 4])?;
            let g = hankel_matrix(&psi, m, m)?;
            let lb = lower(&g, p, &quick_ascent(1, i as u64))?;
            tb.observe(excess(lb, mult_upper_hankel_poly(&psi, p)?), 1e-9);
        }
    }
    t.finish(out);
    tb.finish(out);
    Ok(())
}

fn measures_suite(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut r = rng(5);
    let mut dom = Tally::new("measures", "toeplitz-dominance");
    let mut mono = Tally::new("measures", "window-monotone");
    let mut hank = Tally::new("measures", "hankel-below-toeplitz");
    let mut shift = Tally::new("measures", "shifted-window-dominance");
    for i in 0..100 {
        let mu = random_measure(3, 0.3, &mut r)?;
        let p = PExponent::new(P_SET[i % 3])?;
        let exact = mu.mp_norm(p);
        let opts = quick_ascent(1, i as u64);
        let n = 3 + i % 3;
        let small = mult_lower_rank1_with(&toeplitz_window(&mu, n)?, p, &opts)?;
        dom.observe(excess(small.value, exact), 1e-9);
        // Extending the witness by zero shows the lower bound cannot drop on a larger window.
        let mut big_opts = opts.clone();
        let pad = |v: &[f64]| -> Vec<f64> { v.iter().copied().chain(std::iter::once(0.0)).collect() };
        big_opts.extra_starts.push((pad(&small.witness_x), pad(&small.witness_y)));
        let big = lower(&toeplitz_window(&mu, n + 1)?, p, &big_opts)?;
        mono.observe(small.value - big, 1e-12);
        dom.observe(excess(big, exact), 1e-9);
        hank.observe(excess(lower(&hankel_window(&mu, n)?, p, &opts)?, exact), 1e-9);
        let m = (i % 9) as i64 - 4;
        shift.observe(excess(lower(&shifted_toeplitz_window(&mu, n, m)?, p, &opts)?, exact), 1e-9);
    }
    dom.finish(out);
    mono.finish(out);
    hank.finish(out);
    shift.finish(out);

    let mut t = Tally::new("measures", "arc-witness-dominance");
    for i in 0..20 {
        let mu = random_measure(3, 0.5, &mut r)?;
        let p = PExponent::new(P_SET[i % 3])?;
        let v = toeplitz_arc_lower(&mu, p, 64, default_arc_width(&mu))?;
        t.observe(excess(v, mu.mp_norm(p)), 1e-9);
    }
    t.finish(out);

    let mut t = Tally::new("measures", "greedy-energy-decrease");
    for i in 0..10 {
        let f = super::experiments::random_atom_sum(3, &[3, 4, 5], &mut r)?;
        let p = [0.5, 2.0 / 3.0][i % 2];
        let d = greedy_atomic_decompose(&f, p, 12, 1e-6)?;
        for w in d.p_energy_history.windows(2) {
            // Each accepted term must strictly lower the residual p-energy.
            t.observe(w[1] - w[0], -f64::MIN_POSITIVE);
        }
        if d.p_energy_history.len() < 2 {
            t.observe(1.0, 0.0);
        }
    }
    t.finish(out);
    Ok(())
}

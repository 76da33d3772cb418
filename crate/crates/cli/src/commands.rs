use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use slab_core::besov::{besov_norm, BesovParams};
use slab_core::lab::{self, default_arc_width, fit_scaling, parse_table, ExperimentConfig};
use slab_core::linalg::{schatten_norm, singular_values};
use slab_core::measures::{arc_witness, toeplitz_window, DiscreteMeasure};
use slab_core::multiplier::{estimate_multiplier, hankel_scores, mult_lower_rank1_with, AscentOptions, EstimateOptions, RankOneObjective};
use slab_core::symbols::{
    dirichlet_kernel, fejer_square, hankel_matrix, omega_kernel, phi_witness, sampled_polynomial,
};
use slab_core::{AnalyticSymbol, BlockPartition, ComplexMatrix, Error, PExponent, Result, SmoothCutoffSpec, TrigPolynomial, C64};

use crate::{Command, Kernel};

/// Exit status for completed runs whose checks failed.
const CHECKS_FAILED: u8 = 3;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str) -> Result<ExitCode> {
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Schatten { matrix, p, singular_values: show } => schatten(&matrix, p, show),
        Command::Multnorm { matrix, p, restarts, seed, upper, blocks, witness } => {
            multnorm(&matrix, p, restarts, seed, &upper, blocks.as_deref(), witness.as_deref())
        }
        Command::Hankel { symbol, p, window, restarts, seed, scores } => hankel(&symbol, p, window, restarts, seed, scores),
        Command::ToeplitzMeasure { measure, p, window, witness_arc, restarts, seed } => {
            toeplitz_measure(&measure, p, window, witness_arc, restarts, seed)
        }
        Command::Besov { symbol, s, p, q, cutoff } => besov(&symbol, s, p, q, &cutoff),
        Command::Verify { suite } => {
            let report = lab::verify(&suite)?;
            print!("{}", report.to_text());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(CHECKS_FAILED) })
        }
        Command::Sweep { config, experiment, overrides, output, list } => {
            if list {
                return list_experiments();
            }
            sweep(config.as_deref(), experiment.as_deref(), &overrides, output.as_deref())
        }
        Command::Fit { table, x, y, filters } => fit(&table, &x, &y, &filters),
        Command::Kernel(k) => kernel(k),
    }
}

fn schatten(path: &Path, p: f64, show: bool) -> Result<ExitCode> {
    let a = ComplexMatrix::parse_text(&read(path)?)?;
    let v = schatten_norm(&a, p)?;
    let mut out = format!("p,value\n{p},{:.12e}\n", v.value);
    if show {
        out.push_str("index,singular_value\n");
        for (i, s) in singular_values(&a)?.iter().enumerate() {
            out.push_str(&format!("{i},{s:.12e}\n"));
        }
    }
    emit(&out)
}

fn column(v: &[f64]) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(v.len(), 1, |r, _| C64::new(v[r], 0.0))
}

fn multnorm(
    path: &Path,
    p: f64,
    restarts: usize,
    seed: u64,
    upper: &str,
    blocks: Option<&Path>,
    witness: Option<&Path>,
) -> Result<ExitCode> {
    let a = ComplexMatrix::parse_text(&read(path)?)?;
    let mut opts = EstimateOptions::new(restarts, seed);
    opts.upper = upper.parse()?;
    if let Some(b) = blocks {
        let part = BlockPartition::parse_text(&read(b)?)?;
        part.check_shape(&a)?;
        opts.ascent.partition = Some(part);
    }
    let est = estimate_multiplier(&a, PExponent::new(p)?, &opts)?;
    if let Some(w) = witness {
        let text = format!("{}{}", column(&est.witness_x)?.to_text(), column(&est.witness_y)?.to_text());
        fs::write(w, text)?;
    }
    emit(&format!("{}\n{}\n", slab_core::MultiplierEstimate::csv_header(), est.csv_row()))
}

fn hankel(path: &Path, p: f64, window: Option<usize>, restarts: usize, seed: u64, scores: bool) -> Result<ExitCode> {
    let psi = AnalyticSymbol::parse_text(&read(path)?)?;
    let n = match window {
        Some(0) => return Err(Error::Input("window must be at least 1".into())),
        Some(n) => n,
        None => psi.effective_degree().unwrap_or(0) + 1,
    };
    let pe = PExponent::new(p)?;
    let a = hankel_matrix(&psi, n, n)?;
    let est = estimate_multiplier(&a, pe, &EstimateOptions::new(restarts, seed))?;
    let sp = schatten_norm(&a, p)?.value;
    let mut header = "window,lower,upper,upper_method,schatten_p".to_string();
    let mut row = format!("{n},{:.12e},{:.12e},{},{sp:.12e}", est.lower, est.upper, est.upper_method);
    if scores {
        let s = hankel_scores(&psi, pe)?;
        let opt = |v: Option<f64>| v.map_or("".to_string(), |x| format!("{x:.12e}"));
        header.push_str(",besov_necessary,besov_sufficient,schatten_sharp,r_family_p,r_family_flat,bozejko");
        row.push_str(&format!(
            ",{:.12e},{:.12e},{},{:.12e},{},{:.12e}",
            s.global_lower,
            s.global_upper,
            opt(s.schatten_sharp),
            s.r_family_at_p,
            opt(s.r_family_at_flat),
            s.bozejko
        ));
    }
    emit(&format!("{header}\n{row}\n"))
}

fn toeplitz_measure(path: &Path, p: f64, n: usize, arc: Option<f64>, restarts: usize, seed: u64) -> Result<ExitCode> {
    let mu = DiscreteMeasure::parse_text(&read(path)?)?;
    let pe = PExponent::new(p)?;
    let width = arc.unwrap_or_else(|| default_arc_width(&mu));
    let w = arc_witness(&mu, width, n)?;
    let a = toeplitz_window(&mu, n)?;
    let mut lower = RankOneObjective::new(&a, pe).eval(&w.x, &w.y);
    if restarts > 0 {
        let mut opts = AscentOptions::new(restarts, seed);
        opts.structured = false;
        opts.extra_starts.push((w.x, w.y));
        lower = lower.max(mult_lower_rank1_with(&a, pe, &opts)?.value);
    }
    let upper = mu.mp_norm(pe);
    slab_core::multiplier::check_bracket(lower, upper, "measure norm")?;
    let ratio = if upper > 0.0 { lower / upper } else { 1.0 };
    emit(&format!("N,lower,upper,ratio\n{n},{lower:.12e},{upper:.12e},{ratio:.12e}\n"))
}

fn cutoff_spec(text: &str) -> Result<SmoothCutoffSpec> {
    match text {
        "default" | "v" => Ok(SmoothCutoffSpec::VPartition),
        other => match other.strip_prefix("omega:").map(str::parse::<f64>) {
            Some(Ok(d)) if d > 0.0 && d.is_finite() => Ok(SmoothCutoffSpec::OmegaPlateau { dilation: d }),
            _ => Err(Error::Input(format!("unknown cutoff `{other}`; use `default` or `omega:D` with D > 0"))),
        },
    }
}

fn besov(path: &Path, s: f64, p: f64, q: f64, cutoff: &str) -> Result<ExitCode> {
    let psi = TrigPolynomial::parse_text(&read(path)?)?;
    let report = besov_norm(&psi, BesovParams::new(s, p, q)?, &cutoff_spec(cutoff)?)?;
    let mut out = format!("# norm: {:.12e}\nn,block_lp,weighted\n", report.norm);
    for b in &report.blocks {
        out.push_str(&format!("{},{:.12e},{:.12e}\n", b.n, b.block_lp, b.weighted));
    }
    if !report.converged {
        log::warn!("some block quadratures did not converge");
    }
    emit(&out)
}

fn list_experiments() -> Result<ExitCode> {
    let mut out = String::new();
    for name in lab::experiment_names() {
        let cfg = ExperimentConfig::for_experiment(name)?;
        out.push_str(&format!("{name}: {}\n", cfg.keys().collect::<Vec<_>>().join(", ")));
    }
    emit(&out)
}

fn sweep(config: Option<&Path>, experiment: Option<&str>, overrides: &[String], output: Option<&Path>) -> Result<ExitCode> {
    let mut cfg = match (config, experiment) {
        (Some(path), _) => ExperimentConfig::parse_text(&read(path)?)?,
        (None, Some(name)) => ExperimentConfig::for_experiment(name)?,
        (None, None) => return Err(Error::Input("pass --config or --experiment".into())),
    };
    for kv in overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("override `{kv}` is not KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(path) = output {
        cfg.output = Some(path.to_path_buf());
    }
    cfg.validate()?;
    let out = lab::run_experiment(&cfg)?;
    let csv = out.to_csv(cfg.flag("runtime_ms")?);
    match &cfg.output {
        Some(path) => fs::write(path, &csv)?,
        None => io::stdout().lock().write_all(csv.as_bytes())?,
    }
    let violations = out.ceiling_violations();
    for r in &violations {
        eprintln!(
            "ratio outside ceiling: {} [{}] low {:.3e} high {:.3e}",
            r.experiment, r.params, r.ratio_low, r.ratio_high
        );
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(CHECKS_FAILED) })
}

fn fit(path: &Path, x: &str, y: &str, filters: &[String]) -> Result<ExitCode> {
    let mut table = parse_table(&read(path)?)?;
    for f in filters {
        let (c, v) = f
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("filter `{f}` is not COLUMN=VALUE")))?;
        table = table.filter(c.trim(), v.trim())?;
    }
    let fit = fit_scaling(&table, x, y)?;
    emit(&format!(
        "slope,intercept,slope_stderr,residual_rms,n\n{:.12e},{:.12e},{:.12e},{:.12e},{}\n",
        fit.slope, fit.intercept, fit.slope_stderr, fit.residual_rms, fit.n
    ))
}

fn kernel(k: Kernel) -> Result<ExitCode> {
    let text = match k {
        Kernel::Dirichlet { n } => dirichlet_kernel(n)?.to_text(),
        Kernel::Fejer { n } => fejer_square(n)?.to_text(),
        Kernel::Phi { n, big_n } => phi_witness(n, big_n)?.to_text(),
        Kernel::Omega { n } => omega_kernel(n)?.to_text(),
        Kernel::Sampled { m } => sampled_polynomial(&SmoothCutoffSpec::default(), m)?.to_text(),
    };
    emit(&text)
}

//! Experiment runner, verification suites and scaling fits.
//!
//! Every experiment turns a configuration grid into rows of
//! [`RatioRecord`]s: a measured bracket, a reference scale and the two
//! ratios. Output is emitted as CSV with a single `# anchor:` comment line.

mod config;
mod experiments;
mod fit;
mod verify;

use std::time::Instant;

pub use config::ExperimentConfig;
pub use experiments::{
    witness_partial_sums, default_arc_width, dirichlet_partial_sups, minimal_witness_order, random_atom_sum,
    toeplitz_arc_lower,
};
pub use fit::{fit_scaling, parse_table, ScalingFit, Table};
pub use verify::{bracket_audit, verify, CheckOutcome, VerifyReport, SUITES};

use crate::error::{input, Error, Result};

/// Ratios beyond this bound (or below its reciprocal) fail a bounded-ratio experiment.
pub const DEFAULT_RATIO_CEILING: f64 = 1e3;

/// One measured row of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRecord {
    pub experiment: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub measured_low: f64,
    pub measured_high: f64,
    pub reference_scale: f64,
    pub ratio_low: f64,
    pub ratio_high: f64,
    pub runtime_ms: Option<f64>,
}

impl RatioRecord {
    pub fn new(experiment: &str, params: String, low: f64, high: f64, reference: f64) -> Result<Self> {
        if !(reference > 0.0 && reference.is_finite()) {
            return Err(Error::Numeric(format!("{experiment} [{params}]: reference scale {reference} is not positive")));
        }
        let (ratio_low, ratio_high) = (low / reference, high / reference);
        if !(ratio_low.is_finite() && ratio_high.is_finite()) {
            return Err(Error::Numeric(format!("{experiment} [{params}]: non-finite ratio")));
        }
        Ok(Self {
            experiment: experiment.to_string(),
            params,
            measured_low: low,
            measured_high: high,
            reference_scale: reference,
            ratio_low,
            ratio_high,
            runtime_ms: None,
        })
    }

    /// Value of a `key=value` entry of `params`.
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .split(';')
            .filter_map(|kv| kv.split_once('='))
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }

    fn csv_row(&self, runtime: bool) -> String {
        let mut row = format!(
            "{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            self.experiment,
            self.params,
            self.measured_low,
            self.measured_high,
            self.reference_scale,
            self.ratio_low,
            self.ratio_high
        );
        if runtime {
            row.push_str(&format!(",{:.3}", self.runtime_ms.unwrap_or(0.0)));
        }
        row
    }
}

/// Rows of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub anchor: String,
    pub records: Vec<RatioRecord>,
    /// Ceiling for ratio columns; `None` if the ratios are meant to tend to zero or one.
    pub ceiling: Option<f64>,
}

impl ExperimentOutput {
    pub const HEADER: &'static str =
        "experiment,params,measured_low,measured_high,reference_scale,ratio_low,ratio_high";

    pub fn to_csv(&self, runtime: bool) -> String {
        let mut out = format!("# anchor: {}\n{}", self.anchor, Self::HEADER);
        out.push_str(if runtime { ",runtime_ms\n" } else { "\n" });
        for r in &self.records {
            out.push_str(&r.csv_row(runtime));
            out.push('\n');
        }
        out
    }

    /// Records whose ratios leave `[1/ceiling, ceiling]` (zero ratios are allowed).
    pub fn ceiling_violations(&self) -> Vec<&RatioRecord> {
        let Some(c) = self.ceiling else { return vec![] };
        let outside = |r: f64| r > c || (r > 0.0 && r < 1.0 / c);
        self.records
            .iter()
            .filter(|r| outside(r.ratio_low) || outside(r.ratio_high))
            .collect()
    }
}

type Runner = fn(&ExperimentConfig) -> Result<Vec<RatioRecord>>;

pub(crate) struct Registered {
    pub name: &'static str,
    pub anchor: &'static str,
    pub defaults: &'static [(&'static str, &'static str)],
    pub bounded: bool,
    run: Runner,
}

pub(crate) fn registry() -> &'static [Registered] {
    experiments::REGISTRY
}

/// Names of all registered experiments, in registration order.
pub fn experiment_names() -> Vec<&'static str> {
    registry().iter().map(|e| e.name).collect()
}

pub(crate) fn lookup(name: &str) -> Result<&'static Registered> {
    registry().iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExperiment {
        name: name.to_string(),
        known: experiment_names().join(", "),
    })
}

/// Runs the named experiment on its (validated) grid.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let entry = lookup(&config.experiment)?;
    config.validate()?;
    let start = Instant::now();
    let mut records = (entry.run)(config)?;
    if records.is_empty() {
        return input(format!("experiment {} produced no rows", entry.name));
    }
    if config.flag("runtime_ms")? {
        let per_row = start.elapsed().as_secs_f64() * 1e3 / records.len() as f64;
        records.iter_mut().for_each(|r| r.runtime_ms = Some(per_row));
    }
    Ok(ExperimentOutput {
        experiment: entry.name.to_string(),
        anchor: entry.anchor.to_string(),
        records,
        ceiling: entry.bounded.then(|| config.f64("ratio_ceiling").unwrap_or(DEFAULT_RATIO_CEILING)),
    })
}

/// Writes the CSV to `config.output` if set and returns it.
pub fn run_to_csv(config: &ExperimentConfig) -> Result<String> {
    let out = run_experiment(config)?;
    let csv = out.to_csv(config.flag("runtime_ms")?);
    if let Some(path) = &config.output {
        std::fs::write(path, &csv)?;
    }
    Ok(csv)
}

//! Brackets for Schur multiplier norms on Schatten classes with `0 < p ≤ 1`.
//!
//! The lower end comes from a rank-one witness search, the upper end from the
//! smallest applicable certificate.

mod ascent;
mod diagnostics;
mod oracle;
mod upper;

use std::ops::Range;
use std::str::FromStr;

pub use ascent::{mult_lower_rank1, mult_lower_rank1_with, AscentOptions, LowerBound, RankOneObjective};
pub use diagnostics::{hankel_scores, r_family_score, HankelScores};
pub use oracle::{mult_oracle_small, mult_oracle_small_with, OracleOptions};
pub use upper::{
    block_diagonal_norm, coefficient_bound_check, corner_cut, gamma_minus_matrix, gamma_minus_upper, hankel_symbol_of,
    hankel_rank_one_average, mollifier_convergence, mult_upper_hadamard, mult_upper_hankel_poly, mult_upper_hankel_trig, q_corner,
    strip, strip_upper_bound, strip_upper_hadamard, CoefficientBound, MollifierRow,
};

use crate::error::{input, Error, Result};
use crate::linalg::{ComplexMatrix, PExponent, Sharp};

/// Relative slack allowed between a lower bound and an upper certificate.
pub const BRACKET_TOLERANCE: f64 = 1e-9;

/// Row and column cuts `0 = n_0 < n_1 < … < n_K = rows`, likewise for columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub row_cuts: Vec<usize>,
    pub col_cuts: Vec<usize>,
}

impl BlockPartition {
    pub fn new(row_cuts: Vec<usize>, col_cuts: Vec<usize>) -> Result<Self> {
        for (name, cuts) in [("row", &row_cuts), ("column", &col_cuts)] {
            if cuts.len() < 2 || cuts[0] != 0 || cuts.windows(2).any(|w| w[1] <= w[0]) {
                return input(format!("{name} cuts {cuts:?} must start at 0 and increase strictly"));
            }
        }
        Ok(Self { row_cuts, col_cuts })
    }

    /// Equal square blocks of the given sizes on both axes.
    pub fn diagonal(sizes: &[usize]) -> Result<Self> {
        let cuts: Vec<usize> = std::iter::once(0)
            .chain(sizes.iter().scan(0, |acc, &s| {
                *acc += s;
                Some(*acc)
            }))
            .collect();
        Self::new(cuts.clone(), cuts)
    }

    pub fn check_shape(&self, a: &ComplexMatrix) -> Result<()> {
        if *self.row_cuts.last().unwrap() != a.rows() || *self.col_cuts.last().unwrap() != a.cols() {
            return input(format!(
                "partition ends at {}×{}, matrix is {}×{}",
                self.row_cuts.last().unwrap(),
                self.col_cuts.last().unwrap(),
                a.rows(),
                a.cols()
            ));
        }
        Ok(())
    }

    pub fn row_blocks(&self) -> usize {
        self.row_cuts.len() - 1
    }

    pub fn col_blocks(&self) -> usize {
        self.col_cuts.len() - 1
    }

    pub fn rows_of(&self, k: usize) -> Range<usize> {
        self.row_cuts[k]..self.row_cuts[k + 1]
    }

    pub fn cols_of(&self, l: usize) -> Range<usize> {
        self.col_cuts[l]..self.col_cuts[l + 1]
    }

    /// Row and column ranges of the blocks `(k, k)`.
    pub fn diagonal_blocks(&self) -> impl Iterator<Item = (Range<usize>, Range<usize>)> + '_ {
        (0..self.row_blocks().min(self.col_blocks())).map(|k| (self.rows_of(k), self.cols_of(k)))
    }

    pub fn block(&self, a: &ComplexMatrix, k: usize, l: usize) -> Result<ComplexMatrix> {
        let (r, c) = (self.rows_of(k), self.cols_of(l));
        a.block(r.start, r.end, c.start, c.end)
    }

    /// True when the block counts agree and every off-diagonal block vanishes.
    pub fn is_block_diagonal(&self, a: &ComplexMatrix) -> Result<bool> {
        self.check_shape(a)?;
        if self.row_blocks() != self.col_blocks() {
            return Ok(false);
        }
        for k in 0..self.row_blocks() {
            for l in 0..self.col_blocks() {
                if k != l && self.block(a, k, l)?.max_abs() != 0.0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Parses two lines of whitespace-separated cuts: rows, then columns.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let mut read = |what: &str| -> Result<Vec<usize>> {
            let (i, line) = lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing {what} cuts"),
            })?;
            line.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: format!("bad cut `{t}`: {e}"),
                    })
                })
                .collect()
        };
        let rows = read("row")?;
        let cols = read("column")?;
        Self::new(rows, cols)
    }
}

/// Builds a witness for a block-diagonal matrix from per-block witnesses
/// `(x_k, y_k)` with values `v_k`: block `k` gets weight `α_k` with
/// `α_k² ∝ v_k^{p#}`, or all weight on the largest block at `p = 1`.
pub fn combine_block_witnesses(
    partition: &BlockPartition,
    blocks: &[(Vec<f64>, Vec<f64>, f64)],
    p: PExponent,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if blocks.len() != partition.row_blocks().min(partition.col_blocks()) {
        return input("one witness per diagonal block is required");
    }
    let weights: Vec<f64> = match p.sharp() {
        Sharp::Finite(q) => {
            let top = blocks.iter().fold(0.0_f64, |m, b| m.max(b.2));
            let raw: Vec<f64> = blocks.iter().map(|b| if top > 0.0 { (b.2 / top).powf(q) } else { 1.0 }).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|w| (w / total).sqrt()).collect()
        }
        Sharp::Infinite => {
            let best = (0..blocks.len()).fold(0, |bi, k| if blocks[k].2 > blocks[bi].2 { k } else { bi });
            (0..blocks.len()).map(|k| if k == best { 1.0 } else { 0.0 }).collect()
        }
    };
    let mut x = vec![0.0; *partition.col_cuts.last().unwrap()];
    let mut y = vec![0.0; *partition.row_cuts.last().unwrap()];
    for (k, ((rows, cols), (bx, by, _))) in partition.diagonal_blocks().zip(blocks).enumerate() {
        if bx.len() != cols.len() || by.len() != rows.len() {
            return input(format!("witness for block {k} has the wrong length"));
        }
        for (slot, v) in x[cols].iter_mut().zip(bx) {
            *slot = weights[k] * v;
        }
        for (slot, v) in y[rows].iter_mut().zip(by) {
            *slot = weights[k] * v;
        }
    }
    Ok((x, y))
}

/// Which upper certificates to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpperChoice {
    #[default]
    All,
    Hadamard,
    HankelPoly,
    Strips,
}

impl FromStr for UpperChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "hadamard" => Ok(Self::Hadamard),
            "hankel-poly" => Ok(Self::HankelPoly),
            "strips" => Ok(Self::Strips),
            other => input(format!("unknown upper certificate `{other}` (all, hadamard, hankel-poly, strips)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub ascent: AscentOptions,
    pub upper: UpperChoice,
}

impl EstimateOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            ascent: AscentOptions::new(restarts, seed),
            upper: UpperChoice::All,
        }
    }
}

/// A bracket `[lower, upper]` on `‖A‖_{𝔐_p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierEstimate {
    pub lower: f64,
    pub upper: f64,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
    pub lower_method: String,
    pub upper_method: String,
    pub restarts_used: usize,
    pub seed: u64,
    /// Every certificate that applied, with its value.
    pub certificates: Vec<(String, f64)>,
}

impl MultiplierEstimate {
    pub fn csv_header() -> &'static str {
        "lower,upper,lower_method,upper_method,restarts,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:.12e},{:.12e},{},{},{},{}",
            self.lower, self.upper, self.lower_method, self.upper_method, self.restarts_used, self.seed
        )
    }
}

/// Fails with [`Error::BracketViolation`] unless `lower ≤ upper (1 + 1e-9)`.
pub fn check_bracket(lower: f64, upper: f64, method: &str) -> Result<()> {
    if lower > upper * (1.0 + BRACKET_TOLERANCE) {
        return Err(Error::BracketViolation {
            lower,
            upper,
            method: method.to_string(),
        });
    }
    Ok(())
}

/// Upper certificates applicable to `a`, each with its tag.
pub fn upper_certificates(a: &ComplexMatrix, p: PExponent, choice: UpperChoice, partition: Option<&BlockPartition>) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    let want = |c: UpperChoice| choice == UpperChoice::All || choice == c;
    if want(UpperChoice::Hadamard) {
        out.push(("hadamard".to_string(), mult_upper_hadamard(a, p)?));
    }
    if want(UpperChoice::HankelPoly) {
        if let Some(psi) = hankel_symbol_of(a) {
            out.push(("hankel-poly".to_string(), mult_upper_hankel_poly(&psi, p)?));
        } else if choice == UpperChoice::HankelPoly {
            return Err(Error::Classification("matrix is not Hankel; hankel-poly does not apply".into()));
        }
    }
    if want(UpperChoice::Strips) {
        match partition {
            Some(part) => {
                part.check_shape(a)?;
                if part.row_blocks() > 1 {
                    out.push(("strips".to_string(), strip_upper_hadamard(a, &part.row_cuts, p)?));
                }
                if part.row_blocks() > 1 && part.is_block_diagonal(a)? {
                    let values = part
                        .diagonal_blocks()
                        .map(|(r, c)| mult_upper_hadamard(&a.block(r.start, r.end, c.start, c.end)?, p))
                        .collect::<Result<Vec<_>>>()?;
                    out.push(("block-diagonal".to_string(), block_diagonal_norm(&values, p)?));
                }
            }
            None if choice == UpperChoice::Strips => return input("the strips certificate needs a block partition"),
            None => {}
        }
    }
    Ok(out)
}

/// Lower bound, certificates and the bracket check in one call.
pub fn estimate_multiplier(a: &ComplexMatrix, p: PExponent, opts: &EstimateOptions) -> Result<MultiplierEstimate> {
    let mut ascent = opts.ascent.clone();
    if let Some(part) = &opts.ascent.partition {
        if part.is_block_diagonal(a)? {
            let mut witnesses = Vec::new();
            for (r, c) in part.diagonal_blocks() {
                let block = a.block(r.start, r.end, c.start, c.end)?;
                let mut sub = opts.ascent.clone();
                sub.partition = None;
                sub.extra_starts.clear();
                let lb = mult_lower_rank1_with(&block, p, &sub)?;
                witnesses.push((lb.witness_x, lb.witness_y, lb.value));
            }
            ascent.extra_starts.push(combine_block_witnesses(part, &witnesses, p)?);
        }
    }
    let lower = mult_lower_rank1_with(a, p, &ascent)?;
    let certificates = upper_certificates(a, p, opts.upper, opts.ascent.partition.as_ref())?;
    let (upper_method, upper) = certificates
        .iter()
        .fold(None::<(String, f64)>, |best, (name, v)| match best {
            Some((_, b)) if b <= *v => best,
            _ => Some((name.clone(), *v)),
        })
        .ok_or_else(|| Error::Input("no upper certificate applies".into()))?;
    for (name, v) in &certificates {
        check_bracket(lower.value, *v, name)?;
    }
    Ok(MultiplierEstimate {
        lower: lower.value,
        upper,
        witness_x: lower.witness_x,
        witness_y: lower.witness_y,
        lower_method: lower.method,
        upper_method,
        restarts_used: lower.restarts_used,
        seed: lower.seed,
        certificates,
    })
}

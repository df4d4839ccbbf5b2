//! Parameter sweeps over synthetic measure families.
//!
//! A sweep runs the recovery pipeline over a grid of scenario parameters
//! `(a, c, r)` and working degrees `N`, scores each cell against the known
//! ground truth, and renders the results as CSV with a fixed column set.
//! Scenario geometry: the continuous part is one interval `[c-r, c+r]`
//! (weight 0.9) or two intervals `[c-r, c-r/3] ∪ [c+r/3, c+r]` (weight
//! 0.45 each), plus a single atom at `a+c+r` (weight 0.1) — so `a > 0` is
//! the atom's distance from the right edge of the support. With `r = 0`
//! the continuous part collapses to a point mass and the cell degenerates
//! to a purely atomic measure (which the flat path handles, flagged with a
//! regime-mismatch warning when the cell requested a continuous regime).
//!
//! Cells with `noise_sigma = 0` integrate through the exact quadrature
//! oracle. With noise, each exact moment is perturbed by an independent
//! uniform draw from `[-noise_sigma, +noise_sigma]` and recovery runs
//! through the moment backend; each cell draws from its own RNG stream,
//! so results are deterministic for a given seed regardless of execution
//! order. Note the moment backend gates on positive semidefiniteness with
//! relative slack `tau`: noise larger than `tau` times the top eigenvalue
//! makes cells fail that gate (an honest error row), so noisy sweeps
//! should raise `tau` to at least the noise scale.

use crate::measure::{AtomPart, Density, IntervalPart, MeasureError, MeasureSpec};
use crate::metrics::{atom_success, hausdorff, interval_iou, SupportSet};
use crate::momentio::{MomentData, DEFAULT_TAU};
use crate::recover::{
    suploc_moments, suploc_spec, RegimeRequest, SupLocOptions, SupportEstimate,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep config invalid: {0}")]
    Config(String),
    #[error("CSV parse error on line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

/// Continuous-part geometry of a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "one_interval")]
    OneInterval,
    #[serde(rename = "two_intervals")]
    TwoIntervals,
}

fn default_a() -> Vec<f64> {
    vec![0.5, 1.0]
}
fn default_c() -> Vec<f64> {
    vec![-0.3, 0.0, 0.3]
}
fn default_r() -> Vec<f64> {
    vec![0.5, 1.0]
}
fn default_degrees() -> Vec<usize> {
    vec![10, 20, 30, 40]
}
fn default_tau() -> f64 {
    DEFAULT_TAU
}

/// Sweep definition, deserialized from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Scenario,
    #[serde(default = "default_a")]
    pub a: Vec<f64>,
    #[serde(default = "default_c")]
    pub c: Vec<f64>,
    #[serde(default = "default_r")]
    pub r: Vec<f64>,
    #[serde(default = "default_degrees")]
    pub degrees: Vec<usize>,
    pub epsilon: f64,
    /// Regime request per cell; defaults per scenario (single interval /
    /// general).
    #[serde(default)]
    pub regime: Option<RegimeRequest>,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tau")]
    pub tau: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let need = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(SweepError::Config(msg.to_string()))
            }
        };
        need(!self.a.is_empty(), "a grid is empty")?;
        need(!self.c.is_empty(), "c grid is empty")?;
        need(!self.r.is_empty(), "r grid is empty")?;
        need(!self.degrees.is_empty(), "degree grid is empty")?;
        need(
            self.a.iter().all(|&v| v.is_finite() && v > 0.0),
            "a values must be positive (atom distance from the support edge)",
        )?;
        need(self.c.iter().all(|&v| v.is_finite()), "c values must be finite")?;
        need(
            self.r.iter().all(|&v| v.is_finite() && v >= 0.0),
            "r values must be nonnegative",
        )?;
        need(self.degrees.iter().all(|&n| n >= 1), "degrees must be at least 1")?;
        need(
            self.epsilon.is_finite() && self.epsilon > 0.0,
            "epsilon must be positive",
        )?;
        need(
            self.noise_sigma.is_finite() && self.noise_sigma >= 0.0,
            "noise_sigma must be nonnegative",
        )?;
        need(self.tau.is_finite() && self.tau > 0.0, "tau must be positive")?;
        Ok(())
    }

    /// The regime cells run under: explicit from the config, else the
    /// scenario's natural assumption.
    pub fn effective_regime(&self) -> RegimeRequest {
        self.regime.unwrap_or(match self.scenario {
            Scenario::OneInterval => RegimeRequest::SingleInterval,
            Scenario::TwoIntervals => RegimeRequest::General,
        })
    }
}

/// Builds the ground-truth measure of one sweep cell.
///
/// `r = 0` collapses the continuous part to a point mass at `c`.
pub fn scenario_spec(
    scenario: Scenario,
    a: f64,
    c: f64,
    r: f64,
) -> Result<MeasureSpec, MeasureError> {
    let atom = AtomPart { position: a + c + r, weight: 0.1 };
    if r == 0.0 {
        return MeasureSpec::new(
            vec![AtomPart { position: c, weight: 0.9 }, atom],
            vec![],
            None,
        );
    }
    let intervals = match scenario {
        Scenario::OneInterval => vec![IntervalPart {
            lower: c - r,
            upper: c + r,
            weight: 0.9,
            density: Density::Uniform,
        }],
        Scenario::TwoIntervals => vec![
            IntervalPart {
                lower: c - r,
                upper: c - r / 3.0,
                weight: 0.45,
                density: Density::Uniform,
            },
            IntervalPart {
                lower: c + r / 3.0,
                upper: c + r,
                weight: 0.45,
                density: Density::Uniform,
            },
        ],
    };
    MeasureSpec::new(vec![atom], intervals, None)
}

/// One scored sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub c: f64,
    pub r: f64,
    pub degree: usize,
    pub epsilon: f64,
    /// Resolved regime token, or `error` when the cell failed.
    pub regime: String,
    pub atom_success: bool,
    pub n_false_atoms: usize,
    pub iou: f64,
    pub hausdorff: f64,
    pub n_pollution: usize,
    /// Warning tokens joined with `;`, or the error message.
    pub warnings: String,
}

/// Fixed CSV column set, one row per `(a, c, r, N)` cell.
pub const CSV_HEADER: &str =
    "a,c,r,N,epsilon,regime,atom_success,n_false_atoms,iou,hausdorff,n_pollution,warnings";

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.c,
            self.r,
            self.degree,
            self.epsilon,
            self.regime,
            self.atom_success,
            self.n_false_atoms,
            self.iou,
            self.hausdorff,
            self.n_pollution,
            self.warnings,
        )
    }

    pub fn from_csv_line(line: &str, line_no: usize) -> Result<SweepRow, SweepError> {
        let fields: Vec<&str> = line.splitn(12, ',').collect();
        if fields.len() != 12 {
            return Err(SweepError::Csv {
                line: line_no,
                reason: format!("expected 12 columns, got {}", fields.len()),
            });
        }
        let bad = |what: &str| SweepError::Csv {
            line: line_no,
            reason: format!("bad {what} field"),
        };
        Ok(SweepRow {
            a: fields[0].parse().map_err(|_| bad("a"))?,
            c: fields[1].parse().map_err(|_| bad("c"))?,
            r: fields[2].parse().map_err(|_| bad("r"))?,
            degree: fields[3].parse().map_err(|_| bad("N"))?,
            epsilon: fields[4].parse().map_err(|_| bad("epsilon"))?,
            regime: fields[5].to_string(),
            atom_success: fields[6].parse().map_err(|_| bad("atom_success"))?,
            n_false_atoms: fields[7].parse().map_err(|_| bad("n_false_atoms"))?,
            iou: fields[8].parse().map_err(|_| bad("iou"))?,
            hausdorff: fields[9].parse().map_err(|_| bad("hausdorff"))?,
            n_pollution: fields[10].parse().map_err(|_| bad("n_pollution"))?,
            warnings: fields[11].to_string(),
        })
    }
}

/// Renders rows as CSV with the fixed header.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Parses CSV produced by [`to_csv`] (header line required).
pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>, SweepError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line != CSV_HEADER {
                return Err(SweepError::Csv {
                    line: 1,
                    reason: "missing or wrong header".to_string(),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        rows.push(SweepRow::from_csv_line(line, i + 1)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    a: f64,
    c: f64,
    r: f64,
    degree: usize,
    index: u64,
}

fn enumerate_cells(config: &SweepConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    let mut index = 0_u64;
    for &a in &config.a {
        for &c in &config.c {
            for &r in &config.r {
                for &degree in &config.degrees {
                    cells.push(Cell { a, c, r, degree, index });
                    index += 1;
                }
            }
        }
    }
    cells
}

fn error_row(config: &SweepConfig, cell: &Cell, message: String) -> SweepRow {
    SweepRow {
        a: cell.a,
        c: cell.c,
        r: cell.r,
        degree: cell.degree,
        epsilon: config.epsilon,
        regime: "error".to_string(),
        atom_success: false,
        n_false_atoms: 0,
        iou: f64::NAN,
        hausdorff: f64::NAN,
        n_pollution: 0,
        warnings: sanitize_csv(&message),
    }
}

// Keeps free-form text from breaking the one-line-per-row CSV shape.
fn sanitize_csv(text: &str) -> String {
    text.replace([',', '\n'], ";")
}

fn score(
    config: &SweepConfig,
    cell: &Cell,
    spec: &MeasureSpec,
    estimate: &SupportEstimate,
) -> SweepRow {
    let truth = SupportSet::from_spec(spec);
    let found = SupportSet::from_estimate(estimate);
    let report = atom_success(truth.points(), &estimate.atoms, config.epsilon);
    let d_h = hausdorff(&truth, &found).map_or(f64::NAN, |d| d);
    SweepRow {
        a: cell.a,
        c: cell.c,
        r: cell.r,
        degree: cell.degree,
        epsilon: config.epsilon,
        regime: estimate.regime.token().to_string(),
        atom_success: report.success,
        n_false_atoms: report.false_positives,
        iou: interval_iou(truth.intervals(), &estimate.intervals),
        hausdorff: d_h,
        n_pollution: estimate.pollution.len(),
        warnings: sanitize_csv(&estimate.warnings_text()),
    }
}

fn run_cell(config: &SweepConfig, cell: &Cell) -> SweepRow {
    let spec = match scenario_spec(config.scenario, cell.a, cell.c, cell.r) {
        Ok(spec) => spec,
        Err(e) => return error_row(config, cell, e.to_string()),
    };
    let mut opts = SupLocOptions::new(config.epsilon, cell.degree)
        .with_regime(config.effective_regime());
    opts.tau = config.tau;

    let outcome = if config.noise_sigma > 0.0 {
        // One degree of headroom so the general regime can use P_{N+1}.
        let mut y = spec.moments(2 * (cell.degree + 1));
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(cell.index);
        for v in y.iter_mut() {
            *v += rng.random_range(-config.noise_sigma..=config.noise_sigma);
        }
        MomentData::from_moments(y)
            .map_err(Into::into)
            .and_then(|data| suploc_moments(&data, &opts))
    } else {
        suploc_spec(&spec, &opts)
    };
    match outcome {
        Ok(estimate) => score(config, cell, &spec, &estimate),
        Err(e) => error_row(config, cell, e.to_string()),
    }
}

/// Runs every cell of the sweep; rows come back in canonical grid order
/// (`a`, then `c`, then `r`, then `N`). Cell failures become error rows,
/// never process failures.
#[cfg(feature = "parallel")]
pub fn run_cells(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    use rayon::prelude::*;
    config.validate()?;
    let cells = enumerate_cells(config);
    Ok(cells.par_iter().map(|cell| run_cell(config, cell)).collect())
}

/// Sequential twin of [`run_cells`] (the only entry point without the
/// `parallel` feature); produces identical rows.
pub fn run_cells_serial(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    config.validate()?;
    let cells = enumerate_cells(config);
    Ok(cells.iter().map(|cell| run_cell(config, cell)).collect())
}

#[cfg(not(feature = "parallel"))]
pub fn run_cells(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    run_cells_serial(config)
}

/// Minimum degree achieving a high success rate, per `(a, r)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub a: f64,
    pub r: f64,
    /// Smallest degree whose success rate over the `c` grid reaches 0.8,
    /// when any does.
    pub min_degree: Option<usize>,
}

/// Aggregates rows into the minimum-degree-for-success report, averaging
/// atom success over `c` for each `(a, r, N)`.
pub fn aggregate_report(rows: &[SweepRow]) -> Vec<ReportEntry> {
    use std::collections::BTreeMap;
    // f64 grid values arrive bit-identical from the config, so keying on
    // bits is exact here.
    let mut groups: BTreeMap<(u64, u64), BTreeMap<usize, (usize, usize)>> = BTreeMap::new();
    for row in rows {
        let per_degree = groups
            .entry((row.a.to_bits(), row.r.to_bits()))
            .or_default();
        let (hits, total) = per_degree.entry(row.degree).or_insert((0, 0));
        if row.atom_success {
            *hits += 1;
        }
        *total += 1;
    }
    groups
        .into_iter()
        .map(|((a_bits, r_bits), per_degree)| ReportEntry {
            a: f64::from_bits(a_bits),
            r: f64::from_bits(r_bits),
            min_degree: per_degree
                .into_iter()
                .find(|&(_, (hits, total))| (hits as f64) >= 0.8 * (total as f64))
                .map(|(degree, _)| degree),
        })
        .collect()
}

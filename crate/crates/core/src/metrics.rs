//! Recovery-quality metrics: Hausdorff distance, interval IoU, atom
//! matching, and convergence-rate fits.
//!
//! Supports live on the real line as finite unions of points and closed
//! intervals. In one dimension the Hausdorff distance between two such
//! sets is attained on a small finite candidate set (component endpoints
//! plus the opposing set's Voronoi midpoints), so it is computed exactly;
//! a dense-sampling oracle is used only by the test suite.

use crate::measure::MeasureSpec;
use crate::recover::SupportEstimate;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("hausdorff distance requires both sets nonempty")]
    EmptySet,
    #[error("rate fit requires positive errors, offending sample index {index}")]
    NonPositiveError { index: usize },
    #[error("rate fit requires at least 4 samples at distinct degrees, got {got}")]
    TooFewSamples { got: usize },
}

/// A finite union of points and closed intervals, canonicalized.
///
/// Canonical form: intervals sorted and merged (overlapping or touching
/// intervals coalesce), points sorted and deduplicated, and no point
/// inside any closed interval.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SupportSet {
    points: Vec<f64>,
    intervals: Vec<(f64, f64)>,
}

impl SupportSet {
    /// Builds a canonical set. Interval pairs may come in any order and
    /// orientation; all coordinates must be finite.
    pub fn new(points: Vec<f64>, intervals: Vec<(f64, f64)>) -> SupportSet {
        for &p in &points {
            assert!(p.is_finite(), "support point must be finite, got {p}");
        }
        let mut ivs: Vec<(f64, f64)> = intervals
            .into_iter()
            .map(|(a, b)| {
                assert!(
                    a.is_finite() && b.is_finite(),
                    "interval endpoints must be finite, got ({a}, {b})"
                );
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        ivs.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(ivs.len());
        for (lo, hi) in ivs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        let mut pts: Vec<f64> = points
            .into_iter()
            .filter(|&p| !merged.iter().any(|&(lo, hi)| lo <= p && p <= hi))
            .collect();
        pts.sort_unstable_by(f64::total_cmp);
        pts.dedup();
        SupportSet { points: pts, intervals: merged }
    }

    /// The support an estimate claims: its atoms and intervals.
    pub fn from_estimate(estimate: &SupportEstimate) -> SupportSet {
        SupportSet::new(estimate.atoms.clone(), estimate.intervals.clone())
    }

    /// The true support of a known measure.
    pub fn from_spec(spec: &MeasureSpec) -> SupportSet {
        SupportSet::new(
            spec.atoms().iter().map(|a| a.position).collect(),
            spec.intervals().iter().map(|v| (v.lower, v.upper)).collect(),
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    // All components as closed intervals (points degenerate), sorted and
    // pairwise disjoint thanks to canonicalization.
    fn components(&self) -> Vec<(f64, f64)> {
        let mut comps: Vec<(f64, f64)> = self.points.iter().map(|&p| (p, p)).collect();
        comps.extend(self.intervals.iter().copied());
        comps.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
        comps
    }
}

fn dist_to_components(comps: &[(f64, f64)], x: f64) -> f64 {
    comps
        .iter()
        .map(|&(lo, hi)| (lo - x).max(x - hi).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

// sup over `from` of the distance to `to`. The supremum over a component
// [a, b] of the piecewise-linear distance function is attained at a, at b,
// or at a Voronoi midpoint of `to` lying strictly inside (a, b).
fn directed_hausdorff(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
    let mids: Vec<f64> = to
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].0))
        .collect();
    let mut worst = 0.0_f64;
    for &(a, b) in from {
        worst = worst.max(dist_to_components(to, a));
        worst = worst.max(dist_to_components(to, b));
        for &m in &mids {
            if a < m && m < b {
                worst = worst.max(dist_to_components(to, m));
            }
        }
    }
    worst
}

/// Exact Hausdorff distance between two nonempty canonical sets.
pub fn hausdorff(a: &SupportSet, b: &SupportSet) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let ca = a.components();
    let cb = b.components();
    Ok(directed_hausdorff(&ca, &cb).max(directed_hausdorff(&cb, &ca)))
}

/// Intersection-over-union of two interval unions, by total length.
///
/// Both empty counts as 1 (nothing to miss), exactly one empty as 0
/// (total miss). Inputs are canonicalized internally.
pub fn interval_iou(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let ca = SupportSet::new(Vec::new(), a.to_vec());
    let cb = SupportSet::new(Vec::new(), b.to_vec());
    let len = |s: &SupportSet| -> f64 { s.intervals().iter().map(|&(l, u)| u - l).sum() };
    let mut inter = 0.0;
    for &(al, au) in ca.intervals() {
        for &(bl, bu) in cb.intervals() {
            let lo = al.max(bl);
            let hi = au.min(bu);
            if hi > lo {
                inter += hi - lo;
            }
        }
    }
    let union = len(&ca) + len(&cb) - inter;
    if union <= 0.0 {
        // Both unions have zero total length (degenerate inputs).
        return 1.0;
    }
    inter / union
}

/// Outcome of matching recovered atoms against the true ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomMatchReport {
    /// Per true atom: exactly one found atom within epsilon.
    pub per_atom: Vec<bool>,
    /// Every true atom matched exactly once.
    pub matched_all: bool,
    /// Found atoms farther than epsilon from every true atom.
    pub false_positives: usize,
    /// `matched_all` with no false positives.
    pub success: bool,
}

/// Matches `found` atoms against `truth` within `epsilon`.
///
/// A true atom succeeds iff exactly one found atom lies within epsilon of
/// it; found atoms not within epsilon of any true atom count as false
/// positives.
pub fn atom_success(truth: &[f64], found: &[f64], epsilon: f64) -> AtomMatchReport {
    let per_atom: Vec<bool> = truth
        .iter()
        .map(|&t| found.iter().filter(|&&f| (f - t).abs() <= epsilon).count() == 1)
        .collect();
    let matched_all = per_atom.iter().all(|&ok| ok);
    let false_positives = found
        .iter()
        .filter(|&&f| truth.iter().all(|&t| (f - t).abs() > epsilon))
        .count();
    AtomMatchReport {
        matched_all,
        false_positives,
        success: matched_all && false_positives == 0,
        per_atom,
    }
}

/// Result of a log-linear convergence fit `e_n ≈ C·cⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    /// Estimated base `c = exp(slope)`.
    pub rate: f64,
    /// Coefficient of determination of the least-squares fit.
    pub r2: f64,
}

/// Least-squares fit of `ln e_n` against `n`.
///
/// Needs at least four samples at no fewer than two distinct degrees and
/// strictly positive errors. A constant sequence fits exactly with rate 1
/// and r² = 1.
pub fn rate_fit(samples: &[(usize, f64)]) -> Result<RateFit, MetricsError> {
    if samples.len() < 4 {
        return Err(MetricsError::TooFewSamples { got: samples.len() });
    }
    for (index, &(_, e)) in samples.iter().enumerate() {
        if !(e > 0.0) || !e.is_finite() {
            return Err(MetricsError::NonPositiveError { index });
        }
    }
    let m = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, e)| e.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    if sxx == 0.0 {
        let distinct = 1;
        return Err(MetricsError::TooFewSamples { got: distinct });
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { rate: slope.exp(), r2 })
}

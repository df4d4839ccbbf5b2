//! Support recovery: root classification and the SupLoc estimator.
//!
//! Given an integration oracle for an unknown measure, [`suploc`] proceeds
//! in three stages:
//!
//! 1. **Flat scan.** Ranks of consecutive moment matrices are compared for
//!    small degrees. Rank stagnation at `r` certifies a purely `r`-atomic
//!    measure, and the `r` eigenvalues of the order-`r` Jacobi matrix are
//!    the atoms — exactly. The scan is capped (default degree 8) and uses
//!    its own rank tolerance (default 1e-13, not the looser general
//!    [`tau`](SupLocOptions::tau)): for a continuous measure the moment
//!    matrix eigenvalues decay geometrically with the degree — fastest
//!    when an outlying atom inflates the largest eigenvalue — so past a
//!    modest degree a relative rank test fakes stagnation at any
//!    tolerance. At the default cap the genuine signal eigenvalues of
//!    well-separated atomic measures sit orders of magnitude above
//!    1e-13 while fakes stay below the cap, keeping the test trustworthy
//!    on both sides.
//! 2. **Recurrence and roots.** One Stieltjes pass (order `N + 1` when the
//!    budget allows, so the general regime can also use `P_{N+1}`), then
//!    eigenvalues of the order-`N` Jacobi matrix.
//! 3. **Classification.** Roots with an ε-close neighbour form bulks
//!    (continuous support); isolated roots and remote twin pairs are atom
//!    candidates, filtered per regime. Twin pairs — two mutually ε-close
//!    roots with nothing else within `2ε` — straddle a well-separated
//!    atom, and their midpoint is the atom estimate.
//!
//! Regimes encode what the caller assumes about the measure: a single
//! interval, several intervals with all atoms outside their hull, or the
//! general case, where candidates inside the hull are confirmed by
//! comparing against the roots of `P_{N+1}` within the threshold
//! [`rho_threshold`]. `auto` inspects the root structure and picks the
//! most specific regime it can justify.

use crate::measure::{MeasureSpec, QuadratureOracle};
use crate::momentio::{flatness, MomentData, MomentIoError, MomentOracle};
use crate::orthopoly::{jacobi, stieltjes, Oracle, OrthopolyError};
use crate::spectra::{eigenvalues, RootList, SpectraError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Cap on the flat-scan degree; see the module docs.
pub const DEFAULT_FLAT_SCAN_LIMIT: usize = 8;
/// Rank tolerance used inside the flat scan; see the module docs.
pub const DEFAULT_FLAT_RANK_TOL: f64 = 1e-13;
/// Default eigenvalue accuracy contract.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
/// A twin pair counts as an atom candidate only when no other root comes
/// within this multiple of epsilon of either member; anything closer means
/// the pair is just the edge of a cluster.
const PAIR_REMOTENESS_FACTOR: f64 = 2.0;
/// An inter-bulk gap counts as resolved when it contains at most this many
/// non-clustered roots (a separated gap carries isolated pollution or an
/// atom pair, never a crowd).
const RESOLVED_GAP_MAX_STRAYS: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoverError {
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("degree must be at least 1")]
    BadDegree,
    #[error(transparent)]
    Orthopoly(#[from] OrthopolyError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Moments(#[from] MomentIoError),
}

/// The structural regime an estimate was produced under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Purely atomic, certified by moment-matrix rank stagnation.
    #[serde(rename = "flat")]
    Flat,
    /// One continuous interval, atoms possibly outside it.
    #[serde(rename = "single")]
    SingleInterval,
    /// Several intervals; every atom outside their convex hull.
    #[serde(rename = "outside")]
    AtomsOutside,
    /// No structural assumption; gap candidates need cross-degree support.
    #[serde(rename = "general")]
    General,
}

impl Regime {
    pub fn token(self) -> &'static str {
        match self {
            Regime::Flat => "flat",
            Regime::SingleInterval => "single",
            Regime::AtomsOutside => "outside",
            Regime::General => "general",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// What the caller asks for: a fixed regime or automatic selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RegimeRequest {
    #[default]
    #[serde(rename = "auto")]
    Auto,
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "single")]
    SingleInterval,
    #[serde(rename = "outside")]
    AtomsOutside,
    #[serde(rename = "general")]
    General,
}

impl RegimeRequest {
    pub fn token(self) -> &'static str {
        match self {
            RegimeRequest::Auto => "auto",
            RegimeRequest::Flat => "flat",
            RegimeRequest::SingleInterval => "single",
            RegimeRequest::AtomsOutside => "outside",
            RegimeRequest::General => "general",
        }
    }
}

impl fmt::Display for RegimeRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for RegimeRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(RegimeRequest::Auto),
            "flat" => Ok(RegimeRequest::Flat),
            "single" => Ok(RegimeRequest::SingleInterval),
            "outside" => Ok(RegimeRequest::AtomsOutside),
            "general" => Ok(RegimeRequest::General),
            other => Err(format!(
                "unknown regime '{other}' (expected flat|single|outside|general|auto)"
            )),
        }
    }
}

/// Non-fatal findings attached to an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Warning {
    /// The requested regime contradicts the observed root structure; the
    /// estimate was produced under `resolved` instead.
    RegimeMismatch { requested: RegimeRequest, resolved: Regime },
    /// No clustered roots at this degree: too low to resolve any bulk.
    LowDegree,
    /// The moment matrix was slightly indefinite and its negative
    /// eigenvalues were clipped before use.
    ClippedSpectrum,
    /// Estimates at nearby degrees disagree beyond epsilon (emitted by the
    /// CLI's consistency check).
    ConsistencyDivergence { hausdorff: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::RegimeMismatch { requested, resolved } => {
                write!(f, "RegimeMismatch({requested}->{resolved})")
            }
            Warning::LowDegree => f.write_str("LowDegree"),
            Warning::ClippedSpectrum => f.write_str("ClippedSpectrum"),
            Warning::ConsistencyDivergence { hausdorff } => {
                write!(f, "ConsistencyDivergence(dH={hausdorff:.3e})")
            }
        }
    }
}

/// The recovered support: atoms, continuous intervals, and the roots
/// discarded as spectral pollution.
///
/// Invariants maintained by [`suploc`]: `atoms`, `pollution`, `intervals`
/// sorted ascending; intervals disjoint; no atom inside a reported
/// interval; no value in both `atoms` and `pollution`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportEstimate {
    pub epsilon: f64,
    pub regime: Regime,
    #[serde(rename = "degree")]
    pub degree_used: usize,
    pub atoms: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub pollution: Vec<f64>,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

impl SupportEstimate {
    /// Warnings joined with `;` for CSV cells and log lines.
    pub fn warnings_text(&self) -> String {
        self.warnings
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Partition of a root list by ε-neighbourhood structure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassifiedRoots {
    /// No other root within ε.
    pub isolated: Vec<f64>,
    /// At least one root within ε, and not part of a remote twin pair.
    pub clustered: Vec<f64>,
    /// Remote twin pairs: mutually ε-close, everything else at least
    /// `2ε` away from both members.
    pub pairs: Vec<(f64, f64)>,
}

/// Splits roots into isolated points, clustered bulks, and twin pairs.
///
/// Closeness is strict (`< epsilon`). A pair is recognised only when both
/// members have exactly one ε-close neighbour (each other) and every other
/// root stays at least `2ε` away; twin roots straddling a separated atom
/// pass this test, while the frayed edge of a bulk does not.
pub fn classify(roots: &RootList, epsilon: f64) -> ClassifiedRoots {
    let xs = roots.roots();
    let n = xs.len();
    let mut neighbours = vec![0_u8; n];
    for i in 0..n {
        if i > 0 && xs[i] - xs[i - 1] < epsilon {
            neighbours[i] += 1;
        }
        if i + 1 < n && xs[i + 1] - xs[i] < epsilon {
            neighbours[i] += 1;
        }
    }

    let mut paired = vec![false; n];
    let mut pairs = Vec::new();
    for i in 0..n.saturating_sub(1) {
        if neighbours[i] == 1 && neighbours[i + 1] == 1 && xs[i + 1] - xs[i] < epsilon {
            let remote_left =
                i == 0 || xs[i] - xs[i - 1] >= PAIR_REMOTENESS_FACTOR * epsilon;
            let remote_right =
                i + 2 >= n || xs[i + 2] - xs[i + 1] >= PAIR_REMOTENESS_FACTOR * epsilon;
            if remote_left && remote_right {
                pairs.push((xs[i], xs[i + 1]));
                paired[i] = true;
                paired[i + 1] = true;
            }
        }
    }

    let mut isolated = Vec::new();
    let mut clustered = Vec::new();
    for i in 0..n {
        if paired[i] {
            continue;
        }
        if neighbours[i] == 0 {
            isolated.push(xs[i]);
        } else {
            clustered.push(xs[i]);
        }
    }
    ClassifiedRoots { isolated, clustered, pairs }
}

/// Greedy gap split of sorted clustered roots into bulk intervals.
///
/// A new bulk starts whenever consecutive roots are at least ε apart; each
/// bulk is reported as the (min, max) of its members, with no outward
/// padding, keeping the result an inner approximation.
pub fn bulks_to_intervals(clustered: &[f64], epsilon: f64) -> Vec<(f64, f64)> {
    debug_assert!(clustered.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=clustered.len() {
        if i == clustered.len() || clustered[i] - clustered[i - 1] >= epsilon {
            out.push((clustered[start], clustered[i - 1]));
            start = i;
        }
    }
    if clustered.is_empty() {
        out.clear();
    }
    out
}

/// Cross-degree confirmation threshold `ε² / (ε + √2 a_inf)`.
///
/// A root of `P_N` in a support gap moves by at least this much between
/// consecutive degrees, while a root converging to an atom stays put, so
/// an isolated root is kept as an atom only when some root of `P_{N+1}`
/// lies within ρ of it. Strictly less than ε whenever `a_inf > 0`.
pub fn rho_threshold(epsilon: f64, a_inf: f64) -> f64 {
    epsilon * epsilon / (epsilon + std::f64::consts::SQRT_2 * a_inf)
}

/// Tuning for [`suploc`].
#[derive(Debug, Clone)]
pub struct SupLocOptions {
    /// Resolution parameter; should satisfy `2ε < Δ` for the separation
    /// distance Δ of the target measure.
    pub epsilon: f64,
    /// Working degree `N`: roots of `P_N` are classified.
    pub degree: usize,
    pub regime: RegimeRequest,
    /// Relative tolerance for moment-matrix rank and positivity checks
    /// outside the flat scan.
    pub tau: f64,
    /// Cap on the flat-scan degree (default 8; see module docs).
    pub flat_scan_limit: usize,
    /// Rank tolerance inside the flat scan (default 1e-13; see module
    /// docs for why this is much tighter than `tau`).
    pub flat_rank_tol: f64,
    /// Eigenvalue accuracy contract passed to the solver.
    pub rel_tol: f64,
}

impl SupLocOptions {
    pub fn new(epsilon: f64, degree: usize) -> SupLocOptions {
        SupLocOptions {
            epsilon,
            degree,
            regime: RegimeRequest::Auto,
            tau: crate::momentio::DEFAULT_TAU,
            flat_scan_limit: DEFAULT_FLAT_SCAN_LIMIT,
            flat_rank_tol: DEFAULT_FLAT_RANK_TOL,
            rel_tol: DEFAULT_REL_TOL,
        }
    }

    pub fn with_regime(mut self, regime: RegimeRequest) -> SupLocOptions {
        self.regime = regime;
        self
    }
}

// An atom candidate: an isolated root, or the midpoint of a twin pair
// (whose members go to pollution if the candidate is discarded).
#[derive(Clone, Copy)]
struct Candidate {
    position: f64,
    members: Option<(f64, f64)>,
}

impl Candidate {
    fn discard_into(self, pollution: &mut Vec<f64>) {
        match self.members {
            Some((a, b)) => {
                pollution.push(a);
                pollution.push(b);
            }
            None => pollution.push(self.position),
        }
    }
}

fn resolved_gap_signal(bulks: &[(f64, f64)], strays: &[f64]) -> bool {
    if bulks.len() < 2 {
        return false;
    }
    bulks.windows(2).all(|w| {
        let in_gap = strays
            .iter()
            .filter(|&&x| x > w[0].1 && x < w[1].0)
            .count();
        in_gap <= RESOLVED_GAP_MAX_STRAYS
    })
}

/// Runs the SupLoc estimator against any integration oracle.
///
/// See the module docs for the pipeline. Budget requirements: the oracle
/// must support the Stieltjes procedure to order `N` (products of degree
/// `2N - 1`); the explicit general regime needs order `N + 1`. The
/// automatic regime only escalates to the general test when the budget
/// allows it.
pub fn suploc<O: Oracle>(oracle: &O, opts: &SupLocOptions) -> Result<SupportEstimate, RecoverError> {
    if !(opts.epsilon > 0.0) || !opts.epsilon.is_finite() {
        return Err(RecoverError::BadEpsilon(opts.epsilon));
    }
    if opts.degree == 0 {
        return Err(RecoverError::BadDegree);
    }

    let mut warnings: Vec<Warning> = Vec::new();

    // Stage 1: flat scan.
    if let Some(estimate) = flat_scan(oracle, opts, &mut warnings)? {
        return Ok(estimate);
    }

    // Stage 2: one Stieltjes pass, preferring one extra order for P_{N+1}.
    let budget = oracle.budget();
    let need_n = 2 * opts.degree - 1;
    let need_next = 2 * (opts.degree + 1) - 1;
    let (order, have_next) = if need_next <= budget {
        (opts.degree + 1, true)
    } else if need_n <= budget {
        (opts.degree, false)
    } else {
        return Err(OrthopolyError::Budget { needed: need_n, available: budget }.into());
    };
    if opts.regime == RegimeRequest::General && !have_next {
        return Err(OrthopolyError::Budget { needed: need_next, available: budget }.into());
    }
    let rec = stieltjes(oracle, order)?;
    let a_inf = rec.a_inf();

    let j_n = jacobi(&rec, opts.degree)?;
    let mut roots_next: Option<RootList> = None;
    let roots_n = if opts.regime == RegimeRequest::General {
        // Both degrees are certainly needed: solve them together.
        let j_next = jacobi(&rec, opts.degree + 1)?;
        #[cfg(feature = "parallel")]
        let (rn, rnext) = rayon::join(
            || eigenvalues(&j_n, opts.rel_tol),
            || eigenvalues(&j_next, opts.rel_tol),
        );
        #[cfg(not(feature = "parallel"))]
        let (rn, rnext) = (
            eigenvalues(&j_n, opts.rel_tol),
            eigenvalues(&j_next, opts.rel_tol),
        );
        roots_next = Some(rnext?);
        rn?
    } else {
        eigenvalues(&j_n, opts.rel_tol)?
    };

    // Stage 3: classify and filter per regime.
    let classes = classify(&roots_n, opts.epsilon);
    let bulks = bulks_to_intervals(&classes.clustered, opts.epsilon);

    let mut candidates: Vec<Candidate> = classes
        .isolated
        .iter()
        .map(|&x| Candidate { position: x, members: None })
        .collect();
    candidates.extend(classes.pairs.iter().map(|&(a, b)| Candidate {
        position: 0.5 * (a + b),
        members: Some((a, b)),
    }));
    candidates.sort_unstable_by(|l, r| l.position.total_cmp(&r.position));

    let mut strays: Vec<f64> = classes.isolated.clone();
    for &(a, b) in &classes.pairs {
        strays.push(a);
        strays.push(b);
    }

    let auto_resolve = || -> Regime {
        if classes.clustered.is_empty() || !resolved_gap_signal(&bulks, &strays) {
            return Regime::SingleInterval;
        }
        let hull = (bulks[0].0, bulks[bulks.len() - 1].1);
        let inside = candidates
            .iter()
            .any(|c| c.position > hull.0 && c.position < hull.1);
        if inside && have_next {
            Regime::General
        } else {
            Regime::AtomsOutside
        }
    };

    let resolved = match opts.regime {
        RegimeRequest::Auto => auto_resolve(),
        RegimeRequest::Flat => {
            // No rank stagnation was found, so the input is not atomic at
            // this tolerance; report what the roots actually show.
            let fallback = auto_resolve();
            warnings.push(Warning::RegimeMismatch {
                requested: opts.regime,
                resolved: fallback,
            });
            fallback
        }
        RegimeRequest::SingleInterval => {
            if resolved_gap_signal(&bulks, &strays) {
                warnings.push(Warning::RegimeMismatch {
                    requested: opts.regime,
                    resolved: Regime::AtomsOutside,
                });
                Regime::AtomsOutside
            } else {
                Regime::SingleInterval
            }
        }
        RegimeRequest::AtomsOutside => Regime::AtomsOutside,
        RegimeRequest::General => Regime::General,
    };

    let mut atoms: Vec<f64> = Vec::new();
    let mut pollution: Vec<f64> = Vec::new();
    let mut intervals: Vec<(f64, f64)> = Vec::new();

    match resolved {
        Regime::Flat => unreachable!("flat estimates return from the scan"),
        Regime::SingleInterval | Regime::AtomsOutside => {
            if classes.clustered.is_empty() {
                warnings.push(Warning::LowDegree);
                atoms.extend(candidates.iter().map(|c| c.position));
            } else {
                let hull;
                if resolved == Regime::SingleInterval {
                    let span = (classes.clustered[0], classes.clustered[classes.clustered.len() - 1]);
                    intervals.push(span);
                    hull = span;
                } else {
                    hull = (bulks[0].0, bulks[bulks.len() - 1].1);
                    intervals = bulks.clone();
                }
                for c in &candidates {
                    if c.position >= hull.0 && c.position <= hull.1 {
                        c.discard_into(&mut pollution);
                    } else {
                        atoms.push(c.position);
                    }
                }
            }
        }
        Regime::General => {
            let roots_next = match roots_next {
                Some(r) => r,
                None => {
                    // Auto escalation: have_next is guaranteed here.
                    let j_next = jacobi(&rec, opts.degree + 1)?;
                    eigenvalues(&j_next, opts.rel_tol)?
                }
            };
            if classes.clustered.is_empty() {
                warnings.push(Warning::LowDegree);
            }
            intervals = bulks.clone();
            let rho = rho_threshold(opts.epsilon, a_inf);
            let inside_bulk =
                |x: f64| intervals.iter().any(|&(lo, hi)| x >= lo && x <= hi);
            for c in &candidates {
                if inside_bulk(c.position) {
                    c.discard_into(&mut pollution);
                    continue;
                }
                match c.members {
                    // A remote twin pair is already cross-degree evidence:
                    // its midpoint stands as an atom.
                    Some(_) => atoms.push(c.position),
                    None => {
                        let confirmed = roots_next
                            .roots()
                            .iter()
                            .any(|&r| (r - c.position).abs() < rho);
                        if confirmed {
                            atoms.push(c.position);
                        } else {
                            pollution.push(c.position);
                        }
                    }
                }
            }
        }
    }

    atoms.sort_unstable_by(f64::total_cmp);
    pollution.sort_unstable_by(f64::total_cmp);

    Ok(SupportEstimate {
        epsilon: opts.epsilon,
        regime: resolved,
        degree_used: opts.degree,
        atoms,
        intervals,
        pollution,
        warnings,
    })
}

fn flat_scan<O: Oracle>(
    oracle: &O,
    opts: &SupLocOptions,
    warnings: &mut Vec<Warning>,
) -> Result<Option<SupportEstimate>, RecoverError> {
    let limit = opts
        .flat_scan_limit
        .min(opts.degree)
        .min(oracle.moment_budget() / 2);
    if limit == 0 {
        return Ok(None);
    }
    let y: Vec<f64> = (0..=2 * limit).map(|k| oracle.moment(k)).collect();
    let data = MomentData::from_moments(y)?;
    for n in 1..=limit {
        let report =
            flatness(&data.truncated(n - 1)?, &data.truncated(n)?, opts.flat_rank_tol)?;
        if !report.flat {
            continue;
        }
        let r = report.rank_n;
        let rec = stieltjes(oracle, r)?;
        let roots = eigenvalues(&jacobi(&rec, r)?, opts.rel_tol)?;
        if !matches!(opts.regime, RegimeRequest::Auto | RegimeRequest::Flat) {
            warnings.push(Warning::RegimeMismatch {
                requested: opts.regime,
                resolved: Regime::Flat,
            });
        }
        return Ok(Some(SupportEstimate {
            epsilon: opts.epsilon,
            regime: Regime::Flat,
            degree_used: n,
            atoms: roots.roots().to_vec(),
            intervals: Vec::new(),
            pollution: Vec::new(),
            warnings: std::mem::take(warnings),
        }));
    }
    Ok(None)
}

/// Runs SupLoc on a measure spec through the quadrature oracle.
///
/// The oracle is built one order past `N` so the general regime always has
/// `P_{N+1}` available.
pub fn suploc_spec(spec: &MeasureSpec, opts: &SupLocOptions) -> Result<SupportEstimate, RecoverError> {
    let oracle = QuadratureOracle::for_order(spec, opts.degree + 1);
    suploc(&oracle, opts)
}

/// Runs SupLoc on raw moment data through the Gram-matrix oracle.
///
/// The working degree is capped by the file: at the file degree `n` in
/// general, and at `n - 1` when the general regime is explicitly requested
/// (it needs one extra order). A clipped-spectrum warning is attached when
/// the moment matrix needed its positive-semidefinite projection.
pub fn suploc_moments(
    data: &MomentData,
    opts: &SupLocOptions,
) -> Result<SupportEstimate, RecoverError> {
    let (oracle, clipped) = MomentOracle::new(data, opts.tau)?;
    let cap = if opts.regime == RegimeRequest::General {
        data.degree().saturating_sub(1)
    } else {
        data.degree()
    };
    if cap == 0 {
        return Err(RecoverError::BadDegree);
    }
    let effective = SupLocOptions { degree: opts.degree.min(cap), ..opts.clone() };
    let mut estimate = suploc(&oracle, &effective)?;
    if clipped {
        estimate.warnings.push(Warning::ClippedSpectrum);
    }
    Ok(estimate)
}

/// The regime a known spec structurally belongs to.
pub fn natural_regime(spec: &MeasureSpec) -> Regime {
    let intervals = spec.intervals();
    if intervals.is_empty() {
        return Regime::Flat;
    }
    if intervals.len() == 1 {
        return Regime::SingleInterval;
    }
    let lo = intervals[0].lower;
    let hi = intervals[intervals.len() - 1].upper;
    let atom_inside = spec
        .atoms()
        .iter()
        .any(|a| a.position > lo && a.position < hi);
    if atom_inside {
        Regime::General
    } else {
        Regime::AtomsOutside
    }
}

//! Moment data: files, Hankel matrices, positivity and flatness checks.
//!
//! A degree-`n` [`MomentData`] holds the raw power moments
//! `y_0 .. y_{2n}`, equivalently the `(n+1) x (n+1)` Hankel matrix
//! `M_n[i][j] = y_{i+j}`. Files carry either form:
//!
//! ```json
//! {"moments": [1.0, 0.5, 0.25]}
//! {"matrix": [[1.0, 0.5], [0.5, 0.25]]}
//! ```
//!
//! A matrix input is verified to be Hankel to `1e-9` relative accuracy.
//! Saving uses shortest-round-trip float formatting, so a save/load cycle
//! reproduces every moment bit for bit.
//!
//! [`flatness`] compares numerical ranks of consecutive Hankel matrices —
//! the rank stagnating at `r` is the signature of a purely `r`-atomic
//! measure. [`MomentOracle`] exposes the moments as an integration oracle
//! over coefficient vectors: inner products are Gram products against the
//! Hankel matrix, with a one-shot eigenvalue clipping when rounding has
//! made the matrix indefinite by less than the tolerance.

use crate::orthopoly::Oracle;
use crate::spectra::{sym_eigen_dense, sym_eigenvalues, SpectraError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative tolerance for rank and positivity decisions.
pub const DEFAULT_TAU: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentIoError {
    #[error("moment file parse error: {0}")]
    Parse(String),
    #[error("moment list must have odd length 2n+1 with n >= 0, got {len}")]
    BadLength { len: usize },
    #[error("non-finite moment at index {index}")]
    NonFinite { index: usize },
    #[error("total mass y_0 must be positive, got {y0}")]
    NonPositiveMass { y0: f64 },
    #[error("matrix entry ({row}, {col}) breaks the Hankel structure: {got} vs {expected}")]
    NotHankel { row: usize, col: usize, got: f64, expected: f64 },
    #[error("moment sequences disagree at index {index}: {a} vs {b}")]
    InconsistentPrefix { index: usize, a: f64, b: f64 },
    #[error("flatness needs consecutive degrees, got {n} and {m}")]
    NotConsecutive { n: usize, m: usize },
    #[error("moment matrix is not positive semidefinite: min eigenvalue {min_eig:.6e} is below -{tol:.6e}")]
    NonPsd { min_eig: f64, tol: f64 },
    #[error("degree {requested} exceeds the data degree {max}")]
    DegreeTooHigh { requested: usize, max: usize },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Raw moments `y_0 .. y_{2n}` of a (not necessarily normalized) positive
/// measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentData {
    moments: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    moments: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
}

impl MomentData {
    /// Wraps a moment list `y_0 .. y_{2n}`; the length must be odd, all
    /// entries finite, and `y_0 > 0`.
    pub fn from_moments(moments: Vec<f64>) -> Result<MomentData, MomentIoError> {
        if moments.is_empty() || moments.len() % 2 == 0 {
            return Err(MomentIoError::BadLength { len: moments.len() });
        }
        for (index, y) in moments.iter().enumerate() {
            if !y.is_finite() {
                return Err(MomentIoError::NonFinite { index });
            }
        }
        if moments[0] <= 0.0 {
            return Err(MomentIoError::NonPositiveMass { y0: moments[0] });
        }
        Ok(MomentData { moments })
    }

    /// Reads moments off a Hankel matrix, verifying every entry against
    /// the canonical antidiagonal value to `1e-9` relative accuracy.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<MomentData, MomentIoError> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(MomentIoError::Parse(
                "matrix must be square and nonempty".to_string(),
            ));
        }
        let n = size - 1;
        let mut y = vec![0.0_f64; 2 * n + 1];
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = if k <= n { rows[0][k] } else { rows[k - n][n] };
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &got) in row.iter().enumerate() {
                let expected = y[i + j];
                if (got - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                    return Err(MomentIoError::NotHankel { row: i, col: j, got, expected });
                }
            }
        }
        MomentData::from_moments(y)
    }

    /// Hankel degree `n` (the data holds `2n + 1` moments).
    pub fn degree(&self) -> usize {
        (self.moments.len() - 1) / 2
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// The `(m+1) x (m+1)` Hankel matrix `M_m` for any `m <= degree`.
    pub fn hankel(&self, m: usize) -> Result<Vec<Vec<f64>>, MomentIoError> {
        if m > self.degree() {
            return Err(MomentIoError::DegreeTooHigh { requested: m, max: self.degree() });
        }
        Ok((0..=m)
            .map(|i| (0..=m).map(|j| self.moments[i + j]).collect())
            .collect())
    }

    /// The leading `2m + 1` moments as their own dataset.
    pub fn truncated(&self, m: usize) -> Result<MomentData, MomentIoError> {
        if m > self.degree() {
            return Err(MomentIoError::DegreeTooHigh { requested: m, max: self.degree() });
        }
        Ok(MomentData { moments: self.moments[..2 * m + 1].to_vec() })
    }
}

/// Parses a moment file (either `{"moments": ...}` or `{"matrix": ...}`,
/// exactly one of the two).
pub fn load_moments(text: &str) -> Result<MomentData, MomentIoError> {
    let file: MomentFile =
        serde_json::from_str(text).map_err(|e| MomentIoError::Parse(e.to_string()))?;
    match (file.moments, file.matrix) {
        (Some(y), None) => MomentData::from_moments(y),
        (None, Some(rows)) => MomentData::from_matrix(&rows),
        _ => Err(MomentIoError::Parse(
            "expected exactly one of \"moments\" or \"matrix\"".to_string(),
        )),
    }
}

/// Serializes to the `{"moments": [...]}` form. Floats use shortest
/// round-trip formatting, so reloading reproduces them bit for bit.
pub fn save_moments(data: &MomentData) -> String {
    let file = MomentFile { moments: Some(data.moments.clone()), matrix: None };
    serde_json::to_string(&file).expect("moment serialization cannot fail")
}

/// Outcome of the positivity gate on a Hankel matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    /// Smallest eigenvalue of `M_n`.
    pub min_eig: f64,
    /// Absolute slack granted: `tol * max(1, ||M||_inf)`.
    pub threshold: f64,
    /// `min_eig >= -threshold`.
    pub ok: bool,
}

fn inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Checks positive semidefiniteness of the full Hankel matrix up to a
/// relative slack.
pub fn psd_check(data: &MomentData, tol: f64) -> Result<PsdReport, MomentIoError> {
    let m = data.hankel(data.degree())?;
    let eigs = sym_eigenvalues(&m)?;
    let min_eig = eigs[0];
    let threshold = tol * inf_norm(&m).max(1.0);
    Ok(PsdReport { min_eig, threshold, ok: min_eig >= -threshold })
}

/// Numerical ranks of two consecutive Hankel matrices.
///
/// Hankel matrices are symmetric, so singular values are eigenvalue
/// magnitudes; the rank counts those above `tau` times the largest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankReport {
    pub rank_n: usize,
    pub rank_n_plus_1: usize,
    pub tolerance: f64,
    /// Ranks agree: the moment sequence looks purely atomic at this degree.
    pub flat: bool,
    /// Smallest eigenvalue of the larger matrix.
    pub min_eig: f64,
}

fn hankel_rank(m: &[Vec<f64>], tau: f64) -> Result<(usize, f64), MomentIoError> {
    let eigs = sym_eigenvalues(m)?;
    let sigma_max = eigs.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()));
    let rank = eigs.iter().filter(|e| e.abs() > tau * sigma_max).count();
    Ok((rank, eigs[0]))
}

/// Compares the ranks of `M_n` (from `prev`) and `M_{n+1}` (from `next`).
///
/// `next` must extend `prev` by exactly one degree and agree with it on
/// every shared moment (exact equality, signed zeros aside).
pub fn flatness(
    prev: &MomentData,
    next: &MomentData,
    tau: f64,
) -> Result<RankReport, MomentIoError> {
    if next.degree() != prev.degree() + 1 {
        return Err(MomentIoError::NotConsecutive { n: prev.degree(), m: next.degree() });
    }
    for (index, (&a, &b)) in prev.moments.iter().zip(next.moments.iter()).enumerate() {
        if a != b {
            return Err(MomentIoError::InconsistentPrefix { index, a, b });
        }
    }
    let (rank_n, _) = hankel_rank(&prev.hankel(prev.degree())?, tau)?;
    let (rank_n_plus_1, min_eig) = hankel_rank(&next.hankel(next.degree())?, tau)?;
    Ok(RankReport {
        rank_n,
        rank_n_plus_1,
        tolerance: tau,
        flat: rank_n == rank_n_plus_1,
        min_eig,
    })
}

/// Coefficient-space integration oracle over a moment dataset.
///
/// Polynomials are monomial coefficient vectors (constant term first);
/// inner products are Gram products against the normalized Hankel matrix.
/// Construction normalizes the mass to one, gates on positive
/// semidefiniteness with relative slack `tau`, and — when the matrix is
/// indefinite by less than the slack — projects it to the nearest
/// positive-semidefinite matrix by clipping negative eigenvalues
/// (reported through the `clipped` flag so callers can surface a warning).
#[derive(Debug, Clone)]
pub struct MomentOracle {
    gram: Vec<Vec<f64>>,
    y: Vec<f64>,
    degree: usize,
    mass: f64,
}

impl MomentOracle {
    /// Builds the oracle; the boolean reports whether clipping was needed.
    pub fn new(data: &MomentData, tau: f64) -> Result<(MomentOracle, bool), MomentIoError> {
        let mass = data.moments[0];
        let y: Vec<f64> = data.moments.iter().map(|v| v / mass).collect();
        let degree = data.degree();
        let normalized = MomentData { moments: y.clone() };
        let gram = normalized.hankel(degree)?;

        let eigs = sym_eigenvalues(&gram)?;
        let min_eig = eigs[0];
        let threshold = tau * inf_norm(&gram).max(1.0);
        if min_eig < -threshold {
            return Err(MomentIoError::NonPsd { min_eig, tol: threshold });
        }

        // A computed eigenvalue within the eigensolver's own rounding noise
        // of zero does not witness indefiniteness; rebuilding the matrix in
        // that case would perturb every entry by ~eps * ||M|| and destroy
        // the (much smaller) tail information that high-order products need.
        let noise_floor = 8.0 * (eigs.len() as f64) * f64::EPSILON * inf_norm(&gram).max(1.0);
        let (gram, clipped) = if min_eig < -noise_floor {
            let (vals, z) = sym_eigen_dense(&gram)?;
            let size = vals.len();
            let mut projected = vec![vec![0.0_f64; size]; size];
            for (i, pi) in projected.iter_mut().enumerate() {
                for (j, pij) in pi.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for k in 0..size {
                        let lambda = vals[k].max(0.0);
                        acc += lambda * z[i][k] * z[j][k];
                    }
                    *pij = acc;
                }
            }
            // Restore exact symmetry lost to rounding in the rebuild.
            for i in 0..size {
                for j in 0..i {
                    let avg = 0.5 * (projected[i][j] + projected[j][i]);
                    projected[i][j] = avg;
                    projected[j][i] = avg;
                }
            }
            (projected, true)
        } else {
            (gram, false)
        };

        Ok((MomentOracle { gram, y, degree, mass }, clipped))
    }

    /// Original total mass `y_0` before normalization.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    fn gram_product(&self, p: &[f64], q: &[f64], shift: usize) -> f64 {
        // Compensated bilinear form: monomial coefficient vectors produce
        // terms that cancel heavily, so every product and partial sum keeps
        // its rounding error in a side accumulator. The result is accurate
        // to O(eps) of the true value even at term-cancellation conditions
        // around 1e8, where a plain nested loop loses half the digits.
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (i, &pi) in p.iter().enumerate() {
            let row = &self.gram[i + shift];
            for (j, &qj) in q.iter().enumerate() {
                let (pq, e1) = two_prod(pi, qj);
                let (term, e2) = two_prod(pq, row[j]);
                let (s, e3) = two_sum(sum, term);
                sum = s;
                comp += e1.mul_add(row[j], e2 + e3);
            }
        }
        sum + comp
    }
}

/// Error-free sum: returns `(fl(a + b), err)` with `a + b = fl(a + b) + err`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free product via FMA: `(fl(a * b), err)` with `a * b = fl(a * b) + err`.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Oracle for MomentOracle {
    type Poly = Vec<f64>;

    fn one(&self) -> Vec<f64> {
        vec![1.0]
    }

    fn step(&self, p: &Vec<f64>, alpha: f64, beta: f64, q: &Vec<f64>) -> Vec<f64> {
        let mut out = vec![0.0_f64; p.len() + 1];
        for (i, &pi) in p.iter().enumerate() {
            out[i + 1] += pi;
            out[i] -= alpha * pi;
        }
        for (i, &qi) in q.iter().enumerate() {
            out[i] -= beta * qi;
        }
        out
    }

    fn inner(&self, p: &Vec<f64>, q: &Vec<f64>) -> f64 {
        self.gram_product(p, q, 0)
    }

    fn inner_x(&self, p: &Vec<f64>, q: &Vec<f64>) -> f64 {
        self.gram_product(p, q, 1)
    }

    /// `2n - 1`: the Stieltjes procedure may run to order `n`, the largest
    /// polynomial degree the Gram matrix represents.
    fn budget(&self) -> usize {
        2 * self.degree - 1
    }

    fn moment(&self, k: usize) -> f64 {
        self.y[k]
    }

    fn moment_budget(&self) -> usize {
        2 * self.degree
    }
}

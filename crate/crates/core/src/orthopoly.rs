//! Orthogonal-polynomial recurrences via the Stieltjes procedure.
//!
//! For a positive measure with finite moments, the monic orthogonal
//! polynomials satisfy
//!
//! ```text
//! P_{k+1}(x) = (x - alpha_k) P_k(x) - beta_k P_{k-1}(x),
//! P_0 = 1,  P_{-1} = 0,
//! ```
//!
//! where `alpha_k = <x P_k, P_k> / <P_k, P_k>` and
//! `beta_k = <P_k, P_k> / <P_{k-1}, P_{k-1}>`. The Stieltjes procedure
//! computes these coefficients one degree at a time, asking an [`Oracle`]
//! for the inner products. Two oracle backends exist: quadrature values at
//! nodes ([`crate::measure::QuadratureOracle`]) and monomial coefficients
//! against a Hankel Gram matrix ([`crate::momentio::MomentOracle`]).
//!
//! No re-orthogonalization is performed; the procedure stops with
//! [`OrthopolyError::LostPositivity`] as soon as a squared norm becomes
//! non-positive, which is the numerical signal that the measure cannot
//! support polynomials of that degree (or that rounding has destroyed
//! positivity).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from recurrence construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthopolyError {
    /// A squared norm `<P_j, P_j>` came out non-positive at step `index`.
    #[error("lost positivity at step {index}: <P,P> = {zeta:.6e}")]
    LostPositivity { index: usize, zeta: f64 },
    /// The oracle cannot integrate products of the degree the caller needs.
    #[error("oracle budget exceeded: need exact products of degree {needed}, oracle supports {available}")]
    Budget { needed: usize, available: usize },
    /// A polynomial degree outside what the recurrence holds was requested.
    #[error("degree {requested} out of range: recurrence has order {max}")]
    DegreeOutOfRange { requested: usize, max: usize },
}

/// Integration oracle driving the Stieltjes procedure.
///
/// An oracle fixes a polynomial representation (`Poly`) and evaluates the
/// measure's inner products on it. `budget()` reports the largest product
/// degree the oracle integrates exactly; [`stieltjes`] refuses to run past
/// it rather than silently return garbage.
pub trait Oracle {
    /// Polynomial representation (values at nodes, or coefficient vector).
    type Poly: Clone;

    /// The constant polynomial `1`.
    fn one(&self) -> Self::Poly;

    /// The recurrence update `(x - alpha) * p - beta * q`.
    ///
    /// Callers pass `beta = 0` together with `q = p` on the first step,
    /// standing in for the zero polynomial `P_{-1}`.
    fn step(&self, p: &Self::Poly, alpha: f64, beta: f64, q: &Self::Poly) -> Self::Poly;

    /// Inner product `<p, q>` against the measure.
    fn inner(&self, p: &Self::Poly, q: &Self::Poly) -> f64;

    /// Inner product `<x p, q>` against the measure.
    fn inner_x(&self, p: &Self::Poly, q: &Self::Poly) -> f64;

    /// Largest polynomial-product degree integrated exactly.
    fn budget(&self) -> usize;

    /// Raw power moment `y_k`. Callers must keep `k <= moment_budget()`.
    fn moment(&self, k: usize) -> f64;

    /// Largest `k` for which [`Oracle::moment`] is exact. Defaults to the
    /// product budget; moment-backed oracles hold one degree more than
    /// their Gram products can use and override this.
    fn moment_budget(&self) -> usize {
        self.budget()
    }
}

/// Recurrence coefficients of the monic orthogonal polynomials.
///
/// An order-`n` recurrence holds `alpha_0 .. alpha_{n-1}`,
/// `beta_1 .. beta_{n-1}` and the squared norms `zeta_0 .. zeta_{n-1}`,
/// enough to build the `n x n` Jacobi matrix and to evaluate `P_0 .. P_n`.
///
/// Serialized as `{"alpha": [...], "beta": [...], "zeta": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recurrence {
    #[serde(rename = "alpha")]
    alphas: Vec<f64>,
    #[serde(rename = "beta")]
    betas: Vec<f64>,
    #[serde(rename = "zeta")]
    zetas: Vec<f64>,
}

impl Recurrence {
    /// Assembles a recurrence from raw coefficient vectors.
    ///
    /// Lengths must satisfy `alphas.len() == zetas.len() == betas.len() + 1`
    /// with at least one entry, all `zetas` and `betas` positive.
    pub fn from_parts(
        alphas: Vec<f64>,
        betas: Vec<f64>,
        zetas: Vec<f64>,
    ) -> Result<Self, OrthopolyError> {
        if alphas.is_empty() || zetas.len() != alphas.len() || betas.len() + 1 != alphas.len() {
            return Err(OrthopolyError::DegreeOutOfRange {
                requested: alphas.len(),
                max: betas.len() + 1,
            });
        }
        for (j, &z) in zetas.iter().enumerate() {
            if !(z > 0.0) || !z.is_finite() {
                return Err(OrthopolyError::LostPositivity { index: j, zeta: z });
            }
        }
        for (j, &b) in betas.iter().enumerate() {
            if !(b > 0.0) || !b.is_finite() {
                return Err(OrthopolyError::LostPositivity { index: j + 1, zeta: b });
            }
        }
        Ok(Recurrence { alphas, betas, zetas })
    }

    /// Number of recurrence steps held (the largest Jacobi order available).
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// `beta_1 .. beta_{order-1}` (the monic recurrence has no `beta_0`).
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Squared norms `zeta_j = <P_j, P_j>` of the monic polynomials.
    pub fn zetas(&self) -> &[f64] {
        &self.zetas
    }

    /// Largest off-diagonal scale seen so far: `max_j sqrt(beta_j)`.
    ///
    /// This bounds how far an eigenvalue of the Jacobi matrix can sit from
    /// the diagonal entries and feeds the pollution threshold in the
    /// recovery stage.
    pub fn a_inf(&self) -> f64 {
        self.betas
            .iter()
            .fold(0.0_f64, |acc, &b| acc.max(b.sqrt()))
    }

    /// Ratio `zeta_{order-1} / zeta_0`, a cheap conditioning indicator:
    /// when it underflows toward zero the Gram matrix of the monomial
    /// basis is nearly singular at this degree.
    pub fn conditioning(&self) -> f64 {
        self.zetas[self.zetas.len() - 1] / self.zetas[0]
    }

    /// The leading `order` steps of this recurrence.
    ///
    /// The Stieltjes procedure is prefix-stable: running it to a higher
    /// order and truncating gives bitwise the same coefficients as running
    /// it to the lower order directly, so one pass at the maximum degree
    /// serves every smaller Jacobi matrix.
    pub fn truncated(&self, order: usize) -> Result<Recurrence, OrthopolyError> {
        if order == 0 || order > self.order() {
            return Err(OrthopolyError::DegreeOutOfRange {
                requested: order,
                max: self.order(),
            });
        }
        Ok(Recurrence {
            alphas: self.alphas[..order].to_vec(),
            betas: self.betas[..order - 1].to_vec(),
            zetas: self.zetas[..order].to_vec(),
        })
    }
}

/// Symmetric tridiagonal Jacobi matrix of a recurrence.
///
/// `diagonal[k] = alpha_k`, `offdiagonal[k] = sqrt(beta_{k+1})`. Its
/// eigenvalues are exactly the roots of the monic orthogonal polynomial
/// whose degree equals the matrix order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiMatrix {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
}

impl JacobiMatrix {
    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    /// Row-sum (infinity) norm of the tridiagonal matrix.
    pub fn inf_norm(&self) -> f64 {
        let n = self.order();
        let mut best = 0.0_f64;
        for i in 0..n {
            let mut row = self.diagonal[i].abs();
            if i > 0 {
                row += self.offdiagonal[i - 1].abs();
            }
            if i + 1 < n {
                row += self.offdiagonal[i].abs();
            }
            best = best.max(row);
        }
        best
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.offdiagonal[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.offdiagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - radius);
            hi = hi.max(self.diagonal[i] + radius);
        }
        (lo, hi)
    }
}

/// Builds the `order x order` Jacobi matrix from a recurrence prefix.
pub fn jacobi(rec: &Recurrence, order: usize) -> Result<JacobiMatrix, OrthopolyError> {
    if order == 0 || order > rec.order() {
        return Err(OrthopolyError::DegreeOutOfRange {
            requested: order,
            max: rec.order(),
        });
    }
    Ok(JacobiMatrix {
        diagonal: rec.alphas[..order].to_vec(),
        offdiagonal: rec.betas[..order - 1].iter().map(|b| b.sqrt()).collect(),
    })
}

/// Runs the Stieltjes procedure to the requested order.
///
/// Computing `alpha_{n-1}` needs `<x P_{n-1}, P_{n-1}>`, a product of
/// degree `2n - 1`, so the oracle budget must be at least `2 * order - 1`.
/// Fails with [`OrthopolyError::LostPositivity`] if any squared norm drops
/// to zero or below; the error reports the failing step index and the
/// offending value.
pub fn stieltjes<O: Oracle>(oracle: &O, order: usize) -> Result<Recurrence, OrthopolyError> {
    if order == 0 {
        return Err(OrthopolyError::DegreeOutOfRange { requested: 0, max: 0 });
    }
    let needed = 2 * order - 1;
    if needed > oracle.budget() {
        return Err(OrthopolyError::Budget {
            needed,
            available: oracle.budget(),
        });
    }

    let mut alphas = Vec::with_capacity(order);
    let mut betas = Vec::with_capacity(order.saturating_sub(1));
    let mut zetas = Vec::with_capacity(order);

    let mut p = oracle.one();
    // Stand-in for P_{-1}; never contributes because beta_0 = 0.
    let mut q = p.clone();

    let mut zeta_prev = 0.0;
    for j in 0..order {
        let zeta = oracle.inner(&p, &p);
        if !(zeta > 0.0) || !zeta.is_finite() {
            return Err(OrthopolyError::LostPositivity { index: j, zeta });
        }
        let alpha = oracle.inner_x(&p, &p) / zeta;
        let beta = if j == 0 { 0.0 } else { zeta / zeta_prev };

        alphas.push(alpha);
        if j > 0 {
            betas.push(beta);
        }
        zetas.push(zeta);

        let next = oracle.step(&p, alpha, beta, &q);
        q = std::mem::replace(&mut p, next);
        zeta_prev = zeta;
    }

    Ok(Recurrence { alphas, betas, zetas })
}

/// Evaluates the monic polynomial `P_degree` at each point.
///
/// Runs the three-term recurrence forward at every point; `degree` may be
/// anything up to the recurrence order (so an order-`n` recurrence
/// evaluates `P_0 .. P_n`).
pub fn eval_monic(
    rec: &Recurrence,
    degree: usize,
    points: &[f64],
) -> Result<Vec<f64>, OrthopolyError> {
    if degree > rec.order() {
        return Err(OrthopolyError::DegreeOutOfRange {
            requested: degree,
            max: rec.order(),
        });
    }
    Ok(points
        .iter()
        .map(|&x| {
            let mut prev = 0.0; // P_{-1}
            let mut cur = 1.0; // P_0
            for k in 0..degree {
                let beta = if k == 0 { 0.0 } else { rec.betas[k - 1] };
                let next = (x - rec.alphas[k]) * cur - beta * prev;
                prev = cur;
                cur = next;
            }
            cur
        })
        .collect())
}

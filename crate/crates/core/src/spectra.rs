//! Symmetric eigenvalue solvers and root diagnostics.
//!
//! The workhorse is an implicit QL iteration with Wilkinson shifts for
//! symmetric tridiagonal matrices, an f64 port of the classic EISPACK
//! lineage (`tql1`/`tql2`-style, following the familiar C restatement).
//! Deflation happens when an off-diagonal entry is negligible relative to
//! its diagonal neighbours *at machine precision*; the `rel_tol` argument
//! of [`eigenvalues`] is the accuracy the caller relies on, not the
//! deflation threshold, and the kernel always delivers machine-precision
//! eigenvalues for well-scaled input.
//!
//! A Householder reduction of dense symmetric matrices to tridiagonal form
//! is included so the moment-matrix code can take eigenvalues (and, crate
//! internally, eigenvectors for its positive-semidefinite projection).
//! Everything here is sequential and allocation-light; results are
//! bitwise deterministic for identical input.

use crate::orthopoly::{eval_monic, JacobiMatrix, OrthopolyError, Recurrence};
use thiserror::Error;

/// Iteration cap per eigenvalue in the QL sweep. Well-conditioned input
/// converges in a handful of sweeps; 50 leaves a wide margin.
const MAX_QL_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    /// The QL iteration exhausted its budget for one eigenvalue. In this
    /// code path that indicates non-finite input or severe scaling
    /// pathology, not a tolerance problem.
    #[error("QL iteration failed to converge for eigenvalue {index} after {max_iter} sweeps")]
    NoConvergence { index: usize, max_iter: usize },
    /// Input dimensions are inconsistent (empty, non-square, or an
    /// off-diagonal that is not one shorter than the diagonal).
    #[error("bad matrix shape: {what}")]
    BadShape { what: &'static str },
}

/// Sorted eigenvalues of a Jacobi matrix, i.e. roots of the monic
/// orthogonal polynomial of matching degree.
///
/// Roots are sorted ascending. Distinct roots of an irreducible Jacobi
/// matrix are mathematically strict, but a twin pair closer than machine
/// resolution can round to equal values, so the constructor does not
/// reject ties; [`RootList::is_strictly_increasing`] and
/// [`RootList::min_gap`] let callers assert strictness where they need it.
#[derive(Debug, Clone, PartialEq)]
pub struct RootList {
    roots: Vec<f64>,
}

impl RootList {
    /// Sorts the roots ascending. All entries must be finite.
    pub fn new(mut roots: Vec<f64>) -> RootList {
        assert!(
            roots.iter().all(|r| r.is_finite()),
            "roots must be finite"
        );
        roots.sort_unstable_by(f64::total_cmp);
        RootList { roots }
    }

    /// Polynomial degree, i.e. the number of roots.
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.roots.windows(2).all(|w| w[0] < w[1])
    }

    /// Smallest gap between consecutive roots; infinite when fewer than two.
    pub fn min_gap(&self) -> f64 {
        self.roots
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest root magnitude (zero for an empty list).
    pub fn scale(&self) -> f64 {
        self.roots.iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }
}

/// Implicit QL with Wilkinson shifts on a tridiagonal matrix.
///
/// `d` holds the diagonal, `e` the subdiagonal with `e[n-1]` as workspace;
/// both are overwritten. When `z` is given it must be an `n x n` matrix
/// whose columns accumulate the similarity transform (pass the identity
/// for eigenvectors of the tridiagonal itself, or the Householder output
/// for a dense origin).
fn ql_kernel(
    d: &mut [f64],
    e: &mut [f64],
    mut z: Option<&mut Vec<Vec<f64>>>,
) -> Result<(), SpectraError> {
    let n = d.len();
    if n == 0 {
        return Err(SpectraError::BadShape { what: "empty matrix" });
    }
    if n == 1 {
        return Ok(());
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible off-diagonal entry to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break; // d[l] has converged
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(SpectraError::NoConvergence {
                    index: l,
                    max_iter: MAX_QL_ITER,
                });
            }

            // Wilkinson shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);

            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflow in the rotation chain: split here and
                    // restart the sweep for this block.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for row in zm.iter_mut() {
                        f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric tridiagonal matrix, sorted ascending.
///
/// `offdiagonal` must be one entry shorter than `diagonal`. Zero
/// off-diagonal entries are fine; the matrix just splits into blocks.
pub fn tridiag_eigenvalues(
    diagonal: &[f64],
    offdiagonal: &[f64],
) -> Result<Vec<f64>, SpectraError> {
    if diagonal.is_empty() {
        return Err(SpectraError::BadShape { what: "empty matrix" });
    }
    if offdiagonal.len() + 1 != diagonal.len() {
        return Err(SpectraError::BadShape {
            what: "off-diagonal must be one shorter than diagonal",
        });
    }
    let mut d = diagonal.to_vec();
    let mut e = Vec::with_capacity(d.len());
    e.extend_from_slice(offdiagonal);
    e.push(0.0);
    ql_kernel(&mut d, &mut e, None)?;
    d.sort_unstable_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of a Jacobi matrix as a [`RootList`].
///
/// `rel_tol` is the relative accuracy the caller is entitled to rely on;
/// it must be at least machine epsilon. The QL kernel always deflates at
/// machine precision, so the returned roots meet any such contract for
/// well-scaled input — the parameter is a guarantee bound, not a knob that
/// loosens convergence.
pub fn eigenvalues(j: &JacobiMatrix, rel_tol: f64) -> Result<RootList, SpectraError> {
    assert!(
        rel_tol >= f64::EPSILON,
        "rel_tol below machine epsilon is not achievable"
    );
    let vals = tridiag_eigenvalues(&j.diagonal, &j.offdiagonal)?;
    Ok(RootList::new(vals))
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
///
/// Returns `(diagonal, offdiagonal)` with the off-diagonal one entry
/// shorter; the reduction is orthogonal, so eigenvalues are preserved.
/// Only the lower triangle of `a` is read.
pub fn sym_tridiagonalize(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>), SpectraError> {
    let (d, e, _) = householder(a, false)?;
    Ok((d, e[1..].to_vec()))
}

/// Internal Householder reduction. With `want_vectors` the returned matrix
/// accumulates the orthogonal transform (identity-seeded) for use by the
/// QL kernel; without it the matrix is empty.
///
/// Returned `e` is full length with `e[0] = 0`, matching the QL kernel's
/// expectation after a one-slot rotation (`e[i]` couples `d[i-1]`/`d[i]`
/// here, so the caller shifts by one, exactly as the classic routine does).
fn householder(
    a: &[Vec<f64>],
    want_vectors: bool,
) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>), SpectraError> {
    let n = a.len();
    if n == 0 {
        return Err(SpectraError::BadShape { what: "empty matrix" });
    }
    if a.iter().any(|row| row.len() != n) {
        return Err(SpectraError::BadShape { what: "matrix must be square" });
    }

    let mut z: Vec<Vec<f64>> = a.to_vec();
    let mut d = vec![0.0_f64; n];
    let mut e = vec![0.0_f64; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0_f64;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..=l {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                let mut f_acc = 0.0_f64;
                for j in 0..=l {
                    if want_vectors {
                        z[j][i] = z[i][j] / h;
                    }
                    let mut g_acc = 0.0_f64;
                    for k in 0..=j {
                        g_acc += z[j][k] * z[i][k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[k][j] * z[i][k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[i][j];
                    e[j] -= hh * f;
                    let g = e[j];
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }

    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if want_vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0_f64;
                    for k in 0..i {
                        g += z[i][k] * z[k][j];
                    }
                    for k in 0..i {
                        z[k][j] -= g * z[k][i];
                    }
                }
            }
            d[i] = z[i][i];
            z[i][i] = 1.0;
            for j in 0..i {
                z[j][i] = 0.0;
                z[i][j] = 0.0;
            }
        } else {
            d[i] = z[i][i];
        }
    }

    if !want_vectors {
        z.clear();
    }
    Ok((d, e, z))
}

/// Eigenvalues of a dense symmetric matrix, sorted ascending.
pub fn sym_eigenvalues(a: &[Vec<f64>]) -> Result<Vec<f64>, SpectraError> {
    let (mut d, mut e, _) = householder(a, false)?;
    // Shift e so e[i] couples d[i] and d[i+1], as the kernel expects.
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    ql_kernel(&mut d, &mut e, None)?;
    d.sort_unstable_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues and eigenvectors of a dense symmetric matrix.
///
/// Returns `(values, z)` with values ascending and `z[row][col]` holding
/// the eigenvector for `values[col]` down column `col`. Used internally
/// for the positive-semidefinite projection of slightly indefinite moment
/// matrices.
pub(crate) fn sym_eigen_dense(
    a: &[Vec<f64>],
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectraError> {
    let (mut d, mut e, mut z) = householder(a, true)?;
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    ql_kernel(&mut d, &mut e, Some(&mut z))?;

    // Sort values ascending and permute the vector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|row| order.iter().map(|&col| z[row][col]).collect())
        .collect();
    Ok((values, vectors))
}

/// Relative root residual: how sharply the monic polynomial vanishes at
/// the computed roots.
///
/// For each root `x_i`, compares `|P_n(x_i)|` to the magnitude of `P_n`
/// a tiny step away (`h` is `1e-6` times the root span, or of
/// `max(1, |x|)` when the span degenerates). Returns the worst ratio over
/// all roots; clean roots of a well-conditioned recurrence score many
/// orders below 1.
pub fn residual_check(rec: &Recurrence, roots: &RootList) -> Result<f64, OrthopolyError> {
    let n = roots.degree();
    if n == 0 {
        return Ok(0.0);
    }
    let xs = roots.roots();
    let span = xs[n - 1] - xs[0];
    let reference = if span > 0.0 {
        span
    } else {
        xs[0].abs().max(1.0)
    };
    let h = 1e-6 * reference;

    let at = eval_monic(rec, n, xs)?;
    let left: Vec<f64> = xs.iter().map(|x| x - h).collect();
    let right: Vec<f64> = xs.iter().map(|x| x + h).collect();
    let at_left = eval_monic(rec, n, &left)?;
    let at_right = eval_monic(rec, n, &right)?;

    let mut worst = 0.0_f64;
    for i in 0..n {
        let nearby = at_left[i].abs().max(at_right[i].abs());
        let ratio = if nearby > 0.0 {
            at[i].abs() / nearby
        } else if at[i] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(ratio);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::Recurrence;

    fn legendre_recurrence(order: usize) -> Recurrence {
        let alphas = vec![0.0; order];
        let betas: Vec<f64> = (1..order)
            .map(|j| {
                let j = j as f64;
                j * j / (4.0 * j * j - 1.0)
            })
            .collect();
        let mut zetas = vec![1.0];
        for &b in &betas {
            let last = *zetas.last().unwrap();
            zetas.push(last * b);
        }
        Recurrence::from_parts(alphas, betas, zetas).unwrap()
    }

    #[test]
    fn two_by_two_exchange_matrix() {
        let vals = tridiag_eigenvalues(&[0.0, 0.0], &[1.0]).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15);
        assert!((vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singleton_matrix() {
        let vals = tridiag_eigenvalues(&[3.25], &[]).unwrap();
        assert_eq!(vals, vec![3.25]);
    }

    #[test]
    fn legendre_j3_roots() {
        let rec = legendre_recurrence(3);
        let j = crate::orthopoly::jacobi(&rec, 3).unwrap();
        let roots = eigenvalues(&j, 1e-12).unwrap();
        let want = 0.7745966692414834_f64; // sqrt(3/5)
        let got = roots.roots();
        assert!((got[0] + want).abs() < 1e-12);
        assert!(got[1].abs() < 1e-14);
        assert!((got[2] - want).abs() < 1e-12);
        assert!(roots.is_strictly_increasing());
    }

    #[test]
    fn zero_offdiagonal_splits_blocks() {
        let vals = tridiag_eigenvalues(&[2.0, 1.0, 5.0], &[0.0, 0.0]).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 5.0]);
    }

    #[test]
    fn near_degenerate_pair_does_not_panic() {
        // A twin pair collapses to (numerically) equal roots; the list
        // stays sorted and finite, strictness is simply reported false.
        let vals = tridiag_eigenvalues(&[1.0, 1.0], &[1e-300]).unwrap();
        let roots = RootList::new(vals);
        assert_eq!(roots.degree(), 2);
        assert!(!roots.is_strictly_increasing() || roots.min_gap() > 0.0);
    }

    #[test]
    fn gershgorin_contains_spectrum() {
        let rec = legendre_recurrence(8);
        let j = crate::orthopoly::jacobi(&rec, 8).unwrap();
        let (lo, hi) = j.gershgorin();
        let roots = eigenvalues(&j, 1e-12).unwrap();
        for &r in roots.roots() {
            assert!(r >= lo - 1e-12 && r <= hi + 1e-12);
        }
    }

    #[test]
    fn dense_two_by_two() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        let vals = sym_eigenvalues(&a).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn dense_toeplitz_three_by_three() {
        // Eigenvalues of tridiag(1, 2, 1) at n = 3: 2 - sqrt(2), 2, 2 + sqrt(2).
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ];
        let vals = sym_eigenvalues(&a).unwrap();
        let s = 2.0_f64.sqrt();
        assert!((vals[0] - (2.0 - s)).abs() < 1e-13);
        assert!((vals[1] - 2.0).abs() < 1e-13);
        assert!((vals[2] - (2.0 + s)).abs() < 1e-13);
    }

    #[test]
    fn tridiagonalization_preserves_eigenvalues() {
        let a = vec![
            vec![4.0, 1.0, -2.0, 2.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 3.0, -2.0],
            vec![2.0, 1.0, -2.0, -1.0],
        ];
        let (d, e) = sym_tridiagonalize(&a).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(e.len(), 3);
        let via_tridiag = tridiag_eigenvalues(&d, &e).unwrap();
        let direct = sym_eigenvalues(&a).unwrap();
        for (x, y) in via_tridiag.iter().zip(direct.iter()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn dense_eigenvectors_reconstruct_matrix() {
        let a = vec![
            vec![4.0, 1.0, -2.0, 2.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 3.0, -2.0],
            vec![2.0, 1.0, -2.0, -1.0],
        ];
        let (vals, z) = sym_eigen_dense(&a).unwrap();
        let n = a.len();
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += z[i][k] * vals[k] * z[j][k];
                }
                assert!((s - a[i][j]).abs() < 1e-12, "({i},{j}): {s} vs {}", a[i][j]);
            }
        }
    }

    #[test]
    fn eigenvalues_are_deterministic() {
        let rec = legendre_recurrence(24);
        let j = crate::orthopoly::jacobi(&rec, 24).unwrap();
        let a = eigenvalues(&j, 1e-12).unwrap();
        let b = eigenvalues(&j, 1e-12).unwrap();
        for (x, y) in a.roots().iter().zip(b.roots().iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn residual_is_tiny_for_clean_roots() {
        let rec = legendre_recurrence(7);
        let j = crate::orthopoly::jacobi(&rec, 6).unwrap();
        let roots = eigenvalues(&j, 1e-12).unwrap();
        let res = residual_check(&rec, &roots).unwrap();
        // Root error ~1e-16 against a 1e-6-of-span stencil: expect ~1e-10.
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn residual_handles_degree_one() {
        let rec = Recurrence::from_parts(vec![2.5], vec![], vec![1.0]).unwrap();
        let roots = RootList::new(vec![2.5]);
        let res = residual_check(&rec, &roots).unwrap();
        assert!(res < 1e-15);
    }

    #[test]
    fn root_list_sorts_and_measures_gaps() {
        let roots = RootList::new(vec![0.5, -0.25, 1.0]);
        assert_eq!(roots.roots(), &[-0.25, 0.5, 1.0]);
        assert!((roots.min_gap() - 0.5).abs() < 1e-15);
        assert_eq!(roots.scale(), 1.0);
        assert!(roots.is_strictly_increasing());
        assert_eq!(RootList::new(vec![7.0]).min_gap(), f64::INFINITY);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            tridiag_eigenvalues(&[], &[]),
            Err(SpectraError::BadShape { .. })
        ));
        assert!(matches!(
            tridiag_eigenvalues(&[1.0, 2.0], &[]),
            Err(SpectraError::BadShape { .. })
        ));
        assert!(matches!(
            sym_eigenvalues(&[vec![1.0, 2.0]]),
            Err(SpectraError::BadShape { .. })
        ));
    }
}

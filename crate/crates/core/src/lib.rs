//! Support recovery for compactly supported one-dimensional measures.
//!
//! Given either a synthetic measure description (point masses plus
//! uniform-density intervals) or a file of raw power moments, this crate
//! computes the three-term recurrence of the associated orthogonal
//! polynomials, takes the eigenvalues of the resulting Jacobi matrices, and
//! classifies those roots into atom candidates, continuous-support
//! intervals, and spectral pollution.
//!
//! Module layout, in pipeline order:
//!
//! * [`measure`] — measure specifications, exact moments, Gauss–Legendre
//!   quadrature, and the quadrature-backed integration oracle;
//! * [`momentio`] — moment files, Hankel matrices, positivity and rank
//!   (flatness) checks, and the coefficient-space oracle;
//! * [`orthopoly`] — the Stieltjes procedure producing recurrence
//!   coefficients and Jacobi matrices;
//! * [`spectra`] — symmetric tridiagonal and dense eigenvalue solvers and
//!   root-quality diagnostics;
//! * [`recover`] — root classification and the support estimator itself;
//! * [`metrics`] — Hausdorff distance, interval IoU, atom matching, and
//!   convergence-rate fits;
//! * [`sweep`] — the parameter-sweep experiment driver (parallel by default
//!   via the `parallel` feature, with a serial fallback).

pub mod measure;
pub mod metrics;
pub mod momentio;
pub mod orthopoly;
pub mod recover;
pub mod spectra;
pub mod sweep;

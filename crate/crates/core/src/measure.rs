//! Measure specifications: atoms plus uniform-density intervals.
//!
//! A [`MeasureSpec`] describes a compactly supported probability measure
//! on the real line as a finite mixture of point masses and intervals
//! carrying uniform density. Construction validates the geometry (strictly
//! disjoint components, positive weights) and normalizes the total mass to
//! one, recording the original mass as [`MeasureSpec::scale`].
//!
//! From a spec you can get exact power moments in closed form
//! ([`MeasureSpec::moments`]), exact inner products of coefficient
//! polynomials ([`MeasureSpec::inner_product`]), and a Gauss–Legendre
//! quadrature oracle ([`QuadratureOracle`]) that drives the Stieltjes
//! procedure with per-interval rules sharp enough for the requested order.
//!
//! File format (unknown keys rejected):
//!
//! ```json
//! {
//!   "atoms": [{"x": 1.5, "w": 0.2}],
//!   "intervals": [{"a": -1.0, "b": 1.0, "w": 0.8, "density": "uniform"}],
//!   "bound": 2.0
//! }
//! ```

use crate::orthopoly::Oracle;
use crate::spectra::tridiag_eigenvalues;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("measure must contain at least one component")]
    Empty,
    #[error("non-finite {what} in component {index}")]
    NonFinite { index: usize, what: &'static str },
    #[error("weight must be positive, got {weight} in component {index}")]
    BadWeight { index: usize, weight: f64 },
    #[error("interval {index} needs lower < upper, got [{lower}, {upper}]")]
    BadInterval { index: usize, lower: f64, upper: f64 },
    #[error("components overlap or touch near x = {at}")]
    Overlap { at: f64 },
    #[error("bound {bound} does not cover the support (needs at least {needed})")]
    BadBound { bound: f64, needed: f64 },
    #[error("measure spec parse error: {0}")]
    Parse(String),
}

/// Density profile of an interval component. Only uniform density is
/// supported; the enum keeps the file format forward-compatible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    Uniform,
}

/// A point mass at `position` with (normalized) `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPart {
    pub position: f64,
    pub weight: f64,
}

/// An interval `[lower, upper]` carrying `weight` with the given density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPart {
    pub lower: f64,
    pub upper: f64,
    pub weight: f64,
    pub density: Density,
}

/// A validated, normalized measure: sorted atoms, sorted intervals,
/// strictly disjoint components, total mass one.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    atoms: Vec<AtomPart>,
    intervals: Vec<IntervalPart>,
    bound: f64,
    scale: f64,
}

// Raw serde mirror of the file format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    atoms: Vec<RawAtom>,
    #[serde(default)]
    intervals: Vec<RawInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    x: f64,
    w: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    a: f64,
    b: f64,
    w: f64,
    density: Density,
}

impl MeasureSpec {
    /// Validates and normalizes a measure.
    ///
    /// Components must be strictly disjoint as closed sets (an atom may
    /// not sit on an interval endpoint). Weights are scaled to total mass
    /// one; the original total is kept as [`MeasureSpec::scale`]. When
    /// `bound` is `None` it defaults to the largest support magnitude.
    pub fn new(
        mut atoms: Vec<AtomPart>,
        mut intervals: Vec<IntervalPart>,
        bound: Option<f64>,
    ) -> Result<MeasureSpec, MeasureError> {
        if atoms.is_empty() && intervals.is_empty() {
            return Err(MeasureError::Empty);
        }
        for (i, a) in atoms.iter().enumerate() {
            if !a.position.is_finite() {
                return Err(MeasureError::NonFinite { index: i, what: "atom position" });
            }
            if !a.weight.is_finite() {
                return Err(MeasureError::NonFinite { index: i, what: "atom weight" });
            }
            if a.weight <= 0.0 {
                return Err(MeasureError::BadWeight { index: i, weight: a.weight });
            }
        }
        for (i, v) in intervals.iter().enumerate() {
            if !v.lower.is_finite() || !v.upper.is_finite() {
                return Err(MeasureError::NonFinite { index: i, what: "interval endpoint" });
            }
            if !v.weight.is_finite() {
                return Err(MeasureError::NonFinite { index: i, what: "interval weight" });
            }
            if v.weight <= 0.0 {
                return Err(MeasureError::BadWeight { index: i, weight: v.weight });
            }
            if !(v.lower < v.upper) {
                return Err(MeasureError::BadInterval {
                    index: i,
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }

        atoms.sort_unstable_by(|a, b| a.position.total_cmp(&b.position));
        intervals.sort_unstable_by(|a, b| a.lower.total_cmp(&b.lower));

        // Strict disjointness over all components, checked on the merged
        // sequence of closed component hulls.
        let mut spans: Vec<(f64, f64)> = atoms.iter().map(|a| (a.position, a.position)).collect();
        spans.extend(intervals.iter().map(|v| (v.lower, v.upper)));
        spans.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        for w in spans.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(MeasureError::Overlap { at: w[1].0 });
            }
        }

        let total: f64 = atoms.iter().map(|a| a.weight).sum::<f64>()
            + intervals.iter().map(|v| v.weight).sum::<f64>();
        for a in &mut atoms {
            a.weight /= total;
        }
        for v in &mut intervals {
            v.weight /= total;
        }

        let needed = spans
            .iter()
            .fold(0.0_f64, |m, s| m.max(s.0.abs()).max(s.1.abs()));
        let bound = match bound {
            Some(b) => {
                if !b.is_finite() || b < needed {
                    return Err(MeasureError::BadBound { bound: b, needed });
                }
                b
            }
            None => needed,
        };

        Ok(MeasureSpec { atoms, intervals, bound, scale: total })
    }

    /// Parses the JSON file format, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<MeasureSpec, MeasureError> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| MeasureError::Parse(e.to_string()))?;
        let atoms = raw
            .atoms
            .into_iter()
            .map(|a| AtomPart { position: a.x, weight: a.w })
            .collect();
        let intervals = raw
            .intervals
            .into_iter()
            .map(|v| IntervalPart {
                lower: v.a,
                upper: v.b,
                weight: v.w,
                density: v.density,
            })
            .collect();
        MeasureSpec::new(atoms, intervals, raw.bound)
    }

    /// Serializes the normalized measure back to the file format.
    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            atoms: self
                .atoms
                .iter()
                .map(|a| RawAtom { x: a.position, w: a.weight })
                .collect(),
            intervals: self
                .intervals
                .iter()
                .map(|v| RawInterval {
                    a: v.lower,
                    b: v.upper,
                    w: v.weight,
                    density: v.density,
                })
                .collect(),
            bound: Some(self.bound),
        };
        serde_json::to_string_pretty(&raw).expect("spec serialization cannot fail")
    }

    /// Atoms sorted by position, weights normalized.
    pub fn atoms(&self) -> &[AtomPart] {
        &self.atoms
    }

    /// Intervals sorted by lower endpoint, weights normalized.
    pub fn intervals(&self) -> &[IntervalPart] {
        &self.intervals
    }

    /// Support bound `B >= max |x|` over the support.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Total mass of the input before normalization.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Convex hull `[min, max]` of the support.
    pub fn hull(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.position);
            hi = hi.max(a.position);
        }
        for v in &self.intervals {
            lo = lo.min(v.lower);
            hi = hi.max(v.upper);
        }
        (lo, hi)
    }

    /// Smallest gap between distinct components as closed sets; infinite
    /// when the measure has a single component.
    pub fn separation_distance(&self) -> f64 {
        let mut spans: Vec<(f64, f64)> =
            self.atoms.iter().map(|a| (a.position, a.position)).collect();
        spans.extend(self.intervals.iter().map(|v| (v.lower, v.upper)));
        spans.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        spans
            .windows(2)
            .map(|w| w[1].0 - w[0].1)
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact power moments `y_0 .. y_max_degree`; `y_0` is exactly one.
    ///
    /// Atoms contribute `w x^k`; a uniform interval `[a, b]` of weight `w`
    /// contributes `w (b^{k+1} - a^{k+1}) / ((k+1)(b-a))`.
    pub fn moments(&self, max_degree: usize) -> Vec<f64> {
        let mut y = vec![0.0_f64; max_degree + 1];
        for a in &self.atoms {
            let mut power = 1.0;
            for yk in y.iter_mut() {
                *yk += a.weight * power;
                power *= a.position;
            }
        }
        for v in &self.intervals {
            let inv_len = 1.0 / (v.upper - v.lower);
            let mut pa = v.lower; // a^{k+1}
            let mut pb = v.upper; // b^{k+1}
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += v.weight * (pb - pa) * inv_len / (k as f64 + 1.0);
                pa *= v.lower;
                pb *= v.upper;
            }
        }
        y[0] = 1.0;
        y
    }

    /// Exact inner product of two coefficient polynomials against the
    /// measure, computed through the closed-form moments.
    pub fn inner_product(&self, p: &[f64], q: &[f64]) -> f64 {
        if p.is_empty() || q.is_empty() {
            return 0.0;
        }
        let deg = p.len() + q.len() - 2;
        let y = self.moments(deg);
        let mut conv = vec![0.0_f64; deg + 1];
        for (i, &pi) in p.iter().enumerate() {
            for (j, &qj) in q.iter().enumerate() {
                conv[i + j] += pi * qj;
            }
        }
        conv.iter().zip(y.iter()).map(|(c, yk)| c * yk).sum()
    }
}

/// A Gauss–Legendre rule on `[-1, 1]` for the weight `dx` (total mass 2).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `m`-point Gauss–Legendre rule, exact for polynomials of degree
/// `2m - 1`.
///
/// Nodes are the eigenvalues of the Legendre Jacobi matrix
/// (`beta_j = j^2 / (4 j^2 - 1)`); weights come from the Christoffel
/// identity `w_i = 1 / sum_k ptilde_k(t_i)^2` over the orthonormal
/// polynomials, which for this symmetric rule reproduces the classical
/// quadrature weights to machine precision.
pub fn gauss_legendre(m: usize) -> QuadratureRule {
    assert!(m >= 1, "quadrature needs at least one node");
    let d = vec![0.0_f64; m];
    let e: Vec<f64> = (1..m)
        .map(|j| {
            let j = j as f64;
            (j * j / (4.0 * j * j - 1.0)).sqrt()
        })
        .collect();
    let nodes = tridiag_eigenvalues(&d, &e).expect("Legendre Jacobi matrix is well formed");
    let weights = nodes
        .iter()
        .map(|&t| {
            let mut prev = 0.0_f64;
            let mut cur = 1.0 / std::f64::consts::SQRT_2; // ptilde_0, mass 2
            let mut sum = cur * cur;
            for k in 1..m {
                let ak = e[k - 1];
                let ak_prev = if k >= 2 { e[k - 2] } else { 0.0 };
                let next = (t * cur - ak_prev * prev) / ak;
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();
    QuadratureRule { nodes, weights }
}

/// Quadrature-backed integration oracle for a measure spec.
///
/// Polynomials are represented by their values at the nodes: one
/// `order + 1`-point Gauss–Legendre rule per interval (affinely mapped)
/// plus one node per atom. Products up to degree `2 * order + 1` are then
/// integrated exactly; a purely atomic measure is exact at every degree
/// because the nodes carry the whole measure.
#[derive(Debug, Clone)]
pub struct QuadratureOracle {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    budget: usize,
}

impl QuadratureOracle {
    pub fn for_order(spec: &MeasureSpec, order: usize) -> QuadratureOracle {
        let m = order + 1;
        let rule = if spec.intervals().is_empty() {
            None
        } else {
            Some(gauss_legendre(m))
        };
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for v in spec.intervals() {
            let rule = rule.as_ref().unwrap();
            let half = 0.5 * (v.upper - v.lower);
            let mid = 0.5 * (v.upper + v.lower);
            for (&t, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
                nodes.push(mid + half * t);
                // density w/(b-a), dx = half dt: weight w * gl_w / 2
                weights.push(0.5 * v.weight * w);
            }
        }
        for a in spec.atoms() {
            nodes.push(a.position);
            weights.push(a.weight);
        }
        let budget = if spec.intervals().is_empty() {
            usize::MAX
        } else {
            2 * order + 1
        };
        QuadratureOracle { nodes, weights, budget }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Oracle for QuadratureOracle {
    type Poly = Vec<f64>;

    fn one(&self) -> Vec<f64> {
        vec![1.0; self.nodes.len()]
    }

    fn step(&self, p: &Vec<f64>, alpha: f64, beta: f64, q: &Vec<f64>) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(p.iter().zip(q.iter()))
            .map(|(&x, (&pv, &qv))| (x - alpha) * pv - beta * qv)
            .collect()
    }

    fn inner(&self, p: &Vec<f64>, q: &Vec<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.nodes.len() {
            acc += self.weights[i] * p[i] * q[i];
        }
        acc
    }

    fn inner_x(&self, p: &Vec<f64>, q: &Vec<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.nodes.len() {
            acc += self.weights[i] * self.nodes[i] * p[i] * q[i];
        }
        acc
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn moment(&self, k: usize) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.nodes.len() {
            acc += self.weights[i] * self.nodes[i].powi(k as i32);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(x: f64, w: f64) -> AtomPart {
        AtomPart { position: x, weight: w }
    }

    fn interval(a: f64, b: f64, w: f64) -> IntervalPart {
        IntervalPart { lower: a, upper: b, weight: w, density: Density::Uniform }
    }

    #[test]
    fn uniform_moments_are_exact() {
        let spec = MeasureSpec::new(vec![], vec![interval(-1.0, 1.0, 1.0)], None).unwrap();
        let y = spec.moments(6);
        let want = [1.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 5.0, 0.0, 1.0 / 7.0];
        for (got, want) in y.iter().zip(want.iter()) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn atom_moments_are_powers() {
        let spec = MeasureSpec::new(vec![atom(0.5, 1.0)], vec![], None).unwrap();
        assert_eq!(spec.moments(2), vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn mixture_moments_by_hand() {
        // 0.5 * U[0,1] + 0.5 * delta_2:
        // y_1 = 0.5*0.5 + 0.5*2 = 1.25; y_2 = 0.5/3 + 0.5*4 = 13/6.
        let spec =
            MeasureSpec::new(vec![atom(2.0, 0.5)], vec![interval(0.0, 1.0, 0.5)], None).unwrap();
        let y = spec.moments(2);
        assert!((y[1] - 1.25).abs() < 1e-15);
        assert!((y[2] - 13.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn weights_normalize_and_record_scale() {
        let spec =
            MeasureSpec::new(vec![atom(2.0, 2.0)], vec![interval(0.0, 1.0, 2.0)], None).unwrap();
        assert_eq!(spec.scale(), 4.0);
        assert_eq!(spec.atoms()[0].weight, 0.5);
        assert_eq!(spec.intervals()[0].weight, 0.5);
        assert_eq!(spec.moments(0), vec![1.0]);
    }

    #[test]
    fn disjointness_is_enforced() {
        // Atom inside an interval.
        assert!(matches!(
            MeasureSpec::new(vec![atom(0.5, 1.0)], vec![interval(0.0, 1.0, 1.0)], None),
            Err(MeasureError::Overlap { .. })
        ));
        // Atom exactly on an endpoint.
        assert!(matches!(
            MeasureSpec::new(vec![atom(1.0, 1.0)], vec![interval(0.0, 1.0, 1.0)], None),
            Err(MeasureError::Overlap { .. })
        ));
        // Touching intervals.
        assert!(matches!(
            MeasureSpec::new(
                vec![],
                vec![interval(0.0, 1.0, 1.0), interval(1.0, 2.0, 1.0)],
                None
            ),
            Err(MeasureError::Overlap { .. })
        ));
        // Duplicate atoms.
        assert!(matches!(
            MeasureSpec::new(vec![atom(0.0, 1.0), atom(0.0, 1.0)], vec![], None),
            Err(MeasureError::Overlap { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_parts() {
        assert!(matches!(
            MeasureSpec::new(vec![], vec![], None),
            Err(MeasureError::Empty)
        ));
        assert!(matches!(
            MeasureSpec::new(vec![atom(0.0, 0.0)], vec![], None),
            Err(MeasureError::BadWeight { .. })
        ));
        assert!(matches!(
            MeasureSpec::new(vec![], vec![interval(1.0, 1.0, 1.0)], None),
            Err(MeasureError::BadInterval { .. })
        ));
        assert!(matches!(
            MeasureSpec::new(vec![atom(f64::NAN, 1.0)], vec![], None),
            Err(MeasureError::NonFinite { .. })
        ));
    }

    #[test]
    fn bound_defaults_and_validates() {
        let spec =
            MeasureSpec::new(vec![atom(-1.5, 1.0)], vec![interval(0.0, 1.0, 1.0)], None).unwrap();
        assert_eq!(spec.bound(), 1.5);
        assert!(matches!(
            MeasureSpec::new(vec![atom(-1.5, 1.0)], vec![], Some(1.0)),
            Err(MeasureError::BadBound { .. })
        ));
        let bounded = MeasureSpec::new(vec![atom(-1.5, 1.0)], vec![], Some(2.0)).unwrap();
        assert_eq!(bounded.bound(), 2.0);
    }

    #[test]
    fn separation_distance_cases() {
        let single = MeasureSpec::new(vec![], vec![interval(0.0, 1.0, 1.0)], None).unwrap();
        assert_eq!(single.separation_distance(), f64::INFINITY);

        let two = MeasureSpec::new(vec![atom(0.0, 1.0), atom(0.4, 1.0)], vec![], None).unwrap();
        assert!((two.separation_distance() - 0.4).abs() < 1e-15);

        let mixed =
            MeasureSpec::new(vec![atom(1.5, 0.2)], vec![interval(-1.0, 1.0, 0.8)], None).unwrap();
        assert!((mixed.separation_distance() - 0.5).abs() < 1e-15);
        assert_eq!(mixed.hull(), (-1.0, 1.5));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let text = r#"{
            "atoms": [{"x": 1.5, "w": 0.2}],
            "intervals": [{"a": -1.0, "b": 1.0, "w": 0.8, "density": "uniform"}],
            "bound": 2.0
        }"#;
        let spec = MeasureSpec::from_json(text).unwrap();
        assert_eq!(spec.atoms().len(), 1);
        assert_eq!(spec.intervals().len(), 1);
        assert_eq!(spec.bound(), 2.0);
        let back = MeasureSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);

        // Unknown keys and unknown density tokens are rejected.
        assert!(MeasureSpec::from_json(r#"{"atoms": [], "points": []}"#).is_err());
        assert!(MeasureSpec::from_json(
            r#"{"intervals": [{"a": 0, "b": 1, "w": 1, "density": "gaussian"}]}"#
        )
        .is_err());
        // Missing density field is rejected too.
        assert!(MeasureSpec::from_json(r#"{"intervals": [{"a": 0, "b": 1, "w": 1}]}"#).is_err());
    }

    #[test]
    fn gauss_legendre_five_points_match_classical_values() {
        let rule = gauss_legendre(5);
        let nodes = [
            -0.906179845938664,
            -0.5384693101056831,
            0.0,
            0.5384693101056831,
            0.906179845938664,
        ];
        let weights = [
            0.23692688505618908,
            0.47862867049936647,
            0.5688888888888889,
            0.47862867049936647,
            0.23692688505618908,
        ];
        for i in 0..5 {
            assert!((rule.nodes[i] - nodes[i]).abs() < 1e-14, "node {i}");
            assert!((rule.weights[i] - weights[i]).abs() < 1e-14, "weight {i}");
        }
        let mass: f64 = rule.weights.iter().sum();
        assert!((mass - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_oracle_matches_analytic_inner_products() {
        let spec =
            MeasureSpec::new(vec![atom(1.5, 0.2)], vec![interval(-1.0, 1.0, 0.8)], None).unwrap();
        let oracle = QuadratureOracle::for_order(&spec, 3);
        assert_eq!(oracle.budget(), 7);

        let p = [0.5, -1.0, 2.0]; // 2x^2 - x + 0.5
        let q = [1.0, 3.0, 0.0, 0.25]; // 0.25x^3 + 3x + 1
        let horner = |coeffs: &[f64], x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let pv: Vec<f64> = oracle.nodes().iter().map(|&x| horner(&p, x)).collect();
        let qv: Vec<f64> = oracle.nodes().iter().map(|&x| horner(&q, x)).collect();

        let exact = spec.inner_product(&p, &q);
        assert!((oracle.inner(&pv, &qv) - exact).abs() < 1e-13);

        // <x p, q> equals the analytic product with p shifted by one degree.
        let exact_x = spec.inner_product(&[0.0, 0.5, -1.0, 2.0], &q);
        assert!((oracle.inner_x(&pv, &qv) - exact_x).abs() < 1e-13);
    }

    #[test]
    fn quadrature_oracle_moments_match_closed_form() {
        let spec =
            MeasureSpec::new(vec![atom(1.5, 0.2)], vec![interval(-1.0, 1.0, 0.8)], None).unwrap();
        let oracle = QuadratureOracle::for_order(&spec, 6);
        let y = spec.moments(10);
        for (k, &yk) in y.iter().enumerate() {
            assert!((oracle.moment(k) - yk).abs() < 1e-13, "moment {k}");
        }
    }

    #[test]
    fn purely_atomic_oracle_has_unbounded_budget() {
        let spec = MeasureSpec::new(vec![atom(-1.0, 0.5), atom(1.0, 0.5)], vec![], None).unwrap();
        let oracle = QuadratureOracle::for_order(&spec, 1);
        assert_eq!(oracle.budget(), usize::MAX);
        assert_eq!(oracle.moment(2), 1.0);
        assert_eq!(oracle.moment(3), 0.0);
    }
}

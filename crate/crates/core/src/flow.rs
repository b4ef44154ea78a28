//! Gradient-flow integration and fixed-point analysis.
//!
//! Flows are integrated with fixed-step classical RK4 in `η`-coordinates.
//! Because the fields are the polynomial extensions, trajectories may leave
//! the simplex; integration is bounded by the box `[−0.5, 1.5]ⁿ` instead.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::natgrad::VectorField;
use crate::simplex::EtaCoords;

/// Bounds of the guard box trajectories must stay in.
pub const DOMAIN_BOX: (f64, f64) = (-0.5, 1.5);
/// Eigenvalues with `|Re λ|` at or below this are treated as zero.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Roots closer than this are reported once.
pub const DEDUP_DISTANCE: f64 = 1e-6;
/// How many times a Newton step is halved before giving up on a seed.
pub const MAX_STEP_HALVINGS: usize = 20;

/// One classical RK4 step of the autonomous system `ẏ = f(y)`.
pub fn rk4_step(f: impl Fn(&[f64]) -> Vec<f64>, y: &[f64], dt: f64) -> Vec<f64> {
    let shifted = |k: &[f64], scale: f64| -> Vec<f64> { y.iter().zip(k).map(|(yi, ki)| yi + scale * ki).collect() };
    let k1 = f(y);
    let k2 = f(&shifted(&k1, dt / 2.0));
    let k3 = f(&shifted(&k2, dt / 2.0));
    let k4 = f(&shifted(&k3, dt));
    (0..y.len()).map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    Converged,
    MaxSteps,
    LeftDomain,
}

impl TerminalReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminalReason::Converged => "converged",
            TerminalReason::MaxSteps => "max_steps",
            TerminalReason::LeftDomain => "left_domain",
        }
    }
}

/// Sampled solution of a flow.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Index value per sample; empty when the field has no attached index.
    pub values: Vec<f64>,
    pub field_norms: Vec<f64>,
    pub terminal_reason: TerminalReason,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least the initial sample")
    }

    /// Largest per-step decrease of the index value (0 if non-decreasing).
    pub fn max_dip(&self) -> f64 {
        self.values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSettings {
    pub dt: f64,
    pub t_max: f64,
    pub stop_tol: f64,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self { dt: 0.1, t_max: 500.0, stop_tol: 1e-10 }
    }
}

/// Integrates `η̇ = field(η)` from `eta0` with fixed-step RK4.
///
/// Stops when the field norm drops below `stop_tol`, when the next step would
/// pass `t_max`, or when the state leaves the guard box.
pub fn integrate(field: &VectorField, eta0: &EtaCoords, settings: FlowSettings) -> Result<TrajectoryRecord> {
    let FlowSettings { dt, t_max, stop_tol } = settings;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidStep(dt));
    }
    if stop_tol.is_nan() || stop_tol <= 0.0 {
        return Err(Error::InvalidInput(format!("stop tolerance must be positive, got {stop_tol}")));
    }
    if eta0.n() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), got: eta0.n() });
    }
    let mut record = TrajectoryRecord {
        times: Vec::new(),
        states: Vec::new(),
        values: Vec::new(),
        field_norms: Vec::new(),
        terminal_reason: TerminalReason::MaxSteps,
    };
    let mut y = eta0.as_slice().to_vec();
    let mut step: u64 = 0;
    loop {
        let t = step as f64 * dt;
        let g = field.eval(&y);
        let g_norm = norm(&g);
        record.times.push(t);
        record.states.push(y.clone());
        record.field_norms.push(g_norm);
        if let Some(v) = field.potential(&y) {
            record.values.push(v);
        }
        if !in_box(&y) {
            record.terminal_reason = TerminalReason::LeftDomain;
            break;
        }
        if g_norm < stop_tol {
            record.terminal_reason = TerminalReason::Converged;
            break;
        }
        if (step + 1) as f64 * dt > t_max * (1.0 + 1e-12) {
            record.terminal_reason = TerminalReason::MaxSteps;
            break;
        }
        y = rk4_step(|x| field.eval(x), &y, dt);
        step += 1;
    }
    Ok(record)
}

fn in_box(y: &[f64]) -> bool {
    y.iter().all(|&x| x.is_finite() && x >= DOMAIN_BOX.0 && x <= DOMAIN_BOX.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attractor,
    Repeller,
    Saddle,
    Degenerate,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Attractor => "attractor",
            Stability::Repeller => "repeller",
            Stability::Saddle => "saddle",
            Stability::Degenerate => "degenerate",
        }
    }

    /// Classification by the signs of the real parts.
    pub fn from_eigenvalues(eigenvalues: &[Complex64], tol: f64) -> Self {
        if eigenvalues.iter().any(|l| l.re.abs() <= tol) {
            Stability::Degenerate
        } else if eigenvalues.iter().all(|l| l.re < 0.0) {
            Stability::Attractor
        } else if eigenvalues.iter().all(|l| l.re > 0.0) {
            Stability::Repeller
        } else {
            Stability::Saddle
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub location: Vec<f64>,
    /// Euclidean norm of the field at `location`.
    pub residual: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub eigenvalues: Vec<Complex64>,
    pub jacobian: Vec<Vec<f64>>,
    pub classification: Stability,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for l in v {
        seq.serialize_element(&[l.re, l.im])?;
    }
    seq.end()
}

/// Eigenvalues of a square matrix, sorted by real then imaginary part.
///
/// `2 × 2` matrices use the quadratic formula; larger ones go through a real
/// Schur decomposition (QR iteration).
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = if m.nrows() == 2 {
        let half_trace = (m[(0, 0)] + m[(1, 1)]) / 2.0;
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let disc = half_trace * half_trace - det;
        if disc >= 0.0 {
            let r = disc.sqrt();
            vec![Complex64::new(half_trace - r, 0.0), Complex64::new(half_trace + r, 0.0)]
        } else {
            let r = (-disc).sqrt();
            vec![Complex64::new(half_trace, -r), Complex64::new(half_trace, r)]
        }
    } else {
        m.clone().complex_eigenvalues().iter().copied().collect()
    };
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Jacobian eigen-analysis at a fixed point.
pub fn classify(field: &VectorField, location: &EtaCoords, tol: f64) -> Result<FixedPointReport> {
    let x = location.as_slice();
    let residual = norm(&field.eval(x));
    if residual.is_nan() || residual >= tol {
        return Err(Error::NotAFixedPoint(residual));
    }
    let jac = field.jacobian(x);
    let eigenvalues = eigenvalues(&jac);
    let classification = Stability::from_eigenvalues(&eigenvalues, DEGENERACY_TOL);
    Ok(FixedPointReport {
        location: x.to_vec(),
        residual,
        jacobian: jac.row_iter().map(|r| r.iter().copied().collect()).collect(),
        eigenvalues,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Keep only roots in the closed solid simplex (with slack `1e-9`).
    pub restrict_to_simplex: bool,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200, restrict_to_simplex: true }
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointSearch {
    pub points: Vec<FixedPointReport>,
    /// Seeds that did not converge, with the reason.
    pub failures: Vec<(Vec<f64>, Error)>,
}

impl FixedPointSearch {
    pub fn count(&self, kind: Stability) -> usize {
        self.points.iter().filter(|p| p.classification == kind).count()
    }
}

/// Damped Newton iteration on `field(η) = 0` from one seed.
///
/// Iterates until the step is negligible or the residual stops decreasing,
/// so roots where the Jacobian vanishes are polished as far as round-off
/// allows; succeeds if the final residual is below `settings.tol`.
pub fn newton(field: &VectorField, seed: &[f64], settings: &NewtonSettings) -> Result<Vec<f64>> {
    let mut x = seed.to_vec();
    let mut f = field.eval(&x);
    let mut r = norm(&f);
    for _ in 0..settings.max_iter {
        if r == 0.0 || !r.is_finite() {
            break;
        }
        let jac = field.jacobian(&x);
        let rhs = nalgebra::DVector::from_column_slice(&f);
        let step = match jac.clone().lu().solve(&rhs) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => jac.svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::NoConvergence(e.to_string()))?,
        };
        if step.norm() <= 1e-15 * norm(&x).max(1.0) {
            break;
        }
        let attempt = |lambda: f64| {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - lambda * si).collect();
            let ft = field.eval(&trial);
            let rt = norm(&ft);
            (trial, ft, rt)
        };
        // The doubled step is exact Newton for roots of multiplicity two.
        let full = attempt(1.0);
        let doubled = attempt(2.0);
        let mut best = if doubled.2 < full.2 { doubled } else { full };
        let mut lambda = 0.5;
        let mut halvings = 0;
        while !(best.2.is_finite() && best.2 < r) && halvings < MAX_STEP_HALVINGS {
            best = attempt(lambda);
            lambda /= 2.0;
            halvings += 1;
        }
        if !(best.2.is_finite() && best.2 < r) {
            break;
        }
        (x, f, r) = best;
    }
    if r < settings.tol {
        Ok(polish_singular_root(field, x, settings.tol))
    } else {
        Err(Error::NoConvergence(format!("residual {r:e} from seed {seed:?}")))
    }
}

/// Below this max-entry Jacobian norm a root is treated as fully singular.
const SINGULAR_JACOBIAN: f64 = 1e-4;

/// Refines a root where the whole Jacobian vanishes.
///
/// There the field is quadratic, so its round-off only pins the root to about
/// `√ε`. The Jacobian itself vanishes linearly, so Gauss–Newton on
/// `vec(J(η)) = 0` recovers the location to round-off. The refined point is
/// kept only if it is still a root of the field within `tol`.
fn polish_singular_root(field: &VectorField, x: Vec<f64>, tol: f64) -> Vec<f64> {
    let n = x.len();
    let vec_j = |y: &[f64]| nalgebra::DVector::from_column_slice(field.jacobian(y).as_slice());
    let mut g = vec_j(&x);
    if g.amax() > SINGULAR_JACOBIAN {
        return x;
    }
    let mut y = x.clone();
    let h = 1e-5;
    for _ in 0..50 {
        let mut dg = DMatrix::<f64>::zeros(n * n, n);
        for k in 0..n {
            let mut plus = y.clone();
            let mut minus = y.clone();
            plus[k] += h;
            minus[k] -= h;
            dg.set_column(k, &((vec_j(&plus) - vec_j(&minus)) / (2.0 * h)));
        }
        let Ok(step) = dg.svd(true, true).solve(&g, 1e-12) else { break };
        let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a - b).collect();
        let gt = vec_j(&trial);
        if gt.norm().is_nan() || gt.norm() >= g.norm() {
            break;
        }
        y = trial;
        g = gt;
    }
    if norm(&field.eval(&y)) < tol {
        y
    } else {
        x
    }
}

/// Runs [`newton`] from every seed, deduplicates the roots and classifies them.
pub fn find_fixed_points(field: &VectorField, seeds: &[Vec<f64>], settings: &NewtonSettings) -> FixedPointSearch {
    let outcomes: Vec<_> = seeds.par_iter().map(|s| (s.clone(), newton(field, s, settings))).collect();
    let mut roots: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut failures = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(root) => {
                if settings.restrict_to_simplex && !EtaCoords::extended(root.clone()).in_closed_simplex(1e-9) {
                    continue;
                }
                let residual = norm(&field.eval(&root));
                let close = roots.iter_mut().find(|(r, _)| {
                    r.iter().zip(&root).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() < DEDUP_DISTANCE
                });
                match close {
                    Some(existing) if residual < existing.1 => *existing = (root, residual),
                    Some(_) => {}
                    None => roots.push((root, residual)),
                }
            }
            Err(e) => failures.push((seed, e)),
        }
    }
    let mut roots: Vec<Vec<f64>> = roots.into_iter().map(|(r, _)| r).collect();
    roots.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let points =
        roots.into_iter().filter_map(|r| classify(field, &EtaCoords::extended(r), settings.tol).ok()).collect();
    FixedPointSearch { points, failures }
}

/// `count × count` seeds evenly spaced over `[lo, hi]²`, row-major in `η₁`.
pub fn grid_seeds(count: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let at = |k: usize| if count == 1 { lo } else { lo + (hi - lo) * k as f64 / (count - 1) as f64 };
    (0..count).flat_map(|i| (0..count).map(move |j| vec![at(i), at(j)])).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BasinCell {
    pub eta: [f64; 2],
    /// Index into [`BasinMap::attractors`], `None` when unresolved.
    pub label: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasinMap {
    pub resolution: usize,
    pub attractors: Vec<Vec<f64>>,
    pub cells: Vec<BasinCell>,
}

/// Labels interior grid points `(i, j) / (resolution + 1)` of the solid
/// triangle by the attractor their trajectory converges to.
pub fn basin_map(field: &VectorField, resolution: usize, settings: FlowSettings) -> Result<BasinMap> {
    if field.dim() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: field.dim() });
    }
    if resolution < 2 {
        return Err(Error::InvalidInput(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let search = find_fixed_points(field, &grid_seeds(7, 0.0, 1.0), &NewtonSettings::default());
    let attractors: Vec<Vec<f64>> =
        search.points.into_iter().filter(|p| p.classification == Stability::Attractor).map(|p| p.location).collect();
    let m = (resolution + 1) as f64;
    let points: Vec<[f64; 2]> = (1..=resolution)
        .flat_map(|i| (1..=resolution).map(move |j| (i, j)))
        .filter(|(i, j)| i + j < resolution + 1)
        .map(|(i, j)| [i as f64 / m, j as f64 / m])
        .collect();
    let cells = points
        .par_iter()
        .map(|&eta| {
            let label = integrate(field, &EtaCoords::extended(eta.to_vec()), settings)
                .ok()
                .filter(|t| t.terminal_reason == TerminalReason::Converged)
                .and_then(|t| nearest(&attractors, t.last_state(), 1e-4));
            BasinCell { eta, label }
        })
        .collect();
    Ok(BasinMap { resolution, attractors, cells })
}

fn nearest(points: &[Vec<f64>], x: &[f64], radius: f64) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .map(|(k, p)| (k, p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()))
        .filter(|(_, d)| *d < radius)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::{CubicIndexCoeffs, Index};
    use approx::assert_abs_diff_eq;

    fn pol_field() -> VectorField {
        VectorField::natural_gradient_of(Index::Pol, 2).unwrap()
    }

    #[test]
    fn fixed_point_start_converges_immediately() {
        let t = integrate(&pol_field(), &EtaCoords::extended(vec![0.5, 0.5]), FlowSettings::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.terminal_reason, TerminalReason::Converged);
    }

    #[test]
    fn converges_to_midpoint() {
        let settings = FlowSettings { dt: 0.1, t_max: 500.0, stop_tol: 1e-9 };
        let t = integrate(&pol_field(), &EtaCoords::new(vec![0.4, 0.45]).unwrap(), settings).unwrap();
        assert_eq!(t.terminal_reason, TerminalReason::Converged);
        let end = t.last_state();
        assert!((end[0] - 0.5).abs() < 1e-8 && (end[1] - 0.5).abs() < 1e-8, "{end:?}");
        assert!(norm(&pol_field().eval(end)) < 1e-8);
        assert!(t.max_dip() <= 1e-9);
        assert!(t.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rk4_is_fourth_order_on_linear_field() {
        let field = VectorField::linear(-DMatrix::<f64>::identity(2, 2));
        let err = |dt: f64| {
            let s = FlowSettings { dt, t_max: 1.0, stop_tol: 1e-300 };
            let t = integrate(&field, &EtaCoords::extended(vec![1.0, 1.0]), s).unwrap();
            assert_abs_diff_eq!(*t.times.last().unwrap(), 1.0, epsilon = 1e-12);
            (t.last_state()[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_step() {
        let r = integrate(
            &pol_field(),
            &EtaCoords::extended(vec![0.2, 0.2]),
            FlowSettings { dt: 0.0, ..Default::default() },
        );
        assert!(matches!(r, Err(Error::InvalidStep(_))));
    }

    #[test]
    fn leaving_the_box_is_reported() {
        let field = VectorField::linear(DMatrix::<f64>::identity(2, 2));
        let t = integrate(&field, &EtaCoords::extended(vec![1.0, 1.0]), FlowSettings::default()).unwrap();
        assert_eq!(t.terminal_reason, TerminalReason::LeftDomain);
    }

    #[test]
    fn seven_fixed_points() {
        let search = find_fixed_points(&pol_field(), &grid_seeds(7, 0.0, 1.0), &NewtonSettings::default());
        assert_eq!(search.points.len(), 7, "{:#?}", search.points);
        assert_eq!(search.count(Stability::Repeller), 3);
        assert_eq!(search.count(Stability::Attractor), 3);
        assert_eq!(search.count(Stability::Degenerate), 1);
        assert!(search.points.iter().all(|p| p.residual <= 1e-10));
    }

    #[test]
    fn constant_field_has_no_roots() {
        let field = VectorField::new("const", 2, |_| vec![1.0, 0.5]);
        let seeds = grid_seeds(3, 0.0, 1.0);
        let search = find_fixed_points(&field, &seeds, &NewtonSettings::default());
        assert!(search.points.is_empty());
        assert_eq!(search.failures.len(), seeds.len());
        assert!(search.failures.iter().all(|(_, e)| matches!(e, Error::NoConvergence(_))));
    }

    #[test]
    fn classification_examples() {
        let f = pol_field();
        let v = classify(&f, &EtaCoords::extended(vec![0.0, 0.0]), 1e-10).unwrap();
        assert_eq!(v.classification, Stability::Repeller);
        assert_abs_diff_eq!(v.eigenvalues[0].re, 1.0, epsilon = 1e-12);
        let m = classify(&f, &EtaCoords::extended(vec![0.5, 0.5]), 1e-10).unwrap();
        assert_eq!(m.classification, Stability::Attractor);
        assert_abs_diff_eq!(m.eigenvalues[0].re, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.eigenvalues[1].re, -0.25, epsilon = 1e-12);
        let u = classify(&f, &EtaCoords::extended(vec![1.0 / 3.0, 1.0 / 3.0]), 1e-10).unwrap();
        assert_eq!(u.classification, Stability::Degenerate);
        assert!(matches!(classify(&f, &EtaCoords::extended(vec![0.2, 0.3]), 1e-10), Err(Error::NotAFixedPoint(_))));
    }

    #[test]
    fn general_eigenvalues_use_schur() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        let ev = eigenvalues(&m);
        assert_abs_diff_eq!(ev[0].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[2].re, 2.0, epsilon = 1e-12);
        assert_eq!(Stability::from_eigenvalues(&ev, DEGENERACY_TOL), Stability::Degenerate);
    }

    #[test]
    fn scaled_pol_has_same_classification() {
        let field =
            VectorField::natural_gradient_of(Index::Cubic(CubicIndexCoeffs::new(0.0, 2.0, 0.0, 0.0, 0.0)), 2).unwrap();
        let search = find_fixed_points(&field, &grid_seeds(7, 0.0, 1.0), &NewtonSettings::default());
        assert_eq!(search.points.len(), 7);
        assert_eq!(search.count(Stability::Repeller), 3);
        assert_eq!(search.count(Stability::Attractor), 3);
    }

    #[test]
    fn smallest_basin_grid() {
        let map = basin_map(&pol_field(), 2, FlowSettings::default()).unwrap();
        assert_eq!(map.cells.len(), 1);
        assert_eq!(map.cells[0].eta, [1.0 / 3.0, 1.0 / 3.0]);
    }

    #[test]
    fn basin_map_is_swap_symmetric() {
        let map = basin_map(&pol_field(), 12, FlowSettings { dt: 0.1, t_max: 300.0, stop_tol: 1e-8 }).unwrap();
        assert_eq!(map.attractors.len(), 3);
        let label_at = |eta: [f64; 2]| map.cells.iter().find(|c| c.eta == eta).map(|c| c.label).unwrap();
        let swapped = |k: usize| {
            let a = &map.attractors[k];
            map.attractors.iter().position(|b| (b[0] - a[1]).abs() < 1e-6 && (b[1] - a[0]).abs() < 1e-6).unwrap()
        };
        let mut labelled = 0;
        for c in &map.cells {
            let mirror = label_at([c.eta[1], c.eta[0]]);
            assert_eq!(c.label.map(swapped), mirror, "cell {:?}", c.eta);
            labelled += usize::from(c.label.is_some());
        }
        assert!(labelled > map.cells.len() / 2);
    }
}

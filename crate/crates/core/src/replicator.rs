//! Lotka–Volterra predator/prey dynamics, their lift to the simplex, and the
//! replicator equation `π̇ᵢ = πᵢ(fᵢ(π) − π·f)` in the three coordinate charts.
//!
//! Populations use the rescaled variables `zᵢ = Nᵢ / qᵢ`, in which the
//! stationary point is `(1, 1)`. Adding a constant population `z₀ = 1` and
//! normalizing gives a point of the open 2-simplex.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::covariance_matrix;
use crate::flow::{rk4_step, TerminalReason};
use crate::simplex::{
    eta_to_point, point_to_eta, point_to_projective, point_to_theta, projective_to_point, theta_to_point, EtaCoords,
    ProjectiveCoords, SimplexPoint, TangentVector, ThetaCoords,
};

/// Coordinates below this abort replicator integration.
pub const STATE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LvParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LvParams {
    pub fn new(alpha1: f64, alpha2: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let all = [alpha1, alpha2, lambda1, lambda2];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(Self { alpha1, alpha2, lambda1, lambda2 })
        } else {
            Err(Error::InvalidInput(format!("rates must be positive and finite, got {all:?}")))
        }
    }

    /// Rates for the rescaled system only depend on the `α`s.
    pub fn rescaled(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(alpha1, alpha2, 1.0, 1.0)
    }

    /// Nonzero stationary point `(α₂/λ₂, α₁/λ₁)` of the original system.
    pub fn stationary_point(&self) -> [f64; 2] {
        [self.alpha2 / self.lambda2, self.alpha1 / self.lambda1]
    }

    /// `z = N / q`.
    pub fn rescale(&self, n: [f64; 2]) -> [f64; 2] {
        let q = self.stationary_point();
        [n[0] / q[0], n[1] / q[1]]
    }
}

fn require_positive(z: [f64; 2]) -> Result<()> {
    if z.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::NonPositiveState(z.to_vec()))
    }
}

/// `Ṅ₁ = N₁(α₁ − λ₁N₂)`, `Ṅ₂ = N₂(λ₂N₁ − α₂)`.
pub fn lv_field_original(params: &LvParams, n: [f64; 2]) -> Result<[f64; 2]> {
    require_positive(n)?;
    let LvParams { alpha1, alpha2, lambda1, lambda2 } = *params;
    Ok([n[0] * (alpha1 - lambda1 * n[1]), n[1] * (lambda2 * n[0] - alpha2)])
}

/// `ż₁ = α₁z₁(1 − z₂)`, `ż₂ = α₂z₂(z₁ − 1)`.
pub fn lv_field(params: &LvParams, z: [f64; 2]) -> Result<[f64; 2]> {
    require_positive(z)?;
    Ok([params.alpha1 * z[0] * (1.0 - z[1]), params.alpha2 * z[1] * (z[0] - 1.0)])
}

/// `C(z) = α₂(log z₁ − z₁) + α₁(log z₂ − z₂)`, constant along LV orbits.
pub fn lv_conserved(params: &LvParams, z: [f64; 2]) -> Result<f64> {
    require_positive(z)?;
    Ok(params.alpha2 * (z[0].ln() - z[0]) + params.alpha1 * (z[1].ln() - z[1]))
}

/// Diagonal of the Hessian of [`lv_conserved`].
pub fn lv_conserved_hessian(params: &LvParams, z: [f64; 2]) -> Result<[f64; 2]> {
    require_positive(z)?;
    Ok([-params.alpha2 / (z[0] * z[0]), -params.alpha1 / (z[1] * z[1])])
}

/// `π = (1, z₁, z₂) / (1 + z₁ + z₂)`.
pub fn lv_uplift(z: [f64; 2]) -> Result<SimplexPoint> {
    require_positive(z)?;
    Ok(projective_to_point(&ProjectiveCoords::new(z.to_vec())?))
}

/// Inverse of [`lv_uplift`], `zⱼ = πⱼ / π₀`.
pub fn lv_downlift(p: &SimplexPoint) -> Result<[f64; 2]> {
    match *point_to_projective(p).as_slice() {
        [z1, z2] => Ok([z1, z2]),
        ref v => Err(Error::UnsupportedDimension { expected: 2, got: v.len() }),
    }
}

type FitnessFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// Fitness `f(π)` of each category.
#[derive(Clone)]
pub struct Fitness {
    label: String,
    n: usize,
    eval: Arc<FitnessFn>,
    lv: Option<LvParams>,
}

impl fmt::Debug for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fitness").field("label", &self.label).field("n", &self.n).finish_non_exhaustive()
    }
}

impl Fitness {
    /// `n` is the chart dimension; `eval` receives and returns `n + 1` values.
    pub fn new(
        label: impl Into<String>,
        n: usize,
        eval: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), n, eval: Arc::new(eval), lv: None }
    }

    /// `f₀ = 0`, `f₁ = α₁(1 − π₂/π₀)`, `f₂ = α₂(π₁/π₀ − 1)`.
    pub fn lotka_volterra(params: LvParams) -> Self {
        let mut fit = Self::new(format!("lv:{},{}", params.alpha1, params.alpha2), 2, move |p| {
            let [p0, p1, p2] = *p else {
                return Err(Error::UnsupportedDimension { expected: 2, got: p.len().saturating_sub(1) });
            };
            if p0.is_nan() || p0 <= 0.0 {
                return Err(Error::BoundaryState(p.to_vec()));
            }
            Ok(vec![0.0, params.alpha1 * (1.0 - p2 / p0), params.alpha2 * (p1 / p0 - 1.0)])
        });
        fit.lv = Some(params);
        fit
    }

    /// The same values at every point.
    pub fn constant(values: Vec<f64>) -> Self {
        let n = values.len().saturating_sub(1);
        Self::new("constant", n, move |_| Ok(values.clone()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lv_params(&self) -> Option<LvParams> {
        self.lv
    }

    pub fn eval(&self, probs: &[f64]) -> Result<Vec<f64>> {
        if probs.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: probs.len() });
        }
        let f = (self.eval)(probs)?;
        if f.len() != probs.len() {
            return Err(Error::DimensionMismatch { expected: probs.len(), got: f.len() });
        }
        Ok(f)
    }

    /// `(f₁ − f₀, …, fₙ − f₀)`.
    pub fn relative(&self, probs: &[f64]) -> Result<Vec<f64>> {
        let f = self.eval(probs)?;
        Ok(f[1..].iter().map(|x| x - f[0]).collect())
    }
}

fn require_interior(p: &SimplexPoint) -> Result<()> {
    if p.probs().iter().all(|&x| x >= STATE_FLOOR) {
        Ok(())
    } else {
        Err(Error::BoundaryState(p.probs().to_vec()))
    }
}

/// Replicator velocity `π̇ᵢ = πᵢ(fᵢ − π·f)`; the components sum to zero.
pub fn replicator_field(fit: &Fitness, p: &SimplexPoint) -> Result<Vec<f64>> {
    require_interior(p)?;
    let f = fit.eval(p.probs())?;
    let mean = p.expect(&f);
    Ok(p.probs().iter().zip(&f).map(|(pi, fi)| pi * (fi - mean)).collect())
}

/// Score `π̇/π = f − π·f` of the replicator velocity.
pub fn replicator_score(fit: &Fitness, p: &SimplexPoint) -> Result<TangentVector> {
    require_interior(p)?;
    TangentVector::centered(fit.eval(p.probs())?, p.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Solid,
    Exponential,
    Projective,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::Solid, Chart::Exponential, Chart::Projective];

    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::Solid => "solid",
            Chart::Exponential => "exp",
            Chart::Projective => "proj",
        }
    }

    /// Column prefix for chart coordinates.
    pub fn symbol(&self) -> &'static str {
        match self {
            Chart::Solid => "eta",
            Chart::Exponential => "theta",
            Chart::Projective => "xi",
        }
    }

    pub fn to_point(&self, state: &[f64]) -> Result<SimplexPoint> {
        match self {
            Chart::Solid => eta_to_point(&EtaCoords::new(state.to_vec())?),
            Chart::Exponential => Ok(theta_to_point(&ThetaCoords::new(state.to_vec())?)),
            Chart::Projective => Ok(projective_to_point(&ProjectiveCoords::new(state.to_vec())?)),
        }
    }

    pub fn from_point(&self, p: &SimplexPoint) -> Vec<f64> {
        match self {
            Chart::Solid => point_to_eta(p).into_vec(),
            Chart::Exponential => point_to_theta(p).as_slice().to_vec(),
            Chart::Projective => point_to_projective(p).as_slice().to_vec(),
        }
    }
}

impl std::str::FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solid" | "eta" => Ok(Chart::Solid),
            "exp" | "exponential" | "theta" => Ok(Chart::Exponential),
            "proj" | "projective" | "xi" => Ok(Chart::Projective),
            other => Err(Error::InvalidInput(format!("unknown chart '{other}' (expected solid, exp or proj)"))),
        }
    }
}

/// Velocity of the replicator flow expressed in `chart`.
///
/// * solid: `η̇ = (diag(η) − ηηᵗ)(f − f₀)`,
/// * exponential: `θ̇ = f − f₀`,
/// * projective: `ξ̇ⱼ = ξⱼ(fⱼ − f₀)`.
pub fn replicator_in_chart(fit: &Fitness, chart: Chart, state: &[f64]) -> Result<Vec<f64>> {
    let p = chart.to_point(state)?;
    require_interior(&p)?;
    let rel = fit.relative(p.probs())?;
    Ok(match chart {
        Chart::Solid => {
            let cov = covariance_matrix(&p.probs()[1..]);
            (0..rel.len()).map(|i| (0..rel.len()).map(|j| cov[(i, j)] * rel[j]).sum()).collect()
        }
        Chart::Exponential => rel,
        Chart::Projective => state.iter().zip(&rel).map(|(x, r)| x * r).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplicatorTrajectory {
    pub chart: Chart,
    pub times: Vec<f64>,
    /// Chart coordinates per sample.
    pub states: Vec<Vec<f64>>,
    /// Simplex image per sample.
    pub points: Vec<Vec<f64>>,
    pub terminal_reason: TerminalReason,
}

/// RK4 integration of the replicator flow in `chart`, sampled every step.
///
/// Runs to `t_max` unless the state leaves the chart or a coordinate of `π`
/// falls below [`STATE_FLOOR`], which ends the run with `LeftDomain`.
pub fn integrate_replicator(
    fit: &Fitness,
    chart: Chart,
    start: &SimplexPoint,
    dt: f64,
    t_max: f64,
) -> Result<ReplicatorTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidStep(dt));
    }
    require_interior(start)?;
    let mut traj = ReplicatorTrajectory {
        chart,
        times: vec![0.0],
        states: vec![chart.from_point(start)],
        points: vec![start.probs().to_vec()],
        terminal_reason: TerminalReason::MaxSteps,
    };
    let steps = (t_max / dt + 1e-9).floor() as u64;
    let n = fit.dim();
    let mut y = traj.states[0].clone();
    for k in 1..=steps {
        y = rk4_step(|x| replicator_in_chart(fit, chart, x).unwrap_or_else(|_| vec![f64::NAN; n]), &y, dt);
        match chart.to_point(&y) {
            Ok(p) if p.probs().iter().all(|&x| x >= STATE_FLOOR) => {
                traj.times.push(k as f64 * dt);
                traj.states.push(y.clone());
                traj.points.push(p.probs().to_vec());
            }
            _ => {
                traj.terminal_reason = TerminalReason::LeftDomain;
                break;
            }
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Serialize)]
pub struct LvTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 2]>,
    pub conserved: Vec<f64>,
}

impl LvTrajectory {
    /// `max |C(t) − C(0)|`.
    pub fn conserved_drift(&self) -> f64 {
        let c0 = self.conserved[0];
        self.conserved.iter().map(|c| (c - c0).abs()).fold(0.0, f64::max)
    }
}

/// RK4 integration of the rescaled LV system.
pub fn integrate_lv(params: &LvParams, z0: [f64; 2], dt: f64, t_max: f64) -> Result<LvTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidStep(dt));
    }
    let mut traj = LvTrajectory { times: vec![0.0], states: vec![z0], conserved: vec![lv_conserved(params, z0)?] };
    let steps = (t_max / dt + 1e-9).floor() as u64;
    let mut z = z0.to_vec();
    for k in 1..=steps {
        z = rk4_step(|x| lv_field(params, [x[0], x[1]]).map(|v| v.to_vec()).unwrap_or(vec![f64::NAN; 2]), &z, dt);
        let state = [z[0], z[1]];
        traj.conserved.push(lv_conserved(params, state)?);
        traj.times.push(k as f64 * dt);
        traj.states.push(state);
    }
    Ok(traj)
}

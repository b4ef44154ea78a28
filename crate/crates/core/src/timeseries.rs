//! Velocity of a sequence of distributions compared with an index gradient.
//!
//! Consecutive distributions give the velocity estimate `v = π_{t+1}/π_t − 1`,
//! a centered random variable at `π_t`. It is compared with the Riemannian
//! gradient of the index at `π_t` through `⟨u, v⟩_π = E_π[uv]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::Index;
use crate::natgrad::{cubic_natgrad_n2, natural_gradient};
use crate::simplex::{point_to_eta, SimplexPoint, TangentVector};

/// Replacement value for zero probabilities in ingested series.
pub const ZERO_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DistributionSeries {
    pub labels: Vec<String>,
    pub points: Vec<SimplexPoint>,
    /// Whether the row had zeros floored to [`ZERO_FLOOR`].
    pub floored: Vec<bool>,
}

impl DistributionSeries {
    /// Validates rows of probabilities, flooring zero entries.
    ///
    /// Each row must be nonnegative, sum to 1 up to round-off and have the
    /// same length as the others.
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), got: labels.len() });
        }
        if rows.len() < 2 {
            return Err(Error::InvalidInput(format!("a series needs at least 2 rows, got {}", rows.len())));
        }
        let width = rows[0].len();
        let mut points = Vec::with_capacity(rows.len());
        let mut floored = Vec::with_capacity(rows.len());
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch { expected: width, got: row.len() });
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidInput(format!("row {k} has a negative or non-finite entry")));
            }
            let has_zero = row.contains(&0.0);
            let row = if has_zero {
                let raised: Vec<f64> = row.iter().map(|&p| p.max(ZERO_FLOOR)).collect();
                let total: f64 = raised.iter().sum();
                if (total - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidInput(format!("row {k} sums to {total}, not 1")));
                }
                raised.iter().map(|p| p / total).collect()
            } else {
                row
            };
            points.push(SimplexPoint::new(row)?);
            floored.push(has_zero);
        }
        Ok(Self { labels, points, floored })
    }

    pub fn from_points(points: Vec<SimplexPoint>) -> Result<Self> {
        let labels = (0..points.len()).map(|k| k.to_string()).collect();
        Self::from_rows(labels, points.into_iter().map(|p| p.probs().to_vec()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `vₓ = p_to(x) / p_from(x) − 1`, based at `p_from`.
pub fn estimate_velocity(p_from: &SimplexPoint, p_to: &SimplexPoint) -> Result<TangentVector> {
    if p_from.n() != p_to.n() {
        return Err(Error::DimensionMismatch { expected: p_from.n(), got: p_to.n() });
    }
    let values = p_from.probs().iter().zip(p_to.probs()).map(|(a, b)| b / a - 1.0).collect();
    TangentVector::new(values, p_from.clone())
}

/// The index gradient at `p` as a centered random variable, `Σⱼ gⱼ Dⱼπ` with
/// `g` the natural gradient in `η`-coordinates.
pub fn gradient_tangent(index: &Index, p: &SimplexPoint) -> Result<TangentVector> {
    let eta = point_to_eta(p);
    let g = match index {
        Index::Pol => natural_gradient(&index.grad_eta(&eta)?, &eta)?,
        Index::Cubic(k) => cubic_natgrad_n2(k, &eta)?.to_vec(),
    };
    TangentVector::from_eta_components(&g, p.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alignment {
    /// `E_π[v·g]`.
    pub score: f64,
    /// `score / (‖v‖ ‖g‖)`; `None` when either vector is zero.
    pub cosine: Option<f64>,
}

pub fn alignment(v: &TangentVector, grad: &TangentVector) -> Result<Alignment> {
    if v.base() != grad.base() {
        return Err(Error::InvalidInput("tangent vectors are based at different points".into()));
    }
    let score = v.inner(grad);
    let norms = v.norm() * grad.norm();
    let cosine = (norms > 0.0).then(|| (score / norms).clamp(-1.0, 1.0));
    Ok(Alignment { score, cosine })
}

/// Cosine with an explicit error for zero vectors.
pub fn cosine(v: &TangentVector, grad: &TangentVector) -> Result<f64> {
    alignment(v, grad)?.cosine.ok_or(Error::ZeroVector)
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub from: String,
    pub to: String,
    pub value_from: f64,
    pub value_to: f64,
    pub delta: f64,
    pub velocity: Vec<f64>,
    pub score: f64,
    pub cosine: Option<f64>,
    pub floored: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VelocityIndexReport {
    pub index: String,
    pub steps: Vec<StepReport>,
}

pub fn analyze_series(series: &DistributionSeries, index: &Index) -> Result<VelocityIndexReport> {
    let mut steps = Vec::with_capacity(series.len().saturating_sub(1));
    for k in 0..series.len().saturating_sub(1) {
        let (a, b) = (&series.points[k], &series.points[k + 1]);
        let v = estimate_velocity(a, b)?;
        let g = gradient_tangent(index, a)?;
        let al = alignment(&v, &g)?;
        let value_from = index.value_probs(a.probs())?;
        let value_to = index.value_probs(b.probs())?;
        steps.push(StepReport {
            from: series.labels[k].clone(),
            to: series.labels[k + 1].clone(),
            value_from,
            value_to,
            delta: value_to - value_from,
            velocity: v.values().to_vec(),
            score: al.score,
            cosine: al.cosine,
            floored: series.floored[k] || series.floored[k + 1],
        });
    }
    Ok(VelocityIndexReport { index: index.label(), steps })
}

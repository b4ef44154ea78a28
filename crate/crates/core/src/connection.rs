//! Covariant derivative of vector fields along a curve of distributions.
//!
//! A field along a path `t ↦ η(t)` is given by its components `F(t)` in the
//! coordinate score basis. With `⟨F, G⟩ = FᵗI(η)G`, the operator
//! `DF = dF/dt + ½ I⁻¹ (dI/dt) F` satisfies
//! `d/dt ⟨F, G⟩ = ⟨DF, G⟩ + ⟨F, DG⟩`.
//!
//! Every derivative is a central difference with step `h`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fisher::{covariance_matrix, fisher_eta};
use crate::simplex::{EtaCoords, SimplexPoint, TangentVector};

type PathFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// A vector field along a path in `η`-coordinates.
#[derive(Clone)]
pub struct FramedField {
    path: Arc<PathFn>,
    components: Arc<PathFn>,
}

impl fmt::Debug for FramedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FramedField").finish_non_exhaustive()
    }
}

impl FramedField {
    pub fn new(
        path: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        components: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { path: Arc::new(path), components: Arc::new(components) }
    }

    /// Another field along the same path.
    pub fn with_components(&self, components: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self { path: Arc::clone(&self.path), components: Arc::new(components) }
    }

    pub fn point(&self, t: f64) -> Result<EtaCoords> {
        EtaCoords::new((self.path)(t))
    }

    pub fn components(&self, t: f64) -> Result<Vec<f64>> {
        let c = (self.components)(t);
        let n = (self.path)(t).len();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.len() });
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite field components {c:?} at t = {t}")));
        }
        Ok(c)
    }

    fn metric(&self, t: f64) -> Result<DMatrix<f64>> {
        Ok(fisher_eta(&self.point(t)?)?.entries)
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep(h))
    }
}

/// `dI(η(t))/dt` by central differences.
pub fn metric_rate(field: &FramedField, t: f64, h: f64) -> Result<DMatrix<f64>> {
    check_step(h)?;
    Ok((field.metric(t + h)? - field.metric(t - h)?) / (2.0 * h))
}

/// `½ I⁻¹ (dI/dt) F`, the part of [`metric_derivative`] beyond `dF/dt`.
pub fn connection_term(field: &FramedField, t: f64, h: f64) -> Result<Vec<f64>> {
    let eta = field.point(t)?;
    let inv = covariance_matrix(eta.as_slice());
    let f = DVector::from_vec(field.components(t)?);
    Ok((inv * metric_rate(field, t, h)? * f * 0.5).iter().copied().collect())
}

/// `dF/dt + ½ I⁻¹ (dI/dt) F`.
pub fn metric_derivative(field: &FramedField, t: f64, h: f64) -> Result<Vec<f64>> {
    check_step(h)?;
    let (fp, fm) = (field.components(t + h)?, field.components(t - h)?);
    let correction = connection_term(field, t, h)?;
    Ok(fp.iter().zip(&fm).zip(&correction).map(|((a, b), c)| (a - b) / (2.0 * h) + c).collect())
}

/// `FᵗI(η(t))G`.
pub fn covariance_along_path(f: &FramedField, g: &FramedField, t: f64) -> Result<f64> {
    let (fv, gv) = (f.components(t)?, g.components(t)?);
    pair(&f.metric(t)?, &fv, &gv)
}

fn pair(metric: &DMatrix<f64>, u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != metric.nrows() || v.len() != metric.nrows() {
        return Err(Error::DimensionMismatch { expected: metric.nrows(), got: u.len().max(v.len()) });
    }
    Ok((0..u.len()).map(|i| (0..v.len()).map(|j| u[i] * metric[(i, j)] * v[j]).sum::<f64>()).sum())
}

/// Both sides of the compatibility identity at `t`:
/// `(d/dt ⟨F, G⟩, ⟨DF, G⟩ + ⟨F, DG⟩)`.
pub fn compatibility_sides(f: &FramedField, g: &FramedField, t: f64, h: f64) -> Result<(f64, f64)> {
    check_step(h)?;
    let lhs = (covariance_along_path(f, g, t + h)? - covariance_along_path(f, g, t - h)?) / (2.0 * h);
    let metric = f.metric(t)?;
    let rhs = pair(&metric, &metric_derivative(f, t, h)?, &g.components(t)?)?
        + pair(&metric, &f.components(t)?, &metric_derivative(g, t, h)?)?;
    Ok((lhs, rhs))
}

/// Fisher geodesic from `u.base()` with initial score `u`, evaluated at `t`.
///
/// Under `π ↦ √π` the Fisher metric is four times the round metric of the
/// unit sphere, so geodesics are great circles there. Returns `NotInterior`
/// once the curve reaches the border.
pub fn geodesic(u: &TangentVector, t: f64) -> Result<SimplexPoint> {
    let p = u.base().probs();
    let s: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    let ds: Vec<f64> = s.iter().zip(u.values()).map(|(si, ui)| 0.5 * si * ui).collect();
    let w = ds.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (c, k) = if w == 0.0 { (1.0, t) } else { ((w * t).cos(), (w * t).sin() / w) };
    let root: Vec<f64> = s.iter().zip(&ds).map(|(si, di)| si * c + di * k).collect();
    if root.iter().any(|r| *r <= 0.0) {
        return Err(Error::NotInterior(format!("geodesic leaves the open simplex before t = {t}")));
    }
    SimplexPoint::new(root.iter().map(|r| r * r).collect())
}

//! Points of the open probability simplex and its coordinate charts.
//!
//! A distribution on the categories `0..=n` is a [`SimplexPoint`]. Three charts
//! parametrize the open simplex by `n` real numbers, always dropping category 0:
//!
//! * solid simplex `η`: `π = (1 − Σηⱼ, η₁, …, ηₙ)` ([`EtaCoords`]),
//! * exponential family `θ`: `πⱼ ∝ e^{θⱼ}`, `π₀ ∝ 1` ([`ThetaCoords`]),
//! * projective `ξ`: `ξⱼ = πⱼ / π₀` ([`ProjectiveCoords`]).
//!
//! Tangent vectors at `π` are `π`-centered random variables on `0..=n`
//! ([`TangentVector`]) with inner product `⟨u, v⟩_π = E_π[uv]`.

use crate::error::{Error, Result};

/// Smallest coordinate value a point may have and still count as interior.
pub const INTERIOR_TOL: f64 = 1e-12;
/// Inputs whose total mass is off by at most this much are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Allowed `|E_π[U]|` for a tangent vector.
pub const CENTERING_TOL: f64 = 1e-10;

/// A strictly positive probability vector on `n + 1` categories.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    probs: Vec<f64>,
}

impl SimplexPoint {
    /// Builds a point, renormalizing small round-off in the total mass.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a simplex point needs at least 2 categories, got {}",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite probability in {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidInput(format!("probabilities sum to {total}, not 1")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p / total).collect();
        if probs.iter().any(|&p| p < INTERIOR_TOL) {
            return Err(Error::NotInterior(format!("{probs:?}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        let k = n + 1;
        Self { probs: vec![1.0 / k as f64; k] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of categories minus one.
    pub fn n(&self) -> usize {
        self.probs.len() - 1
    }

    /// `E_π[u]`.
    pub fn expect(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.probs.len());
        self.probs.iter().zip(u).map(|(p, x)| p * x).sum()
    }

    /// `⟨u, v⟩_π = E_π[uv]`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.probs.iter().zip(u.iter().zip(v)).map(|(p, (a, b))| p * a * b).sum()
    }
}

/// Solid-simplex coordinates `η₁..ηₙ`.
///
/// Interior values satisfy `ηⱼ > 0`, `Σηⱼ < 1`. Values built with
/// [`EtaCoords::extended`] may be anywhere in `ℝⁿ`; the polynomial fields are
/// defined there by continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCoords {
    eta: Vec<f64>,
    extended: bool,
}

impl EtaCoords {
    /// Interior coordinates; rejects points on or outside the border.
    pub fn new(eta: Vec<f64>) -> Result<Self> {
        let coords = Self { eta, extended: false };
        if coords.eta.is_empty() || coords.eta.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("bad eta {:?}", coords.eta)));
        }
        if !coords.is_interior() {
            return Err(Error::NotInterior(format!("eta = {:?}", coords.eta)));
        }
        Ok(coords)
    }

    /// Coordinates anywhere in `ℝⁿ`, for border and extension analysis.
    pub fn extended(eta: Vec<f64>) -> Self {
        Self { eta, extended: true }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.eta
    }

    pub fn n(&self) -> usize {
        self.eta.len()
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Mass of category 0, `1 − Σηⱼ`.
    pub fn residual_mass(&self) -> f64 {
        1.0 - self.eta.iter().sum::<f64>()
    }

    pub fn is_interior(&self) -> bool {
        self.eta.iter().all(|&x| x >= INTERIOR_TOL) && self.residual_mass() >= INTERIOR_TOL
    }

    /// Inside the closed solid simplex, up to `tol`.
    pub fn in_closed_simplex(&self, tol: f64) -> bool {
        self.eta.iter().all(|&x| x >= -tol) && self.residual_mass() >= -tol
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::NotInterior(format!("eta = {:?}", self.eta)))
        }
    }
}

/// Natural parameters of the exponential family with statistics `Xⱼ = (X = j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoords {
    theta: Vec<f64>,
}

impl ThetaCoords {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() || theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("theta must be finite, got {theta:?}")));
        }
        Ok(Self { theta })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }
}

/// Projective coordinates `ξⱼ = πⱼ / π₀ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveCoords {
    xi: Vec<f64>,
}

impl ProjectiveCoords {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() || xi.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::NotInterior(format!("xi must be positive, got {xi:?}")));
        }
        Ok(Self { xi })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.xi
    }
}

/// A centered random variable at a base point, i.e. an element of `B_π`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    values: Vec<f64>,
    base: SimplexPoint,
}

impl TangentVector {
    /// Wraps `values`, checking that they are centered at `base`.
    pub fn new(values: Vec<f64>, base: SimplexPoint) -> Result<Self> {
        check_len(base.probs.len(), values.len())?;
        let mean = base.expect(&values);
        if mean.abs() > CENTERING_TOL {
            return Err(Error::InvalidInput(format!("tangent vector has mean {mean:e} at its base point")));
        }
        Ok(Self { values, base })
    }

    /// Subtracts `E_base[values]`, projecting onto `B_base`.
    pub fn centered(mut values: Vec<f64>, base: SimplexPoint) -> Result<Self> {
        check_len(base.probs.len(), values.len())?;
        let mean = base.expect(&values);
        values.iter_mut().for_each(|v| *v -= mean);
        Ok(Self { values, base })
    }

    pub fn zero(base: SimplexPoint) -> Self {
        Self { values: vec![0.0; base.probs.len()], base }
    }

    /// `Σⱼ gⱼ Dⱼπ` where `Dⱼπ = ((X = j) − (X = 0)) / π` is the score of the
    /// `j`-th solid-simplex coordinate curve.
    pub fn from_eta_components(components: &[f64], base: SimplexPoint) -> Result<Self> {
        check_len(base.n(), components.len())?;
        let p = base.probs();
        let mut values = Vec::with_capacity(p.len());
        values.push(-components.iter().sum::<f64>() / p[0]);
        values.extend(components.iter().zip(&p[1..]).map(|(g, pj)| g / pj));
        Ok(Self { values, base })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> &SimplexPoint {
        &self.base
    }

    pub fn mean(&self) -> f64 {
        self.base.expect(&self.values)
    }

    pub fn inner(&self, other: &TangentVector) -> f64 {
        self.base.inner(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `(1 − Σηⱼ, η₁, …, ηₙ)`.
pub fn eta_to_point(eta: &EtaCoords) -> Result<SimplexPoint> {
    eta.require_interior()?;
    let mut probs = Vec::with_capacity(eta.n() + 1);
    probs.push(eta.residual_mass());
    probs.extend_from_slice(eta.as_slice());
    Ok(SimplexPoint { probs })
}

/// Drops category 0. The result is marked interior.
pub fn point_to_eta(p: &SimplexPoint) -> EtaCoords {
    EtaCoords { eta: p.probs[1..].to_vec(), extended: false }
}

/// `ηⱼ = e^{θⱼ} / (1 + Σₖ e^{θₖ})`, evaluated with a shifted exponent.
pub fn theta_to_eta(theta: &ThetaCoords) -> EtaCoords {
    let shift = theta.theta.iter().copied().fold(0.0_f64, f64::max);
    let weights: Vec<f64> = theta.theta.iter().map(|t| (t - shift).exp()).collect();
    let denom = (-shift).exp() + weights.iter().sum::<f64>();
    EtaCoords { eta: weights.into_iter().map(|w| w / denom).collect(), extended: false }
}

/// `θⱼ = log(ηⱼ / (1 − Σηₖ))`.
pub fn eta_to_theta(eta: &EtaCoords) -> Result<ThetaCoords> {
    eta.require_interior()?;
    let log_rest = eta.residual_mass().ln();
    Ok(ThetaCoords { theta: eta.eta.iter().map(|x| x.ln() - log_rest).collect() })
}

pub fn theta_to_point(theta: &ThetaCoords) -> SimplexPoint {
    let eta = theta_to_eta(theta);
    let mut probs = Vec::with_capacity(eta.n() + 1);
    probs.push(eta.residual_mass());
    probs.extend(eta.eta);
    SimplexPoint { probs }
}

pub fn point_to_theta(p: &SimplexPoint) -> ThetaCoords {
    let log0 = p.probs[0].ln();
    ThetaCoords { theta: p.probs[1..].iter().map(|x| x.ln() - log0).collect() }
}

/// `π₀ = (1 + Σξ)⁻¹`, `πⱼ = ξⱼ π₀`.
pub fn projective_to_point(xi: &ProjectiveCoords) -> SimplexPoint {
    let p0 = 1.0 / (1.0 + xi.xi.iter().sum::<f64>());
    let mut probs = Vec::with_capacity(xi.xi.len() + 1);
    probs.push(p0);
    probs.extend(xi.xi.iter().map(|x| x * p0));
    SimplexPoint { probs }
}

pub fn projective_to_eta(xi: &ProjectiveCoords) -> EtaCoords {
    point_to_eta(&projective_to_point(xi))
}

pub fn eta_to_projective(eta: &EtaCoords) -> Result<ProjectiveCoords> {
    eta.require_interior()?;
    let rest = eta.residual_mass();
    Ok(ProjectiveCoords { xi: eta.eta.iter().map(|x| x / rest).collect() })
}

pub fn point_to_projective(p: &SimplexPoint) -> ProjectiveCoords {
    ProjectiveCoords { xi: p.probs[1..].iter().map(|x| x / p.probs[0]).collect() }
}

/// Forward-difference score `(p_after − p_before) / (dt · p_before)`, based at
/// `p_before` and recentered there.
pub fn score_of_path(before: &SimplexPoint, after: &SimplexPoint, dt: f64) -> Result<TangentVector> {
    check_len(before.probs.len(), after.probs.len())?;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidStep(dt));
    }
    let values = before.probs.iter().zip(&after.probs).map(|(p, q)| (q - p) / (dt * p)).collect();
    TangentVector::centered(values, before.clone())
}

/// Central-difference score at `at`, from samples at `t − dt` and `t + dt`.
pub fn score_central(before: &SimplexPoint, at: &SimplexPoint, after: &SimplexPoint, dt: f64) -> Result<TangentVector> {
    check_len(at.probs.len(), before.probs.len())?;
    check_len(at.probs.len(), after.probs.len())?;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidStep(dt));
    }
    let values = at
        .probs
        .iter()
        .zip(before.probs.iter().zip(&after.probs))
        .map(|(p, (a, b))| (b - a) / (2.0 * dt * p))
        .collect();
    TangentVector::centered(values, at.clone())
}

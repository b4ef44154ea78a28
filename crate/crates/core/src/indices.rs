//! The polarization index and the symmetric cubic family it belongs to.
//!
//! `POL(π) = Σₓ πₓ²(1 − πₓ)`; three times this is the probability that exactly
//! two of three independent draws from `π` coincide.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{EtaCoords, SimplexPoint};

/// Tolerance for the equality and strict-inequality coefficient conditions.
pub const CONDITION_TOL: f64 = 1e-12;

pub fn pol(p: &SimplexPoint) -> f64 {
    pol_raw(p.probs())
}

/// `Σ πₓ²(1 − πₓ)` for any vector, including border points of the simplex.
pub fn pol_raw(probs: &[f64]) -> f64 {
    probs.iter().map(|p| p * p * (1.0 - p)).sum()
}

/// POL in solid-simplex coordinates, `(1 − S)²S + Σηⱼ²(1 − ηⱼ)` with `S = Σηⱼ`.
/// Polynomial, so defined on all of `ℝⁿ`.
pub fn pol_eta(eta: &EtaCoords) -> f64 {
    let v = eta.as_slice();
    let s: f64 = v.iter().sum();
    (1.0 - s) * (1.0 - s) * s + pol_raw(v)
}

/// Euclidean gradient of [`pol_eta`].
pub fn grad_pol_eta(eta: &EtaCoords) -> Vec<f64> {
    match *eta.as_slice() {
        [e1, e2] => vec![
            6.0 * e1 * e2 + 3.0 * e2 * e2 - 2.0 * e1 - 4.0 * e2 + 1.0,
            6.0 * e2 * e1 + 3.0 * e1 * e1 - 2.0 * e2 - 4.0 * e1 + 1.0,
        ],
        ref v => {
            let s: f64 = v.iter().sum();
            let common = (1.0 - s) * (1.0 - s) - 2.0 * (1.0 - s) * s;
            v.iter().map(|x| common + 2.0 * x - 3.0 * x * x).collect()
        }
    }
}

/// Coefficients of the symmetric cubic
/// `a Σπᵢ³ + b Σ_{i≠j} πᵢ²πⱼ + c π₀π₁π₂ + d Σπᵢ² + e Σ_{i<j} πᵢπⱼ` on three categories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicIndexCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl CubicIndexCoeffs {
    pub const POL: Self = Self { a: 0.0, b: 1.0, c: 0.0, d: 0.0, e: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        Self { a, b, c, d, e }
    }

    pub fn classify(&self) -> CubicConditions {
        cubic_conditions(self)
    }

    /// Coefficients of `f̃(η)` as `[η₁²η₂ & η₁η₂², η₁² & η₂², η₁η₂, η₁ & η₂, 1]`.
    fn eta_coefficients(&self) -> [f64; 5] {
        let Self { a, b, c, d, e } = *self;
        [
            -3.0 * a + 3.0 * b - c,
            3.0 * a - b + 2.0 * d - e,
            6.0 * a - 4.0 * b + c + 2.0 * d - e,
            -3.0 * a + b - 2.0 * d + e,
            a + d,
        ]
    }
}

/// The symmetric cubic evaluated directly on a 3-category probability vector.
pub fn cubic_index_point(coeffs: &CubicIndexCoeffs, probs: &[f64]) -> Result<f64> {
    let [p0, p1, p2] = *probs else {
        return Err(Error::UnsupportedDimension { expected: 2, got: probs.len().saturating_sub(1) });
    };
    let CubicIndexCoeffs { a, b, c, d, e } = *coeffs;
    Ok(a * (p0.powi(3) + p1.powi(3) + p2.powi(3))
        + b * (p0 * p0 * p1 + p0 * p1 * p1 + p0 * p0 * p2 + p0 * p2 * p2 + p1 * p1 * p2 + p1 * p2 * p2)
        + c * p0 * p1 * p2
        + d * (p0 * p0 + p1 * p1 + p2 * p2)
        + e * (p0 * p1 + p0 * p2 + p1 * p2))
}

fn require_n2(eta: &EtaCoords) -> Result<(f64, f64)> {
    match *eta.as_slice() {
        [e1, e2] => Ok((e1, e2)),
        ref v => Err(Error::UnsupportedDimension { expected: 2, got: v.len() }),
    }
}

/// `f̃(η₁, η₂)`, the cubic in solid-simplex coordinates.
pub fn cubic_index_eta(coeffs: &CubicIndexCoeffs, eta: &EtaCoords) -> Result<f64> {
    let (x, y) = require_n2(eta)?;
    let [k3, k2, kxy, k1, k0] = coeffs.eta_coefficients();
    Ok(k3 * (x * x * y + x * y * y) + k2 * (x * x + y * y) + kxy * x * y + k1 * (x + y) + k0)
}

/// Euclidean gradient of [`cubic_index_eta`].
pub fn grad_cubic_eta(coeffs: &CubicIndexCoeffs, eta: &EtaCoords) -> Result<Vec<f64>> {
    let (x, y) = require_n2(eta)?;
    let [k3, k2, kxy, k1, _] = coeffs.eta_coefficients();
    let partial = |u: f64, w: f64| k3 * (2.0 * u * w + w * w) + 2.0 * k2 * u + kxy * w + k1;
    Ok(vec![partial(x, y), partial(y, x)])
}

/// Outcome of the two coefficient conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicConditions {
    /// `6a − c + 6d − 3e`; must vanish for the uniform point to be non-definite.
    pub nondefinite_value: f64,
    /// `3a − b + 2d − e`; negative means repelling vertices and attracting midpoints.
    pub attracting_value: f64,
    pub nondefinite: bool,
    pub attracting: bool,
}

impl CubicConditions {
    pub fn admissible(&self) -> bool {
        self.nondefinite && self.attracting
    }
}

pub fn cubic_conditions(coeffs: &CubicIndexCoeffs) -> CubicConditions {
    let CubicIndexCoeffs { a, b, c, d, e } = *coeffs;
    let nondefinite_value = 6.0 * a - c + 6.0 * d - 3.0 * e;
    let attracting_value = 3.0 * a - b + 2.0 * d - e;
    CubicConditions {
        nondefinite_value,
        attracting_value,
        nondefinite: nondefinite_value.abs() <= CONDITION_TOL,
        attracting: attracting_value < -CONDITION_TOL,
    }
}

/// An index whose natural-gradient flow can be studied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Index {
    Pol,
    Cubic(CubicIndexCoeffs),
}

impl Index {
    pub fn label(&self) -> String {
        match self {
            Index::Pol => "pol".to_string(),
            Index::Cubic(k) => format!("cubic:{},{},{},{},{}", k.a, k.b, k.c, k.d, k.e),
        }
    }

    pub fn value_eta(&self, eta: &EtaCoords) -> Result<f64> {
        match self {
            Index::Pol => Ok(pol_eta(eta)),
            Index::Cubic(k) => cubic_index_eta(k, eta),
        }
    }

    pub fn grad_eta(&self, eta: &EtaCoords) -> Result<Vec<f64>> {
        match self {
            Index::Pol => Ok(grad_pol_eta(eta)),
            Index::Cubic(k) => grad_cubic_eta(k, eta),
        }
    }

    /// Value on a probability vector, border points included.
    pub fn value_probs(&self, probs: &[f64]) -> Result<f64> {
        match self {
            Index::Pol => Ok(pol_raw(probs)),
            Index::Cubic(k) => cubic_index_point(k, probs),
        }
    }
}

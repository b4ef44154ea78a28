//! Natural-gradient vector fields on the solid simplex.
//!
//! The natural gradient of an index is its Euclidean gradient in `η`
//! multiplied on the right by `I(η)⁻¹ = diag(η) − ηηᵗ`. Since the inverse is a
//! polynomial, every field here is evaluated on all of `ℝⁿ`; inside the
//! simplex it coincides with the probabilistic object.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::indices::{grad_pol_eta, CubicIndexCoeffs, Index};
use crate::simplex::EtaCoords;

type Evaluator = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type PotentialFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A field `ℝⁿ → ℝⁿ` in solid-simplex coordinates, optionally carrying its
/// closed-form Jacobian and the index it is the gradient of.
#[derive(Clone)]
pub struct VectorField {
    label: String,
    dim: usize,
    eval: Arc<Evaluator>,
    jacobian: Option<Arc<JacobianFn>>,
    potential: Option<Arc<PotentialFn>>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("closed_form_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl VectorField {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), dim, eval: Arc::new(eval), jacobian: None, potential: None }
    }

    pub fn with_jacobian(mut self, jacobian: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    pub fn with_potential(mut self, potential: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.potential = Some(Arc::new(potential));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, eta: &[f64]) -> Vec<f64> {
        debug_assert_eq!(eta.len(), self.dim);
        (self.eval)(eta)
    }

    pub fn eval_at(&self, eta: &EtaCoords) -> Vec<f64> {
        self.eval(eta.as_slice())
    }

    /// Value of the attached index, if any.
    pub fn potential(&self, eta: &[f64]) -> Option<f64> {
        self.potential.as_ref().map(|p| p(eta))
    }

    pub fn has_closed_form_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Closed-form Jacobian when known, central differences otherwise.
    pub fn jacobian(&self, eta: &[f64]) -> DMatrix<f64> {
        match &self.jacobian {
            Some(j) => j(eta),
            None => jacobian_fd(self, eta, default_step(eta)),
        }
    }

    /// `F(η) = Aη`.
    pub fn linear(matrix: DMatrix<f64>) -> Self {
        let dim = matrix.nrows();
        let m = matrix.clone();
        Self::new("linear", dim, move |x| (&m * DVector::from_column_slice(x)).as_slice().to_vec())
            .with_jacobian(move |_| matrix.clone())
    }

    /// Natural gradient of `index` in dimension `n`.
    pub fn natural_gradient_of(index: Index, n: usize) -> Result<Self> {
        let field = match index {
            Index::Pol if n == 2 => Self::new("natgrad:pol", 2, |x| natgrad_pol_n2_slice(x[0], x[1]).to_vec())
                .with_jacobian(|x| jacobian_natgrad_pol_n2_slice(x[0], x[1])),
            Index::Pol => Self::new("natgrad:pol", n, |x| {
                natural_gradient_slice(&grad_pol_eta(&EtaCoords::extended(x.to_vec())), x)
            }),
            Index::Cubic(k) if n == 2 => Self::new(format!("natgrad:{}", index.label()), 2, move |x| {
                cubic_natgrad_n2_slice(&k, x[0], x[1]).to_vec()
            }),
            Index::Cubic(_) => return Err(Error::UnsupportedDimension { expected: 2, got: n }),
        };
        Ok(field.with_potential(potential_of(index)))
    }

    /// Euclidean gradient of `index`, without the `I⁻¹` correction.
    pub fn euclidean_gradient_of(index: Index, n: usize) -> Result<Self> {
        if matches!(index, Index::Cubic(_)) && n != 2 {
            return Err(Error::UnsupportedDimension { expected: 2, got: n });
        }
        Ok(Self::new(format!("grad:{}", index.label()), n, move |x| {
            index.grad_eta(&EtaCoords::extended(x.to_vec())).expect("dimension checked")
        })
        .with_potential(potential_of(index)))
    }
}

fn potential_of(index: Index) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
    move |x| index.value_eta(&EtaCoords::extended(x.to_vec())).expect("dimension checked")
}

/// `grad · (diag(η) − ηηᵗ)`.
pub fn natural_gradient(grad: &[f64], eta: &EtaCoords) -> Result<Vec<f64>> {
    if grad.len() != eta.n() {
        return Err(Error::DimensionMismatch { expected: eta.n(), got: grad.len() });
    }
    Ok(natural_gradient_slice(grad, eta.as_slice()))
}

fn natural_gradient_slice(grad: &[f64], eta: &[f64]) -> Vec<f64> {
    let dot: f64 = grad.iter().zip(eta).map(|(g, e)| g * e).sum();
    grad.iter().zip(eta).map(|(g, e)| e * (g - dot)).collect()
}

fn require_n2(eta: &EtaCoords) -> Result<(f64, f64)> {
    match *eta.as_slice() {
        [x, y] => Ok((x, y)),
        ref v => Err(Error::UnsupportedDimension { expected: 2, got: v.len() }),
    }
}

/// The explicit degree-4 natural gradient of POL for three categories.
pub fn natgrad_pol_n2(eta: &EtaCoords) -> Result<[f64; 2]> {
    let (x, y) = require_n2(eta)?;
    Ok(natgrad_pol_n2_slice(x, y))
}

fn natgrad_pol_n2_slice(x: f64, y: f64) -> [f64; 2] {
    // Component 2 is component 1 with the coordinates swapped; sharing the
    // expression keeps the field exactly symmetric in floating point.
    let component = |u: f64, w: f64| {
        let (u2, w2) = (u * u, w * w);
        -9.0 * u2 * u * w - 9.0 * u2 * w2 + 2.0 * u2 * u + 14.0 * u2 * w + 5.0 * u * w2 - 3.0 * u2 - 5.0 * u * w + u
    };
    [component(x, y), component(y, x)]
}

/// Closed-form Jacobian of [`natgrad_pol_n2`]; entry `(i, j)` is `∂Fᵢ/∂ηⱼ`.
pub fn jacobian_natgrad_pol_n2(eta: &EtaCoords) -> Result<DMatrix<f64>> {
    let (x, y) = require_n2(eta)?;
    Ok(jacobian_natgrad_pol_n2_slice(x, y))
}

fn jacobian_natgrad_pol_n2_slice(x: f64, y: f64) -> DMatrix<f64> {
    // ∂F₁/∂η₁ and ∂F₁/∂η₂; the second row follows by the swap symmetry.
    let diag = |u: f64, w: f64| {
        -27.0 * u * u * w - 18.0 * u * w * w + 6.0 * u * u + 28.0 * u * w + 5.0 * w * w - 6.0 * u - 5.0 * w + 1.0
    };
    let off = |u: f64, w: f64| -9.0 * u * u * u - 18.0 * u * u * w + 14.0 * u * u + 10.0 * u * w - 5.0 * u;
    DMatrix::from_row_slice(2, 2, &[diag(x, y), off(x, y), off(y, x), diag(y, x)])
}

/// Natural gradient of the symmetric cubic with coefficients `coeffs`.
pub fn cubic_natgrad_n2(coeffs: &CubicIndexCoeffs, eta: &EtaCoords) -> Result<[f64; 2]> {
    let (x, y) = require_n2(eta)?;
    Ok(cubic_natgrad_n2_slice(coeffs, x, y))
}

fn cubic_natgrad_n2_slice(k: &CubicIndexCoeffs, x: f64, y: f64) -> [f64; 2] {
    let CubicIndexCoeffs { a, b, c, d, e } = *k;
    let quartic = 9.0 * a - 9.0 * b + 3.0 * c;
    let cube = -6.0 * a + 2.0 * b - 4.0 * d + 2.0 * e;
    let sq_lin = -18.0 * a + 14.0 * b - 4.0 * c - 4.0 * d + 2.0 * e;
    let lin_sq = -9.0 * a + 5.0 * b - c - 4.0 * d + 2.0 * e;
    let sq = 9.0 * a - 3.0 * b + 6.0 * d - 3.0 * e;
    let mixed = 9.0 * a - 5.0 * b + c + 4.0 * d - 2.0 * e;
    let lin = -3.0 * a + b - 2.0 * d + e;
    let component = |u: f64, w: f64| {
        quartic * u * u * u * w
            + quartic * u * u * w * w
            + cube * u * u * u
            + sq_lin * u * u * w
            + lin_sq * u * w * w
            + sq * u * u
            + mixed * u * w
            + lin * u
    };
    [component(x, y), component(y, x)]
}

/// Default central-difference step `ε^{1/3} · max(1, ‖η‖∞)`.
pub fn default_step(eta: &[f64]) -> f64 {
    let scale = eta.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    f64::EPSILON.cbrt() * scale
}

/// Central-difference Jacobian of `field` at `eta`.
pub fn jacobian_fd(field: &VectorField, eta: &[f64], h: f64) -> DMatrix<f64> {
    let n = eta.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut probe = eta.to_vec();
    for j in 0..n {
        probe[j] = eta[j] + h;
        let plus = field.eval(&probe);
        probe[j] = eta[j] - h;
        let minus = field.eval(&probe);
        probe[j] = eta[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    jac
}

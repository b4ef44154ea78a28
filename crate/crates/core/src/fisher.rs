//! Fisher information in solid-simplex coordinates.
//!
//! `I(η) = diag(η)⁻¹ + (1 − Σηⱼ)⁻¹ 𝟙𝟙ᵗ` has the polynomial inverse
//! `I(η)⁻¹ = diag(η) − ηηᵗ`, which stays meaningful on the border and outside
//! the simplex, where `I(η)` itself has poles.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::simplex::{theta_to_eta, EtaCoords, ThetaCoords};

/// Distance to a facet hyperplane below which a coordinate counts as on it.
pub const FACET_TOL: f64 = 1e-10;

/// A symmetric `n × n` matrix together with the point it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    pub entries: DMatrix<f64>,
    pub coords: EtaCoords,
}

impl FisherMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// `I(η)ⱼₕ = ηⱼ⁻¹·1{j = h} + (1 − Σηₖ)⁻¹`.
pub fn fisher_eta(eta: &EtaCoords) -> Result<FisherMatrix> {
    eta.require_interior()?;
    let v = eta.as_slice();
    let n = v.len();
    let rest = 1.0 / eta.residual_mass();
    let entries = DMatrix::from_fn(n, n, |j, h| if j == h { 1.0 / v[j] + rest } else { rest });
    Ok(FisherMatrix { entries, coords: eta.clone() })
}

/// `diag(η) − ηηᵗ`, valid for any real `η`.
pub fn fisher_inverse_eta(eta: &EtaCoords) -> FisherMatrix {
    FisherMatrix { entries: covariance_matrix(eta.as_slice()), coords: eta.clone() }
}

pub(crate) fn covariance_matrix(v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    DMatrix::from_fn(n, n, |j, h| if j == h { v[j] - v[j] * v[j] } else { -v[j] * v[h] })
}

/// `det(I(η)⁻¹) = (1 − Σηᵢ) Πηᵢ`.
pub fn fisher_inverse_det(eta: &EtaCoords) -> f64 {
    eta.residual_mass() * eta.as_slice().iter().product::<f64>()
}

/// Which facet of the solid simplex a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Facet {
    /// `ηᵢ = 0` (0-based `i`).
    Coordinate(usize),
    /// `Σηⱼ = 1`.
    Opposite,
}

#[derive(Debug, Clone)]
pub struct FacetRank {
    pub facet: Facet,
    pub rank: usize,
    /// Orthonormal columns spanning the column space of `I(η)⁻¹`.
    pub basis: DMatrix<f64>,
}

/// Locates `η` on the interior of a single facet, or returns `None`.
pub fn facet_of(eta: &EtaCoords) -> Option<Facet> {
    let v = eta.as_slice();
    let rest = eta.residual_mass();
    let on_zero: Vec<usize> = (0..v.len()).filter(|&i| v[i].abs() <= FACET_TOL).collect();
    let on_opposite = rest.abs() <= FACET_TOL;
    let strictly_inside = |x: f64| x > FACET_TOL && x < 1.0 - FACET_TOL;
    match (on_zero.as_slice(), on_opposite) {
        ([i], false) => {
            let others_ok = (0..v.len()).filter(|&j| j != *i).all(|j| strictly_inside(v[j]));
            (others_ok && rest > FACET_TOL).then_some(Facet::Coordinate(*i))
        }
        ([], true) => v.iter().all(|&x| strictly_inside(x)).then_some(Facet::Opposite),
        _ => None,
    }
}

/// Numerical rank of `singular` values with threshold `n·ε·σ_max`.
pub fn numerical_rank(singular: &[f64], n: usize) -> usize {
    let max = singular.iter().copied().fold(0.0, f64::max);
    let threshold = n as f64 * f64::EPSILON * max;
    singular.iter().filter(|&&s| s > threshold).count()
}

/// Rank of `I(η)⁻¹` on a facet, with a basis of its column space.
pub fn facet_rank(eta: &EtaCoords) -> Result<FacetRank> {
    let facet = facet_of(eta).ok_or(Error::NotOnFacet)?;
    let inv = covariance_matrix(eta.as_slice());
    let n = inv.nrows();
    let svd = inv.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let rank = numerical_rank(svd.singular_values.as_slice(), n);
    let cols: Vec<_> = order[..rank].iter().map(|&k| u.column(k).into_owned()).collect();
    let basis = DMatrix::from_columns(&cols);
    Ok(FacetRank { facet, rank, basis })
}

/// Max-norm of `(diag(η) − ηηᵗ)(diag(η)⁻¹ + (1 − |η|)⁻¹𝟙𝟙ᵗ) − Id`.
pub fn precision_identity_check(eta: &EtaCoords) -> Result<f64> {
    let precision = fisher_eta(eta)?.entries;
    let product = covariance_matrix(eta.as_slice()) * precision;
    let n = product.nrows();
    Ok((product - DMatrix::identity(n, n)).amax())
}

/// `I(θ) = diag(η(θ)) − η(θ)η(θ)ᵗ`, the covariance of the sufficient statistics.
pub fn fisher_theta(theta: &ThetaCoords) -> DMatrix<f64> {
    covariance_matrix(theta_to_eta(theta).as_slice())
}

/// `∂ᵢI(θ) = ηᵢ (diag(eᵢ − η) − (eᵢ − η)ηᵗ − η(eᵢ − η)ᵗ)` for a 0-based `i`.
pub fn d_fisher_d_theta(theta: &ThetaCoords, i: usize) -> Result<DMatrix<f64>> {
    let n = theta.n();
    if i >= n {
        return Err(Error::InvalidInput(format!("coordinate index {i} out of range for n = {n}")));
    }
    let eta = theta_to_eta(theta);
    let eta = eta.as_slice();
    let dir: Vec<f64> = (0..n).map(|k| f64::from(k == i) - eta[k]).collect();
    Ok(DMatrix::from_fn(n, n, |r, c| {
        let diag = if r == c { dir[r] } else { 0.0 };
        eta[i] * (diag - dir[r] * eta[c] - eta[r] * dir[c])
    }))
}

/// `I(θ)⁻¹ ∂ᵢI(θ)`, evaluated as the numerical product of its two factors.
pub fn inverse_times_derivative(theta: &ThetaCoords, i: usize) -> Result<DMatrix<f64>> {
    let precision = fisher_eta(&theta_to_eta(theta))?.entries;
    Ok(precision * d_fisher_d_theta(theta, i)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn eta(v: &[f64]) -> EtaCoords {
        EtaCoords::extended(v.to_vec())
    }

    #[test]
    fn uniform_fisher() {
        let i = fisher_eta(&EtaCoords::new(vec![1.0 / 3.0, 1.0 / 3.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(i.entries, DMatrix::from_row_slice(2, 2, &[6.0, 3.0, 3.0, 6.0]), epsilon = 1e-12);
        assert!(matches!(fisher_eta(&eta(&[0.5, 0.5])), Err(Error::NotInterior(_))));
    }

    #[test]
    fn inverse_on_vertices_and_midpoint() {
        for v in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] {
            assert_eq!(fisher_inverse_eta(&eta(&v)).entries.amax(), 0.0);
        }
        let m = fisher_inverse_eta(&eta(&[0.5, 0.5])).entries;
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]));
    }

    #[test]
    fn determinant_examples() {
        assert_abs_diff_eq!(fisher_inverse_det(&eta(&[1.0 / 3.0, 1.0 / 3.0])), 1.0 / 27.0, epsilon = 1e-16);
        assert_eq!(fisher_inverse_det(&eta(&[0.0, 0.4])), 0.0);
        assert_eq!(fisher_inverse_det(&eta(&[0.25, 0.75])), 0.0);
    }

    #[test]
    fn facet_ranks() {
        let r = facet_rank(&eta(&[0.0, 0.5])).unwrap();
        assert_eq!((r.facet, r.rank), (Facet::Coordinate(0), 1));
        assert!(r.basis[(0, 0)].abs() < 1e-12);

        let r = facet_rank(&eta(&[0.25, 0.75])).unwrap();
        assert_eq!((r.facet, r.rank), (Facet::Opposite, 1));
        assert_abs_diff_eq!(r.basis[(0, 0)], -r.basis[(1, 0)], epsilon = 1e-12);

        let r = facet_rank(&eta(&[0.0, 0.3, 0.4])).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.basis.row(0).amax() < 1e-12);

        assert!(matches!(facet_rank(&eta(&[0.2, 0.3])), Err(Error::NotOnFacet)));
        assert!(matches!(facet_rank(&eta(&[0.0, 0.0])), Err(Error::NotOnFacet)));
        assert!(matches!(facet_rank(&eta(&[0.0, 1.0])), Err(Error::NotOnFacet)));
    }

    #[test]
    fn precision_identity_at_uniform() {
        let r = precision_identity_check(&EtaCoords::new(vec![1.0 / 3.0, 1.0 / 3.0]).unwrap()).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn precision_identity_near_border() {
        let e = EtaCoords::new(vec![1e-6, 0.4, 0.3]).unwrap();
        assert!(precision_identity_check(&e).unwrap() <= 1e-6);
    }

    #[test]
    fn d_fisher_is_symmetric_and_matches_differences() {
        let theta = ThetaCoords::new(vec![0.0, 0.0]).unwrap();
        let h = 1e-5;
        for i in 0..2 {
            let d = d_fisher_d_theta(&theta, i).unwrap();
            assert_abs_diff_eq!(d.clone(), d.transpose(), epsilon = 1e-15);
            let shifted = |s: f64| {
                let mut t = theta.as_slice().to_vec();
                t[i] += s;
                fisher_theta(&ThetaCoords::new(t).unwrap())
            };
            let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            assert_abs_diff_eq!(d.clone(), fd, epsilon = 1e-8);
            assert_abs_diff_eq!(d.trace(), (shifted(h).trace() - shifted(-h).trace()) / (2.0 * h), epsilon = 1e-8);
        }
        assert!(d_fisher_d_theta(&theta, 2).is_err());
    }
}

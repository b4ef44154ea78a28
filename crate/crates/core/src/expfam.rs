//! Three independent draws from a distribution on `{0, 1, 2}` as an
//! exponential family with sufficient statistics `(T₁, T₂)`.
//!
//! `Tⱼ` counts how many of the draws equal `j`. POL times three is the
//! expectation of the indicator that exactly two draws coincide, and that
//! indicator depends on the draws only through `(T₁, T₂)`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{theta_to_eta, EtaCoords, ThetaCoords};

/// Number of draws.
pub const DRAWS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleRow {
    pub draws: [u8; 3],
    /// `(X=1, Y=1, Z=1)` as 0/1.
    pub ones: [u8; 3],
    /// `(X=2, Y=2, Z=2)` as 0/1.
    pub twos: [u8; 3],
    pub t1: u8,
    pub t2: u8,
    /// Exactly two of the three draws are equal.
    pub polarized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleSampleTable {
    pub rows: Vec<TripleRow>,
}

impl TripleSampleTable {
    pub fn polarized_count(&self) -> usize {
        self.rows.iter().filter(|r| r.polarized).count()
    }
}

/// All 27 outcomes; the first draw varies fastest.
pub fn build_triple_table() -> TripleSampleTable {
    let mut rows = Vec::with_capacity(27);
    for z in 0..3u8 {
        for y in 0..3u8 {
            for x in 0..3u8 {
                let draws = [x, y, z];
                let ones = draws.map(|d| u8::from(d == 1));
                let twos = draws.map(|d| u8::from(d == 2));
                let distinct = 1 + usize::from(y != x) + usize::from(z != x && z != y);
                rows.push(TripleRow {
                    draws,
                    ones,
                    twos,
                    t1: ones.iter().sum(),
                    t2: twos.iter().sum(),
                    polarized: distinct == 2,
                });
            }
        }
    }
    TripleSampleTable { rows }
}

/// Joint counts `f(t₁, t₂)` of the sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub f: [[u32; 4]; 4],
}

impl CountTable {
    pub fn get(&self, t1: usize, t2: usize) -> u32 {
        self.f[t1][t2]
    }

    pub fn total(&self) -> u32 {
        self.f.iter().flatten().sum()
    }
}

pub fn count_table() -> CountTable {
    let mut f = [[0u32; 4]; 4];
    for r in &build_triple_table().rows {
        f[r.t1 as usize][r.t2 as usize] += 1;
    }
    CountTable { f }
}

fn shared() -> &'static (CountTable, Vec<(usize, usize)>) {
    static TABLES: OnceLock<(CountTable, Vec<(usize, usize)>)> = OnceLock::new();
    TABLES.get_or_init(|| (count_table(), indicator_set()))
}

/// The `(t₁, t₂)` cells reached by polarized rows, sorted.
pub fn indicator_set() -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> =
        build_triple_table().rows.iter().filter(|r| r.polarized).map(|r| (r.t1 as usize, r.t2 as usize)).collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

/// Every `(t₁, t₂)` with `t₁ + t₂ ≤ 3`, row-major.
pub fn polytope_points() -> impl Iterator<Item = (usize, usize)> {
    (0..=DRAWS).flat_map(|t1| (0..=DRAWS - t1).map(move |t2| (t1, t2)))
}

/// `ψ(θ) = log(1 + Σ e^{θⱼ})`, computed with a shifted exponent.
pub fn psi(theta: &ThetaCoords) -> f64 {
    let m = theta.as_slice().iter().copied().fold(0.0, f64::max);
    let s: f64 = (-m).exp() + theta.as_slice().iter().map(|t| (t - m).exp()).sum::<f64>();
    m + s.ln()
}

/// `ψ(θ) − log(n + 1)`, the normalization that puts `θ = 0` at the uniform
/// distribution with zero cumulant. Induces the same probabilities as [`psi`].
pub fn psi_centered(theta: &ThetaCoords) -> f64 {
    psi(theta) - ((theta.n() + 1) as f64).ln()
}

/// `(E[T₁], E[T₂]) = 3∇ψ(θ)`.
pub fn expectation_params(theta: &ThetaCoords) -> Result<[f64; 2]> {
    let eta = theta_to_eta(require_n2(theta)?);
    let e = eta.as_slice();
    Ok([DRAWS as f64 * e[0], DRAWS as f64 * e[1]])
}

fn require_n2(theta: &ThetaCoords) -> Result<&ThetaCoords> {
    if theta.n() == 2 {
        Ok(theta)
    } else {
        Err(Error::UnsupportedDimension { expected: 2, got: theta.n() })
    }
}

/// `p_θ(t₁, t₂) = exp(θ₁t₁ + θ₂t₂ − 3ψ(θ)) f(t₁, t₂)`.
pub fn stat_probability_theta(theta: &ThetaCoords, t1: usize, t2: usize) -> Result<f64> {
    check_polytope(t1, t2)?;
    let th = require_n2(theta)?.as_slice();
    let f = shared().0.get(t1, t2) as f64;
    Ok((th[0] * t1 as f64 + th[1] * t2 as f64 - DRAWS as f64 * psi(theta)).exp() * f)
}

/// `E_θ[I(T₁, T₂)]`, which equals three times POL.
pub fn pol_expectation_theta(theta: &ThetaCoords) -> Result<f64> {
    require_n2(theta)?;
    shared().1.iter().map(|&(t1, t2)| stat_probability_theta(theta, t1, t2)).sum()
}

fn check_polytope(t1: usize, t2: usize) -> Result<()> {
    if t1 + t2 > DRAWS {
        Err(Error::OutOfPolytope(t1 as i64, t2 as i64))
    } else {
        Ok(())
    }
}

/// Monomial `x^k` with `0⁰ = 1`.
fn mono(x: f64, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// `η₁^{t₁} η₂^{t₂} (1 − η₁ − η₂)^{3 − t₁ − t₂} f(t₁, t₂)`, valid on the closed simplex.
pub fn toric_probability(eta: &EtaCoords, t1: i64, t2: i64) -> Result<f64> {
    if t1 < 0 || t2 < 0 || t1 + t2 > DRAWS as i64 {
        return Err(Error::OutOfPolytope(t1, t2));
    }
    let (t1, t2) = (t1 as usize, t2 as usize);
    let e = require_closed_n2(eta)?;
    let rest = 1.0 - e[0] - e[1];
    let f = shared().0.get(t1, t2) as f64;
    Ok(mono(e[0], t1) * mono(e[1], t2) * mono(rest, DRAWS - t1 - t2) * f)
}

fn require_closed_n2(eta: &EtaCoords) -> Result<&[f64]> {
    let e = eta.as_slice();
    if e.len() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: e.len() });
    }
    if !eta.in_closed_simplex(0.0) {
        return Err(Error::NotInterior(format!("{e:?} is outside the closed simplex")));
    }
    Ok(e)
}

/// `E[I(T₁, T₂)]` under [`toric_probability`], including border points.
pub fn border_pol_expectation(eta: &EtaCoords) -> Result<f64> {
    require_closed_n2(eta)?;
    shared().1.iter().map(|&(t1, t2)| toric_probability(eta, t1 as i64, t2 as i64)).sum()
}

/// Weighted sum over the 27 triples of `g(row)` with i.i.d. draws from `π`.
pub fn triple_expectation(probs: &[f64; 3], g: impl Fn(&TripleRow) -> f64) -> f64 {
    build_triple_table().rows.iter().map(|r| r.draws.iter().map(|&d| probs[d as usize]).product::<f64>() * g(r)).sum()
}

//! Exact real-time evolution and the short-time magnetization law.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::{ExactChain, Parity, StateVector, GATE_SITE};
use crate::error::{Error, Result};
use crate::model::{Axis, ModelParams, PauliString};

/// Largest |τ| accepted by [`evolve`].
pub const MAX_TAU: f64 = 1.0;
/// Largest λτ accepted by [`short_time_series`].
pub const MAX_LAMBDA_TAU: f64 = 0.05;
/// Largest λτ used by [`fit_short_time`].
pub const FIT_LAMBDA_TAU: f64 = 0.01;

impl ExactChain {
    /// `e^{−iHτ} |state⟩` by full-spectrum exponentiation of each parity block.
    pub fn evolve(&self, state: &StateVector, tau: f64) -> Result<StateVector> {
        if !tau.is_finite() || tau.abs() > MAX_TAU {
            return Err(Error::InvalidArgument(format!("|tau| = {tau} exceeds {MAX_TAU}")));
        }
        if state.sites() != self.sites() {
            return Err(Error::InvalidArgument(format!(
                "state has {} sites, chain has {}",
                state.sites(),
                self.sites()
            )));
        }
        if tau == 0.0 {
            return Ok(state.clone());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
        for parity in [Parity::Even, Parity::Odd] {
            let component = state.parity_component(parity);
            if component.iter().all(|a| a.norm_sqr() == 0.0) {
                continue;
            }
            let block = self.spectral_block(parity)?;
            let local: Vec<Complex64> = block.sector.states.iter().map(|&s| component[s as usize]).collect();
            let d = local.len();
            // coordinates in the eigenbasis, rotated by e^{−iEτ}
            let mut coeffs = vec![Complex64::new(0.0, 0.0); d];
            for (j, c) in coeffs.iter_mut().enumerate() {
                let col = block.vectors.column(j);
                let proj: Complex64 = col.iter().zip(&local).map(|(v, a)| a * *v).sum();
                *c = proj * Complex64::from_polar(1.0, -block.energies[j] * tau);
            }
            for (i, &s) in block.sector.states.iter().enumerate() {
                let row = block.vectors.row(i);
                out[s as usize] = row.iter().zip(&coeffs).map(|(v, c)| c * *v).sum();
            }
        }
        Ok(StateVector {
            sites: state.sites(),
            amplitudes: out,
        })
    }

    /// `⟨σ^z_0(τ)⟩` after the gate `σ^axis_0` is applied to the ground state at τ = 0.
    pub fn short_time_series(&self, axis: Axis, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
        let lambda = self.params().lambda;
        if taus.is_empty() {
            return Err(Error::InvalidArgument("no time points".into()));
        }
        if taus.windows(2).any(|w| w[1] < w[0]) || taus[0] < 0.0 {
            return Err(Error::InvalidArgument(
                "times must be non-negative and ascending".into(),
            ));
        }
        let last = taus[taus.len() - 1];
        if lambda * last > MAX_LAMBDA_TAU {
            return Err(Error::InvalidArgument(format!(
                "lambda * tau = {} exceeds {MAX_LAMBDA_TAU}",
                lambda * last
            )));
        }
        let psi = self.ground_state().apply_gate(GATE_SITE, axis)?;
        let z = PauliString::sigma(GATE_SITE, Axis::Z);
        taus.iter()
            .map(|&t| Ok((t, self.evolve(&psi, t)?.expectation(&z)?)))
            .collect()
    }
}

pub fn evolve(params: &ModelParams<f64>, sites: usize, state: &StateVector, tau: f64) -> Result<StateVector> {
    ExactChain::new(*params, sites)?.evolve(state, tau)
}

pub fn short_time_series(params: &ModelParams<f64>, sites: usize, axis: Axis, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
    ExactChain::new(*params, sites)?.short_time_series(axis, taus)
}

/// Least-squares fit of `m(τ) − m(0) = a τ² + b τ⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShortTimeFit {
    pub quadratic: f64,
    pub quartic: f64,
    pub points: usize,
}

/// Fits the series from [`short_time_series`] using the points with
/// λτ ≤ 0.01. The series must start at τ = 0.
pub fn fit_short_time(lambda: f64, series: &[(f64, f64)]) -> Result<ShortTimeFit> {
    let Some(&(t0, m0)) = series.first() else {
        return Err(Error::InsufficientPoints { got: 0, need: 3 });
    };
    if t0 != 0.0 {
        return Err(Error::InvalidArgument("series must start at tau = 0".into()));
    }
    let used: Vec<(f64, f64)> = series
        .iter()
        .skip(1)
        .filter(|(t, _)| lambda * t <= FIT_LAMBDA_TAU * (1.0 + 1e-12))
        .map(|&(t, m)| (t, m - m0))
        .collect();
    if used.len() < 2 {
        return Err(Error::InsufficientPoints {
            got: used.len(),
            need: 2,
        });
    }
    let scale = used.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut ata = Matrix2::<f64>::zeros();
    let mut atb = Vector2::<f64>::zeros();
    for &(t, y) in &used {
        let u = (t / scale).powi(2);
        let row = Vector2::new(u, u * u);
        ata += row * row.transpose();
        atb += row * y;
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::InvalidArgument("degenerate time grid".into()))?;
    Ok(ShortTimeFit {
        quadratic: sol[0] / scale.powi(2),
        quartic: sol[1] / scale.powi(4),
        points: used.len(),
    })
}

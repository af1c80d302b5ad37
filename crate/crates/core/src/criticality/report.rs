use rayon::prelude::*;

use super::fit::pick_best;
use super::{
    derivatives_lambda, fit_log_divergence, window_lambdas, DerivativeSettings, FitWindow, Observable, ScalingFit, Side,
};
use crate::error::{Error, Result};
use crate::model::{Axis, ModelParams};
use crate::scalar::Real;

/// Column order of a report row: c_x, c_y, c_z (gaps), then d_x, d_y, d_z.
pub const REPORT_OBSERVABLES: [Observable; 6] = [
    Observable::Gap(Axis::X),
    Observable::Gap(Axis::Y),
    Observable::Gap(Axis::Z),
    Observable::Accel(Axis::X),
    Observable::Accel(Axis::Y),
    Observable::Accel(Axis::Z),
];

/// Log-law coefficients of one anisotropy. A failed cell holds its error.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow<T> {
    pub gamma: T,
    /// Side with the smaller standard error, per column.
    pub best: [Result<ScalingFit<T>>; 6],
    /// `[below, above]` per column.
    pub sides: [[Result<ScalingFit<T>>; 2]; 6],
}

impl<T: Real> CoefficientRow<T> {
    pub fn get(&self, observable: Observable) -> Option<&Result<ScalingFit<T>>> {
        REPORT_OBSERVABLES
            .iter()
            .position(|&o| o == observable)
            .map(|i| &self.best[i])
    }

    /// Best-side coefficient, if that cell succeeded.
    pub fn coefficient(&self, observable: Observable) -> Option<T> {
        self.get(observable)?.as_ref().ok().map(|f| f.coefficient)
    }
}

/// Fits `c_α(γ)` and `d_α(γ)` on both sides of λ_c for every γ ∈ (0, 1].
pub fn coefficient_report<T: Real>(gammas: &[T], settings: &DerivativeSettings<T>) -> Result<Vec<CoefficientRow<T>>> {
    for &g in gammas {
        ModelParams::new(g, T::one())?;
        if g == T::zero() {
            return Err(Error::GammaOutOfRange(0.0));
        }
    }
    Ok(gammas.iter().map(|&g| report_row(g, settings)).collect())
}

fn report_row<T: Real>(gamma: T, settings: &DerivativeSettings<T>) -> CoefficientRow<T> {
    let per_side = [Side::Below, Side::Above].map(|side| side_fits(gamma, side, settings));
    let sides: [[Result<ScalingFit<T>>; 2]; 6] =
        std::array::from_fn(|i| [per_side[0][i].clone(), per_side[1][i].clone()]);
    let best = std::array::from_fn(|i| pick_best(&sides[i][0], &sides[i][1]));
    CoefficientRow { gamma, best, sides }
}

fn side_fits<T: Real>(gamma: T, side: Side, settings: &DerivativeSettings<T>) -> [Result<ScalingFit<T>>; 6] {
    let lambdas = window_lambdas::<T>(side, &FitWindow::LOG);
    let derivs: Vec<_> = lambdas
        .par_iter()
        .map(|&l| derivatives_lambda(&REPORT_OBSERVABLES, &ModelParams::new_unchecked(gamma, l), settings))
        .collect();
    std::array::from_fn(|i| {
        let points: Vec<(T, T)> = lambdas
            .iter()
            .zip(&derivs)
            .map(|(&l, d)| {
                let d = d.as_ref().map_err(Clone::clone)?;
                d[i].as_ref().map(|e| (l, e.value)).map_err(Clone::clone)
            })
            .collect::<Result<_>>()?;
        fit_log_divergence(&points, side)
    })
}

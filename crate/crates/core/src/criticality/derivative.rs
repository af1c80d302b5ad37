use super::{evaluate, Observable, LAMBDA_C};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::QuadratureSettings;
use crate::scalar::Real;

/// Step rule and accuracy requirements of [`derivative_lambda`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeSettings<T> {
    pub quadrature: QuadratureSettings<T>,
    /// Base step is `max(step_floor, step_relative·|λ−1|)`, capped at `|λ−1|/4` and `λ/4`.
    pub step_floor: f64,
    pub step_relative: f64,
    /// Largest acceptable Richardson error estimate, relative to
    /// `max(1, |derivative|)`.
    pub precision_limit: f64,
}

impl<T: Real> Default for DerivativeSettings<T> {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSettings::default().tightened(1e-13),
            step_floor: 1e-5,
            step_relative: 1e-3,
            precision_limit: 1e-5,
        }
    }
}

impl<T: Real> DerivativeSettings<T> {
    /// Base step at `lambda`.
    pub fn base_step(&self, lambda: T) -> Result<T> {
        let lc = T::lit(LAMBDA_C);
        let distance = (lambda - lc).abs();
        if distance == T::zero() {
            return Err(Error::StepCrossesCriticalPoint {
                lambda: lambda.as_f64(),
                step: self.step_floor,
            });
        }
        let quarter = T::lit(0.25);
        let s = T::lit(self.step_floor)
            .max(T::lit(self.step_relative) * distance)
            .min(quarter * distance)
            .min(quarter * lambda);
        if lambda - s <= T::zero() || (lambda - s - lc) * (lambda + s - lc) <= T::zero() {
            return Err(Error::StepCrossesCriticalPoint {
                lambda: lambda.as_f64(),
                step: s.as_f64(),
            });
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeEstimate<T> {
    pub value: T,
    pub step_used: T,
    pub error_estimate: T,
}

/// `d(observable)/dλ` at fixed γ: central differences at steps `s, s/2, s/4`
/// combined by two rounds of Richardson extrapolation.
pub fn derivative_lambda<T: Real>(
    observable: Observable,
    params: &ModelParams<T>,
    settings: &DerivativeSettings<T>,
) -> Result<DerivativeEstimate<T>> {
    derivatives_lambda(&[observable], params, settings)?
        .pop()
        .expect("one observable requested")
}

/// Derivatives of several observables sharing the same six quadrature
/// evaluations. The outer error covers step and quadrature failures; each
/// inner result carries that observable's precision check.
pub fn derivatives_lambda<T: Real>(
    observables: &[Observable],
    params: &ModelParams<T>,
    settings: &DerivativeSettings<T>,
) -> Result<Vec<Result<DerivativeEstimate<T>>>> {
    params.check()?;
    let s = settings.base_step(params.lambda)?;
    let steps = [s, s / T::lit(2.0), s / T::lit(4.0)];
    let mut central: Vec<[T; 3]> = vec![[T::zero(); 3]; observables.len()];
    for (j, &h) in steps.iter().enumerate() {
        let up = evaluate(&params.with_lambda(params.lambda + h), &settings.quadrature)?;
        let down = evaluate(&params.with_lambda(params.lambda - h), &settings.quadrature)?;
        for (i, &o) in observables.iter().enumerate() {
            central[i][j] = (o.select(&up) - o.select(&down)) / (T::lit(2.0) * h);
        }
    }
    let limit = T::lit(settings.precision_limit);
    Ok(central
        .into_iter()
        .map(|d| {
            let (value, error_estimate) = richardson(d);
            if !value.is_finite() || !(error_estimate <= limit * value.abs().max(T::one())) {
                return Err(Error::PrecisionLoss {
                    error: error_estimate.as_f64(),
                    limit: settings.precision_limit,
                });
            }
            Ok(DerivativeEstimate {
                value,
                step_used: s,
                error_estimate,
            })
        })
        .collect())
}

/// Central differences at `h, h/2, h/4` → (extrapolated value, tail estimate).
fn richardson<T: Real>(d: [T; 3]) -> (T, T) {
    let (three, fifteen) = (T::lit(3.0), T::lit(15.0));
    let four = T::lit(4.0);
    let r1 = (four * d[1] - d[0]) / three;
    let r1b = (four * d[2] - d[1]) / three;
    let r2 = (T::lit(16.0) * r1b - r1) / fifteen;
    (r2, (r2 - r1b).abs())
}

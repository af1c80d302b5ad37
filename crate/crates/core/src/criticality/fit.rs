use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{derivative_lambda, DerivativeSettings, Observable, LAMBDA_C};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

/// Divergence law fitted against `x`, with `y = coefficient·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    /// `x = ln|λ − λ_c|`
    Log,
    /// `x = (λ² − λ_c²)^(−1/2)`, above λ_c only
    InvSqrt,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::Log => "log",
            Law::InvSqrt => "invsqrt",
        }
    }

    pub fn default_window(self) -> FitWindow {
        match self {
            Law::Log => FitWindow::LOG,
            Law::InvSqrt => FitWindow::INV_SQRT,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log" => Ok(Law::Log),
            "invsqrt" | "inv-sqrt" | "inverse-sqrt" => Ok(Law::InvSqrt),
            other => Err(Error::InvalidArgument(format!("unknown law `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Below => "below",
            Side::Above => "above",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Side::Below => -1.0,
            Side::Above => 1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "below" => Ok(Side::Below),
            "above" => Ok(Side::Above),
            other => Err(Error::InvalidArgument(format!("unknown side `{other}`"))),
        }
    }
}

/// Range of `|λ − λ_c|` and the number of geometrically spaced samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitWindow {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FitWindow {
    pub const LOG: FitWindow = FitWindow {
        min: 1e-6,
        max: 1e-2,
        points: 25,
    };
    pub const INV_SQRT: FitWindow = FitWindow {
        min: 1e-4,
        max: 1e-2,
        points: 25,
    };
    pub const MIN_POINTS: usize = 6;

    /// Valid iff ordered, at least six points, and inside `bounds`.
    pub fn check_within(&self, bounds: &FitWindow) -> Result<()> {
        if self.points < Self::MIN_POINTS {
            return Err(Error::InsufficientPoints {
                got: self.points,
                need: Self::MIN_POINTS,
            });
        }
        if !(self.min > 0.0 && self.min < self.max) {
            return Err(Error::WindowViolation(format!(
                "window [{}, {}] is not positive and ordered",
                self.min, self.max
            )));
        }
        if !within(self.min, bounds) || !within(self.max, bounds) {
            return Err(Error::WindowViolation(format!(
                "window [{}, {}] leaves [{}, {}]",
                self.min, self.max, bounds.min, bounds.max
            )));
        }
        Ok(())
    }
}

fn within(offset: f64, bounds: &FitWindow) -> bool {
    within_slack(offset, bounds, 4.0 * f64::EPSILON)
}

/// `slack` absorbs the rounding of `λ = 1 ± d` in the working precision.
fn within_slack(offset: f64, bounds: &FitWindow, slack: f64) -> bool {
    offset >= bounds.min - slack && offset <= bounds.max + slack
}

/// Coefficient of a divergence law fitted on one side of λ_c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit<T> {
    pub law: Law,
    pub side: Side,
    pub coefficient: T,
    pub intercept: T,
    /// Standard error of the coefficient.
    pub stderr: T,
    /// Smallest and largest `|λ − λ_c|` of the fitted points.
    pub window: (T, T),
    pub n_points: usize,
}

/// Sample couplings `λ = 1 ± d`, `d` geometric over the window, ascending in λ.
pub fn window_lambdas<T: Real>(side: Side, window: &FitWindow) -> Vec<T> {
    let n = window.points.max(2);
    let ratio = (window.max / window.min).ln();
    let mut out: Vec<T> = (0..n)
        .map(|i| {
            let d = if i == n - 1 {
                window.max
            } else {
                window.min * (ratio * i as f64 / (n - 1) as f64).exp()
            };
            T::lit(LAMBDA_C + side.sign() * d)
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite couplings"));
    out
}

/// Least squares of `y` against `ln|λ − λ_c|` on one side of λ_c, with
/// `|λ − λ_c| ∈ [1e−6, 1e−2]` and at least six points.
pub fn fit_log_divergence<T: Real>(points: &[(T, T)], side: Side) -> Result<ScalingFit<T>> {
    let offsets = checked_offsets(points, side, &FitWindow::LOG)?;
    let xs: Vec<T> = offsets.iter().map(|d| d.ln()).collect();
    finish(Law::Log, side, &offsets, &xs, points)
}

/// Least squares of `y` against `(λ² − λ_c²)^(−1/2)` for λ − λ_c ∈ [1e−4, 1e−2].
pub fn fit_inverse_sqrt<T: Real>(points: &[(T, T)]) -> Result<ScalingFit<T>> {
    let offsets = checked_offsets(points, Side::Above, &FitWindow::INV_SQRT)?;
    let two_c = T::lit(2.0 * LAMBDA_C);
    // λ² − λ_c² = d (d + 2λ_c), free of cancellation
    let xs: Vec<T> = offsets.iter().map(|&d| (d * (d + two_c)).sqrt().recip()).collect();
    finish(Law::InvSqrt, Side::Above, &offsets, &xs, points)
}

fn checked_offsets<T: Real>(points: &[(T, T)], side: Side, bounds: &FitWindow) -> Result<Vec<T>> {
    if points.len() < FitWindow::MIN_POINTS {
        return Err(Error::InsufficientPoints {
            got: points.len(),
            need: FitWindow::MIN_POINTS,
        });
    }
    let lc = T::lit(LAMBDA_C);
    points
        .iter()
        .map(|&(l, y)| {
            if !l.is_finite() || !y.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite point ({l}, {y})")));
            }
            let d = (l - lc) * T::lit(side.sign());
            if d <= T::zero() {
                return Err(Error::WindowViolation(format!("lambda = {l} is not {side} lambda_c")));
            }
            if !within_slack(d.as_f64(), bounds, 4.0 * T::epsilon().as_f64()) {
                return Err(Error::WindowViolation(format!(
                    "|lambda - 1| = {:e} outside [{:e}, {:e}]",
                    d.as_f64(),
                    bounds.min,
                    bounds.max
                )));
            }
            Ok(d)
        })
        .collect()
}

fn finish<T: Real>(law: Law, side: Side, offsets: &[T], xs: &[T], points: &[(T, T)]) -> Result<ScalingFit<T>> {
    let ys: Vec<T> = points.iter().map(|p| p.1).collect();
    let (coefficient, intercept, stderr) = ordinary_least_squares(xs, &ys)?;
    let lo = offsets.iter().copied().fold(T::infinity(), T::min);
    let hi = offsets.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(ScalingFit {
        law,
        side,
        coefficient,
        intercept,
        stderr,
        window: (lo, hi),
        n_points: points.len(),
    })
}

/// Slope, intercept and slope standard error of `y = a x + b`.
fn ordinary_least_squares<T: Real>(xs: &[T], ys: &[T]) -> Result<(T, T, T)> {
    let n = T::lit(xs.len() as f64);
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    if !(sxx > T::zero()) {
        return Err(Error::InvalidArgument("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    let dof = T::lit((xs.len() - 2) as f64);
    let stderr = (ssr / dof / sxx).sqrt();
    Ok((slope, intercept, stderr))
}

/// Samples `d(observable)/dλ` over the window in parallel and fits `law`.
pub fn fit_observable<T: Real>(
    observable: Observable,
    gamma: T,
    law: Law,
    side: Side,
    window: &FitWindow,
    settings: &DerivativeSettings<T>,
) -> Result<ScalingFit<T>> {
    window.check_within(&law.default_window())?;
    if law == Law::InvSqrt && side != Side::Above {
        return Err(Error::WindowViolation(
            "the inverse-square-root law is fitted above lambda_c".into(),
        ));
    }
    ModelParams::new(gamma, T::one())?;
    let lambdas = window_lambdas::<T>(side, window);
    let points: Vec<(T, T)> = lambdas
        .par_iter()
        .map(|&l| {
            let d = derivative_lambda(observable, &ModelParams::new_unchecked(gamma, l), settings)?;
            Ok((l, d.value))
        })
        .collect::<Result<_>>()?;
    match law {
        Law::Log => fit_log_divergence(&points, side),
        Law::InvSqrt => fit_inverse_sqrt(&points),
    }
}

/// Outcomes of a fit below and above λ_c.
pub type SideFits<T> = [Result<ScalingFit<T>>; 2];

/// Log-law fits on both sides; returns the one with the smaller standard
/// error together with both individual outcomes `[below, above]`.
pub fn fit_observable_best<T: Real>(
    observable: Observable,
    gamma: T,
    window: &FitWindow,
    settings: &DerivativeSettings<T>,
) -> Result<(ScalingFit<T>, SideFits<T>)> {
    let (below, above) = rayon::join(
        || fit_observable(observable, gamma, Law::Log, Side::Below, window, settings),
        || fit_observable(observable, gamma, Law::Log, Side::Above, window, settings),
    );
    let best = pick_best(&below, &above)?;
    Ok((best, [below, above]))
}

pub(crate) fn pick_best<T: Real>(
    below: &Result<ScalingFit<T>>,
    above: &Result<ScalingFit<T>>,
) -> Result<ScalingFit<T>> {
    match (below, above) {
        (Ok(b), Ok(a)) => Ok(if a.stderr < b.stderr { *a } else { *b }),
        (Ok(b), Err(_)) => Ok(*b),
        (Err(_), Ok(a)) => Ok(*a),
        (Err(e), Err(_)) => Err(e.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(side: Side, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        window_lambdas::<f64>(side, &FitWindow::LOG)
            .into_iter()
            .map(|l| (l, f(l)))
            .collect()
    }

    #[test]
    fn recovers_log_law() {
        for side in [Side::Below, Side::Above] {
            let pts = synthetic(side, |l| -1.276 * (l - 1.0).abs().ln() + 0.3);
            let fit = fit_log_divergence(&pts, side).unwrap();
            assert!((fit.coefficient + 1.276).abs() < 1e-10);
            assert!((fit.intercept - 0.3).abs() < 1e-9);
            assert!(fit.stderr < 1e-10);
            assert_eq!(fit.n_points, 25);
        }
    }

    #[test]
    fn recovers_inverse_sqrt_law() {
        let pts: Vec<(f64, f64)> = window_lambdas::<f64>(Side::Above, &FitWindow::INV_SQRT)
            .into_iter()
            .map(|l| (l, 2.5 / (l * l - 1.0).sqrt()))
            .collect();
        let fit = fit_inverse_sqrt(&pts).unwrap();
        assert!((fit.coefficient - 2.5).abs() < 1e-10);
        assert!(fit.intercept.abs() < 1e-8);
    }

    #[test]
    fn window_and_count_checks() {
        let pts = synthetic(Side::Above, |l| l);
        assert!(matches!(
            fit_log_divergence(&pts[..5], Side::Above),
            Err(Error::InsufficientPoints { got: 5, need: 6 })
        ));
        assert!(matches!(
            fit_log_divergence(&pts, Side::Below),
            Err(Error::WindowViolation(_))
        ));
        let far: Vec<(f64, f64)> = (0..8).map(|i| (1.1 + 0.01 * i as f64, 0.0)).collect();
        assert!(matches!(
            fit_log_divergence(&far, Side::Above),
            Err(Error::WindowViolation(_))
        ));
        // the log window reaches below the inverse-square-root window
        assert!(matches!(fit_inverse_sqrt(&pts), Err(Error::WindowViolation(_))));
    }

    #[test]
    fn window_lambdas_are_ascending_and_bounded() {
        let below = window_lambdas::<f64>(Side::Below, &FitWindow::LOG);
        assert!(below.windows(2).all(|w| w[0] < w[1]));
        assert!((1.0 - below[0] - 1e-2).abs() < 1e-15);
        assert!((1.0 - below[24] - 1e-6).abs() < 1e-15);
    }

    #[test]
    fn best_side_prefers_smaller_stderr() {
        let mk = |stderr| ScalingFit {
            law: Law::Log,
            side: Side::Below,
            coefficient: 1.0,
            intercept: 0.0,
            stderr,
            window: (1e-6, 1e-2),
            n_points: 25,
        };
        let b = Ok(mk(0.2));
        let a = Ok(ScalingFit {
            side: Side::Above,
            ..mk(0.1)
        });
        assert_eq!(pick_best(&b, &a).unwrap().side, Side::Above);
        assert_eq!(
            pick_best(&b, &Err(Error::InvalidArgument("x".into()))).unwrap().side,
            Side::Below
        );
    }

    #[test]
    fn single_precision_fit() {
        let pts: Vec<(f32, f32)> = window_lambdas::<f32>(Side::Above, &FitWindow::INV_SQRT)
            .into_iter()
            .map(|l| (l, 0.5 * (l - 1.0).ln()))
            .collect();
        let fit = fit_log_divergence(&pts, Side::Above).unwrap();
        assert!((fit.coefficient - 0.5).abs() < 1e-2);
    }
}

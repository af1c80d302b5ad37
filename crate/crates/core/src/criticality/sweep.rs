use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{derivatives_lambda, evaluate, DerivativeEstimate, DerivativeSettings, Observable, LAMBDA_C};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Geometric in `|λ − λ_c|`, densest next to λ_c.
    LogTowardCritical,
}

impl FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" | "log-toward-critical" => Ok(Spacing::LogTowardCritical),
            other => Err(Error::InvalidArgument(format!("unknown spacing `{other}`"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::LogTowardCritical => "log",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec<T> {
    pub gamma: T,
    pub lambda_min: T,
    pub lambda_max: T,
    pub points: usize,
    pub spacing: Spacing,
    pub observables: Vec<Observable>,
    pub with_derivative: bool,
    /// Closest approach to λ_c of log spacing.
    pub log_floor: f64,
}

impl<T: Real> SweepSpec<T> {
    pub const DEFAULT_LOG_FLOOR: f64 = 1e-4;

    pub fn new(gamma: T, lambda_min: T, lambda_max: T, points: usize, observables: Vec<Observable>) -> Self {
        Self {
            gamma,
            lambda_min,
            lambda_max,
            points,
            spacing: Spacing::Linear,
            observables,
            with_derivative: false,
            log_floor: Self::DEFAULT_LOG_FLOOR,
        }
    }

    pub fn check(&self) -> Result<()> {
        ModelParams::new(self.gamma, self.lambda_min)?;
        if !(self.lambda_max >= self.lambda_min) || !self.lambda_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lambda range [{}, {}] is not ordered",
                self.lambda_min, self.lambda_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InsufficientPoints {
                got: self.points,
                need: 2,
            });
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidArgument("no observables selected".into()));
        }
        if !(self.log_floor > 0.0) {
            return Err(Error::InvalidArgument("log floor must be positive".into()));
        }
        Ok(())
    }

    /// Sampled couplings in ascending order. λ_c is never sampled when
    /// derivatives are requested, nor by log spacing.
    pub fn lambdas(&self) -> Result<Vec<T>> {
        self.check()?;
        let lc = T::lit(LAMBDA_C);
        let out: Vec<T> = match self.spacing {
            Spacing::Linear => {
                let n = self.points - 1;
                let span = self.lambda_max - self.lambda_min;
                (0..=n)
                    .map(|i| {
                        if i == n {
                            self.lambda_max
                        } else {
                            self.lambda_min + span * T::lit(i as f64 / n as f64)
                        }
                    })
                    .filter(|&l| !(self.with_derivative && l == lc))
                    .collect()
            }
            Spacing::LogTowardCritical => {
                let mut l = self.log_lambdas();
                l.sort_by(|a, b| a.partial_cmp(b).expect("finite couplings"));
                l.dedup();
                l
            }
        };
        Ok(out)
    }

    fn log_lambdas(&self) -> Vec<T> {
        let floor = self.log_floor;
        let (lo, hi) = (self.lambda_min.as_f64(), self.lambda_max.as_f64());
        let to_lambda = |d: f64, sign: f64| T::lit(LAMBDA_C + sign * d);
        if hi <= LAMBDA_C {
            let far = LAMBDA_C - lo;
            let near = (LAMBDA_C - hi).max(floor).min(far);
            return geometric(near, far, self.points)
                .into_iter()
                .map(|d| to_lambda(d, -1.0))
                .collect();
        }
        if lo >= LAMBDA_C {
            let far = hi - LAMBDA_C;
            let near = (lo - LAMBDA_C).max(floor).min(far);
            return geometric(near, far, self.points)
                .into_iter()
                .map(|d| to_lambda(d, 1.0))
                .collect();
        }
        let (far_below, far_above) = ((LAMBDA_C - lo).max(floor), (hi - LAMBDA_C).max(floor));
        let (lb, la) = ((far_below / floor).ln(), (far_above / floor).ln());
        let share = if lb + la > 0.0 { lb / (lb + la) } else { 0.5 };
        let below = ((self.points as f64 * share).round() as usize).clamp(1, self.points - 1);
        let mut out: Vec<T> = geometric(floor, far_below, below)
            .into_iter()
            .map(|d| to_lambda(d, -1.0))
            .collect();
        out.extend(
            geometric(floor, far_above, self.points - below)
                .into_iter()
                .map(|d| to_lambda(d, 1.0)),
        );
        out
    }
}

/// `n` values from `near` to `far`, geometric; a single point sits at `far`.
fn geometric(near: f64, far: f64, n: usize) -> Vec<f64> {
    if n == 1 || near >= far {
        return vec![far; n.min(1)];
    }
    let ratio = (far / near).ln();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                far
            } else {
                near * (ratio * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// One (point, observable) cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub gamma: T,
    pub lambda: T,
    pub observable: Observable,
    pub value: Result<T>,
    /// Present iff the sweep was run with derivatives.
    pub derivative: Option<Result<DerivativeEstimate<T>>>,
}

impl<T> SweepRow<T> {
    pub fn is_ok(&self) -> bool {
        self.value.is_ok() && self.derivative.as_ref().is_none_or(|d| d.is_ok())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable<T> {
    /// Ascending in λ, observables in the order requested.
    pub rows: Vec<SweepRow<T>>,
    pub points: usize,
    pub failed_points: usize,
}

impl<T> SweepTable<T> {
    pub fn success_fraction(&self) -> f64 {
        if self.points == 0 {
            return 1.0;
        }
        (self.points - self.failed_points) as f64 / self.points as f64
    }
}

/// Evaluates the requested observables (and their λ-derivatives) at every
/// sampled coupling. Points are computed in parallel; failures are recorded
/// per row and never abort the sweep.
pub fn sweep<T: Real>(spec: &SweepSpec<T>, settings: &DerivativeSettings<T>) -> Result<SweepTable<T>> {
    let lambdas = spec.lambdas()?;
    let per_point: Vec<Vec<SweepRow<T>>> = lambdas.par_iter().map(|&l| sweep_point(spec, l, settings)).collect();
    let failed_points = per_point.iter().filter(|rows| rows.iter().any(|r| !r.is_ok())).count();
    Ok(SweepTable {
        rows: per_point.into_iter().flatten().collect(),
        points: lambdas.len(),
        failed_points,
    })
}

fn sweep_point<T: Real>(spec: &SweepSpec<T>, lambda: T, settings: &DerivativeSettings<T>) -> Vec<SweepRow<T>> {
    let params = ModelParams::new_unchecked(spec.gamma, lambda);
    let values = evaluate(&params, &settings.quadrature);
    let derivatives: Option<Vec<Result<DerivativeEstimate<T>>>> =
        spec.with_derivative
            .then(|| match derivatives_lambda(&spec.observables, &params, settings) {
                Ok(each) => each,
                Err(e) => vec![Err(e); spec.observables.len()],
            });
    spec.observables
        .iter()
        .enumerate()
        .map(|(i, &o)| SweepRow {
            gamma: spec.gamma,
            lambda,
            observable: o,
            value: values.as_ref().map(|v| o.select(v)).map_err(Clone::clone),
            derivative: derivatives.as_ref().map(|d| d[i].clone()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axis;

    fn spec(lo: f64, hi: f64, n: usize) -> SweepSpec<f64> {
        SweepSpec::new(1.0, lo, hi, n, vec![Observable::Gap(Axis::Z)])
    }

    #[test]
    fn linear_grid_drops_critical_point_for_derivatives() {
        let mut s = spec(0.5, 1.5, 11);
        assert_eq!(s.lambdas().unwrap().len(), 11);
        s.with_derivative = true;
        let l = s.lambdas().unwrap();
        assert_eq!(l.len(), 10);
        assert!(!l.contains(&1.0));
    }

    #[test]
    fn log_grid_straddles_and_avoids_critical_point() {
        let mut s = spec(0.5, 1.5, 101);
        s.spacing = Spacing::LogTowardCritical;
        let l = s.lambdas().unwrap();
        assert_eq!(l.len(), 101);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert_eq!((l[0], l[100]), (0.5, 1.5));
        let closest = l.iter().map(|x| (x - 1.0).abs()).fold(f64::INFINITY, f64::min);
        assert!((closest - 1e-4).abs() < 1e-12);
    }

    #[test]
    fn one_sided_log_grid() {
        let mut s = spec(0.2, 0.9, 8);
        s.spacing = Spacing::LogTowardCritical;
        let l = s.lambdas().unwrap();
        assert_eq!(l.len(), 8);
        assert!((l[0] - 0.2).abs() < 1e-15 && (l[7] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(spec(0.5, 1.5, 1).check().is_err());
        assert!(spec(1.5, 0.5, 5).check().is_err());
        assert!(spec(0.0, 0.5, 5).check().is_err());
        assert!(SweepSpec::new(1.0, 0.5, 1.5, 5, vec![]).check().is_err());
    }

    #[test]
    fn polarized_sweep_is_flat() {
        let mut s = SweepSpec::new(0.0, 0.2, 0.9, 8, vec![Observable::Gap(Axis::Z)]);
        s.with_derivative = true;
        let t: SweepTable<f64> = sweep(&s, &DerivativeSettings::default()).unwrap();
        assert_eq!((t.rows.len(), t.failed_points), (8, 0));
        for r in &t.rows {
            assert!(r.value.clone().unwrap().abs() < 1e-10);
            assert!(r.derivative.as_ref().unwrap().as_ref().unwrap().value.abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_two_point_sweep() {
        let t = sweep(&spec(0.7, 0.7, 2), &DerivativeSettings::default()).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0], t.rows[1]);
        let t = sweep(&spec(0.6, 0.7, 2), &DerivativeSettings::default()).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.success_fraction(), 1.0);
    }
}

//! λ-derivatives of the thermodynamic-limit observables, parameter sweeps,
//! and fits of the singular behaviour at the critical coupling λ_c = 1.

mod derivative;
mod fit;
mod report;
mod sweep;

use std::fmt;
use std::str::FromStr;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::freefermion::correlators_thermo;
use crate::model::{Axis, ModelParams};
use crate::observables::{accels_from_correlators, gaps_from_correlators, AccelSet, GapSet};
use crate::quadrature::QuadratureSettings;
use crate::scalar::Real;

pub use derivative::{derivative_lambda, derivatives_lambda, DerivativeEstimate, DerivativeSettings};
pub use fit::{
    fit_inverse_sqrt, fit_log_divergence, fit_observable, fit_observable_best, window_lambdas, FitWindow, Law,
    ScalingFit, Side, SideFits,
};
pub use report::{coefficient_report, CoefficientRow, REPORT_OBSERVABLES};
pub use sweep::{sweep, Spacing, SweepRow, SweepSpec, SweepTable};

/// Critical coupling; never estimated.
pub const LAMBDA_C: f64 = crate::model::LAMBDA_C;

/// Scalar quantity that can be evaluated, differentiated and swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    Gap(Axis),
    Accel(Axis),
    Mz,
    Gxx,
    Gyy,
    Gxzx,
    Gyzy,
}

impl Observable {
    pub const ALL: [Observable; 11] = [
        Observable::Gap(Axis::X),
        Observable::Gap(Axis::Y),
        Observable::Gap(Axis::Z),
        Observable::Accel(Axis::X),
        Observable::Accel(Axis::Y),
        Observable::Accel(Axis::Z),
        Observable::Mz,
        Observable::Gxx,
        Observable::Gyy,
        Observable::Gxzx,
        Observable::Gyzy,
    ];

    pub const GAPS: [Observable; 3] = [
        Observable::Gap(Axis::X),
        Observable::Gap(Axis::Y),
        Observable::Gap(Axis::Z),
    ];

    pub const ACCELS: [Observable; 3] = [
        Observable::Accel(Axis::X),
        Observable::Accel(Axis::Y),
        Observable::Accel(Axis::Z),
    ];

    pub const CORRELATORS: [Observable; 5] = [
        Observable::Mz,
        Observable::Gxx,
        Observable::Gyy,
        Observable::Gxzx,
        Observable::Gyzy,
    ];

    /// Canonical short name used in tables.
    pub fn name(self) -> &'static str {
        match self {
            Observable::Gap(Axis::X) => "dEx",
            Observable::Gap(Axis::Y) => "dEy",
            Observable::Gap(Axis::Z) => "dEz",
            Observable::Accel(Axis::X) => "Lx",
            Observable::Accel(Axis::Y) => "Ly",
            Observable::Accel(Axis::Z) => "Lz",
            Observable::Mz => "mz",
            Observable::Gxx => "gxx",
            Observable::Gyy => "gyy",
            Observable::Gxzx => "gxzx",
            Observable::Gyzy => "gyzy",
        }
    }

    /// Picks this observable out of an evaluated point.
    pub fn select<T: Real>(self, v: &ObservableValues<T>) -> T {
        match self {
            Observable::Gap(a) => v.gaps.get(a),
            Observable::Accel(a) => v.accels.get(a),
            Observable::Mz => v.correlators.m_z,
            Observable::Gxx => v.correlators.g_xx,
            Observable::Gyy => v.correlators.g_yy,
            Observable::Gxzx => v.correlators.g_xzx,
            Observable::Gyzy => v.correlators.g_yzy,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// Accepts the canonical names plus `Ex`/`Ey`/`Ez` for gaps and
    /// `dLx`/`dLy`/`dLz` for accelerations; case-sensitive for the
    /// observable letter, since `dEx` and `dLx` differ only there.
    fn from_str(s: &str) -> Result<Self> {
        let obs = match s.trim() {
            "dEx" | "Ex" | "gap_x" => Observable::Gap(Axis::X),
            "dEy" | "Ey" | "gap_y" => Observable::Gap(Axis::Y),
            "dEz" | "Ez" | "gap_z" => Observable::Gap(Axis::Z),
            "Lx" | "dLx" | "accel_x" => Observable::Accel(Axis::X),
            "Ly" | "dLy" | "accel_y" => Observable::Accel(Axis::Y),
            "Lz" | "dLz" | "accel_z" => Observable::Accel(Axis::Z),
            "mz" | "Mz" | "m_z" => Observable::Mz,
            "gxx" | "Gxx" | "g_xx" => Observable::Gxx,
            "gyy" | "Gyy" | "g_yy" => Observable::Gyy,
            "gxzx" | "Gxzx" | "g_xzx" => Observable::Gxzx,
            "gyzy" | "Gyzy" | "g_yzy" => Observable::Gyzy,
            other => return Err(Error::InvalidArgument(format!("unknown observable `{other}`"))),
        };
        Ok(obs)
    }
}

/// Parses a comma-separated list; `gaps`, `accels`, `correlators` and `all`
/// expand to groups. Duplicates are dropped, first occurrence wins.
pub fn parse_observables(list: &str) -> Result<Vec<Observable>> {
    let mut out: Vec<Observable> = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let group: &[Observable] = match item {
            "all" => &Observable::ALL,
            "gaps" => &Observable::GAPS,
            "accels" => &Observable::ACCELS,
            "correlators" => &Observable::CORRELATORS,
            _ => &[],
        };
        let expanded = if group.is_empty() {
            vec![item.parse()?]
        } else {
            group.to_vec()
        };
        for o in expanded {
            if !out.contains(&o) {
                out.push(o);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no observables selected".into()));
    }
    Ok(out)
}

/// Everything computed at one thermodynamic-limit parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableValues<T> {
    pub correlators: CorrelatorSet<T>,
    pub gaps: GapSet<T>,
    pub accels: AccelSet<T>,
}

/// Thermodynamic-limit correlators, gaps and accelerations at one point.
pub fn evaluate<T: Real>(params: &ModelParams<T>, settings: &QuadratureSettings<T>) -> Result<ObservableValues<T>> {
    let correlators = correlators_thermo(params, settings)?;
    Ok(ObservableValues {
        correlators,
        gaps: gaps_from_correlators(params, &correlators),
        accels: accels_from_correlators(params, &correlators),
    })
}

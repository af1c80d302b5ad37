//! Self-checks run by `qpt verify`: algebraic identities between the closed
//! forms and their definitions, γ = 0 symmetries, and agreement of the
//! quadrature engine with extrapolated exact diagonalization.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::exactdiag::{extrapolate_thermo, ExactChain};
use crate::freefermion::correlators_thermo;
use crate::model::{Axis, ModelParams};
use crate::observables::{accels_from_correlators, gaps_from_correlators};
use crate::quadrature::QuadratureSettings;

pub const DEFAULT_SEED: u64 = 20_140_314;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const IDENTITY_POINTS: usize = 50;
pub const IDENTITY_SITES: usize = 10;
pub const ORACLE_SIZES: [usize; 3] = [8, 10, 12];
pub const ORACLE_FLOOR: f64 = 1e-4;
pub const ORACLE_GAMMAS: [f64; 3] = [0.0, 0.5, 1.0];
pub const ORACLE_LAMBDAS: [f64; 3] = [0.5, 1.5, 2.5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Symmetry,
    Oracle,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identities" => Ok(Suite::Identities),
            "symmetry" => Ok(Suite::Symmetry),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        }
    }
}

/// Outcome of one named comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    /// Set when the quantities could not be computed at all.
    pub error: Option<Error>,
}

impl Check {
    fn compare(suite: &'static str, name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            deviation,
            tolerance,
            error: None,
        }
    }

    fn failed(suite: &'static str, name: impl Into<String>, error: Error) -> Self {
        Self {
            suite,
            name: name.into(),
            deviation: f64::NAN,
            tolerance: 0.0,
            error: Some(error),
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.deviation <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => write!(f, "{status} [{}] {}: {e}", self.suite, self.name),
            None => write!(
                f,
                "{status} [{}] {}: deviation {:.3e} (tolerance {:.1e})",
                self.suite, self.name, self.deviation, self.tolerance
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

pub fn run(suite: Suite, seed: u64) -> VerifyReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identities(seed, IDENTITY_POINTS, IDENTITY_SITES));
    }
    if matches!(suite, Suite::Symmetry | Suite::All) {
        checks.extend(symmetry());
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle());
    }
    VerifyReport { checks }
}

/// `points` seeded couplings, γ ∈ [0, 1], λ ∈ (0, 3].
pub fn random_grid(seed: u64, points: usize) -> Vec<ModelParams<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|_| {
            let gamma: f64 = rng.random();
            let lambda = 3.0 * (1.0 - rng.random::<f64>());
            ModelParams::new_unchecked(gamma, lambda)
        })
        .collect()
}

/// Largest deviations over the grid: (gap formula, acceleration formula,
/// gap-sum identity, most negative gap).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdentityDeviations {
    pub gaps: f64,
    pub accels: f64,
    pub gap_sum: f64,
    pub min_gap: f64,
}

/// Closed-form gaps and accelerations against their definitions on finite rings.
pub fn identity_deviations(grid: &[ModelParams<f64>], sites: usize) -> Result<IdentityDeviations> {
    let per_point: Vec<IdentityDeviations> = grid
        .par_iter()
        .map(|p| {
            let chain = ExactChain::new(*p, sites)?;
            let c = chain.correlators()?;
            let gaps = gaps_from_correlators(p, &c);
            let accels = accels_from_correlators(p, &c);
            let mut d = IdentityDeviations {
                min_gap: f64::INFINITY,
                ..Default::default()
            };
            let mut direct = [0.0; 3];
            for (i, axis) in Axis::ALL.into_iter().enumerate() {
                direct[i] = chain.gap_direct(axis)?;
                d.gaps = d.gaps.max((gaps.get(axis) - direct[i]).abs());
                d.accels = d.accels.max((accels.get(axis) - chain.accel_direct(axis)?).abs());
                d.min_gap = d.min_gap.min(direct[i]);
            }
            d.gap_sum = (direct[0] + direct[1] - direct[2] + 4.0 * c.m_z).abs();
            Ok(d)
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().fold(
        IdentityDeviations {
            min_gap: f64::INFINITY,
            ..Default::default()
        },
        |a, b| IdentityDeviations {
            gaps: a.gaps.max(b.gaps),
            accels: a.accels.max(b.accels),
            gap_sum: a.gap_sum.max(b.gap_sum),
            min_gap: a.min_gap.min(b.min_gap),
        },
    ))
}

pub fn identities(seed: u64, points: usize, sites: usize) -> Vec<Check> {
    const S: &str = "identities";
    let grid = random_grid(seed, points);
    match identity_deviations(&grid, sites) {
        Ok(d) => vec![
            Check::compare(
                S,
                format!("gap formula vs definition, {points} points, N={sites}"),
                d.gaps,
                IDENTITY_TOLERANCE,
            ),
            Check::compare(
                S,
                format!("acceleration formula vs double commutator, {points} points, N={sites}"),
                d.accels,
                IDENTITY_TOLERANCE,
            ),
            Check::compare(S, "gap sum dEx + dEy = dEz - 4 mz", d.gap_sum, IDENTITY_TOLERANCE),
            Check::compare(S, "gaps are non-negative", (-d.min_gap).max(0.0), 1e-12),
        ],
        Err(e) => vec![Check::failed(S, "identity grid", e)],
    }
}

pub fn symmetry() -> Vec<Check> {
    const S: &str = "symmetry";
    let settings = QuadratureSettings::default();
    ORACLE_LAMBDAS
        .par_iter()
        .flat_map_iter(|&lambda| {
            let p = ModelParams::new_unchecked(0.0, lambda);
            let thermo = correlators_thermo(&p, &settings).map(|c| {
                let g = gaps_from_correlators(&p, &c);
                let a = accels_from_correlators(&p, &c);
                [
                    (g.de_x - g.de_y).abs(),
                    (a.lam_x - a.lam_y).abs(),
                    (c.g_xzx - c.g_yzy).abs(),
                ]
            });
            let ed = ExactChain::new(p, IDENTITY_SITES).and_then(|chain| {
                let c = chain.correlators()?;
                Ok([
                    (chain.gap_direct(Axis::X)? - chain.gap_direct(Axis::Y)?).abs(),
                    (chain.accel_direct(Axis::X)? - chain.accel_direct(Axis::Y)?).abs(),
                    (c.g_xzx - c.g_yzy).abs(),
                ])
            });
            let labels = ["dEx = dEy", "Lx = Ly", "gxzx = gyzy"];
            let mut out = Vec::new();
            for (source, values) in [("thermodynamic", thermo), ("N=10", ed)] {
                match values {
                    Ok(v) => out.extend(labels.iter().zip(v).map(|(l, d)| {
                        Check::compare(
                            S,
                            format!("{l} at gamma=0, lambda={lambda} ({source})"),
                            d,
                            IDENTITY_TOLERANCE,
                        )
                    })),
                    Err(e) => out.push(Check::failed(S, format!("gamma=0, lambda={lambda} ({source})"), e)),
                }
            }
            out
        })
        .collect()
}

/// Extrapolated exact-diagonalization correlators with their uncertainties.
pub fn oracle_correlators(
    params: &ModelParams<f64>,
    sizes: &[usize],
) -> Result<(CorrelatorSet<f64>, CorrelatorSet<f64>)> {
    let series: Vec<[f64; 5]> = sizes
        .par_iter()
        .map(|&n| Ok(ExactChain::new(*params, n)?.doublet_correlators()?.to_array()))
        .collect::<Result<_>>()?;
    let mut value = [0.0; 5];
    let mut uncertainty = [0.0; 5];
    for i in 0..5 {
        let column: Vec<f64> = series.iter().map(|r| r[i]).collect();
        let e = extrapolate_thermo(sizes, &column)?;
        value[i] = e.value;
        uncertainty[i] = e.uncertainty;
    }
    Ok((CorrelatorSet::from_array(value), CorrelatorSet::from_array(uncertainty)))
}

pub fn oracle() -> Vec<Check> {
    const S: &str = "oracle";
    let grid: Vec<(f64, f64)> = ORACLE_GAMMAS
        .iter()
        .flat_map(|&g| ORACLE_LAMBDAS.iter().map(move |&l| (g, l)))
        .collect();
    grid.par_iter()
        .flat_map_iter(|&(gamma, lambda)| {
            let p = ModelParams::new_unchecked(gamma, lambda);
            let label = format!("gamma={gamma}, lambda={lambda}");
            let result = oracle_correlators(&p, &ORACLE_SIZES)
                .and_then(|ed| Ok((ed, correlators_thermo(&p, &QuadratureSettings::default())?)));
            match result {
                Ok(((ed, unc), thermo)) => {
                    let (ed, unc, thermo) = (ed.to_array(), unc.to_array(), thermo.to_array());
                    (0..5)
                        .map(|i| {
                            Check::compare(
                                S,
                                format!("{} at {label}", CorrelatorSet::<f64>::NAMES[i]),
                                (ed[i] - thermo[i]).abs(),
                                ORACLE_FLOOR.max(unc[i]),
                            )
                        })
                        .collect::<Vec<_>>()
                }
                Err(e) => vec![Check::failed(S, label, e)],
            }
        })
        .collect()
}

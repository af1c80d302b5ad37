//! The transverse-field XY chain
//!
//! ```text
//! H = -(λ/2) Σ_i [(1+γ) σ^x_i σ^x_{i+1} + (1-γ) σ^y_i σ^y_{i+1}] + Σ_i σ^z_i
//! ```
//!
//! with periodic boundary conditions. The field `h` is fixed to one, so every
//! energy and time in the crate is measured in units of `h`.

pub mod pauli;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use pauli::{PauliString, PauliSum, Phase};

/// Smallest periodic chain on which sites k-2..k+2 are all distinct.
pub const MIN_SITES: usize = 5;
/// Largest chain the dense exact-diagonalization oracle accepts by default.
pub const DEFAULT_DENSE_CAP: usize = 14;
/// Location of the quantum critical point for every 0 < γ ≤ 1.
pub const LAMBDA_C: f64 = 1.0;

/// One point of the Hamiltonian family: anisotropy `gamma` in [0, 1] and
/// reduced coupling `lambda = J/h > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    pub gamma: T,
    pub lambda: T,
}

impl<T: Real> ModelParams<T> {
    /// Builds and validates a parameter point.
    pub fn new(gamma: T, lambda: T) -> Result<Self> {
        let p = Self { gamma, lambda };
        p.check()?;
        Ok(p)
    }

    /// Builds a parameter point without validation.
    pub const fn new_unchecked(gamma: T, lambda: T) -> Self {
        Self { gamma, lambda }
    }

    pub fn with_lambda(self, lambda: T) -> Self {
        Self { lambda, ..self }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.gamma >= T::zero() && self.gamma <= T::one()) {
            return Err(Error::GammaOutOfRange(self.gamma.as_f64()));
        }
        if !(self.lambda > T::zero()) || !self.lambda.is_finite() {
            return Err(Error::LambdaNonPositive(self.lambda.as_f64()));
        }
        Ok(())
    }

    /// Coefficients of the σ^xσ^x bond, the σ^yσ^y bond and the field term.
    pub fn coefficients(&self) -> TermCoefficients<T> {
        let half = T::lit(0.5);
        TermCoefficients {
            xx: -self.lambda * (T::one() + self.gamma) * half,
            yy: -self.lambda * (T::one() - self.gamma) * half,
            field: T::one(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TermCoefficients<T> {
    pub xx: T,
    pub yy: T,
    pub field: T,
}

/// Chain geometry: a periodic ring of `N` sites or the thermodynamic limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    Finite(usize),
    Thermodynamic,
}

impl LatticeSpec {
    pub fn check(&self, dense_cap: usize) -> Result<()> {
        match *self {
            LatticeSpec::Finite(n) if n < MIN_SITES => Err(Error::LatticeTooSmall {
                sites: n,
                min: MIN_SITES,
            }),
            LatticeSpec::Finite(n) if n > dense_cap => Err(Error::LatticeTooLarge {
                sites: n,
                cap: dense_cap,
            }),
            _ => Ok(()),
        }
    }
}

/// Checks a parameter point and lattice against the default dense cap.
pub fn validate<T: Real>(params: &ModelParams<T>, lattice: LatticeSpec) -> Result<()> {
    validate_with_cap(params, lattice, DEFAULT_DENSE_CAP)
}

pub fn validate_with_cap<T: Real>(params: &ModelParams<T>, lattice: LatticeSpec, dense_cap: usize) -> Result<()> {
    params.check()?;
    lattice.check(dense_cap)
}

/// Pauli axis; also selects the fundamental local gate σ_k^axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub type GateAxis = Axis;

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// `σ^self σ^rhs = phase · σ^product` (product `None` is the identity).
    pub fn product(self, rhs: Axis) -> (Phase, Option<Axis>) {
        use Axis::*;
        match (self, rhs) {
            (a, b) if a == b => (Phase::One, None),
            (X, Y) => (Phase::I, Some(Z)),
            (Y, Z) => (Phase::I, Some(X)),
            (Z, X) => (Phase::I, Some(Y)),
            (Y, X) => (Phase::MinusI, Some(Z)),
            (Z, Y) => (Phase::MinusI, Some(X)),
            (X, Z) => (Phase::MinusI, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// The `3N` terms of the Hamiltonian on an `N`-site ring, ordered per site as
/// xx bond, yy bond, field. Zero-coefficient bonds (yy at γ = 1) are kept.
///
/// Only the parameter point is validated; any `N ≥ 3` gives distinct bonds.
pub fn hamiltonian_terms<T: Real>(params: &ModelParams<T>, sites: usize) -> Result<Vec<PauliString<T>>> {
    params.check()?;
    if sites < 3 {
        return Err(Error::LatticeTooSmall { sites, min: 3 });
    }
    let c = params.coefficients();
    let re = |x: T| Complex::new(x, T::zero());
    let mut terms = Vec::with_capacity(3 * sites);
    for i in 0..sites {
        let j = (i + 1) % sites;
        terms.push(PauliString::new([(i, Axis::X), (j, Axis::X)], re(c.xx)));
        terms.push(PauliString::new([(i, Axis::Y), (j, Axis::Y)], re(c.yy)));
        terms.push(PauliString::new([(i, Axis::Z)], re(c.field)));
    }
    Ok(terms)
}

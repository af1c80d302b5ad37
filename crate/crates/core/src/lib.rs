//! Single-qubit-gate observables of the periodic transverse-field XY chain.
//!
//! ```text
//! H = −(λ/2) Σ_j [(1+γ) σ^x_j σ^x_{j+1} + (1−γ) σ^y_j σ^y_{j+1}] + Σ_j σ^z_j
//! ```
//!
//! After a gate `σ^α_k` acts on the ground state, the energy it injects
//! (the gap `ΔE_α`) and the initial curvature of the on-site magnetization
//! (the acceleration `Λ_α`) are fixed by five ground-state correlators.
//! Those are computed exactly on finite rings ([`exactdiag`]) and by
//! quadrature in the thermodynamic limit ([`freefermion`]); [`criticality`]
//! differentiates them in λ and fits the singular behaviour at λ = 1.
//!
//! The analytic layers are generic over [`Real`] (`f32`, `f64`); exact
//! diagonalization is `f64` only.

// negated comparisons reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlators;
pub mod criticality;
pub mod error;
pub mod exactdiag;
pub mod freefermion;
pub mod model;
pub mod observables;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use correlators::CorrelatorSet;
pub use error::{Error, Result};
pub use model::{Axis, GateAxis, LatticeSpec, ModelParams, PauliString, PauliSum};
pub use observables::{accels_from_correlators, gaps_from_correlators, AccelSet, GapSet};
pub use scalar::Real;

pub type Params = ModelParams<f64>;
pub type Correlators = CorrelatorSet<f64>;
pub type Gaps = GapSet<f64>;
pub type Accels = AccelSet<f64>;
pub type Params32 = ModelParams<f32>;
pub type Correlators32 = CorrelatorSet<f32>;
pub type Gaps32 = GapSet<f32>;
pub type Accels32 = AccelSet<f32>;

//! Thermodynamic-limit correlators from the Jordan–Wigner free-fermion
//! solution.
//!
//! All five correlators reduce to a single fermionic contraction at
//! distance `R ∈ {-2, …, 2}`:
//!
//! ```text
//! g(R) = -(1/π) ∫_0^π [cos(kR)(1 − λ cos k) + γλ sin(kR) sin k] / Λ_k dk
//! Λ_k  = sqrt((1 − λ cos k)² + (γλ sin k)²)
//! ```
//!
//! with `m_z = g(0)`, `g_xx = g(-1)`, `g_yy = g(1)`, `g_xzx = -g(-2)` and
//! `g_yzy = -g(2)`. The three-point correlators need no Pfaffian because the
//! explicit σ^z_k cancels the Jordan–Wigner string between sites k-1 and k+1.
//! Orientation and signs are pinned against exact diagonalization (see the
//! `oracle_orientation` test).

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{integrate, QuadratureSettings};
use crate::scalar::Real;

pub use crate::quadrature::QuadratureSettings as Settings;

/// Quasiparticle dispersion `Λ_k` of one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dispersion<T> {
    params: ModelParams<T>,
}

impl<T: Real> Dispersion<T> {
    pub fn new(params: ModelParams<T>) -> Self {
        Self { params }
    }

    /// `1 − λ cos k`, written to avoid cancellation near λ = 1, k = 0.
    #[inline]
    pub fn longitudinal(&self, k: T) -> T {
        let l = self.params.lambda;
        let s = (k * T::lit(0.5)).sin();
        (T::one() - l) + T::lit(2.0) * l * s * s
    }

    #[inline]
    pub fn energy(&self, k: T) -> T {
        let a = self.longitudinal(k);
        let b = self.params.gamma * self.params.lambda * k.sin();
        a.hypot(b)
    }

    /// Location and value of the minimum of `Λ_k` on `[0, π]`.
    pub fn minimum(&self) -> (T, T) {
        let ModelParams { gamma, lambda } = self.params;
        let squeeze = lambda * (T::one() - gamma * gamma);
        let k0 = if squeeze > T::one() {
            (T::one() / squeeze).acos()
        } else {
            T::zero()
        };
        (k0, self.energy(k0))
    }

    /// True on the critical manifolds, where `Λ_k` vanishes somewhere.
    pub fn is_gapless(&self) -> bool {
        let ModelParams { gamma, lambda } = self.params;
        lambda == T::one() || (gamma == T::zero() && lambda >= T::one())
    }

    /// Panel cuts concentrating the quadrature where `Λ_k` is smallest: the
    /// exact zero for γ = 0, λ > 1 and a geometric ladder around the minimum
    /// down to the width of the near-singular region.
    pub fn breakpoints(&self) -> Vec<T> {
        let ModelParams { gamma, lambda } = self.params;
        let pi = T::PI();
        let (k0, lmin) = self.minimum();
        let mut cuts = vec![k0];
        if gamma == T::zero() {
            // Λ_k = |1 − λ cos k|: kernel is piecewise smooth with a jump at the zero
            return cuts;
        }
        let width = (lmin / (lambda * gamma.max(T::lit(1e-8))))
            .max(T::lit(1e-15))
            .min(T::one());
        let mut offset = pi * T::lit(0.5);
        while offset > T::lit(0.25) * width {
            cuts.push(k0 - offset);
            cuts.push(k0 + offset);
            offset = offset * T::lit(0.5);
        }
        cuts
    }
}

#[inline]
fn kernel<T: Real>(disp: &Dispersion<T>, k: T, distance: i32) -> T {
    let e = disp.energy(k);
    if e == T::zero() {
        return T::zero();
    }
    let r = T::lit(f64::from(distance));
    let ModelParams { gamma, lambda } = disp.params;
    ((k * r).cos() * disp.longitudinal(k) + gamma * lambda * (k * r).sin() * k.sin()) / e
}

/// The fermionic contraction `g(R)` for `R ∈ {-2, …, 2}`.
pub fn contraction<T: Real>(params: &ModelParams<T>, distance: i32, settings: &QuadratureSettings<T>) -> Result<T> {
    params.check()?;
    if !(-2..=2).contains(&distance) {
        return Err(Error::InvalidArgument(format!(
            "contraction distance {distance} outside -2..=2"
        )));
    }
    let disp = Dispersion::new(*params);
    let r = integrate(
        |k| [kernel(&disp, k, distance)],
        T::zero(),
        T::PI(),
        &disp.breakpoints(),
        settings,
    )?;
    Ok(-r.value[0] / T::PI())
}

/// Maps the contractions `[g(-2), g(-1), g(0), g(1), g(2)]` onto the correlators.
pub fn assemble<T: Real>(g: [T; 5]) -> CorrelatorSet<T> {
    CorrelatorSet {
        m_z: g[2],
        g_xx: g[1],
        g_yy: g[3],
        g_xzx: -g[0],
        g_yzy: -g[4],
    }
}

/// All five thermodynamic-limit correlators from one vector-valued quadrature.
pub fn correlators_thermo<T: Real>(
    params: &ModelParams<T>,
    settings: &QuadratureSettings<T>,
) -> Result<CorrelatorSet<T>> {
    params.check()?;
    let disp = Dispersion::new(*params);
    let r = integrate(
        |k| {
            let e = disp.energy(k);
            if e == T::zero() {
                return [T::zero(); 5];
            }
            let a = disp.longitudinal(k) / e;
            let b = params.gamma * params.lambda * k.sin() / e;
            let (s1, c1) = k.sin_cos();
            let (s2, c2) = (T::lit(2.0) * s1 * c1, c1 * c1 - s1 * s1);
            // kernel(R) = cos(kR) a + sin(kR) b for R = -2..=2
            [c2 * a - s2 * b, c1 * a - s1 * b, a, c1 * a + s1 * b, c2 * a + s2 * b]
        },
        T::zero(),
        T::PI(),
        &disp.breakpoints(),
        settings,
    )?;
    Ok(assemble(r.value.map(|v| -v / T::PI())))
}

//! Energy gaps and short-time accelerations as linear combinations of
//! ground-state correlators.
//!
//! Gap for gate σ_k^α: `ΔE_α = ⟨ψ|H|ψ⟩ − ⟨g|H|g⟩` with `|ψ⟩ = σ_k^α|g⟩`.
//! Acceleration: `⟨σ^z_k(τ)⟩ − ⟨σ^z_k(0)⟩ = −4 Λ_α (λτ)² + O(τ⁴)`.

use crate::correlators::CorrelatorSet;
use crate::model::{Axis, ModelParams};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GapSet<T> {
    pub de_x: T,
    pub de_y: T,
    pub de_z: T,
}

impl<T: Real> GapSet<T> {
    pub fn get(&self, axis: Axis) -> T {
        match axis {
            Axis::X => self.de_x,
            Axis::Y => self.de_y,
            Axis::Z => self.de_z,
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.de_x, self.de_y, self.de_z]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AccelSet<T> {
    pub lam_x: T,
    pub lam_y: T,
    pub lam_z: T,
}

impl<T: Real> AccelSet<T> {
    pub fn get(&self, axis: Axis) -> T {
        match axis {
            Axis::X => self.lam_x,
            Axis::Y => self.lam_y,
            Axis::Z => self.lam_z,
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.lam_x, self.lam_y, self.lam_z]
    }
}

/// Gaps of the three Pauli gates. No clamping: a negative gap means the
/// correlators were wrong.
pub fn gaps_from_correlators<T: Real>(params: &ModelParams<T>, c: &CorrelatorSet<T>) -> GapSet<T> {
    let two = T::lit(2.0);
    let (g, l) = (params.gamma, params.lambda);
    let (plus, minus) = (T::one() + g, T::one() - g);
    GapSet {
        de_x: two * l * minus * c.g_yy - two * c.m_z,
        de_y: two * l * plus * c.g_xx - two * c.m_z,
        de_z: two * l * (plus * c.g_xx + minus * c.g_yy),
    }
}

/// Short-time diffusion coefficients of the three Pauli gates. Requires λ > 0.
pub fn accels_from_correlators<T: Real>(params: &ModelParams<T>, c: &CorrelatorSet<T>) -> AccelSet<T> {
    let half = T::lit(0.5);
    let (g, l) = (params.gamma, params.lambda);
    let (plus, minus) = (T::one() + g, T::one() - g);
    let ratio = g / l;
    let sum = c.g_xx + c.g_yy;
    let diff = c.g_xx - c.g_yy;
    AccelSet {
        lam_x: -c.m_z + ratio * sum - half * plus * c.g_xzx + half * g * minus * c.g_yzy,
        lam_y: -c.m_z - ratio * sum - half * g * plus * c.g_xzx - half * minus * c.g_yzy,
        lam_z: g * g * c.m_z - ratio * diff + half * plus * c.g_xzx + half * minus * c.g_yzy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, l: f64) -> ModelParams<f64> {
        ModelParams::new_unchecked(g, l)
    }

    #[test]
    fn product_state_gaps() {
        for l in [0.1, 1.0, 2.7] {
            let gaps = gaps_from_correlators(&p(1.0, l), &CorrelatorSet::polarized());
            assert_eq!(gaps.to_array(), [2.0, 2.0, 0.0]);
        }
        let gaps = gaps_from_correlators(&p(0.0, 0.5), &CorrelatorSet::polarized());
        assert_eq!(gaps.to_array(), [2.0, 2.0, 0.0]);
    }

    #[test]
    fn polarized_xx_accels() {
        let a = accels_from_correlators(&p(0.0, 0.5), &CorrelatorSet::polarized());
        assert_eq!(a.to_array(), [1.0, 1.0, 0.0]);
    }

    #[test]
    fn isotropic_reduction() {
        // at γ = 0 with a rotation-symmetric set: Λ_x = Λ_y = −M_z − G_xzx/2, Λ_z = G_xzx
        let c = CorrelatorSet::new(-0.46, 0.47, 0.47, -0.32, -0.32);
        let a = accels_from_correlators(&p(0.0, 1.5), &c);
        assert!((a.lam_x - a.lam_y).abs() < 1e-15);
        assert!((a.lam_x - (0.46 + 0.16)).abs() < 1e-15);
        assert!((a.lam_z - c.g_xzx).abs() < 1e-15);
        let gaps = gaps_from_correlators(&p(0.0, 1.5), &c);
        assert!((gaps.de_x - gaps.de_y).abs() < 1e-15);
    }

    #[test]
    fn gap_sum_identity() {
        let c = CorrelatorSet::new(-0.3, 0.8, 0.1, -0.35, -0.05);
        for (g, l) in [(0.2, 0.4), (0.9, 2.2), (1.0, 1.0)] {
            let d = gaps_from_correlators(&p(g, l), &c);
            assert!((d.de_x + d.de_y - (d.de_z - 4.0 * c.m_z)).abs() < 1e-14);
        }
    }

    use proptest::prelude::*;

    fn corr() -> impl Strategy<Value = CorrelatorSet<f64>> {
        proptest::array::uniform5(-1.0..1.0f64).prop_map(CorrelatorSet::from_array)
    }

    proptest! {
        #[test]
        fn linear_in_correlators(g in 0.0..=1.0f64, l in 0.01..3.0f64, a in corr(), b in corr(), s in -2.0..2.0f64) {
            let params = p(g, l);
            let mix = a.zip_with(&b, |x, y| x + s * y);
            let gm = gaps_from_correlators(&params, &mix).to_array();
            let ga = gaps_from_correlators(&params, &a).to_array();
            let gb = gaps_from_correlators(&params, &b).to_array();
            let am = accels_from_correlators(&params, &mix).to_array();
            let aa = accels_from_correlators(&params, &a).to_array();
            let ab = accels_from_correlators(&params, &b).to_array();
            for i in 0..3 {
                prop_assert!((gm[i] - ga[i] - s * gb[i]).abs() < 1e-12);
                prop_assert!((am[i] - aa[i] - s * ab[i]).abs() < 1e-10);
            }
        }
    }
}

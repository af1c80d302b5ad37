use crate::scalar::Real;

/// The five ground-state expectations every observable is assembled from.
///
/// * `m_z`   — ⟨σ^z_k⟩
/// * `g_xx`  — ⟨σ^x_k σ^x_{k+1}⟩
/// * `g_yy`  — ⟨σ^y_k σ^y_{k+1}⟩
/// * `g_xzx` — ⟨σ^x_{k-1} σ^z_k σ^x_{k+1}⟩
/// * `g_yzy` — ⟨σ^y_{k-1} σ^z_k σ^y_{k+1}⟩
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CorrelatorSet<T> {
    pub m_z: T,
    pub g_xx: T,
    pub g_yy: T,
    pub g_xzx: T,
    pub g_yzy: T,
}

impl<T: Real> CorrelatorSet<T> {
    pub const NAMES: [&'static str; 5] = ["m_z", "g_xx", "g_yy", "g_xzx", "g_yzy"];

    pub fn new(m_z: T, g_xx: T, g_yy: T, g_xzx: T, g_yzy: T) -> Self {
        Self {
            m_z,
            g_xx,
            g_yy,
            g_xzx,
            g_yzy,
        }
    }

    /// Fully polarized state, all spins anti-aligned with the field.
    pub fn polarized() -> Self {
        Self::new(-T::one(), T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn to_array(&self) -> [T; 5] {
        [self.m_z, self.g_xx, self.g_yy, self.g_xzx, self.g_yzy]
    }

    pub fn from_array(a: [T; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_array(self.to_array().map(f))
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let a = self.to_array();
        let b = other.to_array();
        Self::from_array(std::array::from_fn(|i| f(a[i], b[i])))
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.zip_with(other, |a, b| (a - b).abs())
            .to_array()
            .into_iter()
            .fold(T::zero(), T::max)
    }

    /// Every component is an expectation of a ±1-eigenvalue operator.
    pub fn in_unit_range(&self, slack: T) -> bool {
        self.to_array().iter().all(|v| v.abs() <= T::one() + slack)
    }
}

//! Finite-size extrapolation of a sequence of chain results.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtrapolationMethod {
    /// Sequence already constant.
    Converged,
    /// Aitken Δ² on the last three equally spaced sizes.
    Aitken,
    /// Linear in 1/N through the last two sizes.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrapolation<T> {
    pub value: T,
    /// Distance between the estimate and the largest-size value.
    pub uncertainty: T,
    pub method: ExtrapolationMethod,
}

/// Estimates the N → ∞ limit of `values[i]` computed at `sizes[i]`.
/// Sizes must be strictly increasing; at least three points are needed.
pub fn extrapolate_thermo<T: Real>(sizes: &[usize], values: &[T]) -> Result<Extrapolation<T>> {
    if sizes.len() != values.len() {
        return Err(Error::InvalidArgument("sizes and values differ in length".into()));
    }
    if sizes.len() < 3 {
        return Err(Error::InsufficientPoints {
            got: sizes.len(),
            need: 3,
        });
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sizes must be strictly increasing".into()));
    }
    let n = sizes.len();
    let (n1, n2, n3) = (sizes[n - 3], sizes[n - 2], sizes[n - 1]);
    let (v1, v2, v3) = (values[n - 3], values[n - 2], values[n - 1]);
    let zero = T::zero();
    if v1 == v2 && v2 == v3 {
        return Ok(Extrapolation {
            value: v3,
            uncertainty: zero,
            method: ExtrapolationMethod::Converged,
        });
    }
    let equal_spacing = n2 - n1 == n3 - n2;
    if equal_spacing && v2 != v1 {
        let r = (v3 - v2) / (v2 - v1);
        if r.abs() < T::one() {
            let value = v3 + (v3 - v2) * r / (T::one() - r);
            return Ok(Extrapolation {
                value,
                uncertainty: (value - v3).abs(),
                method: ExtrapolationMethod::Aitken,
            });
        }
    }
    let (a, b) = (T::lit(n2 as f64), T::lit(n3 as f64));
    let value = (b * v3 - a * v2) / (b - a);
    Ok(Extrapolation {
        value,
        uncertainty: (value - v3).abs(),
        method: ExtrapolationMethod::Richardson,
    })
}

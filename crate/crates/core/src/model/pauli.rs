//! Pauli strings with complex coefficients and the small amount of algebra
//! the double-commutator oracle needs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::model::Axis;
use crate::scalar::Real;

/// Product of single-site Pauli operators times a complex coefficient.
/// Sites absent from `factors` carry the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString<T> {
    factors: BTreeMap<usize, Axis>,
    coefficient: Complex<T>,
}

impl<T: Real> PauliString<T> {
    pub fn identity(coefficient: Complex<T>) -> Self {
        Self {
            factors: BTreeMap::new(),
            coefficient,
        }
    }

    pub fn new<I>(factors: I, coefficient: Complex<T>) -> Self
    where
        I: IntoIterator<Item = (usize, Axis)>,
    {
        let mut out = Self::identity(coefficient);
        for (site, axis) in factors {
            out = out.mul_site(site, axis);
        }
        out
    }

    /// `coefficient * σ_site^axis`.
    pub fn single(site: usize, axis: Axis, coefficient: T) -> Self {
        Self::new([(site, axis)], Complex::new(coefficient, T::zero()))
    }

    /// `σ_site^axis`, unit coefficient.
    pub fn sigma(site: usize, axis: Axis) -> Self {
        Self::single(site, axis, T::one())
    }

    pub fn factors(&self) -> &BTreeMap<usize, Axis> {
        &self.factors
    }

    pub fn coefficient(&self) -> Complex<T> {
        self.coefficient
    }

    pub fn axis_at(&self, site: usize) -> Option<Axis> {
        self.factors.get(&site).copied()
    }

    pub fn scaled(mut self, by: Complex<T>) -> Self {
        self.coefficient = self.coefficient * by;
        self
    }

    pub fn max_site(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    /// Moves every factor from site `i` to `(i + shift) mod sites`.
    pub fn translated(&self, shift: usize, sites: usize) -> Self {
        Self {
            factors: self.factors.iter().map(|(&s, &a)| ((s + shift) % sites, a)).collect(),
            coefficient: self.coefficient,
        }
    }

    /// True when both strings share the same operator content, ignoring coefficients.
    pub fn same_operator(&self, other: &Self) -> bool {
        self.factors == other.factors
    }

    /// Two Pauli strings either commute or anticommute; they anticommute iff
    /// an odd number of sites carries two different non-identity axes.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let clashes = self
            .factors
            .iter()
            .filter(|(s, a)| other.factors.get(s).is_some_and(|b| b != *a))
            .count();
        clashes % 2 == 0
    }

    // Right-multiplies by a single σ_site^axis.
    fn mul_site(mut self, site: usize, axis: Axis) -> Self {
        match self.factors.remove(&site) {
            None => {
                self.factors.insert(site, axis);
            }
            Some(left) => {
                let (phase, product) = left.product(axis);
                self.coefficient = self.coefficient * phase.as_complex();
                if let Some(p) = product {
                    self.factors.insert(site, p);
                }
            }
        }
        self
    }

    /// Bit masks over a chain of at most 32 sites: sites flipped by the string
    /// (x or y), sites contributing a sign on |1⟩ (y or z), and the number of y factors.
    pub(crate) fn masks(&self) -> (u32, u32, usize) {
        let mut flip = 0u32;
        let mut sign = 0u32;
        let mut n_y = 0;
        for (&s, &a) in &self.factors {
            let bit = 1u32 << s;
            match a {
                Axis::X => flip |= bit,
                Axis::Y => {
                    flip |= bit;
                    sign |= bit;
                    n_y += 1;
                }
                Axis::Z => sign |= bit,
            }
        }
        (flip, sign, n_y)
    }
}

impl<T: Real> Mul for &PauliString<T> {
    type Output = PauliString<T>;

    fn mul(self, rhs: &PauliString<T>) -> PauliString<T> {
        let mut out = self.clone();
        out.coefficient = out.coefficient * rhs.coefficient;
        for (&site, &axis) in &rhs.factors {
            out = out.mul_site(site, axis);
        }
        out
    }
}

impl<T: Real> Mul for PauliString<T> {
    type Output = PauliString<T>;

    fn mul(self, rhs: PauliString<T>) -> PauliString<T> {
        &self * &rhs
    }
}

impl<T: Real> fmt::Display for PauliString<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.coefficient.re, self.coefficient.im)?;
        if self.factors.is_empty() {
            return write!(f, " I");
        }
        for (s, a) in &self.factors {
            write!(f, " {a}{s}")?;
        }
        Ok(())
    }
}

/// Phase picked up by a product of two Pauli matrices on the same site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    One,
    I,
    MinusI,
}

impl Phase {
    pub fn as_complex<T: Real>(self) -> Complex<T> {
        match self {
            Phase::One => Complex::one(),
            Phase::I => Complex::i(),
            Phase::MinusI => -Complex::<T>::i(),
        }
    }
}

/// A sum of Pauli strings. Terms are kept merged: one entry per distinct operator.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum<T> {
    terms: Vec<PauliString<T>>,
}

impl<T: Real> PauliSum<T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[PauliString<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: PauliString<T>) {
        if term.coefficient.is_zero() {
            return;
        }
        match self.terms.iter_mut().find(|t| t.same_operator(&term)) {
            Some(existing) => existing.coefficient = existing.coefficient + term.coefficient,
            None => self.terms.push(term),
        }
    }

    /// Drops terms whose coefficient magnitude is at most `tol`.
    pub fn pruned(mut self, tol: T) -> Self {
        self.terms.retain(|t| t.coefficient.norm() > tol);
        self
    }

    /// `[self, other]`. Only anticommuting pairs survive, each as `2 a b`.
    pub fn commutator(&self, other: &Self) -> Self {
        let two = Complex::new(T::lit(2.0), T::zero());
        let mut out = Self::new();
        for a in &self.terms {
            for b in &other.terms {
                if !a.commutes_with(b) {
                    out.push((a * b).scaled(two));
                }
            }
        }
        out
    }
}

impl<T: Real> FromIterator<PauliString<T>> for PauliSum<T> {
    fn from_iter<I: IntoIterator<Item = PauliString<T>>>(iter: I) -> Self {
        let mut out = Self::new();
        for t in iter {
            out.push(t);
        }
        out
    }
}

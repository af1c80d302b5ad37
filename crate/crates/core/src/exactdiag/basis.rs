//! Computational-basis bookkeeping for periodic chains of at most 32 sites.
//! Bit `s` of a basis index is site `s`; bit value 0 is spin up (σ^z = +1).

use num_complex::Complex64;

use crate::model::PauliString;

/// A Pauli string reduced to bit masks for fast action on basis states.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CompiledTerm {
    flip: u32,
    sign: u32,
    /// coefficient times i^(number of y factors)
    prefactor: Complex64,
}

impl CompiledTerm {
    pub(crate) fn new(p: &PauliString<f64>) -> Self {
        let (flip, sign, n_y) = p.masks();
        let i_pow = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Self {
            flip,
            sign,
            prefactor: p.coefficient() * i_pow,
        }
    }

    /// `term |s⟩ = amplitude |s'⟩`.
    #[inline]
    pub(crate) fn apply(&self, s: u32) -> (u32, Complex64) {
        let amp = if (s & self.sign).count_ones().is_multiple_of(2) {
            self.prefactor
        } else {
            -self.prefactor
        };
        (s ^ self.flip, amp)
    }

    /// Real amplitude; only valid for terms with a real prefactor.
    #[inline]
    pub(crate) fn apply_real(&self, s: u32) -> (u32, f64) {
        let (t, a) = self.apply(s);
        (t, a.re)
    }

    pub(crate) fn is_real(&self) -> bool {
        self.prefactor.im == 0.0
    }

    pub(crate) fn flips_parity(&self) -> bool {
        self.flip.count_ones() % 2 == 1
    }
}

/// Eigenvalue of Π_i σ^z_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(state: u32) -> Self {
        if state.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[inline]
fn rotate(s: u32, sites: usize) -> u32 {
    let mask = if sites == 32 { u32::MAX } else { (1u32 << sites) - 1 };
    ((s << 1) | (s >> (sites - 1))) & mask
}

/// Translation-invariant (zero-momentum) states of one parity sector, one
/// basis vector `(1/√L) Σ_orbit |s⟩` per translation orbit.
pub(crate) struct MomentumZeroSector {
    pub(crate) sites: usize,
    pub(crate) reps: Vec<u32>,
    pub(crate) orbit_len: Vec<u32>,
    // basis index of the orbit each state belongs to (u32::MAX outside the sector)
    lookup: Vec<u32>,
}

impl MomentumZeroSector {
    pub(crate) fn new(sites: usize, parity: Parity) -> Self {
        let dim = 1usize << sites;
        let mut lookup = vec![u32::MAX; dim];
        let mut reps = Vec::new();
        let mut orbit_len = Vec::new();
        for s in 0..dim as u32 {
            if Parity::of(s) != parity || lookup[s as usize] != u32::MAX {
                continue;
            }
            // s is the smallest member of its orbit: everything smaller is labelled
            let idx = reps.len() as u32;
            let mut t = s;
            let mut len = 0;
            loop {
                lookup[t as usize] = idx;
                len += 1;
                t = rotate(t, sites);
                if t == s {
                    break;
                }
            }
            reps.push(s);
            orbit_len.push(len);
        }
        Self {
            sites,
            reps,
            orbit_len,
            lookup,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Dense matrix of a translation-invariant, real, parity-preserving operator.
    pub(crate) fn matrix(&self, terms: &[CompiledTerm]) -> nalgebra::DMatrix<f64> {
        let d = self.dim();
        let mut m = nalgebra::DMatrix::<f64>::zeros(d, d);
        for (col, (&rep, &len)) in self.reps.iter().zip(&self.orbit_len).enumerate() {
            let mut s = rep;
            for _ in 0..len {
                for t in terms {
                    let (u, amp) = t.apply_real(s);
                    if amp == 0.0 {
                        continue;
                    }
                    let row = self.lookup[u as usize] as usize;
                    let norm = (f64::from(len) * f64::from(self.orbit_len[row])).sqrt();
                    m[(row, col)] += amp / norm;
                }
                s = rotate(s, self.sites);
            }
        }
        m
    }

    /// Expands sector coordinates into a full 2^N amplitude vector.
    pub(crate) fn expand(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.sites];
        for ((&rep, &len), &c) in self.reps.iter().zip(&self.orbit_len).zip(coords) {
            let a = c / f64::from(len).sqrt();
            let mut s = rep;
            for _ in 0..len {
                out[s as usize] = a;
                s = rotate(s, self.sites);
            }
        }
        out
    }
}

/// All basis states of one parity, in increasing order.
pub(crate) struct ParitySector {
    pub(crate) states: Vec<u32>,
    index: Vec<u32>,
}

impl ParitySector {
    pub(crate) fn new(sites: usize, parity: Parity) -> Self {
        let dim = 1usize << sites;
        let mut index = vec![u32::MAX; dim];
        let mut states = Vec::with_capacity(dim / 2);
        for s in 0..dim as u32 {
            if Parity::of(s) == parity {
                index[s as usize] = states.len() as u32;
                states.push(s);
            }
        }
        Self { states, index }
    }

    pub(crate) fn dim(&self) -> usize {
        self.states.len()
    }

    pub(crate) fn matrix(&self, terms: &[CompiledTerm]) -> nalgebra::DMatrix<f64> {
        let d = self.dim();
        let mut m = nalgebra::DMatrix::<f64>::zeros(d, d);
        for (col, &s) in self.states.iter().enumerate() {
            for t in terms {
                let (u, amp) = t.apply_real(s);
                if amp != 0.0 {
                    m[(self.index[u as usize] as usize, col)] += amp;
                }
            }
        }
        m
    }
}

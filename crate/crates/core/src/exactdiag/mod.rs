//! Finite-chain exact diagonalization: the brute-force oracle every
//! closed-form expression in the crate is checked against.
//!
//! The Hamiltonian is real with non-positive off-diagonal elements (λ > 0,
//! 0 ≤ γ ≤ 1), so by Perron–Frobenius the lowest state of each parity sector
//! is nodeless and hence translation invariant. Ground states are therefore
//! found by dense diagonalization of the zero-momentum block of each parity
//! sector; time evolution uses the full parity block.

mod basis;
pub mod dynamics;
pub mod extrapolate;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::model::{self, Axis, LatticeSpec, ModelParams, PauliString, PauliSum};

use basis::{CompiledTerm, MomentumZeroSector, ParitySector};

pub use basis::Parity;
pub use dynamics::{evolve, fit_short_time, short_time_series, ShortTimeFit};
pub use extrapolate::{extrapolate_thermo, Extrapolation, ExtrapolationMethod};

/// Gate site used by the direct gap and acceleration routines.
pub const GATE_SITE: usize = 0;

/// Largest admissible spread of a correlator over translated sites.
pub const TRANSLATION_TOLERANCE: f64 = 1e-8;

const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Normalized state of an `N`-site chain, `2^N` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, rejecting wrong lengths and non-unit norms (1e-12).
    pub fn new(sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if sites == 0 || sites > 30 || amplitudes.len() != 1 << sites {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes do not describe a chain of {sites} sites",
                amplitudes.len()
            )));
        }
        let s = Self { sites, amplitudes };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Computational basis state; bit `s` of `index` is 1 for spin down on site `s`.
    pub fn basis_state(sites: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << sites];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { sites, amplitudes }
    }

    /// All spins down, the ground state for λ → 0.
    pub fn all_down(sites: usize) -> Self {
        Self::basis_state(sites, (1 << sites) - 1)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        dot(&self.amplitudes, &other.amplitudes)
    }

    /// `σ^axis_site |self⟩`.
    pub fn apply_gate(&self, site: usize, axis: Axis) -> Result<StateVector> {
        self.check_site(site)?;
        let term = CompiledTerm::new(&PauliString::sigma(site, axis));
        Ok(Self {
            sites: self.sites,
            amplitudes: apply_terms(&[term], &self.amplitudes),
        })
    }

    /// `⟨self|op|self⟩`, which must be real for a Hermitian `op`.
    pub fn expectation(&self, op: &PauliString<f64>) -> Result<f64> {
        if let Some(site) = op.max_site() {
            self.check_site(site)?;
        }
        let term = CompiledTerm::new(op);
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (u, amp) = term.apply(s as u32);
            acc += self.amplitudes[u as usize].conj() * amp * a;
        }
        if acc.im.abs() > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitianResult { imag: acc.im });
        }
        Ok(acc.re)
    }

    /// Expectation of a sum of strings.
    pub fn expectation_sum(&self, op: &PauliSum<f64>) -> Result<f64> {
        let mut total = Complex64::new(0.0, 0.0);
        for t in op.terms() {
            if let Some(site) = t.max_site() {
                self.check_site(site)?;
            }
            let term = CompiledTerm::new(t);
            for (s, a) in self.amplitudes.iter().enumerate() {
                let (u, amp) = term.apply(s as u32);
                total += self.amplitudes[u as usize].conj() * amp * a;
            }
        }
        if total.im.abs() > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitianResult { imag: total.im });
        }
        Ok(total.re)
    }

    /// Component with definite parity (unnormalized).
    pub(crate) fn parity_component(&self, parity: Parity) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(s, &a)| {
                if Parity::of(s as u32) == parity {
                    a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites {
            return Err(Error::SiteOutOfRange {
                site,
                sites: self.sites,
            });
        }
        Ok(())
    }
}

/// `⟨state|op|state⟩`.
pub fn expectation(state: &StateVector, op: &PauliString<f64>) -> Result<f64> {
    state.expectation(op)
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn apply_terms(terms: &[CompiledTerm], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (s, a) in v.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for t in terms {
            let (u, amp) = t.apply(s as u32);
            out[u as usize] += amp * a;
        }
    }
    out
}

/// Lowest eigenpair of one parity sector.
#[derive(Clone, Debug)]
pub struct SectorGround {
    pub parity: Parity,
    pub energy: f64,
    pub state: StateVector,
}

/// Spectral decomposition of the Hamiltonian restricted to one parity sector.
pub(crate) struct SpectralBlock {
    sector: ParitySector,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

/// One Hamiltonian instance on a periodic ring, with its ground state.
pub struct ExactChain {
    params: ModelParams<f64>,
    sites: usize,
    terms: Vec<PauliString<f64>>,
    compiled: Vec<CompiledTerm>,
    sectors: [SectorGround; 2],
    ground: usize,
    spectra: [OnceLock<Result<SpectralBlock>>; 2],
}

impl ExactChain {
    /// Diagonalizes the chain with the default dense cap.
    pub fn new(params: ModelParams<f64>, sites: usize) -> Result<Self> {
        Self::with_cap(params, sites, model::DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(params: ModelParams<f64>, sites: usize, dense_cap: usize) -> Result<Self> {
        model::validate_with_cap(&params, LatticeSpec::Finite(sites), dense_cap.min(30))?;
        let terms = model::hamiltonian_terms(&params, sites)?;
        let compiled: Vec<CompiledTerm> = terms.iter().map(CompiledTerm::new).collect();
        debug_assert!(compiled.iter().all(|t| t.is_real() && !t.flips_parity()));
        let even = sector_ground(sites, Parity::Even, &compiled)?;
        let odd = sector_ground(sites, Parity::Odd, &compiled)?;
        // ties go to the even sector
        let ground = if odd.energy < even.energy { 1 } else { 0 };
        Ok(Self {
            params,
            sites,
            terms,
            compiled,
            sectors: [even, odd],
            ground,
            spectra: [OnceLock::new(), OnceLock::new()],
        })
    }

    pub fn params(&self) -> &ModelParams<f64> {
        &self.params
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> &[PauliString<f64>] {
        &self.terms
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors[self.ground].energy
    }

    pub fn ground_state(&self) -> &StateVector {
        &self.sectors[self.ground].state
    }

    pub fn ground_parity(&self) -> Parity {
        self.sectors[self.ground].parity
    }

    /// Lowest state of the given parity sector.
    pub fn sector_ground(&self, parity: Parity) -> &SectorGround {
        &self.sectors[parity.index()]
    }

    /// `H |v⟩` on raw amplitudes.
    pub fn apply_hamiltonian(&self, v: &[Complex64]) -> Vec<Complex64> {
        apply_terms(&self.compiled, v)
    }

    /// `⟨state|H|state⟩`.
    pub fn energy_of(&self, state: &StateVector) -> f64 {
        dot(&state.amplitudes, &self.apply_hamiltonian(&state.amplitudes)).re
    }

    /// Ground-state correlators, averaged over the `N` translated choices of k.
    pub fn correlators(&self) -> Result<CorrelatorSet<f64>> {
        correlators_of(self.ground_state())
    }

    /// Correlators of the parity-symmetric ground manifold. For γ > 0 and
    /// λ > 1 the lowest states of the two parity sectors merge into the
    /// degenerate thermodynamic ground doublet and this averages them;
    /// elsewhere it is the ground state. Finite-size corrections of this
    /// average vary smoothly with `N`, which the ground state's do not once
    /// its parity alternates.
    pub fn doublet_correlators(&self) -> Result<CorrelatorSet<f64>> {
        if self.params.lambda <= model::LAMBDA_C || self.params.gamma == 0.0 {
            return self.correlators();
        }
        let even = correlators_of(&self.sectors[0].state)?;
        let odd = correlators_of(&self.sectors[1].state)?;
        Ok(even.zip_with(&odd, |a, b| 0.5 * (a + b)))
    }

    /// `⟨ψ|H|ψ⟩ − ⟨g|H|g⟩` for `|ψ⟩ = σ^axis_0 |g⟩`.
    pub fn gap_direct(&self, axis: Axis) -> Result<f64> {
        let g = self.ground_state();
        let psi = g.apply_gate(GATE_SITE, axis)?;
        Ok(self.energy_of(&psi) - self.energy_of(g))
    }

    /// `[H, [H, σ^z_site]]` as an explicit sum of Pauli strings.
    pub fn double_commutator_z(&self, site: usize) -> PauliSum<f64> {
        let h: PauliSum<f64> = self.terms.iter().cloned().collect();
        let z: PauliSum<f64> = [PauliString::sigma(site, Axis::Z)].into_iter().collect();
        h.commutator(&h.commutator(&z)).pruned(1e-15)
    }

    /// Acceleration from the exact second time derivative at τ = 0:
    /// `Λ = ⟨ψ|[H,[H,σ^z_0]]|ψ⟩ / (8λ²)` with `|ψ⟩ = σ^axis_0 |g⟩`.
    pub fn accel_direct(&self, axis: Axis) -> Result<f64> {
        let psi = self.ground_state().apply_gate(GATE_SITE, axis)?;
        let dc = self.double_commutator_z(GATE_SITE);
        let l = self.params.lambda;
        Ok(psi.expectation_sum(&dc)? / (8.0 * l * l))
    }

    pub(crate) fn spectral_block(&self, parity: Parity) -> Result<&SpectralBlock> {
        self.spectra[parity.index()]
            .get_or_init(|| {
                let sector = ParitySector::new(self.sites, parity);
                let m = sector.matrix(&self.compiled);
                let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
                    .ok_or_else(|| Error::DiagonalizationFailure(format!("{parity:?} sector did not converge")))?;
                Ok(SpectralBlock {
                    sector,
                    energies: eig.eigenvalues,
                    vectors: eig.eigenvectors,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn sector_ground(sites: usize, parity: Parity, terms: &[CompiledTerm]) -> Result<SectorGround> {
    let sector = MomentumZeroSector::new(sites, parity);
    let m = sector.matrix(terms);
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::DiagonalizationFailure(format!("{parity:?} zero-momentum block did not converge")))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lowest = order[0];
    let energy = eig.eigenvalues[lowest];
    if !energy.is_finite() {
        return Err(Error::DiagonalizationFailure("non-finite eigenvalue".into()));
    }
    let coords: Vec<f64> = eig.eigenvectors.column(lowest).iter().copied().collect();
    let mut full = sector.expand(&coords);
    // global phase: largest-magnitude amplitude real positive
    let pivot = full
        .iter()
        .enumerate()
        .fold(
            (0, 0.0f64),
            |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) },
        )
        .0;
    if full[pivot] < 0.0 {
        full.iter_mut().for_each(|v| *v = -*v);
    }
    let norm = full.iter().map(|v| v * v).sum::<f64>().sqrt();
    let amplitudes = full.into_iter().map(|v| Complex64::new(v / norm, 0.0)).collect();
    Ok(SectorGround {
        parity,
        energy,
        state: StateVector { sites, amplitudes },
    })
}

fn correlators_of(state: &StateVector) -> Result<CorrelatorSet<f64>> {
    let n = state.sites();
    let mut samples: Vec<[f64; 5]> = Vec::with_capacity(n);
    for k in 0..n {
        let left = (k + n - 1) % n;
        let right = (k + 1) % n;
        let one = num_complex::Complex::new(1.0, 0.0);
        let ops = [
            PauliString::sigma(k, Axis::Z),
            PauliString::new([(k, Axis::X), (right, Axis::X)], one),
            PauliString::new([(k, Axis::Y), (right, Axis::Y)], one),
            PauliString::new([(left, Axis::X), (k, Axis::Z), (right, Axis::X)], one),
            PauliString::new([(left, Axis::Y), (k, Axis::Z), (right, Axis::Y)], one),
        ];
        let mut row = [0.0; 5];
        for (slot, op) in row.iter_mut().zip(&ops) {
            *slot = state.expectation(op)?;
        }
        samples.push(row);
    }
    let mut mean = [0.0; 5];
    for i in 0..5 {
        let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r[i]), hi.max(r[i]))
        });
        if hi - lo > TRANSLATION_TOLERANCE {
            return Err(Error::TranslationInvarianceViolation {
                name: CorrelatorSet::<f64>::NAMES[i],
                spread: hi - lo,
            });
        }
        mean[i] = samples.iter().map(|r| r[i]).sum::<f64>() / n as f64;
    }
    Ok(CorrelatorSet::from_array(mean))
}

/// Ground-state energy and state of an `N`-site ring.
pub fn ground_state(params: &ModelParams<f64>, sites: usize) -> Result<(f64, StateVector)> {
    let chain = ExactChain::new(*params, sites)?;
    Ok((chain.ground_energy(), chain.ground_state().clone()))
}

pub fn correlators_ed(params: &ModelParams<f64>, sites: usize) -> Result<CorrelatorSet<f64>> {
    ExactChain::new(*params, sites)?.correlators()
}

/// See [`ExactChain::doublet_correlators`].
pub fn correlators_ed_doublet(params: &ModelParams<f64>, sites: usize) -> Result<CorrelatorSet<f64>> {
    ExactChain::new(*params, sites)?.doublet_correlators()
}

pub fn gap_direct(params: &ModelParams<f64>, sites: usize, axis: Axis) -> Result<f64> {
    ExactChain::new(*params, sites)?.gap_direct(axis)
}

pub fn accel_direct(params: &ModelParams<f64>, sites: usize, axis: Axis) -> Result<f64> {
    ExactChain::new(*params, sites)?.accel_direct(axis)
}

/// Brute-force reference: lowest eigenpair of the full `2^N × 2^N` matrix,
/// without any symmetry reduction. Intended for N ≤ 10.
pub fn dense_full_ground_state(params: &ModelParams<f64>, sites: usize) -> Result<(f64, StateVector)> {
    model::validate_with_cap(params, LatticeSpec::Finite(sites), 12)?;
    let compiled: Vec<CompiledTerm> = model::hamiltonian_terms(params, sites)?
        .iter()
        .map(CompiledTerm::new)
        .collect();
    let dim = 1usize << sites;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim as u32 {
        for t in &compiled {
            let (u, a) = t.apply_real(s);
            m[(u as usize, s as usize)] += a;
        }
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::DiagonalizationFailure("full matrix did not converge".into()))?;
    let lowest = (0..dim)
        .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .expect("non-empty spectrum");
    let mut v: Vec<f64> = eig.eigenvectors.column(lowest).iter().copied().collect();
    let pivot = v
        .iter()
        .enumerate()
        .fold(
            (0, 0.0f64),
            |(bi, bv), (i, x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) },
        )
        .0;
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let amplitudes = v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok((eig.eigenvalues[lowest], StateVector { sites, amplitudes }))
}

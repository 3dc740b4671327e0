//! Brute-force check of the closed-form results.
//!
//! Builds the one-excitation Hamiltonian of two emitters side-coupled to a
//! finite chain, diagonalizes it densely and reads off the out-of-band
//! eigenvalues and their overlaps with the emitter initial states. Nothing
//! here uses the lattice Green function.
//!
//! The chain hopping is `+1`. Its spectrum is the same set `2cos(2πn/N)` as
//! the usual `-1` hopping, and this is the sign for which the out-of-band
//! Green function is positive and smooth above the band and alternates as
//! `(-1)^R` below it, as the closed forms assume.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;
use crate::resolvent::InitialState;

const MIN_SITES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Ring,
    Open,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Ring => "ring",
            Boundary::Open => "open",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(Boundary::Ring),
            "open" => Ok(Boundary::Open),
            other => Err(invalid(
                "boundary",
                format!("expected ring|open, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteChainSpec {
    n_sites: usize,
    boundary: Boundary,
    position_1: usize,
    position_2: usize,
    params: ModelParams,
}

impl FiniteChainSpec {
    pub fn new(
        n_sites: usize,
        boundary: Boundary,
        position_1: usize,
        position_2: usize,
        params: ModelParams,
    ) -> Result<Self> {
        if n_sites < MIN_SITES {
            return Err(invalid(
                "n_sites",
                format!("need at least {MIN_SITES} sites, got {n_sites}"),
            ));
        }
        if position_1 >= position_2 {
            return Err(invalid("position_2", "must exceed position_1"));
        }
        if position_2 >= n_sites {
            return Err(invalid("position_2", "must lie on the chain"));
        }
        Ok(Self {
            n_sites,
            boundary,
            position_1,
            position_2,
            params,
        })
    }

    /// Emitters `r` sites apart, placed symmetrically about the chain middle.
    pub fn centered(
        n_sites: usize,
        boundary: Boundary,
        r: usize,
        params: ModelParams,
    ) -> Result<Self> {
        if r == 0 {
            return Err(invalid("separation", "must be a positive integer"));
        }
        if r >= n_sites {
            return Err(invalid("separation", "does not fit on the chain"));
        }
        let p1 = (n_sites - r) / 2;
        Self::new(n_sites, boundary, p1, p1 + r, params)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn positions(&self) -> (usize, usize) {
        (self.position_1, self.position_2)
    }

    pub fn separation(&self) -> usize {
        self.position_2 - self.position_1
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    fn with_sites(&self, n_sites: usize) -> Result<Self> {
        Self::centered(n_sites, self.boundary, self.separation(), self.params)
    }
}

/// Basis: emitter 1, emitter 2, then photon on sites `0..n`.
pub fn build_hamiltonian(spec: &FiniteChainSpec) -> DMatrix<f64> {
    let n = spec.n_sites;
    let dim = n + 2;
    let mut h = DMatrix::zeros(dim, dim);
    h[(0, 0)] = spec.params.omega;
    h[(1, 1)] = spec.params.omega;
    let mut link = |a: usize, b: usize, v: f64| {
        h[(a, b)] = v;
        h[(b, a)] = v;
    };
    for j in 0..n - 1 {
        link(2 + j, 3 + j, 1.0);
    }
    if spec.boundary == Boundary::Ring {
        link(2, 1 + n, 1.0);
    }
    link(0, 2 + spec.position_1, spec.params.u);
    link(1, 2 + spec.position_2, spec.params.u);
    h
}

/// Eigenvalues in ascending order; column `i` of `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn diagonalize(matrix: &DMatrix<f64>) -> Result<Eigenpairs> {
    if !matrix.is_square() {
        return Err(Error::Domain(format!(
            "matrix is {}x{}, expected square",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let asym = (matrix - matrix.transpose()).amax();
    if asym > 0.0 {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(Eigenpairs { values, vectors })
}

/// Half-width of the window above `|E| = 2` treated as band.
///
/// The topmost scattering level of a ring sits `≈ 4π²/N²` inside the band,
/// so any level outside the band is a bound state; the window only guards
/// against round-off. It is kept well below the level spacing so that
/// weakly bound states near a critical radius (bound by `~1e-4` at `R = 10`)
/// are not discarded.
pub fn bound_state_margin(n_sites: usize) -> f64 {
    let gap = 2.0 * PI * PI / (n_sites as f64).powi(2);
    (0.1 * gap).max(1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub n_sites: usize,
    pub separation: usize,
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Indices into `eigenvalues` of the out-of-band levels.
    pub bound_indices: Vec<usize>,
    /// Amplitudes of every eigenvector on (emitter 1, emitter 2).
    pub emitter_amplitudes: Vec<[f64; 2]>,
}

impl OracleSpectrum {
    pub fn bound_energies(&self) -> Vec<f64> {
        self.bound_indices
            .iter()
            .map(|&i| self.eigenvalues[i])
            .collect()
    }

    /// Bound energies sorted from highest to lowest, the order used by
    /// [`crate::spectrum::solve_apbs`].
    pub fn bound_energies_descending(&self) -> Vec<f64> {
        let mut e = self.bound_energies();
        e.sort_by(|a, b| b.total_cmp(a));
        e
    }

    fn overlap_at(&self, state: InitialState, i: usize) -> f64 {
        let [c1, c2] = state.emitter_amplitudes();
        let [a1, a2] = self.emitter_amplitudes[i];
        (c1 * a1 + c2 * a2).powi(2)
    }

    /// `|<Ψ|E_i>|²` for each bound state, in the order of `bound_indices`.
    pub fn overlaps(&self, state: InitialState) -> Vec<f64> {
        self.bound_indices
            .iter()
            .map(|&i| self.overlap_at(state, i))
            .collect()
    }

    /// `(E, |<Ψ|E>|²)` for the bound states, highest energy first.
    pub fn bound_states_descending(&self, state: InitialState) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self
            .bound_indices
            .iter()
            .map(|&i| (self.eigenvalues[i], self.overlap_at(state, i)))
            .collect();
        v.sort_by(|a, b| b.0.total_cmp(&a.0));
        v
    }

    /// Sum of `|<Ψ|E_i>|²` over the whole spectrum; 1 for a complete basis.
    pub fn completeness(&self, state: InitialState) -> f64 {
        (0..self.eigenvalues.len())
            .map(|i| self.overlap_at(state, i))
            .sum()
    }
}

pub fn oracle_apbs(spec: &FiniteChainSpec) -> Result<OracleSpectrum> {
    let eig = diagonalize(&build_hamiltonian(spec))?;
    let edge = 2.0 + bound_state_margin(spec.n_sites);
    let bound_indices = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() > edge)
        .map(|(i, _)| i)
        .collect();
    let emitter_amplitudes = (0..eig.values.len())
        .map(|c| [eig.vectors[(0, c)], eig.vectors[(1, c)]])
        .collect();
    Ok(OracleSpectrum {
        n_sites: spec.n_sites,
        separation: spec.separation(),
        eigenvalues: eig.values,
        bound_indices,
        emitter_amplitudes,
    })
}

/// Drift above which a level is reported as slowly converging.
pub const SLOW_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n_sites: usize,
    /// Bound energies at `n_sites`, highest first.
    pub energies: Vec<f64>,
    /// Bound energies at `2 * n_sites`, highest first.
    pub energies_doubled: Vec<f64>,
    /// `|ΔE|` per level, paired in energy order; empty if the counts differ.
    pub drift: Vec<f64>,
    pub max_drift: f64,
    pub slow: bool,
}

/// Diagonalizes at `N` and `2N` (emitters recentred) and compares levels.
///
/// A change in the number of bound states counts as slow convergence with
/// infinite drift.
pub fn convergence_report(spec: &FiniteChainSpec) -> Result<ConvergenceReport> {
    let base = oracle_apbs(spec)?;
    let doubled = oracle_apbs(&spec.with_sites(2 * spec.n_sites)?)?;
    let energies = base.bound_energies_descending();
    let energies_doubled = doubled.bound_energies_descending();
    let (drift, max_drift) = if energies.len() == energies_doubled.len() {
        let d: Vec<f64> = energies
            .iter()
            .zip(&energies_doubled)
            .map(|(a, b)| (a - b).abs())
            .collect();
        let m = d.iter().copied().fold(0.0, f64::max);
        (d, m)
    } else {
        (Vec::new(), f64::INFINITY)
    };
    Ok(ConvergenceReport {
        n_sites: spec.n_sites,
        energies,
        energies_doubled,
        drift,
        max_drift,
        slow: max_drift > SLOW_DRIFT,
    })
}

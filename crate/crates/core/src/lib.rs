//! Exact single-excitation spectrum of two identical two-level emitters
//! side-coupled to a one-dimensional tight-binding waveguide.
//!
//! Energies are measured in units of the waveguide hopping, so the photon
//! band is `[-2, 2]`. Outside the band the coupled system supports up to four
//! atom-photon bound states (APBS); this crate finds them, computes their
//! spectral weights for a few initial states, and assembles the resulting
//! Förster interaction potential as a function of emitter separation `R`.
//!
//! Module map:
//!
//! * [`model`]: dispersion, density of states, the out-of-band lattice Green
//!   function and the (generalized) self-energies with their E-derivatives.
//! * [`spectrum`]: the bound-state eigenvalue problem, critical radii and
//!   asymptotic expansions.
//! * [`resolvent`]: the emitter Green function `G11`, its residues and the
//!   occupation numbers.
//! * [`forster`]: the interaction potential, R-scans and feature detection.
//! * [`oracle`]: brute-force finite-chain diagonalization used to check all
//!   of the above independently.
//!
//! ```
//! use wgfret::{model::ModelParams, spectrum::solve_apbs};
//!
//! let params = ModelParams::new(2.5, 1.0).unwrap();
//! let states = solve_apbs(params, 12.0).unwrap();
//! assert_eq!(states.len(), 4);
//! assert!(states.iter().all(|s| s.energy.abs() > 2.0));
//! ```

pub mod error;
pub mod forster;
pub mod model;
pub mod oracle;
pub mod resolvent;
pub mod spectrum;

pub use error::{Error, Result};

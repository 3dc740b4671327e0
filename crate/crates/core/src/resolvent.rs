//! Emitter Green function, its poles and residues, and occupation numbers.
//!
//! With identical emitters the propagator from emitter 1 back to itself is
//!
//! ```text
//! G11(E) = (E - Ω - Σ) / Q,     Q = (E - Ω - Σ)² - Γ²
//!        = ½ [1/(E - Ω - Σ - Γ) + 1/(E - Ω - Σ + Γ)]
//! ```
//!
//! so at a bound state on the `±` branch the residue is `½ / (1 - Σ' ∓ Γ')`.
//! `Γ` here is the smooth envelope (see [`crate::model::gamma_envelope`]),
//! whose poles are exactly the branches returned by
//! [`crate::spectrum::solve_apbs`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{
    d_gamma_envelope, d_self_energy, gamma_envelope, lattice_parity, self_energy, ModelParams,
    ThetaPoint,
};
use crate::spectrum::{eigenvalue_residual, ApbsSolution, Parity};

/// Initial state of the two emitters, with no photon in the waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// Emitter 1 excited, emitter 2 in its ground state.
    SingleExcited,
    /// Symmetric superposition of the two singly excited configurations.
    BellPlus,
    /// Antisymmetric superposition.
    BellMinus,
}

impl InitialState {
    pub const ALL: [Self; 3] = [Self::SingleExcited, Self::BellPlus, Self::BellMinus];

    pub fn name(self) -> &'static str {
        match self {
            Self::SingleExcited => "single",
            Self::BellPlus => "plus",
            Self::BellMinus => "minus",
        }
    }

    /// Amplitudes on (emitter 1, emitter 2).
    pub fn emitter_amplitudes(self) -> [f64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::SingleExcited => [1.0, 0.0],
            Self::BellPlus => [h, h],
            Self::BellMinus => [h, -h],
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "single_excited" => Ok(Self::SingleExcited),
            "plus" | "bell_plus" => Ok(Self::BellPlus),
            "minus" | "bell_minus" => Ok(Self::BellMinus),
            other => Err(Error::InvalidParameter {
                name: "state",
                reason: format!("expected single|plus|minus, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupation {
    pub solution: ApbsSolution,
    /// Spectral weight |<Ψ|E_i>|².
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSet {
    pub state: InitialState,
    pub separation: f64,
    pub entries: Vec<Occupation>,
}

impl OccupationSet {
    /// Weight carried by the bound states; the rest sits in the continuum.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|o| o.alpha).sum()
    }
}

/// `E - Ω - Σ(E)`.
fn detuning(params: ModelParams, p: ThetaPoint) -> Result<f64> {
    Ok(p.energy() - params.omega - self_energy(params, p)?)
}

/// Pole function `Q(R, E)`; its roots outside the band are the bound states.
pub fn q_function(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    let x = detuning(params, p)?;
    let g = gamma_envelope(params, r, p)?;
    Ok(x * x - g * g)
}

/// `dQ/dE = 2(E - Ω - Σ)(1 - Σ') - 2ΓΓ'`.
pub fn dq_function(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    let x = detuning(params, p)?;
    let g = gamma_envelope(params, r, p)?;
    let ds = d_self_energy(params, p)?;
    let dg = d_gamma_envelope(params, r, p)?;
    Ok(2.0 * x * (1.0 - ds) - 2.0 * g * dg)
}

/// `G11(R, E)` away from its poles.
pub fn g11(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    let x = detuning(params, p)?;
    let g = gamma_envelope(params, r, p)?;
    let q = x * x - g * g;
    let scale = (x * x).max(g * g);
    if q == 0.0 || q.abs() <= 1e-13 * scale {
        return Err(Error::Pole);
    }
    Ok(x / q)
}

/// `d/dE [Σ ± Γ]` on branch `parity`, assembled so that the `-` branch does
/// not lose precision when the two diverging terms cancel near the band edge.
fn branch_slope(params: ModelParams, parity: Parity, r: f64, theta: f64) -> f64 {
    let sh = theta.sinh();
    let decay = (-theta * r).exp();
    let (h, dh) = match parity {
        Parity::Plus => (1.0 + decay, -r * decay),
        Parity::Minus => (-(-theta * r).exp_m1(), r * decay),
    };
    params.u2() * (dh * sh - h * theta.cosh()) / (4.0 * sh * sh * sh)
}

/// Residue of `G11` at a bound state, i.e. |<1|E_i>|² for the state with
/// emitter 1 excited.
pub fn residue_g11(params: ModelParams, sol: &ApbsSolution) -> Result<f64> {
    let res = eigenvalue_residual(params, sol.branch, sol.separation, sol.theta)?;
    if res.abs() > 1e-8 * params.u2().max(1.0) {
        return Err(Error::Mismatch(format!(
            "{} at R={} is not a bound state of omega={}, u={} (residual {res:e})",
            sol.branch.label(),
            sol.separation,
            params.omega,
            params.u
        )));
    }
    let slope = branch_slope(params, sol.branch.parity, sol.separation, sol.theta);
    let value = 0.5 / (1.0 - slope);
    if !(value.is_finite() && value > 0.0 && value < 1.0) {
        return Err(Error::BandEdgeDegeneracy(format!(
            "{} at R={} gives residue {value}",
            sol.branch.label(),
            sol.separation
        )));
    }
    Ok(value)
}

/// Fraction of the residue picked up by `state` on a given bound state.
///
/// A bound state is either symmetric or antisymmetric under exchange of the
/// emitters. Above the band the `+` branch is the symmetric one; below it the
/// lattice sign `(-1)^R` alternates which branch is symmetric, continued to
/// non-integer `R` as `cos(πR)`. Summed over both Bell states the factor is
/// always 2, and `(|+> + |->)/√2` is the single-excitation state.
pub fn bell_factor(state: InitialState, sol: &ApbsSolution) -> f64 {
    let symmetric = sol.branch.parity.sign() * lattice_parity(sol.branch.side, sol.separation);
    match state {
        InitialState::SingleExcited => 1.0,
        InitialState::BellPlus => 1.0 + symmetric,
        InitialState::BellMinus => 1.0 - symmetric,
    }
}

/// Occupation numbers of every supplied bound state for `state`.
pub fn occupations(
    params: ModelParams,
    r: f64,
    state: InitialState,
    sols: &[ApbsSolution],
) -> Result<OccupationSet> {
    let entries = sols
        .iter()
        .map(|sol| {
            if (sol.separation - r).abs() > 1e-12 * r.abs().max(1.0) {
                return Err(Error::Mismatch(format!(
                    "solution at R={} passed for R={r}",
                    sol.separation
                )));
            }
            let alpha = residue_g11(params, sol)? * bell_factor(state, sol);
            Ok(Occupation {
                solution: *sol,
                alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OccupationSet {
        state,
        separation: r,
        entries,
    })
}

//! Waveguide band structure and the out-of-band lattice Green function.
//!
//! The waveguide is a chain with unit hopping, dispersion `-2 cos k`. Every
//! energy outside the band is written as `E = ±2 cosh θ` with `θ > 0`, and all
//! Green-function quantities are expressed through `θ`. Below the band the
//! lattice propagator carries an extra `(-1)^R`; for non-integer `R` it is
//! continued as `cos(πR)`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Emitter transition energy `omega` and emitter-waveguide coupling `u`,
/// both in units of the hopping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub u: f64,
}

impl ModelParams {
    /// Validates finiteness and `u >= 0`. A zero coupling is accepted here
    /// (the finite-chain oracle handles it) but rejected by the bound-state
    /// solver.
    pub fn new(omega: f64, u: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(invalid("omega", format!("must be finite, got {omega}")));
        }
        if !u.is_finite() || u < 0.0 {
            return Err(invalid("u", format!("must be finite and >= 0, got {u}")));
        }
        Ok(Self { omega, u })
    }

    pub fn u2(&self) -> f64 {
        self.u * self.u
    }

    pub(crate) fn require_coupling(&self) -> Result<()> {
        if self.u == 0.0 {
            Err(Error::NoCoupling)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandSide {
    Above,
    Below,
}

impl BandSide {
    /// `+1` above the band, `-1` below.
    pub fn sign(self) -> f64 {
        match self {
            BandSide::Above => 1.0,
            BandSide::Below => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BandSide::Above => "above",
            BandSide::Below => "below",
        }
    }
}

/// An out-of-band energy `side.sign() * 2 cosh(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    side: BandSide,
    theta: f64,
}

impl ThetaPoint {
    pub fn new(side: BandSide, theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::Domain(format!(
                "decay parameter must be finite and > 0, got {theta}"
            )));
        }
        Ok(Self { side, theta })
    }

    pub fn side(&self) -> BandSide {
        self.side
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn energy(&self) -> f64 {
        energy_from_theta(*self)
    }

    /// dθ/dE on this point's side of the band.
    pub fn dtheta_de(&self) -> f64 {
        self.side.sign() / (2.0 * self.theta.sinh())
    }
}

pub fn energy_from_theta(p: ThetaPoint) -> f64 {
    p.side.sign() * 2.0 * p.theta.cosh()
}

pub fn theta_from_energy(energy: f64) -> Result<ThetaPoint> {
    if !energy.is_finite() || energy.abs() <= 2.0 {
        return Err(Error::Domain(format!(
            "energy {energy} is not strictly outside the band [-2, 2]"
        )));
    }
    let side = if energy > 0.0 {
        BandSide::Above
    } else {
        BandSide::Below
    };
    ThetaPoint::new(side, (energy.abs() / 2.0).acosh())
}

pub fn dispersion(k: f64) -> f64 {
    -2.0 * k.cos()
}

/// Photon density of states per site inside the band.
pub fn density_of_states(energy: f64) -> Result<f64> {
    if energy.is_nan() || energy.abs() >= 2.0 {
        return Err(Error::Domain(format!(
            "density of states requested at E = {energy}, outside the open band (-2, 2)"
        )));
    }
    Ok(1.0 / (PI * (4.0 - energy * energy).sqrt()))
}

/// `cos(πr)`, exact at integer `r`.
pub fn cos_pi(r: f64) -> f64 {
    let x = r.rem_euclid(2.0);
    if x == 0.0 {
        1.0
    } else if x == 1.0 {
        -1.0
    } else {
        (PI * x).cos()
    }
}

/// Sign factor that separates the lattice propagator from its envelope:
/// 1 above the band, `cos(πR)` below.
pub fn lattice_parity(side: BandSide, r: f64) -> f64 {
    match side {
        BandSide::Above => 1.0,
        BandSide::Below => cos_pi(r),
    }
}

fn check_separation(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "separation must be finite and >= 0, got {r}"
        )))
    }
}

/// Smooth, sign-definite part of the propagator: `side_sign * e^{-θR} / (2 sinh θ)`.
///
/// This is what the bound-state branches are continuous in. It coincides
/// with [`free_green`] above the band and at even integer `R` below it.
pub fn free_green_envelope(r: f64, p: ThetaPoint) -> Result<f64> {
    check_separation(r)?;
    let theta = p.theta;
    Ok(p.side.sign() * (-theta * r).exp() / (2.0 * theta.sinh()))
}

/// Real-space waveguide Green function `G0(R, E)` for `|E| > 2`.
pub fn free_green(r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(lattice_parity(p.side, r) * free_green_envelope(r, p)?)
}

/// d/dE of [`free_green_envelope`].
pub fn d_free_green_envelope(r: f64, p: ThetaPoint) -> Result<f64> {
    check_separation(r)?;
    let theta = p.theta;
    let sh = theta.sinh();
    let decay = (-theta * r).exp();
    let d_theta = -decay * (r / (2.0 * sh) + theta.cosh() / (2.0 * sh * sh));
    Ok(p.side.sign() * d_theta * p.dtheta_de())
}

pub fn d_free_green(r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(lattice_parity(p.side, r) * d_free_green_envelope(r, p)?)
}

/// Real self-energy of one emitter outside the band.
pub fn self_energy(params: ModelParams, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * free_green(0.0, p)?)
}

/// Generalized self-energy; equals [`self_energy`] at `r == 0`.
pub fn gamma(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * free_green(r, p)?)
}

pub fn gamma_envelope(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * free_green_envelope(r, p)?)
}

pub fn d_self_energy(params: ModelParams, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * d_free_green(0.0, p)?)
}

pub fn d_gamma(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * d_free_green(r, p)?)
}

pub fn d_gamma_envelope(params: ModelParams, r: f64, p: ThetaPoint) -> Result<f64> {
    Ok(params.u2() * d_free_green_envelope(r, p)?)
}

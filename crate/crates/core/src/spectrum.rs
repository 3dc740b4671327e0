//! Bound-state eigenvalue problem.
//!
//! For each side of the band the bound states solve
//!
//! ```text
//! 2 sinh θ (2 cosh θ - s Ω) = U² (1 ± e^{-θR}),      s = +1 above, -1 below
//! ```
//!
//! `+` is the binding branch (present at every `R > 0`), `-` the antibinding
//! branch, which merges into the band for `R` below the critical radius
//! `2(2 - sΩ)/U²` when that is positive.
//!
//! The branch label follows the smooth envelope `e^{-θR}` on both sides, so
//! each branch is a continuous function of `R`. At integer `R` the set of
//! energies is the same as with the lattice propagator; below the band the
//! lattice sign `(-1)^R` only decides which branch is emitter-symmetric, see
//! [`crate::resolvent`].

use crate::error::{Error, Result};
use crate::model::{BandSide, ModelParams, ThetaPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Plus => "plus",
            Parity::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApbsBranch {
    pub side: BandSide,
    pub parity: Parity,
}

impl ApbsBranch {
    pub const ABOVE_PLUS: Self = Self::new(BandSide::Above, Parity::Plus);
    pub const ABOVE_MINUS: Self = Self::new(BandSide::Above, Parity::Minus);
    pub const BELOW_PLUS: Self = Self::new(BandSide::Below, Parity::Plus);
    pub const BELOW_MINUS: Self = Self::new(BandSide::Below, Parity::Minus);

    /// All four branches in the fixed output order.
    pub const ALL: [Self; 4] = [
        Self::ABOVE_PLUS,
        Self::ABOVE_MINUS,
        Self::BELOW_PLUS,
        Self::BELOW_MINUS,
    ];

    pub const fn new(side: BandSide, parity: Parity) -> Self {
        Self { side, parity }
    }

    /// `above_plus`, `below_minus`, ...
    pub fn label(&self) -> String {
        format!("{}_{}", self.side.name(), self.parity.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApbsSolution {
    pub branch: ApbsBranch,
    pub separation: f64,
    pub theta: f64,
    pub energy: f64,
}

impl ApbsSolution {
    pub fn theta_point(&self) -> ThetaPoint {
        ThetaPoint::new(self.branch.side, self.theta).expect("solutions carry theta > 0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRadius {
    pub side: BandSide,
    /// Separation below which the antibinding branch on `side` is absent.
    pub value: Option<f64>,
    /// The closed-form radius is exactly zero (band-edge resonance).
    pub degenerate: bool,
}

/// Lower end of the θ search window.
const THETA_MIN: f64 = 1e-12;
const SCAN_POINTS: usize = 200;
/// Antibinding states closer than this to their critical radius are
/// reported as merged with the band.
const CRITICAL_GATE: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta must be > 0, got {theta}")))
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

fn check_solvable(params: ModelParams) -> Result<()> {
    if !params.omega.is_finite() || !params.u.is_finite() {
        return Err(Error::InvalidParameter {
            name: "params",
            reason: "non-finite model parameters".into(),
        });
    }
    params.require_coupling()
}

/// `U² (1 ± e^{-θR})`, with the minus case evaluated through `expm1` so it
/// stays accurate as `θR → 0`.
fn branch_rhs(u2: f64, parity: Parity, theta: f64, r: f64) -> f64 {
    match parity {
        Parity::Plus => u2 * (1.0 + (-theta * r).exp()),
        Parity::Minus => -u2 * (-theta * r).exp_m1(),
    }
}

fn residual_unchecked(params: ModelParams, branch: ApbsBranch, r: f64, theta: f64) -> f64 {
    let s = branch.side.sign();
    let lhs = 2.0 * theta.sinh() * (2.0 * theta.cosh() - s * params.omega);
    lhs - branch_rhs(params.u2(), branch.parity, theta, r)
}

/// Left minus right side of the branch equation; zero exactly at a bound state.
pub fn eigenvalue_residual(
    params: ModelParams,
    branch: ApbsBranch,
    r: f64,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    check_separation(r)?;
    Ok(residual_unchecked(params, branch, r, theta))
}

/// Closed-form critical radius `2(2 - sΩ)/U²` of the antibinding branch.
///
/// Written with the signed `Ω` so that the `Ω → -Ω` mirror of the spectrum
/// is respected; for `Ω >= 0` this is the usual `2(2 - sign(E)|Ω|)/U²`.
pub fn critical_radius(params: ModelParams, side: BandSide) -> Result<CriticalRadius> {
    check_solvable(params)?;
    let value = 2.0 * (2.0 - side.sign() * params.omega) / params.u2();
    Ok(CriticalRadius {
        side,
        value: (value > 0.0).then_some(value),
        degenerate: value == 0.0,
    })
}

/// Upper end of the θ window; the left side grows like `e^{2θ}` and
/// overtakes the bounded right side before this point.
fn theta_max(params: ModelParams) -> f64 {
    ((params.omega.abs() + params.u2() + 6.0) / 2.0).acosh()
}

/// First sign change of `f` on a log-spaced grid over `[lo, hi]`.
fn bracket(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<(f64, f64, f64, f64)> {
    let ratio = (hi / lo).ln() / (SCAN_POINTS - 1) as f64;
    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        return Some((a, a, fa, fa));
    }
    for i in 1..SCAN_POINTS {
        let b = if i == SCAN_POINTS - 1 {
            hi
        } else {
            lo * (ratio * i as f64).exp()
        };
        let fb = f(b);
        if fb == 0.0 {
            return Some((b, b, fb, fb));
        }
        if fa.signum() != fb.signum() {
            return Some((a, b, fa, fb));
        }
        a = b;
        fa = fb;
    }
    None
}

/// Bisection to machine precision followed by one secant step inside the
/// final bracket.
fn refine(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64) -> f64 {
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let secant = lo - flo * (hi - lo) / (fhi - flo);
    let candidates = [lo, hi, secant.clamp(lo, hi)];
    candidates
        .into_iter()
        .min_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
        .unwrap_or(lo)
}

/// Root of the branch equation for an arbitrary right-hand side, if bracketed.
fn solve_theta(params: ModelParams, f: impl Fn(f64) -> f64) -> Option<f64> {
    let hi = theta_max(params);
    let (a, b, fa, fb) = bracket(&f, THETA_MIN, hi)?;
    Some(refine(&f, a, b, fa, fb))
}

fn solution(branch: ApbsBranch, r: f64, theta: f64) -> ApbsSolution {
    ApbsSolution {
        branch,
        separation: r,
        theta,
        energy: branch.side.sign() * 2.0 * theta.cosh(),
    }
}

/// Solves one branch at separation `r`; `Ok(None)` when the branch is merged
/// with the band.
pub fn solve_branch(
    params: ModelParams,
    branch: ApbsBranch,
    r: f64,
) -> Result<Option<ApbsSolution>> {
    check_solvable(params)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("separation must be > 0, got {r}")));
    }

    let mut expected = true;
    if branch.parity == Parity::Minus {
        let cr = critical_radius(params, branch.side)?;
        if let Some(rc) = cr.value {
            let gate = CRITICAL_GATE * rc.max(1.0);
            if r <= rc + gate {
                if r >= rc - gate {
                    // At the edge itself: merged, and too marginal to cross-check.
                    return Ok(None);
                }
                expected = false;
            }
        }
    }

    let f = |theta: f64| residual_unchecked(params, branch, r, theta);
    let found = solve_theta(params, f);

    match (found, expected) {
        (Some(theta), true) => {
            let res = residual_unchecked(params, branch, r, theta);
            if res.abs() > RESIDUAL_TOL * params.u2().max(1.0) {
                return Err(Error::Consistency(format!(
                    "{} at R={r}: residual {res:e} after refinement",
                    branch.label()
                )));
            }
            Ok(Some(solution(branch, r, theta)))
        }
        (None, false) => Ok(None),
        (Some(theta), false) => Err(Error::Consistency(format!(
            "{} at R={r}: root at theta={theta:e} although the critical radius predicts none",
            branch.label()
        ))),
        (None, true) => Err(Error::Consistency(format!(
            "{} at R={r}: no root bracketed although the critical radius predicts one",
            branch.label()
        ))),
    }
}

/// All bound states at separation `r`, sorted by energy, highest first.
pub fn solve_apbs(params: ModelParams, r: f64) -> Result<Vec<ApbsSolution>> {
    let mut out = Vec::with_capacity(4);
    for branch in ApbsBranch::ALL {
        if let Some(sol) = solve_branch(params, branch, r)? {
            out.push(sol);
        }
    }
    out.sort_by(|a, b| b.energy.total_cmp(&a.energy));
    Ok(out)
}

/// θ of the isolated emitter's bound state on `side`:
/// `2 sinh θ (2 cosh θ - sΩ) = U²`.
fn isolated_theta(params: ModelParams, side: BandSide) -> Result<f64> {
    check_solvable(params)?;
    let s = side.sign();
    let u2 = params.u2();
    solve_theta(params, |t| {
        2.0 * t.sinh() * (2.0 * t.cosh() - s * params.omega) - u2
    })
    .ok_or_else(|| {
        Error::Consistency(format!(
            "single-emitter bound state {} the band not bracketed",
            side.name()
        ))
    })
}

/// `(E_above, E_below)` of one emitter; the `R → ∞` limit of every branch.
pub fn single_emitter_bound_states(params: ModelParams) -> Result<(f64, f64)> {
    let above = isolated_theta(params, BandSide::Above)?;
    let below = isolated_theta(params, BandSide::Below)?;
    Ok((2.0 * above.cosh(), -2.0 * below.cosh()))
}

/// `f'(θ) = 2 cosh 2θ - sΩ cosh θ`, the θ-derivative shared by all
/// expansions below.
fn f_prime(params: ModelParams, side: BandSide, theta: f64) -> f64 {
    2.0 * (2.0 * theta).cosh() - side.sign() * params.omega * theta.cosh()
}

/// θ of a branch at `R = 0`, if the branch survives that limit.
fn theta_at_contact(params: ModelParams, branch: ApbsBranch) -> Result<f64> {
    check_solvable(params)?;
    let s = branch.side.sign();
    match branch.parity {
        Parity::Plus => {
            let u2 = params.u2();
            solve_theta(params, |t| {
                2.0 * t.sinh() * (2.0 * t.cosh() - s * params.omega) - 2.0 * u2
            })
            .ok_or_else(|| Error::Consistency(format!("{} at R=0 not bracketed", branch.label())))
        }
        // The right side vanishes at R = 0, leaving 2 cosh θ = sΩ.
        Parity::Minus if s * params.omega > 2.0 => Ok((s * params.omega / 2.0).acosh()),
        Parity::Minus => Err(Error::Domain(format!(
            "{} does not exist as R -> 0 (critical radius {})",
            branch.label(),
            2.0 * (2.0 - s * params.omega) / params.u2()
        ))),
    }
}

/// Linear small-`R` expansion `E ≈ s(2 cosh θ₀ ∓ γ₀ R)` with
/// `γ₀ = U² θ₀ sinh θ₀ / f'(θ₀)`.
pub fn asymptotic_small_r(params: ModelParams, branch: ApbsBranch, r: f64) -> Result<f64> {
    check_separation(r)?;
    let theta0 = theta_at_contact(params, branch)?;
    let gamma0 = params.u2() * theta0 * theta0.sinh() / f_prime(params, branch.side, theta0);
    let s = branch.side.sign();
    Ok(s * (2.0 * theta0.cosh() - branch.parity.sign() * gamma0 * r))
}

/// Large-`R` expansion `E ≈ s(2 cosh θ∞ ± γ∞ e^{-Rθ∞})` with
/// `γ∞ = U² sinh θ∞ / f'(θ∞)`.
pub fn asymptotic_large_r(params: ModelParams, branch: ApbsBranch, r: f64) -> Result<f64> {
    check_separation(r)?;
    let theta_inf = isolated_theta(params, branch.side)?;
    let gamma_inf = params.u2() * theta_inf.sinh() / f_prime(params, branch.side, theta_inf);
    let s = branch.side.sign();
    Ok(s * (2.0 * theta_inf.cosh() + branch.parity.sign() * gamma_inf * (-r * theta_inf).exp()))
}

/// Emergence of the antibinding branch from the band edge:
/// `E ≈ s(2 + 4 ΔR² / R_cr⁴)`, from `θ ≈ 2ΔR/R_cr²`.
pub fn asymptotic_near_critical(params: ModelParams, side: BandSide, r: f64) -> Result<f64> {
    let cr = critical_radius(params, side)?;
    let rc = cr
        .value
        .ok_or_else(|| Error::Domain(format!("no critical radius {} the band", side.name())))?;
    let dr = r - rc;
    if dr.is_nan() || dr < 0.0 {
        return Err(Error::Domain(format!(
            "R = {r} lies below the critical radius {rc}"
        )));
    }
    Ok(side.sign() * (2.0 + 4.0 * dr * dr / rc.powi(4)))
}

/// Result of an expansion whose regime has not been validated against the
/// exact solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnverifiedEstimate {
    pub energy: f64,
    pub regime_verified: bool,
}

/// Band-edge expansion above the band when the critical radius is (close
/// to) zero: `E ≈ 2 + U √(3ΔR) / √(8 - Ω)`, as published.
///
/// Not confirmed by the solver: for `Ω = 2` the branch equation gives
/// `θ² ≈ U²R/2` at leading order, so the published form tracks `2 + θ`
/// rather than `2 cosh θ`. Always returned with `regime_verified = false`.
pub fn asymptotic_degenerate_critical(params: ModelParams, r: f64) -> Result<UnverifiedEstimate> {
    check_solvable(params)?;
    if params.omega >= 8.0 {
        return Err(Error::Domain(format!(
            "expansion requires omega < 8, got {}",
            params.omega
        )));
    }
    let rc = (2.0 * (2.0 - params.omega) / params.u2()).max(0.0);
    let dr = r - rc;
    if dr.is_nan() || dr < 0.0 {
        return Err(Error::Domain(format!(
            "R = {r} lies below the critical radius {rc}"
        )));
    }
    Ok(UnverifiedEstimate {
        energy: 2.0 + params.u * (3.0 * dr).sqrt() / (8.0 - params.omega).sqrt(),
        regime_verified: false,
    })
}

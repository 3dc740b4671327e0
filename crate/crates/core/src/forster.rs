//! Förster interaction potential carried by the bound states.
//!
//! `φ(R) = Σ_i α_i(R) E_i(R) - Σ_i α_i(∞) E_i(∞)` over the bound states that
//! exist at `R`. The subtracted constant is evaluated from the isolated
//! emitter, where each side of the band contributes one level with weight
//! `1/(1 - Σ')`. When the antibinding branch below the band has merged with
//! the continuum it contributes nothing at `R`, while its share of the
//! constant is still subtracted; the abrupt return of that channel at the
//! critical radius is what produces a kink in `φ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{d_self_energy, theta_from_energy, BandSide, ModelParams};
use crate::resolvent::{occupations, InitialState};
use crate::spectrum::{critical_radius, single_emitter_bound_states, solve_apbs, ApbsBranch};

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPoint {
    pub separation: f64,
    pub phi: f64,
    /// `α·E` per bound state present at this separation.
    pub contributions: Vec<(ApbsBranch, f64)>,
    pub n_states: usize,
}

impl PotentialPoint {
    pub fn contribution(&self, branch: ApbsBranch) -> Option<f64> {
        self.contributions
            .iter()
            .find(|(b, _)| *b == branch)
            .map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Minimum,
    Maximum,
    Cusp,
}

impl FeatureKind {
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Minimum => "minimum",
            FeatureKind::Maximum => "maximum",
            FeatureKind::Cusp => "cusp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub kind: FeatureKind,
    pub separation: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub state: InitialState,
    pub params: ModelParams,
    pub points: Vec<PotentialPoint>,
    pub features: Vec<Feature>,
}

/// Closed, uniformly spaced grid of separations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, r_step: f64) -> Result<Self> {
        let bad = |name, reason: &str| Error::InvalidParameter {
            name,
            reason: reason.to_string(),
        };
        if !(r_min.is_finite() && r_min > 0.0) {
            return Err(bad("r_min", "must be finite and > 0"));
        }
        if !(r_max.is_finite() && r_max >= r_min) {
            return Err(bad("r_max", "must be finite and >= r_min"));
        }
        if !(r_step.is_finite() && r_step > 0.0) {
            return Err(bad("r_step", "must be finite and > 0"));
        }
        Ok(Self {
            r_min,
            r_max,
            r_step,
        })
    }

    pub fn len(&self) -> usize {
        ((self.r_max - self.r_min) / self.r_step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.r_min + i as f64 * self.r_step)
            .collect()
    }
}

/// `Σ α(∞) E(∞)`, the value of `Σ α E` for well separated emitters.
///
/// The same for all three initial states: at infinite separation each of
/// them puts a total weight `1/(1 - Σ'(E∞))` on each side of the band.
pub fn baseline(params: ModelParams, _state: InitialState) -> Result<f64> {
    let (above, below) = single_emitter_bound_states(params)?;
    let weight =
        |e: f64| -> Result<f64> { Ok(1.0 / (1.0 - d_self_energy(params, theta_from_energy(e)?)?)) };
    Ok(weight(above)? * above + weight(below)? * below)
}

fn potential_with_baseline(
    params: ModelParams,
    r: f64,
    state: InitialState,
    base: f64,
) -> Result<PotentialPoint> {
    let sols = solve_apbs(params, r)?;
    let occ = occupations(params, r, state, &sols)?;
    let mut contributions: Vec<(ApbsBranch, f64)> = occ
        .entries
        .iter()
        .map(|o| (o.solution.branch, o.alpha * o.solution.energy))
        .collect();
    contributions.sort_by_key(|(b, _)| *b);
    let phi = contributions.iter().map(|(_, v)| v).sum::<f64>() - base;
    Ok(PotentialPoint {
        separation: r,
        phi,
        contributions,
        n_states: sols.len(),
    })
}

pub fn potential(params: ModelParams, r: f64, state: InitialState) -> Result<PotentialPoint> {
    let base = baseline(params, state)?;
    potential_with_baseline(params, r, state, base)
}

/// Evaluates `φ` on `grid` (in parallel; output order follows the grid) and
/// runs [`detect_features`] on the result.
pub fn scan_potential(
    params: ModelParams,
    state: InitialState,
    grid: Grid,
) -> Result<PotentialCurve> {
    let base = baseline(params, state)?;
    let points = grid
        .points()
        .into_par_iter()
        .map(|r| potential_with_baseline(params, r, state, base))
        .collect::<Result<Vec<_>>>()?;
    let mut curve = PotentialCurve {
        state,
        params,
        points,
        features: Vec::new(),
    };
    curve.features = detect_features(&curve);
    Ok(curve)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Local extrema from sign changes of the first differences, and cusps.
///
/// A cusp is a point where the change between the left and right discrete
/// slopes exceeds ten times the median change along the curve, within two
/// grid steps of a critical radius. At most one cusp is reported per
/// critical radius (the strongest jump). Curves shorter than five points
/// yield no features.
pub fn detect_features(curve: &PotentialCurve) -> Vec<Feature> {
    let pts = &curve.points;
    if pts.len() < 5 {
        return Vec::new();
    }
    let r: Vec<f64> = pts.iter().map(|p| p.separation).collect();
    let phi: Vec<f64> = pts.iter().map(|p| p.phi).collect();
    let slopes: Vec<f64> = (0..pts.len() - 1)
        .map(|i| (phi[i + 1] - phi[i]) / (r[i + 1] - r[i]))
        .collect();

    let mut features = Vec::new();
    for i in 1..pts.len() - 1 {
        let (left, right) = (phi[i] - phi[i - 1], phi[i + 1] - phi[i]);
        let kind = if left < 0.0 && right > 0.0 {
            Some(FeatureKind::Minimum)
        } else if left > 0.0 && right < 0.0 {
            Some(FeatureKind::Maximum)
        } else {
            None
        };
        if let Some(kind) = kind {
            features.push(Feature {
                kind,
                separation: r[i],
                value: phi[i],
            });
        }
    }

    // jumps[j] is the slope change at point j + 1.
    let jumps: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let threshold = 10.0 * median(&jumps);
    let step = (r[r.len() - 1] - r[0]) / (r.len() - 1) as f64;
    for side in [BandSide::Above, BandSide::Below] {
        let Ok(cr) = critical_radius(curve.params, side) else {
            continue;
        };
        let Some(rc) = cr.value else { continue };
        let strongest = jumps
            .iter()
            .enumerate()
            .filter(|(j, _)| (r[j + 1] - rc).abs() <= 2.0 * step + 1e-9)
            .filter(|(_, &jump)| jump > threshold && jump > 0.0)
            .max_by(|a, b| a.1.total_cmp(b.1));
        if let Some((j, _)) = strongest {
            features.push(Feature {
                kind: FeatureKind::Cusp,
                separation: r[j + 1],
                value: phi[j + 1],
            });
        }
    }
    features.sort_by(|a, b| a.separation.total_cmp(&b.separation));
    features
}

//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the verdict lines are always printed:
//! `cargo test -p wgfret --test acceptance`.

use std::process::ExitCode;

use wgfret::forster::{potential, scan_potential, FeatureKind, Grid, PotentialCurve};
use wgfret::model::{
    d_gamma, d_self_energy, gamma, self_energy, theta_from_energy, BandSide, ModelParams,
};
use wgfret::oracle::{oracle_apbs, Boundary, FiniteChainSpec};
use wgfret::resolvent::{dq_function, occupations, q_function, residue_g11, InitialState};
use wgfret::spectrum::{
    asymptotic_large_r, asymptotic_small_r, critical_radius, single_emitter_bound_states,
    solve_apbs, solve_branch, ApbsBranch,
};

struct Verdict {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict {
        id,
        name,
        pass,
        detail,
    }
}

fn fig() -> ModelParams {
    ModelParams::new(2.5, 1.0).unwrap()
}

fn energy(branch: ApbsBranch, r: f64) -> Option<f64> {
    solve_branch(fig(), branch, r).unwrap().map(|s| s.energy)
}

fn caption_values() -> Vec<Verdict> {
    let (above, below) = single_emitter_bound_states(fig()).unwrap();
    let single_ok = (above - 2.959).abs() <= 2e-3 && (below + 2.012).abs() <= 2e-3;
    let sols = solve_apbs(fig(), 0.1).unwrap();
    let got: Vec<f64> = sols.iter().map(|s| s.energy).collect();
    let want = [3.243, 2.544, -2.046];
    let near_ok = got.len() == 3 && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 5e-3);
    vec![
        verdict(
            "1a",
            "isolated emitter bound states 2.959 / -2.012",
            single_ok,
            format!("got {above:.6} / {below:.6}"),
        ),
        verdict(
            "1b",
            "bound states at R=0.1: 3.243, 2.544, -2.046",
            near_ok,
            format!("got {got:.6?}"),
        ),
    ]
}

fn critical_radius_checks() -> Vec<Verdict> {
    let below = critical_radius(fig(), BandSide::Below).unwrap();
    let above = critical_radius(fig(), BandSide::Above).unwrap();
    let before = energy(ApbsBranch::BELOW_MINUS, 8.95);
    let after = energy(ApbsBranch::BELOW_MINUS, 9.05);
    vec![
        verdict(
            "2a",
            "critical radius below the band is 9, none above",
            below.value == Some(9.0) && above.value.is_none(),
            format!("below {:?}, above {:?}", below.value, above.value),
        ),
        verdict(
            "2b",
            "below/- branch absent at R=8.95, present at R=9.05",
            before.is_none() && after.is_some(),
            format!("8.95 -> {before:?}, 9.05 -> {after:?}"),
        ),
    ]
}

fn near_critical_law() -> Vec<Verdict> {
    // Least squares through the origin of |E| - 2 against (R - 9)².
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 1..=50 {
        let r = 9.0 + 0.01 * i as f64;
        let e = energy(ApbsBranch::BELOW_MINUS, r).expect("branch exists past R_cr");
        let x = (r - 9.0).powi(2);
        sxy += x * (e.abs() - 2.0);
        sxx += x * x;
    }
    let coeff = sxy / sxx;
    let target = 4.0 / 81.0;
    let rel = (coeff - target).abs() / target;
    vec![verdict(
        "3",
        "near-critical coefficient 4/81 within 5%",
        rel <= 0.05,
        format!("fitted {coeff:.4e} vs {target:.4e} (relative error {rel:.3})"),
    )]
}

fn oracle_spectrum(r: usize) -> wgfret::oracle::OracleSpectrum {
    oracle_apbs(&FiniteChainSpec::centered(600, Boundary::Ring, r, fig()).unwrap()).unwrap()
}

fn oracle_equivalence() -> Vec<Verdict> {
    let (mut de, mut da, mut counts_ok) = (0.0_f64, 0.0_f64, true);
    for r in 1..=12 {
        let rf = r as f64;
        let sols = solve_apbs(fig(), rf).unwrap();
        let occ = occupations(fig(), rf, InitialState::SingleExcited, &sols).unwrap();
        let orc = oracle_spectrum(r).bound_states_descending(InitialState::SingleExcited);
        counts_ok &= orc.len() == sols.len();
        for (o, (e, w)) in occ.entries.iter().zip(orc) {
            de = de.max((o.solution.energy - e).abs());
            da = da.max((o.alpha - w).abs());
        }
    }
    vec![
        verdict(
            "4a",
            "energies match N=600 ring diagonalization within 1e-6, R=1..12",
            counts_ok && de <= 1e-6,
            format!("max |dE| = {de:.3e}, state counts agree: {counts_ok}"),
        ),
        verdict(
            "4b",
            "single-excitation occupations match overlaps within 1e-3, R=1..12",
            counts_ok && da <= 1e-3,
            format!("max |d alpha| = {da:.3e}"),
        ),
    ]
}

fn structural_zeros() -> Vec<Verdict> {
    let mut above_max = 0.0_f64;
    for i in 1..=120 {
        let r = 0.1 * i as f64;
        let sols = solve_apbs(fig(), r).unwrap();
        let occ = occupations(fig(), r, InitialState::BellMinus, &sols).unwrap();
        for o in occ
            .entries
            .iter()
            .filter(|o| o.solution.branch.side == BandSide::Above)
        {
            above_max = above_max.max(o.alpha.abs());
        }
    }

    // Below the band exactly one Bell state is dark on each level at integer R.
    let (mut formula_max, mut oracle_max, mut zeros) = (0.0_f64, 0.0_f64, 0);
    for r in 1..=12 {
        let rf = r as f64;
        let sols = solve_apbs(fig(), rf).unwrap();
        let spec = oracle_spectrum(r);
        for state in [InitialState::BellPlus, InitialState::BellMinus] {
            let occ = occupations(fig(), rf, state, &sols).unwrap();
            let orc = spec.bound_states_descending(state);
            for (o, (_, w)) in occ.entries.iter().zip(orc) {
                if o.solution.branch.side != BandSide::Below {
                    continue;
                }
                let expected_zero = {
                    let other = match state {
                        InitialState::BellPlus => InitialState::BellMinus,
                        _ => InitialState::BellPlus,
                    };
                    let twin = occupations(fig(), rf, other, &[o.solution]).unwrap();
                    o.alpha < twin.entries[0].alpha
                };
                if expected_zero {
                    zeros += 1;
                    formula_max = formula_max.max(o.alpha.abs());
                    oracle_max = oracle_max.max(w);
                }
            }
        }
    }
    vec![
        verdict(
            "5a",
            "bell_minus occupation of every above-band state is identically 0",
            above_max == 0.0,
            format!("max above-band alpha for bell_minus over R=0.1..12 is {above_max:.4}"),
        ),
        verdict(
            "5b",
            "below-band (1 +/- cos pi R) zeros: formula < 1e-10, oracle < 1e-8",
            zeros > 0 && formula_max < 1e-10 && oracle_max < 1e-8,
            format!(
                "{zeros} dark levels; formula max {formula_max:.1e}, oracle max {oracle_max:.1e}"
            ),
        ),
    ]
}

fn curve(state: InitialState) -> PotentialCurve {
    scan_potential(fig(), state, Grid::new(0.1, 12.0, 0.01).unwrap()).unwrap()
}

fn slope_at(c: &PotentialCurve, i: usize) -> f64 {
    let (a, b) = (&c.points[i], &c.points[i + 1]);
    (b.phi - a.phi) / (b.separation - a.separation)
}

fn potential_features() -> Vec<Verdict> {
    let plus = curve(InitialState::BellPlus);
    let single = curve(InitialState::SingleExcited);

    let gmin = plus
        .points
        .iter()
        .min_by(|a, b| a.phi.total_cmp(&b.phi))
        .unwrap();

    let cusps: Vec<f64> = single
        .features
        .iter()
        .filter(|f| f.kind == FeatureKind::Cusp)
        .map(|f| f.separation)
        .collect();
    let i9 = single
        .points
        .iter()
        .position(|p| (p.separation - 9.0).abs() < 1e-9)
        .unwrap();
    let (left, right) = (slope_at(&single, i9 - 1), slope_at(&single, i9));
    let opens_one_side = single.points[i9 - 1]
        .contribution(ApbsBranch::BELOW_MINUS)
        .is_none()
        && single.points[i9 + 1]
            .contribution(ApbsBranch::BELOW_MINUS)
            .is_some();
    let cusp_ok = cusps.len() == 1 && (cusps[0] - 9.0).abs() <= 0.02 && opens_one_side;

    let minima: Vec<f64> = single
        .features
        .iter()
        .filter(|f| f.kind == FeatureKind::Minimum)
        .map(|f| f.separation)
        .collect();
    let local_min = minima.iter().find(|r| (**r - 4.5).abs() <= 0.5);

    let plus_cusps: Vec<f64> = plus
        .features
        .iter()
        .filter(|f| f.kind == FeatureKind::Cusp)
        .map(|f| f.separation)
        .collect();

    let mut decay = Vec::new();
    for state in InitialState::ALL {
        let near = potential(fig(), 1.5, state).unwrap().phi;
        let far = potential(fig(), 100.0, state).unwrap().phi;
        decay.push((state, far, near));
    }
    let decay_ok = decay
        .iter()
        .all(|(_, far, near)| far.abs() <= 1e-3 * near.abs());

    vec![
        verdict(
            "6a",
            "bell_plus global minimum at R = 1.5 +/- 0.25",
            (gmin.separation - 1.5).abs() <= 0.25,
            format!("minimum {:.5} at R = {:.2}", gmin.phi, gmin.separation),
        ),
        verdict(
            "6b",
            "single_excited cusp at R = 9.00 +/- 0.02, one-sided",
            cusp_ok,
            format!(
                "cusps at {cusps:?}; slopes {left:.4} | {right:.4}; below/- opens only for R > 9: {opens_one_side}"
            ),
        ),
        verdict(
            "6c",
            "single_excited local minimum at R = 4.5 +/- 0.5",
            local_min.is_some(),
            format!("minima at {minima:.2?}"),
        ),
        verdict(
            "6d",
            "bell_plus potential has no cusp",
            plus_cusps.is_empty(),
            format!("cusps detected at {plus_cusps:?}"),
        ),
        verdict(
            "6e",
            "|phi(100)| <= 1e-3 |phi(1.5)| for every initial state",
            decay_ok,
            decay
                .iter()
                .map(|(s, far, near)| format!("{s}: {far:.2e} vs {near:.4}"))
                .collect::<Vec<_>>()
                .join("; "),
        ),
    ]
}

fn asymptotics() -> Vec<Verdict> {
    let mut large = 0.0_f64;
    for branch in [ApbsBranch::ABOVE_PLUS, ApbsBranch::ABOVE_MINUS] {
        let exact = energy(branch, 20.0).unwrap();
        large = large.max((exact - asymptotic_large_r(fig(), branch, 20.0).unwrap()).abs());
    }

    let h = 1e-5;
    let mut worst_slope = 0.0_f64;
    let mut slopes = Vec::new();
    for branch in [
        ApbsBranch::ABOVE_PLUS,
        ApbsBranch::ABOVE_MINUS,
        ApbsBranch::BELOW_PLUS,
    ] {
        let fd = (energy(branch, 2.0 * h).unwrap() - energy(branch, h).unwrap()) / h;
        let formula = asymptotic_small_r(fig(), branch, 1.0).unwrap()
            - asymptotic_small_r(fig(), branch, 0.0).unwrap();
        worst_slope = worst_slope.max((formula - fd).abs() / fd.abs());
        slopes.push(format!("{}: {formula:.5} vs {fd:.5}", branch.label()));
    }

    // ln(E+ - E-) = const - θ∞ R over R in [10, 20].
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let r = 10.0 + 0.5 * i as f64;
            let split = energy(ApbsBranch::ABOVE_PLUS, r).unwrap()
                - energy(ApbsBranch::ABOVE_MINUS, r).unwrap();
            (r, split.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let (above, _) = single_emitter_bound_states(fig()).unwrap();
    let theta_inf = theta_from_energy(above).unwrap().theta();
    let rel = (-slope - theta_inf).abs() / theta_inf;

    vec![
        verdict(
            "7a",
            "large-R expansion within 1e-6 of the solver at R=20 (above band)",
            large <= 1e-6,
            format!("max |dE| = {large:.2e}"),
        ),
        verdict(
            "7b",
            "small-R slope within 1% of the finite-difference solver slope",
            worst_slope <= 0.01,
            format!(
                "{} (worst relative error {worst_slope:.2e})",
                slopes.join("; ")
            ),
        ),
        verdict(
            "7c",
            "log-linear fit of above-band splitting recovers theta_inf within 1%",
            rel <= 0.01,
            format!("fitted {:.6} vs {theta_inf:.6}", -slope),
        ),
    ]
}

fn five_point(f: impl Fn(f64) -> f64, e: f64) -> f64 {
    let h = 1e-3 * (e.abs() - 2.0);
    (8.0 * (f(e + h) - f(e - h)) - (f(e + 2.0 * h) - f(e - 2.0 * h))) / (12.0 * h)
}

fn derivative_suite() -> Vec<Verdict> {
    let p = fig();
    let at = |e: f64| theta_from_energy(e).unwrap();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
    let (mut ws, mut wg, mut wq) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..=80 {
        let mag = 2.001 + (6.0 - 2.001) * i as f64 / 80.0;
        for e in [mag, -mag] {
            ws = ws.max(rel(
                d_self_energy(p, at(e)).unwrap(),
                five_point(|x| self_energy(p, at(x)).unwrap(), e),
            ));
            for r in [0.5, 1.0, 3.0, 7.25] {
                wg = wg.max(rel(
                    d_gamma(p, r, at(e)).unwrap(),
                    five_point(|x| gamma(p, r, at(x)).unwrap(), e),
                ));
                wq = wq.max(rel(
                    dq_function(p, r, at(e)).unwrap(),
                    five_point(|x| q_function(p, r, at(x)).unwrap(), e),
                ));
            }
        }
    }

    let mut gamma0 = 0.0_f64;
    for e in [2.001, 2.5, 3.0, 6.0, -2.001, -3.0, -6.0] {
        gamma0 = gamma0.max((gamma(p, 0.0, at(e)).unwrap() - self_energy(p, at(e)).unwrap()).abs());
    }

    let mut completeness = 0.0_f64;
    for r in [1, 5, 10] {
        let spec = oracle_spectrum(r);
        for state in InitialState::ALL {
            completeness = completeness.max((spec.completeness(state) - 1.0).abs());
        }
    }

    // Residue of G11 = (E - Ω - Σ)/Q' = 1/2 (1 - Σ' ∓ Γ')^{-1}.
    let mut pf = 0.0_f64;
    for r in [0.5, 1.0, 2.0, 4.0, 9.5, 12.0] {
        for sol in solve_apbs(p, r).unwrap() {
            let t = sol.theta_point();
            let x = sol.energy - p.omega - self_energy(p, t).unwrap();
            let pole_form = x / dq_function(p, r, t).unwrap();
            let res = residue_g11(p, &sol).unwrap();
            pf = pf.max((pole_form - res).abs() / res);
        }
    }

    vec![
        verdict(
            "8a",
            "analytic Sigma', Gamma', Q' match finite differences (rel < 1e-6), |E| in [2.001, 6]",
            ws < 1e-6 && wg < 1e-6 && wq < 1e-6,
            format!("worst relative error: Sigma' {ws:.1e}, Gamma' {wg:.1e}, Q' {wq:.1e}"),
        ),
        verdict(
            "8b",
            "Gamma(0, E) = Sigma(E)",
            gamma0 == 0.0,
            format!("max difference {gamma0:.1e}"),
        ),
        verdict(
            "8c",
            "oracle completeness within 1e-10",
            completeness < 1e-10,
            format!("max |sum - 1| = {completeness:.1e}"),
        ),
        verdict(
            "8d",
            "residue partial-fraction identity within 1e-10",
            pf < 1e-10,
            format!("max relative difference {pf:.1e}"),
        ),
    ]
}

fn main() -> ExitCode {
    let groups: [fn() -> Vec<Verdict>; 8] = [
        caption_values,
        critical_radius_checks,
        near_critical_law,
        oracle_equivalence,
        structural_zeros,
        potential_features,
        asymptotics,
        derivative_suite,
    ];
    let mut failed = 0;
    let mut total = 0;
    for group in groups {
        for v in group() {
            total += 1;
            if !v.pass {
                failed += 1;
            }
            println!(
                "{} criterion {:<3} {}: {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.id,
                v.name,
                v.detail
            );
        }
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

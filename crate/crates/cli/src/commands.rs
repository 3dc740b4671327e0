use rayon::prelude::*;

use wgfret::forster::scan_potential;
use wgfret::model::BandSide;
use wgfret::oracle::{oracle_apbs, FiniteChainSpec};
use wgfret::resolvent::{occupations, residue_g11, InitialState};
use wgfret::spectrum::{critical_radius, solve_apbs, solve_branch, ApbsBranch};

use crate::config::{Command, RunConfig};
use crate::output::{Cell, Section, Table};
use crate::CliError;

/// Energy and weight tolerances for `compare`.
pub const COMPARE_ENERGY_TOL: f64 = 1e-5;
pub const COMPARE_ALPHA_TOL: f64 = 5e-3;

pub struct Outcome {
    pub table: Table,
    /// Set when a comparison exceeded its tolerance.
    pub mismatch: bool,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self {
            table,
            mismatch: false,
        }
    }
}

fn table(config: &RunConfig, columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Table {
    Table {
        schema: config.command.name(),
        echo: config.echo(),
        columns,
        rows,
        sections: Vec::new(),
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Spectrum => spectrum(config).map(Outcome::ok),
        Command::Potential => potential(config).map(Outcome::ok),
        Command::Occupations => occupation_table(config).map(Outcome::ok),
        Command::Critical => critical(config).map(Outcome::ok),
        Command::Oracle => oracle(config).map(Outcome::ok),
        Command::Compare => compare(config),
    }
}

fn spectrum(config: &RunConfig) -> Result<Table, CliError> {
    let per_r = config
        .grid
        .points()
        .into_par_iter()
        .map(|r| {
            ApbsBranch::ALL
                .iter()
                .map(|&branch| {
                    let sol = solve_branch(config.params, branch, r)?;
                    Ok(vec![
                        Cell::Float(r),
                        Cell::Text(branch.label()),
                        Cell::opt(sol.map(|s| s.theta)),
                        Cell::opt(sol.map(|s| s.energy)),
                        Cell::Bool(sol.is_some()),
                    ])
                })
                .collect::<Result<Vec<_>, wgfret::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(table(
        config,
        vec!["R", "branch", "theta", "energy", "exists"],
        per_r.into_iter().flatten().collect(),
    ))
}

fn potential(config: &RunConfig) -> Result<Table, CliError> {
    let curve = scan_potential(config.params, config.state, config.grid)?;
    let rows = curve
        .points
        .iter()
        .map(|p| {
            let mut row = vec![Cell::Float(p.separation), Cell::Float(p.phi)];
            row.extend(
                ApbsBranch::ALL
                    .iter()
                    .map(|&b| Cell::opt(p.contribution(b))),
            );
            row.push(Cell::Int(p.n_states as i64));
            row
        })
        .collect();
    let mut t = table(
        config,
        vec![
            "R",
            "phi",
            "contrib_above_plus",
            "contrib_above_minus",
            "contrib_below_plus",
            "contrib_below_minus",
            "n_states",
        ],
        rows,
    );
    t.sections.push(Section {
        name: "features",
        columns: vec!["kind", "R", "value"],
        rows: curve
            .features
            .iter()
            .map(|f| {
                vec![
                    Cell::Text(f.kind.name().into()),
                    Cell::Float(f.separation),
                    Cell::Float(f.value),
                ]
            })
            .collect(),
    });
    Ok(t)
}

fn occupation_table(config: &RunConfig) -> Result<Table, CliError> {
    let per_r = config
        .grid
        .points()
        .into_par_iter()
        .map(|r| {
            let sols = solve_apbs(config.params, r)?;
            let occ = occupations(config.params, r, config.state, &sols)?;
            occ.entries
                .iter()
                .map(|o| {
                    Ok(vec![
                        Cell::Float(r),
                        Cell::Text(o.solution.branch.label()),
                        Cell::Float(o.solution.energy),
                        Cell::Float(residue_g11(config.params, &o.solution)?),
                        Cell::Float(o.alpha),
                    ])
                })
                .collect::<Result<Vec<_>, wgfret::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(table(
        config,
        vec!["R", "branch", "energy", "residue", "alpha"],
        per_r.into_iter().flatten().collect(),
    ))
}

fn critical(config: &RunConfig) -> Result<Table, CliError> {
    let rows = [BandSide::Above, BandSide::Below]
        .into_iter()
        .map(|side| {
            let cr = critical_radius(config.params, side)?;
            Ok(vec![
                Cell::Text(side.name().into()),
                Cell::opt(cr.value),
                Cell::Bool(cr.degenerate),
            ])
        })
        .collect::<Result<Vec<_>, wgfret::Error>>()?;
    Ok(table(
        config,
        vec!["side", "critical_radius", "degenerate"],
        rows,
    ))
}

fn chain(config: &RunConfig, r: usize) -> Result<FiniteChainSpec, wgfret::Error> {
    FiniteChainSpec::centered(config.sites, config.boundary, r, config.params)
}

fn oracle(config: &RunConfig) -> Result<Table, CliError> {
    let seps = config.integer_separations()?;
    let per_r = seps
        .into_par_iter()
        .map(|r| {
            let spec = oracle_apbs(&chain(config, r)?)?;
            let weights: Vec<Vec<(f64, f64)>> = InitialState::ALL
                .iter()
                .map(|&s| spec.bound_states_descending(s))
                .collect();
            let state_idx = InitialState::ALL
                .iter()
                .position(|&s| s == config.state)
                .expect("state is one of ALL");
            let completeness = spec.completeness(config.state);
            Ok((0..weights[0].len())
                .map(|i| {
                    vec![
                        Cell::Int(r as i64),
                        Cell::Float(weights[0][i].0),
                        Cell::Float(weights[state_idx][i].1),
                        Cell::Float(weights[0][i].1),
                        Cell::Float(weights[1][i].1),
                        Cell::Float(weights[2][i].1),
                        Cell::Float(completeness),
                    ]
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, wgfret::Error>>()?;
    Ok(table(
        config,
        vec![
            "R",
            "energy",
            "overlap",
            "overlap_single",
            "overlap_plus",
            "overlap_minus",
            "completeness",
        ],
        per_r.into_iter().flatten().collect(),
    ))
}

fn compare(config: &RunConfig) -> Result<Outcome, CliError> {
    let seps = config.integer_separations()?;
    let per_r = seps
        .into_par_iter()
        .map(|r| {
            let rf = r as f64;
            let sols = solve_apbs(config.params, rf)?;
            let occ = occupations(config.params, rf, config.state, &sols)?;
            let oracle = oracle_apbs(&chain(config, r)?)?.bound_states_descending(config.state);
            let n = occ.entries.len().max(oracle.len());
            let mut failed = occ.entries.len() != oracle.len();
            let rows = (0..n)
                .map(|i| {
                    let closed = occ.entries.get(i);
                    let orc = oracle.get(i);
                    let de = closed
                        .zip(orc)
                        .map(|(c, o)| (c.solution.energy - o.0).abs());
                    let da = closed.zip(orc).map(|(c, o)| (c.alpha - o.1).abs());
                    if de.is_some_and(|d| d.is_nan() || d > COMPARE_ENERGY_TOL)
                        || da.is_some_and(|d| d.is_nan() || d > COMPARE_ALPHA_TOL)
                    {
                        failed = true;
                    }
                    vec![
                        Cell::Int(r as i64),
                        closed.map_or(Cell::Empty, |c| Cell::Text(c.solution.branch.label())),
                        Cell::opt(closed.map(|c| c.solution.energy)),
                        Cell::opt(orc.map(|o| o.0)),
                        Cell::opt(de),
                        Cell::opt(closed.map(|c| c.alpha)),
                        Cell::opt(orc.map(|o| o.1)),
                        Cell::opt(da),
                    ]
                })
                .collect::<Vec<_>>();
            Ok((rows, failed))
        })
        .collect::<Result<Vec<_>, wgfret::Error>>()?;
    let mismatch = per_r.iter().any(|(_, f)| *f);
    let rows = per_r.into_iter().flat_map(|(rows, _)| rows).collect();
    Ok(Outcome {
        table: table(
            config,
            vec![
                "R",
                "branch",
                "energy_closed_form",
                "energy_oracle",
                "delta_energy",
                "alpha_closed_form",
                "alpha_oracle",
                "delta_alpha",
            ],
            rows,
        ),
        mismatch,
    })
}

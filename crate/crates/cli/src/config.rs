use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use wgfret::forster::Grid;
use wgfret::model::ModelParams;
use wgfret::oracle::Boundary;
use wgfret::resolvent::InitialState;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Potential,
    Occupations,
    Critical,
    Oracle,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Potential => "potential",
            Command::Occupations => "occupations",
            Command::Critical => "critical",
            Command::Oracle => "oracle",
            Command::Compare => "compare",
        }
    }

    /// Commands that diagonalize a finite chain need integer separations.
    pub fn uses_oracle(self) -> bool {
        matches!(self, Command::Oracle | Command::Compare)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv|json, got `{other}`")),
        }
    }
}

/// Settings as read from one source; `None` means "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub u: Option<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
    pub state: Option<InitialState>,
    pub sites: Option<usize>,
    pub boundary: Option<Boundary>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Values in `self` win over those in `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            omega: self.omega.or(lower.omega),
            u: self.u.or(lower.u),
            r_min: self.r_min.or(lower.r_min),
            r_max: self.r_max.or(lower.r_max),
            r_step: self.r_step.or(lower.r_step),
            state: self.state.or(lower.state),
            sites: self.sites.or(lower.sites),
            boundary: self.boundary.or(lower.boundary),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| config_error(format!("invalid value for `{key}`: {e}")))
}

/// Parses flat `key = value` text. Blank lines and `#` comments are ignored;
/// keys may use `-` or `_`.
pub fn parse_config_text(text: &str) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_error(format!(
                "line {}: expected key=value, got `{line}`",
                lineno + 1
            ))
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "omega" => o.omega = Some(parse_value(&key, value)?),
            "u" => o.u = Some(parse_value(&key, value)?),
            "r_min" => o.r_min = Some(parse_value(&key, value)?),
            "r_max" => o.r_max = Some(parse_value(&key, value)?),
            "r_step" => o.r_step = Some(parse_value(&key, value)?),
            "state" => o.state = Some(parse_value(&key, value)?),
            "sites" | "n_sites" => o.sites = Some(parse_value(&key, value)?),
            "boundary" => o.boundary = Some(parse_value(&key, value)?),
            "format" => o.format = Some(parse_value(&key, value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            other => {
                return Err(config_error(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(o)
}

pub fn read_config_file(path: &Path) -> Result<Overrides, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn defaults(command: Command) -> Overrides {
    let (r_min, r_max, r_step) = if command.uses_oracle() {
        (1.0, 8.0, 1.0)
    } else {
        (0.1, 12.0, 0.01)
    };
    Overrides {
        omega: Some(2.5),
        u: Some(1.0),
        r_min: Some(r_min),
        r_max: Some(r_max),
        r_step: Some(r_step),
        state: Some(InitialState::SingleExcited),
        sites: Some(600),
        boundary: Some(Boundary::Ring),
        format: Some(Format::Csv),
        out: None,
    }
}

/// Fully resolved and validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub grid: Grid,
    pub state: InitialState,
    pub sites: usize,
    pub boundary: Boundary,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Merges flags over file over defaults and validates the result.
    pub fn resolve(
        command: Command,
        flags: Overrides,
        file: Option<Overrides>,
    ) -> Result<Self, CliError> {
        let merged = flags.over(file.unwrap_or_default()).over(defaults(command));
        // Every field is populated by the defaults except `out`.
        let omega = merged.omega.unwrap();
        let u = merged.u.unwrap();
        for (name, v) in [
            ("omega", omega),
            ("u", u),
            ("r_min", merged.r_min.unwrap()),
            ("r_max", merged.r_max.unwrap()),
            ("r_step", merged.r_step.unwrap()),
        ] {
            if !v.is_finite() {
                return Err(config_error(format!(
                    "invalid parameter `{name}`: must be finite"
                )));
            }
        }
        if u <= 0.0 {
            return Err(config_error(
                "invalid parameter `u`: coupling must be > 0 (bound states are undefined at u = 0)",
            ));
        }
        let params = ModelParams::new(omega, u).map_err(|e| config_error(e.to_string()))?;
        let grid = Grid::new(
            merged.r_min.unwrap(),
            merged.r_max.unwrap(),
            merged.r_step.unwrap(),
        )
        .map_err(|e| config_error(e.to_string()))?;
        let sites = merged.sites.unwrap();
        if sites < 4 {
            return Err(config_error(format!(
                "invalid parameter `sites`: need at least 4 chain sites, got {sites}"
            )));
        }
        let config = RunConfig {
            command,
            params,
            grid,
            state: merged.state.unwrap(),
            sites,
            boundary: merged.boundary.unwrap(),
            format: merged.format.unwrap(),
            out: merged.out,
        };
        if command.uses_oracle() {
            let seps = config.integer_separations()?;
            if let Some(&r) = seps.iter().find(|&&r| r >= sites) {
                return Err(config_error(format!(
                    "invalid parameter `sites`: separation {r} does not fit on {sites} sites"
                )));
            }
        }
        Ok(config)
    }

    /// Grid points as site separations; every point must be a positive integer.
    pub fn integer_separations(&self) -> Result<Vec<usize>, CliError> {
        self.grid
            .points()
            .into_iter()
            .map(|r| {
                let n = r.round();
                if (r - n).abs() > 1e-9 || n < 1.0 {
                    Err(config_error(format!(
                        "invalid parameter `r_min/r_step`: finite-chain separations must be positive integers, got {r}"
                    )))
                } else {
                    Ok(n as usize)
                }
            })
            .collect()
    }

    /// `key=value` pairs echoed into output headers.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("omega", crate::output::format_float(self.params.omega)),
            ("u", crate::output::format_float(self.params.u)),
        ];
        if self.command != Command::Critical {
            v.push(("r_min", crate::output::format_float(self.grid.r_min)));
            v.push(("r_max", crate::output::format_float(self.grid.r_max)));
            v.push(("r_step", crate::output::format_float(self.grid.r_step)));
        }
        if matches!(
            self.command,
            Command::Potential | Command::Occupations | Command::Oracle
        ) {
            v.push(("state", self.state.name().to_string()));
        }
        if self.command.uses_oracle() {
            v.push(("sites", self.sites.to_string()));
            v.push(("boundary", self.boundary.name().to_string()));
        }
        v
    }
}

//! Run configuration: an INI-like `key = value` file merged with command-line
//! overrides, validated key by key against the selected command.
//!
//! Keys before any `[section]` header apply to the run; a `[command]` section
//! applies only when that command runs. `#` and `;` start comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bhclock_core::units::UnitSystem;
use bhclock_core::DiskPoint;
use clap::ValueEnum;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    AlgebraCheck,
    CrossoverScan,
    Thermal,
    Isotherm,
    GeodesicCompare,
    PawDemo,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::AlgebraCheck,
        Command::CrossoverScan,
        Command::Thermal,
        Command::Isotherm,
        Command::GeodesicCompare,
        Command::PawDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::AlgebraCheck => "algebra-check",
            Command::CrossoverScan => "crossover-scan",
            Command::Thermal => "thermal",
            Command::Isotherm => "isotherm",
            Command::GeodesicCompare => "geodesic-compare",
            Command::PawDemo => "paw-demo",
        }
    }

    pub fn keys(self) -> &'static [Key] {
        match self {
            Command::AlgebraCheck => ALGEBRA_KEYS,
            Command::CrossoverScan => CROSSOVER_KEYS,
            Command::Thermal => THERMAL_KEYS,
            Command::Isotherm => ISOTHERM_KEYS,
            Command::GeodesicCompare => GEODESIC_KEYS,
            Command::PawDemo => PAW_KEYS,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::invalid("command", format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown key `{key}`")]
    Unknown { key: String },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("{path}:{line}: cannot parse `{text}`")]
    Syntax {
        path: String,
        line: usize,
        text: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Key named by the error, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Unknown { key } | ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

/// Admissible values of a key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Positive,
    Real,
    /// `[0, 1)`.
    Radius,
    /// `(0, 1e-6]`.
    TailTol,
    /// Integer `>= min`.
    Count(usize),
    /// Comma-separated reals, each `>= min`.
    List(f64),
    /// Complex number strictly inside the unit disk.
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
    }
}

const ALGEBRA_KEYS: &[Key] = &[
    key("K", Kind::List(0.5), "0.5,1,2.5,10"),
    key("cutoff", Kind::Count(2), "60"),
    key("J", Kind::Positive, "1"),
    key("grid", Kind::Count(2), "15"),
    key("r_max", Kind::Radius, "0.8"),
    key("pairs", Kind::Count(1), "200"),
    key("xi_max", Kind::Radius, "0.8"),
    key("tail_tol", Kind::TailTol, "1e-14"),
    key("tol_algebra", Kind::Positive, "1e-10"),
    key("tol_overlap", Kind::Positive, "1e-10"),
    key("tol_energy", Kind::Positive, "1e-8"),
];

const CROSSOVER_KEYS: &[Key] = &[
    key("xi1", Kind::Xi, "0"),
    key("xi2", Kind::Xi, "0.6"),
    key("K", Kind::List(0.5), "1,2,4,8,16,32,64"),
    key("xi", Kind::Xi, "0.4+0.1i"),
    key("K_fluct", Kind::List(0.5), "4,16,64"),
    key("K_identity", Kind::List(0.5), "2"),
    key("J", Kind::Positive, "1"),
    key("tail_tol", Kind::TailTol, "1e-12"),
    key("tol_slope", Kind::Positive, "1e-6"),
    key("tol_ratio", Kind::Positive, "0.05"),
    key("tol_identity", Kind::Positive, "1e-6"),
];

const THERMAL_KEYS: &[Key] = &[
    key("xi", Kind::Xi, "0.5"),
    key("J", Kind::Positive, "1"),
    key("N", Kind::Count(1), "1"),
    key("grid", Kind::Count(2), "15"),
    key("r_max", Kind::Radius, "0.9"),
    key("samples", Kind::Count(1), "50"),
    key("xi_max", Kind::Radius, "0.8"),
    key("tail_tol", Kind::TailTol, "1e-13"),
    key("tol_thermal", Kind::Positive, "1e-12"),
    key("tol_cross", Kind::Positive, "1e-10"),
];

const ISOTHERM_KEYS: &[Key] = &[
    key("J", Kind::Positive, "1"),
    key("N", Kind::Count(1), "1"),
    key("M", Kind::Positive, "1"),
    key("angles", Kind::List(-180.0), "0,30,60,90,120,150,180"),
    key("tol_root", Kind::Positive, "1e-10"),
];

const GEODESIC_KEYS: &[Key] = &[
    key("M", Kind::Positive, "1"),
    key("m", Kind::Positive, "1"),
    key("q0_rel", Kind::Positive, "1e-3"),
    key("p0", Kind::Real, "0"),
    key("stop_fraction", Kind::Radius, "0.5"),
    key("steps", Kind::Count(1), "4000"),
    key("tol_rel_err", Kind::Positive, "0.01"),
    key("tol_drift", Kind::Positive, "1e-9"),
    key("ratio_min", Kind::Positive, "0.4"),
    key("ratio_max", Kind::Positive, "0.6"),
];

const PAW_KEYS: &[Key] = &[
    key("K", Kind::Positive, "1"),
    key("d_xi", Kind::Count(3), "80"),
    key("d_gamma", Kind::Count(1), "2"),
    key("J", Kind::Positive, "1"),
    key("t_window", Kind::Positive, "0.5"),
    key("n_times", Kind::Count(1), "21"),
    key("kernel_tol", Kind::Positive, "1e-12"),
    key("tail_tol", Kind::TailTol, "1e-12"),
    key("m", Kind::Positive, "1"),
    key("a", Kind::Positive, "1"),
    key("support_threshold", Kind::Positive, "1e-8"),
    key("support_t_max", Kind::Positive, "1"),
    key("support_n_t", Kind::Count(2), "21"),
    key("support_n_q", Kind::Count(1), "20"),
    key("tol_residual", Kind::Positive, "1e-12"),
    key("tol_spectrum", Kind::Positive, "1e-10"),
    key("fidelity_min", Kind::Positive, "0.99"),
];

/// Run-level keys accepted in files alongside command keys.
const GLOBAL_KEYS: [&str; 3] = ["units", "out", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Count(usize),
    List(Vec<f64>),
    Xi(DiskPoint),
}

fn parse_real(key: &str, s: &str) -> Result<f64, ConfigError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| ConfigError::invalid(key, format!("`{s}` is not a number")))?;
    if !x.is_finite() {
        return Err(ConfigError::invalid(key, format!("`{s}` is not finite")));
    }
    Ok(x)
}

impl Kind {
    pub fn parse(self, key: &str, s: &str) -> Result<Value, ConfigError> {
        match self {
            Kind::Positive => {
                let x = parse_real(key, s)?;
                if x <= 0.0 {
                    return Err(ConfigError::invalid(key, format!("must be > 0, got {x}")));
                }
                Ok(Value::Real(x))
            }
            Kind::Real => Ok(Value::Real(parse_real(key, s)?)),
            Kind::Radius => {
                let x = parse_real(key, s)?;
                if !(0.0..1.0).contains(&x) {
                    return Err(ConfigError::invalid(
                        key,
                        format!("must lie in [0, 1), got {x}"),
                    ));
                }
                Ok(Value::Real(x))
            }
            Kind::TailTol => {
                let x = parse_real(key, s)?;
                if !(x > 0.0 && x <= 1e-6) {
                    return Err(ConfigError::invalid(
                        key,
                        format!("must lie in (0, 1e-6], got {x}"),
                    ));
                }
                Ok(Value::Real(x))
            }
            Kind::Count(min) => {
                let n: usize = s.trim().parse().map_err(|_| {
                    ConfigError::invalid(key, format!("`{s}` is not a non-negative integer"))
                })?;
                if n < min {
                    return Err(ConfigError::invalid(
                        key,
                        format!("must be >= {min}, got {n}"),
                    ));
                }
                Ok(Value::Count(n))
            }
            Kind::List(min) => {
                let xs = s
                    .split(',')
                    .map(|p| parse_real(key, p))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(bad) = xs.iter().find(|&&x| x < min) {
                    return Err(ConfigError::invalid(
                        key,
                        format!("entries must be >= {min}, got {bad}"),
                    ));
                }
                Ok(Value::List(xs))
            }
            Kind::Xi => {
                let z: Complex64 = s.trim().replace(' ', "").parse().map_err(|_| {
                    ConfigError::invalid(key, format!("`{s}` is not a complex number"))
                })?;
                DiskPoint::new(z).map(Value::Xi).map_err(|_| {
                    ConfigError::invalid(key, format!("|{key}| = {} must be < 1", z.norm()))
                })
            }
        }
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub units: UnitSystem,
    pub out: PathBuf,
    pub seed: u64,
    values: BTreeMap<&'static str, Value>,
}

pub const DEFAULT_SEED: u64 = 20_251_018;

/// Command-line overrides; `None` leaves the file or default value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub units: Option<UnitSystem>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub params: Vec<(String, String)>,
}

/// Splits `key=value`.
pub fn split_assignment(s: &str) -> Result<(String, String), ConfigError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| ConfigError::invalid(s.trim(), "expected key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// `(key, value)` pairs that apply to `command`, in file order.
pub fn parse_config_text(
    text: &str,
    origin: &str,
    command: Command,
) -> Result<Vec<(String, String)>, ConfigError> {
    let mut section: Option<String> = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            name.parse::<Command>().map_err(|_| ConfigError::Unknown {
                key: format!("[{name}]"),
            })?;
            section = Some(name.to_string());
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                path: origin.to_string(),
                line: i + 1,
                text: raw.trim().to_string(),
            });
        };
        let key = k.trim().to_string();
        match &section {
            Some(s) if s != command.name() => {
                let other: Command = s.parse()?;
                check_known(other, &key)?;
            }
            _ => out.push((key, v.trim().to_string())),
        }
    }
    Ok(out)
}

fn check_known(command: Command, key: &str) -> Result<(), ConfigError> {
    if GLOBAL_KEYS.contains(&key) || command.keys().iter().any(|k| k.name == key) {
        Ok(())
    } else {
        Err(ConfigError::Unknown {
            key: key.to_string(),
        })
    }
}

/// Merges defaults, the optional file and overrides, in that order of
/// increasing precedence, and validates every value.
pub fn parse_config(
    command: Command,
    file: Option<&Path>,
    overrides: &Overrides,
) -> Result<RunConfig, ConfigError> {
    let mut assigned: Vec<(String, String)> = Vec::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        assigned.extend(parse_config_text(
            &text,
            &path.display().to_string(),
            command,
        )?);
    }
    assigned.extend(overrides.params.iter().cloned());

    let mut units = UnitSystem::Natural;
    let mut out = PathBuf::from("out");
    let mut seed = DEFAULT_SEED;
    let mut raw: BTreeMap<&'static str, String> = command
        .keys()
        .iter()
        .map(|k| (k.name, k.default.to_string()))
        .collect();
    for (k, v) in assigned {
        check_known(command, &k)?;
        match k.as_str() {
            "units" => {
                units = v.parse().map_err(|_| {
                    ConfigError::invalid("units", format!("expected natural or si, got `{v}`"))
                })?
            }
            "out" => out = PathBuf::from(v),
            "seed" => {
                seed = v.parse().map_err(|_| {
                    ConfigError::invalid("seed", format!("`{v}` is not an unsigned integer"))
                })?
            }
            _ => {
                let entry = command
                    .keys()
                    .iter()
                    .find(|s| s.name == k)
                    .expect("checked above");
                raw.insert(entry.name, v);
            }
        }
    }
    units = overrides.units.unwrap_or(units);
    out = overrides.out.clone().unwrap_or(out);
    seed = overrides.seed.unwrap_or(seed);

    let mut values = BTreeMap::new();
    for entry in command.keys() {
        values.insert(entry.name, entry.kind.parse(entry.name, &raw[entry.name])?);
    }
    Ok(RunConfig {
        command,
        units,
        out,
        seed,
        values,
    })
}

impl RunConfig {
    fn value(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("`{key}` is not a key of {}", self.command))
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.value(key) {
            Value::Real(x) => *x,
            Value::Count(n) => *n as f64,
            other => panic!("`{key}` holds {other:?}, not a real"),
        }
    }

    pub fn count(&self, key: &str) -> usize {
        match self.value(key) {
            Value::Count(n) => *n,
            other => panic!("`{key}` holds {other:?}, not a count"),
        }
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match self.value(key) {
            Value::List(xs) => xs,
            other => panic!("`{key}` holds {other:?}, not a list"),
        }
    }

    pub fn xi(&self, key: &str) -> DiskPoint {
        match self.value(key) {
            Value::Xi(z) => *z,
            other => panic!("`{key}` holds {other:?}, not a disk point"),
        }
    }
}

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fem::DomainKind;
use crate::identity_suite::DEFAULT_PERMUTATION_S;
use crate::inequality_lab::{NormMode, DEFAULT_HARMONIC_S};

pub const OUT_DIR_ENV: &str = "TRACELAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "tracelab-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyIdentities,
    FemCheck,
    Constants,
    Report,
}

impl Command {
    pub const ALL: [Command; 4] = [
        Command::VerifyIdentities,
        Command::FemCheck,
        Command::Constants,
        Command::Report,
    ];

    /// Admissible range for `s` values, as (lo, hi, label).
    fn s_range(self) -> Option<(f64, f64, &'static str)> {
        match self {
            Command::Constants => Some((0.0, 1.0, "[0, 1]")),
            _ => None,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::VerifyIdentities => "verify-identities",
            Command::FemCheck => "fem-check",
            Command::Constants => "constants",
            Command::Report => "report",
        })
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSelection {
    Graph,
    Surrogate,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<NormMode> {
        match self {
            ModeSelection::Graph => vec![NormMode::Graph],
            ModeSelection::Surrogate => vec![NormMode::Surrogate],
            ModeSelection::Both => vec![NormMode::Graph, NormMode::Surrogate],
        }
    }
}

impl fmt::Display for ModeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeSelection::Graph => "graph",
            ModeSelection::Surrogate => "surrogate",
            ModeSelection::Both => "both",
        })
    }
}

impl FromStr for ModeSelection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "graph" => Ok(ModeSelection::Graph),
            "surrogate" => Ok(ModeSelection::Surrogate),
            "both" => Ok(ModeSelection::Both),
            _ => Err(format!("unknown mode '{s}' (graph, surrogate, both)")),
        }
    }
}

/// Everything one batch run needs. `s_values = None` selects the command default.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub dims: Vec<(usize, usize)>,
    pub trials: usize,
    pub domain: DomainKind,
    pub refine: usize,
    pub s_values: Option<Vec<f64>>,
    pub harmonic_s: Vec<f64>,
    pub output_path: PathBuf,
    pub mode: ModeSelection,
}

/// Recognized keys, in emission order. `s` and `out` are accepted as aliases.
pub const KEYS: [&str; 10] = [
    "command",
    "seed",
    "dims",
    "trials",
    "domain",
    "refine",
    "s_values",
    "harmonic_s",
    "output_path",
    "mode",
];

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let output_path = std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        RunConfig {
            command,
            seed: 1,
            dims: vec![(8, 6)],
            trials: 20,
            domain: DomainKind::Square,
            refine: 1,
            s_values: None,
            harmonic_s: DEFAULT_HARMONIC_S.to_vec(),
            output_path,
            mode: ModeSelection::Both,
        }
    }

    /// `s_values`, or the command default: the permutation exponents for the
    /// identity checks, 0, 0.1, …, 1 for constant sweeps.
    pub fn effective_s_values(&self) -> Vec<f64> {
        if let Some(s) = &self.s_values {
            return s.clone();
        }
        match self.command {
            Command::Constants => (0..=10).map(|k| k as f64 / 10.0).collect(),
            _ => DEFAULT_PERMUTATION_S.to_vec(),
        }
    }

    /// Sets one key from its textual value; `location` names the line or flag.
    pub fn set(&mut self, key: &str, value: &str, location: &str) -> Result<()> {
        let err = |message: String| Error::Config {
            location: location.to_string(),
            message,
        };
        let value = value.trim();
        match key {
            "command" => self.command = value.parse().map_err(err)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| err(format!("seed must be a non-negative integer, got '{value}'")))?
            }
            "dims" => self.dims = parse_dims(value).map_err(err)?,
            "trials" => {
                let t: usize = value
                    .parse()
                    .map_err(|_| err(format!("trials must be a count, got '{value}'")))?;
                if t == 0 {
                    return Err(err("trials must be at least 1".into()));
                }
                self.trials = t;
            }
            "domain" => self.domain = value.parse().map_err(|e: Error| err(e.to_string()))?,
            "refine" => {
                self.refine = value
                    .parse()
                    .map_err(|_| err(format!("refine must be a count, got '{value}'")))?
            }
            "s_values" | "s" => self.s_values = Some(parse_reals(value).map_err(err)?),
            "harmonic_s" => self.harmonic_s = parse_reals(value).map_err(err)?,
            "output_path" | "out" => {
                if value.is_empty() {
                    return Err(err("output path is empty".into()));
                }
                self.output_path = PathBuf::from(value)
            }
            "mode" => self.mode = value.parse().map_err(err)?,
            _ => return Err(err(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Range rules that depend on several keys at once.
    pub fn validate(&self) -> Result<()> {
        let err = |location: &str, message: String| Error::Config {
            location: location.to_string(),
            message,
        };
        if let (Some((lo, hi, label)), Some(values)) = (self.command.s_range(), &self.s_values) {
            if let Some(bad) = values.iter().find(|s| !(lo..=hi).contains(*s)) {
                return Err(err(
                    "s_values",
                    format!("s = {bad} outside {label} for {}", self.command),
                ));
            }
        }
        if let Some(bad) = self.harmonic_s.iter().find(|s| !(**s > 1.0 && **s < 1.5)) {
            return Err(err("harmonic_s", format!("s = {bad} outside (1, 3/2)")));
        }
        if self.command == Command::VerifyIdentities && self.dims.is_empty() {
            return Err(err("dims", "at least one AxB pair is required".into()));
        }
        Ok(())
    }

    /// `key = value` text that [`parse_config`] maps back to this config.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let value = match key {
                "command" => self.command.to_string(),
                "seed" => self.seed.to_string(),
                "dims" => self
                    .dims
                    .iter()
                    .map(|(a, b)| format!("{a}x{b}"))
                    .collect::<Vec<_>>()
                    .join(","),
                "trials" => self.trials.to_string(),
                "domain" => self.domain.to_string(),
                "refine" => self.refine.to_string(),
                "s_values" => match &self.s_values {
                    Some(s) => join_reals(s),
                    None => continue,
                },
                "harmonic_s" => join_reals(&self.harmonic_s),
                "output_path" => self.output_path.display().to_string(),
                "mode" => self.mode.to_string(),
                _ => unreachable!(),
            };
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

fn join_reals(values: &[f64]) -> String {
    // `{:?}` is the shortest representation that parses back to the same bits
    values
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_reals(text: &str) -> std::result::Result<Vec<f64>, String> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("'{t}' is not a finite real")),
            }
        })
        .collect::<std::result::Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

fn parse_dims(text: &str) -> std::result::Result<Vec<(usize, usize)>, String> {
    text.split(',')
        .map(|pair| {
            let pair = pair.trim();
            let (a, b) = pair
                .split_once('x')
                .ok_or_else(|| format!("'{pair}' is not of the form AxB"))?;
            let parse = |v: &str| -> std::result::Result<usize, String> {
                match v.trim().parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n),
                    _ => Err(format!("'{pair}' needs positive dimensions")),
                }
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

/// Parses `key = value` lines on top of the defaults for `command`.
///
/// Blank lines and `#` comments are ignored. Unknown and repeated keys are rejected.
pub fn parse_config(text: &str, command: Command) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(command);
    let mut seen: Vec<&str> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let location = format!("line {}", idx + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            location: location.clone(),
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = canonical_key(key.trim());
        if seen.contains(&key) {
            return Err(Error::Config {
                location,
                message: format!("duplicate key '{key}'"),
            });
        }
        cfg.set(key, value, &location)?;
        seen.push(key);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn canonical_key(key: &str) -> &str {
    match key {
        "s" => "s_values",
        "out" => "output_path",
        other => other,
    }
}

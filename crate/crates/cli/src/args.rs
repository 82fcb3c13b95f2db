//! `key=value` argument handling.

use std::collections::BTreeMap;

use levy_scale::catalog::{family_keys, parse_key_values, MODIFIER_KEYS};

use crate::CliError;

pub const SUBCOMMANDS: [&str; 8] = ["list", "eval", "verify", "exit", "ruin", "simulate", "conjugate", "tilt"];

/// Environment variable holding the default Monte Carlo seed.
pub const SEED_VAR: &str = "SCALEFN_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive grid `start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn parse(raw: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("grid expects start:stop:points, got '{raw}'"));
        let parts: Vec<&str> = raw.split(':').collect();
        let [s, e, n] = parts[..] else { return Err(bad()) };
        let start: f64 = s.parse().map_err(|_| bad())?;
        let stop: f64 = e.parse().map_err(|_| bad())?;
        let points: usize = n.parse().map_err(|_| bad())?;
        if points < 2 || !(start >= 0.0) || !(stop >= start) || !stop.is_finite() {
            return Err(CliError::Usage(format!(
                "grid needs points >= 2 and 0 <= start <= stop, got '{raw}'"
            )));
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// A parsed command line: the subcommand and every `key=value` pair, with
/// config file entries underneath the flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: String,
    params: BTreeMap<String, String>,
}

impl Invocation {
    pub fn parse(args: &[String], read_file: impl Fn(&str) -> std::io::Result<String>) -> Result<Self, CliError> {
        let (command, rest) = args.split_first().ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
        if !SUBCOMMANDS.contains(&command.as_str()) {
            return Err(CliError::Usage(format!("unknown subcommand '{command}'")));
        }
        let mut flags = BTreeMap::new();
        for tok in rest {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got '{tok}'")))?;
            if flags.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Usage(format!("key '{k}' given twice")));
            }
        }
        let mut params = match flags.remove("config") {
            Some(path) => {
                let text = read_file(&path).map_err(|e| CliError::Usage(format!("cannot read config '{path}': {e}")))?;
                let body: String = text
                    .lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .filter(|l| !l.is_empty())
                    .collect::<Vec<_>>()
                    .join("\n");
                parse_key_values(&body).map_err(|e| CliError::Usage(format!("config '{path}': {e}")))?
            }
            None => BTreeMap::new(),
        };
        params.extend(flags);
        Ok(Self { command: command.clone(), params })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|raw| {
                raw.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("'{key}' expects a number, got '{raw}'")))
            })
            .transpose()
    }

    pub fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::Usage(format!("{} needs '{key}=<number>'", self.command)))
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key)
            .map(|raw| {
                raw.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::Usage(format!("'{key}' expects numbers separated by commas, got '{raw}'")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn format(&self, default: Format) -> Result<Format, CliError> {
        match self.get("format") {
            None => Ok(default),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::Usage(format!("format must be csv or json, got '{other}'"))),
        }
    }

    pub fn grid(&self, default: &str) -> Result<Vec<f64>, CliError> {
        Ok(Grid::parse(self.get("grid").unwrap_or(default))?.values())
    }

    /// Family keys only, after checking that every other key is one the
    /// subcommand understands.
    pub fn family_params(&self, command_keys: &[&str]) -> Result<BTreeMap<String, String>, CliError> {
        // an unknown family name is left for the family parser to report
        let keys = self.get("family").and_then(family_keys);
        let mut out = BTreeMap::new();
        for (k, v) in &self.params {
            if command_keys.contains(&k.as_str()) {
                continue;
            }
            let known = k == "family" || MODIFIER_KEYS.contains(&k.as_str()) || keys.map_or(true, |ks| ks.contains(&k.as_str()));
            if !known {
                return Err(CliError::Usage(format!("unknown key '{k}' for {}", self.command)));
            }
            out.insert(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Seed from `seed=`, then the environment, then `fallback`.
    pub fn seed(&self, env_seed: Option<&str>, fallback: u64) -> Result<u64, CliError> {
        let parse = |src: &str, raw: &str| {
            raw.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("{src} expects an unsigned integer, got '{raw}'")))
        };
        match (self.get("seed"), env_seed) {
            (Some(raw), _) => parse("seed", raw),
            (None, Some(raw)) => parse(SEED_VAR, raw),
            (None, None) => Ok(fallback),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn no_file(_: &str) -> std::io::Result<String> {
        Err(std::io::Error::new(std::io::ErrorKind::NotFound, "none"))
    }

    #[test]
    fn grid_is_inclusive() {
        let g = Grid::parse("0:2:5").unwrap();
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(Grid::parse("0:2:1").is_err());
        assert!(Grid::parse("-1:2:3").is_err());
        assert!(Grid::parse("2:1:3").is_err());
        assert!(Grid::parse("0:2").is_err());
    }

    #[test]
    fn flags_override_config() {
        let read = |_: &str| Ok("# defaults\nfamily=brownian_drift kappa=2\nd=1\n".to_string());
        let inv = Invocation::parse(&args("eval config=a.txt kappa=1"), read).unwrap();
        assert_eq!(inv.get("kappa"), Some("1"));
        assert_eq!(inv.get("d"), Some("1"));
        assert_eq!(inv.get("config"), None);
    }

    #[test]
    fn rejects_unknown_subcommand_and_keys() {
        assert!(matches!(Invocation::parse(&args("plot"), no_file), Err(CliError::Usage(_))));
        assert!(Invocation::parse(&args("eval kappa"), no_file).is_err());
        assert!(Invocation::parse(&args("eval d=1 d=2"), no_file).is_err());
        let inv = Invocation::parse(&args("eval family=brownian_drift kappa=1 d=1 colour=red"), no_file).unwrap();
        assert!(inv.family_params(&["grid"]).is_err());
        assert!(Invocation::parse(&args("eval config=missing.txt"), no_file).is_err());
    }

    #[test]
    fn seed_precedence() {
        let inv = Invocation::parse(&args("simulate seed=3"), no_file).unwrap();
        assert_eq!(inv.seed(Some("5"), 7).unwrap(), 3);
        let inv = Invocation::parse(&args("simulate"), no_file).unwrap();
        assert_eq!(inv.seed(Some("5"), 7).unwrap(), 5);
        assert_eq!(inv.seed(None, 7).unwrap(), 7);
        assert!(inv.seed(Some("x"), 7).is_err());
    }
}

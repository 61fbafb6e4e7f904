//! The JSON config document and run settings.
//!
//! Precedence for every field: command-line flag, then environment
//! (`LDG_SEED`, `LDG_THREADS`), then the config file, then the default.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::CommonArgs;

/// `{"seed", "threads", "out", "<subcommand>": {...}}`; section keys are the
/// subcommand's long flag names.
#[derive(Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub rate: Option<Value>,
    pub solve: Option<Value>,
    pub mc: Option<Value>,
    pub enumerate: Option<Value>,
    pub spectra: Option<Value>,
    pub netcheck: Option<Value>,
    pub verify: Option<Value>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("malformed config {}", path.display()))
    }

    pub fn section(&self, command: &str) -> Option<&Value> {
        match command {
            "rate" => self.rate.as_ref(),
            "solve" => self.solve.as_ref(),
            "mc" => self.mc.as_ref(),
            "enumerate" => self.enumerate.as_ref(),
            "spectra" => self.spectra.as_ref(),
            "netcheck" => self.netcheck.as_ref(),
            "verify" => self.verify.as_ref(),
            _ => None,
        }
    }
}

/// Overlays the flags that were given on the config section.
pub fn merge<T: Serialize + DeserializeOwned>(section: Option<&Value>, flags: &T) -> Result<T> {
    let mut base = match section {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(other) => bail!("config section must be an object, got {other}"),
    };
    if let Value::Object(over) = serde_json::to_value(flags)? {
        for (k, v) in over {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).context("invalid config section")
}

/// Seed, thread count and output directory of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub threads: usize,
    pub out: Option<PathBuf>,
}

fn env_parse<T: std::str::FromStr>(env: &dyn Fn(&str) -> Option<String>, key: &str) -> Result<Option<T>> {
    match env(key) {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| anyhow::anyhow!("{key} must be an integer, got `{s}`")),
    }
}

pub fn settings(common: &CommonArgs, config: &ExperimentConfig, env: &dyn Fn(&str) -> Option<String>) -> Result<Settings> {
    let seed = match common.seed {
        Some(s) => s,
        None => env_parse(env, "LDG_SEED")?.or(config.seed).unwrap_or(0),
    };
    let threads = match common.threads {
        Some(t) => t,
        None => match env_parse::<usize>(env, "LDG_THREADS")?.or(config.threads) {
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if threads == 0 {
        bail!("thread count must be positive");
    }
    Ok(Settings {
        seed,
        threads,
        out: common.out.clone().or_else(|| config.out.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::RateArgs;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn flags_override_config() {
        let section = serde_json::json!({"N": 50, "p": 0.2, "pattern": ["C4"]});
        let flags = RateArgs {
            p: Some(0.3),
            ..RateArgs::default()
        };
        let merged = merge(Some(&section), &flags).unwrap();
        assert_eq!(merged.n, Some(50));
        assert_eq!(merged.p, Some(0.3));
        assert_eq!(merged.pattern, Some(vec!["C4".to_string()]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let section = serde_json::json!({"bogus": 1});
        assert!(merge(Some(&section), &RateArgs::default()).is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"sed": 1}"#).is_err());
    }

    #[test]
    fn precedence_is_flag_env_config() {
        let config = ExperimentConfig {
            seed: Some(1),
            threads: Some(2),
            ..Default::default()
        };
        let env = |k: &str| match k {
            "LDG_SEED" => Some("7".to_string()),
            _ => None,
        };
        let s = settings(&CommonArgs::default(), &config, &env).unwrap();
        assert_eq!((s.seed, s.threads), (7, 2));
        let flags = CommonArgs {
            seed: Some(9),
            threads: Some(3),
            ..Default::default()
        };
        let s = settings(&flags, &config, &env).unwrap();
        assert_eq!((s.seed, s.threads), (9, 3));
        let s = settings(&CommonArgs::default(), &ExperimentConfig::default(), &no_env).unwrap();
        assert_eq!(s.seed, 0);
        assert!(s.threads >= 1);
    }

    #[test]
    fn bad_environment_is_an_error() {
        let env = |k: &str| (k == "LDG_THREADS").then(|| "many".to_string());
        assert!(settings(&CommonArgs::default(), &ExperimentConfig::default(), &env).is_err());
        let zero = |k: &str| (k == "LDG_THREADS").then(|| "0".to_string());
        assert!(settings(&CommonArgs::default(), &ExperimentConfig::default(), &zero).is_err());
    }
}

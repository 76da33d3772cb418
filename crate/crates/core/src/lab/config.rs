use std::collections::BTreeMap;
use std::path::PathBuf;

use super::lookup;
use crate::error::{input, Error, Result};

/// Keys accepted by every experiment on top of its own defaults.
const COMMON_KEYS: &[(&str, &str)] = &[("runtime_ms", "false"), ("ratio_ceiling", "1000")];

/// Plain `key = value` configuration with comma-separated lists.
///
/// Starting from the experiment's defaults guarantees that every grid and
/// seed is explicit; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub output: Option<PathBuf>,
    entries: BTreeMap<String, Vec<String>>,
}

impl ExperimentConfig {
    /// Defaults of a registered experiment.
    pub fn for_experiment(name: &str) -> Result<Self> {
        let entry = lookup(name)?;
        let entries = entry
            .defaults
            .iter()
            .chain(COMMON_KEYS)
            .map(|(k, v)| (k.to_string(), split_list(v)))
            .collect();
        Ok(Self {
            experiment: entry.name.to_string(),
            output: None,
            entries,
        })
    }

    /// Parses a config file; it must contain `experiment = <name>`.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut name = None;
        let mut output = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (k, v) = l.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key = value`, got `{l}`"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "experiment" => name = Some(v.to_string()),
                "output" => output = Some(PathBuf::from(v)),
                _ => pairs.push((line, k.to_string(), v.to_string())),
            }
        }
        let name = name.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `experiment = <name>`".into(),
        })?;
        let mut cfg = Self::for_experiment(&name)?;
        cfg.output = output;
        for (line, k, v) in pairs {
            cfg.set(&k, &v).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Overrides one key; the key must exist in the defaults.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.entries.get_mut(key) {
            Some(slot) => {
                *slot = split_list(value);
                Ok(())
            }
            None => input(format!(
                "unknown key `{key}` for {}; known: {}",
                self.experiment,
                self.entries.keys().cloned().collect::<Vec<_>>().join(", ")
            )),
        }
    }

    /// Every list must be nonempty and every numeric-looking value must parse.
    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.entries {
            if v.is_empty() || v.iter().any(|s| s.is_empty()) {
                return input(format!("key `{k}` has an empty list"));
            }
        }
        let c = self.f64("ratio_ceiling")?;
        if !(c > 1.0) {
            return input(format!("ratio_ceiling must exceed 1, got {c}"));
        }
        self.flag("runtime_ms")?;
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn strings(&self, key: &str) -> Result<&[String]> {
        self.entries
            .get(key)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Input(format!("{} has no key `{key}`", self.experiment)))
    }

    pub fn string(&self, key: &str) -> Result<&str> {
        single(key, self.strings(key)?).map(String::as_str)
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.strings(key)?.iter().map(|s| parse_number(key, s)).collect()
    }

    pub fn u64_list(&self, key: &str) -> Result<Vec<u64>> {
        self.strings(key)?
            .iter()
            .map(|s| s.parse::<u64>().map_err(|_| Error::Input(format!("`{key}`: `{s}` is not a nonnegative integer"))))
            .collect()
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        single(key, &self.f64_list(key)?).copied()
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        single(key, &self.u64_list(key)?).copied()
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        Ok(self.u64(key)? as usize)
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.string(key)? {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => input(format!("`{key}` must be true or false, got `{other}`")),
        }
    }

    /// Config text that reproduces this configuration.
    pub fn to_text(&self) -> String {
        let mut out = format!("experiment = {}\n", self.experiment);
        if let Some(p) = &self.output {
            out.push_str(&format!("output = {}\n", p.display()));
        }
        for (k, v) in &self.entries {
            out.push_str(&format!("{k} = {}\n", v.join(",")));
        }
        out
    }
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).collect()
}

fn single<'a, T>(key: &str, v: &'a [T]) -> Result<&'a T> {
    match v {
        [x] => Ok(x),
        _ => input(format!("`{key}` expects a single value, got {}", v.len())),
    }
}

/// Decimal number or a fraction `a/b`.
pub(crate) fn parse_number(key: &str, s: &str) -> Result<f64> {
    let bad = || Error::Input(format!("`{key}`: `{s}` is not a number"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            a / b
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let cfg = ExperimentConfig::parse_text("experiment = fm-scaling\np = 1/2, 1 # two values\nm = 16,32,64,128\n").unwrap();
        assert_eq!(cfg.f64_list("p").unwrap(), vec![0.5, 1.0]);
        assert_eq!(cfg.u64_list("m").unwrap(), vec![16, 32, 64, 128]);
        let again = ExperimentConfig::parse_text(&cfg.to_text()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_unknown_key_and_empty_grid() {
        assert!(ExperimentConfig::parse_text("experiment = fm-scaling\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::parse_text("experiment = fm-scaling\np = \n").is_err());
        assert!(ExperimentConfig::parse_text("p = 1\n").is_err());
    }

    #[test]
    fn unknown_experiment_lists_registry() {
        match ExperimentConfig::for_experiment("nope") {
            Err(Error::UnknownExperiment { known, .. }) => assert!(known.contains("fm-scaling") && known.contains("shift-monotone")),
            other => panic!("unexpected {other:?}"),
        }
    }
}

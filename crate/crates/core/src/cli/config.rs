use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::ModelParams;
use crate::spectral::default_degree;
use crate::Complex64;

/// Inverse temperature selection: one value, an explicit list, or an
/// arithmetic range `lo, lo+step, …` up to `hi` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Single(f64),
    List(Vec<f64>),
    Range { lo: f64, hi: f64, step: f64 },
}

impl BetaSpec {
    /// Parses `lo:hi:step`.
    pub fn parse_range(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:step, got '{s}'"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        Ok(BetaSpec::Range {
            lo: num(parts[0])?,
            hi: num(parts[1])?,
            step: num(parts[2])?,
        })
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            BetaSpec::Single(b) => finite(vec![*b]),
            BetaSpec::List(v) => finite(v.clone()),
            &BetaSpec::Range { lo, hi, step } => {
                check_range(lo, hi, step)?;
                if lo > hi {
                    return Ok(Vec::new());
                }
                // The tolerance keeps `hi` when it is reached up to rounding.
                let count = ((hi - lo) / step + 1e-9).floor() as usize;
                Ok((0..=count).map(|k| lo + k as f64 * step).collect())
            }
        }
    }
}

fn check_range(lo: f64, hi: f64, step: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(domain("beta range bounds must be finite"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(domain(format!("beta range step must be positive, got {step}")));
    }
    Ok(())
}

fn finite(v: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(b) = v.iter().find(|b| !b.is_finite()) {
        return Err(domain(format!("beta must be finite, got {b}")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Everything a subcommand needs. This is also the schema of the `--config`
/// file; unspecified keys take the defaults below and command-line flags
/// override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Channel count; when absent it is the length of `lambda`.
    pub m: Option<usize>,
    /// Decay rates; a single value is broadcast to all `m` channels.
    pub lambda: Vec<f64>,
    /// Couplings; a single value is broadcast to all `m` channels.
    #[serde(rename = "J")]
    pub coupling: Vec<f64>,
    pub beta: BetaSpec,
    /// Largest period: partition and trace tables cover n = 1..=n.
    pub n: usize,
    /// Truncation degree N; defaults by channel count.
    pub degree: Option<usize>,
    /// Complex argument of the zeta function as `[re, im]`.
    pub z: [f64; 2],
    pub output: OutputFormat,
    pub deterministic: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: None,
            lambda: vec![0.5],
            coupling: vec![1.0],
            beta: BetaSpec::Single(1.0),
            n: 4,
            degree: None,
            z: [0.25, 0.0],
            output: OutputFormat::Json,
            deterministic: false,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| domain(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| domain(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("RunConfig serializes")
    }

    pub fn channel_count(&self) -> usize {
        self.m.unwrap_or(self.lambda.len().max(self.coupling.len()))
    }

    pub fn params(&self) -> Result<ModelParams> {
        let m = self.channel_count();
        if m == 0 {
            return Err(domain("need at least one channel"));
        }
        let widen = |v: &[f64], name: &str| -> Result<Vec<f64>> {
            match v.len() {
                1 => Ok(vec![v[0]; m]),
                k if k == m => Ok(v.to_vec()),
                k => Err(domain(format!("{name} has {k} entries but m = {m}"))),
            }
        };
        ModelParams::validate(m, widen(&self.lambda, "lambda")?, widen(&self.coupling, "J")?)
    }

    pub fn degree(&self) -> usize {
        self.degree.unwrap_or_else(|| default_degree(self.channel_count()))
    }

    pub fn z(&self) -> Result<Complex64> {
        let z = Complex64::new(self.z[0], self.z[1]);
        if !z.is_finite() {
            return Err(domain("z must be finite"));
        }
        Ok(z)
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("expected re or re,im, got '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = BetaSpec::parse_range("0:1:0.25").unwrap();
        assert_eq!(r.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(BetaSpec::parse_range("1:0:0.1").unwrap().values().unwrap().is_empty());
        assert!(BetaSpec::parse_range("0:1:0").unwrap().values().is_err());
        assert!(BetaSpec::parse_range("0:1").is_err());
    }

    #[test]
    fn broadcast() {
        let c = RunConfig {
            m: Some(3),
            ..RunConfig::default()
        };
        let p = c.params().unwrap();
        assert_eq!(p.lambda(), &[0.5; 3]);
        assert_eq!(p.coupling(), &[1.0; 3]);
        let bad = RunConfig {
            m: Some(2),
            lambda: vec![0.1, 0.2, 0.3],
            ..RunConfig::default()
        };
        assert!(bad.params().is_err());
    }

    #[test]
    fn complex_arg() {
        assert_eq!(parse_complex("0.25").unwrap(), [0.25, 0.0]);
        assert_eq!(parse_complex("0.1,-0.2").unwrap(), [0.1, -0.2]);
        assert!(parse_complex("a").is_err());
    }
}

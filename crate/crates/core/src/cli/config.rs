use std::path::{Path, PathBuf};

use serde::Deserialize;

/// A numeric power or a string such as `"3dB"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PowerValue {
    Linear(f64),
    Text(String),
}

/// Optional JSON run configuration. Keys mirror the long flag names; a flag
/// given on the command line wins over the file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub rho: Option<f64>,
    pub n1: Option<f64>,
    pub n2: Option<f64>,
    pub kappa: Option<f64>,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub scheme: Option<String>,
    pub schemes: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub d1_grid: Option<String>,
    pub d2_grid: Option<String>,
    pub compare: Option<String>,
    pub power: Option<PowerValue>,
    pub points: Option<usize>,
    pub nu_points: Option<usize>,
    pub nu: Option<f64>,
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub nu_grid: Option<usize>,
    pub eta_grid: Option<usize>,
    pub nu_rel_tol: Option<f64>,
    pub power_rel_tol: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Parses `"1.5"`, `"3dB"`, `"3 dB"` or `"-5db"`; decibels become `10^(x/10)`.
pub fn parse_power(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let (body, db) = match lower.strip_suffix("db") {
        Some(b) => (b.trim_end(), true),
        None => (t, false),
    };
    let x: f64 = body
        .parse()
        .map_err(|_| format!("invalid power {s:?}: expected a number or a value like 3dB"))?;
    let p = if db { 10f64.powf(x / 10.0) } else { x };
    if p.is_finite() && p > 0.0 {
        Ok(p)
    } else {
        Err(format!("invalid power {s:?}: must be finite and positive"))
    }
}

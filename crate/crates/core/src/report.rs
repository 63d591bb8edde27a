use std::fmt;

use serde::Serialize;

/// Outcome of one executable check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of instances (grid points, random draws, ...) examined.
    pub instances: usize,
    /// Largest deviation observed, in the check's own units.
    pub max_deviation: f64,
    /// Deviation above which the check fails.
    pub tolerance: f64,
    pub passed: bool,
    /// Extra named figures (margins, bound values).
    pub metrics: Vec<(String, f64)>,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

const MAX_FAILURES: usize = 10;

impl CheckReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            instances: 0,
            max_deviation: 0.0,
            tolerance,
            passed: true,
            metrics: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Records one instance with its deviation; fails the check when the
    /// deviation exceeds the tolerance or is NaN.
    pub fn observe(&mut self, deviation: f64, context: impl FnOnce() -> String) {
        self.instances += 1;
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = if deviation.is_nan() { f64::NAN } else { deviation };
        }
        if !(deviation <= self.tolerance) {
            self.fail(format!("{} (deviation {deviation:e})", context()));
        }
    }

    pub fn fail(&mut self, message: String) {
        self.passed = false;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(message);
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<28} instances={:<8} max_dev={:<12.4e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.max_deviation,
            self.tolerance,
        )?;
        for (k, v) in &self.metrics {
            write!(f, " {k}={v:.6e}")?;
        }
        for msg in &self.failures {
            write!(f, "\n    - {msg}")?;
        }
        Ok(())
    }
}

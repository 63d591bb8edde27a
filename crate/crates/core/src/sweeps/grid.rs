use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// `count` points from `lo` to `hi`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    count: usize,
    spacing: Spacing,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidGrid(format!("need finite lo < hi, got {lo}:{hi}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need count >= 2, got {count}")));
        }
        if spacing == Spacing::Logarithmic && lo <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "logarithmic spacing needs lo > 0, got {lo}"
            )));
        }
        Ok(Self {
            lo,
            hi,
            count,
            spacing,
        })
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(lo, hi, count, Spacing::Linear)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 >= self.count {
            return self.hi;
        }
        let t = i as f64 / (self.count - 1) as f64;
        match self.spacing {
            Spacing::Linear => self.lo + (self.hi - self.lo) * t,
            Spacing::Logarithmic => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    /// Rejects grids reaching outside `(0, 1]`.
    pub fn check_unit_interval(&self, what: &str) -> Result<()> {
        if self.lo <= 0.0 || self.hi > 1.0 {
            return Err(Error::InvalidGrid(format!(
                "{what} grid must lie within (0, 1], got {}:{}",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)?;
        if self.spacing == Spacing::Logarithmic {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

/// Parses `lo:hi:n`, optionally suffixed with `:lin` or `:log`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::InvalidGrid(format!(
                "expected lo:hi:n[:lin|:log], got {s:?}"
            )));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("bad number {p:?} in {s:?}")))
        };
        let lo = num(parts[0])?;
        let hi = num(parts[1])?;
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidGrid(format!("bad count {:?} in {s:?}", parts[2])))?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") | Some("logarithmic") => Spacing::Logarithmic,
            Some(other) => {
                return Err(Error::InvalidGrid(format!("unknown spacing {other:?}")));
            }
        };
        Self::new(lo, hi, count, spacing)
    }
}

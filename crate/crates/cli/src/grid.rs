use std::str::FromStr;

use crate::error::CliError;

/// `min:max:count`, sampled uniformly including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::usage(format!("range '{s}' must be min:max:count"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let min: f64 = lo.trim().parse().map_err(|_| bad())?;
        let max: f64 = hi.trim().parse().map_err(|_| bad())?;
        let count: usize = n.trim().parse().map_err(|_| bad())?;
        if !min.is_finite() || !max.is_finite() {
            return Err(bad());
        }
        if count == 0 {
            return Err(CliError::usage(format!("range '{s}': count must be >= 1")));
        }
        if min > max {
            return Err(CliError::usage(format!("range '{s}': min exceeds max")));
        }
        Ok(Range { min, max, count })
    }
}

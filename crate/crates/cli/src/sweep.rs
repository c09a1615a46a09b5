//! Grid axes and sweep specifications parsed from the command line.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Inclusive linear range `start:stop:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, String> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("range bounds must be finite, got {start}:{stop}"));
        }
        if steps < 2 {
            return Err(format!("a range needs at least 2 steps, got {steps}"));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:steps, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let steps = n
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("{n:?}: {e}"))?;
        Self::new(num(a)?, num(b)?, steps)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}

/// A grid axis: either a single value or a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Value(f64),
    Range(Range),
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Value(v) => vec![*v],
            Axis::Range(r) => r.values(),
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            return s.parse().map(Axis::Range);
        }
        let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        if v.is_finite() {
            Ok(Axis::Value(v))
        } else {
            Err(format!("value must be finite, got {s}"))
        }
    }
}

/// `name=value` on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub name: String,
    pub value: f64,
}

impl FromStr for Binding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| format!("{value:?}: {e}"))?;
        if !value.is_finite() {
            return Err(format!("{name} must be finite"));
        }
        Ok(Self {
            name: name.trim().to_string(),
            value,
        })
    }
}

/// `name=start:stop:steps` on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepArg {
    pub name: String,
    pub range: Range,
}

impl FromStr for SweepArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=start:stop:steps, got {s:?}"))?;
        Ok(Self {
            name: name.trim().to_string(),
            range: range.parse()?,
        })
    }
}

/// One swept parameter, fixed bindings for the others, and where the table goes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub range: Range,
    pub fixed: Vec<Binding>,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    /// Checks every name against `known`, and that nothing is both swept and fixed.
    pub fn new(
        sweep: SweepArg,
        fixed: Vec<Binding>,
        out: Option<PathBuf>,
        known: &[&str],
    ) -> Result<Self, String> {
        let check = |name: &str| {
            if known.contains(&name) {
                Ok(())
            } else {
                Err(format!(
                    "unknown parameter {name:?}; expected one of {}",
                    known.join(", ")
                ))
            }
        };
        check(&sweep.name)?;
        for (i, b) in fixed.iter().enumerate() {
            check(&b.name)?;
            if b.name == sweep.name || fixed[..i].iter().any(|o| o.name == b.name) {
                return Err(format!("parameter {:?} bound more than once", b.name));
            }
        }
        Ok(Self {
            parameter: sweep.name,
            range: sweep.range,
            fixed,
            out,
        })
    }
}

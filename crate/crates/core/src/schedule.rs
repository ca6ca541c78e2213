use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_finite, Error, Result};
use crate::lie::AlgebraElement;
use crate::numfmt;

/// One constant-control interval of `q' = q (a + u0 b + Σ u_i X_i + r Z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub dt: f64,
    pub u0: f64,
    pub u: Vec<f64>,
    pub r: f64,
}

impl ControlSegment {
    pub fn new(dt: f64, u0: f64, u: Vec<f64>, r: f64) -> Self {
        ControlSegment { dt, u0, u, r }
    }

    pub fn free(d: usize, dt: f64) -> Self {
        Self::new(dt, 0.0, vec![0.0; d], 0.0)
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        check_dim(d, self.u.len())?;
        check_finite([self.dt, self.u0, self.r].into_iter().chain(self.u.iter().copied()), "control segment")?;
        if self.dt <= 0.0 {
            return Err(Error::InvalidArgument(format!("segment duration {} must be positive", self.dt)));
        }
        Ok(())
    }

    /// `dt (a + u0 b + Σ u_i X_i + r Z)`.
    pub fn generator(&self) -> AlgebraElement {
        let d = self.u.len();
        AlgebraElement {
            d,
            a: self.dt,
            b: self.dt * self.u0,
            c: 0.0,
            xi: self.u.iter().map(|u| self.dt * u).collect(),
            eta: vec![0.0; d],
            zeta: self.dt * self.r,
        }
    }

    pub fn max_amplitude(&self) -> f64 {
        self.u.iter().fold(self.u0.abs().max(self.r.abs()), |m, u| m.max(u.abs()))
    }
}

/// Piecewise-constant control; the first segment is applied first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlSchedule {
    pub d: usize,
    pub segments: Vec<ControlSegment>,
}

impl ControlSchedule {
    pub fn empty(d: usize) -> Self {
        ControlSchedule { d, segments: Vec::new() }
    }

    pub fn single(d: usize, seg: ControlSegment) -> Self {
        ControlSchedule { d, segments: vec![seg] }
    }

    pub fn validate(&self) -> Result<()> {
        self.segments.iter().try_for_each(|s| s.validate(self.d))
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.dt).sum()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.segments.iter().map(ControlSegment::max_amplitude).fold(0.0, f64::max)
    }

    /// `self ∥ other`.
    pub fn then(mut self, other: ControlSchedule) -> Result<Self> {
        check_dim(self.d, other.d)?;
        self.segments.extend(other.segments);
        Ok(self)
    }

    pub fn concat(parts: impl IntoIterator<Item = ControlSchedule>, d: usize) -> Result<Self> {
        parts.into_iter().try_fold(Self::empty(d), Self::then)
    }

    pub fn to_json(&self) -> Result<String> {
        numfmt::to_json(self, true)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sched: ControlSchedule = serde_json::from_str(s)?;
        sched.validate()?;
        Ok(sched)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_contract() {
        let s = ControlSchedule {
            d: 2,
            segments: vec![ControlSegment::new(0.1, -1.0, vec![0.5, 2.0], 0.25)],
        };
        let text = s.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["d"], 2);
        assert_eq!(v["segments"][0]["u"].as_array().unwrap().len(), 2);
        for key in ["dt", "u0", "u", "r"] {
            assert!(v["segments"][0].get(key).is_some(), "{key}");
        }
        assert_eq!(ControlSchedule::from_json(&text).unwrap(), s);
    }

    #[test]
    fn rejects_bad_segments() {
        let bad = ControlSchedule::single(1, ControlSegment::new(0.0, 0.0, vec![0.0], 0.0));
        assert!(bad.validate().is_err());
        let wrong_d = ControlSchedule::single(2, ControlSegment::free(1, 1.0));
        assert!(matches!(wrong_d.validate(), Err(Error::DimensionMismatch { .. })));
        let nan = ControlSchedule::single(1, ControlSegment::new(1.0, f64::NAN, vec![0.0], 0.0));
        assert!(matches!(nan.validate(), Err(Error::NonFinite(_))));
    }

    #[test]
    fn totals() {
        let s = ControlSchedule {
            d: 1,
            segments: vec![
                ControlSegment::new(0.5, -3.0, vec![1.0], 0.0),
                ControlSegment::new(0.25, 0.0, vec![-7.0], 2.0),
            ],
        };
        assert_eq!(s.total_time(), 0.75);
        assert_eq!(s.max_amplitude(), 7.0);
        assert_eq!(ControlSchedule::empty(3).total_time(), 0.0);
    }
}

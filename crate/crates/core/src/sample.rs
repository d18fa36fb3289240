//! Deterministic sample plans: an axis-aligned grid intersected with the
//! chart domain plus seeded uniform random points in the grid's box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Chart, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("grid names unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("malformed grid axis `{0}`: expected name=lo:hi:count")]
    MalformedAxis(String),
    #[error("grid axis `{0}` has lo > hi or zero count")]
    EmptyAxis(String),
    #[error("no sample point lies inside the chart domain")]
    NoPoints,
    #[error("found only {found} of {wanted} random points inside the chart domain")]
    DomainTooSmall { wanted: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub coordinate: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(coordinate: &str, lo: f64, hi: f64, count: usize) -> Self {
        AxisRange { coordinate: coordinate.to_string(), lo, hi, count }
    }

    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|k| if k + 1 == self.count { self.hi } else { self.lo + step * k as f64 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePlan {
    pub grid: Vec<AxisRange>,
    pub random: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RANDOM: usize = 25;

/// Parse `x=-1:1:5,z=1.1:2:5`.
pub fn parse_grid(text: &str) -> Result<Vec<AxisRange>, SampleError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|axis| {
            let bad = || SampleError::MalformedAxis(axis.trim().to_string());
            let (name, range) = axis.split_once('=').ok_or_else(bad)?;
            let parts: Vec<&str> = range.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let lo = parts[0].trim().parse().map_err(|_| bad())?;
            let hi = parts[1].trim().parse().map_err(|_| bad())?;
            let count = parts[2].trim().parse().map_err(|_| bad())?;
            Ok(AxisRange::new(name.trim(), lo, hi, count))
        })
        .collect()
}

impl SamplePlan {
    /// `[-1, 1]` with 3 points on every axis.
    pub fn default_for(chart: &Chart) -> Self {
        SamplePlan { grid: chart.names().iter().map(|n| AxisRange::new(n, -1.0, 1.0, 3)).collect(), random: DEFAULT_RANDOM, seed: DEFAULT_SEED }
    }

    /// Replace (or add) the axes named in `axes`.
    pub fn override_axes(&mut self, axes: Vec<AxisRange>) {
        for axis in axes {
            match self.grid.iter_mut().find(|a| a.coordinate == axis.coordinate) {
                Some(slot) => *slot = axis,
                None => self.grid.push(axis),
            }
        }
    }

    fn axes_for(&self, chart: &Chart) -> Result<Vec<AxisRange>, SampleError> {
        for axis in &self.grid {
            if chart.coord_index(&axis.coordinate).is_err() {
                return Err(SampleError::UnknownCoordinate(axis.coordinate.clone()));
            }
            if axis.count == 0 || axis.lo.is_nan() || axis.hi.is_nan() || axis.lo > axis.hi {
                return Err(SampleError::EmptyAxis(axis.coordinate.clone()));
            }
        }
        Ok(chart
            .names()
            .iter()
            .map(|n| self.grid.iter().find(|a| &a.coordinate == n).cloned().unwrap_or_else(|| AxisRange::new(n, -1.0, 1.0, 3)))
            .collect())
    }

    /// Grid points inside the domain, then random points; identical plans
    /// give identical lists.
    pub fn points(&self, chart: &Chart) -> Result<Vec<Point>, SampleError> {
        let axes = self.axes_for(chart)?;
        let values: Vec<Vec<f64>> = axes.iter().map(AxisRange::values).collect();
        let total: usize = values.iter().map(Vec::len).product();
        let mut out = Vec::new();
        for mut flat in 0..total {
            let mut coords = vec![0.0; axes.len()];
            for (a, vals) in values.iter().enumerate().rev() {
                coords[a] = vals[flat % vals.len()];
                flat /= vals.len();
            }
            let p = Point::new(coords);
            if chart.contains(&p) {
                out.push(p);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut found = 0;
        let budget = 1000 * (self.random + 1);
        for _ in 0..budget {
            if found == self.random {
                break;
            }
            let coords = axes.iter().map(|a| a.lo + (a.hi - a.lo) * rng.random::<f64>()).collect();
            let p = Point::new(coords);
            if chart.contains(&p) {
                out.push(p);
                found += 1;
            }
        }
        if found < self.random {
            return Err(SampleError::DomainTooSmall { wanted: self.random, found });
        }
        if out.is_empty() {
            return Err(SampleError::NoPoints);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(vec!["x".into(), "y".into(), "z".into()], &["z > 1"]).unwrap()
    }

    #[test]
    fn grid_is_intersected_with_domain() {
        let plan = SamplePlan {
            grid: vec![AxisRange::new("x", -1.0, 1.0, 2), AxisRange::new("y", 0.0, 0.0, 1), AxisRange::new("z", 0.0, 2.0, 3)],
            random: 0,
            seed: 1,
        };
        let pts = plan.points(&chart()).unwrap();
        // z ∈ {0, 1, 2}: only z = 2 is inside
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.coords()[2] == 2.0));
    }

    #[test]
    fn random_points_are_seeded_and_inside() {
        let plan = SamplePlan { grid: vec![AxisRange::new("z", 0.5, 2.0, 2)], random: 40, seed: 9 };
        let a = plan.points(&chart()).unwrap();
        let b = plan.points(&chart()).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.coords()[2] > 1.0));
        let other = SamplePlan { seed: 10, ..plan }.points(&chart()).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn unreachable_domain_is_reported() {
        let plan = SamplePlan { grid: vec![AxisRange::new("z", -2.0, 0.0, 3)], random: 0, seed: 1 };
        assert_eq!(plan.points(&chart()), Err(SampleError::NoPoints));
        let plan = SamplePlan { random: 5, ..plan };
        assert!(matches!(plan.points(&chart()), Err(SampleError::DomainTooSmall { .. })));
    }

    #[test]
    fn grid_text_parses() {
        let axes = parse_grid("x=-1:1:5, z=1.1:2:4").unwrap();
        assert_eq!(axes[1], AxisRange::new("z", 1.1, 2.0, 4));
        assert!(parse_grid("x=1:2").is_err());
        assert!(parse_grid("x-1:2:3").is_err());
        let mut plan = SamplePlan::default_for(&chart());
        plan.override_axes(parse_grid("w=0:1:2").unwrap());
        assert_eq!(plan.points(&chart()), Err(SampleError::UnknownCoordinate("w".into())));
    }
}

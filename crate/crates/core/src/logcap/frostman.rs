use serde::Serialize;

use crate::geometry::Point;

use super::{potential, DiscreteMeasure};

/// Result of checking `p(z) ≥ ln cap` at sample points off the set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrostmanReport {
    /// Minimum of `p(z) − ln cap` over the samples (`None` when degenerate).
    pub min_margin: Option<f64>,
    pub tolerance: f64,
    pub violations: usize,
    pub worst_sample: Option<Point>,
    /// The measure is polar; the check is skipped.
    pub degenerate: bool,
}

impl FrostmanReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn frostman_tolerance(log_cap: f64) -> f64 {
    1e-2 * log_cap.abs() + 1e-3
}

pub fn frostman_check(m: &DiscreteMeasure, samples: &[Point]) -> FrostmanReport {
    if m.is_polar() || m.capacity_estimate <= 0.0 {
        return FrostmanReport {
            min_margin: None,
            tolerance: 0.0,
            violations: 0,
            worst_sample: None,
            degenerate: true,
        };
    }
    let log_cap = m.capacity_estimate.ln();
    let tolerance = frostman_tolerance(log_cap);
    let mut min_margin = f64::INFINITY;
    let mut worst = None;
    let mut violations = 0;
    for &z in samples {
        let Ok(p) = potential(m, z) else { continue };
        let margin = p.value - log_cap;
        if margin < -tolerance {
            violations += 1;
        }
        if margin < min_margin {
            min_margin = margin;
            worst = Some(z);
        }
    }
    FrostmanReport {
        min_margin: worst.map(|_| min_margin),
        tolerance,
        violations,
        worst_sample: worst,
        degenerate: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Obstacle;
    use crate::logcap::{equilibrium_measure, CompactSet};
    use std::f64::consts::PI;

    #[test]
    fn disc_margin_is_ln2() {
        let k = CompactSet::new(vec![Obstacle::disc(Point::ORIGIN, 1.0)], 0.0);
        let m = equilibrium_measure(&k, 64).unwrap();
        let samples: Vec<Point> = (0..50)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 50.0;
                Point::new(2.0 * t.cos(), 2.0 * t.sin())
            })
            .collect();
        let r = frostman_check(&m, &samples);
        assert!(r.passed());
        assert!((r.min_margin.unwrap() - 2f64.ln()).abs() < 2e-2);
    }

    #[test]
    fn segment_near_endpoint() {
        let k = CompactSet::new(
            vec![Obstacle::segment(Point::ORIGIN, Point::new(1.0, 0.0))],
            0.0,
        );
        let m = equilibrium_measure(&k, 64).unwrap();
        let r = frostman_check(
            &m,
            &[
                Point::new(1.001, 0.0),
                Point::new(0.5, 0.01),
                Point::new(-0.01, 0.0),
            ],
        );
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn point_mass_is_degenerate() {
        let r = frostman_check(
            &DiscreteMeasure::point_mass(Point::ORIGIN),
            &[Point::new(1.0, 0.0)],
        );
        assert!(r.degenerate && r.passed());
    }
}

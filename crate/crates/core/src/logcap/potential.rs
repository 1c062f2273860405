use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::DiscreteMeasure;

/// Value and gradient of the logarithmic potential at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialEval {
    pub value: f64,
    pub gradient: Point,
}

/// `p(z) = Σ w_i ln|z − x_i|` and `∇p(z) = Σ w_i (z − x_i)/|z − x_i|²`.
pub fn potential(m: &DiscreteMeasure, z: Point) -> Result<PotentialEval> {
    let mut value = 0.0;
    let mut gradient = Point::ORIGIN;
    for (x, &w) in m.nodes.iter().zip(&m.weights) {
        let d = z - *x;
        let r2 = d.norm_sq();
        if r2 == 0.0 {
            return Err(Error::OnNode);
        }
        value += 0.5 * w * r2.ln();
        gradient += d * (w / r2);
    }
    Ok(PotentialEval { value, gradient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Obstacle;
    use crate::logcap::{equilibrium_measure, CompactSet};
    use std::f64::consts::E;

    #[test]
    fn point_mass() {
        let m = DiscreteMeasure::point_mass(Point::ORIGIN);
        let p = potential(&m, Point::new(E, 0.0)).unwrap();
        assert!((p.value - 1.0).abs() < 1e-15);
        assert!((p.gradient.x - 1.0 / E).abs() < 1e-15 && p.gradient.y == 0.0);
        assert_eq!(potential(&m, Point::ORIGIN), Err(Error::OnNode));
    }

    #[test]
    fn disc_far_field() {
        let k = CompactSet::new(vec![Obstacle::disc(Point::ORIGIN, 1.0)], 0.0);
        let m = equilibrium_measure(&k, 64).unwrap();
        let p2 = potential(&m, Point::new(2.0, 0.0)).unwrap();
        assert!((p2.value - 2f64.ln()).abs() < 1e-2);
        let p10 = potential(&m, Point::new(10.0, 0.0)).unwrap();
        assert!((p10.value - 10f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let k = CompactSet::new(
            vec![Obstacle::segment(Point::ORIGIN, Point::new(1.0, 1.0))],
            0.0,
        );
        let m = equilibrium_measure(&k, 32).unwrap();
        let z = Point::new(0.3, 0.9);
        let h = 1e-6;
        let g = potential(&m, z).unwrap().gradient;
        let fx = (potential(&m, z + Point::new(h, 0.0)).unwrap().value
            - potential(&m, z - Point::new(h, 0.0)).unwrap().value)
            / (2.0 * h);
        let fy = (potential(&m, z + Point::new(0.0, h)).unwrap().value
            - potential(&m, z - Point::new(0.0, h)).unwrap().value)
            / (2.0 * h);
        assert!((g.x - fx).abs() < 1e-6 && (g.y - fy).abs() < 1e-6);
    }
}

use serde::{Deserialize, Serialize};

use super::point::{polygon_contains, segment_distance, segments_intersect, signed_area};
use super::{Point, Similarity};
use crate::error::{Error, Result};

/// Relative tolerance under which a point counts as lying on a closed obstacle.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A closed obstacle primitive; the open set is the complement of a union of these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Obstacle {
    Disc { center: Point, radius: f64 },
    Segment { a: Point, b: Point },
    Polygon { vertices: Vec<Point> },
    Point { p: Point },
}

impl Obstacle {
    pub fn disc(center: Point, radius: f64) -> Self {
        Obstacle::Disc { center, radius }
    }

    pub fn segment(a: Point, b: Point) -> Self {
        Obstacle::Segment { a, b }
    }

    pub fn point(p: Point) -> Self {
        Obstacle::Point { p }
    }

    pub fn polygon(vertices: Vec<Point>) -> Self {
        Obstacle::Polygon { vertices }
    }

    /// Checks the primitive invariants; `path` prefixes error locations.
    pub fn validate(&self, path: &str) -> Result<()> {
        let bad = |field: &str, message: String| Error::Validation {
            path: format!("{path}.{field}"),
            message,
        };
        match self {
            Obstacle::Disc { center, radius } => {
                if !center.is_finite() {
                    return Err(bad("center", "non-finite coordinate".into()));
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(bad(
                        "radius",
                        format!("radius must be positive, got {radius}"),
                    ));
                }
            }
            Obstacle::Segment { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(bad("a", "non-finite coordinate".into()));
                }
                if a == b {
                    return Err(bad("b", "segment endpoints coincide".into()));
                }
            }
            Obstacle::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(bad("vertices", "polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().any(|v| !v.is_finite()) {
                    return Err(bad("vertices", "non-finite coordinate".into()));
                }
                if signed_area(vertices).abs() <= 0.0 {
                    return Err(bad("vertices", "polygon has zero area".into()));
                }
                if !is_simple(vertices) {
                    return Err(bad("vertices", "polygon is not simple".into()));
                }
            }
            Obstacle::Point { p } => {
                if !p.is_finite() {
                    return Err(bad("p", "non-finite coordinate".into()));
                }
            }
        }
        Ok(())
    }

    /// Euclidean distance from `z` to the obstacle (zero inside).
    pub fn distance(&self, z: Point) -> f64 {
        match self {
            Obstacle::Disc { center, radius } => (z.dist(*center) - radius).max(0.0),
            Obstacle::Segment { a, b } => segment_distance(z, *a, *b),
            Obstacle::Polygon { vertices } => {
                if polygon_contains(vertices, z) {
                    0.0
                } else {
                    polygon_boundary_distance(vertices, z)
                }
            }
            Obstacle::Point { p } => z.dist(*p),
        }
    }

    /// Closed membership: boundary points belong to the obstacle.
    pub fn contains(&self, z: Point) -> bool {
        let (_, r) = self.bounding_disc();
        let tol = BOUNDARY_EPS * r.max(1.0);
        match self {
            Obstacle::Disc { center, radius } => z.dist(*center) <= radius + tol,
            _ => self.distance(z) <= tol,
        }
    }

    /// A disc enclosing the obstacle.
    pub fn bounding_disc(&self) -> (Point, f64) {
        match self {
            Obstacle::Disc { center, radius } => (*center, *radius),
            Obstacle::Segment { a, b } => ((*a + *b) * 0.5, a.dist(*b) * 0.5),
            Obstacle::Polygon { vertices } => {
                let n = vertices.len() as f64;
                let c = vertices.iter().fold(Point::ORIGIN, |acc, v| acc + *v) * (1.0 / n);
                let r = vertices.iter().map(|v| v.dist(c)).fold(0.0, f64::max);
                (c, r)
            }
            Obstacle::Point { p } => (*p, 0.0),
        }
    }

    /// Length of the boundary (the segment itself for segments, zero for points).
    pub fn boundary_length(&self) -> f64 {
        match self {
            Obstacle::Disc { radius, .. } => 2.0 * std::f64::consts::PI * radius,
            Obstacle::Segment { a, b } => a.dist(*b),
            Obstacle::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| vertices[i].dist(vertices[(i + 1) % n]))
                    .sum()
            }
            Obstacle::Point { .. } => 0.0,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Obstacle::Point { .. })
    }

    /// Segments and points have empty interior.
    pub fn is_thin(&self) -> bool {
        matches!(self, Obstacle::Segment { .. } | Obstacle::Point { .. })
    }

    pub fn transform(&self, s: &Similarity) -> Obstacle {
        match self {
            Obstacle::Disc { center, radius } => Obstacle::Disc {
                center: s.apply(*center),
                radius: radius * s.scale,
            },
            Obstacle::Segment { a, b } => Obstacle::Segment {
                a: s.apply(*a),
                b: s.apply(*b),
            },
            Obstacle::Polygon { vertices } => Obstacle::Polygon {
                vertices: vertices.iter().map(|v| s.apply(*v)).collect(),
            },
            Obstacle::Point { p } => Obstacle::Point { p: s.apply(*p) },
        }
    }

    pub fn translate(&self, t: Point) -> Obstacle {
        self.transform(&Similarity::translation(t))
    }
}

fn polygon_boundary_distance(vertices: &[Point], z: Point) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| segment_distance(z, vertices[i], vertices[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn is_simple(vertices: &[Point]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            // skip edges sharing a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

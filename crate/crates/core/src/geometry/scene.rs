use serde::{Deserialize, Serialize};

use super::{Obstacle, Point, Similarity};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Ω = ℂ minus the obstacles.
    Complement,
    /// Ω = open base disc minus the obstacles.
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDisc {
    pub center: Point,
    pub radius: f64,
}

/// Per-index sizing rule for lattice elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sizing {
    /// At node (j, k) a segment along `axis`, centered at the node, of length
    /// `|axis| * (atan(j)/π + 1/2)`.
    Arctan { axis: Point },
}

/// `atan(j)/π + 1/2`, evaluated without cancellation for very negative `j`.
pub fn arctan_length(j: f64) -> f64 {
    if j < 0.0 {
        (-1.0 / j).atan() / std::f64::consts::PI
    } else {
        j.atan() / std::f64::consts::PI + 0.5
    }
}

/// Obstacles replicated over `origin + j*periods[0] + k*periods[1]`, `(j, k) ∈ ℤ²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    #[serde(default)]
    pub origin: Point,
    pub periods: [Point; 2],
    /// Element obstacles, positioned relative to the lattice node.
    #[serde(default)]
    pub element: Vec<Obstacle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizing: Option<Sizing>,
}

impl Lattice {
    pub fn node(&self, j: i64, k: i64) -> Point {
        self.origin + self.periods[0] * (j as f64) + self.periods[1] * (k as f64)
    }

    /// The obstacles of lattice cell `(j, k)` in absolute coordinates.
    pub fn instance(&self, j: i64, k: i64) -> Vec<Obstacle> {
        let node = self.node(j, k);
        let mut out: Vec<Obstacle> = self.element.iter().map(|e| e.translate(node)).collect();
        if let Some(Sizing::Arctan { axis }) = self.sizing {
            let half = axis * (0.5 * arctan_length(j as f64));
            let (a, b) = (node - half, node + half);
            out.push(if a == b {
                Obstacle::point(node)
            } else {
                Obstacle::segment(a, b)
            });
        }
        out
    }

    /// Radius around a node enclosing every instance of that node.
    pub fn element_radius(&self) -> f64 {
        let mut r = self
            .element
            .iter()
            .map(|e| {
                let (c, r) = e.bounding_disc();
                c.norm() + r
            })
            .fold(0.0, f64::max);
        if let Some(Sizing::Arctan { axis }) = self.sizing {
            r = r.max(0.5 * axis.norm());
        }
        r
    }

    fn inverse_periods(&self) -> Option<[[f64; 2]; 2]> {
        let [p, q] = self.periods;
        let det = p.cross(q);
        if det.abs() <= 1e-12 * p.norm() * q.norm() || !det.is_finite() {
            return None;
        }
        Some([[q.y / det, -q.x / det], [-p.y / det, p.x / det]])
    }

    /// Lattice coordinates `(a, b)` with `z = origin + a*p0 + b*p1`.
    pub fn coordinates(&self, z: Point) -> Point {
        let inv = self.inverse_periods().expect("validated lattice");
        let d = z - self.origin;
        Point::new(
            inv[0][0] * d.x + inv[0][1] * d.y,
            inv[1][0] * d.x + inv[1][1] * d.y,
        )
    }

    /// Indices of cells whose instances may meet the closed disc `D̄(center, radius)`.
    pub fn indices_near(&self, center: Point, radius: f64) -> Vec<(i64, i64)> {
        let inv = self.inverse_periods().expect("validated lattice");
        let rho = self.element_radius();
        let reach_len = radius + rho;
        let op_norm = inv.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let reach = reach_len * op_norm + 1e-9;
        let a = self.coordinates(center);
        let (j0, j1) = ((a.x - reach).floor() as i64, (a.x + reach).ceil() as i64);
        let (k0, k1) = ((a.y - reach).floor() as i64, (a.y + reach).ceil() as i64);
        let mut out = Vec::new();
        for j in j0..=j1 {
            for k in k0..=k1 {
                if self.node(j, k).dist(center) <= reach_len * (1.0 + 1e-12) + 1e-12 {
                    out.push((j, k));
                }
            }
        }
        out
    }

    fn transform(&self, s: &Similarity) -> Lattice {
        let linear = Similarity {
            translation: Point::ORIGIN,
            ..*s
        };
        Lattice {
            origin: s.apply(self.origin),
            periods: [
                s.apply_linear(self.periods[0]),
                s.apply_linear(self.periods[1]),
            ],
            element: self.element.iter().map(|e| e.transform(&linear)).collect(),
            sizing: self.sizing.map(|Sizing::Arctan { axis }| Sizing::Arctan {
                axis: s.apply_linear(axis),
            }),
        }
    }
}

/// A planar open set: the plane (or a base disc) minus closed obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_disc: Option<BaseDisc>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
    /// Centers along which the complement is expected to thin out; an input
    /// hint for scenes that are not lattice-periodic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_centers: Option<Vec<Point>>,
}

impl Scene {
    /// The whole plane.
    pub fn plane() -> Scene {
        Scene {
            mode: Mode::Complement,
            base_disc: None,
            obstacles: Vec::new(),
            lattice: None,
            escape_centers: None,
        }
    }

    pub fn complement_of(obstacles: Vec<Obstacle>) -> Scene {
        Scene {
            obstacles,
            ..Scene::plane()
        }
    }

    pub fn disc(center: Point, radius: f64) -> Scene {
        Scene {
            mode: Mode::Bounded,
            base_disc: Some(BaseDisc { center, radius }),
            ..Scene::plane()
        }
    }

    /// Validates invariants and drops bounded-mode obstacles that miss the base disc.
    pub fn validated(mut self) -> Result<Scene> {
        match (self.mode, &self.base_disc) {
            (Mode::Bounded, None) => {
                return Err(Error::Validation {
                    path: "base_disc".into(),
                    message: "bounded mode requires a base disc".into(),
                })
            }
            (Mode::Complement, Some(_)) => {
                return Err(Error::Validation {
                    path: "base_disc".into(),
                    message: "base disc is only allowed in bounded mode".into(),
                })
            }
            _ => {}
        }
        if let Some(b) = &self.base_disc {
            if !(b.radius > 0.0) || !b.radius.is_finite() || !b.center.is_finite() {
                return Err(Error::Validation {
                    path: "base_disc.radius".into(),
                    message: format!("radius must be positive, got {}", b.radius),
                });
            }
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate(&format!("obstacles[{i}]"))?;
        }
        if let Some(lat) = &self.lattice {
            if lat.inverse_periods().is_none() {
                return Err(Error::Validation {
                    path: "lattice.periods".into(),
                    message: "lattice periods are linearly dependent".into(),
                });
            }
            for (i, o) in lat.element.iter().enumerate() {
                o.validate(&format!("lattice.element[{i}]"))?;
            }
            if lat.element.is_empty() && lat.sizing.is_none() {
                return Err(Error::Validation {
                    path: "lattice.element".into(),
                    message: "lattice element is empty".into(),
                });
            }
        }
        if let Some(centers) = &self.escape_centers {
            if centers.is_empty() || centers.iter().any(|c| !c.is_finite()) {
                return Err(Error::Validation {
                    path: "escape_centers".into(),
                    message: "escape centers must be a non-empty list of finite points".into(),
                });
            }
        }
        if let Some(b) = self.base_disc {
            self.obstacles
                .retain(|o| o.distance(b.center) <= b.radius * (1.0 + 1e-12));
        }
        Ok(self)
    }

    pub fn is_periodic(&self) -> bool {
        self.mode == Mode::Complement
            && self.obstacles.is_empty()
            && self.lattice.as_ref().is_some_and(|l| l.sizing.is_none())
    }

    /// All obstacles (finite and lattice instances) that may meet `D̄(center, radius)`.
    pub fn obstacles_near(&self, center: Point, radius: f64) -> Vec<Obstacle> {
        let mut out: Vec<Obstacle> = self
            .obstacles
            .iter()
            .filter(|o| o.distance(center) <= radius * (1.0 + 1e-12))
            .cloned()
            .collect();
        if let Some(lat) = &self.lattice {
            for (j, k) in lat.indices_near(center, radius) {
                out.extend(
                    lat.instance(j, k)
                        .into_iter()
                        .filter(|o| o.distance(center) <= radius * (1.0 + 1e-12)),
                );
            }
        }
        out
    }

    /// `true` iff `z ∈ Ω`; obstacle boundaries are not in Ω.
    pub fn contains(&self, z: Point) -> bool {
        if let Some(b) = &self.base_disc {
            if z.dist(b.center) >= b.radius * (1.0 - 1e-12) {
                return false;
            }
        }
        !self.obstacles_near(z, 0.0).iter().any(|o| o.contains(z))
    }

    pub fn transform(&self, s: &Similarity) -> Result<Scene> {
        s.validate()?;
        Ok(Scene {
            mode: self.mode,
            base_disc: self.base_disc.map(|b| BaseDisc {
                center: s.apply(b.center),
                radius: b.radius * s.scale,
            }),
            obstacles: self.obstacles.iter().map(|o| o.transform(s)).collect(),
            lattice: self.lattice.as_ref().map(|l| l.transform(s)),
            escape_centers: self
                .escape_centers
                .as_ref()
                .map(|cs| cs.iter().map(|c| s.apply(*c)).collect()),
        })
    }

    /// The complement consists of point primitives only (or nothing).
    pub fn complement_is_symbolically_polar(&self) -> bool {
        self.mode == Mode::Complement
            && self.obstacles.iter().all(Obstacle::is_point)
            && self
                .lattice
                .as_ref()
                .is_none_or(|l| l.sizing.is_none() && l.element.iter().all(Obstacle::is_point))
    }

    /// Whether the translated clips along the escape sequence shrink to a polar set.
    ///
    /// Finite obstacles are left behind by an escaping sequence; lattice elements
    /// persist unless a sizing rule shrinks them along the escape direction. The
    /// sequence must move strictly away from the origin; for arctan sizing it must
    /// also run towards `j → -∞`, where the segment length tends to zero.
    pub fn escape_limit_is_polar(&self) -> bool {
        let Some(centers) = &self.escape_centers else {
            return false;
        };
        if self.mode == Mode::Bounded || centers.len() < 2 {
            return false;
        }
        let escaping = centers.windows(2).all(|w| w[1].norm() > w[0].norm());
        if !escaping {
            return false;
        }
        match &self.lattice {
            None => true,
            Some(lat) => {
                if !lat.element.iter().all(Obstacle::is_point) {
                    return false;
                }
                match lat.sizing {
                    None => true,
                    Some(Sizing::Arctan { .. }) => {
                        let a: Vec<f64> = centers.iter().map(|c| lat.coordinates(*c).x).collect();
                        a.windows(2).all(|w| w[1] < w[0]) && *a.last().unwrap() < 0.0
                    }
                }
            }
        }
    }

    /// Ω ∩ D(center, radius) as a bounded scene.
    pub fn truncated_to_disc(&self, center: Point, radius: f64) -> Result<Scene> {
        if self.mode == Mode::Bounded {
            return Err(Error::Unsupported(
                "disc truncation of a bounded scene".into(),
            ));
        }
        let mut s = self.clone();
        s.mode = Mode::Bounded;
        s.base_disc = Some(BaseDisc { center, radius });
        s.escape_centers = None;
        s.validated()
    }

    /// Adds obstacles (e.g. a compact set to remove from Ω).
    pub fn with_obstacles(&self, extra: &[Obstacle]) -> Result<Scene> {
        let mut s = self.clone();
        s.obstacles.extend_from_slice(extra);
        s.validated()
    }
}

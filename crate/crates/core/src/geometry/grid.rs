use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Obstacle, Point, Scene};
use crate::error::{Error, Result};

/// Default cap on the number of grid nodes produced by [`rasterize`].
pub const DEFAULT_NODE_CAP: usize = 4_000_000;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    /// Square of half-side `half` around `c`.
    pub fn centered(c: Point, half: f64) -> Self {
        Self::new(c.x - half, c.y - half, c.x + half, c.y + half)
    }
}

/// Rasterized bounded open set: nodes `origin + (i h, j h)`, `0 ≤ i < nx`, `0 ≤ j < ny`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDomain {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major (`j * nx + i`) interior flags.
    pub interior_mask: Vec<bool>,
}

impl GridDomain {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn node_at(&self, idx: usize) -> Point {
        self.node(idx % self.nx, idx / self.nx)
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.interior_mask[idx]
    }

    pub fn interior_count(&self) -> usize {
        self.interior_mask.iter().filter(|&&m| m).count()
    }

    /// Indices of the four lattice neighbours that exist in the grid.
    pub fn neighbours(&self, idx: usize) -> [Option<usize>; 4] {
        let (i, j) = (idx % self.nx, idx / self.nx);
        [
            (i + 1 < self.nx).then(|| idx + 1),
            (i > 0).then(|| idx - 1),
            (j + 1 < self.ny).then(|| idx + self.nx),
            (j > 0).then(|| idx - self.nx),
        ]
    }

    /// Samples `f` at every node (interior or not).
    pub fn sample(&self, f: impl Fn(Point) -> f64 + Sync) -> Vec<f64> {
        (0..self.len())
            .into_par_iter()
            .map(|k| f(self.node_at(k)))
            .collect()
    }

    /// Samples `f` on interior nodes, zero elsewhere.
    pub fn sample_interior(&self, f: impl Fn(Point) -> f64 + Sync) -> Vec<f64> {
        (0..self.len())
            .into_par_iter()
            .map(|k| {
                if self.interior_mask[k] {
                    f(self.node_at(k))
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Grid with the same node lattice and the given mask.
    pub fn with_mask(&self, interior_mask: Vec<bool>) -> GridDomain {
        assert_eq!(interior_mask.len(), self.len());
        GridDomain {
            interior_mask,
            ..self.clone()
        }
    }
}

/// Rasterizes `scene ∩ bx` at spacing `h` with the default node cap.
pub fn rasterize(scene: &Scene, bx: Rect, h: f64) -> Result<GridDomain> {
    rasterize_with_cap(scene, bx, h, DEFAULT_NODE_CAP)
}

/// Marks grid nodes strictly inside `bx` and inside Ω.
///
/// Segments additionally suppress every node within `h/√2`, so every slit
/// carries at least one Dirichlet node. Point obstacles never change the mask.
pub fn rasterize_with_cap(scene: &Scene, bx: Rect, h: f64, node_cap: usize) -> Result<GridDomain> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid spacing must be positive, got {h}"
        )));
    }
    if !(bx.x1 > bx.x0 && bx.y1 > bx.y0) {
        return Err(Error::InvalidArgument("box is degenerate".into()));
    }
    let nx = ((bx.x1 - bx.x0) / h + 1e-9).floor() + 1.0;
    let ny = ((bx.y1 - bx.y0) / h + 1e-9).floor() + 1.0;
    if nx * ny > node_cap as f64 {
        return Err(Error::GridTooLarge {
            nodes: (nx * ny).min(usize::MAX as f64) as usize,
            cap: node_cap,
        });
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let origin = Point::new(bx.x0, bx.y0);
    let edge = 1e-9 * h;
    let rows: Vec<Vec<bool>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            (0..nx)
                .map(|i| {
                    let z = origin + Point::new(i as f64 * h, j as f64 * h);
                    let in_box = z.x > bx.x0 + edge
                        && z.x < bx.x1 - edge
                        && z.y > bx.y0 + edge
                        && z.y < bx.y1 - edge;
                    in_box && node_in_domain(scene, z, h)
                })
                .collect()
        })
        .collect();
    Ok(GridDomain {
        origin,
        h,
        nx,
        ny,
        interior_mask: rows.concat(),
    })
}

fn node_in_domain(scene: &Scene, z: Point, h: f64) -> bool {
    if let Some(b) = &scene.base_disc {
        if z.dist(b.center) >= b.radius * (1.0 - 1e-12) {
            return false;
        }
    }
    let reach = h * std::f64::consts::FRAC_1_SQRT_2;
    !scene.obstacles_near(z, reach).iter().any(|o| match o {
        Obstacle::Point { .. } => false,
        Obstacle::Segment { .. } => o.distance(z) <= reach,
        _ => o.contains(z),
    })
}

//! Planar open sets described as the plane (or a disc) minus closed primitives.

mod clip;
mod grid;
mod obstacle;
mod parse;
mod point;
mod scene;
mod similarity;

pub use clip::{clip_complement, clip_complement_with_tol, CLIP_TOLERANCE};
pub use grid::{rasterize, rasterize_with_cap, GridDomain, Rect, DEFAULT_NODE_CAP};
pub use obstacle::{Obstacle, BOUNDARY_EPS};
pub use parse::{parse_scene, scene_to_json, NamedScene, ARCTAN_ESCAPE_M};
pub use point::{polygon_contains, segment_distance, signed_area, Point};
pub use scene::{arctan_length, BaseDisc, Lattice, Mode, Scene, Sizing};
pub use similarity::Similarity;

/// Image of a scene under a similarity.
pub fn transform(scene: &Scene, s: &Similarity) -> crate::error::Result<Scene> {
    scene.transform(s)
}

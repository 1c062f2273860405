//! Scene files: a UTF-8 JSON document
//!
//! ```text
//! { "mode": "complement" | "bounded",
//!   "base_disc": { "center": [x, y], "radius": r },          // bounded mode only
//!   "obstacles": [ { "kind": "disc", "center": [x, y], "radius": r }
//!                | { "kind": "segment", "a": [x, y], "b": [x, y] }
//!                | { "kind": "polygon", "vertices": [[x, y], ...] }
//!                | { "kind": "point", "p": [x, y] } ],
//!   "lattice": { "origin": [x, y], "periods": [[x, y], [x, y]],
//!                "element": [ obstacle, ... ],
//!                "sizing": { "kind": "arctan", "axis": [x, y] } },
//!   "escape_centers": [[x, y], ...],
//!   "transform": { "translation": [x, y], "rotation": θ, "scale": s, "reflect": b } }
//! ```
//!
//! or `{ "named": { "scene": "<name>", ...params }, "transform": ... }` for the
//! built-in scenes. Unknown fields are rejected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BaseDisc, Lattice, Mode, Obstacle, Point, Scene, Similarity, Sizing};
use crate::error::{Error, Result};

/// Escape sequence attached to the built-in arctan scene.
pub const ARCTAN_ESCAPE_M: [f64; 4] = [5.0, 20.0, 80.0, 320.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scene", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedScene {
    /// The open unit disc.
    UnitDisc,
    /// ℂ minus closed discs of radius `eps` at the points of `spacing·(ℤ + iℤ)`.
    LatticeDiscs { eps: f64, spacing: f64 },
    /// ℂ minus horizontal segments of length `length` centered at `spacing·(ℤ + iℤ)`.
    LatticeSegments { length: f64, spacing: f64 },
    /// ℂ minus horizontal segments of length `atan(j)/π + 1/2` centered at `j + iℓ`.
    ArctanLattice,
    /// ℂ minus `ℤ + iℤ`.
    IntegerLatticePoints,
}

impl NamedScene {
    pub fn build(&self) -> Result<Scene> {
        let unit = |s: f64| [Point::new(s, 0.0), Point::new(0.0, s)];
        let scene = match *self {
            NamedScene::UnitDisc => Scene::disc(Point::ORIGIN, 1.0),
            NamedScene::LatticeDiscs { eps, spacing } => Scene {
                lattice: Some(Lattice {
                    origin: Point::ORIGIN,
                    periods: unit(spacing),
                    element: vec![Obstacle::disc(Point::ORIGIN, eps)],
                    sizing: None,
                }),
                ..Scene::plane()
            },
            NamedScene::LatticeSegments { length, spacing } => Scene {
                lattice: Some(Lattice {
                    origin: Point::ORIGIN,
                    periods: unit(spacing),
                    element: vec![Obstacle::segment(
                        Point::new(-0.5 * length, 0.0),
                        Point::new(0.5 * length, 0.0),
                    )],
                    sizing: None,
                }),
                ..Scene::plane()
            },
            NamedScene::ArctanLattice => Scene {
                lattice: Some(Lattice {
                    origin: Point::ORIGIN,
                    periods: unit(1.0),
                    element: Vec::new(),
                    sizing: Some(Sizing::Arctan {
                        axis: Point::new(1.0, 0.0),
                    }),
                }),
                escape_centers: Some(
                    ARCTAN_ESCAPE_M
                        .iter()
                        .map(|m| Point::new(-m, 0.0))
                        .collect(),
                ),
                ..Scene::plane()
            },
            NamedScene::IntegerLatticePoints => Scene {
                lattice: Some(Lattice {
                    origin: Point::ORIGIN,
                    periods: unit(1.0),
                    element: vec![Obstacle::point(Point::ORIGIN)],
                    sizing: None,
                }),
                ..Scene::plane()
            },
        };
        scene.validated()
    }
}

impl fmt::Display for NamedScene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedScene::UnitDisc => write!(f, "unit_disc"),
            NamedScene::LatticeDiscs { eps, spacing } => {
                write!(f, "lattice_discs({eps},{spacing})")
            }
            NamedScene::LatticeSegments { length, spacing } => {
                write!(f, "lattice_segments({length},{spacing})")
            }
            NamedScene::ArctanLattice => write!(f, "arctan_lattice"),
            NamedScene::IntegerLatticePoints => write!(f, "integer_lattice_points"),
        }
    }
}

/// Parses `name` or `name(a,b)`, e.g. `lattice_discs(0.1,1)`.
impl FromStr for NamedScene {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            Some(_) => {
                return Err(Error::Syntax {
                    path: "named".into(),
                    message: format!("unbalanced parentheses in `{s}`"),
                })
            }
            None => (s, ""),
        };
        let args: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim().parse::<f64>().map_err(|e| Error::Syntax {
                        path: "named".into(),
                        message: format!("bad argument `{a}`: {e}"),
                    })
                })
                .collect::<Result<_>>()?
        };
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Validation {
                    path: "named".into(),
                    message: format!("`{name}` takes {n} arguments, got {}", args.len()),
                })
            }
        };
        match name {
            "unit_disc" => want(0).map(|_| NamedScene::UnitDisc),
            "arctan_lattice" => want(0).map(|_| NamedScene::ArctanLattice),
            "integer_lattice_points" => want(0).map(|_| NamedScene::IntegerLatticePoints),
            "lattice_discs" => want(2).map(|_| NamedScene::LatticeDiscs {
                eps: args[0],
                spacing: args[1],
            }),
            "lattice_segments" => want(2).map(|_| NamedScene::LatticeSegments {
                length: args[0],
                spacing: args[1],
            }),
            other => Err(Error::Validation {
                path: "named".into(),
                message: format!("unknown built-in scene `{other}`"),
            }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    mode: Option<Mode>,
    base_disc: Option<BaseDisc>,
    obstacles: Option<Vec<Obstacle>>,
    lattice: Option<Lattice>,
    escape_centers: Option<Vec<Point>>,
    named: Option<NamedScene>,
    transform: Option<Similarity>,
}

/// Parses and validates a scene file.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScene = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        if inner.is_data() {
            Error::Validation { path, message }
        } else {
            Error::Syntax { path, message }
        }
    })?;
    let scene = match raw.named {
        Some(named) => {
            if raw.mode.is_some()
                || raw.base_disc.is_some()
                || raw.obstacles.is_some()
                || raw.lattice.is_some()
                || raw.escape_centers.is_some()
            {
                return Err(Error::Validation {
                    path: "named".into(),
                    message: "a named scene cannot be combined with explicit fields".into(),
                });
            }
            named.build()?
        }
        None => {
            let mode = raw.mode.ok_or_else(|| Error::Validation {
                path: "mode".into(),
                message: "missing field `mode`".into(),
            })?;
            Scene {
                mode,
                base_disc: raw.base_disc,
                obstacles: raw.obstacles.unwrap_or_default(),
                lattice: raw.lattice,
                escape_centers: raw.escape_centers,
            }
            .validated()?
        }
    };
    match raw.transform {
        Some(s) => scene
            .transform(&s)
            .map_err(|e| Error::Validation {
                path: "transform".into(),
                message: e.to_string(),
            })?
            .validated(),
        None => Ok(scene),
    }
}

/// Serializes a scene in the scene-file schema.
pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string_pretty(scene).expect("scene serialization is infallible")
}

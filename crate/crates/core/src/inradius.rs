//! Capacity inradius verdicts from capacity profiles of disc clips.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clip_complement, Mode, Point, Scene};
use crate::logcap::{capacity, CapacityReport};

pub const DEFAULT_R_GRID: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_DELTA_GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const DEFAULT_DENSITY: usize = 8;
pub const DEFAULT_BUDGET: usize = 64;
/// Relative slack allowed when comparing lower brackets across radii.
pub const BRACKET_SLACK: f64 = 0.02;

/// Capacities of `Ω^c ∩ D̄(z, R)` over a set of centers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityProfile {
    #[serde(rename = "R")]
    pub r: f64,
    pub centers: Vec<Point>,
    pub caps: Vec<CapacityReport>,
    /// Minimum lower bracket over the centers.
    pub m_r: f64,
}

impl CapacityProfile {
    /// Index of the center with the smallest upper bracket.
    pub fn thinnest(&self) -> usize {
        (0..self.caps.len())
            .min_by(|&a, &b| {
                self.caps[a]
                    .upper
                    .total_cmp(&self.caps[b].upper)
                    .then(a.cmp(&b))
            })
            .unwrap_or(0)
    }
}

pub fn capacity_profile(
    scene: &Scene,
    r: f64,
    centers: &[Point],
    budget: usize,
) -> Result<CapacityProfile> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {r}"
        )));
    }
    if centers.is_empty() {
        return Err(Error::InvalidArgument("no centers to profile".into()));
    }
    let caps = centers
        .par_iter()
        .map(|&c| capacity(&clip_complement(scene, c, r), budget))
        .collect::<Result<Vec<_>>>()?;
    let m_r = caps.iter().map(|c| c.lower).fold(f64::INFINITY, f64::min);
    Ok(CapacityProfile {
        r,
        centers: centers.to_vec(),
        caps,
        m_r,
    })
}

/// `density²` cell-centered points of one lattice period cell.
pub fn fundamental_cell_centers(scene: &Scene, density: usize) -> Result<Vec<Point>> {
    let lat = match &scene.lattice {
        Some(l) if scene.is_periodic() => l,
        _ => return Err(Error::Unsupported("scene is not lattice-periodic".into())),
    };
    if density == 0 {
        return Err(Error::InvalidArgument("density must be at least 1".into()));
    }
    let d = density as f64;
    let mut out = Vec::with_capacity(density * density);
    for k in 0..density {
        for i in 0..density {
            let (a, b) = ((i as f64 + 0.5) / d, (k as f64 + 0.5) / d);
            out.push(lat.origin + lat.periods[0] * a + lat.periods[1] * b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictKind {
    Finite {
        #[serde(rename = "R_star")]
        r_star: f64,
        delta_star: f64,
    },
    Infinite {
        witness_centers: Vec<Point>,
        /// Set when the verdict rests on a structural argument rather than on
        /// capacities measured below every δ.
        #[serde(skip_serializing_if = "Option::is_none")]
        assumption: Option<String>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InradiusVerdict {
    #[serde(flatten)]
    pub kind: VerdictKind,
    pub evidence: Vec<CapacityProfile>,
}

impl InradiusVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, VerdictKind::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, VerdictKind::Infinite { .. })
    }
}

/// Settings for [`capacity_inradius`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InradiusOptions {
    pub r_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub density: usize,
    pub budget: usize,
}

impl Default for InradiusOptions {
    fn default() -> Self {
        Self {
            r_grid: DEFAULT_R_GRID.to_vec(),
            delta_grid: DEFAULT_DELTA_GRID.to_vec(),
            density: DEFAULT_DENSITY,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub const ESCAPE_ASSUMPTION: &str =
    "the clips along the escape sequence are translates of an increasing \
    family of sets whose limit complement is polar, so their capacities tend to 0";

/// Finite/infinite verdict for the capacity inradius.
///
/// Periodic scenes are scanned over one period cell. Scenes with a bounded
/// complement are infinite outright. Other scenes must carry an escape
/// sequence, which is profiled at every radius.
pub fn capacity_inradius(scene: &Scene, opts: &InradiusOptions) -> Result<InradiusVerdict> {
    if opts.r_grid.is_empty() || opts.delta_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "R and δ grids must be non-empty".into(),
        ));
    }
    if opts.r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("R grid must be increasing".into()));
    }
    if scene.mode == Mode::Bounded {
        return Err(Error::Unsupported(
            "capacity inradius of a bounded scene".into(),
        ));
    }
    if scene.is_periodic() {
        return periodic_verdict(scene, opts);
    }
    if scene.lattice.is_none() {
        return bounded_complement_verdict(scene, opts);
    }
    if scene.escape_centers.is_some() {
        return escape_verdict(scene, opts);
    }
    Err(Error::Unsupported(
        "scene is neither lattice-periodic nor equipped with escape centers".into(),
    ))
}

fn periodic_verdict(scene: &Scene, opts: &InradiusOptions) -> Result<InradiusVerdict> {
    let centers = fundamental_cell_centers(scene, opts.density)?;
    let evidence = opts
        .r_grid
        .iter()
        .map(|&r| capacity_profile(scene, r, &centers, opts.budget))
        .collect::<Result<Vec<_>>>()?;
    if scene.complement_is_symbolically_polar() {
        return Ok(InradiusVerdict {
            kind: VerdictKind::Infinite {
                witness_centers: centers,
                assumption: None,
            },
            evidence,
        });
    }
    let clear = opts.delta_grid.iter().copied().fold(0.0, f64::max);
    let kind = finite_from(&evidence, clear)
        .or_else(|| finite_from(&evidence, 0.0))
        .unwrap_or_else(|| VerdictKind::Inconclusive {
            reason: "some period-cell disc misses the complement at every profiled radius".into(),
        });
    Ok(InradiusVerdict { kind, evidence })
}

/// Smallest radius whose minimum lower bracket exceeds `clear` (and is positive)
/// and does not drop at larger radii.
fn finite_from(evidence: &[CapacityProfile], clear: f64) -> Option<VerdictKind> {
    for (i, p) in evidence.iter().enumerate() {
        if p.m_r > 0.0
            && p.m_r >= clear
            && evidence[i..]
                .iter()
                .all(|q| q.m_r >= p.m_r * (1.0 - BRACKET_SLACK))
        {
            return Some(VerdictKind::Finite {
                r_star: p.r,
                delta_star: p.m_r,
            });
        }
    }
    None
}

fn bounded_complement_verdict(scene: &Scene, opts: &InradiusOptions) -> Result<InradiusVerdict> {
    let reach = scene
        .obstacles
        .iter()
        .map(|o| {
            let (c, r) = o.bounding_disc();
            c.norm() + r
        })
        .fold(0.0, f64::max);
    let r_max = opts.r_grid.last().copied().unwrap_or(0.0);
    let far = Point::new(reach + 2.0 * r_max + 1.0, 0.0);
    let evidence = opts
        .r_grid
        .iter()
        .map(|&r| capacity_profile(scene, r, &[far], opts.budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(InradiusVerdict {
        kind: VerdictKind::Infinite {
            witness_centers: vec![far],
            assumption: None,
        },
        evidence,
    })
}

fn escape_verdict(scene: &Scene, opts: &InradiusOptions) -> Result<InradiusVerdict> {
    let centers = scene.escape_centers.clone().unwrap_or_default();
    if centers.is_empty() {
        return Err(Error::InvalidArgument("escape sequence is empty".into()));
    }
    let evidence = opts
        .r_grid
        .iter()
        .map(|&r| capacity_profile(scene, r, &centers, opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let below_every_delta = evidence.iter().all(|p| {
        opts.delta_grid
            .iter()
            .all(|&d| p.caps.iter().any(|c| c.upper < d))
    });
    let witness_centers = evidence
        .iter()
        .map(|p| p.centers[p.thinnest()])
        .collect::<Vec<_>>();
    if below_every_delta {
        return Ok(InradiusVerdict {
            kind: VerdictKind::Infinite {
                witness_centers,
                assumption: None,
            },
            evidence,
        });
    }
    let nonincreasing = evidence.iter().all(|p| {
        p.caps
            .windows(2)
            .all(|w| w[1].estimate <= w[0].estimate * (1.0 + BRACKET_SLACK))
    });
    let kind = if nonincreasing && scene.escape_limit_is_polar() {
        VerdictKind::Infinite {
            witness_centers: vec![*centers.last().unwrap()],
            assumption: Some(ESCAPE_ASSUMPTION.into()),
        }
    } else {
        VerdictKind::Inconclusive {
            reason: "capacities along the escape sequence do not fall below every δ".into(),
        }
    };
    Ok(InradiusVerdict { kind, evidence })
}

//! Verdict reports: closed range of ∂̄ and the dimension of the Bergman space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clip_complement, Mode, Point, Rect, Scene};
use crate::inradius::{capacity_inradius, InradiusOptions, InradiusVerdict, VerdictKind};
use crate::logcap::{capacity, CapacityReport};
use crate::spectral::{closed_range_constant, lambda1_extrapolated, EigenOptions, SpectralResult};
use crate::witness::{
    bergman_witness, cell_samples, certify_witness, select_cell_compacts, BergmanCertificate,
    CellWindow, WitnessCertificate, DEFAULT_SAMPLES_PER_SIDE, DEFAULT_SHELLS,
};

/// Box sides of the default truncation ladder.
pub const DEFAULT_LADDER: [f64; 3] = [4.0, 8.0, 16.0];
/// Grid steps per box side.
pub const LADDER_STEPS: f64 = 256.0;
/// Radius of the disc truncations taken along an escape sequence.
pub const DEFAULT_ESCAPE_RADIUS: f64 = 2.0;
/// Largest relative change of `𝔠` on the last doubling counted as stable.
pub const STABILIZATION_TOL: f64 = 0.05;
/// Inverse-iteration settings for truncations, whose first eigenvalues are nearly
/// degenerate when many period cells fit in the box.
pub const LADDER_EIGEN: EigenOptions = EigenOptions {
    tol: 1e-6,
    max_outer: 2000,
    cg_tol: 1e-11,
};
pub const DEFAULT_CLIP_RADII: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MainVerdict {
    ClosedRange,
    NotClosedRange,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// The reported number bounds the true value from below.
    Lower,
    Upper,
    /// Checked at finitely many sample points only.
    Sampled,
    /// Grid extrapolation, no sign guarantee.
    Extrapolated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSide {
    pub quantity: String,
    pub side: Side,
}

fn side(quantity: &str, side: Side) -> BoundSide {
    BoundSide {
        quantity: quantity.into(),
        side,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Certified { certificate: WitnessCertificate },
    Failed { reason: String },
    NotAttempted { reason: String },
}

impl WitnessOutcome {
    pub fn passes(&self) -> bool {
        matches!(self, WitnessOutcome::Certified { certificate } if certificate.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truncation {
    Box { center: Point, side: f64 },
    Disc { center: Point, radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationEvidence {
    pub truncation: Truncation,
    pub spectral: SpectralResult,
    /// `2/√λ₁` from the extrapolated eigenvalue.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MainTheoremReport {
    pub condition3: InradiusVerdict,
    pub condition4: WitnessOutcome,
    pub condition1_2_evidence: Vec<TruncationEvidence>,
    /// Relative change of `𝔠` on the last rung of the ladder.
    pub last_change: Option<f64>,
    pub verdict: MainVerdict,
    pub notes: Vec<String>,
    pub bounds: Vec<BoundSide>,
}

/// Settings for [`classify_main`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MainOptions {
    pub inradius: InradiusOptions,
    #[serde(rename = "Lambda")]
    pub shells: usize,
    pub samples_per_side: usize,
    pub ladder: Vec<f64>,
    pub escape_radius: f64,
    pub eigen: EigenOptions,
}

impl Default for MainOptions {
    fn default() -> Self {
        Self {
            inradius: InradiusOptions::default(),
            shells: DEFAULT_SHELLS,
            samples_per_side: DEFAULT_SAMPLES_PER_SIDE,
            ladder: DEFAULT_LADDER.to_vec(),
            escape_radius: DEFAULT_ESCAPE_RADIUS,
            eigen: LADDER_EIGEN,
        }
    }
}

/// λ₁ of `Ω ∩ D(center, radius)`, extrapolated from steps `2h` and `h = 2·radius/256`.
pub fn disc_truncation(
    scene: &Scene,
    center: Point,
    radius: f64,
    eigen: EigenOptions,
) -> Result<TruncationEvidence> {
    let t = scene.truncated_to_disc(center, radius)?;
    let s = lambda1_extrapolated(
        &t,
        Rect::centered(center, radius),
        2.0 * radius / LADDER_STEPS,
        eigen,
    )?;
    Ok(evidence(Truncation::Disc { center, radius }, s))
}

/// λ₁ of `Ω ∩ box`, extrapolated from steps `2h` and `h = side/256`.
pub fn box_truncation(
    scene: &Scene,
    center: Point,
    side: f64,
    eigen: EigenOptions,
) -> Result<TruncationEvidence> {
    let s = lambda1_extrapolated(
        scene,
        Rect::centered(center, 0.5 * side),
        side / LADDER_STEPS,
        eigen,
    )?;
    Ok(evidence(Truncation::Box { center, side }, s))
}

fn evidence(truncation: Truncation, spectral: SpectralResult) -> TruncationEvidence {
    TruncationEvidence {
        truncation,
        constant: closed_range_constant(&spectral).constant,
        spectral,
    }
}

fn ladder_evidence(scene: &Scene, opts: &MainOptions) -> Result<Vec<TruncationEvidence>> {
    match &scene.escape_centers {
        Some(centers) if !scene.is_periodic() => centers
            .iter()
            .map(|&c| disc_truncation(scene, c, opts.escape_radius, opts.eigen))
            .collect(),
        _ => {
            let center = scene.lattice.as_ref().map_or(Point::ORIGIN, |l| l.origin);
            opts.ladder
                .iter()
                .map(|&side| box_truncation(scene, center, side, opts.eigen))
                .collect()
        }
    }
}

fn main_witness(scene: &Scene, verdict: &InradiusVerdict, opts: &MainOptions) -> WitnessOutcome {
    let VerdictKind::Finite { r_star, delta_star } = verdict.kind else {
        return WitnessOutcome::NotAttempted {
            reason: "capacity inradius is not finite".into(),
        };
    };
    let m = r_star;
    let delta = (0.5 * delta_star).min(0.5 * m * (1.0 - 1e-3));
    let l = opts.shells as i64;
    let run = || -> Result<WitnessCertificate> {
        let w = select_cell_compacts(
            scene,
            m,
            delta,
            opts.shells,
            CellWindow::around(0, 0, l),
            opts.inradius.budget,
        )?;
        let samples: Vec<Point> = cell_samples(&w, 0, 0, opts.samples_per_side)
            .into_iter()
            .filter(|&z| scene.contains(z))
            .collect();
        certify_witness(&w, &samples)
    };
    match run() {
        Ok(certificate) => WitnessOutcome::Certified { certificate },
        Err(e) => WitnessOutcome::Failed {
            reason: e.to_string(),
        },
    }
}

/// Closed-range verdict from the capacity inradius, a sampled witness and λ₁ of truncations.
pub fn classify_main(scene: &Scene, opts: &MainOptions) -> Result<MainTheoremReport> {
    if scene.mode == Mode::Bounded {
        return Err(Error::Unsupported(
            "main classification needs an unbounded scene".into(),
        ));
    }
    let (verdict, ladder) = rayon::join(
        || capacity_inradius(scene, &opts.inradius),
        || ladder_evidence(scene, opts),
    );
    let (condition3, ladder) = (verdict?, ladder?);
    let condition4 = main_witness(scene, &condition3, opts);

    let mut notes = vec![
        format!(
            "capacity radii {:?}, thresholds {:?}, {}x{} centers per period cell, {} cells per clip",
            opts.inradius.r_grid, opts.inradius.delta_grid, opts.inradius.density, opts.inradius.density, opts.inradius.budget
        ),
        format!("eigenvalues extrapolated from steps 2h and h with h = size/{LADDER_STEPS}"),
    ];
    if let VerdictKind::Infinite {
        assumption: Some(a),
        ..
    } = &condition3.kind
    {
        notes.push(format!("assumption: {a}"));
    }
    if let Some(width) = condition3
        .evidence
        .iter()
        .flat_map(|p| p.caps.iter())
        .map(|c| c.width())
        .reduce(f64::max)
    {
        notes.push(format!("widest capacity bracket {width:.3e}"));
    }
    if matches!(condition4, WitnessOutcome::Certified { .. }) {
        notes.push(format!(
            "witness sampled on {}x{} points of the home cell only",
            opts.samples_per_side, opts.samples_per_side
        ));
    }
    let last_change = match ladder.as_slice() {
        [.., a, b] => Some((b.constant - a.constant).abs() / a.constant),
        _ => None,
    };

    let mut verdict = if condition3.is_finite() && condition4.passes() {
        MainVerdict::ClosedRange
    } else if condition3.is_infinite() && !condition4.passes() {
        MainVerdict::NotClosedRange
    } else {
        MainVerdict::Inconclusive
    };
    if verdict == MainVerdict::ClosedRange && scene.complement_is_symbolically_polar() {
        notes.push("internal error: closed range claimed for a polar complement".into());
        verdict = MainVerdict::Inconclusive;
    }
    match verdict {
        MainVerdict::ClosedRange if last_change.is_some_and(|c| c >= STABILIZATION_TOL) => {
            notes.push("closed-range constant has not stabilized on the truncation ladder".into())
        }
        MainVerdict::NotClosedRange if scene.escape_centers.is_some() && !scene.is_periodic() => notes.push(
            "𝔠(Ω) ≥ 𝔠(Ω ∩ D(c, R)) for every R, and along the escape sequence these approach R·𝔠(𝔻)".into(),
        ),
        _ => {}
    }

    Ok(MainTheoremReport {
        condition3,
        condition4,
        condition1_2_evidence: ladder,
        last_change,
        verdict,
        notes,
        bounds: vec![
            side("capacity.lower", Side::Lower),
            side("capacity.upper", Side::Upper),
            side("R_star", Side::Sampled),
            side("inf_laplacian", Side::Sampled),
            side("sup_value", Side::Sampled),
            side("lambda1", Side::Extrapolated),
            side("constant", Side::Extrapolated),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Zero,
    Infinite,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClipCapacity {
    pub center: Point,
    pub radius: f64,
    pub capacity: CapacityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BergmanReport {
    pub cap_complement: Vec<ClipCapacity>,
    pub dimension: Dimension,
    pub witness: Option<BergmanCertificate>,
    pub notes: Vec<String>,
    pub bounds: Vec<BoundSide>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BergmanOptions {
    pub clip_radii: Vec<f64>,
    pub budget: usize,
}

impl Default for BergmanOptions {
    fn default() -> Self {
        Self {
            clip_radii: DEFAULT_CLIP_RADII.to_vec(),
            budget: crate::inradius::DEFAULT_BUDGET,
        }
    }
}

/// Center of the complement used for the clip family.
pub fn obstacle_centroid(scene: &Scene) -> Point {
    if let (Mode::Bounded, Some(b)) = (scene.mode, &scene.base_disc) {
        return b.center;
    }
    if let Some(l) = &scene.lattice {
        return l.origin;
    }
    if scene.obstacles.is_empty() {
        return Point::ORIGIN;
    }
    let sum = scene
        .obstacles
        .iter()
        .fold(Point::ORIGIN, |acc, o| acc + o.bounding_disc().0);
    sum * (1.0 / scene.obstacles.len() as f64)
}

/// Zero or infinite dimension of the Bergman space from capacities of complement clips.
pub fn classify_bergman(scene: &Scene, opts: &BergmanOptions) -> Result<BergmanReport> {
    let center = obstacle_centroid(scene);
    let clips = opts
        .clip_radii
        .iter()
        .map(|&radius| {
            let k = clip_complement(scene, center, radius);
            Ok((
                k.clone(),
                ClipCapacity {
                    center,
                    radius,
                    capacity: capacity(&k, opts.budget)?,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut notes = vec![format!(
        "clip radii {:?} around ({}, {})",
        opts.clip_radii, center.x, center.y
    )];
    let bounds = vec![
        side("capacity.lower", Side::Lower),
        side("capacity.upper", Side::Upper),
        side("witness.min_laplacian", Side::Sampled),
    ];
    let cap_complement: Vec<ClipCapacity> = clips.iter().map(|(_, c)| c.clone()).collect();
    if scene.complement_is_symbolically_polar() {
        notes.push("complement consists of points only".into());
        return Ok(BergmanReport {
            cap_complement,
            dimension: Dimension::Zero,
            witness: None,
            notes,
            bounds,
        });
    }
    let Some((k, _)) = clips.iter().find(|(_, c)| c.capacity.lower > 0.0) else {
        notes.push("no clip has a positive capacity lower bracket".into());
        return Ok(BergmanReport {
            cap_complement,
            dimension: Dimension::Inconclusive,
            witness: None,
            notes,
            bounds,
        });
    };
    let witness = match bergman_witness(k, opts.budget) {
        Ok(w) => Some(w.certificate),
        Err(e) => {
            notes.push(format!("witness construction failed: {e}"));
            None
        }
    };
    Ok(BergmanReport {
        cap_complement,
        dimension: Dimension::Infinite,
        witness,
        notes,
        bounds,
    })
}

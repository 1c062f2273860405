use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridDomain, Rect, Scene};
use crate::logcap::{capacity, CompactSet, DiscreteMeasure};

use super::eigen::{lambda1_extrapolated, EigenOptions};

/// Tolerance on the final gap `|λ_j − λ_base|/λ_base` for a converging sequence.
pub const STABILITY_GAP: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub capacity: f64,
    pub lambda_coarse: f64,
    pub lambda_fine: f64,
    pub lambda1: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityTable {
    pub h: f64,
    pub lambda_base: f64,
    pub rows: Vec<StabilityRow>,
    /// λ is strictly decreasing along the rows.
    pub decreasing: bool,
    /// The gap to the base value is strictly decreasing and ends below [`STABILITY_GAP`].
    pub converging: bool,
}

/// λ₁ of `base` with each compact set removed in turn, extrapolated from grids `2h` and `h`.
pub fn eigenvalue_stability_experiment(
    base: &Scene,
    shrinking: &[CompactSet],
    h: f64,
    lambda_base: f64,
    capacity_budget: usize,
) -> Result<StabilityTable> {
    let bx = scene_box(base)?;
    let mut rows = Vec::with_capacity(shrinking.len());
    for k in shrinking {
        let scene = base.with_obstacles(&k.pieces)?;
        let r = lambda1_extrapolated(&scene, bx, h, EigenOptions::default())?;
        let lambda1 = r.best();
        rows.push(StabilityRow {
            capacity: capacity(k, capacity_budget)?.estimate,
            lambda_coarse: lambda_at_coarse(&r),
            lambda_fine: r.lambda1,
            lambda1,
            gap: (lambda1 - lambda_base).abs() / lambda_base,
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].lambda1 < w[0].lambda1);
    let converging = rows.windows(2).all(|w| w[1].gap < w[0].gap)
        && rows.last().is_some_and(|r| r.gap < STABILITY_GAP);
    Ok(StabilityTable {
        h,
        lambda_base,
        rows,
        decreasing,
        converging,
    })
}

fn lambda_at_coarse(r: &super::SpectralResult) -> f64 {
    // richardson = (4 λ_f − λ_c)/3
    r.richardson
        .map_or(r.lambda1, |x| 4.0 * r.lambda1 - 3.0 * x)
}

/// Bounding box of a bounded scene.
pub fn scene_box(scene: &Scene) -> Result<Rect> {
    let b = scene
        .base_disc
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("scene must be bounded".into()))?;
    Ok(Rect::centered(b.center, b.radius))
}

/// Harmonic majorant integral for a measure supported in the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MajorantReport {
    /// `J = ln 2 − I`
    pub j: f64,
    pub integral: f64,
    /// `2π / J`
    pub bound: f64,
    pub min_value: f64,
    pub positive: bool,
    pub within_bound: bool,
}

/// Relative quadrature slack allowed on top of `2π/J`.
pub const MAJORANT_SLACK: f64 = 0.02;

/// Integrates `g(z) = J⁻¹ Σ w_i ln(2/|z − x_i|)` over the interior nodes of `grid`.
pub fn majorant_integral_check(m: &DiscreteMeasure, grid: &GridDomain) -> Result<MajorantReport> {
    let j = 2f64.ln() - m.energy_estimate;
    if !(j > 0.0) {
        return Err(Error::NonPositiveJ(j));
    }
    let values: Vec<f64> = grid
        .sample_interior(|z| {
            m.nodes
                .iter()
                .zip(&m.weights)
                .map(|(x, w)| w * (2.0 / z.dist(*x)).ln())
                .sum::<f64>()
                / j
        })
        .into_iter()
        .enumerate()
        .filter(|(k, _)| grid.is_interior(*k))
        .map(|(_, v)| v)
        .collect();
    if values.is_empty() {
        return Err(Error::EmptyInterior);
    }
    let integral = values.iter().sum::<f64>() * grid.h * grid.h;
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = 2.0 * std::f64::consts::PI / j;
    Ok(MajorantReport {
        j,
        integral,
        bound,
        min_value,
        positive: min_value > 0.0,
        within_bound: integral <= bound * (1.0 + MAJORANT_SLACK),
    })
}

/// `∫_{D(0,r)} ln(r/|z|) dA` by the midpoint rule on cells of side `h` (exact value `π r²/2`).
pub fn disc_log_integral(radius: f64, h: f64) -> f64 {
    let n = (radius / h).ceil() as i64;
    let mut total = 0.0;
    for j in -n..n {
        let y = (j as f64 + 0.5) * h;
        let mut row = 0.0;
        for i in -n..n {
            let x = (i as f64 + 0.5) * h;
            let d = (x * x + y * y).sqrt();
            if d < radius {
                row += (radius / d).ln();
            }
        }
        total += row;
    }
    total * h * h
}

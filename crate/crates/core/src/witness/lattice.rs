use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clip_complement, Point, Scene};
use crate::logcap::{
    capacity, equilibrium_measure, potential, CapacityReport, CompactSet, DiscreteMeasure,
};

pub const ZETA3: f64 = 1.202_056_903_159_594_2;
pub const ZETA4: f64 =
    std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI
        / 90.0;
pub const DEFAULT_SHELLS: usize = 6;
pub const DEFAULT_SAMPLES_PER_SIDE: usize = 64;

/// `(8/M⁴) Σ_{λ>Λ} λ/(λ−1)⁴`, the bound on the shells beyond `Λ ≥ 1`.
///
/// Uses `Σ_{λ>Λ} λ/(λ−1)⁴ = Σ_{μ≥Λ} (μ⁻³ + μ⁻⁴)` and the zeta values.
pub fn tail_bound(m: f64, shells: usize) -> f64 {
    let head: f64 = (1..shells.max(1))
        .map(|mu| {
            let mu = mu as f64;
            mu.powi(-3) + mu.powi(-4)
        })
        .sum();
    8.0 / m.powi(4) * (ZETA3 + ZETA4 - head)
}

/// Inclusive range of cell indices `(j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellWindow {
    pub j: (i64, i64),
    pub k: (i64, i64),
}

impl CellWindow {
    /// Cells within Chebyshev distance `r` of `(j, k)`.
    pub fn around(j: i64, k: i64, r: i64) -> Self {
        Self {
            j: (j - r, j + r),
            k: (k - r, k + r),
        }
    }

    pub fn contains(&self, j: i64, k: i64) -> bool {
        self.j.0 <= j && j <= self.j.1 && self.k.0 <= k && k <= self.k.1
    }

    pub fn cells(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in self.k.0..=self.k.1 {
            for j in self.j.0..=self.j.1 {
                out.push((j, k));
            }
        }
        out
    }
}

/// The compact set chosen in one cell and its equilibrium measure.
#[derive(Clone, Debug, PartialEq)]
pub struct CellCompact {
    pub compact: CompactSet,
    pub measure: DiscreteMeasure,
    pub capacity: CapacityReport,
}

/// Truncated lattice sum `φ = Σ e^{−4 p_{j,k}}` over cells at `(2jM, 2kM)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessField {
    pub m: f64,
    pub delta: f64,
    pub shells: usize,
    pub tail_bound: f64,
    pub window: CellWindow,
    pub cells: BTreeMap<(i64, i64), CellCompact>,
}

/// Interval bounds for `φ` and the partial sums of its derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessEval {
    pub value_lo: f64,
    pub value_hi: f64,
    pub grad: Point,
    pub laplacian_lo: f64,
}

impl WitnessField {
    /// A field from given cells (missing cells make it incomplete).
    pub fn from_cells(
        m: f64,
        delta: f64,
        shells: usize,
        window: CellWindow,
        cells: BTreeMap<(i64, i64), CellCompact>,
    ) -> Self {
        Self {
            m,
            delta,
            shells,
            tail_bound: tail_bound(m, shells),
            window,
            cells,
        }
    }

    pub fn cell_center(&self, j: i64, k: i64) -> Point {
        Point::new(2.0 * j as f64 * self.m, 2.0 * k as f64 * self.m)
    }

    /// Cell whose closed square of half side `M` contains `z`.
    pub fn home_cell(&self, z: Point) -> (i64, i64) {
        let s = 2.0 * self.m;
        ((z.x / s).round() as i64, (z.y / s).round() as i64)
    }

    /// Points whose home cell has all shells up to `Λ` inside the window.
    pub fn safe_window(&self) -> Option<CellWindow> {
        let l = self.shells as i64;
        let w = CellWindow {
            j: (self.window.j.0 + l, self.window.j.1 - l),
            k: (self.window.k.0 + l, self.window.k.1 - l),
        };
        (w.j.0 <= w.j.1 && w.k.0 <= w.k.1).then_some(w)
    }

    pub fn first_missing(&self) -> Option<(i64, i64)> {
        self.window
            .cells()
            .into_iter()
            .find(|c| !self.cells.contains_key(c))
    }

    /// Partial sums over the shells `0..=Λ` around `home`, evaluated at `z`.
    pub fn partial_sum(&self, home: (i64, i64), z: Point) -> Result<WitnessEval> {
        let l = self.shells as i64;
        let (mut value, mut grad, mut lap) = (0.0, Point::ORIGIN, 0.0);
        for k in home.1 - l..=home.1 + l {
            for j in home.0 - l..=home.0 + l {
                let cell = self
                    .cells
                    .get(&(j, k))
                    .ok_or(Error::IncompleteField(j, k))?;
                let p = potential(&cell.measure, z)?;
                let term = (-4.0 * p.value).exp();
                value += term;
                grad += p.gradient * (-4.0 * term);
                lap += 16.0 * term * p.gradient.norm_sq();
            }
        }
        Ok(WitnessEval {
            value_lo: value,
            value_hi: value + self.tail_bound,
            grad,
            laplacian_lo: lap,
        })
    }
}

type CellIndex = (i64, i64);

/// Chooses `K_{j,k} = Ω^c ∩ D̄((2jM, 2kM), M + 2δ)` for every cell of the window.
///
/// Fails with the list of cells whose capacity lower bracket is below `δ`.
pub fn select_cell_compacts(
    scene: &Scene,
    m: f64,
    delta: f64,
    shells: usize,
    window: CellWindow,
    budget: usize,
) -> Result<WitnessField> {
    if !(m > 0.0 && delta > 0.0 && 2.0 * delta < m) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < 2δ < M, got M = {m}, δ = {delta}"
        )));
    }
    if shells == 0 {
        return Err(Error::InvalidArgument(
            "at least one shell is required".into(),
        ));
    }
    let radius = m + 2.0 * delta;
    let results: Vec<(CellIndex, Result<Option<CellCompact>>)> = window
        .cells()
        .into_par_iter()
        .map(|(j, k)| {
            let center = Point::new(2.0 * j as f64 * m, 2.0 * k as f64 * m);
            let compact = clip_complement(scene, center, radius);
            let r = (|| {
                let report = capacity(&compact, budget)?;
                if report.lower < delta {
                    return Ok(None);
                }
                let measure = equilibrium_measure(&compact, budget)?;
                Ok(Some(CellCompact {
                    compact,
                    measure,
                    capacity: report,
                }))
            })();
            ((j, k), r)
        })
        .collect();
    let mut cells = BTreeMap::new();
    let mut failed = Vec::new();
    for (idx, r) in results {
        match r? {
            Some(c) => {
                cells.insert(idx, c);
            }
            None => failed.push(idx),
        }
    }
    if !failed.is_empty() {
        return Err(Error::InsufficientCapacity {
            cells: failed,
            delta,
        });
    }
    Ok(WitnessField::from_cells(m, delta, shells, window, cells))
}

pub fn eval_witness(w: &WitnessField, z: Point) -> Result<WitnessEval> {
    let home = w.home_cell(z);
    match w.safe_window() {
        Some(s) if s.contains(home.0, home.1) => w.partial_sum(home, z),
        _ => Err(Error::OutsideSafeRegion { x: z.x, y: z.y }),
    }
}

/// Result of sampling the witness over a point set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCertificate {
    #[serde(rename = "M")]
    pub m: f64,
    pub delta: f64,
    #[serde(rename = "Lambda")]
    pub shells: usize,
    pub samples: usize,
    pub sup_value: f64,
    /// `8δ⁻⁴ + (8/M⁴)(ζ(3) + ζ(4))`
    pub sup_value_bound: f64,
    /// `δ⁻⁴`, the bound on the home-cell term not covered by the shell sum.
    pub home_cell_bound: f64,
    pub inf_laplacian: f64,
    /// `2/(49 M⁵)`, reported for comparison only.
    pub nominal_floor: f64,
    /// Samples at which `Re(z−w) ≥ M` and `√2 M < |z−w| < √98 M` hold for every
    /// node `w` of the cell two steps down and to the left.
    pub geometry_ok: usize,
    pub pass: bool,
}

pub fn certify_witness(w: &WitnessField, samples: &[Point]) -> Result<WitnessCertificate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some((j, k)) = w.first_missing() {
        return Err(Error::IncompleteField(j, k));
    }
    let evals = samples
        .par_iter()
        .map(|&z| eval_witness(w, z).map(|e| (e, geometry_holds(w, z))))
        .collect::<Result<Vec<_>>>()?;
    let sup_value = evals
        .iter()
        .map(|(e, _)| e.value_hi)
        .fold(f64::NEG_INFINITY, f64::max);
    let inf_laplacian = evals
        .iter()
        .map(|(e, _)| e.laplacian_lo)
        .fold(f64::INFINITY, f64::min);
    let geometry_ok = evals.iter().filter(|(_, g)| *g).count();
    let sup_value_bound = 8.0 * w.delta.powi(-4) + 8.0 / w.m.powi(4) * (ZETA3 + ZETA4);
    let home_cell_bound = w.delta.powi(-4);
    Ok(WitnessCertificate {
        m: w.m,
        delta: w.delta,
        shells: w.shells,
        samples: samples.len(),
        sup_value,
        sup_value_bound,
        home_cell_bound,
        inf_laplacian,
        nominal_floor: 2.0 / (49.0 * w.m.powi(5)),
        geometry_ok,
        pass: inf_laplacian > 0.0
            && sup_value <= sup_value_bound + home_cell_bound
            && geometry_ok == samples.len(),
    })
}

fn geometry_holds(w: &WitnessField, z: Point) -> bool {
    let (j0, k0) = w.home_cell(z);
    let Some(cell) = w.cells.get(&(j0 - 2, k0 - 2)) else {
        return false;
    };
    let m = w.m;
    cell.measure.nodes.iter().all(|&x| {
        let d = z - x;
        d.x >= m && d.norm() > 2f64.sqrt() * m && d.norm() < 98f64.sqrt() * m
    })
}

/// `n × n` cell-centered samples of the home square `Q((2jM, 2kM), M)`.
pub fn cell_samples(w: &WitnessField, j: i64, k: i64, n: usize) -> Vec<Point> {
    let c = w.cell_center(j, k);
    let step = 2.0 * w.m / n as f64;
    let mut out = Vec::with_capacity(n * n);
    for b in 0..n {
        for a in 0..n {
            out.push(
                c + Point::new(
                    -w.m + (a as f64 + 0.5) * step,
                    -w.m + (b as f64 + 0.5) * step,
                ),
            );
        }
    }
    out
}

/// Analytic Laplacian of the partial sum and its 5-point central difference at spacing `h`.
pub fn laplacian_cross_check(w: &WitnessField, z: Point, h: f64) -> Result<(f64, f64)> {
    let home = w.home_cell(z);
    let at = |p: Point| w.partial_sum(home, p).map(|e| e.value_lo);
    let c = at(z)?;
    let sum = at(z + Point::new(h, 0.0))?
        + at(z - Point::new(h, 0.0))?
        + at(z + Point::new(0.0, h))?
        + at(z - Point::new(0.0, h))?;
    Ok((
        w.partial_sum(home, z)?.laplacian_lo,
        (sum - 4.0 * c) / (h * h),
    ))
}

use serde::Serialize;

use crate::error::Result;

use super::{equilibrium_measure, leja_points, transfinite_diameter, CompactSet, Method};

/// Capacity estimate with a bracket from both estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
    pub method: Method,
    /// Energy estimate `exp(I)` from the variational solver.
    pub energy: f64,
    /// n-point diameter of the Leja sequence.
    pub transfinite: f64,
    /// False when the energy estimate exceeds the upper-biased diameter by more than the margin.
    pub consistent: bool,
}

impl CapacityReport {
    fn zero(n: usize, method: Method) -> Self {
        Self {
            estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
            n,
            method,
            energy: 0.0,
            transfinite: 0.0,
            consistent: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn brackets(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Relative allowance for quadrature error in the energy estimate.
pub const QUADRATURE_SLACK: f64 = 1e-3;

/// Logarithmic capacity of `k` using `budget` cells per estimator.
///
/// The estimate is the energy value, which is the energy of an actual
/// probability measure on `k` and therefore a lower bound up to quadrature
/// error. The upper end adds the margin `1/n + tol/R` to the larger of the
/// energy value and the Leja diameter.
pub fn capacity(k: &CompactSet, budget: usize) -> Result<CapacityReport> {
    let n = budget.max(2);
    if k.is_empty() {
        return Ok(CapacityReport::zero(n, Method::Empty));
    }
    if k.is_polar() {
        return Ok(CapacityReport::zero(n, Method::Polar));
    }
    let k = k.without_points();
    let measure = equilibrium_measure(&k, n)?;
    let dn = transfinite_diameter(&leja_points(&k, n)?)?;
    let est = measure.capacity_estimate;
    let margin = 1.0 / n as f64 + k.hausdorff_tol / k.bounding_radius;
    Ok(CapacityReport {
        estimate: est,
        lower: est * (1.0 - QUADRATURE_SLACK),
        upper: est.max(dn) * (1.0 + margin),
        n,
        method: Method::EnergyMax,
        energy: est,
        transfinite: dn,
        consistent: est * (1.0 - QUADRATURE_SLACK) <= dn * (1.0 + margin),
    })
}

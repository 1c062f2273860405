use crate::error::Result;
use crate::geometry::GridDomain;

use super::operator::{cg_iteration_cap, conjugate_gradient, DirichletLaplacian};

pub const HARMONIC_TOL: f64 = 1e-12;

/// Discrete harmonic function with the given values on masked nodes.
///
/// Interior values solve the 5-point mean-value equations; masked entries of
/// `boundary` are copied through unchanged.
pub fn harmonic_extension(g: &GridDomain, boundary: &[f64]) -> Result<Vec<f64>> {
    let op = DirichletLaplacian::new(g)?;
    let inv_h2 = 1.0 / (g.h * g.h);
    let rhs: Vec<f64> = op
        .nodes
        .iter()
        .map(|&k| {
            g.neighbours(k)
                .iter()
                .flatten()
                .filter(|&&n| !g.is_interior(n))
                .map(|&n| boundary[n] * inv_h2)
                .sum()
        })
        .collect();
    let mut x = vec![0.0; op.len()];
    conjugate_gradient(&op, &rhs, &mut x, HARMONIC_TOL, cg_iteration_cap(g))?;
    let mut out = boundary.to_vec();
    for (&k, &v) in op.nodes.iter().zip(&x) {
        out[k] = v;
    }
    Ok(out)
}

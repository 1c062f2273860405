use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::kernel::mutual_energy;
use super::CompactSet;

/// Estimator that produced a measure or a capacity value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Leja,
    EnergyMax,
    Polar,
    Empty,
}

/// A probability measure on finitely many nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Discrete energy; `-inf` for polar sets.
    pub energy_estimate: f64,
    pub capacity_estimate: f64,
    pub method: Method,
}

impl DiscreteMeasure {
    pub fn point_mass(p: Point) -> Self {
        Self::uniform(vec![p])
    }

    /// Equal weights on `nodes`; the energy is `-inf` (no self radii).
    pub fn uniform(nodes: Vec<Point>) -> Self {
        let w = 1.0 / nodes.len() as f64;
        Self {
            weights: vec![w; nodes.len()],
            nodes,
            energy_estimate: f64::NEG_INFINITY,
            capacity_estimate: 0.0,
            method: Method::Polar,
        }
    }

    pub fn is_polar(&self) -> bool {
        self.energy_estimate == f64::NEG_INFINITY
    }
}

pub const MAX_ACTIVE_SET_ITERATIONS_PER_NODE: usize = 4;
const KKT_TOL: f64 = 1e-10;

/// Energy-maximizing measure on an `n`-cell boundary discretization of `k`.
///
/// Each cell carries a uniform measure, so the quadratic form
/// `Σ_{i≠j} w_i w_j E_ij + Σ_i w_i² ln ρ_i` is the exact logarithmic energy
/// of a probability measure on `k` (`E_ij` the mutual cell energies, `ρ_i`
/// the cell self-energy radii). It is maximized over the simplex with a
/// primal active-set method. The kernel is shifted by a constant that makes
/// its negative positive definite; the shift moves every feasible objective
/// value by the same amount and is undone at the end.
pub fn equilibrium_measure(k: &CompactSet, n: usize) -> Result<DiscreteMeasure> {
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "equilibrium_measure needs n >= 2, got {n}"
        )));
    }
    if k.is_polar() {
        let mut nodes: Vec<Point> = k.pieces.iter().map(|p| p.bounding_disc().0).collect();
        nodes.sort_by(|a, b| a.lex_cmp(b));
        nodes.dedup();
        return Ok(DiscreteMeasure::uniform(nodes));
    }
    let k = k.without_points();
    let cells = k.cells(n);
    let m = cells.len();
    let mut kernel = DMatrix::zeros(m, m);
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| match i.cmp(&j) {
                    Ordering::Equal => cells[i].self_radius.ln(),
                    Ordering::Less => mutual_energy(&cells[i], &cells[j]),
                    Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    for i in 0..m {
        for j in i..m {
            kernel[(i, j)] = rows[i][j];
            kernel[(j, i)] = rows[i][j];
        }
    }
    let shift = (4.0 * k.bounding_radius).ln() + 1.0;
    let q = kernel.map(|a| shift - a);
    let w = min_norm_simplex(&q)?;
    let energy = w.dot(&(&kernel * &w));
    Ok(DiscreteMeasure {
        nodes: cells.iter().map(|c| c.node).collect(),
        weights: w.iter().copied().collect(),
        energy_estimate: energy,
        capacity_estimate: energy.exp(),
        method: Method::EnergyMax,
    })
}

/// Minimizes `wᵀ Q w` over the probability simplex for symmetric positive definite `Q`.
fn min_norm_simplex(q: &DMatrix<f64>) -> Result<DVector<f64>> {
    let m = q.nrows();
    let mut active = vec![true; m];
    let mut w = DVector::from_element(m, 1.0 / m as f64);
    let max_iter = MAX_ACTIVE_SET_ITERATIONS_PER_NODE * m + 10;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let idx: Vec<usize> = (0..m).filter(|&i| active[i]).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| q[(idx[a], idx[b])]);
        let x = solve_spd(sub, idx.len())?;
        let total: f64 = x.sum();
        let target: Vec<f64> = x.iter().map(|v| v / total).collect();

        if target.iter().all(|&v| v >= 0.0) {
            w.fill(0.0);
            for (a, &i) in idx.iter().enumerate() {
                w[i] = target[a];
            }
            let g = q * &w;
            let mu = w.dot(&g);
            let (worst, viol) = (0..m)
                .filter(|&i| !active[i])
                .map(|i| (i, (mu - g[i]) / mu.abs().max(f64::MIN_POSITIVE)))
                .fold(
                    (usize::MAX, 0.0),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
            residual = viol;
            if viol <= KKT_TOL {
                let s = w.sum();
                return Ok(w / s);
            }
            active[worst] = true;
        } else {
            // step from w towards the target until the first weight hits zero
            let mut step = 1.0;
            let mut blocking = None;
            for (a, &i) in idx.iter().enumerate() {
                if target[a] < 0.0 {
                    let t = w[i] / (w[i] - target[a]);
                    if t < step {
                        step = t;
                        blocking = Some(i);
                    }
                }
            }
            for (a, &i) in idx.iter().enumerate() {
                w[i] += step * (target[a] - w[i]);
            }
            if let Some(i) = blocking {
                w[i] = 0.0;
                active[i] = false;
            }
            for i in 0..m {
                if active[i] && w[i] <= 0.0 {
                    active[i] = false;
                    w[i] = 0.0;
                }
            }
            if !active.iter().any(|&a| a) {
                return Err(Error::NonConvergence {
                    iterations: 0,
                    residual: f64::INFINITY,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual,
    })
}

fn solve_spd(a: DMatrix<f64>, n: usize) -> Result<DVector<f64>> {
    let rhs = DVector::from_element(n, 1.0);
    match a.clone().cholesky() {
        Some(c) => Ok(c.solve(&rhs)),
        None => a.lu().solve(&rhs).ok_or(Error::NonConvergence {
            iterations: 0,
            residual: f64::INFINITY,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Obstacle;

    fn disc(r: f64) -> CompactSet {
        CompactSet::new(vec![Obstacle::disc(Point::ORIGIN, r)], 0.0)
    }

    #[test]
    fn polar_input() {
        let k = CompactSet::new(
            vec![
                Obstacle::point(Point::ORIGIN),
                Obstacle::point(Point::new(1.0, 0.0)),
            ],
            0.0,
        );
        let m = equilibrium_measure(&k, 8).unwrap();
        assert_eq!(m.capacity_estimate, 0.0);
        assert!(m.is_polar());
    }

    #[test]
    fn unit_disc() {
        let m = equilibrium_measure(&disc(1.0), 64).unwrap();
        assert!(
            (m.capacity_estimate - 1.0).abs() < 1e-2,
            "{}",
            m.capacity_estimate
        );
        let (lo, hi) = m
            .weights
            .iter()
            .fold((1.0f64, 0.0f64), |(a, b), &w| (a.min(w), b.max(w)));
        assert!(hi / lo < 1.0 + 1e-8);
        assert!((m.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_is_exact_for_scaled_nodes() {
        let a = equilibrium_measure(&disc(1.0), 64).unwrap();
        let b = equilibrium_measure(&disc(2.0), 64).unwrap();
        assert!((b.capacity_estimate / a.capacity_estimate - 2.0).abs() < 1e-12);
        assert!((b.capacity_estimate - 2.0).abs() < 2e-2);
    }

    #[test]
    fn segment_is_quarter_length() {
        let k = CompactSet::new(
            vec![Obstacle::segment(Point::ORIGIN, Point::new(1.0, 0.0))],
            0.0,
        );
        let m = equilibrium_measure(&k, 64).unwrap();
        assert!(
            (m.capacity_estimate - 0.25).abs() < 0.25 * 1e-2,
            "{}",
            m.capacity_estimate
        );
        // end weights exceed the middle ones
        assert!(
            m.weights[0] / m.nodes[1].dist(m.nodes[0])
                > m.weights[32] / m.nodes[33].dist(m.nodes[32])
        );
    }

    #[test]
    fn far_apart_discs_use_few_nodes() {
        let k = CompactSet::new(
            vec![
                Obstacle::disc(Point::ORIGIN, 1.0),
                Obstacle::disc(Point::new(1e3, 0.0), 1e-4),
            ],
            0.0,
        );
        let m = equilibrium_measure(&k, 32).unwrap();
        // two-body closed form: maximize a²·0 + b² ln ρ + 2ab ln d
        let d = 1e3f64.ln();
        let r = 1e-4f64.ln();
        let b = d / (2.0 * d - r);
        let e = 2.0 * b * (1.0 - b) * d + b * b * r;
        assert!(
            (m.energy_estimate - e).abs() < 2e-2,
            "{} vs {e}",
            m.energy_estimate
        );
    }
}

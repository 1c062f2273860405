use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::GridDomain;

const NONE: u32 = u32::MAX;
const CHUNK: usize = 4096;

/// Matrix-free 5-point Dirichlet Laplacian `(4u_i − Σ u_nbr)/h²` on the
/// interior nodes of a grid. Masked neighbours contribute zero.
#[derive(Clone, Debug)]
pub struct DirichletLaplacian {
    pub h: f64,
    /// Grid index of each unknown.
    pub nodes: Vec<usize>,
    /// Unknown index of each grid node, if interior.
    slot: Vec<u32>,
    nbrs: Vec<[u32; 4]>,
}

impl DirichletLaplacian {
    pub fn new(g: &GridDomain) -> Result<Self> {
        let nodes: Vec<usize> = (0..g.len()).filter(|&k| g.is_interior(k)).collect();
        if nodes.is_empty() {
            return Err(Error::EmptyInterior);
        }
        if nodes.len() >= NONE as usize {
            return Err(Error::GridTooLarge {
                nodes: nodes.len(),
                cap: NONE as usize - 1,
            });
        }
        let mut slot = vec![NONE; g.len()];
        for (u, &k) in nodes.iter().enumerate() {
            slot[k] = u as u32;
        }
        let nbrs = nodes
            .iter()
            .map(|&k| g.neighbours(k).map(|n| n.map_or(NONE, |n| slot[n])))
            .collect();
        Ok(Self {
            h: g.h,
            nodes,
            slot,
            nbrs,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn slot(&self, grid_index: usize) -> Option<usize> {
        match self.slot[grid_index] {
            NONE => None,
            u => Some(u as usize),
        }
    }

    /// Unknown indices of the four neighbours (`None` when masked).
    pub fn neighbour_slots(&self, u: usize) -> [Option<usize>; 4] {
        self.nbrs[u].map(|n| (n != NONE).then_some(n as usize))
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let inv_h2 = 1.0 / (self.h * self.h);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut s = 4.0 * x[i];
            for &n in &self.nbrs[i] {
                if n != NONE {
                    s -= x[n as usize];
                }
            }
            *yi = s * inv_h2;
        });
    }

    /// Gathers unknowns from a full grid field.
    pub fn restrict(&self, field: &[f64]) -> Vec<f64> {
        self.nodes.iter().map(|&k| field[k]).collect()
    }

    /// Scatters unknowns into a full grid field, zero elsewhere.
    pub fn extend(&self, x: &[f64], grid_len: usize) -> Vec<f64> {
        let mut out = vec![0.0; grid_len];
        for (&k, &v) in self.nodes.iter().zip(x) {
            out[k] = v;
        }
        out
    }
}

/// Dot product with a fixed reduction order, independent of thread count.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    partial.iter().sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut()
        .zip(x.par_iter())
        .for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Outcome of a conjugate-gradient solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Solves `A x = b` by conjugate gradients starting from `x`, to relative residual `tol`.
pub fn conjugate_gradient(
    op: &DirichletLaplacian,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<CgStats> {
    let n = b.len();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        x.fill(0.0);
        return Ok(CgStats {
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut ap = vec![0.0; n];
    op.apply(x, &mut ap);
    let mut r: Vec<f64> = b.iter().zip(&ap).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        let res = rr.sqrt() / b_norm;
        if res <= tol {
            return Ok(CgStats {
                iterations: it,
                residual: res,
            });
        }
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::CgBreakdown {
                iterations: it,
                residual: res,
            });
        }
        let alpha = rr / pap;
        axpy(alpha, &p, x);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        p.par_iter_mut()
            .zip(r.par_iter())
            .for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
    let res = rr.sqrt() / b_norm;
    if res <= tol {
        return Ok(CgStats {
            iterations: max_iter,
            residual: res,
        });
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: res,
    })
}

/// Default inner iteration cap for a grid.
pub fn cg_iteration_cap(g: &GridDomain) -> usize {
    20 * (g.nx + g.ny) + 1000
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, Rect, Scene};

    #[test]
    fn operator_is_symmetric_and_positive() {
        let g = rasterize(&Scene::plane(), Rect::new(0.0, 0.0, 1.0, 1.0), 0.125).unwrap();
        let op = DirichletLaplacian::new(&g).unwrap();
        let n = op.len();
        assert_eq!(n, 49);
        let x: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        let y: Vec<f64> = (0..n).map(|i| ((i * 3) % 4) as f64).collect();
        let (mut ax, mut ay) = (vec![0.0; n], vec![0.0; n]);
        op.apply(&x, &mut ax);
        op.apply(&y, &mut ay);
        assert!((dot(&ax, &y) - dot(&x, &ay)).abs() < 1e-9);
        assert!(dot(&ax, &x) > 0.0);
    }

    #[test]
    fn cg_solves_poisson() {
        let g = rasterize(&Scene::plane(), Rect::new(0.0, 0.0, 1.0, 1.0), 1.0 / 32.0).unwrap();
        let op = DirichletLaplacian::new(&g).unwrap();
        let exact: Vec<f64> = op
            .nodes
            .iter()
            .map(|&k| {
                let z = g.node_at(k);
                z.x * (1.0 - z.x) * z.y * (1.0 - z.y)
            })
            .collect();
        let mut b = vec![0.0; op.len()];
        op.apply(&exact, &mut b);
        let mut x = vec![0.0; op.len()];
        let s = conjugate_gradient(&op, &b, &mut x, 1e-12, 5000).unwrap();
        assert!(s.residual <= 1e-12);
        let err = x
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn empty_interior_is_an_error() {
        let g = rasterize(&Scene::plane(), Rect::new(0.0, 0.0, 1.0, 1.0), 1.0).unwrap();
        assert_eq!(
            DirichletLaplacian::new(&g).unwrap_err(),
            Error::EmptyInterior
        );
    }
}

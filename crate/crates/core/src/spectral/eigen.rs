use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{rasterize, GridDomain, Rect, Scene};

use super::operator::{cg_iteration_cap, conjugate_gradient, dot, norm, DirichletLaplacian};

/// Inverse-iteration settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenOptions {
    /// Relative residual and relative eigenvalue-change target.
    pub tol: f64,
    pub max_outer: usize,
    /// Relative residual target of each inner solve.
    pub cg_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_outer: 200,
            cg_tol: 1e-11,
        }
    }
}

/// First Dirichlet eigenpair of a rasterized domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    /// Full-grid eigenvector, zero off the interior, `h² Σ v² = 1`, max entry positive.
    #[serde(skip)]
    pub eigvector: Vec<f64>,
    pub iterations: usize,
    /// `‖A v − λ v‖ / (λ ‖v‖)`
    pub residual: f64,
    pub h: f64,
    /// Order-h² extrapolation from this grid and the grid at spacing `2h`.
    pub richardson: Option<f64>,
    pub h_list: Vec<f64>,
    pub interior_nodes: usize,
}

impl SpectralResult {
    /// The extrapolated value when present, else the grid value.
    pub fn best(&self) -> f64 {
        self.richardson.unwrap_or(self.lambda1)
    }
}

pub fn lambda1(g: &GridDomain, tol: f64) -> Result<SpectralResult> {
    lambda1_with(
        g,
        EigenOptions {
            tol,
            ..EigenOptions::default()
        },
    )
}

/// Smallest eigenvalue of the 5-point Dirichlet Laplacian by inverse power
/// iteration, starting from the all-ones vector.
pub fn lambda1_with(g: &GridDomain, opts: EigenOptions) -> Result<SpectralResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {}",
            opts.tol
        )));
    }
    let op = DirichletLaplacian::new(g)?;
    let n = op.len();
    let cap = cg_iteration_cap(g);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];
    op.apply(&v, &mut av);
    let mut lambda = dot(&v, &av);
    let mut w: Vec<f64> = v.iter().map(|x| x / lambda).collect();
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_outer {
        conjugate_gradient(&op, &v, &mut w, opts.cg_tol, cap)?;
        let wn = norm(&w);
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / wn);
        op.apply(&v, &mut av);
        let next = dot(&v, &av);
        residual = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - next * x).powi(2))
            .sum::<f64>()
            .sqrt()
            / next;
        let change = (next - lambda).abs() / next;
        lambda = next;
        // warm start: the next iterate is close to v / λ
        w.iter_mut().zip(&v).for_each(|(wi, vi)| *wi = vi / lambda);
        if residual <= opts.tol && change <= opts.tol {
            return Ok(finish(g, &op, v, lambda, it, residual));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_outer,
        residual,
    })
}

fn finish(
    g: &GridDomain,
    op: &DirichletLaplacian,
    v: Vec<f64>,
    lambda: f64,
    iterations: usize,
    residual: f64,
) -> SpectralResult {
    let mut field = op.extend(&v, g.len());
    let peak = field
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let scale = peak.signum() / (g.h * norm(&field));
    field.iter_mut().for_each(|x| *x *= scale);
    SpectralResult {
        lambda1: lambda,
        eigvector: field,
        iterations,
        residual,
        h: g.h,
        richardson: None,
        h_list: vec![g.h],
        interior_nodes: op.len(),
    }
}

/// `(r² λ_fine − λ_coarse)/(r² − 1)` for grid ratio `r`.
pub fn richardson(lambda_coarse: f64, lambda_fine: f64, ratio: f64) -> f64 {
    let r2 = ratio * ratio;
    (r2 * lambda_fine - lambda_coarse) / (r2 - 1.0)
}

/// λ₁ of `scene ∩ bx` on grids `2h` and `h`, extrapolated.
pub fn lambda1_extrapolated(
    scene: &Scene,
    bx: Rect,
    h: f64,
    opts: EigenOptions,
) -> Result<SpectralResult> {
    let coarse = lambda1_with(&rasterize(scene, bx, 2.0 * h)?, opts)?;
    let mut fine = lambda1_with(&rasterize(scene, bx, h)?, opts)?;
    fine.richardson = Some(richardson(coarse.lambda1, fine.lambda1, 2.0));
    fine.h_list = vec![2.0 * h, h];
    Ok(fine)
}

/// Closed-range constant `𝔠 = 2/√λ₁` derived from an eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedRangeEstimate {
    pub constant: f64,
    pub lambda1: f64,
    pub verdict: ClosedRangeVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedRangeVerdict {
    ClosedRange { constant: f64 },
    NoClosedRangeEvidence,
}

pub fn closed_range_constant(s: &SpectralResult) -> ClosedRangeEstimate {
    closed_range_from_lambda(s.best())
}

pub fn closed_range_from_lambda(lambda: f64) -> ClosedRangeEstimate {
    if lambda > 0.0 && lambda.is_finite() {
        let constant = 2.0 / lambda.sqrt();
        ClosedRangeEstimate {
            constant,
            lambda1: lambda,
            verdict: ClosedRangeVerdict::ClosedRange { constant },
        }
    } else {
        ClosedRangeEstimate {
            constant: f64::INFINITY,
            lambda1: lambda,
            verdict: ClosedRangeVerdict::NoClosedRangeEvidence,
        }
    }
}

/// The smaller of `ψᵀAψ/ψᵀψ` and `‖Aψ‖/‖ψ‖`, both upper bounds for λ₁ of the grid operator.
pub fn rayleigh_upper(g: &GridDomain, psi: &[f64]) -> Result<f64> {
    let op = DirichletLaplacian::new(g)?;
    let x = op.restrict(psi);
    let xx = dot(&x, &x);
    if xx == 0.0 {
        return Err(Error::ZeroField);
    }
    let mut ax = vec![0.0; x.len()];
    op.apply(&x, &mut ax);
    let q1 = dot(&x, &ax) / xx;
    let q2 = (dot(&ax, &ax) / xx).sqrt();
    Ok(q1.min(q2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{NamedScene, Point};
    use std::f64::consts::PI;

    fn square(h: f64) -> GridDomain {
        rasterize(&Scene::plane(), Rect::new(0.0, 0.0, 1.0, 1.0), h).unwrap()
    }

    #[test]
    fn square_matches_discrete_closed_form() {
        let h = 1.0 / 16.0;
        let r = lambda1(&square(h), 1e-10).unwrap();
        let exact = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((r.lambda1 - exact).abs() < 1e-8 * exact);
        assert!(r.residual <= 1e-10);
        assert!(r.eigvector.iter().all(|&x| x >= 0.0));
        let l2: f64 = r.eigvector.iter().map(|x| x * x).sum::<f64>() * h * h;
        assert!((l2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_richardson() {
        let r = lambda1_extrapolated(
            &Scene::plane(),
            Rect::new(0.0, 0.0, 1.0, 1.0),
            1.0 / 64.0,
            EigenOptions::default(),
        )
        .unwrap();
        assert!((r.best() - 2.0 * PI * PI).abs() < 5e-3 * 2.0 * PI * PI);
        assert_eq!(r.h_list, vec![1.0 / 32.0, 1.0 / 64.0]);
    }

    #[test]
    fn closed_range_arithmetic() {
        assert_eq!(closed_range_from_lambda(4.0).constant, 1.0);
        assert_eq!(
            closed_range_from_lambda(0.0).verdict,
            ClosedRangeVerdict::NoClosedRangeEvidence
        );
    }

    #[test]
    fn eigenvector_saturates_rayleigh() {
        let g = square(1.0 / 16.0);
        let r = lambda1(&g, 1e-10).unwrap();
        let q = rayleigh_upper(&g, &r.eigvector).unwrap();
        assert!((q - r.lambda1).abs() < 1e-8 * r.lambda1);
    }

    #[test]
    fn sine_mode_quotient() {
        let g = square(1.0 / 64.0);
        let psi = g.sample_interior(|z| (PI * z.x).sin() * (PI * z.y).sin());
        let q = rayleigh_upper(&g, &psi).unwrap();
        assert!((q - 2.0 * PI * PI).abs() < 1e-2 * 2.0 * PI * PI);
    }

    #[test]
    fn paraboloid_quotient_on_disc() {
        let scene = NamedScene::UnitDisc.build().unwrap();
        let g = rasterize(&scene, Rect::new(-1.0, -1.0, 1.0, 1.0), 1.0 / 64.0).unwrap();
        let psi = g.sample_interior(|z| 1.0 - z.norm_sq());
        let q = rayleigh_upper(&g, &psi).unwrap();
        assert!((q - 6.0).abs() < 0.06 && q >= 5.7832, "{q}");
        assert_eq!(
            rayleigh_upper(&g, &vec![0.0; g.len()]),
            Err(Error::ZeroField)
        );
    }

    #[test]
    fn quarter_turn_is_exact() {
        let scene = Scene::complement_of(vec![crate::geometry::Obstacle::segment(
            Point::new(0.2, 0.5),
            Point::new(0.5, 0.5),
        )]);
        let g = rasterize(&scene, Rect::new(0.0, 0.0, 1.0, 1.0), 1.0 / 32.0).unwrap();
        let mut turned = vec![false; g.len()];
        for j in 0..g.ny {
            for i in 0..g.nx {
                turned[g.index(g.ny - 1 - j, i)] = g.interior_mask[g.index(i, j)];
            }
        }
        let a = lambda1(&g, 1e-10).unwrap().lambda1;
        let b = lambda1(&g.with_mask(turned), 1e-10).unwrap().lambda1;
        assert!((a - b).abs() < 1e-8 * a);
    }
}

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridDomain, Point};

/// Discrete check of `‖∇φ‖² = 4‖φ_z‖²` for compactly supported `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DbarReport {
    /// Edge energy `Σ |φ(z+h) − φ(z)|²`, extrapolated from steps `h` and `2h`.
    pub grad_norm_sq: f64,
    /// `h² Σ |φ_x − i φ_y|²` with fourth-order central differences.
    pub four_dz_norm_sq: f64,
    /// `|lhs − rhs| / max(lhs, rhs)`, zero when both vanish.
    pub mismatch: f64,
    pub h: f64,
}

/// Number of nodes next to the mask boundary on which `φ` must vanish.
pub const SUPPORT_MARGIN: usize = 2;

pub fn dbar_identity_check(g: &GridDomain, phi: &[Complex64]) -> Result<DbarReport> {
    if phi.len() != g.len() {
        return Err(Error::InvalidArgument(format!(
            "field has {} entries, grid has {}",
            phi.len(),
            g.len()
        )));
    }
    let (nx, ny) = (g.nx as i64, g.ny as i64);
    let m = SUPPORT_MARGIN as i64;
    for (k, v) in phi.iter().enumerate() {
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (i, j) = ((k % g.nx) as i64, (k / g.nx) as i64);
        for dj in -m..=m {
            for di in -m..=m {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= nx || b >= ny || !g.is_interior((b * nx + a) as usize) {
                    return Err(Error::SupportTouchesBoundary);
                }
            }
        }
    }
    let h = g.h;
    let at = |i: usize, j: usize| phi[j * g.nx + i];
    // edge energies with steps h and 2h, combined to cancel the h² term
    let (mut e1, mut e2, mut dz) = (0.0, 0.0, 0.0);
    for j in 2..g.ny.saturating_sub(2) {
        for i in 2..g.nx.saturating_sub(2) {
            let c = at(i, j);
            e1 += (at(i + 1, j) - c).norm_sqr() + (at(i, j + 1) - c).norm_sqr();
            e2 += ((at(i + 2, j) - c).norm_sqr() + (at(i, j + 2) - c).norm_sqr()) / 4.0;
            let fx =
                (8.0 * (at(i + 1, j) - at(i - 1, j)) - (at(i + 2, j) - at(i - 2, j))) / (12.0 * h);
            let fy =
                (8.0 * (at(i, j + 1) - at(i, j - 1)) - (at(i, j + 2) - at(i, j - 2))) / (12.0 * h);
            dz += (fx - Complex64::i() * fy).norm_sqr();
        }
    }
    let grad = (4.0 * e1 - e2) / 3.0;
    let four_dz = dz * h * h;
    let scale = grad.abs().max(four_dz);
    Ok(DbarReport {
        grad_norm_sq: grad,
        four_dz_norm_sq: four_dz,
        mismatch: if scale > 0.0 {
            (grad - four_dz).abs() / scale
        } else {
            0.0
        },
        h,
    })
}

/// Smooth compactly supported bump `a · exp(1 − 1/(1 − |z−c|²/r²))` (zero outside radius `r`).
pub fn smooth_bump(
    center: Point,
    radius: f64,
    amplitude: Complex64,
) -> impl Fn(Point) -> Complex64 + Sync {
    move |z| {
        let s = z.dist(center).powi(2) / (radius * radius);
        if s >= 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            amplitude * (1.0 - 1.0 / (1.0 - s)).exp()
        }
    }
}

/// Samples a complex field on every grid node.
pub fn sample_complex(g: &GridDomain, f: impl Fn(Point) -> Complex64) -> Vec<Complex64> {
    (0..g.len()).map(|k| f(g.node_at(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, Rect, Scene};

    fn unit_square(h: f64) -> GridDomain {
        rasterize(&Scene::plane(), Rect::new(0.0, 0.0, 1.0, 1.0), h).unwrap()
    }

    #[test]
    fn zero_field() {
        let g = unit_square(1.0 / 16.0);
        let r = dbar_identity_check(&g, &vec![Complex64::new(0.0, 0.0); g.len()]).unwrap();
        assert_eq!(
            (r.grad_norm_sq, r.four_dz_norm_sq, r.mismatch),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn gaussian_bump_mismatch_is_small_and_second_order() {
        let bump = |z: Point| {
            let s = (z - Point::new(0.5, 0.5)).norm_sq();
            Complex64::new(
                (-s / 0.01).exp()
                    * smooth_bump(Point::new(0.5, 0.5), 0.4, Complex64::new(1.0, 0.0))(z).re,
                0.0,
            )
        };
        let coarse = dbar_identity_check(
            &unit_square(1.0 / 32.0),
            &sample_complex(&unit_square(1.0 / 32.0), bump),
        )
        .unwrap();
        let fine = dbar_identity_check(
            &unit_square(1.0 / 64.0),
            &sample_complex(&unit_square(1.0 / 64.0), bump),
        )
        .unwrap();
        assert!(fine.mismatch < 1e-3, "{fine:?} {coarse:?}");
        let order = (coarse.mismatch / fine.mismatch).log2();
        assert!(order >= 2.0, "order {order}");
    }

    #[test]
    fn support_near_boundary_is_rejected() {
        let g = unit_square(1.0 / 16.0);
        let phi = sample_complex(
            &g,
            smooth_bump(Point::new(0.1, 0.5), 0.2, Complex64::new(1.0, 1.0)),
        );
        assert_eq!(
            dbar_identity_check(&g, &phi),
            Err(Error::SupportTouchesBoundary)
        );
    }
}

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::logcap::{
    capacity, equilibrium_measure, frostman_tolerance, potential, CompactSet, DiscreteMeasure,
};

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`; returns `(S, S', S'')`.
fn smooth_step(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    // f(t) = exp(−1/t) with derivatives; zero below the underflow threshold
    let f = |t: f64| -> (f64, f64, f64) {
        let v = (-1.0 / t).exp();
        if v == 0.0 {
            (0.0, 0.0, 0.0)
        } else {
            (v, v / (t * t), v * (1.0 / t.powi(4) - 2.0 / t.powi(3)))
        }
    };
    let (a, a1, a2) = f(t);
    let (b, b1, b2) = f(1.0 - t);
    let g = a + b;
    let g1 = a1 - b1;
    let g2 = a2 + b2;
    let s = a / g;
    let num1 = a1 * g - a * g1;
    let s1 = num1 / (g * g);
    let s2 = (a2 * g - a * g2) / (g * g) - 2.0 * g1 * num1 / (g * g * g);
    (s, s1, s2)
}

/// `χ(s) = s` for `s ≤ a`, `0` for `s ≥ b`, smooth in between; returns `(χ, χ', χ'')`.
fn cutoff(s: f64, a: f64, b: f64) -> (f64, f64, f64) {
    let w = b - a;
    let (e, e1, e2) = smooth_step((b - s) / w);
    let (e1, e2) = (-e1 / w, e2 / (w * w));
    (s * e, e + s * e1, 2.0 * e1 + s * e2)
}

/// `Δ[χ(|z − z₀|²)] = 4 s χ''(s) + 4 χ'(s)` with `s = |z − z₀|²`.
fn cutoff_laplacian(s: f64, a: f64, b: f64) -> f64 {
    let (_, c1, c2) = cutoff(s, a, b);
    4.0 * s * c2 + 4.0 * c1
}

/// `φ_B = e^{−p} + ε χ(|z − z₀|²)`, bounded and strictly subharmonic off `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct BergmanWitness {
    pub measure: DiscreteMeasure,
    pub center: Point,
    /// Radius of `B′ ⊃ K`; `B` and `B″` have radii `2r′` and `3r′`.
    pub r_inner: f64,
    pub epsilon: f64,
    pub cap_lower: f64,
    pub certificate: BergmanCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BergmanEval {
    pub value: f64,
    pub laplacian: f64,
    /// `e^{−p(z)}`
    pub exp_neg_potential: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BergmanCertificate {
    pub epsilon: f64,
    pub r_inner: f64,
    pub r_ball: f64,
    pub r_outer: f64,
    pub samples: usize,
    pub samples_inside_outer: usize,
    pub min_laplacian: f64,
    pub max_value: f64,
    /// `1/cap(K).lower + ε max χ`
    pub value_bound: f64,
    /// `e^{−p} ≤ 1/cap(K).lower` (within the Frostman tolerance) at every sample.
    pub frostman_ok: bool,
    pub pass: bool,
}

impl BergmanWitness {
    pub fn eval(&self, z: Point) -> Result<BergmanEval> {
        let p = potential(&self.measure, z)?;
        let e = (-p.value).exp();
        let s = (z - self.center).norm_sq();
        let (a, b) = self.radii_sq();
        let (chi, _, _) = cutoff(s, a, b);
        Ok(BergmanEval {
            value: e + self.epsilon * chi,
            laplacian: e * p.gradient.norm_sq() + self.epsilon * cutoff_laplacian(s, a, b),
            exp_neg_potential: e,
        })
    }

    fn radii_sq(&self) -> (f64, f64) {
        ((2.0 * self.r_inner).powi(2), (3.0 * self.r_inner).powi(2))
    }
}

/// Samples used to certify a Bergman witness: a grid over `B″` and rings outside it.
pub fn bergman_samples(k: &CompactSet, center: Point, r_inner: f64) -> Vec<Point> {
    let n = 64;
    let half = 3.5 * r_inner;
    let step = 2.0 * half / n as f64;
    let keep_off = r_inner / 16.0;
    let mut out = Vec::new();
    for b in 0..n {
        for a in 0..n {
            let z = center
                + Point::new(
                    -half + (a as f64 + 0.5) * step,
                    -half + (b as f64 + 0.5) * step,
                );
            if k.distance(z) >= keep_off {
                out.push(z);
            }
        }
    }
    for factor in [4.0, 6.0, 10.0, 100.0] {
        for i in 0..64 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            out.push(center + Point::new(t.cos(), t.sin()) * (factor * r_inner));
        }
    }
    out
}

/// Builds `e^{−p_K} + ε χ(|z − z₀|²)` for a non-polar compact `K` and certifies it on samples.
pub fn bergman_witness(k: &CompactSet, budget: usize) -> Result<BergmanWitness> {
    if k.is_empty() || k.is_polar() {
        return Err(Error::Polar);
    }
    let k = k.without_points();
    let cap = capacity(&k, budget)?;
    if !(cap.lower > 0.0) {
        return Err(Error::Polar);
    }
    let measure = equilibrium_measure(&k, budget)?;
    let center = k.center;
    let r_inner = k.bounding_radius * (1.0 + 1e-9);
    let (a, b) = ((2.0 * r_inner).powi(2), (3.0 * r_inner).powi(2));

    // ε from the annulus 2r′ ≤ |z − z₀| ≤ 3r′ where χ bends
    let ring: Vec<Point> = (0..=32)
        .flat_map(|i| {
            let r = r_inner * (2.0 + i as f64 / 32.0);
            (0..128).map(move |t| {
                let t = 2.0 * std::f64::consts::PI * t as f64 / 128.0;
                center + Point::new(t.cos(), t.sin()) * r
            })
        })
        .collect();
    let min_ring = ring
        .par_iter()
        .map(|&z| potential(&measure, z).map(|p| (-p.value).exp() * p.gradient.norm_sq()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let max_bend = (0..=4096)
        .map(|i| cutoff_laplacian(a + (b - a) * i as f64 / 4096.0, a, b).abs())
        .fold(0.0, f64::max);
    let epsilon = 0.5 * min_ring / max_bend;

    let mut w = BergmanWitness {
        measure,
        center,
        r_inner,
        epsilon,
        cap_lower: cap.lower,
        certificate: BergmanCertificate {
            epsilon,
            r_inner,
            r_ball: 2.0 * r_inner,
            r_outer: 3.0 * r_inner,
            samples: 0,
            samples_inside_outer: 0,
            min_laplacian: 0.0,
            max_value: 0.0,
            value_bound: 0.0,
            frostman_ok: false,
            pass: false,
        },
    };
    let samples = bergman_samples(&k, center, r_inner);
    let evals = samples
        .par_iter()
        .map(|&z| w.eval(z))
        .collect::<Result<Vec<_>>>()?;
    let chi_max = (0..=4096)
        .map(|i| cutoff(b * i as f64 / 4096.0, a, b).0)
        .fold(0.0, f64::max);
    let slack = frostman_tolerance(cap.lower.ln()).exp();
    let min_laplacian = evals
        .iter()
        .map(|e| e.laplacian)
        .fold(f64::INFINITY, f64::min);
    let max_value = evals.iter().map(|e| e.value).fold(0.0, f64::max);
    let value_bound = 1.0 / cap.lower + epsilon * chi_max;
    let frostman_ok = evals
        .iter()
        .all(|e| e.exp_neg_potential <= slack / cap.lower);
    w.certificate = BergmanCertificate {
        samples: samples.len(),
        samples_inside_outer: samples
            .iter()
            .filter(|z| z.dist(center) < 3.0 * r_inner)
            .count(),
        min_laplacian,
        max_value,
        value_bound,
        frostman_ok,
        pass: min_laplacian > 0.0
            && frostman_ok
            && max_value <= value_bound * slack
            && evals.iter().all(|e| e.value > 0.0),
        ..w.certificate
    };
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Obstacle;

    #[test]
    fn cutoff_profile() {
        let (a, b) = (4.0, 9.0);
        assert_eq!(cutoff(2.0, a, b), (2.0, 1.0, 0.0));
        assert_eq!(cutoff(9.5, a, b), (0.0, 0.0, 0.0));
        // derivatives against finite differences
        for s in [4.5, 6.0, 7.7, 8.9] {
            let h = 1e-5;
            let d1 = (cutoff(s + h, a, b).0 - cutoff(s - h, a, b).0) / (2.0 * h);
            let d2 = (cutoff(s + h, a, b).1 - cutoff(s - h, a, b).1) / (2.0 * h);
            let (_, c1, c2) = cutoff(s, a, b);
            assert!((c1 - d1).abs() < 1e-6 * (1.0 + d1.abs()), "{s}: {c1} {d1}");
            assert!((c2 - d2).abs() < 1e-5 * (1.0 + d2.abs()), "{s}: {c2} {d2}");
        }
    }

    #[test]
    fn exterior_of_unit_disc() {
        let k = CompactSet::new(vec![Obstacle::disc(Point::ORIGIN, 1.0)], 0.0);
        let w = bergman_witness(&k, 64).unwrap();
        assert!(w.certificate.pass, "{:?}", w.certificate);
        // Δ e^{−p} = |z|⁻³ outside the disc
        let z = Point::new(3.0, 0.0);
        let p = potential(&w.measure, z).unwrap();
        let e = (-p.value).exp() * p.gradient.norm_sq();
        assert!((e - 1.0 / 27.0).abs() < 1e-3);
    }

    #[test]
    fn segment_frostman_bound() {
        let k = CompactSet::new(
            vec![Obstacle::segment(
                Point::new(-1.0, 0.0),
                Point::new(1.0, 0.0),
            )],
            0.0,
        );
        let w = bergman_witness(&k, 64).unwrap();
        assert!(
            w.certificate.pass && w.certificate.frostman_ok,
            "{:?}",
            w.certificate
        );
        assert!((1.0 / w.cap_lower - 2.0).abs() < 1e-2);
    }

    #[test]
    fn polar_is_refused() {
        let k = CompactSet::new(
            vec![
                Obstacle::point(Point::ORIGIN),
                Obstacle::point(Point::new(1.0, 0.0)),
            ],
            0.0,
        );
        assert_eq!(bergman_witness(&k, 16).unwrap_err(), Error::Polar);
    }
}

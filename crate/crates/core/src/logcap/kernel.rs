use crate::geometry::Point;

use super::compact::{Cell, CellShape};

/// Six-point Gauss–Legendre rule on [0, 1].
const GAUSS: [(f64, f64); 6] = [
    (0.033_765_242_898_423_98, 0.085_662_246_189_585_17),
    (0.169_395_306_766_867_74, 0.180_380_786_524_069_3),
    (0.380_690_406_958_401_5, 0.233_956_967_286_345_5),
    (0.619_309_593_041_598_5, 0.233_956_967_286_345_5),
    (0.830_604_693_233_132_3, 0.180_380_786_524_069_3),
    (0.966_234_757_101_576, 0.085_662_246_189_585_17),
];

/// `∫∫ ln|x − y| dμ_i(x) dμ_j(y)` for the uniform probability measures on two cells.
pub fn mutual_energy(ci: &Cell, cj: &Cell) -> f64 {
    match (ci.shape, cj.shape) {
        (
            CellShape::Circle {
                center: c1,
                radius: r1,
            },
            CellShape::Circle {
                center: c2,
                radius: r2,
            },
        ) => c1.dist(c2).max(r1).max(r2).ln(),
        (CellShape::Circle { center, radius }, CellShape::Segment { a, b })
        | (CellShape::Segment { a, b }, CellShape::Circle { center, radius }) => GAUSS
            .iter()
            .map(|&(t, w)| w * (a + (b - a) * t).dist(center).max(radius).ln())
            .sum(),
        (CellShape::Segment { a, b }, CellShape::Segment { a: p, b: q }) => {
            let one = GAUSS
                .iter()
                .map(|&(t, w)| w * segment_log_mean(p, q, a + (b - a) * t))
                .sum::<f64>();
            let two = GAUSS
                .iter()
                .map(|&(t, w)| w * segment_log_mean(a, b, p + (q - p) * t))
                .sum::<f64>();
            0.5 * (one + two)
        }
    }
}

/// Mean of `ln|x − y|` over `y` uniform on `[a, b]`, in closed form.
pub fn segment_log_mean(a: Point, b: Point, x: Point) -> f64 {
    let len = a.dist(b);
    let u = (b - a) * (1.0 / len);
    let rel = x - a;
    let s = rel.dot(u);
    let d = rel.cross(u).abs();
    (antiderivative(len - s, d) - antiderivative(-s, d)) / len
}

/// `∫ ln √(t² + d²) dt`
fn antiderivative(t: f64, d: f64) -> f64 {
    let r2 = t * t + d * d;
    let log_term = if t == 0.0 { 0.0 } else { 0.5 * t * r2.ln() };
    let atan_term = if d == 0.0 { 0.0 } else { d * (t / d).atan() };
    log_term - t + atan_term
}

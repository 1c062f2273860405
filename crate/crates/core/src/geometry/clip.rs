use std::f64::consts::PI;

use super::obstacle::BOUNDARY_EPS;
use super::{Mode, Obstacle, Point, Scene};
use crate::logcap::CompactSet;

/// Default Hausdorff tolerance of polygonized clip pieces, relative to the clip radius.
pub const CLIP_TOLERANCE: f64 = 1e-3;

/// `Ω^c ∩ D̄(center, radius)` with the default polygonization tolerance.
pub fn clip_complement(scene: &Scene, center: Point, radius: f64) -> CompactSet {
    clip_complement_with_tol(scene, center, radius, CLIP_TOLERANCE * radius)
}

/// `Ω^c ∩ D̄(center, radius)` as a finite list of primitives.
///
/// Curved pieces that are cut by the clip circle are replaced by inscribed
/// polygons within Hausdorff distance `tol`. In bounded mode the region outside
/// the base disc is included; when it would be an annulus its hole is filled,
/// which leaves the logarithmic capacity unchanged.
pub fn clip_complement_with_tol(scene: &Scene, center: Point, radius: f64, tol: f64) -> CompactSet {
    let mut pieces = Vec::new();
    let mut polygonized = false;
    if let (Mode::Bounded, Some(b)) = (scene.mode, &scene.base_disc) {
        match outside_base(b.center, b.radius, center, radius, tol) {
            Clipped::Whole(o) | Clipped::Approx(o) if matches!(o, Obstacle::Disc { .. }) => {
                // the whole clip disc lies in the complement; nothing else matters
                return CompactSet::new(vec![o], 0.0);
            }
            Clipped::Approx(o) => {
                polygonized = true;
                pieces.push(o);
            }
            Clipped::Whole(o) => pieces.push(o),
            Clipped::Empty => {}
        }
    }
    for o in scene.obstacles_near(center, radius) {
        match clip_obstacle(&o, center, radius, tol) {
            Clipped::Empty => {}
            Clipped::Whole(p) => pieces.push(p),
            Clipped::Approx(p) => {
                polygonized = true;
                pieces.push(p);
            }
        }
    }
    CompactSet::new(pieces, if polygonized { tol } else { 0.0 })
}

enum Clipped {
    Empty,
    Whole(Obstacle),
    Approx(Obstacle),
}

fn inside(d: f64, r: f64) -> bool {
    d <= r * (1.0 + BOUNDARY_EPS) + BOUNDARY_EPS
}

fn clip_obstacle(o: &Obstacle, c0: Point, r0: f64, tol: f64) -> Clipped {
    match o {
        Obstacle::Point { p } => {
            if inside(p.dist(c0), r0) {
                Clipped::Whole(o.clone())
            } else {
                Clipped::Empty
            }
        }
        Obstacle::Segment { a, b } => clip_segment(*a, *b, c0, r0),
        Obstacle::Disc { center, radius } => {
            let d = center.dist(c0);
            if inside(d + radius, r0) {
                Clipped::Whole(o.clone())
            } else if d >= radius + r0 {
                Clipped::Empty
            } else if d + r0 <= *radius {
                Clipped::Whole(Obstacle::disc(c0, r0))
            } else {
                Clipped::Approx(lens(*center, *radius, c0, r0, tol))
            }
        }
        Obstacle::Polygon { vertices } => {
            if vertices.iter().all(|v| inside(v.dist(c0), r0)) {
                return Clipped::Whole(o.clone());
            }
            if o.contains(c0) && !vertices.is_empty() && o.distance_to_boundary(c0) >= r0 {
                return Clipped::Whole(Obstacle::disc(c0, r0));
            }
            let window = arc(c0, r0, 0.0, 2.0 * PI, tol, false);
            let clipped = sutherland_hodgman(vertices, &window);
            if clipped.len() < 3 || super::point::signed_area(&clipped).abs() < 1e-14 * r0 * r0 {
                Clipped::Empty
            } else {
                Clipped::Approx(Obstacle::polygon(clipped))
            }
        }
    }
}

fn clip_segment(a: Point, b: Point, c0: Point, r0: f64) -> Clipped {
    let d = b - a;
    let f = a - c0;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r0 * r0;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Clipped::Empty;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t0 > t1 {
        return Clipped::Empty;
    }
    if t0 == 0.0 && t1 == 1.0 {
        return Clipped::Whole(Obstacle::segment(a, b));
    }
    let (p, q) = (a + d * t0, a + d * t1);
    if p == q {
        Clipped::Whole(Obstacle::point(p))
    } else {
        Clipped::Whole(Obstacle::segment(p, q))
    }
}

/// Points on the circle `(c, r)` from angle `a0` to `a1` (counter-clockwise, or
/// clockwise when `reverse`), spaced so each chord stays within `tol` of the arc.
/// The end point is omitted for full circles.
fn arc(c: Point, r: f64, a0: f64, a1: f64, tol: f64, reverse: bool) -> Vec<Point> {
    let sweep = (a1 - a0).abs();
    let step = if tol >= r {
        PI / 2.0
    } else {
        2.0 * (1.0 - tol / r).acos()
    };
    let n = ((sweep / step).ceil() as usize).max(3);
    let full = (sweep - 2.0 * PI).abs() < 1e-12;
    let count = if full { n } else { n + 1 };
    (0..count)
        .map(|i| {
            let t = a0 + (a1 - a0) * (i as f64) / (n as f64);
            let t = if reverse { a1 - (t - a0) } else { t };
            c + Point::new(t.cos(), t.sin()) * r
        })
        .collect()
}

/// Polygon inscribed in `D̄(c1, r1) ∩ D̄(c0, r0)` (the circles must cross).
fn lens(c1: Point, r1: f64, c0: Point, r0: f64, tol: f64) -> Obstacle {
    let d = c1.dist(c0);
    let to0 = c0 - c1;
    let phi1 = to0.y.atan2(to0.x);
    let phi0 = phi1 + PI;
    let a1 = ((d * d + r1 * r1 - r0 * r0) / (2.0 * d * r1))
        .clamp(-1.0, 1.0)
        .acos();
    let a0 = ((d * d + r0 * r0 - r1 * r1) / (2.0 * d * r0))
        .clamp(-1.0, 1.0)
        .acos();
    let mut v = arc(c1, r1, phi1 - a1, phi1 + a1, tol, false);
    v.pop();
    v.extend(arc(c0, r0, phi0 - a0, phi0 + a0, tol, false));
    v.pop();
    Obstacle::polygon(v)
}

/// `D̄(c0, r0) ∖ D(cb, rb)`.
fn outside_base(cb: Point, rb: f64, c0: Point, r0: f64, tol: f64) -> Clipped {
    let d = cb.dist(c0);
    if d + r0 <= rb {
        return Clipped::Empty;
    }
    if d >= r0 + rb || d + rb <= r0 {
        return Clipped::Whole(Obstacle::disc(c0, r0));
    }
    let to_b = cb - c0;
    let phi0 = to_b.y.atan2(to_b.x);
    let phib = phi0 + PI;
    let a0 = ((d * d + r0 * r0 - rb * rb) / (2.0 * d * r0))
        .clamp(-1.0, 1.0)
        .acos();
    let ab = ((d * d + rb * rb - r0 * r0) / (2.0 * d * rb))
        .clamp(-1.0, 1.0)
        .acos();
    let mut v = arc(c0, r0, phi0 + a0, phi0 + 2.0 * PI - a0, tol, false);
    v.pop();
    v.extend(arc(cb, rb, phib - ab, phib + ab, tol, true));
    v.pop();
    Clipped::Approx(Obstacle::polygon(v))
}

/// Clips `subject` against the convex counter-clockwise polygon `window`.
fn sutherland_hodgman(subject: &[Point], window: &[Point]) -> Vec<Point> {
    let orientation = super::point::signed_area(subject).signum();
    let mut output: Vec<Point> = if orientation < 0.0 {
        subject.iter().rev().copied().collect()
    } else {
        subject.to_vec()
    };
    let m = window.len();
    for e in 0..m {
        let (a, b) = (window[e], window[(e + 1) % m]);
        let input = std::mem::take(&mut output);
        if input.is_empty() {
            break;
        }
        let side = |p: Point| (b - a).cross(p - a);
        let n = input.len();
        for i in 0..n {
            let (cur, prev) = (input[i], input[(i + n - 1) % n]);
            let (sc, sp) = (side(cur), side(prev));
            if sc >= 0.0 {
                if sp < 0.0 {
                    output.push(prev + (cur - prev) * (sp / (sp - sc)));
                }
                output.push(cur);
            } else if sp >= 0.0 {
                output.push(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    output
}

impl Obstacle {
    /// Distance from `z` to the boundary of the obstacle.
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        match self {
            Obstacle::Disc { center, radius } => (z.dist(*center) - radius).abs(),
            Obstacle::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| super::point::segment_distance(z, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            _ => self.distance(z),
        }
    }
}

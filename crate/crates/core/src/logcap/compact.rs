use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{Obstacle, Point, Similarity};

/// A compact set given as a finite union of closed primitives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactSet {
    pub pieces: Vec<Obstacle>,
    pub center: Point,
    /// Radius of a disc about `center` enclosing every piece.
    pub bounding_radius: f64,
    /// Hausdorff distance between polygonized pieces and the sets they stand for.
    pub hausdorff_tol: f64,
}

/// Discs receiving fewer cells than this are carried by one uniform circle measure.
pub const MIN_POLYGON_SIDES: usize = 8;

/// Support of one cell of the discretization; the cell carries the uniform
/// (arclength) measure on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CellShape {
    Segment { a: Point, b: Point },
    Circle { center: Point, radius: f64 },
}

/// A boundary cell: its shape, a representative node and `exp` of the
/// self-energy of the uniform measure on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub node: Point,
    pub self_radius: f64,
    pub shape: CellShape,
}

impl Cell {
    pub fn segment(a: Point, b: Point) -> Self {
        Self {
            node: (a + b) * 0.5,
            // ∫∫ ln|s − t| ds dt / ℓ² = ln ℓ − 3/2
            self_radius: a.dist(b) * (-1.5f64).exp(),
            shape: CellShape::Segment { a, b },
        }
    }

    pub fn circle(center: Point, radius: f64) -> Self {
        Self {
            node: center,
            self_radius: radius,
            shape: CellShape::Circle { center, radius },
        }
    }

    pub fn point(p: Point) -> Self {
        Self {
            node: p,
            self_radius: 0.0,
            shape: CellShape::Circle {
                center: p,
                radius: 0.0,
            },
        }
    }
}

impl CompactSet {
    pub fn new(pieces: Vec<Obstacle>, hausdorff_tol: f64) -> Self {
        let (center, bounding_radius) = enclosing(&pieces);
        Self {
            pieces,
            center,
            bounding_radius,
            hausdorff_tol,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), 0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Finite unions of points are exactly the representable polar sets.
    pub fn is_polar(&self) -> bool {
        self.pieces.iter().all(Obstacle::is_point)
    }

    /// The set with its polar pieces removed (capacity is unchanged).
    pub fn without_points(&self) -> CompactSet {
        CompactSet::new(
            self.pieces
                .iter()
                .filter(|p| !p.is_point())
                .cloned()
                .collect(),
            self.hausdorff_tol,
        )
    }

    pub fn contains(&self, z: Point) -> bool {
        self.pieces.iter().any(|p| p.contains(z))
    }

    pub fn distance(&self, z: Point) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn transform(&self, s: &Similarity) -> CompactSet {
        CompactSet::new(
            self.pieces.iter().map(|p| p.transform(s)).collect(),
            self.hausdorff_tol * s.scale,
        )
    }

    pub fn union(&self, other: &CompactSet) -> CompactSet {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        CompactSet::new(pieces, self.hausdorff_tol.max(other.hausdorff_tol))
    }

    /// Splits the outer boundary into about `n` cells.
    ///
    /// Cell counts follow boundary length, with at least one cell per piece
    /// and per polygon edge. Segments and polygon edges are graded towards
    /// their end points like Chebyshev nodes. A disc becomes an inscribed
    /// regular polygon, or a single circle cell when it gets fewer than
    /// [`MIN_POLYGON_SIDES`] cells.
    pub fn cells(&self, n: usize) -> Vec<Cell> {
        let pieces: Vec<&Obstacle> = self.pieces.iter().filter(|p| !p.is_point()).collect();
        if pieces.is_empty() {
            return self
                .pieces
                .iter()
                .map(|p| Cell::point(p.bounding_disc().0))
                .collect();
        }
        let lengths: Vec<f64> = pieces.iter().map(|p| p.boundary_length()).collect();
        let counts = allocate(&lengths, n, |p| match pieces[p] {
            Obstacle::Polygon { vertices } => vertices.len(),
            _ => 1,
        });
        let mut cells = Vec::with_capacity(n);
        for (piece, &k) in pieces.iter().zip(&counts) {
            match piece {
                Obstacle::Disc { center, radius } => {
                    if k < MIN_POLYGON_SIDES {
                        cells.push(Cell::circle(*center, *radius));
                    } else {
                        let vertex = |i: usize| {
                            let t = 2.0 * PI * i as f64 / k as f64;
                            *center + Point::new(t.cos(), t.sin()) * *radius
                        };
                        for i in 0..k {
                            cells.push(Cell::segment(vertex(i), vertex(i + 1)));
                        }
                    }
                }
                Obstacle::Segment { a, b } => graded_cells(*a, *b, k, &mut cells),
                Obstacle::Polygon { vertices } => {
                    let m = vertices.len();
                    let edges: Vec<f64> = (0..m)
                        .map(|i| vertices[i].dist(vertices[(i + 1) % m]))
                        .collect();
                    let per_edge = allocate(&edges, k, |_| 1);
                    for i in 0..m {
                        graded_cells(vertices[i], vertices[(i + 1) % m], per_edge[i], &mut cells);
                    }
                }
                Obstacle::Point { .. } => unreachable!(),
            }
        }
        dedup_nodes(cells)
    }

    /// Dense boundary sample used as the candidate pool for Leja selection.
    pub fn candidates(&self, m: usize) -> Vec<Point> {
        let lengths: Vec<f64> = self.pieces.iter().map(|p| p.boundary_length()).collect();
        let total: f64 = lengths.iter().sum();
        let mut out = Vec::with_capacity(m + self.pieces.len());
        for (p, len) in self.pieces.iter().zip(&lengths) {
            let k = if total > 0.0 {
                ((m as f64 * len / total).round() as usize).max(2)
            } else {
                1
            };
            match p {
                Obstacle::Point { p } => out.push(*p),
                Obstacle::Disc { center, radius } => {
                    for i in 0..k.max(4) {
                        let t = 2.0 * PI * i as f64 / k.max(4) as f64;
                        out.push(*center + Point::new(t.cos(), t.sin()) * *radius);
                    }
                }
                Obstacle::Segment { a, b } => chebyshev_lobatto(*a, *b, k, &mut out),
                Obstacle::Polygon { vertices } => {
                    let nv = vertices.len();
                    let edges: Vec<f64> = (0..nv)
                        .map(|i| vertices[i].dist(vertices[(i + 1) % nv]))
                        .collect();
                    let per_edge = allocate(&edges, k, |_| 2);
                    for i in 0..nv {
                        chebyshev_lobatto(
                            vertices[i],
                            vertices[(i + 1) % nv],
                            per_edge[i],
                            &mut out,
                        );
                        out.pop();
                    }
                }
            }
        }
        out
    }
}

fn enclosing(pieces: &[Obstacle]) -> (Point, f64) {
    if pieces.is_empty() {
        return (Point::ORIGIN, 0.0);
    }
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in pieces {
        let (c, r) = p.bounding_disc();
        lo = Point::new(lo.x.min(c.x - r), lo.y.min(c.y - r));
        hi = Point::new(hi.x.max(c.x + r), hi.y.max(c.y + r));
    }
    let center = (lo + hi) * 0.5;
    let radius = pieces
        .iter()
        .map(|p| {
            let (c, r) = p.bounding_disc();
            c.dist(center) + r
        })
        .fold(0.0, f64::max);
    (center, radius)
}

/// Splits `n` proportionally to `weights` with per-item minimums (largest remainder).
fn allocate(weights: &[f64], n: usize, min_of: impl Fn(usize) -> usize) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let mins: Vec<usize> = (0..weights.len()).map(&min_of).collect();
    if total <= 0.0 {
        return mins;
    }
    let ideal: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut counts: Vec<usize> = ideal
        .iter()
        .zip(&mins)
        .map(|(x, &m)| (x.floor() as usize).max(m))
        .collect();
    let used: usize = counts.iter().sum();
    if used < n {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = ideal[a] - counts[a] as f64;
            let rb = ideal[b] - counts[b] as f64;
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().cycle().take(n - used) {
            counts[i] += 1;
        }
    }
    counts
}

/// `k` cells on `[a, b]` with Chebyshev-graded widths.
fn graded_cells(a: Point, b: Point, k: usize, out: &mut Vec<Cell>) {
    let at = |i: usize| {
        if i == k {
            return b;
        }
        a + (b - a) * (0.5 * (1.0 - (PI * i as f64 / k as f64).cos()))
    };
    for i in 0..k {
        out.push(Cell::segment(at(i), at(i + 1)));
    }
}

/// `k ≥ 2` Chebyshev–Lobatto points on `[a, b]`, end points included.
fn chebyshev_lobatto(a: Point, b: Point, k: usize, out: &mut Vec<Point>) {
    let k = k.max(2);
    for i in 0..k {
        let t = 0.5 * (1.0 - (PI * i as f64 / (k - 1) as f64).cos());
        out.push(a + (b - a) * t);
    }
}

/// Drops repeated cells (pieces listed twice).
fn dedup_nodes(cells: Vec<Cell>) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::with_capacity(cells.len());
    let mut seen: Vec<(usize, Cell)> = cells.iter().copied().enumerate().collect();
    seen.sort_by(|a, b| a.1.node.lex_cmp(&b.1.node).then(a.0.cmp(&b.0)));
    let mut drop = vec![false; cells.len()];
    for w in seen.windows(2) {
        if w[0].1 == w[1].1 {
            drop[w[1].0] = true;
        }
    }
    out.extend(
        cells
            .into_iter()
            .zip(drop)
            .filter(|(_, d)| !d)
            .map(|(c, _)| c),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allocation_respects_budget_and_minimums() {
        assert_eq!(allocate(&[1.0, 1.0, 2.0], 8, |_| 1), vec![2, 2, 4]);
        assert_eq!(allocate(&[1.0, 1e-9], 4, |_| 1), vec![3, 1]);
        assert_eq!(allocate(&[1.0, 1.0, 1.0], 2, |_| 1), vec![1, 1, 1]);
    }

    #[test]
    fn segment_cells_cover_the_segment() {
        let k = CompactSet::new(
            vec![Obstacle::segment(
                Point::new(-2.0, 0.0),
                Point::new(2.0, 0.0),
            )],
            0.0,
        );
        let cells = k.cells(16);
        assert_eq!(cells.len(), 16);
        let total: f64 = cells.iter().map(|c| c.self_radius / (-1.5f64).exp()).sum();
        assert!((total - 4.0).abs() < 1e-12);
        // graded: end cells are narrower than the middle ones
        assert!(cells[0].self_radius < cells[8].self_radius);
    }

    #[test]
    fn small_disc_is_one_circle_cell() {
        let k = CompactSet::new(
            vec![
                Obstacle::disc(Point::ORIGIN, 10.0),
                Obstacle::disc(Point::new(100.0, 0.0), 1e-6),
            ],
            0.0,
        );
        let cells = k.cells(32);
        let last = cells.last().unwrap();
        assert_eq!(last.node, Point::new(100.0, 0.0));
        assert_eq!(last.self_radius, 1e-6);
        assert_eq!(cells.len() - 1, 31);
    }

    #[test]
    fn bounding_disc_encloses_pieces() {
        let k = CompactSet::new(
            vec![
                Obstacle::disc(Point::new(3.0, 0.0), 1.0),
                Obstacle::segment(Point::new(-1.0, -1.0), Point::new(-1.0, 1.0)),
            ],
            0.0,
        );
        for z in k.candidates(200) {
            assert!(z.dist(k.center) <= k.bounding_radius + 1e-12);
        }
    }
}

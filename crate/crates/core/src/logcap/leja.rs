use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::CompactSet;

/// Relative tolerance under which two greedy scores count as tied.
const TIE_TOL: f64 = 1e-12;

/// Number of boundary candidates scanned for an `n`-point Leja sequence.
pub fn candidate_count(n: usize) -> usize {
    (50 * n).max(2000)
}

/// Greedy Leja sequence of length `n` on the boundary of `k`.
///
/// The first point is the candidate farthest from the set's center; each
/// later point maximizes the product of distances to the earlier ones.
/// Ties go to the lexicographically smallest candidate.
pub fn leja_points(k: &CompactSet, n: usize) -> Result<Vec<Point>> {
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "leja_points needs n >= 2, got {n}"
        )));
    }
    let mut cand = k.candidates(candidate_count(n));
    cand.sort_by(|a, b| a.lex_cmp(b));
    cand.dedup();

    let first = pick(&cand.iter().map(|c| c.dist(k.center)).collect::<Vec<_>>());
    let mut points = vec![cand[first]];
    let mut score = vec![0.0f64; cand.len()];
    while points.len() < n {
        let last = *points.last().unwrap();
        score
            .par_iter_mut()
            .zip(cand.par_iter())
            .for_each(|(s, c)| *s += c.dist(last).ln());
        let next = pick(&score);
        points.push(cand[next]);
    }
    Ok(points)
}

/// Index of the maximal score; near-ties resolve to the lowest index.
fn pick(score: &[f64]) -> usize {
    let best = score.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return 0;
    }
    let slack = TIE_TOL * best.abs().max(1.0);
    score.iter().position(|&s| s >= best - slack).unwrap()
}

/// The n-point diameter `(Π_{i<j} |x_i − x_j|)^{2/(n(n−1))}`, computed in log space.
pub fn transfinite_diameter(points: &[Point]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "transfinite_diameter needs at least 2 points, got {n}"
        )));
    }
    let log_sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            points[i + 1..]
                .iter()
                .map(|q| points[i].dist(*q).ln())
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    if log_sum == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok((log_sum / pairs).exp())
}

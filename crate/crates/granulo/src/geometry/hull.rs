//! Monotone-chain convex hull.

use super::Point2;
use crate::scalar::Real;

/// Convex hull in counterclockwise order (positive shoelace sign), with no
/// three collinear vertices retained. Accepts any point count >= 1; collinear
/// inputs collapse to their two extremes, coincident points to one.
pub fn convex_hull<R: Real>(points: &[Point2<R>]) -> Vec<Point2<R>> {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let mut pts: Vec<Point2<R>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x).expect("finite coordinates").then(
            a.y.partial_cmp(&b.y).expect("finite coordinates"),
        )
    });
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() <= 2 {
        return pts;
    }

    let cross = |o: Point2<R>, a: Point2<R>, b: Point2<R>| (a - o).cross(b - o);

    let mut hull: Vec<Point2<R>> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= R::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= R::zero()
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

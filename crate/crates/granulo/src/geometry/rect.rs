//! Minimum-area oriented bounding rectangle.

use serde::{Deserialize, Serialize};

use super::{convex_hull, Point2};
use crate::scalar::Real;

/// Oriented rectangle: center, side lengths, and the orientation of the
/// `width` axis in degrees, normalized to `[0, 90)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatedRect<R> {
    pub center: Point2<R>,
    pub width: R,
    pub height: R,
    pub angle_deg: R,
}

impl<R: Real> RotatedRect<R> {
    pub fn area(&self) -> R {
        self.width * self.height
    }

    /// Mean of the two side lengths; the scalar size measure used downstream.
    pub fn mean_side(&self) -> R {
        (self.width + self.height) / R::of(2.0)
    }

    /// Corner coordinates in order around the rectangle.
    pub fn corners(&self) -> [Point2<R>; 4] {
        let theta = self.angle_deg.to_radians();
        let u = Point2::new(theta.cos(), theta.sin()).scale(self.width / R::of(2.0));
        let v = Point2::new(-theta.sin(), theta.cos()).scale(self.height / R::of(2.0));
        [
            self.center - u - v,
            self.center + u - v,
            self.center + u + v,
            self.center - u + v,
        ]
    }

    /// Whether `p` lies inside or on the rectangle, within `tol`.
    pub fn contains(&self, p: Point2<R>, tol: R) -> bool {
        let theta = self.angle_deg.to_radians();
        let d = p - self.center;
        let u = Point2::new(theta.cos(), theta.sin());
        let v = Point2::new(-theta.sin(), theta.cos());
        d.dot(u).abs() <= self.width / R::of(2.0) + tol
            && d.dot(v).abs() <= self.height / R::of(2.0) + tol
    }
}

/// Extents of `pts` along the axis at `theta` radians and its perpendicular.
fn oriented_extents<R: Real>(pts: &[Point2<R>], theta: R) -> (R, R, R, R) {
    let u = Point2::new(theta.cos(), theta.sin());
    let v = Point2::new(-theta.sin(), theta.cos());
    let mut min_u = R::infinity();
    let mut max_u = R::neg_infinity();
    let mut min_v = R::infinity();
    let mut max_v = R::neg_infinity();
    for &p in pts {
        let pu = p.dot(u);
        let pv = p.dot(v);
        min_u = min_u.min(pu);
        max_u = max_u.max(pu);
        min_v = min_v.min(pv);
        max_v = max_v.max(pv);
    }
    (min_u, max_u, min_v, max_v)
}

fn rect_at_angle<R: Real>(pts: &[Point2<R>], theta: R) -> RotatedRect<R> {
    let (min_u, max_u, min_v, max_v) = oriented_extents(pts, theta);
    let u = Point2::new(theta.cos(), theta.sin());
    let v = Point2::new(-theta.sin(), theta.cos());
    let mid_u = (min_u + max_u) / R::of(2.0);
    let mid_v = (min_v + max_v) / R::of(2.0);
    RotatedRect {
        center: u.scale(mid_u) + v.scale(mid_v),
        width: max_u - min_u,
        height: max_v - min_v,
        angle_deg: theta.to_degrees(),
    }
}

/// Minimum-area rotated rectangle enclosing `points`.
///
/// Rotating calipers over the convex hull: the optimal rectangle has one side
/// collinear with a hull edge, so it suffices to evaluate each hull edge
/// orientation. Candidate orientations are folded into `[0, 90)` degrees and
/// area ties (within 1e-9 relative) resolve to the smaller angle, which makes
/// the result deterministic. Degenerate inputs yield zero width or height.
pub fn min_area_rect<R: Real>(points: &[Point2<R>]) -> RotatedRect<R> {
    assert!(!points.is_empty(), "minimum-area rectangle of an empty set");
    let hull = convex_hull(points);
    if hull.len() == 1 {
        return RotatedRect {
            center: hull[0],
            width: R::zero(),
            height: R::zero(),
            angle_deg: R::zero(),
        };
    }

    let quarter_turn = R::of(std::f64::consts::FRAC_PI_2);
    let edge_count = if hull.len() == 2 { 1 } else { hull.len() };
    let mut candidate_angles: Vec<R> = Vec::with_capacity(edge_count);
    for i in 0..edge_count {
        let d = hull[(i + 1) % hull.len()] - hull[i];
        let mut theta = d.y.atan2(d.x) % quarter_turn;
        if theta < R::zero() {
            theta += quarter_turn;
        }
        candidate_angles.push(theta);
    }

    let mut best: Option<RotatedRect<R>> = None;
    for &theta in &candidate_angles {
        let rect = rect_at_angle(&hull, theta);
        best = Some(match best {
            None => rect,
            Some(cur) => {
                let tol = R::of(1e-9) * (R::one() + cur.area().abs());
                if rect.area() < cur.area() - tol
                    || ((rect.area() - cur.area()).abs() <= tol
                        && rect.angle_deg < cur.angle_deg)
                {
                    rect
                } else {
                    cur
                }
            }
        });
    }
    best.expect("at least one candidate angle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_area;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive-rotation oracle: scan orientations in fixed steps and take
    /// the smallest axis-aligned box area in the rotated frame.
    fn min_rect_area_scan(points: &[Point2<f64>], step_deg: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut angle = 0.0;
        while angle < 90.0 {
            let (min_u, max_u, min_v, max_v) = oriented_extents(points, angle.to_radians());
            best = best.min((max_u - min_u) * (max_v - min_v));
            angle += step_deg;
        }
        best
    }

    fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2<f64>> {
        (0..n)
            .map(|_| Point2::new(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0)))
            .collect()
    }

    #[test]
    fn axis_aligned_square() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 4.0),
            Point2::new(0.0, 4.0),
        ];
        let rect = min_area_rect(&pts);
        assert!((rect.width - 4.0).abs() < 1e-12);
        assert!((rect.height - 4.0).abs() < 1e-12);
        assert!((rect.area() - 16.0).abs() < 1e-12);
        assert!(rect.angle_deg.abs() < 1e-12);
        assert!(rect.center.distance(Point2::new(2.0, 2.0)) < 1e-12);
    }

    #[test]
    fn diamond_is_a_rotated_square() {
        // Square of diagonal 4 rotated 45 degrees: sides 2*sqrt(2), area 8.
        let pts = [
            Point2::new(2.0, 0.0),
            Point2::new(4.0, 2.0),
            Point2::new(2.0, 4.0),
            Point2::new(0.0, 2.0),
        ];
        let rect = min_area_rect(&pts);
        let side = 2.0 * std::f64::consts::SQRT_2;
        assert!((rect.width - side).abs() < 1e-9, "width {}", rect.width);
        assert!((rect.height - side).abs() < 1e-9);
        assert!((rect.area() - 8.0).abs() < 1e-9);
        assert!((rect.angle_deg - 45.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_point_and_segment() {
        let rect = min_area_rect(&[Point2::new(3.0, 7.0)]);
        assert_eq!((rect.width, rect.height), (0.0, 0.0));
        assert!(rect.center.distance(Point2::new(3.0, 7.0)) < 1e-12);

        let rect = min_area_rect(&[Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)]);
        assert!(rect.area().abs() < 1e-12);
        assert!((rect.width.max(rect.height) - 5.0).abs() < 1e-12, "segment length");
    }

    #[test]
    fn all_points_contained() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let pts = random_points(&mut rng, rng.gen_range(1..40));
            let rect = min_area_rect(&pts);
            for &p in &pts {
                assert!(rect.contains(p, 1e-6), "{p:?} outside {rect:?}");
            }
        }
    }

    #[test]
    fn matches_exhaustive_rotation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let pts = random_points(&mut rng, rng.gen_range(3..100));
            let fast = min_area_rect(&pts).area();
            let brute = min_rect_area_scan(&pts, 0.05);
            // The scan itself overshoots slightly; the caliper result must
            // never exceed it and must come within half a percent.
            assert!(fast <= brute + 1e-9);
            assert!(fast >= brute * (1.0 - 0.005), "fast {fast} vs scan {brute}");
        }
    }

    #[test]
    fn hull_first_is_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let pts = random_points(&mut rng, 50);
            let hull = convex_hull(&pts);
            let a = min_area_rect(&pts);
            let b = min_area_rect(&hull);
            assert!((a.area() - b.area()).abs() < 1e-9);
            assert!((a.angle_deg - b.angle_deg).abs() < 1e-9);
        }
    }

    #[test]
    fn rect_area_bounds_polygon_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..20 {
            let pts = random_points(&mut rng, 30);
            let hull = convex_hull(&pts);
            assert!(min_area_rect(&pts).area() >= polygon_area(&hull) - 1e-9);
        }
    }

    #[test]
    fn rotation_equivariant_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let pts = random_points(&mut rng, 60);
        let base = min_area_rect(&pts).area();
        for i in 0..12 {
            let angle = f64::from(i) * 0.55;
            let rotated: Vec<Point2<f64>> = pts.iter().map(|p| p.rotate(angle)).collect();
            let area = min_area_rect(&rotated).area();
            assert!((area - base).abs() / base < 1e-6, "angle {angle}: {area} vs {base}");
        }
    }

    #[test]
    fn tie_break_prefers_smaller_angle() {
        // A square's minimum is attained at 0 and 45 degrees... not quite:
        // for a square the 0-degree and 90-degree boxes tie, both folding to
        // angle 0. Build an explicit tie instead: a regular octagon has four
        // distinct optimal orientations folding to 0 and 45; the smaller wins.
        let octagon: Vec<Point2<f64>> = (0..8)
            .map(|i| {
                let a = f64::from(i) * std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_8;
                Point2::new(a.cos(), a.sin())
            })
            .collect();
        let rect = min_area_rect(&octagon);
        assert!(rect.angle_deg < 1e-9, "angle {}", rect.angle_deg);
    }
}

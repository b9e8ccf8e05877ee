//! Pixel-level and point-set geometry.
//!
//! Integer pixel chains come out of contour tracing; everything downstream
//! (hulls, minimum-area rectangles, polygon simplification) is generic over
//! the scalar type.

mod contour;
mod hull;
mod rect;
mod simplify;

pub use contour::{label_components, trace_external_contours, Component, Contour, PixelBox};
pub use hull::convex_hull;
pub use rect::{min_area_rect, RotatedRect};
pub use simplify::{approx_polygon, approx_polygon_indices};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Integer pixel coordinate (x right, y down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelPoint {
    pub x: i32,
    pub y: i32,
}

impl PixelPoint {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    /// Continuous coordinates of the pixel center (cell `[x, x+1] x [y, y+1]`).
    pub fn center<R: Real>(self) -> Point2<R> {
        Point2::new(R::of(f64::from(self.x) + 0.5), R::of(f64::from(self.y) + 0.5))
    }
}

/// Real-valued 2-D point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point2<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> R {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product of `self` and `other`.
    pub fn cross(self, other: Self) -> R {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> R {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> R {
        (self - other).norm()
    }

    pub fn scale(self, s: R) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Counterclockwise rotation by `angle` radians (in the coordinate
    /// algebra; visually clockwise when y points down).
    pub fn rotate(self, angle: R) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self::new(self.x * cos - self.y * sin, self.x * sin + self.y * cos)
    }
}

impl<R: Real> std::ops::Add for Point2<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<R: Real> std::ops::Sub for Point2<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Signed shoelace area of a polygon given by its vertices in order.
pub fn signed_polygon_area<R: Real>(points: &[Point2<R>]) -> R {
    let n = points.len();
    if n < 3 {
        return R::zero();
    }
    let mut acc = R::zero();
    for i in 0..n {
        let j = (i + 1) % n;
        acc += points[i].cross(points[j]);
    }
    acc / R::of(2.0)
}

/// Absolute shoelace area; single points and collinear chains give 0.
pub fn polygon_area<R: Real>(points: &[Point2<R>]) -> R {
    signed_polygon_area(points).abs()
}

/// Perimeter of a closed polygon.
pub fn polygon_perimeter<R: Real>(points: &[Point2<R>]) -> R {
    let n = points.len();
    if n < 2 {
        return R::zero();
    }
    let mut acc = R::zero();
    for i in 0..n {
        acc += points[i].distance(points[(i + 1) % n]);
    }
    acc
}

/// Shoelace area of an integer pixel chain.
pub fn contour_area(contour: &Contour) -> f64 {
    let pts: Vec<Point2<f64>> =
        contour.points.iter().map(|p| Point2::new(f64::from(p.x), f64::from(p.y))).collect();
    polygon_area(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shoelace_reference_values() {
        let unit_square = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        assert_eq!(polygon_area(&unit_square), 1.0);

        let triangle = [Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)];
        assert_eq!(polygon_area(&triangle), 6.0);

        let degenerate = [Point2::new(2.0, 2.0)];
        assert_eq!(polygon_area(&degenerate), 0.0);
        let collinear =
            [Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)];
        assert_eq!(polygon_area(&collinear), 0.0);
    }

    #[test]
    fn contour_area_matches_polygon_area() {
        let c = Contour {
            points: vec![
                PixelPoint::new(0, 0),
                PixelPoint::new(4, 0),
                PixelPoint::new(4, 4),
                PixelPoint::new(0, 4),
            ],
        };
        assert_eq!(contour_area(&c), 16.0);
    }

    #[test]
    fn generic_math_same_for_f32_and_f64() {
        let a64 = polygon_area(&[
            Point2::new(0.0f64, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(3.0, 2.0),
        ]);
        let a32 = polygon_area(&[
            Point2::new(0.0f32, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(3.0, 2.0),
        ]);
        assert_eq!(a64, 3.0);
        assert_eq!(a32, 3.0);
    }
}

//! Exact four-point plane homography.

use crate::geometry::Point2;

/// 3x3 projective transform mapping one quad onto another.
#[derive(Debug, Clone, Copy)]
pub struct Homography {
    m: [[f64; 3]; 3],
}

impl Homography {
    /// Direct linear transform from four point correspondences
    /// `src[i] -> dst[i]`. Four correspondences determine the eight unknowns
    /// exactly; returns `None` for degenerate (collinear) configurations.
    pub fn from_quad(src: &[Point2<f64>; 4], dst: &[Point2<f64>; 4]) -> Option<Self> {
        // Rows of the 8x8 system A h = b with h8 = 1.
        let mut a = [[0.0f64; 9]; 8];
        for i in 0..4 {
            let (x, y) = (src[i].x, src[i].y);
            let (xp, yp) = (dst[i].x, dst[i].y);
            a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -x * xp, -y * xp, xp];
            a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -x * yp, -y * yp, yp];
        }

        // Gaussian elimination with partial pivoting on the augmented system.
        for col in 0..8 {
            let mut pivot_row = col;
            let mut pivot_val = a[col][col].abs();
            for row in col + 1..8 {
                if a[row][col].abs() > pivot_val {
                    pivot_val = a[row][col].abs();
                    pivot_row = row;
                }
            }
            if pivot_val < 1e-12 {
                return None;
            }
            a.swap(col, pivot_row);
            for row in col + 1..8 {
                let f = a[row][col] / a[col][col];
                for c in col..9 {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
        let mut h = [0.0f64; 9];
        h[8] = 1.0;
        for row in (0..8).rev() {
            let mut sum = a[row][8];
            for c in row + 1..8 {
                sum -= a[row][c] * h[c];
            }
            h[row] = sum / a[row][row];
        }
        Some(Self {
            m: [[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], h[8]]],
        })
    }

    pub fn project(&self, p: Point2<f64>) -> Point2<f64> {
        let m = &self.m;
        let w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
        Point2::new(
            (m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w,
            (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w,
        )
    }
}

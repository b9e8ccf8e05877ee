//! Ramer-Douglas-Peucker simplification of closed pixel chains.

use super::{Contour, PixelPoint, Point2};

fn point_segment_distance(p: Point2<f64>, a: Point2<f64>, b: Point2<f64>) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    // Perpendicular distance to the infinite line; RDP anchors are chain
    // points, so the segment vs line distinction does not matter for the
    // farthest-point search but the line form keeps collinear removal exact.
    (ab.cross(p - a)).abs() / len2.sqrt()
}

fn rdp_open(pts: &[Point2<f64>], idx: &[usize], epsilon: f64, keep: &mut Vec<usize>) {
    if idx.len() <= 2 {
        return;
    }
    let (a, b) = (pts[idx[0]], pts[*idx.last().unwrap()]);
    let mut far_i = 0usize;
    let mut far_d = -1.0f64;
    for (i, &k) in idx.iter().enumerate().skip(1).take(idx.len() - 2) {
        let d = point_segment_distance(pts[k], a, b);
        if d > far_d {
            far_d = d;
            far_i = i;
        }
    }
    if far_d > epsilon {
        rdp_open(pts, &idx[..=far_i], epsilon, keep);
        keep.push(idx[far_i]);
        rdp_open(pts, &idx[far_i..], epsilon, keep);
    }
}

/// Indices into `points` retained by closed-chain RDP simplification.
///
/// The chain is anchored at index 0 and at the point farthest from it, each
/// half simplified independently. A final pass drops any retained vertex
/// whose distance to the chord of its simplified neighbors is within
/// `epsilon` (this removes anchors that were not true corners). `epsilon = 0`
/// therefore reduces to exact collinear-point removal.
pub fn approx_polygon_indices(points: &[PixelPoint], epsilon: f64) -> Vec<usize> {
    assert!(epsilon >= 0.0);
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let pts: Vec<Point2<f64>> =
        points.iter().map(|p| Point2::new(f64::from(p.x), f64::from(p.y))).collect();

    // Split the ring at index 0 and the farthest point from it.
    let far = (1..n)
        .max_by(|&a, &b| {
            pts[a]
                .distance(pts[0])
                .partial_cmp(&pts[b].distance(pts[0]))
                .expect("finite coordinates")
        })
        .unwrap();

    let first_half: Vec<usize> = (0..=far).collect();
    let second_half: Vec<usize> = (far..n).chain(std::iter::once(0)).collect();

    let mut keep = vec![0];
    rdp_open(&pts, &first_half, epsilon, &mut keep);
    keep.push(far);
    rdp_open(&pts, &second_half, epsilon, &mut keep);

    // Drop non-corner vertices (anchors included) against the reduced ring.
    loop {
        let m = keep.len();
        if m <= 3 {
            break;
        }
        let mut removed = false;
        let mut i = 0;
        while i < keep.len() && keep.len() > 3 {
            let m = keep.len();
            let prev = pts[keep[(i + m - 1) % m]];
            let next = pts[keep[(i + 1) % m]];
            if point_segment_distance(pts[keep[i]], prev, next) <= epsilon {
                keep.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    keep
}

/// Closed-chain RDP simplification of a contour.
pub fn approx_polygon(contour: &Contour, epsilon: f64) -> Vec<PixelPoint> {
    approx_polygon_indices(&contour.points, epsilon)
        .into_iter()
        .map(|i| contour.points[i])
        .collect()
}

//! Square fiducial marker detection, decoding, and calibration.
//!
//! Candidates come from the same threshold/contour machinery as the particle
//! pipeline, tuned for the marker's high-contrast black border: no blur, a
//! mid-size block and a small offset. Each 4-vertex convex candidate is
//! sampled through an exact homography, binarized against the midpoint of the
//! sampled cell means, and matched against the dictionary under all four
//! rotations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dictionary::MarkerDictionary;
use super::homography::Homography;
use crate::filter::{adaptive_threshold, ThresholdParams};
use crate::geometry::{
    approx_polygon_indices, label_components, polygon_area, signed_polygon_area, Point2,
};
use crate::raster::GrayImage;

#[derive(Debug, Error)]
pub enum MarkerError {
    #[error("no fiducial marker found")]
    NoMarkerFound,
    #[error("ambiguous scene: markers {first} and {second} both decode")]
    AmbiguousMarker { first: u32, second: u32 },
    #[error("marker side must be positive, got {0} mm")]
    InvalidSide(f64),
}

/// One decoded marker.
///
/// Corners are in top-left, top-right, bottom-right, bottom-left order of the
/// marker's own canonical (unrotated) frame, regardless of how the marker
/// lies in the image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkerDetection {
    pub id: u32,
    pub corners: [Point2<f64>; 4],
    pub perimeter_px: f64,
}

/// Pixel-per-millimeter scale derived from the marker perimeter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub pixel_per_mm: f64,
    /// Physical size of one pixel: `1 / pixel_per_mm`.
    pub min_resolvable_mm: f64,
    pub marker_id: u32,
    pub marker_quad: [Point2<f64>; 4],
}

/// Detection tuning. Defaults are sized for markers from roughly 100 px to
/// 500 px on a side: the block exceeds the border-ring thickness so the ring
/// thresholds solid, and the small offset keeps the traced edge tight.
#[derive(Debug, Clone)]
pub struct DetectParams {
    pub threshold: ThresholdParams,
    /// Candidates with a smaller quad area are rejected before decoding.
    pub min_candidate_area_px: f64,
    /// Canonical sampling resolution per marker cell.
    pub cell_px: usize,
    /// Polygon-simplification tolerance as a fraction of the chain perimeter.
    pub epsilon_fraction: f64,
    /// Minimum spread between the darkest and brightest sampled cell.
    pub min_cell_contrast: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            threshold: ThresholdParams { block_size: 101, c: 25.0 },
            min_candidate_area_px: 400.0,
            cell_px: 8,
            epsilon_fraction: 0.03,
            min_cell_contrast: 30.0,
        }
    }
}

/// Detect the single dictionary marker in the image.
pub fn detect_marker(
    img: &GrayImage,
    dict: &MarkerDictionary,
) -> Result<MarkerDetection, MarkerError> {
    detect_marker_with(img, dict, &DetectParams::default())
}

pub fn detect_marker_with(
    img: &GrayImage,
    dict: &MarkerDictionary,
    params: &DetectParams,
) -> Result<MarkerDetection, MarkerError> {
    let bin = adaptive_threshold(img, &params.threshold);
    let components = label_components(&bin);

    let mut decoded: Vec<(u32, [Point2<f64>; 4])> = Vec::new();
    for comp in &components {
        let bbox_area = (f64::from(comp.bbox.max_x - comp.bbox.min_x) + 1.0)
            * (f64::from(comp.bbox.max_y - comp.bbox.min_y) + 1.0);
        if bbox_area < params.min_candidate_area_px || comp.contour.points.len() < 8 {
            continue;
        }
        let Some(quad) = quad_candidate(comp, params) else { continue };
        if let Some((id, rot)) = decode_quad(img, dict, &quad, params) {
            // Canonical corner i sits at sampled corner (i + rot) % 4.
            let corners = [
                quad[usize::from(rot)],
                quad[usize::from((rot + 1) % 4)],
                quad[usize::from((rot + 2) % 4)],
                quad[usize::from((rot + 3) % 4)],
            ];
            decoded.push((id, corners));
        }
    }

    match decoded.len() {
        0 => Err(MarkerError::NoMarkerFound),
        1 => {
            let (id, corners) = decoded.pop().expect("one element");
            let perimeter_px = (0..4).map(|i| corners[i].distance(corners[(i + 1) % 4])).sum();
            Ok(MarkerDetection { id, corners, perimeter_px })
        }
        _ => Err(MarkerError::AmbiguousMarker { first: decoded[0].0, second: decoded[1].0 }),
    }
}

/// Pixel-to-length ratio from the detected perimeter and the known physical
/// side length: `P = perimeter_px / (4 * side_mm)`.
pub fn calibrate(
    det: &MarkerDetection,
    marker_side_mm: f64,
) -> Result<CalibrationResult, MarkerError> {
    if !(marker_side_mm > 0.0) {
        return Err(MarkerError::InvalidSide(marker_side_mm));
    }
    let pixel_per_mm = det.perimeter_px / (4.0 * marker_side_mm);
    Ok(CalibrationResult {
        pixel_per_mm,
        min_resolvable_mm: 1.0 / pixel_per_mm,
        marker_id: det.id,
        marker_quad: det.corners,
    })
}

/// Reduce a component boundary to a convex 4-vertex quad with subpixel
/// corners, or reject it.
fn quad_candidate(
    comp: &crate::geometry::Component,
    params: &DetectParams,
) -> Option<[Point2<f64>; 4]> {
    let chain = &comp.contour.points;
    let centers: Vec<Point2<f64>> = chain.iter().map(|p| p.center()).collect();
    let perimeter = crate::geometry::polygon_perimeter(&centers);
    let idxs = approx_polygon_indices(chain, params.epsilon_fraction * perimeter);
    if idxs.len() != 4 {
        return None;
    }
    let raw: [Point2<f64>; 4] =
        [centers[idxs[0]], centers[idxs[1]], centers[idxs[2]], centers[idxs[3]]];

    // Convexity: consecutive edge cross products all strictly one sign.
    let mut sign = 0i32;
    for i in 0..4 {
        let a = raw[(i + 1) % 4] - raw[i];
        let b = raw[(i + 2) % 4] - raw[(i + 1) % 4];
        let cr = a.cross(b);
        if cr == 0.0 {
            return None;
        }
        let s = if cr > 0.0 { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return None;
        }
    }
    if polygon_area(&raw) < params.min_candidate_area_px {
        return None;
    }

    let refined = refine_corners(&centers, &idxs, &raw);

    // The sampling grid below assumes top-left/clockwise-on-screen winding,
    // which matches the tracer's orientation; enforce it for safety.
    let mut quad = refined;
    if signed_polygon_area(&quad) < 0.0 {
        quad.swap(1, 3);
    }
    Some(quad)
}

/// Replace each raw corner with the intersection of total-least-squares line
/// fits through the two adjacent boundary runs. Boundary pixel centers sit
/// about half a pixel inside the intensity edge, so each fitted line is
/// pushed 0.5 px along its outward normal before intersecting; on an
/// axis-aligned rendered square this recovers the ink boundary exactly.
fn refine_corners(
    centers: &[Point2<f64>],
    corner_idxs: &[usize],
    raw: &[Point2<f64>; 4],
) -> [Point2<f64>; 4] {
    let centroid = Point2::new(
        raw.iter().map(|p| p.x).sum::<f64>() / 4.0,
        raw.iter().map(|p| p.y).sum::<f64>() / 4.0,
    );

    // Side k runs from corner k to corner k+1 along the chain.
    let mut lines: [Option<(Point2<f64>, Point2<f64>)>; 4] = [None; 4];
    let n = centers.len();
    for k in 0..4 {
        let start = corner_idxs[k];
        let end = corner_idxs[(k + 1) % 4];
        let len = if k == 3 { n - start + end } else { end - start };
        if len < 6 {
            continue;
        }
        let trim = (len as f64 * 0.15).ceil() as usize;
        let pts: Vec<Point2<f64>> =
            (trim..=len - trim).map(|o| centers[(start + o) % n]).collect();
        if pts.len() < 3 {
            continue;
        }
        if let Some((base, dir)) = fit_line_tls(&pts) {
            // Outward unit normal relative to the quad centroid.
            let mut normal = Point2::new(-dir.y, dir.x);
            if normal.dot(base - centroid) < 0.0 {
                normal = normal.scale(-1.0);
            }
            lines[k] = Some((base + normal.scale(0.5), dir));
        }
    }

    let mut out = *raw;
    for k in 0..4 {
        // Corner k is the meet of side k-1 and side k.
        let (Some(prev), Some(cur)) = (lines[(k + 3) % 4], lines[k]) else { continue };
        if let Some(p) = intersect_lines(prev, cur) {
            if p.distance(raw[k]) <= 3.0 {
                out[k] = p;
            }
        }
    }
    out
}

/// Total least squares: centroid plus principal direction.
fn fit_line_tls(pts: &[Point2<f64>]) -> Option<(Point2<f64>, Point2<f64>)> {
    let n = pts.len() as f64;
    let mean = Point2::new(
        pts.iter().map(|p| p.x).sum::<f64>() / n,
        pts.iter().map(|p| p.y).sum::<f64>() / n,
    );
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let d = *p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    if sxx + syy < 1e-12 {
        return None;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    Some((mean, Point2::new(angle.cos(), angle.sin())))
}

fn intersect_lines(
    a: (Point2<f64>, Point2<f64>),
    b: (Point2<f64>, Point2<f64>),
) -> Option<Point2<f64>> {
    let denom = a.1.cross(b.1);
    if denom.abs() < 1e-9 {
        return None;
    }
    let t = (b.0 - a.0).cross(b.1) / denom;
    Some(a.0 + a.1.scale(t))
}

/// Sample the candidate's cell grid and decode it against the dictionary.
/// Returns the id and the number of counterclockwise quarter turns that bring
/// the sampled bit matrix into the canonical orientation.
fn decode_quad(
    img: &GrayImage,
    dict: &MarkerDictionary,
    quad: &[Point2<f64>; 4],
    params: &DetectParams,
) -> Option<(u32, u8)> {
    let n = dict.grid();
    let cells = n + 2;
    let size = (cells * params.cell_px) as f64;
    let canonical = [
        Point2::new(0.0, 0.0),
        Point2::new(size, 0.0),
        Point2::new(size, size),
        Point2::new(0.0, size),
    ];
    let h = Homography::from_quad(&canonical, quad)?;

    // Mean intensity over the central 50% of each cell, 4x4 subsamples.
    let cell = size / cells as f64;
    let mut means = vec![0.0f64; cells * cells];
    for r in 0..cells {
        for c in 0..cells {
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    let u = (c as f64 + 0.25 + 0.5 * (f64::from(j) + 0.5) / 4.0) * cell;
                    let v = (r as f64 + 0.25 + 0.5 * (f64::from(i) + 0.5) / 4.0) * cell;
                    let p = h.project(Point2::new(u, v));
                    acc += sample_bilinear(img, p);
                }
            }
            means[r * cells + c] = acc / 16.0;
        }
    }

    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < params.min_cell_contrast {
        return None;
    }
    let mid = 0.5 * (lo + hi);

    // Border ring must be all black.
    for r in 0..cells {
        for c in 0..cells {
            let on_ring = r == 0 || c == 0 || r == cells - 1 || c == cells - 1;
            if on_ring && means[r * cells + c] > mid {
                return None;
            }
        }
    }
    let bits: Vec<u8> = (0..n * n)
        .map(|k| {
            let (r, c) = (k / n + 1, k % n + 1);
            u8::from(means[r * cells + c] > mid)
        })
        .collect();
    dict.match_bits(&bits).map(|(id, rot, _)| (id, rot))
}

/// Bilinear sample with the pixel-center-at-(x+0.5, y+0.5) convention,
/// clamped at the borders.
fn sample_bilinear(img: &GrayImage, p: Point2<f64>) -> f64 {
    let (w, h) = (img.width(), img.height());
    let u = (p.x - 0.5).clamp(0.0, (w - 1) as f64);
    let v = (p.y - 0.5).clamp(0.0, (h - 1) as f64);
    let x0 = u.floor() as usize;
    let y0 = v.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let (fx, fy) = (u - x0 as f64, v - y0 as f64);
    let a = f64::from(img.get(x0, y0));
    let b = f64::from(img.get(x1, y0));
    let c = f64::from(img.get(x0, y1));
    let d = f64::from(img.get(x1, y1));
    a * (1.0 - fx) * (1.0 - fy) + b * fx * (1.0 - fy) + c * (1.0 - fx) * fy + d * fx * fy
}

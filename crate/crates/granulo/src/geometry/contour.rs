//! Connected-component labeling and external boundary tracing.
//!
//! Foreground is 8-connected, background 4-connected. Each component yields
//! exactly one closed outer boundary chain (holes produce nothing), traced by
//! Moore-neighbor following with Jacob's stopping criterion. Components are
//! reported in raster-scan order of their first pixel, so the output is
//! deterministic for a given mask.

use serde::{Deserialize, Serialize};

use super::PixelPoint;
use crate::raster::BinaryImage;

/// Closed outer boundary: consecutive points are 8-adjacent, and so are the
/// last and first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub points: Vec<PixelPoint>,
}

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PixelBox {
    pub min_x: i32,
    pub min_y: i32,
    pub max_x: i32,
    pub max_y: i32,
}

impl PixelBox {
    pub fn expand(&self, margin: i32) -> Self {
        Self {
            min_x: self.min_x - margin,
            min_y: self.min_y - margin,
            max_x: self.max_x + margin,
            max_y: self.max_y + margin,
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.min_x <= other.max_x
            && other.min_x <= self.max_x
            && self.min_y <= other.max_y
            && other.min_y <= self.max_y
    }
}

/// One 8-connected foreground component.
#[derive(Debug, Clone)]
pub struct Component {
    pub contour: Contour,
    /// Foreground pixel count of the whole component (not just the boundary).
    pub area_px: u64,
    pub bbox: PixelBox,
}

// Moore neighborhood in clockwise screen order (y down).
const NEIGHBORS: [(i32, i32); 8] =
    [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
const WEST: usize = 4;

/// Label all components and trace each outer boundary.
pub fn label_components(img: &BinaryImage) -> Vec<Component> {
    let (w, h) = (img.width() as i32, img.height() as i32);
    let px = img.pixels();
    let at = |x: i32, y: i32| -> bool {
        x >= 0 && y >= 0 && x < w && y < h && px[(y * w + x) as usize] == 1
    };

    let mut visited = vec![false; px.len()];
    let mut components = Vec::new();
    let mut stack: Vec<(i32, i32)> = Vec::new();

    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            if px[idx] == 0 || visited[idx] {
                continue;
            }
            // Flood-fill the component; (x, y) is its topmost-leftmost pixel.
            let mut area = 0u64;
            let mut bbox = PixelBox { min_x: x, min_y: y, max_x: x, max_y: y };
            visited[idx] = true;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                area += 1;
                bbox.min_x = bbox.min_x.min(cx);
                bbox.max_x = bbox.max_x.max(cx);
                bbox.min_y = bbox.min_y.min(cy);
                bbox.max_y = bbox.max_y.max(cy);
                for (dx, dy) in NEIGHBORS {
                    let (nx, ny) = (cx + dx, cy + dy);
                    if at(nx, ny) {
                        let nidx = (ny * w + nx) as usize;
                        if !visited[nidx] {
                            visited[nidx] = true;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            let contour = trace_from(&at, PixelPoint::new(x, y), area);
            components.push(Component { contour, area_px: area, bbox });
        }
    }
    components
}

/// Outer boundaries only, one per component, in discovery order.
pub fn trace_external_contours(img: &BinaryImage) -> Vec<Contour> {
    label_components(img).into_iter().map(|c| c.contour).collect()
}

/// Moore-neighbor boundary walk from the component's topmost-leftmost pixel
/// (whose west neighbor is guaranteed background). Scanning clockwise from
/// the entry direction yields a chain with positive shoelace sign in (x, y)
/// coordinates. Stops on Jacob's criterion: the walk is back at the start
/// pixel and about to repeat its first move.
fn trace_from(at: &dyn Fn(i32, i32) -> bool, start: PixelPoint, area: u64) -> Contour {
    // Scan clockwise from `from_dir` (exclusive); returns the first foreground
    // neighbor and the direction index just before it (a background pixel,
    // the entry point for the next scan).
    let next_move = |p: PixelPoint, from_dir: usize| -> Option<(PixelPoint, usize)> {
        let mut prev_bg = from_dir;
        for k in 1..=8 {
            let d = (from_dir + k) % 8;
            let (dx, dy) = NEIGHBORS[d];
            let q = PixelPoint::new(p.x + dx, p.y + dy);
            if at(q.x, q.y) {
                return Some((q, prev_bg));
            }
            prev_bg = d;
        }
        None
    };

    let Some(first) = next_move(start, WEST) else {
        return Contour { points: vec![start] };
    };

    let mut points = vec![start];
    let (mut cur, mut entry) = first;
    let limit = 8 * (4 * area as usize + 8);
    let mut steps = 0usize;
    loop {
        if cur == start && entry == WEST {
            // Only reachable if the initial state itself recurs.
            break;
        }
        let (next, next_entry) = next_move(cur, entry).expect("walk stays on the component");
        if cur == start && next == first.0 && next_entry == first.1 {
            break;
        }
        points.push(cur);
        cur = next;
        entry = next_entry;
        steps += 1;
        if steps > limit {
            debug_assert!(false, "boundary walk exceeded step limit");
            break;
        }
    }
    Contour { points }
}

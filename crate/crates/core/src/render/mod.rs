//! Rendering: stick-figure rasterization to PPM frames, label maps for a
//! downstream image-synthesis network, and pose-sequence JSON export.

mod pose_json;

pub use pose_json::{export_pose_json, parse_pose_json};

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::posedict::KeypointFrame;
use crate::synth::{OutputSequence, MOUTH_FACE_RANGE};

/// Points below this confidence are treated as missing and draw nothing.
pub const VISIBLE_CONFIDENCE: f64 = 0.05;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("pose document: {0}")]
    Document(String),
}

/// One polyline over face indices; closed runs loop back to their first
/// point (the two lip contours).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRun {
    pub indices: Vec<usize>,
    pub closed: bool,
}

impl PolyRun {
    fn open(range: std::ops::RangeInclusive<usize>) -> Self {
        PolyRun {
            indices: range.collect(),
            closed: false,
        }
    }

    fn closed(range: std::ops::RangeInclusive<usize>) -> Self {
        PolyRun {
            indices: range.collect(),
            closed: true,
        }
    }

    /// True when every index belongs to the mouth (lip contours).
    pub fn is_lip(&self) -> bool {
        self.indices.iter().all(|i| MOUTH_FACE_RANGE.contains(i))
    }
}

/// Edge list over BODY_25 plus polyline runs over the 70-point face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonTopology {
    pub body_edges: Vec<(usize, usize)>,
    pub face_runs: Vec<PolyRun>,
}

impl Default for SkeletonTopology {
    fn default() -> Self {
        SkeletonTopology {
            // standard BODY_25 limb pairs
            body_edges: vec![
                (1, 8),
                (1, 2),
                (1, 5),
                (2, 3),
                (3, 4),
                (5, 6),
                (6, 7),
                (8, 9),
                (9, 10),
                (10, 11),
                (8, 12),
                (12, 13),
                (13, 14),
                (1, 0),
                (0, 15),
                (15, 17),
                (0, 16),
                (16, 18),
                (14, 19),
                (19, 20),
                (14, 21),
                (11, 22),
                (22, 23),
                (11, 24),
            ],
            face_runs: vec![
                PolyRun::open(0..=16),    // jaw
                PolyRun::open(17..=21),   // right brow
                PolyRun::open(22..=26),   // left brow
                PolyRun::open(27..=30),   // nose bridge
                PolyRun::open(31..=35),   // nostrils
                PolyRun::closed(36..=41), // right eye
                PolyRun::closed(42..=47), // left eye
                PolyRun::closed(48..=59), // outer lip
                PolyRun::closed(60..=67), // inner lip
            ],
        }
    }
}

/// An 8-bit RGB canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterFrame {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl RasterFrame {
    pub fn new(width: usize, height: usize) -> Self {
        RasterFrame {
            width,
            height,
            pixels: vec![0; width * height * 3],
        }
    }

    fn plot(&mut self, x: i64, y: i64, color: [u8; 3]) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        let idx = (y as usize * self.width + x as usize) * 3;
        self.pixels[idx..idx + 3].copy_from_slice(&color);
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let idx = (y * self.width + x) * 3;
        [self.pixels[idx], self.pixels[idx + 1], self.pixels[idx + 2]]
    }

    /// Binary PPM (P6) encoding.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Clips a segment to the canvas rectangle (Liang-Barsky), returning
/// endpoints ready for integer rasterization, or None when fully outside.
fn clip_segment(
    (mut x0, mut y0): (f64, f64),
    (mut x1, mut y1): (f64, f64),
    width: usize,
    height: usize,
) -> Option<((f64, f64), (f64, f64))> {
    let (xmax, ymax) = (width as f64 - 1.0, height as f64 - 1.0);
    let (dx, dy) = (x1 - x0, y1 - y0);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [(-dx, x0), (dx, xmax - x0), (-dy, y0), (dy, ymax - y0)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            if r > t1 {
                return None;
            }
            t0 = t0.max(r);
        } else {
            if r < t0 {
                return None;
            }
            t1 = t1.min(r);
        }
    }
    if t0 > t1 {
        return None;
    }
    let nx0 = x0 + t0 * dx;
    let ny0 = y0 + t0 * dy;
    let nx1 = x0 + t1 * dx;
    let ny1 = y0 + t1 * dy;
    x0 = nx0;
    y0 = ny0;
    x1 = nx1;
    y1 = ny1;
    Some(((x0, y0), (x1, y1)))
}

fn draw_line(frame: &mut RasterFrame, a: (f64, f64), b: (f64, f64), color: [u8; 3]) {
    if !(a.0.is_finite() && a.1.is_finite() && b.0.is_finite() && b.1.is_finite()) {
        return;
    }
    let Some((ca, cb)) = clip_segment(a, b, frame.width, frame.height) else {
        return;
    };
    let (mut x, mut y) = (ca.0.round() as i64, ca.1.round() as i64);
    let (x1, y1) = (cb.0.round() as i64, cb.1.round() as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        frame.plot(x, y, color);
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

fn draw_skeleton(
    frame: &KeypointFrame,
    topo: &SkeletonTopology,
    canvas: (usize, usize),
    body_color: [u8; 3],
    face_color: [u8; 3],
    lip_color: [u8; 3],
) -> RasterFrame {
    let mut raster = RasterFrame::new(canvas.0, canvas.1);
    for &(a, b) in &topo.body_edges {
        let (pa, pb) = (&frame.body[a], &frame.body[b]);
        if pa.c >= VISIBLE_CONFIDENCE && pb.c >= VISIBLE_CONFIDENCE {
            draw_line(&mut raster, (pa.x, pa.y), (pb.x, pb.y), body_color);
        }
    }
    for run in &topo.face_runs {
        let color = if run.is_lip() { lip_color } else { face_color };
        let mut pairs: Vec<(usize, usize)> = run.indices.windows(2).map(|w| (w[0], w[1])).collect();
        if run.closed && run.indices.len() > 2 {
            pairs.push((*run.indices.last().unwrap(), run.indices[0]));
        }
        for (a, b) in pairs {
            let (pa, pb) = (&frame.face[a], &frame.face[b]);
            if pa.c >= VISIBLE_CONFIDENCE && pb.c >= VISIBLE_CONFIDENCE {
                draw_line(&mut raster, (pa.x, pa.y), (pb.x, pb.y), color);
            }
        }
    }
    raster
}

/// Draws every sufficiently confident edge as a 1-px white line.
pub fn rasterize_frame(
    frame: &KeypointFrame,
    topo: &SkeletonTopology,
    canvas: (usize, usize),
) -> RasterFrame {
    let white = [255, 255, 255];
    draw_skeleton(frame, topo, canvas, white, white, white)
}

/// Same rasterization with per-part colors so the downstream network can
/// tell regions apart: body white, face contour gray, lips red.
pub fn rasterize_label_map(
    frame: &KeypointFrame,
    topo: &SkeletonTopology,
    canvas: (usize, usize),
) -> RasterFrame {
    draw_skeleton(
        frame,
        topo,
        canvas,
        [255, 255, 255],
        [128, 128, 128],
        [255, 0, 0],
    )
}

fn write_ppm_series(
    seq: &OutputSequence,
    dir: &Path,
    prefix: &str,
    render: impl Fn(&KeypointFrame) -> RasterFrame,
) -> Result<usize, RenderError> {
    fs::create_dir_all(dir).map_err(|source| RenderError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for (i, frame) in seq.frames.iter().enumerate() {
        let path = dir.join(format!("{prefix}_{i:06}.ppm"));
        let raster = render(frame);
        let mut file = fs::File::create(&path).map_err(|source| RenderError::Io {
            path: path.display().to_string(),
            source,
        })?;
        file.write_all(&raster.to_ppm())
            .map_err(|source| RenderError::Io {
                path: path.display().to_string(),
                source,
            })?;
    }
    Ok(seq.frames.len())
}

/// Writes one `frame_%06d.ppm` per sequence frame; returns the count.
pub fn export_frames(
    seq: &OutputSequence,
    dir: &Path,
    topo: &SkeletonTopology,
    canvas: (usize, usize),
) -> Result<usize, RenderError> {
    write_ppm_series(seq, dir, "frame", |f| rasterize_frame(f, topo, canvas))
}

/// Writes one `label_%06d.ppm` per sequence frame; returns the count.
pub fn export_label_maps(
    seq: &OutputSequence,
    dir: &Path,
    topo: &SkeletonTopology,
    canvas: (usize, usize),
) -> Result<usize, RenderError> {
    write_ppm_series(seq, dir, "label", |f| rasterize_label_map(f, topo, canvas))
}

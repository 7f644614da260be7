//! Mouth-anchored sliding-window smoothing.
//!
//! All body points, the non-mouth face points, and the trajectory of the
//! mouth center are filtered with a normalized triangular kernel. The
//! mouth keypoints themselves are re-attached to the smoothed center with
//! their original offsets, so mouth shape is never averaged away.

use std::ops::RangeInclusive;

use super::{OutputSequence, SynthConfig};
use crate::posedict::{Keypoint, KeypointFrame};

/// Face indices forming the mouth (outer + inner lips) in the 70-point
/// layout. The pupils (68, 69) are smoothed with the rest of the face.
pub const MOUTH_FACE_RANGE: RangeInclusive<usize> = 48..=67;

/// Triangular kernel row for a window of `2*half+1` frames: weights
/// half+1-|d| for offsets d in [-half, half].
fn kernel_weight(half: usize, offset: i64) -> f64 {
    (half as i64 + 1 - offset.abs()) as f64
}

/// Filters one scalar series with the normalized triangular kernel,
/// truncating and renormalizing the window at the sequence edges.
fn smooth_series(values: &[f64], half: usize) -> Vec<f64> {
    let n = values.len() as i64;
    (0..n)
        .map(|t| {
            let mut num = 0.0;
            let mut den = 0.0;
            for d in -(half as i64)..=half as i64 {
                let s = t + d;
                if s < 0 || s >= n {
                    continue;
                }
                let w = kernel_weight(half, d);
                num += w * values[s as usize];
                den += w;
            }
            num / den
        })
        .collect()
}

fn smooth_points_in_place(series: &mut [Vec<Keypoint>], half: usize) {
    for track in series.iter_mut() {
        let xs = smooth_series(&track.iter().map(|k| k.x).collect::<Vec<_>>(), half);
        let ys = smooth_series(&track.iter().map(|k| k.y).collect::<Vec<_>>(), half);
        let cs = smooth_series(&track.iter().map(|k| k.c).collect::<Vec<_>>(), half);
        for (k, ((x, y), c)) in track.iter_mut().zip(xs.into_iter().zip(ys).zip(cs)) {
            *k = Keypoint::new(x, y, c);
        }
    }
}

fn mouth_center(frame: &KeypointFrame) -> Keypoint {
    let count = MOUTH_FACE_RANGE.count() as f64;
    let mut x = 0.0;
    let mut y = 0.0;
    let mut c = 0.0;
    for i in MOUTH_FACE_RANGE {
        x += frame.face[i].x;
        y += frame.face[i].y;
        c += frame.face[i].c;
    }
    Keypoint::new(x / count, y / count, c / count)
}

/// Smooths a sequence with the configured window. Frame tags and fps are
/// preserved; a constant sequence is a fixed point of this operation.
pub fn smooth_sequence(seq: &OutputSequence, cfg: &SynthConfig) -> OutputSequence {
    assert!(
        cfg.smooth_window % 2 == 1 && cfg.smooth_window >= 1,
        "smooth window must be odd"
    );
    let n = seq.frames.len();
    if n == 0 {
        return seq.clone();
    }
    let half = cfg.smooth_window / 2;

    // per-frame mouth centers and per-point offsets from the center
    let centers: Vec<Keypoint> = seq.frames.iter().map(mouth_center).collect();
    let offsets: Vec<Vec<Keypoint>> = seq
        .frames
        .iter()
        .zip(&centers)
        .map(|(frame, m)| {
            MOUTH_FACE_RANGE
                .map(|i| {
                    let p = frame.face[i];
                    Keypoint::new(p.x - m.x, p.y - m.y, p.c - m.c)
                })
                .collect()
        })
        .collect();

    // time-major series for every smoothed trajectory
    let mut body_tracks: Vec<Vec<Keypoint>> = (0..seq.frames[0].body.len())
        .map(|i| seq.frames.iter().map(|f| f.body[i]).collect())
        .collect();
    let non_mouth: Vec<usize> = (0..seq.frames[0].face.len())
        .filter(|i| !MOUTH_FACE_RANGE.contains(i))
        .collect();
    let mut face_tracks: Vec<Vec<Keypoint>> = non_mouth
        .iter()
        .map(|&i| seq.frames.iter().map(|f| f.face[i]).collect())
        .collect();
    let mut center_track = vec![centers];

    smooth_points_in_place(&mut body_tracks, half);
    smooth_points_in_place(&mut face_tracks, half);
    smooth_points_in_place(&mut center_track, half);
    let smoothed_centers = center_track.into_iter().next().expect("one center track");

    let frames: Vec<KeypointFrame> = (0..n)
        .map(|t| {
            let mut frame = seq.frames[t].clone();
            for (i, track) in body_tracks.iter().enumerate() {
                frame.body[i] = track[t];
            }
            for (slot, &i) in non_mouth.iter().enumerate() {
                frame.face[i] = face_tracks[slot][t];
            }
            let m = smoothed_centers[t];
            for (slot, i) in MOUTH_FACE_RANGE.enumerate() {
                let o = offsets[t][slot];
                frame.face[i] = Keypoint::new(m.x + o.x, m.y + o.y, m.c + o.c);
            }
            frame
        })
        .collect();

    OutputSequence {
        fps: seq.fps,
        frames,
        tags: seq.tags.clone(),
    }
}

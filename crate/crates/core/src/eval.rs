//! Numeric proxies for output quality: motion jitter, key-pose timing
//! error, and dictionary coverage of the utterance.

use serde::Serialize;

use crate::alignment::FrameTimeline;
use crate::synth::{KeyPoseEvent, OutputSequence};

/// Evaluation summary for one synthesized sequence.
///
/// `jitter` is the maximum per-keypoint displacement between adjacent
/// frames, in pixels. `timing_errors` holds, per kept key pose,
/// |key-pose center - phoneme mid frame| in frames. `coverage` is the
/// fraction of kept key poses resolved without a stress fallback.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub jitter: f64,
    pub timing_errors: Vec<f64>,
    pub coverage: f64,
}

pub fn eval_metrics(
    seq: &OutputSequence,
    timeline: &FrameTimeline,
    kept: &[KeyPoseEvent],
) -> EvalReport {
    let jitter = seq
        .frames
        .windows(2)
        .map(|pair| {
            pair[0]
                .points()
                .zip(pair[1].points())
                .map(|(a, b)| ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt())
                .fold(0.0f64, f64::max)
        })
        .fold(0.0f64, f64::max);

    let timing_errors = kept
        .iter()
        .map(|event| {
            let mid = timeline.events[event.source_event].mid_frame;
            (event.center_frame as f64 - mid as f64).abs()
        })
        .collect();

    let coverage = if kept.is_empty() {
        1.0
    } else {
        kept.iter().filter(|e| !e.fallback).count() as f64 / kept.len() as f64
    };

    EvalReport {
        jitter,
        timing_errors,
        coverage,
    }
}

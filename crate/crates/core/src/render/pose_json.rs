//! Pose-sequence JSON: the hand-off document for a downstream renderer.
//!
//! Schema: `{"fps": f, "frames": [{"body": [75 numbers], "face": [210
//! numbers], "tag": "Copied"|"Interpolated"|"Held"}]}`. Coordinates are
//! flat x,y,c triples in point order. Serialization uses shortest
//! round-trip decimals, so parse(export(seq)) restores the sequence
//! exactly.

use serde::{Deserialize, Serialize};

use super::RenderError;
use crate::posedict::{Keypoint, KeypointFrame, BODY_POINT_COUNT, FACE_POINT_COUNT};
use crate::synth::{FrameTag, OutputSequence};

#[derive(Debug, Serialize, Deserialize)]
struct PoseDoc {
    fps: f64,
    frames: Vec<PoseDocFrame>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PoseDocFrame {
    body: Vec<f64>,
    face: Vec<f64>,
    tag: FrameTag,
}

fn flatten(points: &[Keypoint]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.y, p.c]).collect()
}

fn unflatten(values: &[f64], expected: usize, field: &str) -> Result<Vec<Keypoint>, RenderError> {
    if values.len() != expected * 3 {
        return Err(RenderError::Document(format!(
            "{field}: expected {} values, got {}",
            expected * 3,
            values.len()
        )));
    }
    Ok(values
        .chunks_exact(3)
        .map(|t| Keypoint::new(t[0], t[1], t[2]))
        .collect())
}

pub fn export_pose_json(seq: &OutputSequence) -> String {
    let doc = PoseDoc {
        fps: seq.fps,
        frames: seq
            .frames
            .iter()
            .zip(&seq.tags)
            .map(|(frame, tag)| PoseDocFrame {
                body: flatten(&frame.body),
                face: flatten(&frame.face),
                tag: *tag,
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("pose doc serializes")
}

pub fn parse_pose_json(text: &str) -> Result<OutputSequence, RenderError> {
    let doc: PoseDoc =
        serde_json::from_str(text).map_err(|e| RenderError::Document(e.to_string()))?;
    let mut frames = Vec::with_capacity(doc.frames.len());
    let mut tags = Vec::with_capacity(doc.frames.len());
    for (i, f) in doc.frames.iter().enumerate() {
        let body = unflatten(&f.body, BODY_POINT_COUNT, &format!("frames[{i}].body"))?;
        let face = unflatten(&f.face, FACE_POINT_COUNT, &format!("frames[{i}].face"))?;
        frames.push(KeypointFrame { body, face });
        tags.push(f.tag);
    }
    Ok(OutputSequence {
        fps: doc.fps,
        frames,
        tags,
    })
}

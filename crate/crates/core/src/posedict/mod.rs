//! The phoneme-pose dictionary: per-frame 2D keypoints ingested from
//! OpenPose output, fixed-width pose snippets extracted around each
//! phoneme's midpoint frame, and stress-aware lookup.

mod openpose;

pub use openpose::{
    load_openpose_dir, parse_openpose_frame, serialize_openpose_frame, OpenposeFrame,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{to_frame_timeline, AlignmentTrack};
use crate::lexicon::{PhoneUnit, Stress};

/// BODY_25 layout size.
pub const BODY_POINT_COUNT: usize = 25;
/// 70-point face layout size (68 landmarks + 2 pupils).
pub const FACE_POINT_COUNT: usize = 70;

#[derive(Debug, Error)]
pub enum PoseDictError {
    #[error("no person detected")]
    NoPerson,
    #[error("keypoint format: {0}")]
    Format(String),
    #[error("snippet width {0} must be odd and >= 1")]
    InvalidWidth(usize),
    #[error("clip {clip_id:?}: {message}")]
    ClipMismatch { clip_id: String, message: String },
    #[error("no pose snippet for phone unit {0}")]
    MissingPhone(PhoneUnit),
    #[error("training corpus contains no usable silence occurrence")]
    NoSilence,
    #[error("dictionary document: {0}")]
    Document(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// One 2D keypoint with detection confidence; c = 0 marks a missing point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, f64)", into = "(f64, f64, f64)")]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

impl Keypoint {
    pub fn new(x: f64, y: f64, c: f64) -> Self {
        Keypoint { x, y, c }
    }

    pub fn is_missing(&self) -> bool {
        self.c == 0.0
    }
}

impl From<(f64, f64, f64)> for Keypoint {
    fn from((x, y, c): (f64, f64, f64)) -> Self {
        Keypoint { x, y, c }
    }
}

impl From<Keypoint> for (f64, f64, f64) {
    fn from(k: Keypoint) -> Self {
        (k.x, k.y, k.c)
    }
}

/// One frame of body and face keypoints: exactly 25 body and 70 face points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeypointFrame {
    pub body: Vec<Keypoint>,
    pub face: Vec<Keypoint>,
}

impl KeypointFrame {
    pub fn new(body: Vec<Keypoint>, face: Vec<Keypoint>) -> Result<Self, PoseDictError> {
        if body.len() != BODY_POINT_COUNT {
            return Err(PoseDictError::Format(format!(
                "expected {BODY_POINT_COUNT} body points, got {}",
                body.len()
            )));
        }
        if face.len() != FACE_POINT_COUNT {
            return Err(PoseDictError::Format(format!(
                "expected {FACE_POINT_COUNT} face points, got {}",
                face.len()
            )));
        }
        Ok(KeypointFrame { body, face })
    }

    /// All-zero frame: every point missing.
    pub fn zeros() -> Self {
        KeypointFrame {
            body: vec![Keypoint::new(0.0, 0.0, 0.0); BODY_POINT_COUNT],
            face: vec![Keypoint::new(0.0, 0.0, 0.0); FACE_POINT_COUNT],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = &Keypoint> {
        self.body.iter().chain(self.face.iter())
    }

    /// Mean confidence over all 95 points.
    pub fn mean_confidence(&self) -> f64 {
        let total: f64 = self.points().map(|p| p.c).sum();
        total / (BODY_POINT_COUNT + FACE_POINT_COUNT) as f64
    }
}

/// An ordered run of keypoint frames at a fixed frame rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseSequence {
    pub fps: f64,
    pub frames: Vec<KeypointFrame>,
}

impl PoseSequence {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Where a stored snippet came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnippetProvenance {
    pub clip_id: String,
    pub center_frame: usize,
    pub mean_confidence: f64,
}

/// Map from phone unit to a fixed-width pose snippet centered on the
/// phoneme midpoint. Always holds a Silence snippet after a successful
/// build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhonemePoseDictionary {
    pub width: usize,
    pub fps: f64,
    pub snippets: BTreeMap<PhoneUnit, PoseSequence>,
    pub provenance: BTreeMap<PhoneUnit, SnippetProvenance>,
}

impl PhonemePoseDictionary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dictionary serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PoseDictError> {
        let dict: PhonemePoseDictionary =
            serde_json::from_str(text).map_err(|e| PoseDictError::Document(e.to_string()))?;
        dict.validate()?;
        Ok(dict)
    }

    pub fn validate(&self) -> Result<(), PoseDictError> {
        if self.width.is_multiple_of(2) || self.width == 0 {
            return Err(PoseDictError::InvalidWidth(self.width));
        }
        for (unit, snippet) in &self.snippets {
            if snippet.frames.len() != self.width {
                return Err(PoseDictError::Document(format!(
                    "snippet for {unit} has {} frames, expected {}",
                    snippet.frames.len(),
                    self.width
                )));
            }
            for frame in &snippet.frames {
                if frame.body.len() != BODY_POINT_COUNT || frame.face.len() != FACE_POINT_COUNT {
                    return Err(PoseDictError::Document(format!(
                        "snippet for {unit} has malformed point counts"
                    )));
                }
            }
        }
        if !self.snippets.is_empty() && !self.snippets.contains_key(&PhoneUnit::Silence) {
            return Err(PoseDictError::Document(
                "dictionary has no Silence snippet".into(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, unit: &PhoneUnit) -> bool {
        self.snippets.contains_key(unit)
    }
}

/// One training clip: keypoints plus the matching forced alignment.
#[derive(Debug, Clone)]
pub struct TrainingClip {
    pub id: String,
    pub poses: PoseSequence,
    pub alignment: AlignmentTrack,
}

struct Candidate {
    clip_id: String,
    center: usize,
    duration: f64,
    mean_confidence: f64,
    frames: Vec<KeypointFrame>,
}

impl Candidate {
    /// True when `self` wins over `other` for a phoneme slot: higher mean
    /// confidence, ties broken by earliest clip id then earliest center.
    fn beats(&self, other: &Candidate) -> bool {
        if self.mean_confidence != other.mean_confidence {
            return self.mean_confidence > other.mean_confidence;
        }
        if self.clip_id != other.clip_id {
            return self.clip_id < other.clip_id;
        }
        self.center < other.center
    }

    /// Silence slots prefer the longest source interval before confidence.
    fn beats_for_silence(&self, other: &Candidate) -> bool {
        if self.duration != other.duration {
            return self.duration > other.duration;
        }
        self.beats(other)
    }
}

/// Extracts `width`-frame snippets centered on each phoneme occurrence's
/// midpoint frame and keeps, per unit, the occurrence with the highest
/// mean keypoint confidence. Occurrences whose window would cross a clip
/// boundary are skipped. Silence prefers the longest silence interval.
pub fn build_dictionary(
    clips: &[TrainingClip],
    width: usize,
    fps: f64,
) -> Result<PhonemePoseDictionary, PoseDictError> {
    if width.is_multiple_of(2) || width == 0 {
        return Err(PoseDictError::InvalidWidth(width));
    }
    let half = width / 2;

    let mut best: BTreeMap<PhoneUnit, Candidate> = BTreeMap::new();
    for clip in clips {
        clip.alignment
            .validate()
            .map_err(|e| PoseDictError::ClipMismatch {
                clip_id: clip.id.clone(),
                message: e.to_string(),
            })?;
        if (clip.poses.fps - fps).abs() > 1e-9 {
            return Err(PoseDictError::ClipMismatch {
                clip_id: clip.id.clone(),
                message: format!("clip fps {} does not match requested {fps}", clip.poses.fps),
            });
        }
        let clip_frames = clip.poses.len();
        if clip.alignment.total_duration > clip_frames as f64 / fps + 1e-9 {
            return Err(PoseDictError::ClipMismatch {
                clip_id: clip.id.clone(),
                message: format!(
                    "alignment duration {}s exceeds clip duration {}s",
                    clip.alignment.total_duration,
                    clip_frames as f64 / fps
                ),
            });
        }

        let timeline = to_frame_timeline(&clip.alignment, fps);
        for (event, interval) in timeline.events.iter().zip(&clip.alignment.intervals) {
            let center = event.mid_frame;
            if center < half || center + half >= clip_frames {
                continue; // window would cross the clip boundary
            }
            let frames = clip.poses.frames[center - half..=center + half].to_vec();
            let mean_confidence =
                frames.iter().map(|f| f.mean_confidence()).sum::<f64>() / frames.len() as f64;
            let candidate = Candidate {
                clip_id: clip.id.clone(),
                center,
                duration: interval.end - interval.start,
                mean_confidence,
                frames,
            };
            let unit = event.phone.clone();
            let silence = unit.is_silence();
            match best.get(&unit) {
                Some(current) => {
                    let wins = if silence {
                        candidate.beats_for_silence(current)
                    } else {
                        candidate.beats(current)
                    };
                    if wins {
                        best.insert(unit, candidate);
                    }
                }
                None => {
                    best.insert(unit, candidate);
                }
            }
        }
    }

    if !best.contains_key(&PhoneUnit::Silence) {
        return Err(PoseDictError::NoSilence);
    }

    let mut snippets = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for (unit, cand) in best {
        provenance.insert(
            unit.clone(),
            SnippetProvenance {
                clip_id: cand.clip_id,
                center_frame: cand.center,
                mean_confidence: cand.mean_confidence,
            },
        );
        snippets.insert(
            unit,
            PoseSequence {
                fps,
                frames: cand.frames,
            },
        );
    }

    Ok(PhonemePoseDictionary {
        width,
        fps,
        snippets,
        provenance,
    })
}

/// A resolved lookup; `fallback` is set when a vowel resolved through a
/// different stress variant than requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnippetRef<'a> {
    pub snippet: &'a PoseSequence,
    pub resolved: &'a PhoneUnit,
    pub fallback: bool,
}

/// Exact-match lookup with stress fallback for vowels: a missing stress
/// variant resolves through priority primary -> secondary -> unstressed.
pub fn lookup<'a>(
    dict: &'a PhonemePoseDictionary,
    phone: &PhoneUnit,
) -> Result<SnippetRef<'a>, PoseDictError> {
    if let Some((resolved, snippet)) = dict.snippets.get_key_value(phone) {
        return Ok(SnippetRef {
            snippet,
            resolved,
            fallback: false,
        });
    }
    if phone.is_vowel() {
        for stress in [Stress::Primary, Stress::Secondary, Stress::Unstressed] {
            if Some(stress) == phone.stress() {
                continue;
            }
            let variant = phone.with_stress(stress).expect("vowel carries stress");
            if let Some((resolved, snippet)) = dict.snippets.get_key_value(&variant) {
                return Ok(SnippetRef {
                    snippet,
                    resolved,
                    fallback: true,
                });
            }
        }
    }
    Err(PoseDictError::MissingPhone(phone.clone()))
}

/// Presence of each inventory unit in the dictionary, matched on kind and
/// symbol (stress variants of a vowel count as the same base phone).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub present: Vec<PhoneUnit>,
    pub missing: Vec<PhoneUnit>,
    pub coverage: f64,
}

pub fn coverage_report(dict: &PhonemePoseDictionary, inventory: &[PhoneUnit]) -> CoverageReport {
    let mut present = Vec::new();
    let mut missing = Vec::new();
    for unit in inventory {
        if dict.snippets.keys().any(|k| k.same_base(unit)) {
            present.push(unit.clone());
        } else {
            missing.push(unit.clone());
        }
    }
    let coverage = if inventory.is_empty() {
        1.0
    } else {
        present.len() as f64 / inventory.len() as f64
    };
    CoverageReport {
        present,
        missing,
        coverage,
    }
}

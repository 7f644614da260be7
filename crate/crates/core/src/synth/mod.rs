//! Pose-sequence synthesis: place dictionary snippets at phoneme
//! timestamps, drop key poses that crowd each other, fill the gaps by
//! inverse-distance interpolation, and smooth with the mouth-anchored
//! sliding window.

mod smooth;

pub use smooth::{smooth_sequence, MOUTH_FACE_RANGE};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{
    synthesize_durations, to_frame_timeline, AlignmentError, AlignmentTrack, DurationModel,
    FrameTimeline,
};
use crate::lexicon::{
    normalize_text, pinyin_to_units, transcribe, LexiconError, PhoneUnit, PronouncingDictionary,
};
use crate::posedict::{lookup, Keypoint, KeypointFrame, PhonemePoseDictionary, PoseDictError};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("config: {0}")]
    Config(String),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("lexicon: English text requires a pronouncing dictionary")]
    MissingLexicon,
    #[error("alignment: {0}")]
    Alignment(#[from] AlignmentError),
    #[error("pose dictionary: {0}")]
    PoseDict(#[from] PoseDictError),
    #[error("placement: dictionary width {dict} does not match configured pose width {cfg}")]
    WidthMismatch { dict: usize, cfg: usize },
    #[error("placement: dictionary fps {dict} does not match configured fps {cfg}")]
    FpsMismatch { dict: f64, cfg: f64 },
    #[error("interpolation: blocks at frames {0} and {1} overlap")]
    OverlappingBlocks(usize, usize),
    #[error("interpolation: block ending at frame {0} extends past the output range")]
    BlockOutOfRange(usize),
}

fn default_pose_width() -> usize {
    7
}
fn default_min_key_pose_distance() -> usize {
    4
}
fn default_smooth_window() -> usize {
    9
}
fn default_fps() -> f64 {
    25.0
}

/// Synthesis knobs. The defaults are the production settings: pose width
/// 7, minimum key pose distance 4, smooth window 9, 25 fps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    #[serde(default = "default_pose_width")]
    pub pose_width: usize,
    #[serde(default = "default_min_key_pose_distance")]
    pub min_key_pose_distance: usize,
    #[serde(default = "default_smooth_window")]
    pub smooth_window: usize,
    #[serde(default = "default_fps")]
    pub fps: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            pose_width: default_pose_width(),
            min_key_pose_distance: default_min_key_pose_distance(),
            smooth_window: default_smooth_window(),
            fps: default_fps(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.pose_width == 0 || self.pose_width.is_multiple_of(2) {
            return Err(SynthError::Config(format!(
                "pose_width {} must be odd and >= 1",
                self.pose_width
            )));
        }
        if self.smooth_window == 0 || self.smooth_window.is_multiple_of(2) {
            return Err(SynthError::Config(format!(
                "smooth_window {} must be odd and >= 1",
                self.smooth_window
            )));
        }
        if !self.fps.is_finite() || self.fps <= 0.0 {
            return Err(SynthError::Config(format!(
                "fps {} must be positive",
                self.fps
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SynthError> {
        let cfg: SynthConfig =
            serde_json::from_str(text).map_err(|e| SynthError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A dictionary snippet placed on the output timeline. `frames` holds the
/// (possibly edge-trimmed) snippet window covering start..=end, centered
/// on the phoneme's midpoint frame.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPoseEvent {
    pub phone: PhoneUnit,
    pub center_frame: usize,
    pub start_frame: usize,
    pub end_frame: usize,
    pub frames: Vec<KeypointFrame>,
    /// Set when the snippet resolved through a stress fallback.
    pub fallback: bool,
    /// Index of the originating timeline event.
    pub source_event: usize,
}

/// Provenance tag for each output frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameTag {
    Copied,
    Interpolated,
    Held,
}

/// The synthesized pose sequence with per-frame provenance tags.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSequence {
    pub fps: f64,
    pub frames: Vec<KeypointFrame>,
    pub tags: Vec<FrameTag>,
}

impl OutputSequence {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Centers one key pose block per timeline event on the event's midpoint
/// frame. Blocks reaching past [0, N-1] are trimmed; Silence events use
/// the Silence snippet. Missing phones propagate the lookup error.
pub fn place_key_poses(
    timeline: &FrameTimeline,
    dict: &PhonemePoseDictionary,
    cfg: &SynthConfig,
) -> Result<Vec<KeyPoseEvent>, SynthError> {
    if dict.width != cfg.pose_width {
        return Err(SynthError::WidthMismatch {
            dict: dict.width,
            cfg: cfg.pose_width,
        });
    }
    if (dict.fps - cfg.fps).abs() > 1e-9 {
        return Err(SynthError::FpsMismatch {
            dict: dict.fps,
            cfg: cfg.fps,
        });
    }

    let n = timeline.total_frames;
    let half = cfg.pose_width as i64 / 2;
    let mut events = Vec::with_capacity(timeline.events.len());
    for (idx, tl_event) in timeline.events.iter().enumerate() {
        let resolved = lookup(dict, &tl_event.phone)?;
        let center = tl_event.mid_frame as i64;
        let lo = center - half; // snippet frame 0 maps here
        let start = lo.max(0);
        let end = (center + half).min(n as i64 - 1);
        if start > end {
            continue; // block fully outside the output range
        }
        let frames = resolved.snippet.frames[(start - lo) as usize..=(end - lo) as usize].to_vec();
        events.push(KeyPoseEvent {
            phone: tl_event.phone.clone(),
            center_frame: tl_event.mid_frame,
            start_frame: start as usize,
            end_frame: end as usize,
            frames,
            fallback: resolved.fallback,
            source_event: idx,
        });
    }
    events.sort_by_key(|e| e.center_frame);
    Ok(events)
}

/// Greedy minimum-distance scan: the first event is always kept; a
/// following event survives only if the count of empty frames between the
/// last kept block and it is at least `min_dist`, otherwise it is skipped
/// and the kept block is compared against the next event.
pub fn select_key_poses(events: Vec<KeyPoseEvent>, min_dist: usize) -> Vec<KeyPoseEvent> {
    let mut kept: Vec<KeyPoseEvent> = Vec::with_capacity(events.len());
    for event in events {
        match kept.last() {
            None => kept.push(event),
            Some(prev) => {
                let gap = event.start_frame as i64 - prev.end_frame as i64 - 1;
                if gap >= min_dist as i64 {
                    kept.push(event);
                }
            }
        }
    }
    kept
}

/// Blends two poses with the stated weights, coordinate-wise over every
/// keypoint including the confidence channel.
fn blend_frames(
    p: &KeypointFrame,
    q: &KeypointFrame,
    b_minus_f: f64,
    f_minus_a: f64,
    b_minus_a: f64,
) -> KeypointFrame {
    let blend = |pk: &Keypoint, qk: &Keypoint| Keypoint {
        x: (b_minus_f * pk.x + f_minus_a * qk.x) / b_minus_a,
        y: (b_minus_f * pk.y + f_minus_a * qk.y) / b_minus_a,
        c: (b_minus_f * pk.c + f_minus_a * qk.c) / b_minus_a,
    };
    KeypointFrame {
        body: p
            .body
            .iter()
            .zip(&q.body)
            .map(|(a, b)| blend(a, b))
            .collect(),
        face: p
            .face
            .iter()
            .zip(&q.face)
            .map(|(a, b)| blend(a, b))
            .collect(),
    }
}

/// Copies selected blocks verbatim, fills each gap with inverse-distance
/// weighted blends of the flanking key frames, and holds the nearest block
/// edge before the first and after the last block.
pub fn interpolate_gaps(
    events: &[KeyPoseEvent],
    total_frames: usize,
    fps: f64,
) -> Result<OutputSequence, SynthError> {
    for pair in events.windows(2) {
        if pair[1].start_frame <= pair[0].end_frame {
            return Err(SynthError::OverlappingBlocks(
                pair[0].end_frame,
                pair[1].start_frame,
            ));
        }
    }
    if let Some(last) = events.last() {
        if last.end_frame >= total_frames {
            return Err(SynthError::BlockOutOfRange(last.end_frame));
        }
    }

    // neutral all-missing pose; only used when no block survived placement
    let mut frames = vec![KeypointFrame::zeros(); total_frames];
    let mut tags = vec![FrameTag::Held; total_frames];

    for event in events {
        for (offset, frame) in event.frames.iter().enumerate() {
            let f = event.start_frame + offset;
            frames[f] = frame.clone();
            tags[f] = FrameTag::Copied;
        }
    }

    if let Some(first) = events.first() {
        let lead = first.frames.first().expect("blocks are non-empty");
        for frame in &mut frames[..first.start_frame] {
            *frame = lead.clone();
        }
    }
    if let Some(last) = events.last() {
        let tail = last.frames.last().expect("blocks are non-empty");
        for frame in &mut frames[last.end_frame + 1..] {
            *frame = tail.clone();
        }
    }

    for pair in events.windows(2) {
        let a = pair[0].end_frame;
        let b = pair[1].start_frame;
        let p = pair[0].frames.last().expect("blocks are non-empty");
        let q = pair[1].frames.first().expect("blocks are non-empty");
        let b_minus_a = (b - a) as f64;
        for f in a + 1..b {
            frames[f] = blend_frames(p, q, (b - f) as f64, (f - a) as f64, b_minus_a);
            tags[f] = FrameTag::Interpolated;
        }
    }

    Ok(OutputSequence { fps, frames, tags })
}

/// Where the phone timing came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingSource {
    Alignment,
    ModelBased,
}

/// Input utterance: English text (needs a pronouncing dictionary) or
/// whitespace-separated pinyin syllables.
#[derive(Debug, Clone, Copy)]
pub enum SynthInput<'a> {
    EnglishText(&'a str),
    Pinyin(&'a str),
}

/// Full synthesis output: the smoothed sequence plus the intermediate
/// artifacts needed for evaluation and reporting.
#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub sequence: OutputSequence,
    pub timeline: FrameTimeline,
    pub kept_events: Vec<KeyPoseEvent>,
    pub timing_source: TimingSource,
    /// Characters dropped during text normalization (English input only).
    pub dropped_chars: usize,
}

/// End-to-end pipeline: text front end, timing (from the given alignment
/// or the fallback duration model), placement, selection, interpolation,
/// and smoothing. Output length is round(total_duration * fps).
pub fn synthesize(
    input: SynthInput<'_>,
    lexicon: Option<&PronouncingDictionary>,
    dict: &PhonemePoseDictionary,
    alignment: Option<&AlignmentTrack>,
    cfg: &SynthConfig,
) -> Result<SynthesisResult, SynthError> {
    cfg.validate()?;

    let mut dropped_chars = 0usize;
    let (track, timing_source) = match alignment {
        Some(track) => {
            track.validate()?;
            (track.clone(), TimingSource::Alignment)
        }
        None => {
            let mut phones = match input {
                SynthInput::EnglishText(text) => {
                    let lexicon = lexicon.ok_or(SynthError::MissingLexicon)?;
                    let normalized = normalize_text(text);
                    dropped_chars = normalized.dropped_chars;
                    transcribe(&normalized.tokens, lexicon)?
                }
                SynthInput::Pinyin(text) => pinyin_to_units(text)?,
            };
            if phones.is_empty() {
                // an empty utterance still renders a held neutral pause
                phones.push(PhoneUnit::Silence);
            }
            let track = synthesize_durations(&phones, 1.0, &DurationModel::default());
            (track, TimingSource::ModelBased)
        }
    };

    let timeline = to_frame_timeline(&track, cfg.fps);
    let placed = place_key_poses(&timeline, dict, cfg)?;
    let kept_events = select_key_poses(placed, cfg.min_key_pose_distance);
    let raw = interpolate_gaps(&kept_events, timeline.total_frames, cfg.fps)?;
    let sequence = smooth_sequence(&raw, cfg);

    Ok(SynthesisResult {
        sequence,
        timeline,
        kept_events,
        timing_source,
        dropped_chars,
    })
}

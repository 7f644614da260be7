//! Per-phoneme timing: forced-alignment ingestion, a rule-based duration
//! fallback, and conversion to frame-indexed timelines.

mod json;
mod textgrid;

pub use json::{parse_alignment_json, serialize_alignment_json};
pub use textgrid::{parse_textgrid, serialize_textgrid};

use thiserror::Error;

use crate::lexicon::PhoneUnit;

#[derive(Debug, Error)]
pub enum AlignmentError {
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("no interval tier named {0:?}")]
    MissingTier(String),
    #[error("interval {index}: {message}")]
    InvalidInterval { index: usize, message: String },
    #[error("short TextGrid format is not supported; re-export as long format")]
    ShortFormat,
}

impl AlignmentError {
    fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        AlignmentError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// One time-stamped phone occurrence, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct PhoneInterval {
    pub phone: PhoneUnit,
    pub start: f64,
    pub end: f64,
}

/// Time-stamped phone intervals for one utterance. Intervals are sorted,
/// non-overlapping, and may leave gaps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlignmentTrack {
    pub intervals: Vec<PhoneInterval>,
    pub total_duration: f64,
}

impl AlignmentTrack {
    /// Validates ordering, overlap, and duration invariants.
    pub fn validate(&self) -> Result<(), AlignmentError> {
        let mut prev_end = 0.0f64;
        for (i, interval) in self.intervals.iter().enumerate() {
            if !interval.start.is_finite() || !interval.end.is_finite() {
                return Err(AlignmentError::InvalidInterval {
                    index: i,
                    message: "non-finite bound".into(),
                });
            }
            if interval.end <= interval.start {
                return Err(AlignmentError::InvalidInterval {
                    index: i,
                    message: format!("xmax<xmin ({} <= {})", interval.end, interval.start),
                });
            }
            if interval.start < 0.0 {
                return Err(AlignmentError::InvalidInterval {
                    index: i,
                    message: "negative start".into(),
                });
            }
            if interval.start < prev_end {
                return Err(AlignmentError::InvalidInterval {
                    index: i,
                    message: "intervals overlap or are unsorted".into(),
                });
            }
            prev_end = interval.end;
        }
        if let Some(last) = self.intervals.last() {
            if last.end > self.total_duration + 1e-9 {
                return Err(AlignmentError::InvalidInterval {
                    index: self.intervals.len() - 1,
                    message: format!(
                        "interval end {} exceeds track duration {}",
                        last.end, self.total_duration
                    ),
                });
            }
        }
        Ok(())
    }
}

/// One phone occurrence mapped onto output frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimelineEvent {
    pub phone: PhoneUnit,
    pub start_frame: usize,
    pub end_frame: usize,
    pub mid_frame: usize,
}

/// Frame-indexed view of an alignment track at a fixed frame rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTimeline {
    pub fps: f64,
    pub total_frames: usize,
    pub events: Vec<TimelineEvent>,
}

/// Per-class base durations for the fallback duration model, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationModel {
    pub vowel: f64,
    pub consonant: f64,
    pub silence: f64,
}

impl Default for DurationModel {
    fn default() -> Self {
        DurationModel {
            vowel: 0.120,
            consonant: 0.070,
            silence: 0.200,
        }
    }
}

impl DurationModel {
    fn base_duration(&self, phone: &PhoneUnit) -> f64 {
        match phone {
            PhoneUnit::Silence => self.silence,
            PhoneUnit::PinyinFinal { .. } => self.vowel,
            PhoneUnit::PinyinInitial { .. } => self.consonant,
            p if p.is_vowel() => self.vowel,
            _ => self.consonant,
        }
    }
}

/// Builds contiguous intervals from t=0 using per-class base durations
/// divided by `speaking_rate`.
pub fn synthesize_durations(
    phones: &[PhoneUnit],
    speaking_rate: f64,
    model: &DurationModel,
) -> AlignmentTrack {
    assert!(speaking_rate > 0.0, "speaking_rate must be positive");
    let mut intervals = Vec::with_capacity(phones.len());
    let mut t = 0.0f64;
    for phone in phones {
        let d = model.base_duration(phone) / speaking_rate;
        intervals.push(PhoneInterval {
            phone: phone.clone(),
            start: t,
            end: t + d,
        });
        t += d;
    }
    AlignmentTrack {
        intervals,
        total_duration: t,
    }
}

/// Rounds half-up; inputs are non-negative frame positions.
pub(crate) fn round_half_up(x: f64) -> usize {
    debug_assert!(x >= -0.5);
    (x + 0.5).floor().max(0.0) as usize
}

/// Maps interval times to frame indices: start = floor(start*fps),
/// end = ceil(end*fps) - 1 (never below start), mid = round-half-up of the
/// interval midpoint, clamped into [start, end].
pub fn to_frame_timeline(track: &AlignmentTrack, fps: f64) -> FrameTimeline {
    assert!(fps > 0.0, "fps must be positive");
    let total_frames = round_half_up(track.total_duration * fps);
    let events = track
        .intervals
        .iter()
        .map(|iv| {
            let start_frame = (iv.start * fps).floor() as usize;
            let end_frame = ((iv.end * fps).ceil() as usize)
                .saturating_sub(1)
                .max(start_frame);
            let mid_frame =
                round_half_up((iv.start + iv.end) / 2.0 * fps).clamp(start_frame, end_frame);
            TimelineEvent {
                phone: iv.phone.clone(),
                start_frame,
                end_frame,
                mid_frame,
            }
        })
        .collect();
    FrameTimeline {
        fps,
        total_frames,
        events,
    }
}

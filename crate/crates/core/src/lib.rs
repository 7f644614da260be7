//! Text-to-pose-sequence pipeline for talking-head animation.
//!
//! The pipeline turns input text (English or Mandarin pinyin) plus phoneme
//! timing into a smooth sequence of 2D keypoint frames:
//!
//! 1. [`lexicon`]: text normalization, pronouncing-dictionary lookup, and
//!    pinyin initial/final segmentation.
//! 2. [`alignment`]: per-phoneme timestamps, parsed from forced-alignment
//!    files or synthesized from a duration model, mapped to frame indices.
//! 3. [`posedict`]: the phoneme-pose dictionary: fixed-width keypoint
//!    snippets extracted around each phoneme's midpoint in training video.
//! 4. [`synth`]: key-pose placement, the minimum-distance skip rule,
//!    inverse-distance interpolation, and mouth-anchored smoothing.
//! 5. [`render`]: stick-figure rasterization, label maps, and pose JSON
//!    for a downstream neural renderer.
//! 6. [`eval`]: jitter/timing/coverage metrics over a synthesized sequence.

pub mod alignment;
pub mod eval;
pub mod lexicon;
pub mod posedict;
pub mod render;
pub mod synth;

pub use alignment::{AlignmentTrack, FrameTimeline, PhoneInterval, TimelineEvent};
pub use lexicon::{PhoneUnit, PronouncingDictionary, Stress, Token};
pub use posedict::{Keypoint, KeypointFrame, PhonemePoseDictionary, PoseSequence};
pub use synth::{OutputSequence, SynthConfig};

//! Shared synthetic fixtures: a deterministic keypoint "speaker", a
//! full-coverage English corpus, and a small CMU-format lexicon.

#![allow(dead_code)]

use std::fs;
use std::path::Path;

use posepipe_core::alignment::{AlignmentTrack, PhoneInterval};
use posepipe_core::lexicon::arpabet_inventory;
use posepipe_core::posedict::{
    build_dictionary, serialize_openpose_frame, Keypoint, KeypointFrame, PhonemePoseDictionary,
    PoseSequence, TrainingClip, BODY_POINT_COUNT, FACE_POINT_COUNT,
};

/// Deterministic keypoints for frame `f`: a slowly waving figure with a
/// plausible face layout so mouth anchoring has something to hold on to.
pub fn synthetic_frame(f: usize) -> KeypointFrame {
    let t = f as f64;
    let body = (0..BODY_POINT_COUNT)
        .map(|i| {
            let phase = i as f64 * 0.37;
            Keypoint::new(
                320.0 + 80.0 * (0.07 * t + phase).sin(),
                240.0 + 60.0 * (0.05 * t + phase).cos(),
                0.9,
            )
        })
        .collect();
    let face = (0..FACE_POINT_COUNT)
        .map(|i| {
            let phase = i as f64 * 0.11;
            // mouth points (48..=67) carry an extra opening oscillation
            let mouth_open = if (48..=67).contains(&i) {
                6.0 * (0.3 * t).sin()
            } else {
                0.0
            };
            Keypoint::new(
                320.0 + 25.0 * (0.02 * t + phase).sin(),
                300.0 + 15.0 * (0.03 * t + phase).cos() + mouth_open,
                0.9,
            )
        })
        .collect();
    KeypointFrame { body, face }
}

pub fn synthetic_poses(n_frames: usize, fps: f64) -> PoseSequence {
    PoseSequence {
        fps,
        frames: (0..n_frames).map(synthetic_frame).collect(),
    }
}

/// An alignment reading out `labels` one per 0.4 s with 0.5 s of leading
/// and trailing silence.
pub fn read_out_alignment(labels: &[String]) -> AlignmentTrack {
    let phone_len = 0.4;
    let pad = 0.5;
    // shared boundary values keep the intervals exactly contiguous
    let mut boundaries = vec![0.0, pad];
    for i in 0..labels.len() {
        boundaries.push(pad + (i + 1) as f64 * phone_len);
    }
    boundaries.push(*boundaries.last().unwrap() + pad);

    let mut names: Vec<String> = vec!["SIL".into()];
    names.extend(labels.iter().cloned());
    names.push("SIL".into());

    let intervals = names
        .iter()
        .zip(boundaries.windows(2))
        .map(|(label, b)| PhoneInterval {
            phone: label.parse().unwrap(),
            start: b[0],
            end: b[1],
        })
        .collect();
    AlignmentTrack {
        intervals,
        total_duration: *boundaries.last().unwrap(),
    }
}

/// One clip whose alignment reads out every unit of the 39-phone English
/// inventory (vowels at primary stress), padded with silence.
pub fn full_english_clip(fps: f64) -> TrainingClip {
    let labels: Vec<String> = arpabet_inventory().iter().map(|u| u.to_string()).collect();
    let alignment = read_out_alignment(&labels);
    let n_frames = (alignment.total_duration * fps).ceil() as usize + 1;
    TrainingClip {
        id: "corpus0".into(),
        poses: synthetic_poses(n_frames, fps),
        alignment,
    }
}

pub fn full_english_dict(width: usize, fps: f64) -> PhonemePoseDictionary {
    build_dictionary(&[full_english_clip(fps)], width, fps).expect("fixture corpus builds")
}

/// Writes a clip as one zero-padded OpenPose JSON file per frame.
pub fn write_openpose_dir(dir: &Path, poses: &PoseSequence) {
    fs::create_dir_all(dir).unwrap();
    for (i, frame) in poses.frames.iter().enumerate() {
        fs::write(
            dir.join(format!("frame_{i:09}_keypoints.json")),
            serialize_openpose_frame(frame),
        )
        .unwrap();
    }
}

/// A small CMU-format lexicon covering the test utterances.
pub fn fixture_lexicon() -> &'static str {
    concat!(
        ";;; fixture lexicon (CMU format)\n",
        "BROWN  B R AW1 N\n",
        "DOG  D AO1 G\n",
        "FIVE  F AY1 V\n",
        "FOX  F AA1 K S\n",
        "HELLO  HH AH0 L OW1\n",
        "JUMPS  JH AH1 M P S\n",
        "LAZY  L EY1 Z IY0\n",
        "ME  M IY1\n",
        "OVER  OW1 V ER0\n",
        "QUICK  K W IH1 K\n",
        "READ  R EH1 D\n",
        "READ(1)  R IY1 D\n",
        "SHE  SH IY1\n",
        "THE  DH AH0\n",
        "THE(1)  DH IY0\n",
        "TWENTY  T W EH1 N T IY0\n",
        "WORLD  W ER1 L D\n",
    )
}

pub const PANGRAM: &str = "The quick brown fox jumps over the lazy dog.";

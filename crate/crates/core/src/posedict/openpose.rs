//! OpenPose per-frame JSON ingestion: `{"people":[{"pose_keypoints_2d":
//! [75 floats],"face_keypoints_2d":[210 floats]}]}`, one file per frame,
//! ordered by zero-padded filename.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    Keypoint, KeypointFrame, PoseDictError, PoseSequence, BODY_POINT_COUNT, FACE_POINT_COUNT,
};

#[derive(Debug, Serialize, Deserialize)]
struct OpenposeDoc {
    people: Vec<OpenposePerson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OpenposePerson {
    pose_keypoints_2d: Vec<f64>,
    face_keypoints_2d: Vec<f64>,
}

/// One parsed frame. When several people are present the first is used;
/// `people_count` lets the caller log a warning.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenposeFrame {
    pub keypoints: KeypointFrame,
    pub people_count: usize,
}

impl OpenposeFrame {
    pub fn has_extra_people(&self) -> bool {
        self.people_count > 1
    }
}

pub fn parse_openpose_frame(text: &str) -> Result<OpenposeFrame, PoseDictError> {
    let doc: OpenposeDoc =
        serde_json::from_str(text).map_err(|e| PoseDictError::Format(e.to_string()))?;
    let people_count = doc.people.len();
    let person = doc
        .people
        .into_iter()
        .next()
        .ok_or(PoseDictError::NoPerson)?;
    let body = unpack_triples(
        &person.pose_keypoints_2d,
        BODY_POINT_COUNT,
        "pose_keypoints_2d",
    )?;
    let face = unpack_triples(
        &person.face_keypoints_2d,
        FACE_POINT_COUNT,
        "face_keypoints_2d",
    )?;
    Ok(OpenposeFrame {
        keypoints: KeypointFrame { body, face },
        people_count,
    })
}

fn unpack_triples(
    values: &[f64],
    expected_points: usize,
    field: &str,
) -> Result<Vec<Keypoint>, PoseDictError> {
    if values.len() != expected_points * 3 {
        return Err(PoseDictError::Format(format!(
            "{field}: expected {} values, got {}",
            expected_points * 3,
            values.len()
        )));
    }
    Ok(values
        .chunks_exact(3)
        .map(|t| Keypoint::new(t[0], t[1], t[2]))
        .collect())
}

/// Serializes a frame back into a single-person OpenPose document.
pub fn serialize_openpose_frame(frame: &KeypointFrame) -> String {
    let doc = OpenposeDoc {
        people: vec![OpenposePerson {
            pose_keypoints_2d: pack_triples(&frame.body),
            face_keypoints_2d: pack_triples(&frame.face),
        }],
    };
    serde_json::to_string(&doc).expect("openpose doc serializes")
}

fn pack_triples(points: &[Keypoint]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.y, p.c]).collect()
}

/// Reads every `*.json` file in a directory as one frame each, in
/// filename order, returning the clip plus the number of frames where
/// extra people were ignored.
pub fn load_openpose_dir(dir: &Path, fps: f64) -> Result<(PoseSequence, usize), PoseDictError> {
    let io_err = |source: std::io::Error| PoseDictError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();

    let mut frames = Vec::with_capacity(paths.len());
    let mut multi_person_frames = 0usize;
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|source| PoseDictError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let parsed = parse_openpose_frame(&text).map_err(|e| match e {
            PoseDictError::Format(msg) => {
                PoseDictError::Format(format!("{}: {msg}", path.display()))
            }
            other => other,
        })?;
        if parsed.has_extra_people() {
            multi_person_frames += 1;
        }
        frames.push(parsed.keypoints);
    }
    Ok((PoseSequence { fps, frames }, multi_person_frames))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros_doc() -> String {
        format!(
            r#"{{"people":[{{"pose_keypoints_2d":{:?},"face_keypoints_2d":{:?}}}]}}"#,
            vec![0.0; 75],
            vec![0.0; 210]
        )
    }

    #[test]
    fn all_zero_document_means_all_points_missing() {
        let parsed = parse_openpose_frame(&zeros_doc()).unwrap();
        assert_eq!(parsed.people_count, 1);
        assert!(parsed.keypoints.points().all(|p| p.is_missing()));
    }

    #[test]
    fn empty_people_is_an_error() {
        let err = parse_openpose_frame(r#"{"people":[]}"#).unwrap_err();
        assert_eq!(err.to_string(), "no person detected");
    }

    #[test]
    fn wrong_array_length_is_a_format_error() {
        let text = format!(
            r#"{{"people":[{{"pose_keypoints_2d":{:?},"face_keypoints_2d":{:?}}}]}}"#,
            vec![0.0; 74],
            vec![0.0; 210]
        );
        assert!(matches!(
            parse_openpose_frame(&text),
            Err(PoseDictError::Format(_))
        ));
    }

    #[test]
    fn first_person_wins_and_extras_are_counted() {
        let person = format!(
            r#"{{"pose_keypoints_2d":{:?},"face_keypoints_2d":{:?}}}"#,
            [[1.5, 2.5, 0.5]; 25].concat(),
            [[3.0, 4.0, 0.25]; 70].concat()
        );
        let other = format!(
            r#"{{"pose_keypoints_2d":{:?},"face_keypoints_2d":{:?}}}"#,
            vec![9.0; 75],
            vec![9.0; 210]
        );
        let text = format!(r#"{{"people":[{person},{other}]}}"#);
        let parsed = parse_openpose_frame(&text).unwrap();
        assert!(parsed.has_extra_people());
        assert_eq!(parsed.keypoints.body[0], Keypoint::new(1.5, 2.5, 0.5));
    }

    #[test]
    fn parse_serialize_identity() {
        let body: Vec<Keypoint> = (0..25)
            .map(|i| Keypoint::new(i as f64 * 1.25, 480.0 - i as f64, 0.5 + i as f64 / 100.0))
            .collect();
        let face: Vec<Keypoint> = (0..70)
            .map(|i| Keypoint::new(100.0 + i as f64 / 3.0, 200.0 + i as f64 / 7.0, 0.9))
            .collect();
        let frame = KeypointFrame::new(body, face).unwrap();
        let parsed = parse_openpose_frame(&serialize_openpose_frame(&frame)).unwrap();
        assert_eq!(parsed.keypoints, frame);
    }
}

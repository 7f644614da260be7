//! JSON alignment files: `{"duration": seconds, "phones": [{"p": label,
//! "s": start, "e": end}]}`. An alternate input for aligners that emit
//! JSON phone lists instead of TextGrids.

use serde::{Deserialize, Serialize};

use super::{AlignmentError, AlignmentTrack, PhoneInterval};
use crate::lexicon::PhoneUnit;

#[derive(Debug, Serialize, Deserialize)]
struct AlignmentDoc {
    duration: f64,
    phones: Vec<PhoneEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhoneEntry {
    p: String,
    s: f64,
    e: f64,
}

pub fn parse_alignment_json(text: &str) -> Result<AlignmentTrack, AlignmentError> {
    let doc: AlignmentDoc =
        serde_json::from_str(text).map_err(|e| AlignmentError::parse("json", e.to_string()))?;
    let mut intervals = Vec::with_capacity(doc.phones.len());
    for (i, entry) in doc.phones.iter().enumerate() {
        let phone = if entry.p.is_empty()
            || entry.p.eq_ignore_ascii_case("sp")
            || entry.p.eq_ignore_ascii_case("sil")
        {
            PhoneUnit::Silence
        } else {
            entry
                .p
                .parse::<PhoneUnit>()
                .map_err(|e| AlignmentError::parse(format!("phones[{i}]"), e.to_string()))?
        };
        intervals.push(PhoneInterval {
            phone,
            start: entry.s,
            end: entry.e,
        });
    }
    let track = AlignmentTrack {
        intervals,
        total_duration: doc.duration,
    };
    track.validate()?;
    Ok(track)
}

pub fn serialize_alignment_json(track: &AlignmentTrack) -> String {
    let doc = AlignmentDoc {
        duration: track.total_duration,
        phones: track
            .intervals
            .iter()
            .map(|iv| PhoneEntry {
                p: iv.phone.to_string(),
                s: iv.start,
                e: iv.end,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("alignment doc serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_phone() {
        let track =
            parse_alignment_json(r#"{"duration":1.0,"phones":[{"p":"M","s":0.0,"e":0.1}]}"#)
                .unwrap();
        assert_eq!(track.intervals.len(), 1);
        assert_eq!(track.intervals[0].phone.to_string(), "M");
        assert_eq!(track.total_duration, 1.0);
    }

    #[test]
    fn empty_phone_list_is_an_empty_track() {
        let track = parse_alignment_json(r#"{"duration":1.0,"phones":[]}"#).unwrap();
        assert!(track.intervals.is_empty());
        assert_eq!(track.total_duration, 1.0);
    }

    #[test]
    fn overlapping_phones_are_rejected() {
        let err = parse_alignment_json(
            r#"{"duration":1.0,"phones":[{"p":"M","s":0.0,"e":0.5},{"p":"IY1","s":0.4,"e":0.8}]}"#,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            AlignmentError::InvalidInterval { index: 1, .. }
        ));
    }

    #[test]
    fn schema_violation_is_a_parse_error() {
        assert!(matches!(
            parse_alignment_json(r#"{"phones": 3}"#),
            Err(AlignmentError::Parse { .. })
        ));
    }

    #[test]
    fn round_trips() {
        let source = r#"{"duration":0.5,"phones":[{"p":"SIL","s":0.0,"e":0.2},{"p":"zh","s":0.2,"e":0.3},{"p":"uang","s":0.3,"e":0.45}]}"#;
        let track = parse_alignment_json(source).unwrap();
        let reparsed = parse_alignment_json(&serialize_alignment_json(&track)).unwrap();
        assert_eq!(reparsed, track);
    }
}

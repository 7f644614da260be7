//! Acceptance suite: one test per release criterion. Each test prints a
//! `ACCEPTANCE <n> ...: PASS` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).

mod common;

use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use posepipe_core::alignment::{
    parse_textgrid, serialize_textgrid, to_frame_timeline, AlignmentError, AlignmentTrack,
    PhoneInterval,
};
use posepipe_core::lexicon::{
    arpabet_inventory, bundled_syllables, parse_pronouncing_dict, segment_pinyin, LexiconError,
    PhoneUnit,
};
use posepipe_core::posedict::{coverage_report, Keypoint, KeypointFrame};
use posepipe_core::render::parse_pose_json;
use posepipe_core::synth::{
    interpolate_gaps, place_key_poses, select_key_poses, smooth_sequence, synthesize, FrameTag,
    KeyPoseEvent, OutputSequence, SynthConfig, SynthInput,
};

const TOL: f64 = 1e-9;

fn phone(label: &str) -> PhoneUnit {
    label.parse().unwrap()
}

fn interval(label: &str, start: f64, end: f64) -> PhoneInterval {
    PhoneInterval {
        phone: phone(label),
        start,
        end,
    }
}

/// Criterion 1: default config carries the production parameter values,
/// and a 4.25 s utterance synthesizes to exactly round(4.25*25) = 106
/// frames in under five seconds.
#[test]
fn acceptance_01_config_fidelity_and_frame_count() {
    let cfg = SynthConfig::default();
    assert_eq!(cfg.pose_width, 7);
    assert_eq!(cfg.min_key_pose_distance, 4);
    assert_eq!(cfg.smooth_window, 9);
    assert_eq!(cfg.fps, 25.0);

    let dict = common::full_english_dict(7, 25.0);
    let track = AlignmentTrack {
        intervals: vec![
            interval("SIL", 0.0, 0.5),
            interval("M", 0.5, 1.0),
            interval("IY1", 1.0, 1.6),
            interval("SH", 1.8, 2.4),
            interval("IY1", 2.6, 3.2),
            interval("SIL", 3.45, 4.25),
        ],
        total_duration: 4.25,
    };
    let started = Instant::now();
    let result = synthesize(
        SynthInput::EnglishText("me she"),
        None,
        &dict,
        Some(&track),
        &cfg,
    )
    .unwrap();
    let elapsed = started.elapsed();

    assert_eq!((4.25f64 * 25.0).round() as usize, 106);
    assert_eq!(result.sequence.len(), 106, "expected exactly 106 frames");
    assert_eq!(result.timeline.total_frames, 106);
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "pipeline took {elapsed:?}, limit 5 s"
    );
    println!("ACCEPTANCE 1 (config fidelity, 106-frame utterance, runtime): PASS");
}

fn synthetic_block(start: usize, end: usize) -> KeyPoseEvent {
    KeyPoseEvent {
        phone: PhoneUnit::Silence,
        center_frame: (start + end) / 2,
        start_frame: start,
        end_frame: end,
        frames: vec![KeypointFrame::zeros(); end - start + 1],
        fallback: false,
        source_event: 0,
    }
}

/// Independent transcription of the skip rule used as the reference.
fn reference_skip_rule(blocks: &[(usize, usize)], min_dist: usize) -> Vec<usize> {
    let mut kept = Vec::new();
    let mut anchor: Option<usize> = None;
    for (j, block) in blocks.iter().enumerate() {
        match anchor {
            None => {
                kept.push(j);
                anchor = Some(j);
            }
            Some(i) => {
                let empty_between = block.0 as i64 - blocks[i].1 as i64 - 1;
                if empty_between >= min_dist as i64 {
                    kept.push(j);
                    anchor = Some(j);
                }
            }
        }
    }
    kept
}

/// Criterion 2: the selection rule matches a brute-force reference over
/// 10,000 random event sets (gaps 0-10, min_dist 0-6).
#[test]
fn acceptance_02_skip_rule_matches_reference() {
    let mut rng = StdRng::seed_from_u64(0xA11CE);
    for trial in 0..10_000 {
        let n_events = rng.random_range(0..=12);
        let min_dist = rng.random_range(0..=6);
        let mut blocks = Vec::with_capacity(n_events);
        let mut cursor = 0usize;
        for _ in 0..n_events {
            cursor += rng.random_range(0..=10); // gap
            let width = rng.random_range(1..=7);
            blocks.push((cursor, cursor + width - 1));
            cursor += width;
        }
        let events: Vec<KeyPoseEvent> =
            blocks.iter().map(|&(s, e)| synthetic_block(s, e)).collect();
        let kept = select_key_poses(events, min_dist);
        let got: Vec<usize> = kept
            .iter()
            .map(|k| {
                blocks
                    .iter()
                    .position(|&(s, e)| (s, e) == (k.start_frame, k.end_frame))
                    .unwrap()
            })
            .collect();
        let expected = reference_skip_rule(&blocks, min_dist);
        assert_eq!(
            got, expected,
            "trial {trial}: blocks {blocks:?} min {min_dist}"
        );
    }
    println!("ACCEPTANCE 2 (skip rule vs brute-force reference, 10k sets): PASS");
}

fn random_frame(rng: &mut StdRng) -> KeypointFrame {
    let mut frame = KeypointFrame::zeros();
    for p in frame.body.iter_mut().chain(frame.face.iter_mut()) {
        *p = Keypoint::new(
            rng.random_range(-640.0..640.0),
            rng.random_range(-480.0..480.0),
            rng.random_range(0.0..1.0),
        );
    }
    frame
}

fn constant_block_from(frame: &KeypointFrame, start: usize, end: usize) -> KeyPoseEvent {
    KeyPoseEvent {
        frames: vec![frame.clone(); end - start + 1],
        ..synthetic_block(start, end)
    }
}

/// Criterion 3: interpolated frames hit the midpoint average, stay inside
/// the per-coordinate envelope of the flanking key poses, and match the
/// stated first-step weight against an independent oracle.
#[test]
fn acceptance_03_interpolation_weights() {
    let mut rng = StdRng::seed_from_u64(0xB0B);
    for _ in 0..300 {
        let gap = rng.random_range(1..=20usize);
        let p = random_frame(&mut rng);
        let q = random_frame(&mut rng);
        let a = 2usize; // last frame of the first block
        let b = a + gap + 1; // first frame of the second block
        let events = vec![
            constant_block_from(&p, 0, a),
            constant_block_from(&q, b, b + 2),
        ];
        let seq = interpolate_gaps(&events, b + 4, 25.0).unwrap();

        let channels =
            |f: &KeypointFrame| -> Vec<f64> { f.points().flat_map(|k| [k.x, k.y, k.c]).collect() };
        let pv = channels(&p);
        let qv = channels(&q);

        // midpoint frame equals (P+Q)/2 when the gap is odd
        if gap % 2 == 1 {
            let mid = (a + b) / 2;
            for (v, (pc, qc)) in channels(&seq.frames[mid]).iter().zip(pv.iter().zip(&qv)) {
                assert!((v - (pc + qc) / 2.0).abs() < TOL, "midpoint off");
            }
        }

        // envelope containment for every interpolated frame
        for f in a + 1..b {
            for (v, (pc, qc)) in channels(&seq.frames[f]).iter().zip(pv.iter().zip(&qv)) {
                let (lo, hi) = (pc.min(*qc), pc.max(*qc));
                assert!(*v >= lo - TOL && *v <= hi + TOL, "envelope violated");
            }
        }

        // first interpolated frame: weight (b-a-1)/(b-a) on P per the
        // independent linear-interpolation oracle
        let w = (b - a - 1) as f64 / (b - a) as f64;
        for (v, (pc, qc)) in channels(&seq.frames[a + 1]).iter().zip(pv.iter().zip(&qv)) {
            let oracle = pc * w + qc * (1.0 - w);
            assert!((v - oracle).abs() < TOL, "first-step weight off");
        }
    }
    println!("ACCEPTANCE 3 (interpolation midpoint, envelope, first-step weight): PASS");
}

fn mouth_center_of(frame: &KeypointFrame) -> (f64, f64, f64) {
    let mut acc = (0.0, 0.0, 0.0);
    for i in 48..=67 {
        acc.0 += frame.face[i].x;
        acc.1 += frame.face[i].y;
        acc.2 += frame.face[i].c;
    }
    (acc.0 / 20.0, acc.1 / 20.0, acc.2 / 20.0)
}

fn random_sequence(rng: &mut StdRng, n: usize) -> OutputSequence {
    OutputSequence {
        fps: 25.0,
        frames: (0..n).map(|_| random_frame(rng)).collect(),
        tags: vec![FrameTag::Copied; n],
    }
}

/// Criterion 4: smoothing preserves every mouth keypoint's offset from
/// the mouth center, for 1,000 random sequences, within 1e-9.
#[test]
fn acceptance_04_mouth_offset_preservation() {
    let mut rng = StdRng::seed_from_u64(0xFACE);
    let cfg = SynthConfig::default();
    for _ in 0..1_000 {
        let n = rng.random_range(2..=12);
        let seq = random_sequence(&mut rng, n);
        let before: Vec<Vec<(f64, f64, f64)>> = seq
            .frames
            .iter()
            .map(|f| {
                let m = mouth_center_of(f);
                (48..=67)
                    .map(|i| (f.face[i].x - m.0, f.face[i].y - m.1, f.face[i].c - m.2))
                    .collect()
            })
            .collect();
        let out = smooth_sequence(&seq, &cfg);
        for (t, f) in out.frames.iter().enumerate() {
            let m = mouth_center_of(f);
            for (slot, i) in (48..=67).enumerate() {
                let o = before[t][slot];
                assert!((f.face[i].x - m.0 - o.0).abs() < TOL);
                assert!((f.face[i].y - m.1 - o.1).abs() < TOL);
                assert!((f.face[i].c - m.2 - o.2).abs() < TOL);
            }
        }
    }
    println!("ACCEPTANCE 4 (mouth offset preservation, 1k sequences): PASS");
}

/// Criterion 5: the smoothing kernel's impulse response is the normalized
/// triangle 1..5..1 / 25, constant sequences are fixed points, and
/// smoothing commutes with global translation (within f64 rounding).
#[test]
fn acceptance_05_smoothing_kernel() {
    let cfg = SynthConfig::default();

    // impulse response at an interior frame
    let n = 32;
    let mut seq = OutputSequence {
        fps: 25.0,
        frames: vec![KeypointFrame::zeros(); n],
        tags: vec![FrameTag::Copied; n],
    };
    let t0 = 15usize;
    seq.frames[t0].body[3].x = 1.0;
    let out = smooth_sequence(&seq, &cfg);
    let kernel = [1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0];
    for (i, k) in kernel.iter().enumerate() {
        let t = t0 + i - 4;
        assert!(
            (out.frames[t].body[3].x - k / 25.0).abs() < TOL,
            "impulse response at offset {i}"
        );
    }
    assert!(out.frames[t0 - 5].body[3].x.abs() < TOL);
    assert!(out.frames[t0 + 5].body[3].x.abs() < TOL);

    // constant sequences are fixed points
    let mut rng = StdRng::seed_from_u64(0x5EED);
    let value = random_frame(&mut rng);
    let constant = OutputSequence {
        fps: 25.0,
        frames: vec![value.clone(); 20],
        tags: vec![FrameTag::Copied; 20],
    };
    let out = smooth_sequence(&constant, &cfg);
    for f in &out.frames {
        for (a, b) in f.points().zip(value.points()) {
            assert!((a.x - b.x).abs() < TOL);
            assert!((a.y - b.y).abs() < TOL);
            assert!((a.c - b.c).abs() < TOL);
        }
    }

    // translation equivariance
    let seq = random_sequence(&mut rng, 24);
    let (vx, vy) = (37.5, -12.25);
    let mut translated = seq.clone();
    for f in &mut translated.frames {
        for p in f.body.iter_mut().chain(f.face.iter_mut()) {
            p.x += vx;
            p.y += vy;
        }
    }
    let base = smooth_sequence(&seq, &cfg);
    let shifted = smooth_sequence(&translated, &cfg);
    for (fa, fb) in base.frames.iter().zip(&shifted.frames) {
        for (pa, pb) in fa.points().zip(fb.points()) {
            assert!((pb.x - pa.x - vx).abs() < TOL);
            assert!((pb.y - pa.y - vy).abs() < TOL);
        }
    }
    println!("ACCEPTANCE 5 (triangular kernel, fixed point, translation equivariance): PASS");
}

/// Criterion 6: a corpus whose alignment reads out all 39 base phones
/// yields full coverage, and a pangram synthesizes without missing-phone
/// errors.
#[test]
fn acceptance_06_coverage_claim() {
    let dict = common::full_english_dict(7, 25.0);
    let report = coverage_report(&dict, &arpabet_inventory());
    assert_eq!(report.coverage, 1.0);
    assert!(report.missing.is_empty(), "missing: {:?}", report.missing);

    let lexicon = parse_pronouncing_dict(common::fixture_lexicon()).unwrap();
    let result = synthesize(
        SynthInput::EnglishText(common::PANGRAM),
        Some(&lexicon),
        &dict,
        None,
        &SynthConfig::default(),
    );
    assert!(result.is_ok(), "pangram failed: {:?}", result.err());
    println!("ACCEPTANCE 6 (full-inventory coverage, pangram synthesis): PASS");
}

/// Criterion 7: the CMU-dict and TextGrid parsers round-trip their
/// fixtures losslessly and reject malformed input with the stated errors.
#[test]
fn acceptance_07_parser_round_trips_and_errors() {
    // CMU fixture: every parsed pronunciation re-serializes to the exact
    // source phone field
    let dict_text = include_str!("fixtures/mini.dict");
    let lexicon = parse_pronouncing_dict(dict_text).unwrap();
    assert_eq!(
        lexicon
            .first("ME")
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        "M IY1"
    );
    assert_eq!(
        lexicon
            .first("SHE")
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        "SH IY1"
    );
    let mut seen = 0;
    for line in dict_text.lines() {
        if line.is_empty() || line.starts_with(";;;") {
            continue;
        }
        let (word_field, phone_field) = line.split_once("  ").unwrap();
        let word = word_field.split('(').next().unwrap();
        let variant: usize = word_field
            .split('(')
            .nth(1)
            .map(|v| v.trim_end_matches(')').parse().unwrap())
            .unwrap_or(0);
        let rendered = lexicon.variants(word).unwrap()[variant]
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        assert_eq!(rendered, phone_field, "round trip for {word_field}");
        seen += 1;
    }
    assert_eq!(seen, 6);

    // malformed dictionary lines produce the specified errors
    assert!(matches!(
        parse_pronouncing_dict("ME  M IY1\nBROKEN\n"),
        Err(LexiconError::DictLine { line: 2, .. })
    ));
    assert!(matches!(
        parse_pronouncing_dict("ME  M QX9\n"),
        Err(LexiconError::DictLine { line: 1, .. })
    ));

    // TextGrid fixture round-trips losslessly through the serializer
    let grid_text = include_str!("fixtures/utterance.TextGrid");
    let track = parse_textgrid(grid_text, "phone").unwrap();
    assert_eq!(track.intervals.len(), 5);
    let reparsed = parse_textgrid(&serialize_textgrid(&track, "phone"), "phone").unwrap();
    assert_eq!(reparsed, track);

    // malformed TextGrid: inverted interval named by index
    let err = parse_textgrid(include_str!("fixtures/inverted.TextGrid"), "phone").unwrap_err();
    assert_eq!(err.to_string(), "interval 3: xmax<xmin");
    // missing tier
    assert!(matches!(
        parse_textgrid(grid_text, "syllable"),
        Err(AlignmentError::MissingTier(_))
    ));
    println!("ACCEPTANCE 7 (parser fixtures round-trip, malformed rejected): PASS");
}

/// Criterion 8: every syllable of the bundled standard table (>= 386
/// entries) segments into initial+final and reconcatenates to itself.
#[test]
fn acceptance_08_pinyin_table_identity() {
    let syllables = bundled_syllables();
    assert!(
        syllables.len() >= 386,
        "table holds {} syllables, need >= 386",
        syllables.len()
    );
    for syl in syllables {
        let seg = segment_pinyin(syl).unwrap_or_else(|e| panic!("{syl}: {e}"));
        assert_eq!(seg.spelling(), *syl, "reconcatenation of {syl}");
    }
    println!(
        "ACCEPTANCE 8 (pinyin identity over {} syllables): PASS",
        syllables.len()
    );
}

/// Criterion 9: two full CLI runs over identical inputs produce
/// byte-identical pose JSON and PPM frames.
#[test]
fn acceptance_09_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let dict_path = dir.path().join("dict.json");
    std::fs::write(&dict_path, common::full_english_dict(7, 25.0).to_json()).unwrap();
    let lexicon_path = dir.path().join("lexicon.dict");
    std::fs::write(&lexicon_path, common::fixture_lexicon()).unwrap();

    let run = |out: &str| {
        let out_dir = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_posepipe"))
            .args([
                "synth",
                "--text",
                "hello world.",
                "--dict",
                dict_path.to_str().unwrap(),
                "--lexicon",
                lexicon_path.to_str().unwrap(),
                "--out-dir",
                out_dir.to_str().unwrap(),
                "--canvas",
                "64x48",
            ])
            .status()
            .unwrap();
        assert!(status.success(), "synth run failed");
        out_dir
    };
    let a = run("out_a");
    let b = run("out_b");

    let bytes = |p: &std::path::Path| std::fs::read(p).unwrap();
    assert_eq!(bytes(&a.join("pose.json")), bytes(&b.join("pose.json")));
    assert_eq!(bytes(&a.join("eval.json")), bytes(&b.join("eval.json")));

    let mut frame_names: Vec<String> = std::fs::read_dir(a.join("frames"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    frame_names.sort();
    assert!(!frame_names.is_empty());
    for name in &frame_names {
        assert_eq!(
            bytes(&a.join("frames").join(name)),
            bytes(&b.join("frames").join(name)),
            "frame {name} differs"
        );
    }
    println!(
        "ACCEPTANCE 9 (byte-identical outputs over {} frames): PASS",
        frame_names.len()
    );
}

/// Criterion 10: over 1,000 random timelines, every kept key pose's
/// center lands within one frame of its phoneme midpoint times fps.
#[test]
fn acceptance_10_key_pose_timing() {
    let dict = common::full_english_dict(7, 25.0);
    let cfg = SynthConfig::default();
    let inventory = arpabet_inventory();
    let mut rng = StdRng::seed_from_u64(0x7151E);

    for _ in 0..1_000 {
        let n_phones = rng.random_range(1..=12);
        let mut intervals = Vec::with_capacity(n_phones);
        let mut t = 0.0f64;
        for _ in 0..n_phones {
            t += rng.random_range(0.0..0.1); // optional gap
            let duration = rng.random_range(0.08..0.6);
            let unit = if rng.random_range(0..8) == 0 {
                PhoneUnit::Silence
            } else {
                inventory[rng.random_range(0..inventory.len())].clone()
            };
            intervals.push(PhoneInterval {
                phone: unit,
                start: t,
                end: t + duration,
            });
            t += duration;
        }
        let track = AlignmentTrack {
            intervals,
            total_duration: t + rng.random_range(0.0..0.2),
        };
        let timeline = to_frame_timeline(&track, cfg.fps);
        let placed = place_key_poses(&timeline, &dict, &cfg).unwrap();
        let kept = select_key_poses(placed, cfg.min_key_pose_distance);
        for event in &kept {
            let iv = &track.intervals[event.source_event];
            let midpoint_frames = (iv.start + iv.end) / 2.0 * cfg.fps;
            let error = (event.center_frame as f64 - midpoint_frames).abs();
            assert!(
                error <= 1.0 + TOL,
                "center {} vs midpoint {midpoint_frames} ({error} frames)",
                event.center_frame
            );
        }
    }
    println!("ACCEPTANCE 10 (kept key poses within 1 frame of midpoint, 1k timelines): PASS");
}

/// The exported pose document reloads bit-exactly (supports criterion 9's
/// hand-off contract).
#[test]
fn pose_json_reload_is_exact() {
    let dict = common::full_english_dict(7, 25.0);
    let lexicon = parse_pronouncing_dict(common::fixture_lexicon()).unwrap();
    let result = synthesize(
        SynthInput::EnglishText("me she"),
        Some(&lexicon),
        &dict,
        None,
        &SynthConfig::default(),
    )
    .unwrap();
    let doc = posepipe_core::render::export_pose_json(&result.sequence);
    let restored = parse_pose_json(&doc).unwrap();
    assert_eq!(restored, result.sequence);
}

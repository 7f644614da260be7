//! `posepipe`: build phoneme-pose dictionaries from keypoint-annotated
//! speech video and synthesize pose sequences from text.
//!
//! Exit codes: 0 success, 2 usage or config problem, 3 data problem
//! (out-of-vocabulary word, missing phone unit), 4 output I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use posepipe_core::alignment::{parse_alignment_json, parse_textgrid, AlignmentTrack};
use posepipe_core::eval::eval_metrics;
use posepipe_core::lexicon::{
    arpabet_inventory, parse_pronouncing_dict, pinyin_inventory, LexiconError, PhoneUnit,
    PronouncingDictionary,
};
use posepipe_core::posedict::{
    build_dictionary, coverage_report, load_openpose_dir, PhonemePoseDictionary, PoseDictError,
    TrainingClip,
};
use posepipe_core::render::{export_frames, export_label_maps, export_pose_json, SkeletonTopology};
use posepipe_core::synth::{synthesize, SynthConfig, SynthError, SynthInput, TimingSource};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_IO: u8 = 4;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum LogLevel {
    Off,
    Error,
    Warn,
    Info,
    Debug,
}

/// Log level from POSEPIPE_LOG (off|error|warn|info|debug); default warn.
fn log_level() -> LogLevel {
    match std::env::var("POSEPIPE_LOG").as_deref() {
        Ok("off") => LogLevel::Off,
        Ok("error") => LogLevel::Error,
        Ok("info") => LogLevel::Info,
        Ok("debug") => LogLevel::Debug,
        _ => LogLevel::Warn,
    }
}

fn log(level: LogLevel, msg: &str) {
    if level <= log_level() {
        let tag = match level {
            LogLevel::Off => return,
            LogLevel::Error => "error",
            LogLevel::Warn => "warn",
            LogLevel::Info => "info",
            LogLevel::Debug => "debug",
        };
        eprintln!("[{tag}] {msg}");
    }
}

#[derive(Parser)]
#[command(
    name = "posepipe",
    about = "Text-to-pose-sequence pipeline: phoneme-pose dictionaries, key-pose interpolation, smoothing, rendering",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a phoneme-pose dictionary from keypoint dirs and alignments.
    BuildDict(BuildDictArgs),
    /// Synthesize a pose sequence from text or pinyin.
    Synth(SynthArgs),
}

#[derive(Args)]
struct BuildDictArgs {
    /// Directory of per-frame OpenPose JSON files (repeatable).
    #[arg(long = "keypoints-dir", required = true)]
    keypoints_dirs: Vec<PathBuf>,
    /// Alignment file per keypoints dir: TextGrid or alignment JSON.
    #[arg(long = "alignment", required = true)]
    alignments: Vec<PathBuf>,
    /// Output path for the dictionary JSON.
    #[arg(long)]
    dict: PathBuf,
    /// Synthesis config JSON (pose width and fps are used for building).
    #[arg(long)]
    config: Option<PathBuf>,
    /// TextGrid tier holding the phones.
    #[arg(long, default_value = "phone")]
    tier: String,
}

#[derive(Args)]
struct SynthArgs {
    /// English input text.
    #[arg(long, conflicts_with = "pinyin")]
    text: Option<String>,
    /// Pinyin input (whitespace-separated syllables, optional tone digits).
    #[arg(long)]
    pinyin: Option<String>,
    /// Phoneme-pose dictionary JSON.
    #[arg(long)]
    dict: PathBuf,
    /// Optional forced-alignment file (TextGrid or alignment JSON);
    /// without it, timing comes from the built-in duration model.
    #[arg(long)]
    alignment: Option<PathBuf>,
    /// Output directory (pose.json, frames/, labels/, eval.json).
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    /// Synthesis config JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Canvas size for rendered frames, e.g. 640x480.
    #[arg(long, default_value = "640x480")]
    canvas: String,
    /// CMU-format pronouncing dictionary (required with --text).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// TextGrid tier holding the phones.
    #[arg(long, default_value = "phone")]
    tier: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildDict(args) => cmd_build_dict(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> CliResult<SynthConfig> {
    match path {
        None => Ok(SynthConfig::default()),
        Some(path) => {
            let text = read_input(path)?;
            SynthConfig::from_json(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
        }
    }
}

fn load_alignment(path: &Path, tier: &str) -> CliResult<AlignmentTrack> {
    let text = read_input(path)?;
    let is_textgrid = path
        .extension()
        .is_some_and(|ext| ext.to_string_lossy().eq_ignore_ascii_case("textgrid"))
        || text.trim_start().starts_with("File type");
    let parsed = if is_textgrid {
        parse_textgrid(&text, tier)
    } else {
        parse_alignment_json(&text)
    };
    parsed.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn parse_canvas(spec: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = spec.split('x').collect();
    let parse_dim = |s: &str| s.trim().parse::<usize>().ok().filter(|&v| v > 0);
    match parts.as_slice() {
        [w, h] => match (parse_dim(w), parse_dim(h)) {
            (Some(w), Some(h)) => Ok((w, h)),
            _ => Err(CliError::usage(format!("bad canvas size {spec:?}"))),
        },
        _ => Err(CliError::usage(format!(
            "bad canvas size {spec:?}, expected WxH"
        ))),
    }
}

fn cmd_build_dict(args: BuildDictArgs) -> CliResult<()> {
    if args.keypoints_dirs.len() != args.alignments.len() {
        return Err(CliError::usage(format!(
            "{} keypoints dirs but {} alignment files; pass one --alignment per --keypoints-dir",
            args.keypoints_dirs.len(),
            args.alignments.len()
        )));
    }
    let cfg = load_config(args.config.as_deref())?;

    let mut clips = Vec::with_capacity(args.keypoints_dirs.len());
    for (dir, alignment_path) in args.keypoints_dirs.iter().zip(&args.alignments) {
        let (poses, multi_person) =
            load_openpose_dir(dir, cfg.fps).map_err(|e| CliError::usage(e.to_string()))?;
        if multi_person > 0 {
            log(
                LogLevel::Warn,
                &format!(
                    "{}: {multi_person} frame(s) had extra people; first person used",
                    dir.display()
                ),
            );
        }
        log(
            LogLevel::Info,
            &format!("{}: {} frames", dir.display(), poses.len()),
        );
        let alignment = load_alignment(alignment_path, &args.tier)?;
        clips.push(TrainingClip {
            id: dir.display().to_string(),
            poses,
            alignment,
        });
    }

    let dict = build_dictionary(&clips, cfg.pose_width, cfg.fps)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let has_english = dict
        .snippets
        .keys()
        .any(|u| matches!(u, PhoneUnit::Arpabet { .. }));
    let has_pinyin = dict.snippets.keys().any(|u| {
        matches!(
            u,
            PhoneUnit::PinyinInitial { .. } | PhoneUnit::PinyinFinal { .. }
        )
    });
    if has_english {
        print_coverage("English", &coverage_summary(&dict, &arpabet_inventory()));
    }
    if has_pinyin {
        print_coverage("Pinyin", &coverage_summary(&dict, &pinyin_inventory()));
    }
    println!(
        "dictionary: {} snippet(s), width {}, {} fps",
        dict.snippets.len(),
        dict.width,
        dict.fps
    );

    fs::write(&args.dict, dict.to_json())
        .map_err(|e| CliError::io(format!("{}: {e}", args.dict.display())))?;
    println!("wrote {}", args.dict.display());
    Ok(())
}

struct CoverageSummary {
    present: usize,
    total: usize,
    coverage: f64,
    missing: Vec<String>,
}

fn coverage_summary(dict: &PhonemePoseDictionary, inventory: &[PhoneUnit]) -> CoverageSummary {
    let report = coverage_report(dict, inventory);
    CoverageSummary {
        present: report.present.len(),
        total: inventory.len(),
        coverage: report.coverage,
        missing: report.missing.iter().map(|u| u.to_string()).collect(),
    }
}

fn print_coverage(label: &str, summary: &CoverageSummary) {
    println!(
        "{label} coverage: {}/{} units ({:.1}%)",
        summary.present,
        summary.total,
        summary.coverage * 100.0
    );
    if !summary.missing.is_empty() {
        println!("missing: {}", summary.missing.join(" "));
    }
}

#[derive(Serialize)]
struct EvalDoc {
    jitter: f64,
    timing_errors: Vec<f64>,
    coverage: f64,
    timing_source: TimingSource,
}

fn classify_synth_error(e: SynthError) -> CliError {
    match &e {
        SynthError::Lexicon(LexiconError::OutOfVocabulary { .. })
        | SynthError::Lexicon(LexiconError::InvalidSyllable { .. }) => {
            CliError::data(e.to_string())
        }
        SynthError::PoseDict(PoseDictError::MissingPhone(_)) => CliError::data(e.to_string()),
        _ => CliError::usage(e.to_string()),
    }
}

fn cmd_synth(args: SynthArgs) -> CliResult<()> {
    let canvas = parse_canvas(&args.canvas)?;
    let cfg = load_config(args.config.as_deref())?;

    let input = match (&args.text, &args.pinyin) {
        (Some(text), None) => SynthInput::EnglishText(text),
        (None, Some(pinyin)) => SynthInput::Pinyin(pinyin),
        _ => return Err(CliError::usage("pass exactly one of --text or --pinyin")),
    };

    let lexicon: Option<PronouncingDictionary> = match (&args.text, &args.lexicon) {
        (Some(_), None) if args.alignment.is_none() => {
            return Err(CliError::usage("--text requires --lexicon PATH"));
        }
        (_, Some(path)) => {
            let text = read_input(path)?;
            Some(
                parse_pronouncing_dict(&text)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
            )
        }
        _ => None,
    };

    let dict_text = read_input(&args.dict)?;
    let dict = PhonemePoseDictionary::from_json(&dict_text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.dict.display())))?;

    let alignment = match &args.alignment {
        Some(path) => Some(load_alignment(path, &args.tier)?),
        None => None,
    };

    log(LogLevel::Info, "synthesizing pose sequence");
    let result = synthesize(input, lexicon.as_ref(), &dict, alignment.as_ref(), &cfg)
        .map_err(classify_synth_error)?;
    if result.dropped_chars > 0 {
        log(
            LogLevel::Warn,
            &format!(
                "{} input character(s) matched no normalization rule and were dropped",
                result.dropped_chars
            ),
        );
    }

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(format!("{}: {e}", args.out_dir.display())))?;

    let pose_path = args.out_dir.join("pose.json");
    fs::write(&pose_path, export_pose_json(&result.sequence))
        .map_err(|e| CliError::io(format!("{}: {e}", pose_path.display())))?;

    let topo = SkeletonTopology::default();
    let frames_dir = args.out_dir.join("frames");
    let frame_count = export_frames(&result.sequence, &frames_dir, &topo, canvas)
        .map_err(|e| CliError::io(e.to_string()))?;
    let labels_dir = args.out_dir.join("labels");
    export_label_maps(&result.sequence, &labels_dir, &topo, canvas)
        .map_err(|e| CliError::io(e.to_string()))?;

    let report = eval_metrics(&result.sequence, &result.timeline, &result.kept_events);
    let eval_doc = EvalDoc {
        jitter: report.jitter,
        timing_errors: report.timing_errors.clone(),
        coverage: report.coverage,
        timing_source: result.timing_source,
    };
    let eval_path = args.out_dir.join("eval.json");
    fs::write(
        &eval_path,
        serde_json::to_string_pretty(&eval_doc).expect("eval doc serializes"),
    )
    .map_err(|e| CliError::io(format!("{}: {e}", eval_path.display())))?;

    let timing_label = match result.timing_source {
        TimingSource::Alignment => "alignment",
        TimingSource::ModelBased => "model-based",
    };
    println!(
        "synthesized {frame_count} frame(s), {} key pose(s) kept, timing {timing_label}",
        result.kept_events.len()
    );
    println!(
        "jitter {:.3} px, exact-lookup coverage {:.1}%",
        report.jitter,
        report.coverage * 100.0
    );
    println!("wrote {}", args.out_dir.display());
    Ok(())
}

//! `mwld` — text localization in frame sequences with the multiscale Weber
//! local descriptor.
//!
//! Subcommands: `keyframes` (shot segmentation), `detect` (per-frame text
//! boxes), `eval` (DR/FPR/MDR against ground truth) and `synth` (synthetic
//! corpus generation). Exit codes: 0 success, 2 usage or I/O error,
//! 3 internal invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mwld_cli::corpus::{multi_line_frames, single_line_frames, CorpusFrame};
use mwld_cli::formats;
use mwld_cli::pipeline::detect_all;
use mwld_cli::pnm::write_ppm;
use mwld_cli::sequence::read_frame_sequence;
use mwld_core::eval::DEFAULT_MDB_COVERAGE;
use mwld_core::synth::make_sequence;
use mwld_core::{
    detect_shots, draw_boxes, evaluate, render_text_frame, DetectParams, Fusion, GeomRules,
    GroundTruth, MwldConfig, RgbFrame, ThresholdMode, WldScale,
};

#[derive(Parser)]
#[command(name = "mwld", version, about = "Text localization in video frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a frame sequence into shots and pick key frames.
    Keyframes {
        /// Frame directory or manifest file.
        #[arg(long)]
        input: PathBuf,
        /// Cut threshold: "adaptive" or a fixed number.
        #[arg(long, default_value = "adaptive")]
        tau: String,
        /// Output JSON path for the shot list.
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect text boxes in every input frame.
    Detect(DetectArgs),
    /// Score detection results against ground truth.
    Eval {
        /// Detection results JSON (as written by `detect`).
        #[arg(long)]
        det: PathBuf,
        /// Ground truth CSV: `frame,x0,y0,x1,y1` per line.
        #[arg(long)]
        gt: PathBuf,
        /// Coverage ratio below which a matched detection counts as MDB.
        #[arg(long, default_value_t = DEFAULT_MDB_COVERAGE)]
        mdb_coverage: f64,
    },
    /// Generate a synthetic corpus with exact ground truth.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Built-in corpus layout; omit when using --spec.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Frame spec JSON file (alternative to --preset).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Frames to generate (single-line / multi-line presets).
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DetectArgs {
    /// A .ppm frame, a frame directory, or a manifest file.
    #[arg(long)]
    input: PathBuf,
    /// Descriptor scales as comma-separated P:R pairs.
    #[arg(long, default_value = "8:1,16:2,24:3")]
    scales: String,
    /// How per-scale maps are combined.
    #[arg(long, value_enum, default_value_t = FusionArg::Mean)]
    fusion: FusionArg,
    /// Binarization threshold on the gradient map.
    #[arg(long, default_value_t = 200)]
    threshold: u8,
    /// Geometric rules: h<min>:<max>,w<min>,a<min-area>.
    #[arg(long, default_value = "h6:50,w5,a24")]
    rules: String,
    /// Rescale the geometric rules to the input frame height.
    #[arg(long)]
    scale_rules: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
    /// Write detection results JSON here instead of stdout.
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Also write `frame,x0,y0,x1,y1` CSV lines here.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Also write annotated PPM frames into this directory.
    #[arg(long)]
    out_annotated: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FusionArg {
    Mean,
    Max,
}

#[derive(Copy, Clone, ValueEnum)]
enum Preset {
    SingleLine,
    MultiLine,
    Shots,
}

/// Failures carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(error: E) -> Self {
        Self { code: 2, error: error.into() }
    }
}

fn internal(error: anyhow::Error) -> Failure {
    Failure { code: 3, error }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Keyframes { input, tau, out } => keyframes(&input, &tau, &out),
        Command::Detect(args) => detect(args),
        Command::Eval { det, gt, mdb_coverage } => eval(&det, &gt, mdb_coverage),
        Command::Synth { seed, preset, spec, count, out } => synth(seed, preset, spec, count, &out),
    }
}

fn keyframes(input: &Path, tau: &str, out: &Path) -> Result<(), Failure> {
    let mode = match tau {
        "adaptive" => ThresholdMode::Adaptive,
        value => ThresholdMode::Fixed(
            value
                .parse()
                .map_err(|_| anyhow!("--tau must be \"adaptive\" or a number, got {value:?}"))?,
        ),
    };
    let frames = read_frame_sequence(input)?;
    let shots = detect_shots(&frames, mode).context("shot detection")?;
    fs::write(out, formats::shots_to_json(&shots))
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn detect(args: DetectArgs) -> Result<(), Failure> {
    let params = DetectParams {
        mwld: MwldConfig::new(parse_scales(&args.scales)?, match args.fusion {
            FusionArg::Mean => Fusion::Mean,
            FusionArg::Max => Fusion::Max,
        }),
        threshold: args.threshold,
        rules: parse_rules(&args.rules)?,
        scale_rules: args.scale_rules,
        ..DetectParams::default()
    };

    let frames = load_detect_input(&args.input)?;
    let workers = args.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(anyhow!("--workers must be at least 1").into());
    }
    let results = detect_all(&frames, &params, workers);

    for (result, frame) in results.iter().zip(&frames) {
        for b in &result.boxes {
            if b.x1 >= frame.width() || b.y1 >= frame.height() {
                return Err(internal(anyhow!(
                    "detected box ({},{})..({},{}) escapes frame {} of {}x{}",
                    b.x0, b.y0, b.x1, b.y1,
                    result.frame_index, frame.width(), frame.height()
                )));
            }
        }
    }

    let json = formats::detections_to_json(&results);
    match &args.out_json {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.out_csv {
        fs::write(path, formats::detections_to_csv(&results))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(dir) = &args.out_annotated {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (result, frame) in results.iter().zip(&frames) {
            let annotated = draw_boxes(frame, &result.boxes, 2);
            let name = format!("frame_{:06}.ppm", result.frame_index + 1);
            fs::write(dir.join(&name), write_ppm(&annotated))
                .with_context(|| format!("writing {name}"))?;
        }
    }
    Ok(())
}

fn eval(det: &Path, gt: &Path, mdb_coverage: f64) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&mdb_coverage) {
        return Err(anyhow!("--mdb-coverage must lie in [0, 1]").into());
    }
    let det_text =
        fs::read_to_string(det).with_context(|| format!("reading {}", det.display()))?;
    let detections = formats::detections_from_json(&det_text)
        .with_context(|| format!("parsing {}", det.display()))?;
    let gt_text = fs::read_to_string(gt).with_context(|| format!("reading {}", gt.display()))?;
    let truth = formats::gt_from_csv(&gt_text).with_context(|| format!("parsing {}", gt.display()))?;
    let report = evaluate(&detections, &truth, mdb_coverage);
    println!("{}", formats::report_to_json(&report));
    Ok(())
}

fn synth(
    seed: u64,
    preset: Option<Preset>,
    spec: Option<PathBuf>,
    count: usize,
    out: &Path,
) -> Result<(), Failure> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut gt = GroundTruth::new();

    match (preset, spec) {
        (Some(_), Some(_)) => {
            return Err(anyhow!("--preset and --spec are mutually exclusive").into())
        }
        (None, None) => return Err(anyhow!("one of --preset or --spec is required").into()),
        (Some(Preset::SingleLine), None) => {
            write_corpus(out, &single_line_frames(seed, count), &mut gt)?
        }
        (Some(Preset::MultiLine), None) => {
            write_corpus(out, &multi_line_frames(seed, count), &mut gt)?
        }
        (Some(Preset::Shots), None) => {
            let (frames, truth, shots) = make_sequence(seed, 3, 12);
            for (i, frame) in frames.iter().enumerate() {
                write_frame(out, i, frame)?;
            }
            gt = truth;
            fs::write(out.join("shots_truth.json"), formats::shots_to_json(&shots))
                .context("writing shots_truth.json")?;
        }
        (None, Some(spec_path)) => {
            let text = fs::read_to_string(&spec_path)
                .with_context(|| format!("reading {}", spec_path.display()))?;
            let frame_spec = formats::frame_spec_from_json(&text)
                .with_context(|| format!("parsing {}", spec_path.display()))?;
            let (frame, boxes) = render_text_frame(seed, &frame_spec).context("rendering spec")?;
            write_frame(out, 0, &frame)?;
            for b in boxes {
                gt.add(0, b);
            }
        }
    }

    fs::write(out.join("gt.csv"), formats::gt_to_csv(&gt)).context("writing gt.csv")?;
    Ok(())
}

fn write_corpus(out: &Path, corpus: &[CorpusFrame], gt: &mut GroundTruth) -> Result<()> {
    for (i, cf) in corpus.iter().enumerate() {
        write_frame(out, i, &cf.frame)?;
        for b in &cf.gt_boxes {
            gt.add(i, *b);
        }
    }
    Ok(())
}

/// Frame files are named from 1; indices in GT/detections are 0-based
/// positions in the sequence.
fn write_frame(out: &Path, index: usize, frame: &RgbFrame) -> Result<()> {
    let name = format!("frame_{:06}.ppm", index + 1);
    fs::write(out.join(&name), write_ppm(frame)).with_context(|| format!("writing {name}"))
}

fn load_detect_input(input: &Path) -> Result<Vec<RgbFrame>, Failure> {
    if input.is_file() && input.extension().is_some_and(|e| e == "ppm") {
        let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
        let frame = mwld_cli::pnm::read_ppm(&bytes)
            .with_context(|| format!("decoding {}", input.display()))?;
        Ok(vec![frame])
    } else {
        Ok(read_frame_sequence(input)?)
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_scales(text: &str) -> Result<Vec<WldScale>> {
    let mut scales = Vec::new();
    for part in text.split(',') {
        let (p, r) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| anyhow!("bad scale {part:?}, expected P:R"))?;
        let p: usize = p.trim().parse().with_context(|| format!("bad neighbor count in {part:?}"))?;
        let r: usize = r.trim().parse().with_context(|| format!("bad radius in {part:?}"))?;
        if p < 4 || r < 1 {
            bail!("scale {part:?} out of range: need P >= 4 and R >= 1");
        }
        scales.push(WldScale::new(p, r));
    }
    if scales.is_empty() {
        bail!("at least one scale is required");
    }
    for (i, a) in scales.iter().enumerate() {
        if scales[i + 1..].contains(a) {
            bail!("duplicate scale {}:{}", a.neighbors(), a.radius());
        }
    }
    Ok(scales)
}

/// `h<min>:<max>,w<min>,a<min-area>` in any order; omitted groups keep the
/// paper defaults.
fn parse_rules(text: &str) -> Result<GeomRules> {
    let mut rules = GeomRules::default();
    for part in text.split(',') {
        let part = part.trim();
        match part.split_at_checked(1) {
            Some(("h", rest)) => {
                let (lo, hi) = rest
                    .split_once(':')
                    .ok_or_else(|| anyhow!("bad height rule {part:?}, expected h<min>:<max>"))?;
                rules.min_height = lo.parse().with_context(|| format!("bad min height {lo:?}"))?;
                rules.max_height = hi.parse().with_context(|| format!("bad max height {hi:?}"))?;
            }
            Some(("w", rest)) => {
                rules.min_width = rest.parse().with_context(|| format!("bad min width in {part:?}"))?
            }
            Some(("a", rest)) => {
                rules.min_area = rest.parse().with_context(|| format!("bad min area in {part:?}"))?
            }
            _ => bail!("bad rule {part:?}, expected h<min>:<max>, w<min> or a<min>"),
        }
    }
    if rules.min_height == 0 || rules.min_height >= rules.max_height {
        bail!("rules need 0 < min height < max height");
    }
    if rules.min_width == 0 || rules.min_area == 0 {
        bail!("rule constants must be positive");
    }
    Ok(rules)
}

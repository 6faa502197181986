//! Wire formats: shot lists and detection results as JSON, detections and
//! ground truth as CSV, evaluation reports as JSON, and the synthetic frame
//! spec accepted as a JSON file.

use mwld_core::eval::{EvalReport, FrameEval};
use mwld_core::synth::{Background, FrameSpec, TextLine};
use mwld_core::{BBox, DetectionResult, GroundTruth, Shot};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    CsvLine { line: usize, message: String },
}

#[derive(Serialize, Deserialize)]
struct ShotRec {
    start: usize,
    end: usize,
    keyframe: usize,
}

pub fn shots_to_json(shots: &[Shot]) -> String {
    let recs: Vec<ShotRec> = shots
        .iter()
        .map(|s| ShotRec { start: s.start, end: s.end, keyframe: s.keyframe })
        .collect();
    serde_json::to_string_pretty(&recs).expect("serializable")
}

pub fn shots_from_json(text: &str) -> Result<Vec<Shot>, FormatError> {
    let recs: Vec<ShotRec> = serde_json::from_str(text)?;
    Ok(recs
        .into_iter()
        .map(|r| Shot { start: r.start, end: r.end, keyframe: r.keyframe })
        .collect())
}

#[derive(Serialize, Deserialize)]
struct DetectionRec {
    frame: usize,
    boxes: Vec<[usize; 4]>,
}

pub fn detections_to_json(detections: &[DetectionResult]) -> String {
    let recs: Vec<DetectionRec> = detections
        .iter()
        .map(|d| DetectionRec {
            frame: d.frame_index,
            boxes: d.boxes.iter().map(|b| [b.x0, b.y0, b.x1, b.y1]).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&recs).expect("serializable")
}

pub fn detections_from_json(text: &str) -> Result<Vec<DetectionResult>, FormatError> {
    let recs: Vec<DetectionRec> = serde_json::from_str(text)?;
    recs.into_iter()
        .map(|r| {
            let boxes = r
                .boxes
                .into_iter()
                .map(|[x0, y0, x1, y1]| {
                    if x0 > x1 || y0 > y1 {
                        return Err(FormatError::CsvLine {
                            line: 0,
                            message: format!("degenerate box [{x0},{y0},{x1},{y1}] in frame {}", r.frame),
                        });
                    }
                    Ok(BBox::new(x0, y0, x1, y1))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DetectionResult::new(r.frame, boxes))
        })
        .collect()
}

/// One `frame,x0,y0,x1,y1` line per box.
pub fn detections_to_csv(detections: &[DetectionResult]) -> String {
    let mut out = String::new();
    for d in detections {
        for b in &d.boxes {
            out.push_str(&format!("{},{},{},{},{}\n", d.frame_index, b.x0, b.y0, b.x1, b.y1));
        }
    }
    out
}

/// Parses `frame,x0,y0,x1,y1` lines; `#` comments and blank lines are
/// ignored. Errors name the offending 1-based line number.
pub fn boxes_from_csv(text: &str) -> Result<Vec<(usize, BBox)>, FormatError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(FormatError::CsvLine {
                line,
                message: format!("expected 5 comma-separated fields, found {}", fields.len()),
            });
        }
        let mut values = [0usize; 5];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| FormatError::CsvLine {
                line,
                message: format!("not a non-negative integer: {field:?}"),
            })?;
        }
        let [frame, x0, y0, x1, y1] = values;
        if x0 > x1 || y0 > y1 {
            return Err(FormatError::CsvLine {
                line,
                message: format!("degenerate box {x0},{y0},{x1},{y1}"),
            });
        }
        rows.push((frame, BBox::new(x0, y0, x1, y1)));
    }
    Ok(rows)
}

pub fn gt_from_csv(text: &str) -> Result<GroundTruth, FormatError> {
    Ok(boxes_from_csv(text)?.into_iter().collect())
}

pub fn gt_to_csv(gt: &GroundTruth) -> String {
    let mut out = String::from("# frame,x0,y0,x1,y1\n");
    for (frame, boxes) in gt.iter() {
        for b in boxes {
            out.push_str(&format!("{},{},{},{},{}\n", frame, b.x0, b.y0, b.x1, b.y1));
        }
    }
    out
}

#[derive(Serialize)]
struct FrameEvalRec {
    frame: usize,
    tdb: usize,
    fdb: usize,
    mdb: usize,
    gt_total: usize,
}

#[derive(Serialize)]
struct ReportRec {
    tdb: usize,
    fdb: usize,
    mdb: usize,
    gt_total: usize,
    dr: f64,
    fpr: f64,
    mdr: f64,
    frames: Vec<FrameEvalRec>,
    frames_without_gt: Vec<usize>,
}

pub fn report_to_json(report: &EvalReport) -> String {
    let rec = ReportRec {
        tdb: report.tdb,
        fdb: report.fdb,
        mdb: report.mdb,
        gt_total: report.gt_total,
        dr: report.dr,
        fpr: report.fpr,
        mdr: report.mdr,
        frames: report
            .frames
            .iter()
            .map(|f: &FrameEval| FrameEvalRec {
                frame: f.frame_index,
                tdb: f.tdb,
                fdb: f.fdb,
                mdb: f.mdb,
                gt_total: f.gt_total,
            })
            .collect(),
        frames_without_gt: report.frames_without_gt.clone(),
    };
    serde_json::to_string_pretty(&rec).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum BackgroundRec {
    Flat { color: [u8; 3] },
    Gradient { top: [u8; 3], bottom: [u8; 3] },
    Noise { base: [u8; 3], amplitude: u8 },
}

#[derive(Serialize, Deserialize)]
struct TextLineRec {
    text: String,
    scale: usize,
    fg: [u8; 3],
    #[serde(default)]
    bg: Option<[u8; 3]>,
    position: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct FrameSpecRec {
    width: usize,
    height: usize,
    background: BackgroundRec,
    lines: Vec<TextLineRec>,
}

pub fn frame_spec_from_json(text: &str) -> Result<FrameSpec, FormatError> {
    let rec: FrameSpecRec = serde_json::from_str(text)?;
    Ok(FrameSpec {
        width: rec.width,
        height: rec.height,
        background: match rec.background {
            BackgroundRec::Flat { color } => Background::Flat(color),
            BackgroundRec::Gradient { top, bottom } => Background::VerticalGradient { top, bottom },
            BackgroundRec::Noise { base, amplitude } => Background::Noise { base, amplitude },
        },
        lines: rec
            .lines
            .into_iter()
            .map(|l| TextLine {
                text: l.text,
                scale: l.scale,
                fg: l.fg,
                bg: l.bg,
                position: (l.position[0], l.position[1]),
            })
            .collect(),
    })
}

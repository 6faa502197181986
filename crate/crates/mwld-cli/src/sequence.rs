//! Frame-sequence ingestion from a directory of zero-padded `frame_*.ppm`
//! files or from a manifest listing one path per line.

use std::fs;
use std::path::{Path, PathBuf};

use mwld_core::RgbFrame;
use thiserror::Error;

use crate::pnm::{read_ppm, PnmError};

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Pnm {
        path: PathBuf,
        #[source]
        source: PnmError,
    },
    #[error("no input frames found in {path}")]
    EmptyInput { path: PathBuf },
    #[error("frame index gap: missing {missing}")]
    Gap { missing: String },
    #[error("duplicate frame index {index} at {path}")]
    DuplicateIndex { index: u64, path: PathBuf },
    #[error("frame dimensions differ: {path} is {found_w}x{found_h}, expected {want_w}x{want_h}")]
    DimensionMismatch {
        path: PathBuf,
        found_w: usize,
        found_h: usize,
        want_w: usize,
        want_h: usize,
    },
}

/// Loads an ordered, equally-sized frame sequence.
///
/// A directory is scanned for `frame_<digits>.ppm` entries, returned in
/// ascending numeric order regardless of filesystem enumeration order, with
/// index gaps reported by the missing file name. Any other path is treated
/// as a manifest: UTF-8 text, one path per line (relative to the manifest's
/// directory), `#` comment lines and blank lines ignored.
pub fn read_frame_sequence(path: &Path) -> Result<Vec<RgbFrame>, SequenceError> {
    let files = if path.is_dir() { scan_directory(path)? } else { read_manifest(path)? };
    if files.is_empty() {
        return Err(SequenceError::EmptyInput { path: path.to_path_buf() });
    }

    let mut frames: Vec<RgbFrame> = Vec::with_capacity(files.len());
    for file in &files {
        let bytes = fs::read(file).map_err(|source| SequenceError::Io {
            path: file.clone(),
            source,
        })?;
        let frame = read_ppm(&bytes).map_err(|source| SequenceError::Pnm {
            path: file.clone(),
            source,
        })?;
        if let Some(first) = frames.first() {
            if frame.width() != first.width() || frame.height() != first.height() {
                return Err(SequenceError::DimensionMismatch {
                    path: file.clone(),
                    found_w: frame.width(),
                    found_h: frame.height(),
                    want_w: first.width(),
                    want_h: first.height(),
                });
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}

/// Splits `frame_000123.ppm` into its index and zero-pad width.
fn frame_index(name: &str) -> Option<(u64, usize)> {
    let digits = name.strip_prefix("frame_")?.strip_suffix(".ppm")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((digits.parse().ok()?, digits.len()))
}

fn scan_directory(dir: &Path) -> Result<Vec<PathBuf>, SequenceError> {
    let entries = fs::read_dir(dir).map_err(|source| SequenceError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut indexed: Vec<(u64, usize, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| SequenceError::Io { path: dir.to_path_buf(), source })?;
        let name = entry.file_name();
        if let Some((index, pad)) = name.to_str().and_then(frame_index) {
            indexed.push((index, pad, entry.path()));
        }
    }
    indexed.sort();
    for pair in indexed.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.0 == prev.0 {
            return Err(SequenceError::DuplicateIndex { index: next.0, path: next.2.clone() });
        }
        if next.0 != prev.0 + 1 {
            return Err(SequenceError::Gap {
                missing: format!("frame_{:0width$}.ppm", prev.0 + 1, width = prev.1),
            });
        }
    }
    Ok(indexed.into_iter().map(|(_, _, p)| p).collect())
}

fn read_manifest(path: &Path) -> Result<Vec<PathBuf>, SequenceError> {
    let text = fs::read_to_string(path).map_err(|source| SequenceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(|line| base.join(line))
        .collect())
}

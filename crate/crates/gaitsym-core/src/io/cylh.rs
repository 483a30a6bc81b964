//! `CYLH` histogram container: a small binary format for whole histogram
//! sequences, plus a line-oriented CSV debug variant.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! magic   4 bytes  "CYLH"
//! version u32      1
//! h       u32
//! w       u32
//! frames  u32
//! normalized u8    0 or 1
//! bins    frames * h * w * f32, frame-major then row-major
//! ```

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{parse_err, write_atomic};
use crate::error::{Error, Result};
use crate::histogram::{CylHistogram, HistSize};

const MAGIC: &[u8; 4] = b"CYLH";
const VERSION: u32 = 1;

/// Writes a histogram sequence. All frames must share one size and one
/// normalization state.
pub fn write_histograms(path: &Path, hists: &[CylHistogram]) -> Result<()> {
    let first = hists.first().ok_or(Error::EmptyInput("histogram sequence"))?;
    let size = first.size();
    let normalized = first.is_normalized();
    for h in hists {
        if h.size() != size {
            return Err(Error::ShapeMismatch {
                expected_rows: size.rows(),
                expected_cols: size.cols(),
                got_rows: h.size().rows(),
                got_cols: h.size().cols(),
            });
        }
        if h.is_normalized() != normalized {
            return Err(Error::InvalidConfig(
                "mixed normalization states in one container".into(),
            ));
        }
    }

    let mut out = Vec::with_capacity(17 + hists.len() * size.bin_count() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(size.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(size.cols() as u32).to_le_bytes());
    out.extend_from_slice(&(hists.len() as u32).to_le_bytes());
    out.push(u8::from(normalized));
    for h in hists {
        for &b in h.bins() {
            out.extend_from_slice(&(b as f32).to_le_bytes());
        }
    }
    write_atomic(path, &out)
}

pub fn read_histograms(path: &Path) -> Result<Vec<CylHistogram>> {
    let data = std::fs::read(path)?;
    let header_err = |msg: &str| parse_err(path, 0, msg);
    if data.len() < 21 {
        return Err(header_err("file too short for a CYLH header"));
    }
    if &data[0..4] != MAGIC {
        return Err(header_err("bad magic, not a CYLH container"));
    }
    let u32_at = |off: usize| u32::from_le_bytes(data[off..off + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(header_err(&format!("unsupported CYLH version {version}")));
    }
    let h = u32_at(8) as usize;
    let w = u32_at(12) as usize;
    let frames = u32_at(16) as usize;
    let normalized = match data[20] {
        0 => false,
        1 => true,
        other => return Err(header_err(&format!("bad normalized flag {other}"))),
    };
    let size = HistSize::new(h, w)?;
    let expected = 21 + frames * size.bin_count() * 4;
    if data.len() != expected {
        return Err(header_err(&format!(
            "payload size mismatch: expected {expected} bytes, got {}",
            data.len()
        )));
    }

    let mut hists = Vec::with_capacity(frames);
    let mut off = 21;
    for _ in 0..frames {
        let mut bins = Vec::with_capacity(size.bin_count());
        for _ in 0..size.bin_count() {
            let v = f32::from_le_bytes(data[off..off + 4].try_into().unwrap());
            bins.push(v as f64);
            off += 4;
        }
        hists.push(CylHistogram::from_bins(size, bins, normalized)?);
    }
    Ok(hists)
}

/// Writes the debug CSV variant: one block per frame introduced by
/// `# frame <i>`, one histogram row per line, blank line between frames.
pub fn write_histograms_csv(path: &Path, hists: &[CylHistogram]) -> Result<()> {
    let mut out = Vec::new();
    for (i, h) in hists.iter().enumerate() {
        writeln!(out, "# frame {i}")?;
        let w = h.size().cols();
        for r in 0..h.size().rows() {
            let row: Vec<String> = (0..w).map(|c| h.bin(r, c).to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        writeln!(out)?;
    }
    write_atomic(path, &out)
}

/// Reads the debug CSV variant. Bins are taken as written; the result is
/// flagged normalized when every frame sums to 1 within 1e-6.
pub fn read_histograms_csv(path: &Path) -> Result<Vec<CylHistogram>> {
    let file = std::fs::File::open(path)?;
    let mut frames: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut current: Vec<Vec<f64>> = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !current.is_empty() {
                frames.push(std::mem::take(&mut current));
            }
            continue;
        }
        let row: Vec<f64> = trimmed
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| parse_err(path, i + 1, format!("bad bin {s:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        current.push(row);
    }
    if !current.is_empty() {
        frames.push(current);
    }
    if frames.is_empty() {
        return Err(parse_err(path, 0, "no histogram frames in file"));
    }

    let h = frames[0].len();
    let w = frames[0][0].len();
    let size = HistSize::new(h, w)?;
    let normalized = frames
        .iter()
        .all(|f| (f.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-6);
    frames
        .into_iter()
        .enumerate()
        .map(|(fi, rows)| {
            if rows.len() != h || rows.iter().any(|r| r.len() != w) {
                return Err(parse_err(
                    path,
                    0,
                    format!("frame {fi} does not match the {h}x{w} grid"),
                ));
            }
            CylHistogram::from_bins(size, rows.into_iter().flatten().collect(), normalized)
        })
        .collect()
}

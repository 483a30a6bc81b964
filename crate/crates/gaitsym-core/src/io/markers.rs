//! Calibration marker files: `label,x,y,z` rows with treadmill markers
//! `T1..T4` and walking-direction markers `W1`, `W2`.

use std::io::{BufRead, BufReader};
use std::path::Path;

use nalgebra::Point3;

use super::parse_err;
use crate::error::Result;

/// Parsed calibration markers.
#[derive(Debug, Clone)]
pub struct MarkerSet {
    /// Treadmill plane markers in file order (labels starting with `T`).
    pub treadmill: Vec<Point3<f64>>,
    /// Walking-direction pair: the direction points from `W1` toward `W2`.
    pub walk: (Point3<f64>, Point3<f64>),
}

pub fn read_markers(path: &Path) -> Result<MarkerSet> {
    let file = std::fs::File::open(path)?;
    let mut treadmill = Vec::new();
    let mut w1 = None;
    let mut w2 = None;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(
                path,
                i + 1,
                format!("expected `label,x,y,z`, got {} fields", fields.len()),
            ));
        }
        let coord = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| parse_err(path, i + 1, format!("bad coordinate {s:?}: {e}")))
        };
        let p = Point3::new(coord(fields[1])?, coord(fields[2])?, coord(fields[3])?);
        let label = fields[0].to_ascii_uppercase();
        match label.as_str() {
            "W1" => w1 = Some(p),
            "W2" => w2 = Some(p),
            l if l.starts_with('T') => treadmill.push(p),
            other => {
                return Err(parse_err(path, i + 1, format!("unknown label {other:?}")));
            }
        }
    }
    if treadmill.len() < 3 {
        return Err(parse_err(
            path,
            0,
            format!("need >= 3 treadmill markers, got {}", treadmill.len()),
        ));
    }
    match (w1, w2) {
        (Some(a), Some(b)) => Ok(MarkerSet {
            treadmill,
            walk: (a, b),
        }),
        _ => Err(parse_err(path, 0, "missing walking-direction markers W1/W2")),
    }
}

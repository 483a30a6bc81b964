//! Plain `x,y,z` CSV clouds with `#` comments.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::Point3;

use super::{parse_err, write_atomic};
use crate::error::Result;
use crate::geometry::{Frame, PointCloud};

pub fn write_cloud_csv(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut out = Vec::with_capacity(cloud.len() * 24);
    for p in cloud.points() {
        writeln!(out, "{},{},{}", p.x, p.y, p.z)?;
    }
    write_atomic(path, &out)
}

pub fn read_cloud_csv(path: &Path, frame: Frame) -> Result<PointCloud> {
    let file = std::fs::File::open(path)?;
    let mut points = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                i + 1,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let coord = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| parse_err(path, i + 1, format!("bad coordinate {s:?}: {e}")))
        };
        points.push(Point3::new(
            coord(fields[0])?,
            coord(fields[1])?,
            coord(fields[2])?,
        ));
    }
    if points.is_empty() {
        return Err(parse_err(path, 0, "no points in file"));
    }
    PointCloud::new(points, frame)
}

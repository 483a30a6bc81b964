//! ASCII PLY reader and writer for xyz vertex clouds.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::Point3;

use super::{parse_err, write_atomic};
use crate::error::{Error, Result};
use crate::geometry::{Frame, PointCloud};

/// Writes a cloud as `format ascii 1.0` PLY with float x/y/z properties.
pub fn write_ply(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut out = Vec::with_capacity(cloud.len() * 24 + 128);
    write!(
        out,
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\nend_header\n",
        cloud.len()
    )?;
    for p in cloud.points() {
        writeln!(out, "{} {} {}", p.x, p.y, p.z)?;
    }
    write_atomic(path, &out)
}

/// Reads an ASCII PLY vertex cloud. The vertex element must carry float (or
/// double) `x`, `y`, `z` properties; additional vertex properties are
/// ignored, additional elements are rejected.
pub fn read_ply(path: &Path, frame: Frame) -> Result<PointCloud> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let mut next_line = || -> Result<(usize, String)> {
        match lines.next() {
            Some((i, line)) => Ok((i + 1, line?)),
            None => Err(parse_err(path, 0, "unexpected end of file")),
        }
    };

    let (n, magic) = next_line()?;
    if magic.trim() != "ply" {
        return Err(parse_err(path, n, "missing `ply` magic line"));
    }

    let mut vertex_count: Option<usize> = None;
    let mut properties: Vec<String> = Vec::new();
    let mut in_vertex_element = false;
    loop {
        let (n, line) = next_line()?;
        let line = line.trim().to_string();
        if line == "end_header" {
            break;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("format") => {
                if tok.next() != Some("ascii") {
                    return Err(parse_err(path, n, "only ascii PLY is supported"));
                }
            }
            Some("comment") | Some("obj_info") | None => {}
            Some("element") => {
                let kind = tok.next().unwrap_or("");
                let count: usize = tok
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(path, n, "bad element count"))?;
                if kind == "vertex" {
                    vertex_count = Some(count);
                    in_vertex_element = true;
                } else if count > 0 {
                    return Err(parse_err(
                        path,
                        n,
                        format!("unsupported non-empty element `{kind}`"),
                    ));
                } else {
                    in_vertex_element = false;
                }
            }
            Some("property") => {
                if in_vertex_element {
                    let ty = tok.next().unwrap_or("");
                    if ty == "list" {
                        return Err(parse_err(path, n, "list properties are unsupported"));
                    }
                    let name = tok.next().unwrap_or("").to_string();
                    properties.push(name);
                }
            }
            Some(other) => {
                return Err(parse_err(path, n, format!("unknown header line `{other}`")));
            }
        }
    }

    let count =
        vertex_count.ok_or_else(|| parse_err(path, 0, "header has no vertex element"))?;
    let find = |name: &str| -> Result<usize> {
        properties
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| parse_err(path, 0, format!("vertex element lacks property `{name}`")))
    };
    let (ix, iy, iz) = (find("x")?, find("y")?, find("z")?);

    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, line) = next_line()?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < properties.len() {
            return Err(parse_err(
                path,
                n,
                format!(
                    "expected {} values, got {}",
                    properties.len(),
                    fields.len()
                ),
            ));
        }
        let coord = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .map_err(|e| parse_err(path, n, format!("bad coordinate {:?}: {e}", fields[i])))
        };
        points.push(Point3::new(coord(ix)?, coord(iy)?, coord(iz)?));
    }
    PointCloud::new(points, frame).map_err(|e| match e {
        Error::EmptyInput(_) => parse_err(path, 0, "vertex element is empty"),
        other => other,
    })
}

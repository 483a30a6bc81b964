//! Cylindrical occupancy histograms.
//!
//! A body-frame cloud is binned onto a cylinder whose axis is the body
//! y-axis: rows bin height between the cloud's highest and lowest points,
//! columns bin the azimuth of each point around the axis. The flattened
//! `h x w` grid is the posture descriptor everything downstream consumes;
//! splitting it at the middle column yields the two half-body grids compared
//! by the symmetry score.

use std::f64::consts::{PI, TAU};

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Frame, PointCloud};

/// Histogram dimensions: `h` vertical rows by `w` angular columns.
///
/// `w` must be even so the grid splits into two `h x w/2` halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHistSize", into = "RawHistSize")]
pub struct HistSize {
    h: usize,
    w: usize,
}

#[derive(Serialize, Deserialize)]
struct RawHistSize {
    h: usize,
    w: usize,
}

impl TryFrom<RawHistSize> for HistSize {
    type Error = Error;
    fn try_from(raw: RawHistSize) -> Result<Self> {
        HistSize::new(raw.h, raw.w)
    }
}

impl From<HistSize> for RawHistSize {
    fn from(s: HistSize) -> Self {
        RawHistSize { h: s.h, w: s.w }
    }
}

impl HistSize {
    pub fn new(h: usize, w: usize) -> Result<Self> {
        if h < 1 {
            return Err(Error::InvalidConfig("histogram height must be >= 1".into()));
        }
        if w < 2 || !w.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "histogram width must be even and >= 2, got {w}"
            )));
        }
        Ok(Self { h, w })
    }

    pub fn rows(&self) -> usize {
        self.h
    }

    pub fn cols(&self) -> usize {
        self.w
    }

    pub fn bin_count(&self) -> usize {
        self.h * self.w
    }
}

impl std::fmt::Display for HistSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.h, self.w)
    }
}

impl std::str::FromStr for HistSize {
    type Err = Error;

    /// Parses `"HxW"`, e.g. `16x16`.
    fn from_str(s: &str) -> Result<Self> {
        let (h, w) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::InvalidConfig(format!("expected HxW, got {s:?}")))?;
        let h = h
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::InvalidConfig(format!("bad histogram height {h:?}: {e}")))?;
        let w = w
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::InvalidConfig(format!("bad histogram width {w:?}: {e}")))?;
        HistSize::new(h, w)
    }
}

/// Vertical span of a cloud: the heights of its top and bottom points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalExtent {
    max_y: f64,
    min_y: f64,
}

impl VerticalExtent {
    pub fn new(max_y: f64, min_y: f64) -> Result<Self> {
        if max_y.partial_cmp(&min_y) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DegenerateExtent);
        }
        Ok(Self { max_y, min_y })
    }

    pub fn from_cloud(cloud: &PointCloud) -> Result<Self> {
        let mut max_y = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        for p in cloud.points() {
            max_y = max_y.max(p.y);
            min_y = min_y.min(p.y);
        }
        Self::new(max_y, min_y)
    }

    pub fn max_y(&self) -> f64 {
        self.max_y
    }

    pub fn min_y(&self) -> f64 {
        self.min_y
    }
}

/// Azimuth of the planar vector `(vx, vz)` in `[0, 2*pi)`.
///
/// Counter-clockwise from the +x direction toward +z, computed as
/// `(2*pi + sgn(vz) * acos(vx / |v|)) mod 2*pi`. Conventions at the seams:
/// `vz = 0` resolves to 0 for `vx > 0` and `pi` for `vx < 0`; the zero
/// vector (a point on the cylinder axis) resolves to 0.
fn azimuth(vx: f64, vz: f64) -> f64 {
    let norm = (vx * vx + vz * vz).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    if vz == 0.0 {
        return if vx > 0.0 { 0.0 } else { PI };
    }
    let ratio = (vx / norm).clamp(-1.0, 1.0);
    (TAU + vz.signum() * ratio.acos()) % TAU
}

/// Sector of a body-frame point, with an extra rotation of the cylinder by
/// `angular_offset` radians before column binning.
pub fn sector_index_with_offset(
    p: &Point3<f64>,
    extent: VerticalExtent,
    size: HistSize,
    angular_offset: f64,
) -> (usize, usize) {
    let row_f = (size.h as f64 * (extent.max_y - p.y) / (extent.max_y - extent.min_y)).floor();
    let row = if row_f < 0.0 {
        0
    } else {
        (row_f as usize).min(size.h - 1)
    };

    let angle = (azimuth(p.x, p.z) + angular_offset).rem_euclid(TAU);
    // rem_euclid can round up to exactly 2*pi; the clamp mirrors the row clamp.
    let col = ((size.w as f64 / TAU * angle).floor() as usize).min(size.w - 1);
    (row, col)
}

/// Zero-based (row, column) sector of a body-frame point.
///
/// The row is the clamped floor of the point's normalized depth below the
/// cloud top; the column bins the azimuth around the y-axis.
pub fn sector_index(p: &Point3<f64>, extent: VerticalExtent, size: HistSize) -> (usize, usize) {
    sector_index_with_offset(p, extent, size, 0.0)
}

/// Flattened cylindrical occupancy grid of one point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct CylHistogram {
    size: HistSize,
    bins: Vec<f64>, // row-major
    normalized: bool,
}

impl CylHistogram {
    /// Wraps an existing grid. `bins` is row-major with `h * w` entries, all
    /// non-negative; `normalized` asserts the bins already sum to 1.
    pub fn from_bins(size: HistSize, bins: Vec<f64>, normalized: bool) -> Result<Self> {
        if bins.len() != size.bin_count() {
            return Err(Error::ShapeMismatch {
                expected_rows: size.h,
                expected_cols: size.w,
                got_rows: bins.len() / size.w.max(1),
                got_cols: size.w,
            });
        }
        if bins.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidConfig(
                "histogram bins must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            size,
            bins,
            normalized,
        })
    }

    pub fn size(&self) -> HistSize {
        self.size
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn bin(&self, row: usize, col: usize) -> f64 {
        self.bins[row * self.size.w + col]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn total(&self) -> f64 {
        self.bins.iter().sum()
    }
}

/// Which side of the body a half-grid (or a limb) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One half of a cylindrical histogram: `h` rows by `w/2` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfHistogram {
    rows: usize,
    cols: usize,
    bins: Vec<f64>, // row-major
    side: Side,
}

impl HalfHistogram {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn bin(&self, row: usize, col: usize) -> f64 {
        self.bins[row * self.cols + col]
    }

    pub fn side(&self) -> Side {
        self.side
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

/// Bins a body-frame cloud into an `h x w` occupancy histogram.
///
/// The vertical extent is taken from the cloud itself; `angular_offset`
/// rotates the cylinder before column binning (see [`recenter_offset`]).
/// Bins hold raw point counts; the total equals the cloud size.
pub fn estimate(cloud: &PointCloud, size: HistSize, angular_offset: f64) -> Result<CylHistogram> {
    if cloud.frame() != Frame::Body {
        return Err(Error::FrameMismatch {
            expected: Frame::Body,
            got: cloud.frame(),
        });
    }
    let extent = VerticalExtent::from_cloud(cloud)?;
    let mut bins = vec![0.0; size.bin_count()];
    for p in cloud.points() {
        let (r, c) = sector_index_with_offset(p, extent, size, angular_offset);
        bins[r * size.w + c] += 1.0;
    }
    Ok(CylHistogram {
        size,
        bins,
        normalized: false,
    })
}

/// Angular offset that rotates the head region onto the grid's central
/// column boundary.
///
/// Takes the circular center of mass of the top quarter rows and returns the
/// rotation that moves it to the angle `pi` (the boundary between columns
/// `w/2 - 1` and `w/2`), snapped to a whole number of columns. The snap
/// matters: a whole-column rotation relabels columns without re-binning any
/// point, so recentering an already axis-aligned body can never smear mass
/// across the body midline. Returns 0 when the top rows are empty or have no
/// preferred direction. Estimated once per sequence and reused, so the
/// frame-to-frame left-right signal is untouched.
pub fn recenter_offset(hist: &CylHistogram) -> f64 {
    let size = hist.size;
    let top_rows = (size.h / 4).max(1);
    let col_width = TAU / size.w as f64;

    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    let mut mass = 0.0;
    for c in 0..size.w {
        let m: f64 = (0..top_rows).map(|r| hist.bin(r, c)).sum();
        let theta = (c as f64 + 0.5) * col_width;
        sin_sum += m * theta.sin();
        cos_sum += m * theta.cos();
        mass += m;
    }
    if mass <= 0.0 {
        return 0.0;
    }
    let resultant = (sin_sum * sin_sum + cos_sum * cos_sum).sqrt();
    if resultant < 1e-9 * mass {
        return 0.0; // no preferred direction
    }
    let mean_angle = sin_sum.atan2(cos_sum).rem_euclid(TAU);
    let columns = ((PI - mean_angle) / col_width).round();
    let mut offset = columns * col_width;
    if offset > PI {
        offset -= TAU;
    } else if offset <= -PI {
        offset += TAU;
    }
    offset
}

/// Divides every bin by the grid total so the bins sum to 1.
pub fn normalize(hist: &CylHistogram) -> Result<CylHistogram> {
    if hist.normalized {
        return Ok(hist.clone());
    }
    let total = hist.total();
    if total <= 0.0 {
        return Err(Error::EmptyInput("zero-sum histogram"));
    }
    let bins = hist.bins.iter().map(|b| b / total).collect();
    Ok(CylHistogram {
        size: hist.size,
        bins,
        normalized: true,
    })
}

/// Splits a histogram at the middle column into (left, right) halves.
///
/// With the body centered (head at the boundary between columns `w/2 - 1`
/// and `w/2`) the left half is columns `[0, w/2)` and the right half is
/// columns `[w/2, w)`.
pub fn split(hist: &CylHistogram) -> (HalfHistogram, HalfHistogram) {
    let size = hist.size;
    let half_w = size.w / 2;
    let mut left = Vec::with_capacity(size.h * half_w);
    let mut right = Vec::with_capacity(size.h * half_w);
    for r in 0..size.h {
        let row = &hist.bins[r * size.w..(r + 1) * size.w];
        left.extend_from_slice(&row[..half_w]);
        right.extend_from_slice(&row[half_w..]);
    }
    (
        HalfHistogram {
            rows: size.h,
            cols: half_w,
            bins: left,
            side: Side::Left,
        },
        HalfHistogram {
            rows: size.h,
            cols: half_w,
            bins: right,
            side: Side::Right,
        },
    )
}

/// Reverses the column order of every row. Involutive; realizes the
/// anatomical left-right mirror on a half grid.
pub fn flip(half: &HalfHistogram) -> HalfHistogram {
    let mut bins = Vec::with_capacity(half.bins.len());
    for r in 0..half.rows {
        let row = &half.bins[r * half.cols..(r + 1) * half.cols];
        bins.extend(row.iter().rev());
    }
    HalfHistogram {
        rows: half.rows,
        cols: half.cols,
        bins,
        side: half.side,
    }
}

/// L1 distance between two equal-shaped half grids.
pub fn diff(a: &HalfHistogram, b: &HalfHistogram) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch {
            expected_rows: a.rows,
            expected_cols: a.cols,
            got_rows: b.rows,
            got_cols: b.cols,
        });
    }
    Ok(a.bins
        .iter()
        .zip(&b.bins)
        .map(|(x, y)| (x - y).abs())
        .sum())
}

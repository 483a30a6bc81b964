//! Left-right symmetry scoring of histogram sequences.
//!
//! A sequence is cut into fixed-length segments; each segment becomes a left
//! half-body sequence `L` and a flipped right sequence `Rf`. For every
//! shifting delay `d` the mean L1 distance over the `l - |d|` overlapping
//! frame pairs is computed with `L` as the reference, and the segment score
//! is the minimum over the delay set. Lower scores mean more symmetric gait.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::{diff, flip, split, CylHistogram, HalfHistogram, HistSize, Side};

/// Ordered frames of one half-body within a segment.
#[derive(Debug, Clone)]
pub struct HalfSequence {
    frames: Vec<HalfHistogram>,
    side: Side,
    flipped: bool,
}

impl HalfSequence {
    pub fn new(frames: Vec<HalfHistogram>, side: Side, flipped: bool) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::EmptyInput("half sequence"));
        }
        let (rows, cols) = (frames[0].rows(), frames[0].cols());
        for f in &frames[1..] {
            if f.rows() != rows || f.cols() != cols {
                return Err(Error::ShapeMismatch {
                    expected_rows: rows,
                    expected_cols: cols,
                    got_rows: f.rows(),
                    got_cols: f.cols(),
                });
            }
        }
        Ok(Self {
            frames,
            side,
            flipped,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn frames(&self) -> &[HalfHistogram] {
        &self.frames
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }
}

/// Sorted set of integer frame delays swept during cross-correlation.
///
/// Delays are validated against the segment length at evaluation time:
/// every `|d|` must be smaller than the segment length so the overlap keeps
/// at least one frame pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DelaySet {
    delays: Vec<i64>,
}

impl DelaySet {
    pub fn new(mut delays: Vec<i64>) -> Result<Self> {
        if delays.is_empty() {
            return Err(Error::EmptyInput("delay set"));
        }
        delays.sort_unstable();
        delays.dedup();
        Ok(Self { delays })
    }

    /// Inclusive range of delays, e.g. `range(-50, 50)`.
    pub fn range(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidConfig(format!(
                "empty delay range [{min}, {max}]"
            )));
        }
        Ok(Self {
            delays: (min..=max).collect(),
        })
    }

    pub fn delays(&self) -> &[i64] {
        &self.delays
    }

    pub fn max_magnitude(&self) -> i64 {
        self.delays
            .iter()
            .map(|d| d.abs())
            .max()
            .expect("delay set is non-empty")
    }
}

impl Default for DelaySet {
    /// Delays in `[-50, 50]`.
    fn default() -> Self {
        Self::range(-50, 50).expect("valid default range")
    }
}

impl TryFrom<Vec<i64>> for DelaySet {
    type Error = Error;
    fn try_from(delays: Vec<i64>) -> Result<Self> {
        DelaySet::new(delays)
    }
}

impl From<DelaySet> for Vec<i64> {
    fn from(d: DelaySet) -> Vec<i64> {
        d.delays
    }
}

/// Score of one segment: the minimum mean L1 distance over the delay sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentScore {
    /// Position of the segment within its sequence (0 when scored alone).
    pub segment_index: usize,
    /// Minimum mean half-histogram distance; lower = more symmetric.
    pub score: f64,
    /// Delay achieving the minimum. Ties resolve to the smallest magnitude,
    /// negative before positive.
    pub best_delay: i64,
    /// Frames in the overlap at the best delay (`l - |best_delay|`).
    pub overlap_length: usize,
}

/// Scores for a whole sequence plus the configuration that produced them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub hist_size: HistSize,
    pub segment_len: usize,
    pub delays: DelaySet,
    pub per_segment: Vec<SegmentScore>,
    /// Arithmetic mean of the per-segment scores.
    pub mean_score: f64,
    pub frames_used: usize,
    pub frames_discarded: usize,
}

/// Cuts `hists` into consecutive non-overlapping segments of `seg_len`
/// frames. The trailing remainder is discarded (and visible to callers as
/// `hists.len() - result.len() * seg_len`).
pub fn segment(hists: &[CylHistogram], seg_len: usize) -> Result<Vec<&[CylHistogram]>> {
    if seg_len < 2 {
        return Err(Error::InvalidConfig(format!(
            "segment length must be >= 2, got {seg_len}"
        )));
    }
    if hists.len() < seg_len {
        return Err(Error::InsufficientFrames {
            needed: seg_len,
            got: hists.len(),
        });
    }
    Ok(hists.chunks_exact(seg_len).collect())
}

/// Splits every (normalized) histogram of a segment and returns the left
/// sequence and the flipped right sequence, both in frame order.
pub fn half_sequences(seg: &[CylHistogram]) -> Result<(HalfSequence, HalfSequence)> {
    if seg.is_empty() {
        return Err(Error::EmptyInput("segment"));
    }
    let size = seg[0].size();
    let mut left = Vec::with_capacity(seg.len());
    let mut right_flipped = Vec::with_capacity(seg.len());
    for hist in seg {
        if !hist.is_normalized() {
            return Err(Error::NotNormalized);
        }
        if hist.size() != size {
            return Err(Error::ShapeMismatch {
                expected_rows: size.rows(),
                expected_cols: size.cols(),
                got_rows: hist.size().rows(),
                got_cols: hist.size().cols(),
            });
        }
        let (l, r) = split(hist);
        left.push(l);
        right_flipped.push(flip(&r));
    }
    Ok((
        HalfSequence::new(left, Side::Left, false)?,
        HalfSequence::new(right_flipped, Side::Right, true)?,
    ))
}

/// Mean distance over the overlap of `reference` and `other` shifted by `d`.
fn mean_diff_at_delay(reference: &HalfSequence, other: &HalfSequence, d: i64) -> Result<f64> {
    let l = reference.len();
    let overlap = l - d.unsigned_abs() as usize;
    let ref_start = d.max(0) as usize;
    let other_start = (-d).max(0) as usize;
    let mut sum = 0.0;
    for i in 0..overlap {
        sum += diff(
            &reference.frames()[ref_start + i],
            &other.frames()[other_start + i],
        )?;
    }
    Ok(sum / overlap as f64)
}

/// Sweeps the delay set and returns the best (lowest) mean distance.
///
/// `reference` is the fixed sequence; positive delays advance into it and
/// negative delays advance into `other`. Equal scores resolve to the delay
/// of smallest magnitude, negative before positive.
pub fn cross_correlate(
    reference: &HalfSequence,
    other: &HalfSequence,
    delays: &DelaySet,
) -> Result<SegmentScore> {
    let l = reference.len();
    if other.len() != l {
        return Err(Error::ShapeMismatch {
            expected_rows: l,
            expected_cols: reference.frames()[0].cols(),
            got_rows: other.len(),
            got_cols: other.frames()[0].cols(),
        });
    }
    let mut best: Option<(f64, i64)> = None;
    for &d in delays.delays() {
        if d.unsigned_abs() as usize >= l {
            return Err(Error::DelayTooLarge { delay: d, len: l });
        }
        let score = mean_diff_at_delay(reference, other, d)?;
        let better = match best {
            None => true,
            Some((s, bd)) => {
                score < s
                    || (score == s
                        && (d.abs() < bd.abs() || (d.abs() == bd.abs() && d < bd)))
            }
        };
        if better {
            best = Some((score, d));
        }
    }
    let (score, best_delay) = best.expect("delay set is non-empty");
    Ok(SegmentScore {
        segment_index: 0,
        score,
        best_delay,
        overlap_length: l - best_delay.unsigned_abs() as usize,
    })
}

/// Runs the whole per-sequence assessment: segmentation, half-body
/// separation and the delay sweep, then averages the segment scores.
///
/// Histograms may be raw counts; they are normalized here so both halves of
/// a frame share one scale.
pub fn assess(
    hists: &[CylHistogram],
    seg_len: usize,
    delays: &DelaySet,
) -> Result<SymmetryReport> {
    if delays.max_magnitude() as usize >= seg_len {
        return Err(Error::DelayTooLarge {
            delay: delays.max_magnitude(),
            len: seg_len,
        });
    }
    let normalized: Vec<CylHistogram> = hists
        .iter()
        .map(crate::histogram::normalize)
        .collect::<Result<_>>()?;
    let segments = segment(&normalized, seg_len)?;

    let mut per_segment = Vec::with_capacity(segments.len());
    for (index, seg) in segments.iter().enumerate() {
        let (left, right_flipped) = half_sequences(seg)?;
        let mut score = cross_correlate(&left, &right_flipped, delays)?;
        score.segment_index = index;
        per_segment.push(score);
    }
    let mean_score =
        per_segment.iter().map(|s| s.score).sum::<f64>() / per_segment.len() as f64;
    let frames_used = per_segment.len() * seg_len;
    Ok(SymmetryReport {
        hist_size: normalized[0].size(),
        segment_len: seg_len,
        delays: delays.clone(),
        per_segment,
        mean_score,
        frames_used,
        frames_discarded: hists.len() - frames_used,
    })
}

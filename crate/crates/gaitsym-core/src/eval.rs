//! Binary-classification evaluation of symmetry scores: ROC curve, AUC,
//! EER and the histogram-size sensitivity sweep.
//!
//! The positive class is the abnormal (asymmetric) gait, so higher scores
//! mean more positive. Tied scores are processed as a single threshold step,
//! which makes the trapezoidal AUC equal the rank-sum statistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::histogram::HistSize;
use crate::pipeline::{process_sequence, PipelineConfig};
use crate::symmetry::SymmetryReport;

/// Ground-truth class of a gait sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Normal,
    Abnormal,
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" => Ok(Label::Normal),
            "abnormal" => Ok(Label::Abnormal),
            other => Err(Error::InvalidConfig(format!(
                "label must be `normal` or `abnormal`, got {other:?}"
            ))),
        }
    }
}

/// One scored sample with its class and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledScore {
    pub score: f64,
    pub label: Label,
    pub subject_id: String,
    pub gait_type: String,
}

/// One operating point of the ROC sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    /// Samples scoring at or above this value are classified abnormal.
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve with its area and equal-error-rate summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RocResult {
    /// Sweep points in descending threshold order, from (0, 0) to (1, 1).
    pub points: Vec<RocPoint>,
    /// Trapezoidal area under the curve (equals the rank-sum statistic).
    pub auc: f64,
    /// Error rate where the false-positive rate equals the false-negative
    /// rate, linearly interpolated between bracketing sweep points.
    pub eer: f64,
    pub eer_threshold: f64,
    pub n_positive: usize,
    pub n_negative: usize,
}

/// Full-threshold-sweep ROC over the scores.
///
/// Needs at least one sample of each class; deterministic and independent
/// of input order.
pub fn roc(scores: &[LabeledScore]) -> Result<RocResult> {
    for s in scores {
        if !s.score.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "non-finite score for subject {:?}",
                s.subject_id
            )));
        }
    }
    let n_positive = scores.iter().filter(|s| s.label == Label::Abnormal).count();
    let n_negative = scores.len() - n_positive;
    if n_positive == 0 || n_negative == 0 {
        return Err(Error::SingleClass);
    }

    let mut ordered: Vec<(f64, bool)> = scores
        .iter()
        .map(|s| (s.score, s.label == Label::Abnormal))
        .collect();
    ordered.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < ordered.len() {
        let threshold = ordered[i].0;
        // Consume the whole tie group as one step.
        while i < ordered.len() && ordered[i].0 == threshold {
            if ordered[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / n_negative as f64,
            tpr: tp as f64 / n_positive as f64,
        });
    }

    let mut auc = 0.0;
    for w in points.windows(2) {
        auc += (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0;
    }

    let (eer, eer_threshold) = interpolate_eer(&points);
    Ok(RocResult {
        points,
        auc,
        eer,
        eer_threshold,
        n_positive,
        n_negative,
    })
}

/// Finds the crossing of `fpr = 1 - tpr` along the sweep.
fn interpolate_eer(points: &[RocPoint]) -> (f64, f64) {
    // balance(p) = fpr + tpr - 1, monotone from -1 to +1 along the sweep.
    let balance = |p: &RocPoint| p.fpr + p.tpr - 1.0;
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (da, db) = (balance(a), balance(b));
        if db >= 0.0 {
            if db == 0.0 {
                return (b.fpr, b.threshold);
            }
            let s = -da / (db - da);
            let eer = a.fpr + s * (b.fpr - a.fpr);
            let threshold = if a.threshold.is_finite() {
                a.threshold + s * (b.threshold - a.threshold)
            } else {
                b.threshold
            };
            return (eer, threshold);
        }
    }
    // The sweep always ends at (1, 1) where balance is +1.
    let last = points.last().expect("sweep has points");
    (last.fpr, last.threshold)
}

/// Which per-sequence quantity feeds the ROC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    /// Every segment score is one sample.
    Segments,
    /// One mean score per sequence.
    Mean,
}

impl std::fmt::Display for ScoreMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScoreMode::Segments => write!(f, "segments"),
            ScoreMode::Mean => write!(f, "mean"),
        }
    }
}

/// A symmetry report with its ground-truth class.
#[derive(Debug, Clone)]
pub struct LabeledReport {
    pub report: SymmetryReport,
    pub label: Label,
    pub subject_id: String,
    pub gait_type: String,
}

/// ROC over a labeled report collection in the chosen score mode.
pub fn evaluate_dataset(reports: &[LabeledReport], mode: ScoreMode) -> Result<RocResult> {
    let mut scores = Vec::new();
    for r in reports {
        match mode {
            ScoreMode::Mean => scores.push(LabeledScore {
                score: r.report.mean_score,
                label: r.label,
                subject_id: r.subject_id.clone(),
                gait_type: r.gait_type.clone(),
            }),
            ScoreMode::Segments => {
                for seg in &r.report.per_segment {
                    scores.push(LabeledScore {
                        score: seg.score,
                        label: r.label,
                        subject_id: r.subject_id.clone(),
                        gait_type: r.gait_type.clone(),
                    });
                }
            }
        }
    }
    roc(&scores)
}

/// A cloud sequence with its class, the unit of the size sweep.
#[derive(Debug, Clone)]
pub struct LabeledSequence {
    pub clouds: Vec<PointCloud>,
    pub label: Label,
    pub subject_id: String,
    pub gait_type: String,
}

/// One size's evaluation within a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub size: HistSize,
    pub roc: RocResult,
}

/// Re-runs the full pipeline at every histogram size and evaluates each.
pub fn size_sweep(
    sequences: &[LabeledSequence],
    sizes: &[HistSize],
    cfg: &PipelineConfig,
    mode: ScoreMode,
) -> Result<Vec<SweepRow>> {
    if sequences.is_empty() {
        return Err(Error::EmptyInput("sequence set"));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let sized_cfg = cfg.with_hist_size(size);
        let reports: Vec<LabeledReport> = sequences
            .iter()
            .map(|seq| {
                Ok(LabeledReport {
                    report: process_sequence(&seq.clouds, &sized_cfg)?,
                    label: seq.label,
                    subject_id: seq.subject_id.clone(),
                    gait_type: seq.gait_type.clone(),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(SweepRow {
            size,
            roc: evaluate_dataset(&reports, mode)?,
        });
    }
    Ok(rows)
}

/// Renders sweep rows as an aligned text table: one column per size, AUC and
/// EER rows grouped per score mode.
pub fn format_sweep_table(sections: &[(ScoreMode, &[SweepRow])]) -> String {
    let mut sizes: Vec<HistSize> = Vec::new();
    for (_, rows) in sections {
        for row in rows.iter() {
            if !sizes.contains(&row.size) {
                sizes.push(row.size);
            }
        }
    }
    let col_w = sizes
        .iter()
        .map(|s| s.to_string().len())
        .max()
        .unwrap_or(5)
        .max(6)
        + 2;

    let mut out = String::new();
    out.push_str(&format!("{:<12}{:<10}", "Measure on", "Quantity"));
    for s in &sizes {
        out.push_str(&format!("{:<col_w$}", s.to_string()));
    }
    out.push('\n');
    for (mode, rows) in sections {
        let value = |size: &HistSize, f: &dyn Fn(&SweepRow) -> f64| -> String {
            rows.iter()
                .find(|r| r.size == *size)
                .map(|r| format!("{:.3}", f(r)))
                .unwrap_or_else(|| "-".into())
        };
        let mode_name = match mode {
            ScoreMode::Segments => "Segments",
            ScoreMode::Mean => "Mean",
        };
        out.push_str(&format!("{:<12}{:<10}", mode_name, "AUC"));
        for s in &sizes {
            out.push_str(&format!("{:<col_w$}", value(s, &|r| r.roc.auc)));
        }
        out.push('\n');
        out.push_str(&format!("{:<12}{:<10}", "", "EER"));
        for s in &sizes {
            out.push_str(&format!("{:<col_w$}", value(s, &|r| r.roc.eer)));
        }
        out.push('\n');
    }
    out
}

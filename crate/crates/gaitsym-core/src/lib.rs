//! Gait symmetry assessment from sequences of 3D point clouds.
//!
//! The pipeline describes each body-frame cloud with a cylindrical occupancy
//! histogram, splits the histogram sequence into left and right half-body
//! sequences, and scores their similarity with a delay-swept
//! cross-correlation: the segment score is the minimum over delays of the
//! mean L1 distance between the left halves and the flipped, shifted right
//! halves. Low scores mean symmetric gait.
//!
//! Modules:
//! - [`geometry`]: clouds, plane fitting, mirror reflection, camera-to-body
//!   transform.
//! - [`histogram`]: cylindrical occupancy grids, normalization, half split.
//! - [`symmetry`]: segmentation and the delay-swept score.
//! - [`synth`]: seedable synthetic walker with controllable asymmetry.
//! - [`eval`]: ROC/AUC/EER and the histogram-size sweep.
//! - [`pipeline`]: end-to-end per-sequence processing.
//! - [`io`]: point-cloud, histogram, report and manifest file formats.

pub mod error;
pub mod eval;
pub mod geometry;
pub mod histogram;
pub mod io;
pub mod pipeline;
pub mod symmetry;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{
    evaluate_dataset, format_sweep_table, roc, size_sweep, Label, LabeledReport, LabeledScore,
    LabeledSequence, RocPoint, RocResult, ScoreMode, SweepRow,
};
pub use geometry::{
    build_body_frame, fit_plane, merge, reflect, transform, BodyFrame, Frame, Plane, PlaneFit,
    PointCloud,
};
pub use histogram::{
    diff, estimate, flip, normalize, recenter_offset, sector_index, sector_index_with_offset,
    split, CylHistogram, HalfHistogram, HistSize, Side, VerticalExtent,
};
pub use pipeline::{estimate_sequence, process_histograms, process_sequence, PipelineConfig};
pub use symmetry::{
    assess, cross_correlate, half_sequences, segment, DelaySet, HalfSequence, SegmentScore,
    SymmetryReport,
};
pub use synth::{generate, generate_mirror_pair, AsymmetryKind, AsymmetrySpec, GaitParams};

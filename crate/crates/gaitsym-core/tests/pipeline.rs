//! Cross-module integration: camera-frame ingestion through calibration
//! markers, container round-trips and end-to-end determinism.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};

use gaitsym_core::geometry::{build_body_frame, transform, Frame, PointCloud};
use gaitsym_core::io;
use gaitsym_core::pipeline::{process_histograms, process_sequence, PipelineConfig};
use gaitsym_core::synth::{generate, AsymmetrySpec, GaitParams};

fn small_cfg() -> PipelineConfig {
    PipelineConfig {
        segment_len: 60,
        delays: gaitsym_core::symmetry::DelaySet::range(-20, 20).unwrap(),
        ..PipelineConfig::default()
    }
}

/// A camera pose: p_cam = rot * p_body + shift.
struct CameraPose {
    rot: Rotation3<f64>,
    shift: Vector3<f64>,
}

impl CameraPose {
    fn new() -> Self {
        let axis = Unit::new_normalize(Vector3::new(0.3, 1.0, -0.2));
        Self {
            rot: Rotation3::from_axis_angle(&axis, 0.6),
            shift: Vector3::new(3.0, 1.2, -2.5),
        }
    }

    fn to_camera(&self, cloud: &PointCloud) -> PointCloud {
        let points = cloud
            .points()
            .iter()
            .map(|p| self.rot * p + self.shift)
            .collect();
        PointCloud::new(points, Frame::Camera).unwrap()
    }
}

#[test]
fn camera_frame_ingestion_matches_body_frame_scores() {
    let params = GaitParams {
        points_per_frame: 800,
        seed: 21,
        ..GaitParams::default()
    };
    let body_clouds = generate(&params, &AsymmetrySpec::none(), 130).unwrap();
    let cfg = small_cfg();
    let direct = process_sequence(&body_clouds, &cfg).unwrap();

    // Same scene observed from a rotated, shifted camera, with treadmill
    // markers below the feet and walking-direction markers along body x.
    let pose = CameraPose::new();
    let floor_y = -1.0;
    let body_markers = [
        Point3::new(-1.0, floor_y, -0.8),
        Point3::new(1.0, floor_y, -0.8),
        Point3::new(-1.0, floor_y, 0.8),
        Point3::new(1.0, floor_y, 0.8),
    ];
    let cam_markers: Vec<Point3<f64>> =
        body_markers.iter().map(|p| pose.rot * p + pose.shift).collect();
    let cam_walk = (
        pose.rot * Point3::new(0.0, floor_y, 0.0) + pose.shift,
        pose.rot * Point3::new(1.0, floor_y, 0.0) + pose.shift,
    );

    let recovered: Vec<PointCloud> = body_clouds
        .iter()
        .map(|c| {
            let cam = pose.to_camera(c);
            let frame = build_body_frame(&cam_markers, cam_walk, &cam).unwrap();
            transform(&cam, &frame).unwrap()
        })
        .collect();
    let via_camera = process_sequence(&recovered, &cfg).unwrap();

    // The recovered body frame re-centers each frame at its own centroid,
    // so scores agree closely but not bitwise.
    assert!(
        (via_camera.mean_score - direct.mean_score).abs() < 0.05,
        "direct {} vs via-camera {}",
        direct.mean_score,
        via_camera.mean_score
    );
}

#[test]
fn recovered_frames_are_orthonormal_and_centered() {
    let params = GaitParams {
        points_per_frame: 400,
        seed: 8,
        ..GaitParams::default()
    };
    let body = &generate(&params, &AsymmetrySpec::none(), 1).unwrap()[0];
    let pose = CameraPose::new();
    let cam = pose.to_camera(body);
    let floor_y = -1.0;
    let markers: Vec<Point3<f64>> = [
        Point3::new(-1.0, floor_y, -0.8),
        Point3::new(1.0, floor_y, -0.8),
        Point3::new(-1.0, floor_y, 0.8),
        Point3::new(1.0, floor_y, 0.8),
    ]
    .iter()
    .map(|p| pose.rot * p + pose.shift)
    .collect();
    let walk = (
        pose.rot * Point3::new(0.0, floor_y, 0.0) + pose.shift,
        pose.rot * Point3::new(1.0, floor_y, 0.0) + pose.shift,
    );

    let frame = build_body_frame(&markers, walk, &cam).unwrap();
    let r = frame.rotation();
    let gram = r.transpose() * r;
    assert!((gram - Matrix3::identity()).abs().max() < 1e-9);
    assert!((r.determinant() - 1.0).abs() < 1e-9);

    let out = transform(&cam, &frame).unwrap();
    assert!(out.centroid().coords.norm() < 1e-9);
}

#[test]
fn container_round_trip_preserves_scores_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let params = GaitParams {
        points_per_frame: 500,
        seed: 33,
        ..GaitParams::default()
    };
    let clouds = generate(&params, &AsymmetrySpec::none(), 130).unwrap();
    let cfg = small_cfg();

    let hists =
        gaitsym_core::pipeline::estimate_sequence(&clouds, cfg.hist_size, cfg.recenter).unwrap();
    let direct = process_histograms(&hists, &cfg).unwrap();

    let path = dir.path().join("seq.cylh");
    io::write_histograms(&path, &hists).unwrap();
    let loaded = io::read_histograms(&path).unwrap();
    let via_container = process_histograms(&loaded, &cfg).unwrap();

    // Counts survive the f32 container exactly, so scores are bitwise equal.
    assert_eq!(
        direct.mean_score.to_bits(),
        via_container.mean_score.to_bits()
    );
    for (a, b) in direct.per_segment.iter().zip(&via_container.per_segment) {
        assert_eq!(a.score.to_bits(), b.score.to_bits());
        assert_eq!(a.best_delay, b.best_delay);
    }
}

#[test]
fn ply_sequence_round_trip_preserves_scores() {
    let dir = tempfile::tempdir().unwrap();
    let params = GaitParams {
        points_per_frame: 300,
        seed: 4,
        ..GaitParams::default()
    };
    let clouds = generate(&params, &AsymmetrySpec::none(), 65).unwrap();
    for (i, c) in clouds.iter().enumerate() {
        io::write_ply(&dir.path().join(format!("f_{i:04}.ply")), c).unwrap();
    }
    let loaded = io::read_cloud_sequence(dir.path(), Frame::Body).unwrap();
    assert_eq!(loaded.len(), clouds.len());

    let cfg = PipelineConfig {
        segment_len: 30,
        delays: gaitsym_core::symmetry::DelaySet::range(-10, 10).unwrap(),
        ..PipelineConfig::default()
    };
    let a = process_sequence(&clouds, &cfg).unwrap();
    let b = process_sequence(&loaded, &cfg).unwrap();
    // Shortest-roundtrip float formatting makes the PLY pass lossless.
    assert_eq!(a.mean_score.to_bits(), b.mean_score.to_bits());
}

#[test]
fn mean_mode_dominates_segments_mode_on_moderate_asymmetry() {
    use gaitsym_core::eval::{evaluate_dataset, size_sweep, Label, LabeledReport, LabeledSequence, ScoreMode};
    use gaitsym_core::synth::AsymmetryKind;
    use gaitsym_core::Side;

    // Moderate perturbation so the classes overlap at segment level and
    // averaging has something to win.
    let cfg = PipelineConfig::default();
    let corpus: Vec<LabeledSequence> = (0..8u64)
        .map(|i| {
            let params = GaitParams {
                seed: 300 + i,
                points_per_frame: 700,
                ..GaitParams::default()
            };
            let (asym, label) = if i < 4 {
                (AsymmetrySpec::none(), Label::Normal)
            } else {
                (
                    AsymmetrySpec::new(AsymmetryKind::PhaseShift, Side::Left, 0.12).unwrap(),
                    Label::Abnormal,
                )
            };
            LabeledSequence {
                clouds: generate(&params, &asym, 360).unwrap(),
                label,
                subject_id: format!("s{i}"),
                gait_type: "walk".into(),
            }
        })
        .collect();

    let reports: Vec<LabeledReport> = corpus
        .iter()
        .map(|seq| LabeledReport {
            report: process_sequence(&seq.clouds, &cfg).unwrap(),
            label: seq.label,
            subject_id: seq.subject_id.clone(),
            gait_type: seq.gait_type.clone(),
        })
        .collect();
    let mean = evaluate_dataset(&reports, ScoreMode::Mean).unwrap();
    let segments = evaluate_dataset(&reports, ScoreMode::Segments).unwrap();
    assert!(
        mean.auc >= segments.auc,
        "mean auc {} < segments auc {}",
        mean.auc,
        segments.auc
    );

    // A single-size sweep reduces to the plain evaluation.
    let size = cfg.hist_size;
    let rows = size_sweep(&corpus, &[size], &cfg, ScoreMode::Mean).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].roc.auc, mean.auc);
    assert_eq!(rows[0].roc.eer, mean.eer);
}

#[test]
fn full_pipeline_is_deterministic() {
    let params = GaitParams {
        points_per_frame: 400,
        seed: 90,
        ..GaitParams::default()
    };
    let cfg = small_cfg();
    let run = || {
        let clouds = generate(&params, &AsymmetrySpec::none(), 70).unwrap();
        process_sequence(&clouds, &cfg).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.mean_score.to_bits(), b.mean_score.to_bits());
    assert_eq!(a.per_segment.len(), b.per_segment.len());
}

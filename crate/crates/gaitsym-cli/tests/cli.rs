//! End-to-end tests of the `gaitsym` binary: exit codes, output files,
//! reproducibility and the container/caching paths.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaitsym"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_gen_config(path: &Path, seed: u64, frames: usize) {
    std::fs::write(
        path,
        format!(
            "frames = {frames}\n[gait]\nseed = {seed}\npoints_per_frame = 200\nnoise_sigma = 0.003\n"
        ),
    )
    .unwrap();
}

/// Small-pipeline flags shared by the fast tests.
const FAST: &[&str] = &["--segment-len", "60", "--delays", "-20..20"];

fn generate_sequence(dir: &Path, seed: u64, frames: usize) -> PathBuf {
    let cfg = dir.join(format!("gen_{seed}.toml"));
    write_gen_config(&cfg, seed, frames);
    let seq = dir.join(format!("seq_{seed}"));
    let out = run(&[
        "generate",
        cfg.to_str().unwrap(),
        "--out-dir",
        seq.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    seq
}

#[test]
fn generate_is_reproducible_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("gen.toml");
    write_gen_config(&cfg, 11, 4);
    for name in ["a", "b"] {
        let out = run(&[
            "generate",
            cfg.to_str().unwrap(),
            "--out-dir",
            tmp.path().join(name).to_str().unwrap(),
        ]);
        assert_exit(&out, 0);
    }
    for entry in std::fs::read_dir(tmp.path().join("a")).unwrap() {
        let a = entry.unwrap().path();
        let b = tmp.path().join("b").join(a.file_name().unwrap());
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{} differs",
            a.display()
        );
    }
}

#[test]
fn assess_writes_report_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 3, 130);

    let out_a = tmp.path().join("out_a");
    let out_b = tmp.path().join("out_b");
    for out_dir in [&out_a, &out_b] {
        let mut args = vec!["assess", seq.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()];
        args.extend_from_slice(FAST);
        let out = run(&args);
        assert_exit(&out, 0);
        assert!(out_dir.join("report.toml").exists());
        assert!(out_dir.join("segments.csv").exists());
    }
    assert_eq!(
        std::fs::read(out_a.join("report.toml")).unwrap(),
        std::fs::read(out_b.join("report.toml")).unwrap()
    );

    let report = std::fs::read_to_string(out_a.join("report.toml")).unwrap();
    assert!(report.contains("[config]"));
    assert!(report.contains("mean_score"));
    let csv = std::fs::read_to_string(out_a.join("segments.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2); // header + 2 segments
}

#[test]
fn pipeline_config_file_matches_equivalent_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 4, 130);
    let cfg = tmp.path().join("pipeline.toml");
    std::fs::write(
        &cfg,
        "hist_size = { h = 8, w = 8 }\nsegment_len = 60\ndelays = [-2, -1, 0, 1, 2]\nrecenter = false\n",
    )
    .unwrap();

    let via_file = tmp.path().join("via_file");
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        via_file.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let via_flags = tmp.path().join("via_flags");
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        via_flags.to_str().unwrap(),
        "--hist-size",
        "8x8",
        "--segment-len",
        "60",
        "--delays",
        "-2..2",
        "--no-recenter",
    ]);
    assert_exit(&out, 0);

    assert_eq!(
        std::fs::read(via_file.join("report.toml")).unwrap(),
        std::fs::read(via_flags.join("report.toml")).unwrap()
    );

    // Flags override the file.
    let mixed = tmp.path().join("mixed");
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        mixed.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--segment-len",
        "120",
    ]);
    assert_exit(&out, 0);
    let report = std::fs::read_to_string(mixed.join("report.toml")).unwrap();
    assert!(report.contains("segment_len = 120"));
}

#[test]
fn assess_with_too_few_frames_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 5, 40);
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
        "--segment-len",
        "120",
    ]);
    assert_exit(&out, 3);
}

#[test]
fn unreadable_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "assess",
        tmp.path().join("missing").to_str().unwrap(),
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_exit(&out, 2);
}

#[test]
fn invalid_flags_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 6, 40);
    // Odd histogram width.
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
        "--hist-size",
        "16x15",
    ]);
    assert_exit(&out, 2);
    // Delay sweep reaching the segment length.
    let out = run(&[
        "assess",
        seq.to_str().unwrap(),
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
        "--segment-len",
        "20",
        "--delays",
        "-20..20",
    ]);
    assert_exit(&out, 2);
}

#[test]
fn container_path_matches_direct_assessment() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 7, 130);

    // Direct assessment.
    let direct = tmp.path().join("direct");
    let mut args = vec!["assess", seq.to_str().unwrap(), "--out-dir", direct.to_str().unwrap()];
    args.extend_from_slice(FAST);
    assert_exit(&run(&args), 0);

    // Convert to a container, then assess the container.
    let cylh = tmp.path().join("seq.cylh");
    assert_exit(
        &run(&["convert", seq.to_str().unwrap(), cylh.to_str().unwrap()]),
        0,
    );
    let via = tmp.path().join("via");
    let mut args = vec!["assess", cylh.to_str().unwrap(), "--out-dir", via.to_str().unwrap()];
    args.extend_from_slice(FAST);
    assert_exit(&run(&args), 0);

    // Same per-segment scores either way (the container holds exact counts).
    let read_scores = |dir: &Path| -> Vec<String> {
        std::fs::read_to_string(dir.join("segments.csv"))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().to_string())
            .collect()
    };
    assert_eq!(read_scores(&direct), read_scores(&via));
}

#[test]
fn histogram_csv_round_trip_via_convert() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate_sequence(tmp.path(), 8, 12);
    let cylh = tmp.path().join("seq.cylh");
    assert_exit(
        &run(&["convert", seq.to_str().unwrap(), cylh.to_str().unwrap()]),
        0,
    );
    let csv = tmp.path().join("seq.csv");
    assert_exit(&run(&["convert", cylh.to_str().unwrap(), csv.to_str().unwrap()]), 0);
    let back = tmp.path().join("back.cylh");
    assert_exit(&run(&["convert", csv.to_str().unwrap(), back.to_str().unwrap()]), 0);
    assert_eq!(
        std::fs::read(&cylh).unwrap(),
        std::fs::read(&back).unwrap()
    );
}

#[test]
fn evaluate_synthetic_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let mut rows = Vec::new();
    for (i, asym) in [("", "normal"), ("", "normal"), ("phase", "abnormal"), ("phase", "abnormal")]
        .iter()
        .enumerate()
    {
        let cfg = tmp.path().join(format!("g{i}.toml"));
        let asym_block = if asym.0.is_empty() {
            String::new()
        } else {
            "[asymmetry]\nkind = \"phase-shift\"\nside = \"left\"\nmagnitude = 0.65\n".to_string()
        };
        std::fs::write(
            &cfg,
            format!(
                "frames = 130\n[gait]\nseed = {}\npoints_per_frame = 200\n{asym_block}",
                40 + i
            ),
        )
        .unwrap();
        rows.push(format!("g{i}.toml,s{i},walk,{}", asym.1));
    }
    let manifest = tmp.path().join("manifest.csv");
    std::fs::write(
        &manifest,
        format!("path,subject_id,gait_type,label\n{}\n", rows.join("\n")),
    )
    .unwrap();

    let out_dir = tmp.path().join("eval");
    let mut args = vec![
        "evaluate",
        manifest.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--mode",
        "mean",
    ];
    args.extend_from_slice(FAST);
    let out = run(&args);
    assert_exit(&out, 0);
    assert!(out_dir.join("roc_points.csv").exists());
    let summary = std::fs::read_to_string(out_dir.join("summary.toml")).unwrap();
    assert!(summary.contains("auc ="));
    assert!(summary.contains("[config]"));
}

#[test]
fn single_class_manifest_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("g.toml");
    write_gen_config(&cfg, 50, 130);
    let manifest = tmp.path().join("manifest.csv");
    std::fs::write(&manifest, "g.toml,s0,walk,normal\ng.toml,s1,walk,normal\n").unwrap();
    let out_dir = tmp.path().join("out");
    let mut args = vec![
        "evaluate",
        manifest.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--mode",
        "mean",
    ];
    args.extend_from_slice(FAST);
    assert_exit(&run(&args), 4);
}

#[test]
fn empty_manifest_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = tmp.path().join("manifest.csv");
    std::fs::write(&manifest, "# nothing here\n").unwrap();
    let out = run(&[
        "evaluate",
        manifest.to_str().unwrap(),
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
        "--mode",
        "mean",
    ]);
    assert_exit(&out, 2);
}

#[test]
fn sweep_produces_table_and_cache_reuse() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_n = tmp.path().join("n.toml");
    write_gen_config(&cfg_n, 60, 130);
    let cfg_a = tmp.path().join("a.toml");
    std::fs::write(
        &cfg_a,
        "frames = 130\n[gait]\nseed = 61\npoints_per_frame = 200\n[asymmetry]\nkind = \"phase-shift\"\nside = \"left\"\nmagnitude = 0.65\n",
    )
    .unwrap();
    let manifest = tmp.path().join("manifest.csv");
    std::fs::write(&manifest, "n.toml,s0,walk,normal\na.toml,s1,walk,abnormal\n").unwrap();

    let out_dir = tmp.path().join("sweep");
    let cache = tmp.path().join("cache");
    let mut args = vec![
        "sweep",
        manifest.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--sizes",
        "16x8,16x16",
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    args.extend_from_slice(FAST);
    assert_exit(&run(&args), 0);

    let table = std::fs::read_to_string(out_dir.join("sweep.txt")).unwrap();
    assert!(table.contains("16x8") && table.contains("16x16"));
    assert!(table.lines().count() == 5);
    let csv = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4); // header + 2 sizes x 2 modes
    let summary = std::fs::read_to_string(out_dir.join("sweep.toml")).unwrap();
    assert!(summary.contains("[config]"));
    assert!(summary.contains("[[results]]"));

    // Cache was populated: one container per (sequence, size).
    let cached: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(cached.len(), 4);

    // Re-run hits the cache and reproduces the table byte for byte.
    let out_dir2 = tmp.path().join("sweep2");
    let mut args = vec![
        "sweep",
        manifest.to_str().unwrap(),
        "--out-dir",
        out_dir2.to_str().unwrap(),
        "--sizes",
        "16x8,16x16",
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    args.extend_from_slice(FAST);
    assert_exit(&run(&args), 0);
    assert_eq!(
        std::fs::read(out_dir.join("sweep.txt")).unwrap(),
        std::fs::read(out_dir2.join("sweep.txt")).unwrap()
    );
}

#[test]
fn assess_camera_frame_directory_with_markers() {
    use gaitsym_core::geometry::{Frame, PointCloud};
    use gaitsym_core::synth::{generate, AsymmetrySpec, GaitParams};
    use nalgebra::{Point3, Rotation3, Unit, Vector3};

    let tmp = tempfile::tempdir().unwrap();
    let params = GaitParams {
        points_per_frame: 200,
        noise_sigma: 0.003,
        seed: 70,
        ..GaitParams::default()
    };
    let body_clouds = generate(&params, &AsymmetrySpec::none(), 70).unwrap();

    // Observe the scene from a tilted, shifted camera.
    let rot = Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::new(0.1, 1.0, 0.3)), 0.8);
    let shift = Vector3::new(2.0, 0.5, -1.0);
    let dir = tmp.path().join("camera_seq");
    std::fs::create_dir(&dir).unwrap();
    for (i, cloud) in body_clouds.iter().enumerate() {
        let cam = PointCloud::new(
            cloud.points().iter().map(|p| rot * p + shift).collect(),
            Frame::Camera,
        )
        .unwrap();
        gaitsym_core::io::write_ply(&dir.join(format!("frame_{i:06}.ply")), &cam).unwrap();
    }
    let floor = -1.0;
    let marker = |p: Point3<f64>| rot * p + shift;
    let mut lines = vec!["# calibration".to_string()];
    for (i, p) in [
        Point3::new(-1.0, floor, -0.8),
        Point3::new(1.0, floor, -0.8),
        Point3::new(-1.0, floor, 0.8),
        Point3::new(1.0, floor, 0.8),
    ]
    .iter()
    .enumerate()
    {
        let m = marker(*p);
        lines.push(format!("T{},{},{},{}", i + 1, m.x, m.y, m.z));
    }
    let w1 = marker(Point3::new(0.0, floor, 0.0));
    let w2 = marker(Point3::new(1.0, floor, 0.0));
    lines.push(format!("W1,{},{},{}", w1.x, w1.y, w1.z));
    lines.push(format!("W2,{},{},{}", w2.x, w2.y, w2.z));
    std::fs::write(dir.join("markers.csv"), lines.join("\n")).unwrap();

    let out_dir = tmp.path().join("out");
    let out = run(&[
        "assess",
        dir.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--segment-len",
        "35",
        "--delays",
        "-10..10",
    ]);
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("mean score"), "stdout: {stdout}");
}

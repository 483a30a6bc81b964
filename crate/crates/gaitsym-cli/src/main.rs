//! Command-line front end: sequence assessment, synthetic generation,
//! dataset evaluation, the histogram-size sweep and format conversion.
//!
//! Exit codes: 0 success, 2 unreadable input or invalid configuration,
//! 3 too few frames for one segment, 4 single-class evaluation input,
//! 1 anything else.

mod input;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gaitsym_core::eval::{evaluate_dataset, LabeledReport, ScoreMode, SweepRow};
use gaitsym_core::histogram::HistSize;
use gaitsym_core::io;
use gaitsym_core::pipeline::{process_histograms, PipelineConfig};
use gaitsym_core::symmetry::DelaySet;
use gaitsym_core::{format_sweep_table, synth, Error as CoreError};

use input::{load_cloud_dir, resolve_histograms, SequenceInput};

#[derive(Parser)]
#[command(
    name = "gaitsym",
    version,
    about = "Gait symmetry assessment from 3D point-cloud sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags mirroring the pipeline configuration fields. A `--config` file
/// supplies the base values; explicit flags override it.
#[derive(Args, Clone)]
struct PipelineArgs {
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Histogram size as HxW (rows x angular columns, W even) [default: 16x16].
    #[arg(long)]
    hist_size: Option<String>,
    /// Frames per segment [default: 120].
    #[arg(long)]
    segment_len: Option<usize>,
    /// Delay sweep: inclusive range "a..b" or a comma list "d1,d2,..."
    /// [default: -50..50].
    #[arg(long, allow_hyphen_values = true)]
    delays: Option<String>,
    /// Skip head recentering.
    #[arg(long)]
    no_recenter: bool,
}

impl PipelineArgs {
    fn to_config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => io::read_pipeline_config(path)
                .with_context(|| format!("reading pipeline config {}", path.display()))?,
            None => PipelineConfig::default(),
        };
        if let Some(hist_size) = &self.hist_size {
            cfg.hist_size = hist_size.parse::<HistSize>()?;
        }
        if let Some(segment_len) = self.segment_len {
            cfg.segment_len = segment_len;
        }
        if let Some(delays) = &self.delays {
            cfg.delays = parse_delays(delays)?;
        }
        if self.no_recenter {
            cfg.recenter = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_delays(spec: &str) -> Result<DelaySet> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = lo
            .trim()
            .parse()
            .with_context(|| format!("bad delay range start {lo:?}"))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .with_context(|| format!("bad delay range end {hi:?}"))?;
        return Ok(DelaySet::range(lo, hi)?);
    }
    let delays: Vec<i64> = spec
        .split(',')
        .map(|d| {
            d.trim()
                .parse::<i64>()
                .with_context(|| format!("bad delay {d:?}"))
        })
        .collect::<Result<_>>()?;
    Ok(DelaySet::new(delays)?)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Segments,
    Mean,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CloudFormat {
    Ply,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Score one sequence: a cloud directory, a .cylh container or a
    /// generator config.
    Assess {
        input: PathBuf,
        /// Directory for report.toml and segments.csv.
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Calibration marker file for camera-frame cloud directories.
        #[arg(long)]
        markers: Option<PathBuf>,
        /// Histogram container cache directory.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Generate a synthetic cloud sequence from a config file.
    Generate {
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Cloud file format.
        #[arg(long, value_enum, default_value_t = CloudFormat::Ply)]
        format: CloudFormat,
        /// Override the frame count in the config.
        #[arg(long)]
        frames: Option<usize>,
    },
    /// ROC/AUC/EER over a labeled manifest of sequences.
    Evaluate {
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Mean)]
        mode: ModeArg,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        markers: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Evaluate the manifest at several histogram sizes.
    Sweep {
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Comma-separated sizes, e.g. "16x8,16x16,16x24".
        #[arg(long)]
        sizes: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        markers: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Convert between cloud and histogram formats (by extension):
    /// cloud dir -> .cylh, .cylh -> .csv, hist .csv -> .cylh,
    /// .ply <-> .csv.
    Convert {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        markers: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("gaitsym: error: {err:#}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::InsufficientFrames { .. } => 3,
                CoreError::SingleClass => 4,
                CoreError::Io(_)
                | CoreError::Parse { .. }
                | CoreError::InvalidConfig(_)
                | CoreError::EmptyInput(_)
                | CoreError::DelayTooLarge { .. } => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Assess {
            input,
            out_dir,
            pipeline,
            markers,
            cache_dir,
        } => cmd_assess(
            &input,
            &out_dir,
            &pipeline,
            markers.as_deref(),
            cache_dir.as_deref(),
        ),
        Command::Generate {
            config,
            out_dir,
            format,
            frames,
        } => cmd_generate(&config, &out_dir, format, frames),
        Command::Evaluate {
            manifest,
            out_dir,
            mode,
            pipeline,
            markers,
            cache_dir,
        } => cmd_evaluate(
            &manifest,
            &out_dir,
            mode,
            &pipeline,
            markers.as_deref(),
            cache_dir.as_deref(),
        ),
        Command::Sweep {
            manifest,
            out_dir,
            sizes,
            mode,
            pipeline,
            markers,
            cache_dir,
        } => cmd_sweep(
            &manifest,
            &out_dir,
            &sizes,
            mode,
            &pipeline,
            markers.as_deref(),
            cache_dir.as_deref(),
        ),
        Command::Convert {
            input,
            output,
            pipeline,
            markers,
        } => cmd_convert(&input, &output, &pipeline, markers.as_deref()),
    }
}

fn cmd_assess(
    input_path: &Path,
    out_dir: &Path,
    pipeline: &PipelineArgs,
    markers: Option<&Path>,
    cache_dir: Option<&Path>,
) -> Result<()> {
    let cfg = pipeline.to_config()?;
    let input = SequenceInput::classify(input_path)?;
    // Container inputs skip estimation: the stored size wins and there is
    // nothing left to recenter.
    let (hists, effective) = match &input {
        SequenceInput::Container(path) => {
            let hists = io::read_histograms(path)?;
            let size = hists.first().map(|h| h.size()).unwrap_or(cfg.hist_size);
            let effective = PipelineConfig {
                hist_size: size,
                recenter: false,
                ..cfg
            };
            (hists, effective)
        }
        _ => (resolve_histograms(&input, &cfg, markers, cache_dir)?, cfg),
    };
    let report = process_histograms(&hists, &effective)?;

    std::fs::create_dir_all(out_dir)?;
    io::write_report(&out_dir.join("report.toml"), &report, &effective)?;
    io::write_segments_csv(&out_dir.join("segments.csv"), &report)?;
    println!(
        "mean score {:.6} over {} segments ({} frames discarded)",
        report.mean_score,
        report.per_segment.len(),
        report.frames_discarded
    );
    Ok(())
}

fn cmd_generate(
    config_path: &Path,
    out_dir: &Path,
    format: CloudFormat,
    frames: Option<usize>,
) -> Result<()> {
    let mut cfg = io::read_generator_config(config_path)
        .with_context(|| format!("reading generator config {}", config_path.display()))?;
    if let Some(frames) = frames {
        cfg.frames = frames;
        cfg.validate()?;
    }
    let clouds = synth::generate(&cfg.gait, &cfg.asymmetry, cfg.frames)?;

    std::fs::create_dir_all(out_dir)?;
    for (i, cloud) in clouds.iter().enumerate() {
        match format {
            CloudFormat::Ply => io::write_ply(&out_dir.join(format!("frame_{i:06}.ply")), cloud)?,
            CloudFormat::Csv => {
                io::write_cloud_csv(&out_dir.join(format!("frame_{i:06}.csv")), cloud)?
            }
        }
    }
    io::write_generator_config(&out_dir.join("manifest.toml"), &cfg)?;
    println!("wrote {} frames to {}", clouds.len(), out_dir.display());
    Ok(())
}

fn labeled_reports(
    manifest: &Path,
    cfg: &PipelineConfig,
    markers: Option<&Path>,
    cache_dir: Option<&Path>,
) -> Result<Vec<LabeledReport>> {
    let entries = io::read_manifest(manifest)?;
    entries
        .iter()
        .map(|entry| {
            let input = SequenceInput::classify(&entry.path)?;
            let hists = resolve_histograms(&input, cfg, markers, cache_dir)
                .with_context(|| format!("processing {}", entry.path.display()))?;
            let report = process_histograms(&hists, cfg)?;
            Ok(LabeledReport {
                report,
                label: entry.label,
                subject_id: entry.subject_id.clone(),
                gait_type: entry.gait_type.clone(),
            })
        })
        .collect()
}

fn cmd_evaluate(
    manifest: &Path,
    out_dir: &Path,
    mode: ModeArg,
    pipeline: &PipelineArgs,
    markers: Option<&Path>,
    cache_dir: Option<&Path>,
) -> Result<()> {
    let cfg = pipeline.to_config()?;
    let mode = match mode {
        ModeArg::Segments => ScoreMode::Segments,
        ModeArg::Mean => ScoreMode::Mean,
        ModeArg::Both => bail!(CoreError::InvalidConfig(
            "evaluate needs --mode segments or --mode mean".into()
        )),
    };
    let reports = labeled_reports(manifest, &cfg, markers, cache_dir)?;
    let roc = evaluate_dataset(&reports, mode)?;

    std::fs::create_dir_all(out_dir)?;
    io::write_roc_csv(&out_dir.join("roc_points.csv"), &roc)?;
    io::write_roc_summary(&out_dir.join("summary.toml"), &roc, mode, &cfg)?;
    println!(
        "{} mode: AUC {:.3} EER {:.3} ({} abnormal, {} normal samples)",
        mode, roc.auc, roc.eer, roc.n_positive, roc.n_negative
    );
    Ok(())
}

fn cmd_sweep(
    manifest: &Path,
    out_dir: &Path,
    sizes: &str,
    mode: ModeArg,
    pipeline: &PipelineArgs,
    markers: Option<&Path>,
    cache_dir: Option<&Path>,
) -> Result<()> {
    let base_cfg = pipeline.to_config()?;
    let sizes: Vec<HistSize> = sizes
        .split(',')
        .map(|s| s.trim().parse::<HistSize>().map_err(Into::into))
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        bail!(CoreError::InvalidConfig("no sizes given".into()));
    }
    let modes: Vec<ScoreMode> = match mode {
        ModeArg::Segments => vec![ScoreMode::Segments],
        ModeArg::Mean => vec![ScoreMode::Mean],
        ModeArg::Both => vec![ScoreMode::Segments, ScoreMode::Mean],
    };

    let mut per_size: Vec<(HistSize, Vec<LabeledReport>)> = Vec::new();
    for &size in &sizes {
        let cfg = base_cfg.with_hist_size(size);
        per_size.push((size, labeled_reports(manifest, &cfg, markers, cache_dir)?));
    }

    let mut tables: Vec<(ScoreMode, Vec<SweepRow>)> = Vec::new();
    for &mode in &modes {
        let rows: Vec<SweepRow> = per_size
            .iter()
            .map(|(size, reports)| {
                Ok(SweepRow {
                    size: *size,
                    roc: evaluate_dataset(reports, mode)?,
                })
            })
            .collect::<Result<_>>()?;
        tables.push((mode, rows));
    }
    let sections: Vec<(ScoreMode, &[SweepRow])> =
        tables.iter().map(|(m, r)| (*m, r.as_slice())).collect();

    std::fs::create_dir_all(out_dir)?;
    io::write_sweep_csv(&out_dir.join("sweep.csv"), &sections)?;
    io::write_sweep_summary(&out_dir.join("sweep.toml"), &sections, &base_cfg)?;
    let table = format_sweep_table(&sections);
    io::write_atomic(&out_dir.join("sweep.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(())
}

fn cmd_convert(
    input: &Path,
    output: &Path,
    pipeline: &PipelineArgs,
    markers: Option<&Path>,
) -> Result<()> {
    let cfg = pipeline.to_config()?;
    let ext = |p: &Path| {
        p.extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
    };
    let out_ext = ext(output);

    if input.is_dir() {
        if out_ext.as_deref() != Some("cylh") {
            bail!(CoreError::InvalidConfig(
                "a cloud directory converts to a .cylh container".into()
            ));
        }
        let clouds = load_cloud_dir(input, markers)?;
        let hists =
            gaitsym_core::pipeline::estimate_sequence(&clouds, cfg.hist_size, cfg.recenter)?;
        io::write_histograms(output, &hists)?;
        println!(
            "wrote {} histogram frames to {}",
            hists.len(),
            output.display()
        );
        return Ok(());
    }

    match (ext(input).as_deref(), out_ext.as_deref()) {
        (Some("cylh"), Some("csv")) => {
            let hists = io::read_histograms(input)?;
            io::write_histograms_csv(output, &hists)?;
        }
        (Some("csv"), Some("cylh")) => {
            let hists = io::read_histograms_csv(input)?;
            io::write_histograms(output, &hists)?;
        }
        (Some("ply"), Some("csv")) => {
            let cloud = io::read_ply(input, gaitsym_core::Frame::Body)?;
            io::write_cloud_csv(output, &cloud)?;
        }
        (Some("csv"), Some("ply")) => {
            let cloud = io::read_cloud_csv(input, gaitsym_core::Frame::Body)?;
            io::write_ply(output, &cloud)?;
        }
        (a, b) => bail!(CoreError::InvalidConfig(format!(
            "unsupported conversion {a:?} -> {b:?}"
        ))),
    }
    println!("converted {} -> {}", input.display(), output.display());
    Ok(())
}

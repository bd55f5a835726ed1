//! Command-line interface for the benchmark tool.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::cache::save_features;
use crate::bench::config::RunConfig;
use crate::bench::manifest::load_manifest;
use crate::bench::report::{write_report, EvalReport, ReportFormat};
use crate::bench::run::{extract_features, run_detector_eval, run_matching_eval, run_pose_eval};
use crate::describe::DescriberKind;
use crate::detect::Detector;
use crate::imgcore::save_pgm;
use crate::synth::generate_texture;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "groundtex", about = "Ground-texture feature benchmark", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Flat key=value run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (reports) or directory (synth-gen, extract).
    #[arg(long)]
    out: PathBuf,
    /// Report format.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = library default).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the configured fixture textures as PGM files.
    SynthGen(CommonArgs),
    /// Detector evaluation over the synthetic sweep.
    EvalDetect(CommonArgs),
    /// Matching evaluation over the synthetic sweep.
    EvalMatch(CommonArgs),
    /// Pose-estimation evaluation (synthetic sweep or manifest pairs).
    EvalPose {
        #[command(flatten)]
        common: CommonArgs,
        /// Tab-separated pair manifest with ground-truth poses.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Extract features for the reference textures into the cache directory.
    Extract(CommonArgs),
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = common.jobs {
        cfg.jobs = jobs;
    }
    Ok(cfg)
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if jobs == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(f)
}

fn emit(report: &EvalReport, common: &CommonArgs) -> Result<()> {
    let format = ReportFormat::parse(&common.format)?;
    write_report(report, format, &common.out)
}

fn synth_gen(common: &CommonArgs) -> Result<()> {
    let cfg = load_config(common)?;
    std::fs::create_dir_all(&common.out).map_err(|e| Error::io(&common.out, e))?;
    for &texture in &cfg.textures {
        let img = generate_texture(texture, cfg.image_size, cfg.image_size, cfg.seed);
        let path = common.out.join(format!("{}.pgm", texture.name()));
        save_pgm(&img, &path)?;
    }
    Ok(())
}

fn extract(common: &CommonArgs) -> Result<()> {
    let cfg = load_config(common)?;
    std::fs::create_dir_all(&common.out).map_err(|e| Error::io(&common.out, e))?;
    for &texture in &cfg.textures {
        let img = generate_texture(texture, cfg.image_size, cfg.image_size, cfg.seed);
        for det_name in &cfg.detectors {
            let detector = Detector::by_name(det_name)?;
            for desc_name in &cfg.descriptors {
                let describer = DescriberKind::by_name(desc_name)?;
                let mut selector = cfg.selector.clone();
                selector.n_target = cfg.budget;
                let feats = extract_features(
                    &img,
                    None,
                    &detector,
                    &selector,
                    describer,
                    cfg.pattern_seed,
                )?;
                let hash = cfg.feature_hash(det_name, desc_name, cfg.budget);
                let path = common
                    .out
                    .join(format!("{}-{det_name}-{desc_name}.gtfc", texture.name()));
                save_features(&path, det_name, desc_name, hash, &feats)?;
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SynthGen(common) => synth_gen(&common),
        Command::EvalDetect(common) => {
            let cfg = load_config(&common)?;
            let report = in_pool(cfg.jobs, || run_detector_eval(&cfg))?;
            emit(&report, &common)
        }
        Command::EvalMatch(common) => {
            let cfg = load_config(&common)?;
            let report = in_pool(cfg.jobs, || run_matching_eval(&cfg))?;
            emit(&report, &common)
        }
        Command::EvalPose { common, manifest } => {
            let cfg = load_config(&common)?;
            let manifest = manifest.as_deref().map(load_manifest).transpose()?;
            let report = in_pool(cfg.jobs, || run_pose_eval(&cfg, manifest.as_ref()))?;
            emit(&report, &common)
        }
        Command::Extract(common) => extract(&common),
    }
}

/// Exit code contract: 0 success, 2 configuration errors, 3 data errors.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParam(_) => 2,
        _ => 3,
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output with status 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

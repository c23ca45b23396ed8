//! `wavelearn`: learn wavelet filters from raw signals, transform and
//! reconstruct signals, render learned wavelet functions, and compare them
//! to the classical families.
//!
//! Commands compose through files only; every command writes a manifest from
//! which it can be rerun bit-for-bit.

mod manifest;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use manifest::Manifest;
use wavelet_learn::analysis;
use wavelet_learn::datagen::{self, BaseWave, SynthConfig};
use wavelet_learn::filterbank::{
    classical_filter_by_name, read_filter_file, FilterPair, NamedFilter,
};
use wavelet_learn::textio;
use wavelet_learn::training::{self, TrainingConfig};
use wavelet_learn::transform::{self, Signal};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable/invalid inputs, unwritable outputs. Exit 2.
    Usage(String),
    /// Unexpected internal failure. Exit 1.
    Internal(String),
}

impl From<wavelet_learn::Error> for CliError {
    fn from(e: wavelet_learn::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "wavelearn", version, about = "Learn wavelet filters from signal data")]
struct Cli {
    /// Seed for every random draw in the command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory or file, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic harmonic dataset.
    Synth(SynthArgs),
    /// Train the autoencoder on a dataset directory.
    Train(TrainArgs),
    /// Decompose a signal file into wavelet coefficients.
    Transform(TransformArgs),
    /// Rebuild a signal from a coefficient file.
    Reconstruct(ReconstructArgs),
    /// Render scaling and wavelet functions from a filter.
    Cascade(CascadeArgs),
    /// Rank the classical wavelets by distance to a filter.
    Compare(CompareArgs),
    /// Generate a signal from sparse random coefficients.
    Sample(SampleArgs),
    /// Render CSV series into an SVG line chart.
    Plot(PlotArgs),
    /// Slice a WAV file into a dataset of fixed-length segments.
    WavIngest(WavIngestArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Base wave: sine, sawtooth, or square.
    #[arg(long, default_value = "sine")]
    base: String,
    /// Number of harmonic scales K.
    #[arg(long, default_value_t = 5)]
    harmonics: usize,
    /// Per-harmonic inclusion probability p.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Signal length N (power of two).
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Dataset size M.
    #[arg(long, default_value_t = 32000)]
    m: usize,
    /// Base-wave cycles per signal.
    #[arg(long, default_value_t = 4)]
    cycles: u32,
    /// Window the base wave at each scale with random Gaussian windows.
    #[arg(long, default_value_t = false)]
    windowed: bool,
    #[arg(long, default_value_t = 1)]
    window_count_min: u32,
    #[arg(long, default_value_t = 3)]
    window_count_max: u32,
    /// Gaussian window std as a fraction of N.
    #[arg(long, default_value_t = 0.1)]
    window_std_fraction: f64,
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset directory produced by `synth` or `wav-ingest`.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = 20)]
    filter_len: usize,
    #[arg(long, default_value_t = 6)]
    levels: u32,
    #[arg(long, default_value_t = 0.5)]
    lambda1: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda2: f64,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.9)]
    beta1: f64,
    #[arg(long, default_value_t = 0.999)]
    beta2: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 50000)]
    max_steps: usize,
    #[arg(long, default_value_t = 1e-5)]
    convergence_tol: f64,
    #[arg(long, default_value_t = 500)]
    convergence_window: usize,
}

#[derive(Args)]
struct TransformArgs {
    /// Signal file: single-column CSV, or 16-bit PCM WAV.
    #[arg(long)]
    signal: PathBuf,
    /// Filter file, or a classical wavelet name (haar, db2-db10, sym2-sym10,
    /// coif1-coif5).
    #[arg(long)]
    filter: String,
    /// Decomposition depth J.
    #[arg(long, default_value_t = 6)]
    levels: u32,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Coefficient file produced by `transform`.
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    filter: String,
}

#[derive(Args)]
struct CascadeArgs {
    #[arg(long)]
    filter: String,
    #[arg(long, default_value_t = 8)]
    iterations: u32,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    filter: String,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    filter: String,
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    levels: u32,
    /// Probability that a coefficient is nonzero.
    #[arg(long, default_value_t = 0.05)]
    density: f64,
    /// Number of finest detail scales to zero out.
    #[arg(long, default_value_t = 3)]
    zero_top_scales: u32,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV inputs: one or two columns (value, or t,value) per line.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct WavIngestArgs {
    #[arg(long)]
    wav: PathBuf,
    /// Segment length N (power of two).
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Hop between segment starts, in samples.
    #[arg(long, default_value_t = 1024)]
    hop: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli, started) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn require_out(out: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    out.clone()
        .ok_or_else(|| CliError::Usage("--out is required".into()))
}

/// Loads a filter either from a file or from the classical database.
fn load_filter(spec: &str) -> Result<NamedFilter, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        Ok(read_filter_file(path)?)
    } else {
        let filter = classical_filter_by_name(spec).map_err(|_| {
            CliError::Usage(format!(
                "--filter {spec:?} is neither a readable file nor a classical wavelet name"
            ))
        })?;
        Ok(NamedFilter::new(spec.trim().to_ascii_lowercase(), filter))
    }
}

/// Reads a signal from CSV or, when the extension is .wav, from 16-bit PCM.
fn read_signal_any(path: &Path) -> Result<Signal, CliError> {
    let is_wav = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("wav"))
        .unwrap_or(false);
    if is_wav {
        // the whole file is the signal: one full-length window
        let len = full_wav_len(path)?;
        return datagen::load_wav_segments(path, len, len)?
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Usage(format!("{}: empty WAV", path.display())));
    }
    Ok(transform::read_signal_csv(path)?)
}

/// WAV signals must span the whole file; length must be a power of two.
fn full_wav_len(path: &Path) -> Result<usize, CliError> {
    // duration in frames, independent of channel count
    let reader = hound::WavReader::open(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let frames = reader.duration() as usize;
    if !frames.is_power_of_two() || frames == 0 {
        return Err(CliError::Usage(format!(
            "{}: WAV length {frames} is not a power of two; use wav-ingest to segment it",
            path.display()
        )));
    }
    Ok(frames)
}

fn run(cli: Cli, started: Instant) -> Result<(), CliError> {
    match &cli.command {
        Command::Synth(args) => cmd_synth(&cli, args, started),
        Command::Train(args) => cmd_train(&cli, args, started),
        Command::Transform(args) => cmd_transform(&cli, args, started),
        Command::Reconstruct(args) => cmd_reconstruct(&cli, args, started),
        Command::Cascade(args) => cmd_cascade(&cli, args, started),
        Command::Compare(args) => cmd_compare(&cli, args, started),
        Command::Sample(args) => cmd_sample(&cli, args, started),
        Command::Plot(args) => cmd_plot(&cli, args, started),
        Command::WavIngest(args) => cmd_wav_ingest(&cli, args, started),
    }
}

fn finish_dir_manifest(
    dir: &Path,
    command: &str,
    seed: Option<u64>,
    args: Vec<String>,
    inputs: Vec<String>,
    mut outputs: Vec<String>,
    started: Instant,
) -> Result<(), CliError> {
    outputs.sort();
    let manifest = Manifest {
        command: command.to_string(),
        version: VERSION.to_string(),
        seed,
        args,
        inputs,
        outputs,
        out: dir.display().to_string(),
        duration_ms: started.elapsed().as_millis(),
    };
    manifest::write_manifest(&manifest::dir_manifest_path(dir), &manifest)
}

fn finish_file_manifest(
    file: &Path,
    command: &str,
    seed: Option<u64>,
    args: Vec<String>,
    inputs: Vec<String>,
    started: Instant,
) -> Result<(), CliError> {
    let manifest = Manifest {
        command: command.to_string(),
        version: VERSION.to_string(),
        seed,
        args,
        inputs,
        outputs: vec![file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()],
        out: file.display().to_string(),
        duration_ms: started.elapsed().as_millis(),
    };
    manifest::write_manifest(&manifest::file_manifest_path(file), &manifest)
}

fn cmd_synth(cli: &Cli, args: &SynthArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let config = SynthConfig {
        base: BaseWave::parse(&args.base)?,
        harmonics: args.harmonics,
        inclusion_prob: args.p,
        signal_len: args.n,
        count: args.m,
        cycles: args.cycles,
        windowed: args.windowed,
        window_count_min: args.window_count_min,
        window_count_max: args.window_count_max,
        window_std_fraction: args.window_std_fraction,
        seed: cli.seed,
    };
    let dataset = datagen::make_dataset(&config)?;
    let files = datagen::write_dataset(&out, &dataset, &datagen::synth_key_values(&config))?;
    let resolved = vec![
        "synth".into(),
        "--base".into(),
        config.base.label().into(),
        "--harmonics".into(),
        config.harmonics.to_string(),
        "--p".into(),
        config.inclusion_prob.to_string(),
        "--n".into(),
        config.signal_len.to_string(),
        "--m".into(),
        config.count.to_string(),
        "--cycles".into(),
        config.cycles.to_string(),
        "--window-count-min".into(),
        config.window_count_min.to_string(),
        "--window-count-max".into(),
        config.window_count_max.to_string(),
        "--window-std-fraction".into(),
        config.window_std_fraction.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ]
    .into_iter()
    .chain(if config.windowed {
        vec!["--windowed".to_string()]
    } else {
        vec![]
    })
    .collect();
    println!("wrote {} signals to {}", dataset.len(), out.display());
    finish_dir_manifest(&out, "synth", Some(cli.seed), resolved, vec![], files, started)
}

fn cmd_train(cli: &Cli, args: &TrainArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let dataset = datagen::read_dataset(&args.dataset)?;
    let config = TrainingConfig {
        filter_len: args.filter_len,
        levels: args.levels,
        lambda1: args.lambda1,
        lambda2: args.lambda2,
        batch_size: args.batch_size,
        learning_rate: args.learning_rate,
        adam_beta1: args.beta1,
        adam_beta2: args.beta2,
        adam_eps: args.eps,
        max_steps: args.max_steps,
        convergence_tol: args.convergence_tol,
        convergence_window: args.convergence_window,
        seed: cli.seed,
    };
    if let Some(first) = dataset.first() {
        if first.len() % (1usize << config.levels) != 0 {
            return Err(CliError::Usage(format!(
                "signal length {} is not divisible by 2^{}",
                first.len(),
                config.levels
            )));
        }
        if let Some(msg) = transform::depth_warning(first.len(), config.filter_len, config.levels)
        {
            eprintln!("warning: {msg}");
        }
    }
    let history = training::train(&dataset, &config)?;
    training::write_run_artifacts(&out, &config, &history)?;
    let last = history
        .records
        .last()
        .ok_or_else(|| CliError::Internal("training produced no records".into()))?;
    println!(
        "{} steps ({}), final loss {:.6} = reconstruction {:.6} + sparsity {:.6} + constraint {:.6}",
        last.step,
        if history.converged { "converged" } else { "max steps" },
        last.total_loss,
        last.reconstruction_term,
        last.sparsity_term,
        last.constraint_term,
    );
    let resolved = vec![
        "train".to_string(),
        "--dataset".into(),
        args.dataset.display().to_string(),
        "--filter-len".into(),
        config.filter_len.to_string(),
        "--levels".into(),
        config.levels.to_string(),
        "--lambda1".into(),
        config.lambda1.to_string(),
        "--lambda2".into(),
        config.lambda2.to_string(),
        "--batch-size".into(),
        config.batch_size.to_string(),
        "--learning-rate".into(),
        config.learning_rate.to_string(),
        "--beta1".into(),
        config.adam_beta1.to_string(),
        "--beta2".into(),
        config.adam_beta2.to_string(),
        "--eps".into(),
        config.adam_eps.to_string(),
        "--max-steps".into(),
        config.max_steps.to_string(),
        "--convergence-tol".into(),
        config.convergence_tol.to_string(),
        "--convergence-window".into(),
        config.convergence_window.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    let outputs = vec![
        training::CONFIG_FILE.to_string(),
        training::HISTORY_FILE.to_string(),
        training::FILTER_FILE.to_string(),
        training::SEED_FILE.to_string(),
    ];
    finish_dir_manifest(
        &out,
        "train",
        Some(cli.seed),
        resolved,
        vec![args.dataset.display().to_string()],
        outputs,
        started,
    )
}

fn cmd_transform(cli: &Cli, args: &TransformArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let signal = read_signal_any(&args.signal)?;
    let named = load_filter(&args.filter)?;
    if let Some(msg) = transform::depth_warning(signal.len(), named.filter.len(), args.levels) {
        eprintln!("warning: {msg}");
    }
    let pair = FilterPair::from_scaling(named.filter.clone());
    let decomp = transform::dwt(&signal, &pair, args.levels)?;
    let flat = transform::flatten(&decomp);
    transform::write_coefficients(&out, &flat, named.filter.len(), &named.name)?;
    let resolved = vec![
        "transform".to_string(),
        "--signal".into(),
        args.signal.display().to_string(),
        "--filter".into(),
        args.filter.clone(),
        "--levels".into(),
        args.levels.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_file_manifest(
        &out,
        "transform",
        None,
        resolved,
        vec![args.signal.display().to_string(), args.filter.clone()],
        started,
    )
}

fn cmd_reconstruct(cli: &Cli, args: &ReconstructArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let (header, flat) = transform::read_coefficients(&args.coeffs)?;
    let named = load_filter(&args.filter)?;
    if named.filter.len() != header.filter_len {
        eprintln!(
            "warning: coefficient file was produced with a {}-tap filter ({}), reconstructing with {}-tap {}",
            header.filter_len, header.filter_name, named.filter.len(), named.name
        );
    }
    let decomp = transform::unflatten(&flat)?;
    let pair = FilterPair::from_scaling(named.filter.clone());
    let signal = transform::idwt(&decomp, &pair)?;
    transform::write_signal_csv(&out, &signal)?;
    let resolved = vec![
        "reconstruct".to_string(),
        "--coeffs".into(),
        args.coeffs.display().to_string(),
        "--filter".into(),
        args.filter.clone(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_file_manifest(
        &out,
        "reconstruct",
        None,
        resolved,
        vec![args.coeffs.display().to_string(), args.filter.clone()],
        started,
    )
}

fn cmd_cascade(cli: &Cli, args: &CascadeArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    if args.iterations == 0 {
        return Err(CliError::Usage("--iterations must be >= 1".into()));
    }
    let named = load_filter(&args.filter)?;
    let (phi, psi) = analysis::cascade(&named.filter, args.iterations);
    std::fs::create_dir_all(&out).map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
    analysis::write_sampled_function(&out.join("phi.csv"), &phi)?;
    analysis::write_sampled_function(&out.join("psi.csv"), &psi)?;
    println!(
        "wrote phi.csv and psi.csv ({} samples, grid step {})",
        phi.values.len(),
        phi.grid_step
    );
    if let Some(delta) = analysis::cascade_convergence_delta(&named.filter, args.iterations) {
        println!("convergence diagnostic: sup |phi_{} - phi_{}| = {delta:.3e}",
            args.iterations - 1, args.iterations);
    }
    let resolved = vec![
        "cascade".to_string(),
        "--filter".into(),
        args.filter.clone(),
        "--iterations".into(),
        args.iterations.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_dir_manifest(
        &out,
        "cascade",
        None,
        resolved,
        vec![args.filter.clone()],
        vec!["phi.csv".into(), "psi.csv".into()],
        started,
    )
}

fn cmd_compare(cli: &Cli, args: &CompareArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let named = load_filter(&args.filter)?;
    let matches = analysis::closest_wavelet(&named.filter);
    let table = analysis::match_table(&matches);
    textio::write_atomic(&out, &table)?;
    print!("{table}");
    let resolved = vec![
        "compare".to_string(),
        "--filter".into(),
        args.filter.clone(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_file_manifest(&out, "compare", None, resolved, vec![args.filter.clone()], started)
}

fn cmd_sample(cli: &Cli, args: &SampleArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let named = load_filter(&args.filter)?;
    if let Some(msg) = transform::depth_warning(args.n, named.filter.len(), args.levels) {
        eprintln!("warning: {msg}");
    }
    let pair = FilterPair::from_scaling(named.filter.clone());
    let signal = analysis::sample_signal(
        &pair,
        args.n,
        args.levels,
        args.density,
        args.zero_top_scales,
        cli.seed,
    )?;
    transform::write_signal_csv(&out, &signal)?;
    let resolved = vec![
        "sample".to_string(),
        "--filter".into(),
        args.filter.clone(),
        "--n".into(),
        args.n.to_string(),
        "--levels".into(),
        args.levels.to_string(),
        "--density".into(),
        args.density.to_string(),
        "--zero-top-scales".into(),
        args.zero_top_scales.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_file_manifest(
        &out,
        "sample",
        Some(cli.seed),
        resolved,
        vec![args.filter.clone()],
        started,
    )
}

fn cmd_plot(cli: &Cli, args: &PlotArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let mut series = Vec::new();
    for input in &args.inputs {
        let text = std::fs::read_to_string(input)
            .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| {
                    CliError::Usage(format!(
                        "{}: line {}: not a number: {s:?}",
                        input.display(),
                        lineno + 1
                    ))
                })
            };
            match fields.as_slice() {
                [y] => points.push((points.len() as f64, parse(y)?)),
                [x, y] => points.push((parse(x)?, parse(y)?)),
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}: line {}: expected 1 or 2 columns",
                        input.display(),
                        lineno + 1
                    )))
                }
            }
        }
        if points.is_empty() {
            return Err(CliError::Usage(format!("{}: no data", input.display())));
        }
        let name = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| input.display().to_string());
        series.push(plot::Series { name, points });
    }
    let svg = plot::render_svg(&series);
    textio::write_atomic(&out, &svg)?;
    let mut resolved = vec!["plot".to_string()];
    resolved.extend(args.inputs.iter().map(|p| p.display().to_string()));
    resolved.push("--seed".into());
    resolved.push(cli.seed.to_string());
    finish_file_manifest(
        &out,
        "plot",
        None,
        resolved,
        args.inputs.iter().map(|p| p.display().to_string()).collect(),
        started,
    )
}

fn cmd_wav_ingest(cli: &Cli, args: &WavIngestArgs, started: Instant) -> Result<(), CliError> {
    let out = require_out(&cli.out)?;
    let segments = datagen::load_wav_segments(&args.wav, args.n, args.hop)?;
    if segments.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: shorter than one {}-sample segment",
            args.wav.display(),
            args.n
        )));
    }
    let meta = vec![
        ("source".to_string(), args.wav.display().to_string()),
        ("segment_len".to_string(), args.n.to_string()),
        ("hop".to_string(), args.hop.to_string()),
    ];
    let files = datagen::write_dataset(&out, &segments, &meta)?;
    println!("wrote {} segments to {}", segments.len(), out.display());
    let resolved = vec![
        "wav-ingest".to_string(),
        "--wav".into(),
        args.wav.display().to_string(),
        "--n".into(),
        args.n.to_string(),
        "--hop".into(),
        args.hop.to_string(),
        "--seed".into(),
        cli.seed.to_string(),
    ];
    finish_dir_manifest(
        &out,
        "wav-ingest",
        None,
        resolved,
        vec![args.wav.display().to_string()],
        files,
        started,
    )
}

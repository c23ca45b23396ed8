//! Synthetic harmonic datasets, raw-audio ingestion, and random
//! constraint-satisfying wavelets.

use std::f64::consts::TAU;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::filterbank::{wavelet_loss, ScalingFilter};
use crate::grad::constraint_loss_and_grad;
use crate::rng::{derive_rng, STREAM_DATASET};
use crate::textio;
use crate::training::{adam_step, init_filter, AdamState, TrainingConfig};
use crate::transform::Signal;

/// Base periodic waveform, 2*pi-periodic in its phase argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseWave {
    Sine,
    Sawtooth,
    Square,
}

impl BaseWave {
    pub fn label(&self) -> &'static str {
        match self {
            BaseWave::Sine => "sine",
            BaseWave::Sawtooth => "sawtooth",
            BaseWave::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sine" => Ok(BaseWave::Sine),
            "sawtooth" => Ok(BaseWave::Sawtooth),
            "square" => Ok(BaseWave::Square),
            other => Err(Error::InvalidArgument(format!("unknown base wave {other:?}"))),
        }
    }
}

/// Evaluates the base wave at phase `t` (radians).
///
/// The square wave takes the value 1 where the sine vanishes exactly, and
/// the sawtooth ramps linearly from -1 to 1 over each period.
pub fn base_wave(kind: BaseWave, t: f64) -> f64 {
    match kind {
        BaseWave::Sine => t.sin(),
        BaseWave::Square => {
            let s = t.sin();
            if s >= 0.0 {
                1.0
            } else {
                -1.0
            }
        }
        BaseWave::Sawtooth => 2.0 * (t / TAU).rem_euclid(1.0) - 1.0,
    }
}

/// Configuration of the synthetic dataset generators.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub base: BaseWave,
    /// Harmonic count K.
    pub harmonics: usize,
    /// Per-harmonic inclusion probability p.
    pub inclusion_prob: f64,
    /// Signal length N (power of two).
    pub signal_len: usize,
    /// Dataset size M.
    pub count: usize,
    /// Base-wave cycles per signal.
    pub cycles: u32,
    pub windowed: bool,
    /// Inclusive range of Gaussian window counts per active scale.
    pub window_count_min: u32,
    pub window_count_max: u32,
    /// Window standard deviation as a fraction of N.
    pub window_std_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            base: BaseWave::Sine,
            harmonics: 5,
            inclusion_prob: 0.5,
            signal_len: 1024,
            count: 32_000,
            cycles: 4,
            windowed: false,
            window_count_min: 1,
            window_count_max: 3,
            window_std_fraction: 0.1,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.harmonics == 0 {
            return Err(Error::InvalidArgument("harmonic count must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.inclusion_prob) {
            return Err(Error::InvalidArgument(format!(
                "inclusion probability must lie in [0, 1], got {}",
                self.inclusion_prob
            )));
        }
        if !self.signal_len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "signal length must be a power of two, got {}",
                self.signal_len
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("dataset size must be >= 1".into()));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidArgument("cycles must be >= 1".into()));
        }
        if self.window_count_min == 0 || self.window_count_max < self.window_count_min {
            return Err(Error::InvalidArgument(
                "window count range must be a nonempty range starting at >= 1".into(),
            ));
        }
        if self.window_std_fraction <= 0.0 {
            return Err(Error::InvalidArgument(
                "window std fraction must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Drawn parameters for one harmonic signal: per-scale inclusion indicators,
/// phases, and (when windowed) Gaussian window centers.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDraw {
    pub included: Vec<bool>,
    pub phases: Vec<f64>,
    /// Window center positions per scale, in sample units; empty when the
    /// scale is inactive or windowing is off.
    pub window_centers: Vec<Vec<f64>>,
}

fn draw_params(config: &SynthConfig, index: u64) -> HarmonicDraw {
    let mut rng = derive_rng(config.seed, STREAM_DATASET, index);
    let k = config.harmonics;
    let mut included = Vec::with_capacity(k);
    let mut phases = Vec::with_capacity(k);
    let mut window_centers = vec![Vec::new(); k];
    for scale in 0..k {
        // Indicators and phases are drawn unconditionally so that the
        // stream layout does not depend on earlier outcomes.
        included.push(rng.random_bool(config.inclusion_prob));
        phases.push(rng.random_range(0.0..TAU));
        if config.windowed && included[scale] {
            let count =
                rng.random_range(config.window_count_min..=config.window_count_max) as usize;
            window_centers[scale] = (0..count)
                .map(|_| rng.random_range(0.0..config.signal_len as f64))
                .collect();
        }
    }
    HarmonicDraw {
        included,
        phases,
        window_centers,
    }
}

/// Sum of the active harmonic components before amplitude bounding:
/// `x[n] = sum_k a_k s(2^k theta_n + phi_k)` with `theta_n = 2 pi cycles n/N`.
pub fn harmonic_components(config: &SynthConfig, draw: &HarmonicDraw) -> Vec<f64> {
    let n = config.signal_len;
    let mut x = vec![0.0; n];
    for scale in 0..config.harmonics {
        if !draw.included[scale] {
            continue;
        }
        let factor = (1u64 << scale) as f64;
        let phase = draw.phases[scale];
        let windows = &draw.window_centers[scale];
        let std = config.window_std_fraction * n as f64;
        for (i, slot) in x.iter_mut().enumerate() {
            let theta = TAU * config.cycles as f64 * i as f64 / n as f64;
            let carrier = base_wave(config.base, factor * theta + phase);
            let envelope = if config.windowed {
                windows
                    .iter()
                    .map(|c| {
                        let d = i as f64 - c;
                        (-d * d / (2.0 * std * std)).exp()
                    })
                    .sum::<f64>()
            } else {
                1.0
            };
            *slot += envelope * carrier;
        }
    }
    x
}

fn bound_amplitude(mut x: Vec<f64>) -> Vec<f64> {
    let peak = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let scale = peak.max(1.0);
    for v in &mut x {
        *v /= scale;
    }
    x
}

/// Generates signal `index` of the harmonic dataset.
pub fn synth_harmonic(config: &SynthConfig, index: u64) -> Result<Signal> {
    config.validate()?;
    let cfg = SynthConfig {
        windowed: false,
        ..config.clone()
    };
    let draw = draw_params(&cfg, index);
    Signal::new(bound_amplitude(harmonic_components(&cfg, &draw)))
}

/// Generates signal `index` of the Gaussian-windowed harmonic dataset.
pub fn synth_windowed(config: &SynthConfig, index: u64) -> Result<Signal> {
    config.validate()?;
    if !config.windowed {
        return Err(Error::InvalidArgument(
            "synth_windowed requires windowed = true".into(),
        ));
    }
    let draw = draw_params(config, index);
    Signal::new(bound_amplitude(harmonic_components(config, &draw)))
}

/// Generates the whole dataset; deterministic in the seed, and each signal
/// depends only on (seed, index).
pub fn make_dataset(config: &SynthConfig) -> Result<Vec<Signal>> {
    config.validate()?;
    (0..config.count as u64)
        .map(|index| {
            if config.windowed {
                synth_windowed(config, index)
            } else {
                synth_harmonic(config, index)
            }
        })
        .collect()
}

/// Reads a 16-bit PCM WAV (mono or stereo), downmixes to mono, scales to
/// [-1, 1] by 1/32768, and emits consecutive length-`segment_len` windows
/// advancing by `hop`. A trailing partial window is dropped.
pub fn load_wav_segments(path: &Path, segment_len: usize, hop: usize) -> Result<Vec<Signal>> {
    if !segment_len.is_power_of_two() || segment_len == 0 {
        return Err(Error::InvalidArgument(format!(
            "segment length must be a power of two, got {segment_len}"
        )));
    }
    if hop == 0 {
        return Err(Error::InvalidArgument("hop must be >= 1".into()));
    }
    let mut reader = hound::WavReader::open(path)
        .map_err(|e| Error::format(path, format!("not a readable WAV file: {e}")))?;
    let spec = reader.spec();
    if spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(Error::format(
            path,
            format!(
                "expected 16-bit integer PCM, got {}-bit {:?}",
                spec.bits_per_sample, spec.sample_format
            ),
        ));
    }
    if spec.channels == 0 || spec.channels > 2 {
        return Err(Error::format(
            path,
            format!("expected mono or stereo, got {} channels", spec.channels),
        ));
    }
    let channels = spec.channels as usize;
    let raw: Vec<i16> = reader
        .samples::<i16>()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::format(path, format!("bad sample data: {e}")))?;
    let frames = raw.len() / channels;
    let mono: Vec<f64> = (0..frames)
        .map(|f| {
            let sum: f64 = (0..channels).map(|c| raw[f * channels + c] as f64).sum();
            sum / channels as f64 / 32768.0
        })
        .collect();

    let mut segments = Vec::new();
    let mut start = 0;
    while start + segment_len <= mono.len() {
        segments.push(Signal::new(mono[start..start + segment_len].to_vec())?);
        start += hop;
    }
    Ok(segments)
}

/// Max steps for [`random_wavelet`]'s constraint-only optimization.
pub const RANDOM_WAVELET_MAX_STEPS: usize = 10_000;
/// Stopping target for [`random_wavelet`].
pub const RANDOM_WAVELET_TOL: f64 = 1e-8;

/// Draws a random filter satisfying the wavelet constraints by minimizing
/// the constraint loss alone with Adam from a seeded unit-norm Gaussian
/// start. Errors with the achieved residual if the target is not reached.
pub fn random_wavelet(filter_len: usize, seed: u64) -> Result<ScalingFilter> {
    let mut h = init_filter(filter_len, seed)?;
    let config = TrainingConfig {
        filter_len,
        ..TrainingConfig::default()
    };
    let mut state = AdamState::new(filter_len);
    for _ in 0..RANDOM_WAVELET_MAX_STEPS {
        let (value, grad) = constraint_loss_and_grad(&h);
        if value < RANDOM_WAVELET_TOL {
            return Ok(h);
        }
        let (next, next_state) = adam_step(&h, &grad, &state, &config)?;
        h = next;
        state = next_state;
    }
    let residual = wavelet_loss(&h).total;
    if residual < RANDOM_WAVELET_TOL {
        Ok(h)
    } else {
        Err(Error::NoConvergence {
            residual,
            steps: RANDOM_WAVELET_MAX_STEPS,
        })
    }
}

// ---------------------------------------------------------------------------
// Dataset directory format: signal_#####.csv single-column files plus a
// `dataset.txt` manifest of key-value lines (config, count, N).
// ---------------------------------------------------------------------------

pub const DATASET_MANIFEST: &str = "dataset.txt";

fn signal_file_name(index: usize) -> String {
    format!("signal_{index:05}.csv")
}

/// Writes the signals and a manifest assembled from `meta` plus the count
/// and signal length.
pub fn write_dataset(dir: &Path, signals: &[Signal], meta: &[(String, String)]) -> Result<Vec<String>> {
    if signals.is_empty() {
        return Err(Error::InvalidArgument("dataset must be nonempty".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::with_capacity(signals.len() + 1);
    for (i, signal) in signals.iter().enumerate() {
        let name = signal_file_name(i);
        textio::write_column(&dir.join(&name), signal.samples())?;
        files.push(name);
    }
    let mut manifest = String::new();
    for (key, value) in meta {
        manifest.push_str(&format!("{key} {value}\n"));
    }
    manifest.push_str(&format!("count {}\n", signals.len()));
    manifest.push_str(&format!("n {}\n", signals[0].len()));
    textio::write_atomic(&dir.join(DATASET_MANIFEST), &manifest)?;
    files.push(DATASET_MANIFEST.to_string());
    Ok(files)
}

/// Reads a dataset directory written by [`write_dataset`], validating the
/// manifest's count and signal length.
pub fn read_dataset(dir: &Path) -> Result<Vec<Signal>> {
    let manifest_path = dir.join(DATASET_MANIFEST);
    let manifest = textio::read_to_string(&manifest_path)?;
    let mut count = None;
    let mut n = None;
    for line in manifest.lines() {
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next()) {
            (Some("count"), Some(v)) => count = v.parse::<usize>().ok(),
            (Some("n"), Some(v)) => n = v.parse::<usize>().ok(),
            _ => {}
        }
    }
    let count = count
        .ok_or_else(|| Error::format(&manifest_path, "missing or bad `count` entry"))?;
    let n = n.ok_or_else(|| Error::format(&manifest_path, "missing or bad `n` entry"))?;
    let mut signals = Vec::with_capacity(count);
    for i in 0..count {
        let path = dir.join(signal_file_name(i));
        let signal = crate::transform::read_signal_csv(&path)?;
        if signal.len() != n {
            return Err(Error::format(
                &path,
                format!("expected length {n}, got {}", signal.len()),
            ));
        }
        signals.push(signal);
    }
    Ok(signals)
}

/// Key-value pairs describing a synth config, as written to the manifest.
pub fn synth_key_values(config: &SynthConfig) -> Vec<(String, String)> {
    vec![
        ("base".into(), config.base.label().to_string()),
        ("harmonics".into(), config.harmonics.to_string()),
        (
            "inclusion_prob".into(),
            textio::format_f64(config.inclusion_prob),
        ),
        ("signal_len".into(), config.signal_len.to_string()),
        ("cycles".into(), config.cycles.to_string()),
        ("windowed".into(), config.windowed.to_string()),
        (
            "window_count_min".into(),
            config.window_count_min.to_string(),
        ),
        (
            "window_count_max".into(),
            config.window_count_max.to_string(),
        ),
        (
            "window_std_fraction".into(),
            textio::format_f64(config.window_std_fraction),
        ),
        ("seed".into(), config.seed.to_string()),
    ]
}

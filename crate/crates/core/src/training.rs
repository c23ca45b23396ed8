//! Adam-based minimization of the autoencoder loss over a dataset.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::filterbank::{self, NamedFilter, ScalingFilter};
use crate::grad::{self, LossParts};
use crate::rng::{derive_rng, STREAM_INIT_FILTER, STREAM_SHUFFLE};
use crate::textio;
use crate::transform::Signal;

/// All optimizer, loss-weight, and architecture hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    /// Filter length k.
    pub filter_len: usize,
    /// Decomposition depth J.
    pub levels: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub max_steps: usize,
    pub convergence_tol: f64,
    /// Trailing-window width in steps for the convergence test.
    pub convergence_window: usize,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            filter_len: 20,
            levels: 6,
            lambda1: 0.5,
            lambda2: 0.5,
            batch_size: 32,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            max_steps: 50_000,
            convergence_tol: 1e-5,
            convergence_window: 500,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.filter_len < 2 || !self.filter_len.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "filter length must be even and >= 2, got {}",
                self.filter_len
            )));
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 {
            return Err(Error::InvalidArgument("loss weights must be >= 0".into()));
        }
        if self.batch_size < 1 {
            return Err(Error::InvalidArgument("batch size must be >= 1".into()));
        }
        if self.learning_rate <= 0.0
            || self.convergence_tol <= 0.0
            || self.adam_eps <= 0.0
        {
            return Err(Error::InvalidArgument(
                "rates and tolerances must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return Err(Error::InvalidArgument("Adam betas must lie in [0, 1)".into()));
        }
        if self.levels == 0 {
            return Err(Error::InvalidArgument("levels must be >= 1".into()));
        }
        if self.max_steps == 0 || self.convergence_window == 0 {
            return Err(Error::InvalidArgument(
                "step counts and windows must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// One optimization step's loss record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub total_loss: f64,
    pub reconstruction_term: f64,
    pub sparsity_term: f64,
    pub constraint_term: f64,
}

/// Full training trace plus the learned filter.
#[derive(Debug, Clone)]
pub struct TrainingHistory {
    pub records: Vec<StepRecord>,
    pub final_h: ScalingFilter,
    pub converged: bool,
}

/// Unit-norm Gaussian initialization. Satisfies the L2 constraint at step 0
/// and is unbiased across phases.
pub fn init_filter(filter_len: usize, seed: u64) -> Result<ScalingFilter> {
    if filter_len < 2 || !filter_len.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "filter length must be even and >= 2, got {filter_len}"
        )));
    }
    let mut rng = derive_rng(seed, STREAM_INIT_FILTER, 0);
    let mut coeffs: Vec<f64> = (0..filter_len).map(|_| rng.sample(StandardNormal)).collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in &mut coeffs {
            *c /= norm;
        }
    }
    ScalingFilter::new(coeffs)
}

/// Adam first/second moment state.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(dim: usize) -> Self {
        AdamState {
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            step: 0,
        }
    }
}

/// Standard Adam update with bias correction:
/// `h_next = h - lr * mhat / (sqrt(vhat) + eps)`.
pub fn adam_step(
    h: &ScalingFilter,
    grad: &[f64],
    state: &AdamState,
    config: &TrainingConfig,
) -> Result<(ScalingFilter, AdamState)> {
    if grad.len() != h.len() || state.m.len() != h.len() {
        return Err(Error::InvalidArgument(
            "gradient/state dimension mismatch".into(),
        ));
    }
    let mut next = state.clone();
    next.step += 1;
    let t = next.step as i32;
    let b1 = config.adam_beta1;
    let b2 = config.adam_beta2;
    let bias1 = 1.0 - b1.powi(t);
    let bias2 = 1.0 - b2.powi(t);
    let mut coeffs = h.coeffs().to_vec();
    for i in 0..coeffs.len() {
        next.m[i] = b1 * next.m[i] + (1.0 - b1) * grad[i];
        next.v[i] = b2 * next.v[i] + (1.0 - b2) * grad[i] * grad[i];
        let m_hat = next.m[i] / bias1;
        let v_hat = next.v[i] / bias2;
        coeffs[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
    }
    Ok((ScalingFilter::new(coeffs)?, next))
}

/// Tracks the trailing-window convergence test: stop when the relative
/// improvement between consecutive disjoint window averages falls below the
/// tolerance. Comparing disjoint windows once per window (rather than a
/// sliding comparison every step) keeps minibatch noise from ending a run
/// mid-descent.
struct ConvergenceTracker {
    window: usize,
    tol: f64,
    losses: Vec<f64>,
}

impl ConvergenceTracker {
    fn new(window: usize, tol: f64) -> Self {
        ConvergenceTracker {
            window,
            tol,
            losses: Vec::new(),
        }
    }

    fn push_and_check(&mut self, loss: f64) -> bool {
        self.losses.push(loss);
        let w = self.window;
        let n = self.losses.len();
        if n < 2 * w || !n.is_multiple_of(w) {
            return false;
        }
        let prev: f64 = self.losses[n - 2 * w..n - w].iter().sum::<f64>() / w as f64;
        let cur: f64 = self.losses[n - w..].iter().sum::<f64>() / w as f64;
        let rel = (prev - cur) / prev.abs().max(1e-12);
        rel < self.tol
    }
}

fn check_dataset(dataset: &[Signal], config: &TrainingConfig) -> Result<usize> {
    config.validate()?;
    let first = dataset
        .first()
        .ok_or_else(|| Error::InvalidArgument("dataset must be nonempty".into()))?;
    let n = first.len();
    if dataset.iter().any(|x| x.len() != n) {
        return Err(Error::InvalidArgument("dataset has mixed signal lengths".into()));
    }
    if (n >> config.levels) == 0 || n % (1 << config.levels) != 0 {
        return Err(Error::InvalidArgument(format!(
            "signal length {n} is not divisible by 2^{}",
            config.levels
        )));
    }
    Ok(n)
}

/// Runs the minibatch Adam loop until the convergence test fires or
/// `max_steps` is reached. The dataset is reshuffled every epoch with a
/// generator derived from (seed, epoch); history is recorded every step.
pub fn train(dataset: &[Signal], config: &TrainingConfig) -> Result<TrainingHistory> {
    check_dataset(dataset, config)?;
    let mut h = init_filter(config.filter_len, config.seed)?;
    let mut state = AdamState::new(config.filter_len);
    let mut tracker = ConvergenceTracker::new(config.convergence_window, config.convergence_tol);
    let mut records = Vec::new();
    let mut converged = false;

    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut epoch: u64 = 0;
    let mut cursor = dataset.len(); // force an initial shuffle
    let mut step = 0usize;

    'outer: while step < config.max_steps {
        if cursor >= order.len() {
            let mut rng = derive_rng(config.seed, STREAM_SHUFFLE, epoch);
            order.shuffle(&mut rng);
            epoch += 1;
            cursor = 0;
        }
        let end = (cursor + config.batch_size).min(order.len());
        let batch: Vec<Signal> = order[cursor..end]
            .iter()
            .map(|&i| dataset[i].clone())
            .collect();
        cursor = end;

        let result = grad::loss_and_grad(
            &batch,
            &h,
            config.lambda1,
            config.lambda2,
            config.levels,
        )?;
        let (next_h, next_state) = adam_step(&h, &result.grad_h, &state, config)?;
        h = next_h;
        state = next_state;
        step += 1;

        records.push(record_from_parts(step, &result.parts));
        if tracker.push_and_check(result.loss) {
            converged = true;
            break 'outer;
        }
    }

    Ok(TrainingHistory {
        records,
        final_h: h,
        converged,
    })
}

fn record_from_parts(step: usize, parts: &LossParts) -> StepRecord {
    StepRecord {
        step,
        total_loss: parts.total(),
        reconstruction_term: parts.reconstruction,
        sparsity_term: parts.sparsity,
        constraint_term: parts.constraint,
    }
}

// ---------------------------------------------------------------------------
// Run artifacts: config key-values, history.csv, the learned filter, and the
// seed record, written into a run directory.
// ---------------------------------------------------------------------------

pub const CONFIG_FILE: &str = "config";
pub const HISTORY_FILE: &str = "history.csv";
pub const FILTER_FILE: &str = "filter.json";
pub const SEED_FILE: &str = "seed";

pub fn config_key_values(config: &TrainingConfig) -> Vec<(String, String)> {
    vec![
        ("filter_len".into(), config.filter_len.to_string()),
        ("levels".into(), config.levels.to_string()),
        ("lambda1".into(), textio::format_f64(config.lambda1)),
        ("lambda2".into(), textio::format_f64(config.lambda2)),
        ("batch_size".into(), config.batch_size.to_string()),
        (
            "learning_rate".into(),
            textio::format_f64(config.learning_rate),
        ),
        ("adam_beta1".into(), textio::format_f64(config.adam_beta1)),
        ("adam_beta2".into(), textio::format_f64(config.adam_beta2)),
        ("adam_eps".into(), textio::format_f64(config.adam_eps)),
        ("max_steps".into(), config.max_steps.to_string()),
        (
            "convergence_tol".into(),
            textio::format_f64(config.convergence_tol),
        ),
        (
            "convergence_window".into(),
            config.convergence_window.to_string(),
        ),
        ("seed".into(), config.seed.to_string()),
    ]
}

/// Writes `config`, `history.csv`, `filter.json`, and `seed` into `dir`.
pub fn write_run_artifacts(
    dir: &Path,
    config: &TrainingConfig,
    history: &TrainingHistory,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut config_text = String::new();
    for (key, value) in config_key_values(config) {
        config_text.push_str(&format!("{key} {value}\n"));
    }
    textio::write_atomic(&dir.join(CONFIG_FILE), &config_text)?;

    let mut csv = String::from("step,total,recon,sparsity,constraint\n");
    for r in &history.records {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.step,
            textio::format_f64(r.total_loss),
            textio::format_f64(r.reconstruction_term),
            textio::format_f64(r.sparsity_term),
            textio::format_f64(r.constraint_term),
        ));
    }
    textio::write_atomic(&dir.join(HISTORY_FILE), &csv)?;

    filterbank::write_filter_file(
        &dir.join(FILTER_FILE),
        &NamedFilter::new("learned", history.final_h.clone()),
    )?;

    textio::write_atomic(&dir.join(SEED_FILE), &format!("{}\n", config.seed))?;
    Ok(())
}

#[cfg(test)]
mod tests;

//! Python bindings exposing the main types and operations: filter
//! construction and constraints, forward/inverse transform, loss/gradient,
//! training, dataset synthesis, and the analysis tools.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wavelet_learn::analysis;
use wavelet_learn::datagen;
use wavelet_learn::filterbank;
use wavelet_learn::grad;
use wavelet_learn::training;
use wavelet_learn::transform;

fn err(e: wavelet_learn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// (loss, gradient, (reconstruction, sparsity, constraint))
type LossGrad = (f64, Vec<f64>, (f64, f64, f64));
/// (values, grid_step) for one sampled function.
type Sampled = (Vec<f64>, f64);

fn filter_from(coeffs: Vec<f64>) -> PyResult<filterbank::ScalingFilter> {
    filterbank::ScalingFilter::new(coeffs).map_err(err)
}

fn pair_from(coeffs: Vec<f64>) -> PyResult<filterbank::FilterPair> {
    Ok(filterbank::FilterPair::from_scaling(filter_from(coeffs)?))
}

fn signals_from(batch: Vec<Vec<f64>>) -> PyResult<Vec<transform::Signal>> {
    batch
        .into_iter()
        .map(|s| transform::Signal::new(s).map_err(err))
        .collect()
}

/// Scaling filter of a classical wavelet: "haar", "db2".."db10",
/// "sym2".."sym10", or "coif1".."coif5".
#[pyfunction]
fn classical_filter(name: &str) -> PyResult<Vec<f64>> {
    Ok(filterbank::classical_filter_by_name(name)
        .map_err(err)?
        .coeffs()
        .to_vec())
}

/// Wavelet (highpass) filter derived from `h` by the quadrature-mirror
/// relation g[n] = (-1)^n h[k-1-n].
#[pyfunction]
fn derive_qmf(h: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(filterbank::derive_qmf(&filter_from(h)?))
}

/// Soft wavelet-constraint loss; returns (l2_residual, mean_h_residual,
/// mean_g_residual, total).
#[pyfunction]
fn wavelet_loss(h: Vec<f64>) -> PyResult<(f64, f64, f64, f64)> {
    let r = filterbank::wavelet_loss(&filter_from(h)?);
    Ok((r.l2_residual, r.mean_h_residual, r.mean_g_residual, r.total))
}

/// Checks the orthonormality identities at tolerance `tol`; returns
/// (ok, sum_deviation, norm_deviation, max_shift_deviation).
#[pyfunction]
fn validate_orthonormal(h: Vec<f64>, tol: f64) -> PyResult<(bool, f64, f64, f64)> {
    let report = filterbank::validate_orthonormal(&filter_from(h)?, tol);
    Ok((
        report.is_orthonormal,
        report.sum_deviation,
        report.norm_deviation,
        report.max_shift_deviation,
    ))
}

/// Forward transform: returns (details, approx) with details[0] the finest
/// level.
#[pyfunction]
fn dwt(signal: Vec<f64>, h: Vec<f64>, levels: u32) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let x = transform::Signal::new(signal).map_err(err)?;
    let dec = transform::dwt(&x, &pair_from(h)?, levels).map_err(err)?;
    Ok((dec.details, dec.approx))
}

/// Inverse transform of (details, approx).
#[pyfunction]
fn idwt(details: Vec<Vec<f64>>, approx: Vec<f64>, h: Vec<f64>) -> PyResult<Vec<f64>> {
    let dec = transform::WaveletDecomposition { details, approx };
    Ok(transform::idwt(&dec, &pair_from(h)?)
        .map_err(err)?
        .into_samples())
}

/// Autoencoder loss and its exact gradient in `h` over a batch; returns
/// (loss, grad, (reconstruction, sparsity, constraint)).
#[pyfunction]
#[pyo3(signature = (batch, h, lambda1=0.5, lambda2=0.5, levels=6))]
fn loss_and_grad(
    batch: Vec<Vec<f64>>,
    h: Vec<f64>,
    lambda1: f64,
    lambda2: f64,
    levels: u32,
) -> PyResult<LossGrad> {
    let result = grad::loss_and_grad(
        &signals_from(batch)?,
        &filter_from(h)?,
        lambda1,
        lambda2,
        levels,
    )
    .map_err(err)?;
    Ok((
        result.loss,
        result.grad_h,
        (
            result.parts.reconstruction,
            result.parts.sparsity,
            result.parts.constraint,
        ),
    ))
}

/// Training history returned by `train`.
#[pyclass]
struct TrainingHistory {
    #[pyo3(get)]
    final_h: Vec<f64>,
    #[pyo3(get)]
    converged: bool,
    /// (step, total, reconstruction, sparsity, constraint) per step.
    #[pyo3(get)]
    records: Vec<(usize, f64, f64, f64, f64)>,
}

/// Adam training of the autoencoder over `dataset`.
#[pyfunction]
#[pyo3(signature = (dataset, filter_len=20, levels=6, lambda1=0.5, lambda2=0.5,
                    batch_size=32, learning_rate=1e-3, max_steps=50000,
                    convergence_tol=1e-5, convergence_window=500, seed=0))]
#[allow(clippy::too_many_arguments)]
fn train(
    dataset: Vec<Vec<f64>>,
    filter_len: usize,
    levels: u32,
    lambda1: f64,
    lambda2: f64,
    batch_size: usize,
    learning_rate: f64,
    max_steps: usize,
    convergence_tol: f64,
    convergence_window: usize,
    seed: u64,
) -> PyResult<TrainingHistory> {
    let config = training::TrainingConfig {
        filter_len,
        levels,
        lambda1,
        lambda2,
        batch_size,
        learning_rate,
        max_steps,
        convergence_tol,
        convergence_window,
        seed,
        ..training::TrainingConfig::default()
    };
    let history = training::train(&signals_from(dataset)?, &config).map_err(err)?;
    Ok(TrainingHistory {
        final_h: history.final_h.coeffs().to_vec(),
        converged: history.converged,
        records: history
            .records
            .iter()
            .map(|r| {
                (
                    r.step,
                    r.total_loss,
                    r.reconstruction_term,
                    r.sparsity_term,
                    r.constraint_term,
                )
            })
            .collect(),
    })
}

/// Synthetic harmonic dataset (sine/sawtooth/square base).
#[pyfunction]
#[pyo3(signature = (base="sine", harmonics=5, p=0.5, n=1024, m=100, cycles=4,
                    windowed=false, seed=0))]
#[allow(clippy::too_many_arguments)]
fn make_dataset(
    base: &str,
    harmonics: usize,
    p: f64,
    n: usize,
    m: usize,
    cycles: u32,
    windowed: bool,
    seed: u64,
) -> PyResult<Vec<Vec<f64>>> {
    let config = datagen::SynthConfig {
        base: datagen::BaseWave::parse(base).map_err(err)?,
        harmonics,
        inclusion_prob: p,
        signal_len: n,
        count: m,
        cycles,
        windowed,
        seed,
        ..datagen::SynthConfig::default()
    };
    Ok(datagen::make_dataset(&config)
        .map_err(err)?
        .into_iter()
        .map(transform::Signal::into_samples)
        .collect())
}

/// Random filter satisfying the wavelet constraints.
#[pyfunction]
fn random_wavelet(filter_len: usize, seed: u64) -> PyResult<Vec<f64>> {
    Ok(datagen::random_wavelet(filter_len, seed)
        .map_err(err)?
        .coeffs()
        .to_vec())
}

/// Cascade approximation of the scaling and wavelet functions; returns
/// ((phi_values, grid_step), (psi_values, grid_step)).
#[pyfunction]
#[pyo3(signature = (h, iterations=8))]
fn cascade(h: Vec<f64>, iterations: u32) -> PyResult<(Sampled, Sampled)> {
    if iterations == 0 {
        return Err(PyValueError::new_err("iterations must be >= 1"));
    }
    let (phi, psi) = analysis::cascade(&filter_from(h)?, iterations);
    Ok(((phi.values, phi.grid_step), (psi.values, psi.grid_step)))
}

/// Minimum cosine distance over circular shifts (shorter input zero-padded).
#[pyfunction]
fn filter_distance(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    analysis::filter_distance(&a, &b).map_err(err)
}

/// Database ranking by distance: list of (name, order, distance), ascending.
#[pyfunction]
fn closest_wavelet(h: Vec<f64>) -> PyResult<Vec<(String, u32, f64)>> {
    Ok(analysis::closest_wavelet(&filter_from(h)?)
        .into_iter()
        .map(|m| (m.id.family.label().to_string(), m.id.order, m.distance))
        .collect())
}

/// Signal generated from sparse random coefficients with the finest
/// `zero_top_scales` detail levels cleared.
#[pyfunction]
#[pyo3(signature = (h, n=1024, levels=6, density=0.05, zero_top_scales=3, seed=0))]
fn sample_signal(
    h: Vec<f64>,
    n: usize,
    levels: u32,
    density: f64,
    zero_top_scales: u32,
    seed: u64,
) -> PyResult<Vec<f64>> {
    Ok(analysis::sample_signal(&pair_from(h)?, n, levels, density, zero_top_scales, seed)
        .map_err(err)?
        .into_samples())
}

#[pymodule]
fn wavelearn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<TrainingHistory>()?;
    m.add_function(wrap_pyfunction!(classical_filter, m)?)?;
    m.add_function(wrap_pyfunction!(derive_qmf, m)?)?;
    m.add_function(wrap_pyfunction!(wavelet_loss, m)?)?;
    m.add_function(wrap_pyfunction!(validate_orthonormal, m)?)?;
    m.add_function(wrap_pyfunction!(dwt, m)?)?;
    m.add_function(wrap_pyfunction!(idwt, m)?)?;
    m.add_function(wrap_pyfunction!(loss_and_grad, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(make_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(random_wavelet, m)?)?;
    m.add_function(wrap_pyfunction!(cascade, m)?)?;
    m.add_function(wrap_pyfunction!(filter_distance, m)?)?;
    m.add_function(wrap_pyfunction!(closest_wavelet, m)?)?;
    m.add_function(wrap_pyfunction!(sample_signal, m)?)?;
    Ok(())
}

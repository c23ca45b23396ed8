//! Rendering of wavelet/scaling functions via the cascade algorithm,
//! distance to classical wavelets, and signal generation from sparse
//! coefficients.

use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::filterbank::{classical_filter, ClassicalWaveletId, FilterPair, ScalingFilter};
use crate::rng::{derive_rng, STREAM_SAMPLE_SIGNAL};
use crate::textio;
use crate::transform::{idwt, Signal, WaveletDecomposition};

/// Discretized scaling or wavelet function on a dyadic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub values: Vec<f64>,
    /// Grid spacing, `2^-iterations`.
    pub grid_step: f64,
    /// Tap-index origin of the support (0 for the cascade construction).
    pub support_start: i64,
}

impl SampledFunction {
    /// Abscissa of sample `index`.
    pub fn t(&self, index: usize) -> f64 {
        self.support_start as f64 + index as f64 * self.grid_step
    }
}

/// One upsample-convolve refinement: `sqrt(2) * upsample2(c) (*) f`, full
/// (non-circular) convolution.
fn refine(c: &[f64], filter: &[f64]) -> Vec<f64> {
    let up_len = 2 * c.len() - 1;
    let out_len = up_len + filter.len() - 1;
    let mut out = vec![0.0; out_len];
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0.0 {
            continue;
        }
        let base = 2 * i;
        for (m, &fm) in filter.iter().enumerate() {
            out[base + m] += std::f64::consts::SQRT_2 * ci * fm;
        }
    }
    out
}

/// Pads to the closed-support sample count `(k-1) 2^i + 1`; the iteration
/// itself produces the open-interval samples.
fn pad_to_support(mut values: Vec<f64>, filter_len: usize) -> Vec<f64> {
    values.resize(values.len() + filter_len - 1, 0.0);
    values
}

/// Approximates the scaling function phi and wavelet psi on the dyadic grid
/// `2^-iterations` by iterating the two-scale refinement from a unit
/// impulse. The wavelet filter enters at the coarsest scale (first step);
/// all remaining steps refine with the scaling filter.
pub fn cascade(h: &ScalingFilter, iterations: u32) -> (SampledFunction, SampledFunction) {
    assert!(iterations >= 1, "cascade needs at least one iteration");
    let pair = FilterPair::from_scaling(h.clone());
    let k = h.len();

    let mut phi = vec![1.0];
    for _ in 0..iterations {
        phi = refine(&phi, pair.h());
    }
    let mut psi = refine(&[1.0], pair.g());
    for _ in 1..iterations {
        psi = refine(&psi, pair.h());
    }

    let grid_step = 0.5f64.powi(iterations as i32);
    let expected = (k - 1) * (1usize << iterations) + 1;
    let phi = pad_to_support(phi, k);
    let psi = pad_to_support(psi, k);
    debug_assert_eq!(phi.len(), expected);
    debug_assert_eq!(psi.len(), expected);
    (
        SampledFunction {
            values: phi,
            grid_step,
            support_start: 0,
        },
        SampledFunction {
            values: psi,
            grid_step,
            support_start: 0,
        },
    )
}

/// Sup-norm distance between the cascade iterates at `iterations - 1` and
/// `iterations`, compared on the coarser grid. A convergence diagnostic:
/// learned filters are only approximately orthonormal and the cascade is
/// not guaranteed to converge for them. `None` when `iterations < 2`.
pub fn cascade_convergence_delta(h: &ScalingFilter, iterations: u32) -> Option<f64> {
    if iterations < 2 {
        return None;
    }
    let (coarse, _) = cascade(h, iterations - 1);
    let (fine, _) = cascade(h, iterations);
    Some(
        coarse
            .values
            .iter()
            .enumerate()
            .map(|(m, v)| (v - fine.values[2 * m]).abs())
            .fold(0.0, f64::max),
    )
}

/// Minimum cosine distance over all circular shifts, with the shorter filter
/// zero-padded to the longer's length.
pub fn filter_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let k = a.len().max(b.len());
    if k == 0 {
        return Err(Error::InvalidArgument("empty filter".into()));
    }
    let mut pa = a.to_vec();
    pa.resize(k, 0.0);
    let mut pb = b.to_vec();
    pb.resize(k, 0.0);
    let norm_a = pa.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = pb.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(Error::InvalidArgument(
            "filter distance needs nonzero filters".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for shift in 0..k {
        let mut dot = 0.0;
        for i in 0..k {
            dot += pa[i] * pb[(i + k - shift) % k];
        }
        best = best.min(1.0 - dot / (norm_a * norm_b));
    }
    // Rounding can push an exact self-match a hair below zero.
    Ok(best.clamp(0.0, 2.0))
}

/// One row of a database comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletMatch {
    pub id: ClassicalWaveletId,
    pub distance: f64,
}

/// Ranks every database filter by distance to `h`, ascending; ties break by
/// family order (Haar, Daubechies, Symlet, Coiflet) then ascending order.
pub fn closest_wavelet(h: &ScalingFilter) -> Vec<WaveletMatch> {
    let mut matches: Vec<WaveletMatch> = ClassicalWaveletId::all()
        .into_iter()
        .map(|id| {
            let c = classical_filter(id);
            let distance =
                filter_distance(h.coeffs(), c.coeffs()).expect("database filters are nonzero");
            WaveletMatch { id, distance }
        })
        .collect();
    matches.sort_by(|a, b| {
        a.distance
            .partial_cmp(&b.distance)
            .expect("distances are finite")
            .then(a.id.cmp(&b.id))
    });
    matches
}

/// Renders a match table: rank, family, order, distance to 6 decimals.
pub fn match_table(matches: &[WaveletMatch]) -> String {
    let mut out = String::from("rank family     order distance\n");
    for (rank, m) in matches.iter().enumerate() {
        out.push_str(&format!(
            "{:<4} {:<10} {:<5} {:.6}\n",
            rank + 1,
            m.id.family.label(),
            m.id.order,
            m.distance
        ));
    }
    out
}

/// Generates a signal from sparse random coefficients: each coefficient is
/// nonzero with probability `density` (values uniform in [-1, 1]), the
/// `zero_top_scales` finest detail levels are then cleared, and the result
/// is inverse-transformed.
pub fn sample_signal(
    pair: &FilterPair,
    signal_len: usize,
    levels: u32,
    density: f64,
    zero_top_scales: u32,
    seed: u64,
) -> Result<Signal> {
    if !(0.0..=1.0).contains(&density) || density == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    if zero_top_scales > levels {
        return Err(Error::InvalidArgument(format!(
            "cannot zero {zero_top_scales} scales of a {levels}-level decomposition"
        )));
    }
    if !signal_len.is_power_of_two() || levels == 0 || (signal_len >> levels) == 0 {
        return Err(Error::InvalidArgument(format!(
            "invalid length {signal_len} / levels {levels}"
        )));
    }
    let mut rng = derive_rng(seed, STREAM_SAMPLE_SIGNAL, 0);
    let mut draw_band = |len: usize| -> Vec<f64> {
        (0..len)
            .map(|_| {
                if rng.random_bool(density) {
                    rng.random_range(-1.0..1.0)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let mut details = Vec::with_capacity(levels as usize);
    let mut len = signal_len / 2;
    for _ in 0..levels {
        details.push(draw_band(len));
        if details.len() < levels as usize {
            len /= 2;
        }
    }
    let approx = draw_band(len);
    let mut decomp = WaveletDecomposition { details, approx };
    for j in 0..zero_top_scales as usize {
        for v in &mut decomp.details[j] {
            *v = 0.0;
        }
    }
    idwt(&decomp, pair)
}

/// Writes a sampled function as two-column CSV `t,value`.
pub fn write_sampled_function(path: &Path, f: &SampledFunction) -> Result<()> {
    let mut out = String::with_capacity(f.values.len() * 32);
    for (i, v) in f.values.iter().enumerate() {
        out.push_str(&textio::format_f64(f.t(i)));
        out.push(',');
        out.push_str(&textio::format_f64(*v));
        out.push('\n');
    }
    textio::write_atomic(path, &out)
}

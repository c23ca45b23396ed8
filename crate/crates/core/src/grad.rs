//! Exact gradient of the autoencoder loss with respect to the scaling filter.
//!
//! The loss is
//!   `(1/M) sum_i ||x_i - xhat_i||^2 + l1 (1/M) sum_i ||W(x_i)||_1 + l2 L_w(h, g)`
//! with `xhat_i = idwt(dwt(x_i))` sharing the same filter on both passes.
//!
//! Differentiation is by hand-derived adjoints of the two primitive ops
//! (strided circular correlation and its transpose) rather than a general
//! tape: the network is a fixed pipeline, so the adjoint code is small and
//! fast. All accumulation orders are fixed, so identical inputs produce
//! bitwise-identical gradients. The subgradient of |.| at 0 is taken as 0.

use crate::error::{Error, Result};
use crate::filterbank::{derive_qmf, wavelet_loss, FilterPair, ScalingFilter};
use crate::transform::Signal;

/// Values of the three loss components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParts {
    pub reconstruction: f64,
    pub sparsity: f64,
    pub constraint: f64,
}

impl LossParts {
    pub fn total(&self) -> f64 {
        self.reconstruction + self.sparsity + self.constraint
    }
}

/// Loss value, its exact gradient in `h`, and the component breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct GradResult {
    pub loss: f64,
    pub grad_h: Vec<f64>,
    pub parts: LossParts,
}

/// Finite-difference comparison against the analytic gradient.
#[derive(Debug, Clone)]
pub struct FdReport {
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    pub max_rel_error: f64,
}

fn wrap(idx: usize, n: usize) -> usize {
    if idx < n {
        idx
    } else {
        idx % n
    }
}

/// Gather: out[p] = sum_m f[m] input[(m + 2p) mod n].
fn gather(input: &[f64], filter: &[f64], out: &mut [f64]) {
    let n = input.len();
    for (p, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (m, &fm) in filter.iter().enumerate() {
            acc += fm * input[wrap(m + 2 * p, n)];
        }
        *slot = acc;
    }
}

/// Scatter (transpose of gather): out[(m + 2p) mod n] += f[m] input[p].
fn scatter_add(input: &[f64], filter: &[f64], out: &mut [f64]) {
    let n = out.len();
    for (p, &cp) in input.iter().enumerate() {
        for (m, &fm) in filter.iter().enumerate() {
            out[wrap(m + 2 * p, n)] += fm * cp;
        }
    }
}

/// Filter adjoint shared by both primitives:
/// grad_f[m] += sum_p coeff[p] carrier[(m + 2p) mod n].
fn accumulate_filter_grad(coeff: &[f64], carrier: &[f64], grad_f: &mut [f64]) {
    let n = carrier.len();
    for (m, slot) in grad_f.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (p, &cp) in coeff.iter().enumerate() {
            acc += cp * carrier[wrap(m + 2 * p, n)];
        }
        *slot += acc;
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Constraint loss `L_w` and its gradient in `h`, with the chain through the
/// derived `g` folded in.
pub fn constraint_loss_and_grad(h: &ScalingFilter) -> (f64, Vec<f64>) {
    let k = h.len();
    let kf = k as f64;
    let c = h.coeffs();
    let report = wavelet_loss(h);

    let norm = h.l2_norm();
    let mean_h = h.mean();
    let g = derive_qmf(h);
    let mean_g = g.iter().sum::<f64>() / kf;
    let target = std::f64::consts::SQRT_2 / kf;

    let mut grad = vec![0.0; k];
    // (||h|| - 1)^2 term; gradient taken as 0 at the (measure-zero) origin.
    if norm > 0.0 {
        let scale = 2.0 * (norm - 1.0) / norm;
        for (gr, &ci) in grad.iter_mut().zip(c) {
            *gr += scale * ci;
        }
    }
    // (mu_h - sqrt(2)/k)^2 term.
    let mh = 2.0 * (mean_h - target) / kf;
    for gr in grad.iter_mut() {
        *gr += mh;
    }
    // mu_g^2 term, chained through g[n] = (-1)^n h[k-1-n]:
    // d mu_g / d h[i] = (-1)^{k-1-i} / k.
    let mg = 2.0 * mean_g / kf;
    for (i, gr) in grad.iter_mut().enumerate() {
        let s = if (k - 1 - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        *gr += mg * s;
    }
    (report.total, grad)
}

fn check_batch(batch: &[Signal], lambda1: f64, lambda2: f64, levels: u32) -> Result<usize> {
    let first = batch
        .first()
        .ok_or_else(|| Error::InvalidArgument("batch must be nonempty".into()))?;
    let n = first.len();
    if batch.iter().any(|x| x.len() != n) {
        return Err(Error::InvalidArgument("batch has mixed signal lengths".into()));
    }
    if lambda1 < 0.0 || lambda2 < 0.0 {
        return Err(Error::InvalidArgument("loss weights must be >= 0".into()));
    }
    if levels == 0 || (n >> levels) == 0 {
        return Err(Error::InvalidArgument(format!(
            "{levels} levels invalid for signal length {n}"
        )));
    }
    Ok(n)
}

/// Loss only, shared by the finite-difference check.
pub fn loss_only(
    batch: &[Signal],
    h: &ScalingFilter,
    lambda1: f64,
    lambda2: f64,
    levels: u32,
) -> Result<f64> {
    check_batch(batch, lambda1, lambda2, levels)?;
    let pair = FilterPair::from_scaling(h.clone());
    let m_inv = 1.0 / batch.len() as f64;
    let mut recon = 0.0;
    let mut sparsity = 0.0;
    for x in batch {
        let fwd = forward(x.samples(), &pair, levels);
        recon += fwd
            .synthesis
            .last()
            .expect("at least one synthesis level")
            .iter()
            .zip(x.samples())
            .map(|(b, x)| (b - x) * (b - x))
            .sum::<f64>();
        sparsity += fwd
            .details
            .iter()
            .map(|d| d.iter().map(|v| v.abs()).sum::<f64>())
            .sum::<f64>()
            + fwd.approx().iter().map(|v| v.abs()).sum::<f64>();
    }
    let constraint = wavelet_loss(h).total;
    Ok(m_inv * recon + lambda1 * m_inv * sparsity + lambda2 * constraint)
}

/// Saved activations of one autoencoder pass.
struct ForwardPass {
    /// Analysis inputs a_0..a_J (a_0 is the signal itself).
    approxes: Vec<Vec<f64>>,
    /// Details d_1..d_J.
    details: Vec<Vec<f64>>,
    /// Synthesis outputs b_{J-1}..b_0 in computation order; last entry is the
    /// reconstruction.
    synthesis: Vec<Vec<f64>>,
}

impl ForwardPass {
    fn approx(&self) -> &[f64] {
        self.approxes.last().expect("at least one level")
    }

    /// b_j for level j, given J levels total.
    fn synth_level(&self, j: usize, levels: usize) -> &[f64] {
        // synthesis[i] holds b_{J-1-i}
        &self.synthesis[levels - 1 - j]
    }
}

fn forward(x: &[f64], pair: &FilterPair, levels: u32) -> ForwardPass {
    let levels = levels as usize;
    let mut approxes = Vec::with_capacity(levels + 1);
    let mut details = Vec::with_capacity(levels);
    approxes.push(x.to_vec());
    for j in 0..levels {
        let cur = &approxes[j];
        let n = cur.len();
        let mut a_next = vec![0.0; n / 2];
        let mut d_next = vec![0.0; n / 2];
        gather(cur, pair.h(), &mut a_next);
        gather(cur, pair.g(), &mut d_next);
        approxes.push(a_next);
        details.push(d_next);
    }
    // Weight-tied synthesis pass from the same coefficients.
    let mut synthesis = Vec::with_capacity(levels);
    let mut current = approxes[levels].clone();
    for j in (0..levels).rev() {
        let n = current.len() * 2;
        let mut out = vec![0.0; n];
        scatter_add(&current, pair.h(), &mut out);
        scatter_add(&details[j], pair.g(), &mut out);
        synthesis.push(out.clone());
        current = out;
    }
    ForwardPass {
        approxes,
        details,
        synthesis,
    }
}

/// Loss and exact reverse-mode gradient over a batch.
///
/// The gradient sums contributions from the analysis pass, the weight-tied
/// synthesis pass, the L1 term, and the constraint term, then folds the
/// wavelet-filter contribution back through the QMF relation.
pub fn loss_and_grad(
    batch: &[Signal],
    h: &ScalingFilter,
    lambda1: f64,
    lambda2: f64,
    levels: u32,
) -> Result<GradResult> {
    check_batch(batch, lambda1, lambda2, levels)?;
    let levels = levels as usize;
    let pair = FilterPair::from_scaling(h.clone());
    let k = h.len();
    let m_inv = 1.0 / batch.len() as f64;

    let mut recon_term = 0.0;
    let mut sparsity_term = 0.0;
    let mut grad_h = vec![0.0; k];
    let mut grad_g = vec![0.0; k];

    for x in batch {
        let fwd = forward(x.samples(), &pair, levels as u32);
        let xhat = fwd.synth_level(0, levels);

        recon_term += m_inv
            * xhat
                .iter()
                .zip(x.samples())
                .map(|(b, x)| (b - x) * (b - x))
                .sum::<f64>();
        let l1: f64 = fwd
            .details
            .iter()
            .map(|d| d.iter().map(|v| v.abs()).sum::<f64>())
            .sum::<f64>()
            + fwd.approx().iter().map(|v| v.abs()).sum::<f64>();
        sparsity_term += lambda1 * m_inv * l1;

        // Seed: d(recon)/d(b_0) = (2/M)(b_0 - x).
        let mut bbar: Vec<f64> = xhat
            .iter()
            .zip(x.samples())
            .map(|(b, x)| 2.0 * m_inv * (b - x))
            .collect();

        // Backward through synthesis, finest output to coarsest input.
        // Level j consumed (b_{j+1}, d_{j+1}) and produced b_j.
        let mut dbar_syn: Vec<Vec<f64>> = Vec::with_capacity(levels);
        for j in 0..levels {
            let b_input = if j + 1 == levels {
                fwd.approx()
            } else {
                fwd.synth_level(j + 1, levels)
            };
            accumulate_filter_grad(b_input, &bbar, &mut grad_h);
            accumulate_filter_grad(&fwd.details[j], &bbar, &mut grad_g);

            let half = bbar.len() / 2;
            let mut next = vec![0.0; half];
            gather(&bbar, pair.h(), &mut next);
            let mut dbar = vec![0.0; half];
            gather(&bbar, pair.g(), &mut dbar);
            dbar_syn.push(dbar);
            bbar = next;
        }

        // bbar is now the synthesis-path gradient at a_J; add the L1 part.
        let scale = lambda1 * m_inv;
        let mut abar: Vec<f64> = fwd
            .approx()
            .iter()
            .zip(&bbar)
            .map(|(a, b)| b + scale * sign(*a))
            .collect();

        // Backward through analysis, coarsest level to finest.
        for j in (0..levels).rev() {
            let dbar_total: Vec<f64> = dbar_syn[j]
                .iter()
                .zip(&fwd.details[j])
                .map(|(s, d)| s + scale * sign(*d))
                .collect();

            let a_input = &fwd.approxes[j];
            accumulate_filter_grad(&abar, a_input, &mut grad_h);
            accumulate_filter_grad(&dbar_total, a_input, &mut grad_g);

            if j > 0 {
                let mut prev = vec![0.0; a_input.len()];
                scatter_add(&abar, pair.h(), &mut prev);
                scatter_add(&dbar_total, pair.g(), &mut prev);
                abar = prev;
            }
        }
    }

    // Chain the wavelet-filter gradient back through g[n] = (-1)^n h[k-1-n].
    for (i, gh) in grad_h.iter_mut().enumerate() {
        let n = k - 1 - i;
        let s = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        *gh += s * grad_g[n];
    }

    let (constraint_value, constraint_grad) = constraint_loss_and_grad(h);
    let constraint_term = lambda2 * constraint_value;
    for (gh, cg) in grad_h.iter_mut().zip(&constraint_grad) {
        *gh += lambda2 * cg;
    }

    let parts = LossParts {
        reconstruction: recon_term,
        sparsity: sparsity_term,
        constraint: constraint_term,
    };
    Ok(GradResult {
        loss: parts.total(),
        grad_h,
        parts,
    })
}

/// Central finite differences per coordinate against the analytic gradient.
pub fn fd_check(
    batch: &[Signal],
    h: &ScalingFilter,
    lambda1: f64,
    lambda2: f64,
    levels: u32,
    step: f64,
) -> Result<FdReport> {
    if step <= 0.0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let analytic = loss_and_grad(batch, h, lambda1, lambda2, levels)?.grad_h;
    let mut numeric = Vec::with_capacity(h.len());
    for i in 0..h.len() {
        let mut plus = h.coeffs().to_vec();
        plus[i] += step;
        let mut minus = h.coeffs().to_vec();
        minus[i] -= step;
        let lp = loss_only(batch, &ScalingFilter::new(plus)?, lambda1, lambda2, levels)?;
        let lm = loss_only(batch, &ScalingFilter::new(minus)?, lambda1, lambda2, levels)?;
        numeric.push((lp - lm) / (2.0 * step));
    }
    let max_rel_error = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).abs() / (a.abs() + n.abs()).max(1e-8))
        .fold(0.0, f64::max);
    Ok(FdReport {
        analytic,
        numeric,
        max_rel_error,
    })
}

//! Forward and inverse discrete wavelet transform as an unrolled filter-bank
//! network with periodic (circular) boundary handling.
//!
//! Conventions pinned here: the forward pass is a strided circular
//! correlation with the filter taps in ascending index order (no flip), the
//! outputs sit at even shifts, and the inverse step is the exact adjoint of
//! the forward step. Periodic extension makes the transform exactly
//! orthogonal for orthonormal filters at any finite length.

use std::path::Path;

use crate::error::{Error, Result};
use crate::filterbank::FilterPair;
use crate::textio;

/// Fixed-length real signal. Length must be a positive power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || !samples.len().is_power_of_two() {
            return Err(Error::InvalidSignal(format!(
                "length must be a positive power of two, got {}",
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite sample {bad}")));
        }
        Ok(Signal { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Multi-level decomposition: detail sequences d_1..d_J plus the final
/// approximation a_J. `details[0]` is the finest level d_1.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
}

impl WaveletDecomposition {
    pub fn levels(&self) -> u32 {
        self.details.len() as u32
    }

    /// Original signal length (total coefficient count).
    pub fn signal_len(&self) -> usize {
        self.details.iter().map(Vec::len).sum::<usize>() + self.approx.len()
    }

    /// Checks the level-length ladder: every detail level halves the one
    /// above it and the coarsest detail matches the approximation.
    pub fn validate(&self) -> Result<()> {
        if self.details.is_empty() {
            return Err(Error::InvalidArgument(
                "decomposition must have at least one level".into(),
            ));
        }
        let mut expected = self.details[0].len();
        for (j, d) in self.details.iter().enumerate() {
            if d.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "detail level {} has length {}, expected {}",
                    j + 1,
                    d.len(),
                    expected
                )));
            }
            if d.is_empty() {
                return Err(Error::InvalidArgument(format!("empty detail level {}", j + 1)));
            }
            if j + 1 < self.details.len() {
                if !expected.is_multiple_of(2) {
                    return Err(Error::InvalidArgument(format!(
                        "detail level {} has odd length {}",
                        j + 1,
                        expected
                    )));
                }
                expected /= 2;
            }
        }
        if self.approx.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "approximation has length {}, expected {}",
                self.approx.len(),
                expected
            )));
        }
        if !self.signal_len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "total coefficient count {} is not a power of two",
                self.signal_len()
            )));
        }
        Ok(())
    }
}

/// Band identifier inside a flattened coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Detail level j (1-based, 1 = finest).
    Detail(u32),
    /// Final approximation a_J.
    Approx,
}

/// Offset/length of one band in the flat layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandSpan {
    pub band: Band,
    pub offset: usize,
    pub len: usize,
}

/// Decomposition flattened to a single vector in d_1, d_2, ..., d_J, a_J
/// order, with the layout recorded alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatCoefficients {
    pub values: Vec<f64>,
    pub layout: Vec<BandSpan>,
}

impl FlatCoefficients {
    /// Rebuilds the layout for a bare value vector of length N at depth
    /// `levels`, as read from a coefficient file.
    pub fn from_values(values: Vec<f64>, levels: u32) -> Result<Self> {
        let n = values.len();
        if levels == 0 {
            return Err(Error::InvalidArgument("levels must be >= 1".into()));
        }
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "coefficient count must be a positive power of two, got {n}"
            )));
        }
        if (n >> levels) == 0 {
            return Err(Error::InvalidArgument(format!(
                "{levels} levels is too deep for {n} coefficients"
            )));
        }
        let mut layout = Vec::with_capacity(levels as usize + 1);
        let mut offset = 0;
        let mut len = n / 2;
        for j in 1..=levels {
            layout.push(BandSpan {
                band: Band::Detail(j),
                offset,
                len,
            });
            offset += len;
            if j < levels {
                len /= 2;
            }
        }
        layout.push(BandSpan {
            band: Band::Approx,
            offset,
            len,
        });
        debug_assert_eq!(offset + len, n);
        Ok(FlatCoefficients { values, layout })
    }

    pub fn levels(&self) -> u32 {
        self.layout.len() as u32 - 1
    }

    pub fn band(&self, band: Band) -> Option<&[f64]> {
        self.layout
            .iter()
            .find(|s| s.band == band)
            .map(|s| &self.values[s.offset..s.offset + s.len])
    }
}

fn wrap(idx: usize, n: usize) -> usize {
    if idx < n {
        idx
    } else {
        idx % n
    }
}

/// One analysis step: strided circular correlation of `a` with both filters.
/// Returns the next approximation and detail, each of length `n/2`.
pub fn dwt_step(a: &[f64], pair: &FilterPair) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "dwt_step input length must be even and >= 2, got {n}"
        )));
    }
    let h = pair.h();
    let g = pair.g();
    let half = n / 2;
    let mut a_next = vec![0.0; half];
    let mut d_next = vec![0.0; half];
    for p in 0..half {
        let mut acc_a = 0.0;
        let mut acc_d = 0.0;
        for (m, (&hm, &gm)) in h.iter().zip(g.iter()).enumerate() {
            let idx = wrap(m + 2 * p, n);
            acc_a += hm * a[idx];
            acc_d += gm * a[idx];
        }
        a_next[p] = acc_a;
        d_next[p] = acc_d;
    }
    Ok((a_next, d_next))
}

/// One synthesis step: upsample-by-2 and circular convolution, summed over
/// both channels. Exact adjoint of [`dwt_step`].
pub fn idwt_step(a_next: &[f64], d_next: &[f64], pair: &FilterPair) -> Result<Vec<f64>> {
    if a_next.len() != d_next.len() {
        return Err(Error::InvalidArgument(format!(
            "channel lengths differ: {} vs {}",
            a_next.len(),
            d_next.len()
        )));
    }
    if a_next.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient channels".into()));
    }
    let n = 2 * a_next.len();
    let h = pair.h();
    let g = pair.g();
    let mut out = vec![0.0; n];
    for p in 0..a_next.len() {
        let ap = a_next[p];
        let dp = d_next[p];
        for (m, (&hm, &gm)) in h.iter().zip(g.iter()).enumerate() {
            let idx = wrap(m + 2 * p, n);
            out[idx] += hm * ap + gm * dp;
        }
    }
    Ok(out)
}

/// Emitted when a decomposition level gets shorter than the filter, where
/// circular wrap dominates the coefficients.
pub fn depth_warning(n: usize, filter_len: usize, levels: u32) -> Option<String> {
    if levels == 0 {
        return None;
    }
    let coarsest_input = n >> (levels - 1);
    if coarsest_input < filter_len {
        Some(format!(
            "level {levels} applies a {filter_len}-tap filter to only {coarsest_input} samples; \
             circular wrap dominates these coefficients"
        ))
    } else {
        None
    }
}

/// Full decomposition: applies [`dwt_step`] `levels` times, feeding each
/// approximation forward.
pub fn dwt(x: &Signal, pair: &FilterPair, levels: u32) -> Result<WaveletDecomposition> {
    let n = x.len();
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    if (n >> levels) == 0 {
        return Err(Error::InvalidArgument(format!(
            "{levels} levels is too deep for signal length {n}"
        )));
    }
    let mut details = Vec::with_capacity(levels as usize);
    let mut approx = x.samples().to_vec();
    for _ in 0..levels {
        let (a_next, d_next) = dwt_step(&approx, pair)?;
        details.push(d_next);
        approx = a_next;
    }
    Ok(WaveletDecomposition { details, approx })
}

/// Full reconstruction: applies [`idwt_step`] from the coarsest level back
/// down. Inverse of [`dwt`] for orthonormal filters.
pub fn idwt(decomp: &WaveletDecomposition, pair: &FilterPair) -> Result<Signal> {
    decomp.validate()?;
    let mut acc = decomp.approx.clone();
    for d in decomp.details.iter().rev() {
        acc = idwt_step(&acc, d, pair)?;
    }
    Signal::new(acc)
}

/// Concatenates a decomposition into d_1..d_J, a_J order.
pub fn flatten(decomp: &WaveletDecomposition) -> FlatCoefficients {
    let mut values = Vec::with_capacity(decomp.signal_len());
    let mut layout = Vec::with_capacity(decomp.details.len() + 1);
    for (j, d) in decomp.details.iter().enumerate() {
        layout.push(BandSpan {
            band: Band::Detail(j as u32 + 1),
            offset: values.len(),
            len: d.len(),
        });
        values.extend_from_slice(d);
    }
    layout.push(BandSpan {
        band: Band::Approx,
        offset: values.len(),
        len: decomp.approx.len(),
    });
    values.extend_from_slice(&decomp.approx);
    FlatCoefficients { values, layout }
}

/// Rebuilds the decomposition from a flat vector. Exact inverse of
/// [`flatten`].
pub fn unflatten(flat: &FlatCoefficients) -> Result<WaveletDecomposition> {
    let mut details = Vec::new();
    let mut approx = None;
    let mut cursor = 0usize;
    for span in &flat.layout {
        if span.offset != cursor {
            return Err(Error::InvalidArgument(format!(
                "layout gap at offset {} (expected {})",
                span.offset, cursor
            )));
        }
        cursor += span.len;
        if cursor > flat.values.len() {
            return Err(Error::InvalidArgument(
                "layout extends past the value vector".into(),
            ));
        }
        let chunk = flat.values[span.offset..span.offset + span.len].to_vec();
        match span.band {
            Band::Detail(level) => {
                if level as usize != details.len() + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "detail levels out of order at level {level}"
                    )));
                }
                details.push(chunk);
            }
            Band::Approx => {
                if approx.is_some() {
                    return Err(Error::InvalidArgument("duplicate approximation band".into()));
                }
                approx = Some(chunk);
            }
        }
    }
    if cursor != flat.values.len() {
        return Err(Error::InvalidArgument(format!(
            "layout covers {cursor} of {} values",
            flat.values.len()
        )));
    }
    let decomp = WaveletDecomposition {
        details,
        approx: approx.ok_or_else(|| Error::InvalidArgument("missing approximation band".into()))?,
    };
    decomp.validate()?;
    Ok(decomp)
}

// ---------------------------------------------------------------------------
// Coefficient file format: header `N J k filter-name`, then the flattened
// coefficients one value per line at full precision.
// ---------------------------------------------------------------------------

pub fn write_coefficients(
    path: &Path,
    flat: &FlatCoefficients,
    filter_len: usize,
    filter_name: &str,
) -> Result<()> {
    let mut out = String::with_capacity(flat.values.len() * 24 + 64);
    out.push_str(&format!(
        "{} {} {} {}\n",
        flat.values.len(),
        flat.levels(),
        filter_len,
        filter_name
    ));
    for v in &flat.values {
        out.push_str(&textio::format_f64(*v));
        out.push('\n');
    }
    textio::write_atomic(path, &out)
}

/// Header of a coefficient file.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientHeader {
    pub n: usize,
    pub levels: u32,
    pub filter_len: usize,
    pub filter_name: String,
}

pub fn read_coefficients(path: &Path) -> Result<(CoefficientHeader, FlatCoefficients)> {
    let text = textio::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines
        .next()
        .ok_or_else(|| Error::format(path, "empty coefficient file"))?;
    let fields: Vec<&str> = header_line.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::format(
            path,
            format!("line 1: expected `N J k filter-name`, got {header_line:?}"),
        ));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::format(path, format!("line 1: bad N {:?}", fields[0])))?;
    let levels: u32 = fields[1]
        .parse()
        .map_err(|_| Error::format(path, format!("line 1: bad J {:?}", fields[1])))?;
    let filter_len: usize = fields[2]
        .parse()
        .map_err(|_| Error::format(path, format!("line 1: bad k {:?}", fields[2])))?;
    let header = CoefficientHeader {
        n,
        levels,
        filter_len,
        filter_name: fields[3].to_string(),
    };
    let mut values = Vec::with_capacity(n);
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(textio::parse_f64(path, i, line)?);
    }
    if values.len() != n {
        return Err(Error::format(
            path,
            format!("header says N = {n} but file has {} values", values.len()),
        ));
    }
    let flat = FlatCoefficients::from_values(values, levels)
        .map_err(|e| Error::format(path, e.to_string()))?;
    Ok((header, flat))
}

// ---------------------------------------------------------------------------
// Signal files: single-column CSV, or 16-bit PCM WAV on ingest.
// ---------------------------------------------------------------------------

pub fn write_signal_csv(path: &Path, signal: &Signal) -> Result<()> {
    textio::write_column(path, signal.samples())
}

pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    let values = textio::read_column(path)?;
    Signal::new(values).map_err(|e| Error::format(path, e.to_string()))
}

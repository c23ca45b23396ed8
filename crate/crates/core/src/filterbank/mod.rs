//! Filter representations, the quadrature-mirror derivation, the soft wavelet
//! constraint loss, and the database of classical orthonormal filters.

mod tables;

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::textio;

/// Learnable scaling (lowpass) filter `h`. The single degree of freedom of the
/// whole model; the wavelet filter is always derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFilter {
    coeffs: Vec<f64>,
}

impl ScalingFilter {
    /// Length must be even and at least 2, entries finite. Odd lengths break
    /// the alternating-flip mean-zero structure of the derived highpass.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidFilter(format!(
                "need at least 2 taps, got {}",
                coeffs.len()
            )));
        }
        if !coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidFilter(format!(
                "tap count must be even, got {}",
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidFilter(format!("non-finite tap {bad}")));
        }
        Ok(ScalingFilter { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Filter length `k`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs.iter().sum::<f64>() / self.len() as f64
    }
}

/// Derives the wavelet (highpass) filter from the scaling filter by the
/// alternating flip `g[n] = (-1)^n h[k-1-n]`, which anchors the time reversal
/// at the filter support so both filters share the same index range.
pub fn derive_qmf(h: &ScalingFilter) -> Vec<f64> {
    let k = h.len();
    (0..k)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * h.coeffs[k - 1 - n]
        })
        .collect()
}

/// A scaling filter together with its derived wavelet filter. `g` is always
/// the QMF image of `h`; it is never stored independently.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    h: ScalingFilter,
    g: Vec<f64>,
}

impl FilterPair {
    pub fn from_scaling(h: ScalingFilter) -> Self {
        let g = derive_qmf(&h);
        FilterPair { h, g }
    }

    pub fn h(&self) -> &[f64] {
        self.h.coeffs()
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn scaling(&self) -> &ScalingFilter {
        &self.h
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.h.len()
    }
}

impl From<ScalingFilter> for FilterPair {
    fn from(h: ScalingFilter) -> Self {
        FilterPair::from_scaling(h)
    }
}

/// Breakdown of the soft wavelet-constraint loss
/// `(||h||_2 - 1)^2 + (mu_h - sqrt(2)/k)^2 + mu_g^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub l2_residual: f64,
    pub mean_h_residual: f64,
    pub mean_g_residual: f64,
    pub total: f64,
}

/// Evaluates the wavelet constraints on `h` (and its derived `g`).
pub fn wavelet_loss(h: &ScalingFilter) -> ConstraintReport {
    let k = h.len() as f64;
    let l2 = h.l2_norm();
    let mean_h = h.mean();
    let g = derive_qmf(h);
    let mean_g = g.iter().sum::<f64>() / k;

    let l2_residual = (l2 - 1.0) * (l2 - 1.0);
    let target = std::f64::consts::SQRT_2 / k;
    let mean_h_residual = (mean_h - target) * (mean_h - target);
    let mean_g_residual = mean_g * mean_g;
    ConstraintReport {
        l2_residual,
        mean_h_residual,
        mean_g_residual,
        total: l2_residual + mean_h_residual + mean_g_residual,
    }
}

/// Diagnostics from [`validate_orthonormal`].
#[derive(Debug, Clone, Copy)]
pub struct OrthoReport {
    /// Whether every residual is within the requested tolerance.
    pub is_orthonormal: bool,
    /// `|sum(h) - sqrt(2)|`.
    pub sum_deviation: f64,
    /// `|  ||h||_2 - 1 |`.
    pub norm_deviation: f64,
    /// `max_{m != 0} | sum_n h[n] h[n-2m] |`.
    pub max_shift_deviation: f64,
}

/// Checks the orthonormal scaling-filter identities: unit norm, sum sqrt(2),
/// and double-shift orthogonality.
pub fn validate_orthonormal(h: &ScalingFilter, tol: f64) -> OrthoReport {
    assert!(tol > 0.0, "tolerance must be positive");
    let c = h.coeffs();
    let k = c.len();
    let sum_deviation = (c.iter().sum::<f64>() - std::f64::consts::SQRT_2).abs();
    let norm_deviation = (h.l2_norm() - 1.0).abs();
    let mut max_shift_deviation: f64 = 0.0;
    for m in 1..k / 2 + 1 {
        let shift = 2 * m;
        let mut acc = 0.0;
        for n in shift..k {
            acc += c[n] * c[n - shift];
        }
        max_shift_deviation = max_shift_deviation.max(acc.abs());
    }
    OrthoReport {
        is_orthonormal: sum_deviation <= tol && norm_deviation <= tol && max_shift_deviation <= tol,
        sum_deviation,
        norm_deviation,
        max_shift_deviation,
    }
}

/// The four classical families shipped in the database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WaveletFamily {
    Haar,
    Daubechies,
    Symlet,
    Coiflet,
}

impl WaveletFamily {
    pub fn label(&self) -> &'static str {
        match self {
            WaveletFamily::Haar => "Haar",
            WaveletFamily::Daubechies => "Daubechies",
            WaveletFamily::Symlet => "Symlet",
            WaveletFamily::Coiflet => "Coiflet",
        }
    }

    fn prefix(&self) -> &'static str {
        match self {
            WaveletFamily::Haar => "haar",
            WaveletFamily::Daubechies => "db",
            WaveletFamily::Symlet => "sym",
            WaveletFamily::Coiflet => "coif",
        }
    }
}

/// Identifier of one classical wavelet: Haar(1), db2-db10, sym2-sym10,
/// coif1-coif5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassicalWaveletId {
    pub family: WaveletFamily,
    pub order: u32,
}

impl ClassicalWaveletId {
    pub fn new(family: WaveletFamily, order: u32) -> Result<Self> {
        let valid = match family {
            WaveletFamily::Haar => order == 1,
            WaveletFamily::Daubechies | WaveletFamily::Symlet => (2..=10).contains(&order),
            WaveletFamily::Coiflet => (1..=5).contains(&order),
        };
        if valid {
            Ok(ClassicalWaveletId { family, order })
        } else {
            Err(Error::UnknownWavelet(format!(
                "{}{}",
                family.prefix(),
                order
            )))
        }
    }

    /// All 24 database entries in family order, then ascending order.
    pub fn all() -> Vec<ClassicalWaveletId> {
        let mut ids = vec![ClassicalWaveletId {
            family: WaveletFamily::Haar,
            order: 1,
        }];
        ids.extend((2..=10).map(|order| ClassicalWaveletId {
            family: WaveletFamily::Daubechies,
            order,
        }));
        ids.extend((2..=10).map(|order| ClassicalWaveletId {
            family: WaveletFamily::Symlet,
            order,
        }));
        ids.extend((1..=5).map(|order| ClassicalWaveletId {
            family: WaveletFamily::Coiflet,
            order,
        }));
        ids
    }

    /// Parses names like `haar`, `db4`, `sym5`, `coif3`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("haar") || name.eq_ignore_ascii_case("haar1") {
            return ClassicalWaveletId::new(WaveletFamily::Haar, 1);
        }
        for (prefix, family) in [
            ("db", WaveletFamily::Daubechies),
            ("sym", WaveletFamily::Symlet),
            ("coif", WaveletFamily::Coiflet),
        ] {
            if let Some(rest) = name.strip_prefix(prefix) {
                let order: u32 = rest
                    .parse()
                    .map_err(|_| Error::UnknownWavelet(name.to_string()))?;
                return ClassicalWaveletId::new(family, order);
            }
        }
        Err(Error::UnknownWavelet(name.to_string()))
    }
}

impl fmt::Display for ClassicalWaveletId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WaveletFamily::Haar => write!(f, "haar"),
            _ => write!(f, "{}{}", self.family.prefix(), self.order),
        }
    }
}

/// Returns the published orthonormal scaling filter for `id`.
///
/// Normalization convention: `sum(h) = sqrt(2)`, `||h||_2 = 1`.
pub fn classical_filter(id: ClassicalWaveletId) -> ScalingFilter {
    let coeffs = tables::lookup(id.family, id.order)
        .unwrap_or_else(|| panic!("database missing {id}"))
        .to_vec();
    ScalingFilter::new(coeffs).expect("database entries are valid filters")
}

/// Looks up a classical filter by textual name.
pub fn classical_filter_by_name(name: &str) -> Result<ScalingFilter> {
    Ok(classical_filter(ClassicalWaveletId::parse(name)?))
}

// ---------------------------------------------------------------------------
// Filter file format: a small JSON record {"name", "k", "h"} with taps
// printed at 17 significant digits.
// ---------------------------------------------------------------------------

/// A named filter as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFilter {
    pub name: String,
    pub filter: ScalingFilter,
}

impl NamedFilter {
    pub fn new(name: impl Into<String>, filter: ScalingFilter) -> Self {
        NamedFilter {
            name: name.into(),
            filter,
        }
    }
}

pub fn write_filter_file(path: &Path, filter: &NamedFilter) -> Result<()> {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!(
        "  \"name\": {},\n",
        serde_json::to_string(&filter.name).expect("string serializes")
    ));
    out.push_str(&format!("  \"k\": {},\n", filter.filter.len()));
    out.push_str("  \"h\": [\n");
    let k = filter.filter.len();
    for (i, c) in filter.filter.coeffs().iter().enumerate() {
        let sep = if i + 1 < k { "," } else { "" };
        out.push_str(&format!("    {}{}\n", textio::format_f64(*c), sep));
    }
    out.push_str("  ]\n}\n");
    textio::write_atomic(path, &out)
}

#[derive(Deserialize)]
struct FilterRecord {
    name: String,
    k: usize,
    h: Vec<f64>,
}

pub fn read_filter_file(path: &Path) -> Result<NamedFilter> {
    let text = textio::read_to_string(path)?;
    let record: FilterRecord =
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    if record.h.len() != record.k {
        return Err(Error::format(
            path,
            format!("k = {} but h has {} entries", record.k, record.h.len()),
        ));
    }
    let filter = ScalingFilter::new(record.h)
        .map_err(|e| Error::format(path, e.to_string()))?;
    Ok(NamedFilter::new(record.name, filter))
}

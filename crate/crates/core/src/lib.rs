//! Learn wavelet filters directly from raw signal data.
//!
//! The discrete wavelet transform is implemented as a differentiable
//! filter-bank network whose only parameter is the scaling filter `h`; the
//! wavelet filter is tied to it by the quadrature-mirror relation. Training
//! minimizes a sparse-autoencoder loss (reconstruction + L1 sparsity of the
//! coefficients + soft wavelet constraints) with Adam.
//!
//! Modules:
//! - [`filterbank`]: filter types, QMF derivation, constraint loss, and the
//!   classical wavelet database (Haar, Daubechies, Symlets, Coiflets).
//! - [`transform`]: forward/inverse transform with periodic boundaries.
//! - [`grad`]: exact reverse-mode gradient of the autoencoder loss in `h`.
//! - [`training`]: Adam loop, convergence detection, run artifacts.
//! - [`datagen`]: synthetic harmonic datasets, WAV ingestion, random
//!   constraint-satisfying wavelets.
//! - [`analysis`]: cascade rendering of the wavelet/scaling functions,
//!   distance to classical wavelets, sparse-coefficient signal generation.

pub mod analysis;
pub mod datagen;
mod error;
pub mod filterbank;
pub mod grad;
pub mod textio;
pub mod training;
pub mod transform;

mod rng;

pub use error::{Error, Result};

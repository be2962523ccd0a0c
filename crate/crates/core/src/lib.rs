//! Static Bloch bands of the 1-D optical cosine lattice and Floquet
//! quasienergy spectra of periodically driven model systems.
//!
//! The crate is organized around a small set of building blocks:
//!
//! - [`basis`]: the truncated π-periodic trigonometric basis and the matrix
//!   representations of the scaled operators acting on it;
//! - [`static_bands`]: the stationary band structure of the cosine lattice
//!   (Mathieu characteristic values, dispersion relations, band edges);
//! - [`propagator`] / [`spectrum`]: generic Floquet machinery — one-cycle
//!   propagation, monodromy diagonalization, quasienergy folding, overlap
//!   ordering, photon labels and avoided-crossing scans;
//! - [`two_level`]: closed-form two-level solutions used as the engine's
//!   analytic oracle;
//! - [`driven_box`]: the sinusoidally driven particle in a box, including
//!   Gaussian-pulse excitation;
//! - [`driven_lattice`]: quasienergy band structures of the driven cosine
//!   lattice, symmetry-reduced monodromy, band-collapse sweeps and frame
//!   conversions;
//! - [`cli`]: command-line front end with deterministic CSV output.

pub mod basis;
pub mod bessel;
pub mod cli;
pub mod driven_box;
pub mod driven_lattice;
pub mod error;
pub mod linalg;
pub mod mathieu;
pub mod propagator;
pub mod spectrum;
pub mod static_bands;
pub mod two_level;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Crate version string recorded in CSV headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

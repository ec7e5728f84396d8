//! Spectral analysis of binary error-correcting codes.
//!
//! The crate implements, at desk scale, the spectral machinery behind the
//! first linear programming bound for binary codes: Walsh-Fourier analysis on
//! the Hamming cube, exact Krawchouk polynomial tables, maximal eigenpairs of
//! Hamming-ball subgraphs, the Gram-matrix rank argument and its trace
//! inequality, dual LP certificates, norm-ratio experiments for weight slices
//! and distance graphs, and the analytic rate-versus-distance calculus.
//!
//! Everything is exposed both as a library and through the `hamspec` CLI.

pub mod ball_spectrum;
pub mod cli;
pub mod codes;
pub mod conjecture_lab;
pub mod cube_fourier;
pub mod error;
pub mod krawchouk;
pub mod lp_certificate;
pub mod rate_bounds;
pub mod theorem_verifier;

pub(crate) mod testutil;

pub use error::{HamspecError, Result};

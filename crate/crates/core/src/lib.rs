//! Bound-state eigensolver built around series continuation.
//!
//! The pipeline embeds a target Hamiltonian H = -d²/dx² + V in the
//! one-parameter family H(lambda) = H0 + lambda*Delta, where H0 is an
//! exactly solvable auxiliary system and Delta = V - U is the potential
//! difference. Eigenvalues and eigenvectors are expanded to high order in
//! lambda by Rayleigh-Schrodinger recursion, and the truncated series is
//! evaluated at full coupling lambda = 1 through rational (Pade)
//! continuation. Units are fixed so that hbar²/2m = 1 throughout.
//!
//! Modules, bottom up:
//! - [`special`]: Hermite, Laguerre, Airy, and terminating Kummer functions.
//! - [`quadrature`]: Gauss-Hermite, Gauss-Laguerre, and Gauss-Legendre rules.
//! - [`tridiag`]: symmetric tridiagonal eigensolver (bisection plus inverse
//!   iteration).
//! - [`basis`]: exactly solvable auxiliary bases (oscillator, Coulomb,
//!   linear radial) with closed-form levels and evaluable eigenfunctions.
//! - [`potential`]: target potentials and derivative helpers.
//! - [`split`]: auxiliary-potential construction schemes producing
//!   H(lambda) = H0 + lambda*Delta.
//! - [`matrix`]: Delta matrix elements in the H0 eigenbasis with adaptive
//!   quadrature refinement.
//! - [`perturbation`]: the Rayleigh-Schrodinger recursion.
//! - [`pade`]: Pade construction, evaluation, pole diagnostics, and the
//!   near-diagonal continuation ladder.
//! - [`oracle`]: independent finite-difference eigensolver for
//!   cross-checking.
//! - [`csv`]: deterministic CSV formatting shared with the command line
//!   front end.
//! - [`solver`]: end-to-end driver tying the stages together.

pub mod basis;
pub mod csv;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod pade;
pub mod perturbation;
pub mod potential;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod split;
pub mod tridiag;

pub use error::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Library version, echoed into CSV comment headers so any output file
/// names the code that produced it.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Error type shared by every stage of the pipeline.

use thiserror::Error;

/// Failure modes of the solver stages.
///
/// Each variant names the stage that raised it and carries enough context
/// to diagnose the failure without re-running the computation.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A quantity was requested outside its valid domain, for example a
    /// level index below the basis index origin or a coordinate outside
    /// the potential's half-line.
    #[error("domain error: {0}")]
    Domain(String),

    /// No root of V(x) = E exists on the requested side of the minimum.
    #[error("root not found: no solution of V(x) = {energy} on the {side} side")]
    RootNotFound { energy: f64, side: &'static str },

    /// The Taylor construction produced a non-positive curvature, so the
    /// quadratic auxiliary would not confine.
    #[error("non-confining auxiliary: curvature {curvature} at x_E = {x_e} is not positive")]
    NonConfiningAuxiliary { curvature: f64, x_e: f64 },

    /// The limit of -r V(r) at the origin does not exist or is not a
    /// positive constant, so no Coulomb auxiliary can be attached.
    #[error("not Coulomb-like: limit of -r V(r) near the origin is {limit}")]
    NotCoulombLike { limit: f64 },

    /// The least-squares system for the auxiliary fit was singular.
    #[error("fit failure: {0}")]
    FitFailure(String),

    /// A matrix entry did not converge under quadrature refinement before
    /// the node-count cap.
    #[error(
        "quadrature failure: entry ({row},{col}) changed by {delta:.3e} at {npts} nodes, \
         above tolerance {tol:.3e}"
    )]
    QuadratureFailure {
        row: usize,
        col: usize,
        delta: f64,
        tol: f64,
        npts: usize,
    },

    /// Two unperturbed levels coincide within tolerance, so the
    /// nondegenerate recursion denominators blow up.
    #[error("degenerate levels: E0({a}) and E0({b}) differ by {gap:.3e}")]
    Degeneracy { a: usize, b: usize, gap: f64 },

    /// The basis is too small to expand the requested level reliably.
    #[error("truncation too small: level {n} needs basis dimension above {dim}")]
    TruncationTooSmall { n: usize, dim: usize },

    /// Every attempted Pade order, including the fallbacks, had a singular
    /// construction system.
    #[error("pade degenerate: [{l}/{m}] and both fallbacks are singular")]
    PadeDegenerate { l: usize, m: usize },

    /// The rational function was evaluated too close to a denominator root.
    #[error("pole evaluation: denominator vanishes near lambda = {lambda}")]
    PoleEvaluation { lambda: f64 },

    /// Grid eigenfunction mass at the domain boundary was too large for
    /// the result to be trusted.
    #[error("domain clip: level {level} has boundary mass {mass:.3e}, domain too small")]
    DomainClip { level: usize, mass: f64 },

    /// Kummer parameters outside the terminating regime this crate supports.
    #[error("unsupported: kummer_1f1 requires a nonpositive integer first parameter, got {a}")]
    UnsupportedKummer { a: f64 },

    /// Malformed job description (bad level list, order, or degrees).
    #[error("config error: {0}")]
    Config(String),

    /// Internal numeric routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Label the pipeline stage an error came from, for reports.
    pub fn stage(&self) -> &'static str {
        match self {
            Error::Domain(_) => "input",
            Error::RootNotFound { .. }
            | Error::NonConfiningAuxiliary { .. }
            | Error::NotCoulombLike { .. }
            | Error::FitFailure(_) => "auxiliary construction",
            Error::QuadratureFailure { .. } => "matrix elements",
            Error::Degeneracy { .. } | Error::TruncationTooSmall { .. } => "perturbation",
            Error::PadeDegenerate { .. } | Error::PoleEvaluation { .. } => "pade continuation",
            Error::DomainClip { .. } => "grid oracle",
            Error::UnsupportedKummer { .. } => "special functions",
            Error::Config(_) => "config",
            Error::Numerical(_) => "numerics",
        }
    }
}

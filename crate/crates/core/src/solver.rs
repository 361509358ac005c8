//! End-to-end pipeline: assemble the coupling matrix for a split,
//! expand the requested levels in the coupling, and carry each series
//! to full coupling through the rational ladder.

use crate::matrix::{build_delta_matrix, parity_prune, spot_check};
use crate::pade::{continue_state, continue_to_one, ContinuedState, LadderRung, Pole};
use crate::perturbation::{rs_expand, PerturbationSeries};
use crate::split::AuxiliarySplit;
use crate::{Error, Result};

/// Knobs of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Physical level indices, counted from the basis origin.
    pub levels: Vec<usize>,
    /// Expansion order.
    pub order: usize,
    /// Basis truncation.
    pub dim: usize,
    /// Relative accuracy target for matrix elements.
    pub accuracy: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { levels: vec![0], order: 16, dim: 48, accuracy: 1e-10 }
    }
}

/// Everything computed for one level.
#[derive(Debug, Clone)]
pub struct LevelResult {
    /// Physical level index.
    pub n: usize,
    /// Auxiliary eigenvalue the expansion starts from.
    pub e_zeroth: f64,
    /// Plain truncated sum of the series at full coupling.
    pub e_poly: f64,
    /// Ladder value at full coupling.
    pub e_pade: f64,
    /// Degrees of the rung that produced e_pade.
    pub top_degrees: (usize, usize),
    /// All ladder rungs.
    pub ladder: Vec<LadderRung>,
    /// Scatter of the last few rungs, a self-consistency estimate.
    pub spread: f64,
    /// Denominator roots close to the continuation path.
    pub pole_warnings: Vec<Pole>,
    /// The raw expansion.
    pub series: PerturbationSeries,
    /// The state carried to full coupling in the auxiliary basis.
    pub state: ContinuedState,
}

/// Matrix-stage diagnostics plus per-level results.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Basis size actually used after any cap.
    pub dim: usize,
    /// Quadrature points that met the accuracy target.
    pub npts_used: usize,
    /// Whether a symmetry let half the matrix be zeroed exactly.
    pub parity_pruned: bool,
    /// Largest drift of a probe diagonal entry when the point count is
    /// doubled once more.
    pub spot_delta: f64,
    pub levels: Vec<LevelResult>,
}

/// Run the full pipeline for one split.
pub fn solve_levels(split: &AuxiliarySplit, config: &PipelineConfig) -> Result<SolveReport> {
    if config.levels.is_empty() {
        return Err(Error::Config("no levels requested".into()));
    }
    if config.order < 2 {
        return Err(Error::Config(format!(
            "expansion order must be at least 2, got {}",
            config.order
        )));
    }
    let origin = split.basis.index_origin();
    let mut rows = Vec::with_capacity(config.levels.len());
    for &n in &config.levels {
        if n < origin {
            return Err(Error::Config(format!(
                "level {n} does not exist, this basis starts at {origin}"
            )));
        }
        rows.push(n - origin);
    }
    let mut matrix = build_delta_matrix(split, config.dim, config.accuracy)?;
    let spot_delta = spot_check(split, &matrix)?;
    let parity_pruned = parity_prune(&mut matrix, split);
    let mut levels = Vec::with_capacity(rows.len());
    for (&row, &n) in rows.iter().zip(&config.levels) {
        let series = rs_expand(&matrix, row, config.order)?;
        let continued = continue_to_one(&series.energy)?;
        let (l, m) = continued.top_degrees;
        let state = continue_state(&series, l, m)?;
        levels.push(LevelResult {
            n,
            e_zeroth: series.energy[0],
            e_poly: series.energy_at(1.0),
            e_pade: continued.value_at_one,
            top_degrees: continued.top_degrees,
            ladder: continued.ladder,
            spread: continued.spread,
            pole_warnings: continued.pole_warnings,
            series,
            state,
        });
    }
    Ok(SolveReport {
        dim: matrix.dim,
        npts_used: matrix.npts_used,
        parity_pruned,
        spot_delta,
        levels,
    })
}

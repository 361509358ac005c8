//! Matrix elements of the remainder Delta in the auxiliary eigenbasis,
//! with node doubling until entries stop moving.

use crate::basis::{coulomb_rate, coulomb_u_poly, ExactBasis};
use crate::quadrature;
use crate::special;
use crate::split::AuxiliarySplit;
use crate::{Error, Result};

/// Cap on quadrature nodes before assembly gives up.
pub const MAX_QUADRATURE_POINTS: usize = 1 << 14;

/// Starting node count for the doubling loop.
pub const INITIAL_QUADRATURE_POINTS: usize = 128;

/// The remainder operator projected onto the lowest `dim` basis states,
/// together with the unperturbed spectrum.
#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    pub dim: usize,
    entries: Vec<f64>,
    /// Unperturbed eigenvalues of the basis states, ascending.
    pub e0: Vec<f64>,
    /// Node count at which the entries converged.
    pub npts_used: usize,
    /// Whether odd-parity entries were zeroed after assembly.
    pub parity_pruned: bool,
}

impl DeltaMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Assemble a matrix directly from rows, for models whose elements
    /// are known in closed form.
    pub fn from_parts(e0: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = e0.len();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain(format!(
                "expected a {dim} x {dim} matrix to match {dim} unperturbed levels"
            )));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            entries.extend_from_slice(row);
        }
        Ok(DeltaMatrix { dim, entries, e0, npts_used: 0, parity_pruned: false })
    }

    /// Largest |a_ij - a_ji| over the matrix.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Project the remainder onto the lowest basis states, doubling the
/// node count from 128 until every entry is stable to the requested
/// accuracy relative to max(1, |entry|).
///
/// For a Coulomb basis attached to a target with a finite bound
/// spectrum, the dimension is capped at three times the number of
/// bound levels; states beyond that only describe the continuum.
pub fn build_delta_matrix(split: &AuxiliarySplit, dim: usize, accuracy: f64) -> Result<DeltaMatrix> {
    if dim == 0 {
        return Err(Error::Domain("matrix dimension must be positive".into()));
    }
    if !(accuracy > 0.0) {
        return Err(Error::Domain(format!("accuracy must be positive, got {accuracy}")));
    }
    let mut dim = dim;
    if let ExactBasis::CoulombRadial { .. } = split.basis {
        if let Some(beta) = split.target.bound_state_beta() {
            let cap = 3 * beta.floor() as usize;
            if cap > 0 {
                dim = dim.min(cap);
            }
        }
    }
    let origin = split.basis.index_origin();
    let mut e0 = Vec::with_capacity(dim);
    for i in 0..dim {
        e0.push(split.basis.eigenvalue(origin + i)?);
    }
    let mut npts = INITIAL_QUADRATURE_POINTS;
    let mut prev = assemble(split, dim, npts)?;
    loop {
        let next_npts = npts * 2;
        let cur = assemble(split, dim, next_npts)?;
        let mut worst = (0usize, 0usize, 0.0_f64, 0.0_f64);
        let mut converged = true;
        for i in 0..dim {
            for j in 0..dim {
                let new = cur[i * dim + j];
                let delta = (new - prev[i * dim + j]).abs();
                let tol = accuracy * new.abs().max(1.0);
                if delta > tol {
                    converged = false;
                    if delta - tol > worst.2 - worst.3 {
                        worst = (i, j, delta, tol);
                    }
                }
            }
        }
        if converged {
            return Ok(DeltaMatrix {
                dim,
                entries: cur,
                e0,
                npts_used: next_npts,
                parity_pruned: false,
            });
        }
        if next_npts >= MAX_QUADRATURE_POINTS {
            return Err(Error::QuadratureFailure {
                row: worst.0,
                col: worst.1,
                delta: worst.2,
                tol: worst.3,
                npts: next_npts,
            });
        }
        npts = next_npts;
        prev = cur;
    }
}

/// One assembly pass at a fixed node count; row-major entries.
fn assemble(split: &AuxiliarySplit, dim: usize, npts: usize) -> Result<Vec<f64>> {
    match &split.basis {
        ExactBasis::Oscillator { curvature, center, .. } => {
            let eps = curvature.powf(0.25);
            let rule = quadrature::hermite_rule(npts)?;
            let mut entries = vec![0.0_f64; dim * dim];
            let mut row = vec![0.0_f64; dim];
            for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
                if w == 0.0 {
                    continue;
                }
                let d = w * split.delta(y / eps + center);
                if d == 0.0 {
                    continue;
                }
                special::hermite_orthonormal_row(y, &mut row);
                for m in 0..dim {
                    let pm_d = row[m] * d;
                    for n in m..dim {
                        entries[m * dim + n] += pm_d * row[n];
                    }
                }
            }
            for m in 0..dim {
                for n in 0..m {
                    entries[m * dim + n] = entries[n * dim + m];
                }
            }
            Ok(entries)
        }
        ExactBasis::CoulombRadial { alpha } => {
            let base = quadrature::laguerre_rule(npts)?;
            let mut entries = vec![0.0_f64; dim * dim];
            for mi in 0..dim {
                for ni in mi..dim {
                    let m = mi + 1;
                    let n = ni + 1;
                    let rate_m = coulomb_rate(*alpha, m);
                    let rate_n = coulomb_rate(*alpha, n);
                    let scale = rate_m.min(rate_n);
                    let residual = rate_m + rate_n - scale;
                    let mut acc = 0.0_f64;
                    for (&t, &w) in base.nodes.iter().zip(&base.weights) {
                        if w == 0.0 {
                            continue;
                        }
                        let r = t / scale;
                        let envelope = (-residual * r).exp();
                        if envelope == 0.0 {
                            continue;
                        }
                        acc += w / scale
                            * envelope
                            * split.delta(r)
                            * coulomb_u_poly(*alpha, m, r)
                            * coulomb_u_poly(*alpha, n, r);
                    }
                    entries[mi * dim + ni] = acc;
                    entries[ni * dim + mi] = acc;
                }
            }
            Ok(entries)
        }
        ExactBasis::LinearRadial { slope, .. } => {
            let a_max = split.basis.airy_zero(dim);
            let rmax = (a_max + 8.0) / slope.powf(1.0 / 3.0);
            let base = quadrature::legendre_rule(32)?;
            let npanels = npts.div_ceil(32).max(1);
            let rule = quadrature::map_panels(&base, 0.0, rmax, npanels)?;
            let mut entries = vec![0.0_f64; dim * dim];
            let mut waves = vec![0.0_f64; dim];
            let mut scaled = vec![0.0_f64; dim];
            for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
                let d = w * split.delta(r);
                for mi in 0..dim {
                    waves[mi] = split.basis.wave(mi + 1, r)?;
                    scaled[mi] = waves[mi] * d;
                }
                for mi in 0..dim {
                    for ni in mi..dim {
                        entries[mi * dim + ni] += scaled[mi] * waves[ni];
                    }
                }
            }
            for m in 0..dim {
                for n in 0..m {
                    entries[m * dim + n] = entries[n * dim + m];
                }
            }
            Ok(entries)
        }
    }
}

/// Zero all odd-parity entries when the target is even about the
/// oscillator center, where the exact elements vanish; returns whether
/// the pruning applied.
pub fn parity_prune(matrix: &mut DeltaMatrix, split: &AuxiliarySplit) -> bool {
    let center = match split.basis {
        ExactBasis::Oscillator { center, .. } => center,
        _ => return false,
    };
    let scale = split.target.length_scale();
    let even = [0.37, 0.91, 1.63, 2.71].iter().all(|&f| {
        let t = f * scale;
        let plus = split.target.evaluate(center + t);
        let minus = split.target.evaluate(center - t);
        (plus - minus).abs() <= 1e-12 * plus.abs().max(1.0)
    });
    if !even {
        return false;
    }
    for m in 0..matrix.dim {
        for n in 0..matrix.dim {
            if (m + n) % 2 == 1 {
                matrix.entries[m * matrix.dim + n] = 0.0;
            }
        }
    }
    matrix.parity_pruned = true;
    true
}

/// Recompute the first two diagonal entries on a doubled grid and
/// report the largest deviation from the stored matrix, as a check
/// that the converged values do not depend on the node count.
pub fn spot_check(split: &AuxiliarySplit, matrix: &DeltaMatrix) -> Result<f64> {
    if matrix.npts_used == 0 {
        return Err(Error::Domain("spot check needs a quadrature-built matrix".into()));
    }
    let probe = matrix.dim.min(2);
    let resampled = assemble(split, probe, matrix.npts_used * 2)?;
    let mut worst = 0.0_f64;
    for i in 0..probe {
        worst = worst.max((resampled[i * probe + i] - matrix.get(i, i)).abs());
    }
    Ok(worst)
}

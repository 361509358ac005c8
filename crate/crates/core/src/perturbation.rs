//! Rayleigh-Schrodinger expansion of one level of H0 + lambda Delta to
//! a requested order, carried in the truncated auxiliary basis.
//!
//! Energy sums are compensated (Neumaier) and each order reports its
//! cancellation ratio max |partial| / |final|, which flags orders whose
//! value survives only through cancellation of large terms.

use crate::matrix::DeltaMatrix;
use crate::{Error, Result};

/// Energy and state coefficients of one expanded level.
#[derive(Debug, Clone)]
pub struct PerturbationSeries {
    /// Matrix row index of the expanded level.
    pub level: usize,
    /// Highest order computed.
    pub order: usize,
    /// Energy coefficients, orders 0..=order.
    pub energy: Vec<f64>,
    /// State coefficient vectors in the basis, orders 0..=order; the
    /// expanded level's own component is zero at every positive order.
    pub states: Vec<Vec<f64>>,
    /// Cancellation ratio of each energy order's sum; 1 means benign.
    pub condition: Vec<f64>,
}

impl PerturbationSeries {
    /// Truncated series value at coupling lambda, by Horner evaluation.
    pub fn energy_at(&self, lambda: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.energy.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }

    /// Truncated state vector at coupling lambda.
    pub fn state_at(&self, lambda: f64) -> Vec<f64> {
        let dim = self.states[0].len();
        let mut acc = vec![0.0_f64; dim];
        for coeffs in self.states.iter().rev() {
            for (a, &c) in acc.iter_mut().zip(coeffs) {
                *a = *a * lambda + c;
            }
        }
        acc
    }

    /// The expansion orders of one basis component of the state.
    pub fn state_coefficient_series(&self, component: usize) -> Vec<f64> {
        self.states.iter().map(|c| c[component]).collect()
    }
}

/// Compensated dot product; returns the sum and the largest absolute
/// running partial, whose ratio to the final value measures
/// cancellation.
fn compensated_dot(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut max_partial = 0.0_f64;
    for (&x, &y) in xs.iter().zip(ys) {
        let p = x * y;
        let t = sum + p;
        if sum.abs() >= p.abs() {
            comp += (sum - t) + p;
        } else {
            comp += (p - t) + sum;
        }
        sum = t;
        max_partial = max_partial.max((sum + comp).abs());
    }
    (sum + comp, max_partial)
}

fn cancellation_ratio(value: f64, max_partial: f64) -> f64 {
    if value == 0.0 {
        if max_partial == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (max_partial / value.abs()).max(1.0)
    }
}

/// Expand the given level of H0 + lambda Delta through the requested
/// order.
///
/// The level must keep at least two states of headroom below the
/// truncation edge of a quadrature-built matrix, and no other level may
/// sit within 1e-10 (relative) of its unperturbed energy.
pub fn rs_expand(matrix: &DeltaMatrix, level: usize, order: usize) -> Result<PerturbationSeries> {
    let dim = matrix.dim;
    if level >= dim {
        return Err(Error::Domain(format!(
            "level {level} outside a basis of dimension {dim}"
        )));
    }
    if level + 2 >= dim {
        return Err(Error::TruncationTooSmall { n: level, dim });
    }
    let e_n = matrix.e0[level];
    for m in 0..dim {
        if m != level {
            let gap = (matrix.e0[m] - e_n).abs();
            if gap <= 1e-10 * e_n.abs().max(1.0) {
                return Err(Error::Degeneracy { a: level, b: m, gap });
            }
        }
    }
    let mut energy = Vec::with_capacity(order + 1);
    let mut states: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
    let mut condition = Vec::with_capacity(order + 1);
    energy.push(e_n);
    condition.push(1.0);
    let mut zeroth = vec![0.0_f64; dim];
    zeroth[level] = 1.0;
    states.push(zeroth);
    // rows of Delta, for dot products against state coefficients
    let row = |m: usize| -> Vec<f64> { (0..dim).map(|j| matrix.get(m, j)).collect() };
    let rows: Vec<Vec<f64>> = (0..dim).map(row).collect();
    for k in 1..=order {
        let (e_k, max_partial) = compensated_dot(&rows[level], &states[k - 1]);
        energy.push(e_k);
        condition.push(cancellation_ratio(e_k, max_partial));
        let mut c_k = vec![0.0_f64; dim];
        for m in 0..dim {
            if m == level {
                continue;
            }
            let mut acc: f64 = rows[m].iter().zip(&states[k - 1]).map(|(&d, &c)| d * c).sum();
            for i in 1..k {
                acc -= energy[i] * states[k - i][m];
            }
            c_k[m] = acc / (e_n - matrix.e0[m]);
        }
        states.push(c_k);
    }
    Ok(PerturbationSeries { level, order, energy, states, condition })
}

//! Rational continuation of truncated power series: Pade approximants,
//! the near-diagonal ladder evaluated at full coupling, and pole
//! diagnostics of the denominator.

use num_complex::Complex64;

use crate::perturbation::PerturbationSeries;
use crate::{Error, Result};

/// Denominator condition number beyond which a solve is rejected.
const CONDITION_LIMIT: f64 = 1e12;

/// Relative agreement required when the approximant is re-expanded
/// against the input series.
const RESIDUAL_TOL: f64 = 1e-8;

/// Poles inside this radius count as warnings: they sit close enough to
/// the continuation path to distort the value at full coupling.
pub const POLE_WARNING_RADIUS: f64 = 1.25;

/// A rational approximant P/Q with Q(0) = 1.
#[derive(Debug, Clone)]
pub struct PadeApproximant {
    /// Numerator degree actually used.
    pub l: usize,
    /// Denominator degree actually used.
    pub m: usize,
    /// Numerator coefficients, ascending, length l + 1.
    pub num: Vec<f64>,
    /// Denominator coefficients, ascending, length m + 1, den[0] = 1.
    pub den: Vec<f64>,
    /// Whether re-expanding P/Q reproduced the input coefficients.
    pub residual_ok: bool,
    /// The originally requested degrees when an ill-conditioned solve
    /// forced a smaller approximant.
    pub fallback: Option<(usize, usize)>,
}

/// A denominator root with the residue of the approximant there.
#[derive(Debug, Clone, Copy)]
pub struct Pole {
    pub position: Complex64,
    pub residue: Complex64,
}

/// Fit the [l/m] approximant to a series of exactly l + m + 1
/// coefficients.
///
/// A series whose tail beyond degree l is exactly zero is returned as
/// the polynomial itself. An ill-conditioned or singular denominator
/// solve falls back to [l-1/m], then [l/m-1]; if both fail the
/// approximant does not exist at a usable conditioning.
pub fn pade_from_series(coeffs: &[f64], l: usize, m: usize) -> Result<PadeApproximant> {
    if coeffs.len() != l + m + 1 {
        return Err(Error::Domain(format!(
            "[{l}/{m}] needs exactly {} coefficients, got {}",
            l + m + 1,
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("series coefficients must be finite".into()));
    }
    // a polynomial is its own best approximant; solving for a
    // denominator would only manufacture a singular system
    if coeffs[l + 1..].iter().all(|&c| c == 0.0) {
        let mut den = vec![0.0; m + 1];
        den[0] = 1.0;
        return Ok(PadeApproximant {
            l,
            m,
            num: coeffs[..=l].to_vec(),
            den,
            residual_ok: true,
            fallback: None,
        });
    }
    if let Some((num, den)) = try_solve(coeffs, l, m) {
        let residual_ok = reexpansion_matches(coeffs, &num, &den);
        return Ok(PadeApproximant { l, m, num, den, residual_ok, fallback: None });
    }
    // fallback chain: one step down in numerator degree, then one step
    // down in denominator degree; agreement is still judged against the
    // full input, which a smaller approximant generally cannot match
    let candidates = [
        (l.checked_sub(1), Some(m)),
        (Some(l), m.checked_sub(1)),
    ];
    for (lf, mf) in candidates {
        let (Some(lf), Some(mf)) = (lf, mf) else { continue };
        if let Some((num, den)) = try_solve(&coeffs[..lf + mf + 1], lf, mf) {
            let residual_ok = reexpansion_matches(coeffs, &num, &den);
            return Ok(PadeApproximant {
                l: lf,
                m: mf,
                num,
                den,
                residual_ok,
                fallback: Some((l, m)),
            });
        }
    }
    Err(Error::PadeDegenerate { l, m })
}

/// One direct solve at fixed degrees; None when the denominator system
/// is singular or its condition number exceeds the limit.
fn try_solve(coeffs: &[f64], l: usize, m: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(coeffs.len(), l + m + 1);
    let a = |i: isize| -> f64 {
        if i < 0 {
            0.0
        } else {
            coeffs[i as usize]
        }
    };
    let mut den = vec![0.0_f64; m + 1];
    den[0] = 1.0;
    if m > 0 {
        // Hankel system: sum_j q_j a_{l+k-j} = -a_{l+k} for k = 1..=m
        let mut system = vec![vec![0.0_f64; m]; m];
        let mut rhs = vec![0.0_f64; m];
        for k in 1..=m {
            for j in 1..=m {
                system[k - 1][j - 1] = a(l as isize + k as isize - j as isize);
            }
            rhs[k - 1] = -a(l as isize + k as isize);
        }
        let norm_a = matrix_inf_norm(&system);
        let inverse = invert(&system)?;
        let norm_inv = matrix_inf_norm(&inverse);
        if !(norm_a * norm_inv).is_finite() || norm_a * norm_inv > CONDITION_LIMIT {
            return None;
        }
        for (j, q) in den.iter_mut().skip(1).enumerate() {
            let mut acc = 0.0;
            for (k, &r) in rhs.iter().enumerate() {
                acc += inverse[j][k] * r;
            }
            *q = acc;
        }
    }
    let mut num = vec![0.0_f64; l + 1];
    for (i, p) in num.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..=i.min(m) {
            acc += den[j] * a(i as isize - j as isize);
        }
        *p = acc;
    }
    Some((num, den))
}

/// Divide P by Q as power series and compare against the input
/// coefficients through the input's highest degree.
fn reexpansion_matches(coeffs: &[f64], num: &[f64], den: &[f64]) -> bool {
    let amax = coeffs.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    if amax == 0.0 {
        return true;
    }
    let m = den.len() - 1;
    let mut t = vec![0.0_f64; coeffs.len()];
    for i in 0..coeffs.len() {
        let p_i = num.get(i).copied().unwrap_or(0.0);
        let mut acc = p_i;
        for j in 1..=i.min(m) {
            acc -= den[j] * t[i - j];
        }
        t[i] = acc / den[0];
        let scale = if coeffs[i].abs() > 0.0 { coeffs[i].abs() } else { amax };
        if (t[i] - coeffs[i]).abs() > RESIDUAL_TOL * scale {
            return false;
        }
    }
    true
}

fn matrix_inf_norm(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting;
/// None on a singular pivot.
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut work: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            work[i][col]
                .abs()
                .partial_cmp(&work[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if work[pivot_row][col].abs() < f64::MIN_POSITIVE.sqrt() {
            return None;
        }
        work.swap(col, pivot_row);
        let pivot = work[col][col];
        for x in work[col].iter_mut() {
            *x /= pivot;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col];
            if factor == 0.0 {
                continue;
            }
            let (pivot_row_data, target) = if row < col {
                let (head, tail) = work.split_at_mut(col);
                (&tail[0], &mut head[row])
            } else {
                let (head, tail) = work.split_at_mut(row);
                (&head[col], &mut tail[0])
            };
            for (t, &p) in target.iter_mut().zip(pivot_row_data.iter()) {
                *t -= factor * p;
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl PadeApproximant {
    /// Value P(lambda) / Q(lambda); evaluation within the pole guard
    /// band of a denominator root is refused.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let p = horner(&self.num, lambda);
        let q = horner(&self.den, lambda);
        let mut qscale = 0.0_f64;
        let mut pow = 1.0_f64;
        for &c in &self.den {
            qscale += c.abs() * pow.abs();
            pow *= lambda;
        }
        if q.abs() <= 1e-12 * qscale {
            return Err(Error::PoleEvaluation { lambda });
        }
        Ok(p / q)
    }

    /// Denominator roots with residues, ordered by modulus.
    pub fn poles(&self) -> Vec<Pole> {
        let mut deg = 0;
        for (i, &c) in self.den.iter().enumerate() {
            if c != 0.0 {
                deg = i;
            }
        }
        if deg == 0 {
            return Vec::new();
        }
        let lead = self.den[deg];
        let monic: Vec<f64> = self.den[..=deg].iter().map(|c| c / lead).collect();
        // Durand-Kerner from the standard spiral of starting points
        let seed = Complex64::new(0.4, 0.9);
        let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
        for _ in 0..500 {
            let mut moved = 0.0_f64;
            for k in 0..deg {
                let zk = roots[k];
                let mut denom = Complex64::new(1.0, 0.0);
                for (j, &zj) in roots.iter().enumerate() {
                    if j != k {
                        denom *= zk - zj;
                    }
                }
                if denom.norm() == 0.0 {
                    continue;
                }
                let step = horner_complex(&monic, zk) / denom;
                roots[k] = zk - step;
                moved = moved.max(step.norm() / (1.0 + zk.norm()));
            }
            if moved <= 1e-13 {
                break;
            }
        }
        // Newton polish on the original denominator
        let dq: Vec<f64> = self
            .den
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        for z in roots.iter_mut() {
            for _ in 0..3 {
                let f = horner_complex(&self.den, *z);
                let fp = horner_complex(&dq, *z);
                if fp.norm() == 0.0 {
                    break;
                }
                *z -= f / fp;
            }
        }
        let mut poles: Vec<Pole> = roots
            .into_iter()
            .map(|z| {
                let qp = horner_complex(&dq, z);
                let residue = if qp.norm() == 0.0 {
                    Complex64::new(f64::NAN, f64::NAN)
                } else {
                    horner_complex(&self.num, z) / qp
                };
                Pole { position: z, residue }
            })
            .collect();
        poles.sort_by(|a, b| {
            (a.position.norm(), a.position.re, a.position.im)
                .partial_cmp(&(b.position.norm(), b.position.re, b.position.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        poles
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn horner_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// One rung of the near-diagonal ladder.
#[derive(Debug, Clone)]
pub struct LadderRung {
    /// Requested numerator degree ceil(k/2).
    pub l: usize,
    /// Requested denominator degree floor(k/2).
    pub m: usize,
    /// Value at full coupling, when the rung could be built and
    /// evaluated there.
    pub value: Option<f64>,
    pub residual_ok: bool,
    /// Degrees requested originally when the solve fell back.
    pub fallback: Option<(usize, usize)>,
}

/// The ladder's verdict at full coupling.
#[derive(Debug, Clone)]
pub struct ContinuationResult {
    /// Value of the highest successful rung.
    pub value_at_one: f64,
    /// Degrees of the highest successful rung as requested.
    pub top_degrees: (usize, usize),
    /// All rungs, lowest order first.
    pub ladder: Vec<LadderRung>,
    /// Max minus min over the last (up to) three successful rungs.
    pub spread: f64,
    /// Poles of the top successful rung within the warning radius.
    pub pole_warnings: Vec<Pole>,
}

/// Walk the near-diagonal ladder [ceil(k/2)/floor(k/2)] for
/// k = 2..=order, each rung fitted to the series prefix of length
/// k + 1, and evaluate each at full coupling.
pub fn continue_to_one(coeffs: &[f64]) -> Result<ContinuationResult> {
    let order = coeffs.len().saturating_sub(1);
    if order < 2 {
        return Err(Error::Domain(format!(
            "ladder continuation needs a series of order 2 or higher, got {order}"
        )));
    }
    let mut ladder = Vec::with_capacity(order - 1);
    let mut successes: Vec<(f64, (usize, usize), PadeApproximant)> = Vec::new();
    for k in 2..=order {
        let l = k.div_ceil(2);
        let m = k / 2;
        match pade_from_series(&coeffs[..=k], l, m) {
            Ok(p) => {
                let value = p.eval(1.0).ok();
                ladder.push(LadderRung {
                    l,
                    m,
                    value,
                    residual_ok: p.residual_ok,
                    fallback: p.fallback,
                });
                if let Some(v) = value {
                    successes.push((v, (l, m), p));
                }
            }
            Err(Error::PadeDegenerate { .. }) => ladder.push(LadderRung {
                l,
                m,
                value: None,
                residual_ok: false,
                fallback: None,
            }),
            Err(e) => return Err(e),
        }
    }
    let (value_at_one, top_degrees, top) = match successes.last() {
        Some((v, d, p)) => (*v, *d, p),
        None => {
            return Err(Error::Numerical(
                "no ladder rung could be evaluated at full coupling".into(),
            ))
        }
    };
    let tail = &successes[successes.len().saturating_sub(3)..];
    let spread = tail
        .iter()
        .map(|(v, _, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max)
        - tail.iter().map(|(v, _, _)| *v).fold(f64::INFINITY, f64::min);
    let pole_warnings = top
        .poles()
        .into_iter()
        .filter(|p| p.position.norm() <= POLE_WARNING_RADIUS)
        .collect();
    Ok(ContinuationResult { value_at_one, top_degrees, ladder, spread, pole_warnings })
}

/// A state vector carried to full coupling component by component.
#[derive(Debug, Clone)]
pub struct ContinuedState {
    /// Basis coefficients at full coupling, unit norm.
    pub coeffs: Vec<f64>,
    /// Euclidean norm before normalization.
    pub normalizer: f64,
    /// Components whose rational continuation degenerated and fell back
    /// to the truncated polynomial sum.
    pub fallback_indices: Vec<usize>,
}

/// Continue every basis component of the state expansion to full
/// coupling with an [l/m] approximant, falling back to the plain
/// truncated sum for components without a usable approximant, then
/// renormalize.
pub fn continue_state(series: &PerturbationSeries, l: usize, m: usize) -> Result<ContinuedState> {
    if l + m > series.order {
        return Err(Error::Domain(format!(
            "[{l}/{m}] needs order {} but the expansion stops at {}",
            l + m,
            series.order
        )));
    }
    let dim = series.states[0].len();
    let mut coeffs = vec![0.0_f64; dim];
    let mut fallback_indices = Vec::new();
    for component in 0..dim {
        let comp_series = series.state_coefficient_series(component);
        if comp_series.iter().all(|&c| c == 0.0) {
            continue;
        }
        let value = match pade_from_series(&comp_series[..=l + m], l, m) {
            Ok(p) => match p.eval(1.0) {
                Ok(v) => v,
                Err(_) => {
                    fallback_indices.push(component);
                    horner(&comp_series, 1.0)
                }
            },
            Err(Error::PadeDegenerate { .. }) => {
                fallback_indices.push(component);
                horner(&comp_series, 1.0)
            }
            Err(e) => return Err(e),
        };
        coeffs[component] = value;
    }
    let normalizer = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if normalizer == 0.0 {
        return Err(Error::Numerical("continued state vanished identically".into()));
    }
    for c in coeffs.iter_mut() {
        *c /= normalizer;
    }
    Ok(ContinuedState { coeffs, normalizer, fallback_indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Truncated series of sqrt(1 + x).
    fn sqrt_series() -> Vec<f64> {
        vec![1.0, 0.5, -0.125, 0.0625, -5.0 / 128.0]
    }

    #[test]
    fn two_two_approximant_of_sqrt_series() {
        let p = pade_from_series(&sqrt_series(), 2, 2).unwrap();
        assert!(p.fallback.is_none());
        assert!(p.residual_ok);
        for (got, want) in p.num.iter().zip([1.0, 1.25, 0.3125]) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
        for (got, want) in p.den.iter().zip([1.0, 0.75, 0.0625]) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
        // far outside the series radius the approximant stays accurate
        assert_relative_eq!(p.eval(3.0).unwrap(), 121.0 / 61.0, max_relative = 1e-12);
        assert_relative_eq!(p.eval(1.0).unwrap(), 41.0 / 29.0, max_relative = 1e-12);
        // the truncated polynomial collapses there
        let poly: f64 = sqrt_series()
            .iter()
            .enumerate()
            .map(|(i, &c)| c * 3.0_f64.powi(i as i32))
            .sum();
        assert_relative_eq!(poly, -0.1015625, max_relative = 1e-12);
        assert!((poly - 2.0).abs() > 0.5);
        assert!((p.eval(3.0).unwrap() - 2.0).abs() < 0.017);
    }

    #[test]
    fn poles_of_the_sqrt_denominator() {
        let p = pade_from_series(&sqrt_series(), 2, 2).unwrap();
        let poles = p.poles();
        assert_eq!(poles.len(), 2);
        // q^2/16 + 3q/4 + 1 = 0 at q = -6 +- 2 sqrt(5)
        let inner = -6.0 + 2.0 * 5.0_f64.sqrt();
        let outer = -6.0 - 2.0 * 5.0_f64.sqrt();
        assert_relative_eq!(poles[0].position.re, inner, max_relative = 1e-10);
        assert!(poles[0].position.im.abs() < 1e-10);
        assert_relative_eq!(poles[1].position.re, outer, max_relative = 1e-10);
        for pole in &poles {
            let q = horner(&p.den, pole.position.re);
            assert!(q.abs() < 1e-12, "Q at pole = {q}");
            assert!(pole.residue.im.abs() < 1e-9);
        }
        // both poles sit outside the warning radius
        assert!(poles.iter().all(|p| p.position.norm() > POLE_WARNING_RADIUS));
    }

    #[test]
    fn geometric_series_reduces_to_simple_pole() {
        let r = 0.5_f64;
        let coeffs: Vec<f64> = (0..2).map(|k| r.powi(k)).collect();
        let p = pade_from_series(&coeffs, 0, 1).unwrap();
        assert_relative_eq!(p.den[1], -r, max_relative = 1e-14);
        for lambda in [0.3, 0.9, 1.5] {
            assert_relative_eq!(
                p.eval(lambda).unwrap(),
                1.0 / (1.0 - r * lambda),
                max_relative = 1e-13
            );
        }
        // the guard refuses evaluation on the pole
        match p.eval(2.0) {
            Err(Error::PoleEvaluation { lambda }) => assert_eq!(lambda, 2.0),
            other => panic!("expected pole refusal, got {other:?}"),
        }
    }

    #[test]
    fn singular_solve_falls_back() {
        // a geometric series makes every Hankel block rank one, so
        // [2/2] falls back down the chain until [2/1] reproduces the
        // function exactly
        let r = 0.5_f64;
        let coeffs: Vec<f64> = (0..5).map(|k| r.powi(k)).collect();
        let p = pade_from_series(&coeffs, 2, 2).unwrap();
        assert_eq!(p.fallback, Some((2, 2)));
        assert_eq!((p.l, p.m), (2, 1));
        assert!(p.residual_ok);
        assert_relative_eq!(p.eval(1.0).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn generic_fallback_cannot_match_the_full_input() {
        // a vanishing middle coefficient makes the [1/1] system
        // singular; the [0/1] fallback exists but cannot reproduce the
        // quadratic tail, and the flag must say so
        let p = pade_from_series(&[1.0, 0.0, 5.0], 1, 1).unwrap();
        assert_eq!(p.fallback, Some((1, 1)));
        assert_eq!((p.l, p.m), (0, 1));
        assert!(!p.residual_ok);
        assert_relative_eq!(p.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn polynomial_series_detected_before_solving() {
        let coeffs = vec![2.0, 3.0, 0.0, 0.0, 0.0];
        let p = pade_from_series(&coeffs, 2, 2).unwrap();
        assert_eq!(p.num, vec![2.0, 3.0, 0.0]);
        assert_eq!(p.den, vec![1.0, 0.0, 0.0]);
        assert!(p.residual_ok);
        assert!(p.poles().is_empty());
        assert_relative_eq!(p.eval(7.0).unwrap(), 23.0);
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(pade_from_series(&[1.0, 2.0], 2, 2).is_err());
        assert!(pade_from_series(&[1.0, f64::NAN, 0.0], 1, 1).is_err());
    }

    #[test]
    fn ladder_walks_the_sqrt_series() {
        let result = continue_to_one(&sqrt_series()).unwrap();
        assert_eq!(result.ladder.len(), 3);
        assert_eq!(result.top_degrees, (2, 2));
        assert_relative_eq!(result.value_at_one, 41.0 / 29.0, max_relative = 1e-12);
        let values: Vec<f64> = result.ladder.iter().map(|r| r.value.unwrap()).collect();
        assert_relative_eq!(values[0], 1.4, max_relative = 1e-12);
        assert_relative_eq!(values[1], 17.0 / 12.0, max_relative = 1e-12);
        assert_relative_eq!(values[2], 41.0 / 29.0, max_relative = 1e-12);
        let expected_spread = 17.0 / 12.0 - 1.4;
        assert_relative_eq!(result.spread, expected_spread, max_relative = 1e-10);
        assert!(result.pole_warnings.is_empty());
        // each rung improves on the last toward sqrt(2)
        let target = 2.0_f64.sqrt();
        assert!((values[2] - target).abs() < (values[1] - target).abs());
        assert!((values[1] - target).abs() < (values[0] - target).abs());
    }

    #[test]
    fn ladder_of_a_constant_series() {
        let coeffs = vec![-3.5, 0.0, 0.0, 0.0, 0.0, 0.0];
        let result = continue_to_one(&coeffs).unwrap();
        assert_eq!(result.value_at_one, -3.5);
        assert_eq!(result.spread, 0.0);
        assert!(result.pole_warnings.is_empty());
        assert!(result.ladder.iter().all(|r| r.value == Some(-3.5)));
    }

    #[test]
    fn determinant_formula_agreement() {
        // cofactor expansion of the classic determinant representation
        // along its bottom row, minors evaluated numerically
        fn det(mut a: Vec<Vec<f64>>) -> f64 {
            let n = a.len();
            let mut sign = 1.0;
            for col in 0..n {
                let pivot_row = (col..n)
                    .max_by(|&i, &j| {
                        a[i][col]
                            .abs()
                            .partial_cmp(&a[j][col].abs())
                            .unwrap()
                    })
                    .unwrap();
                if a[pivot_row][col] == 0.0 {
                    return 0.0;
                }
                if pivot_row != col {
                    a.swap(col, pivot_row);
                    sign = -sign;
                }
                for row in col + 1..n {
                    let f = a[row][col] / a[col][col];
                    for k in col..n {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
            sign * (0..n).map(|i| a[i][i]).product::<f64>()
        }
        fn pade_by_determinants(coeffs: &[f64], l: usize, m: usize, x: f64) -> f64 {
            let a = |i: isize| -> f64 {
                if i < 0 {
                    0.0
                } else {
                    coeffs[i as usize]
                }
            };
            let mut top = vec![vec![0.0_f64; m + 1]; m + 1];
            let mut bottom = vec![vec![0.0_f64; m + 1]; m + 1];
            for i in 0..m {
                for j in 0..=m {
                    let entry = a(l as isize - m as isize + 1 + i as isize + j as isize);
                    top[i][j] = entry;
                    bottom[i][j] = entry;
                }
            }
            for j in 0..=m {
                // partial sums sum_{k=m-j}^{l} a_{k-(m-j)} x^k
                let shift = m - j;
                let mut s = 0.0;
                for k in shift..=l {
                    s += a(k as isize - shift as isize) * x.powi(k as i32);
                }
                top[m][j] = s;
                bottom[m][j] = x.powi((m - j) as i32);
            }
            det(top) / det(bottom)
        }
        let series = sqrt_series();
        let direct = pade_from_series(&series, 2, 2).unwrap();
        for x in [0.25, 1.0, 3.0] {
            assert_relative_eq!(
                pade_by_determinants(&series, 2, 2, x),
                direct.eval(x).unwrap(),
                max_relative = 1e-9
            );
        }
        let bumpy = vec![0.7, -0.3, 0.41, 0.09, -0.22];
        let direct = pade_from_series(&bumpy, 2, 2).unwrap();
        for x in [0.5, 1.0] {
            assert_relative_eq!(
                pade_by_determinants(&bumpy, 2, 2, x),
                direct.eval(x).unwrap(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn state_continuation_normalizes_and_records_fallbacks() {
        use crate::matrix::DeltaMatrix;
        use crate::perturbation::rs_expand;
        let matrix = DeltaMatrix::from_parts(
            vec![-1.0, 1.0, 13.0, 17.0],
            vec![
                vec![0.0, 0.3, 0.0, 0.0],
                vec![0.3, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let series = rs_expand(&matrix, 0, 8).unwrap();
        let state = continue_state(&series, 2, 2).unwrap();
        let norm: f64 = state.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert_relative_eq!(norm, 1.0, max_relative = 1e-14);
        // exact lower eigenvector of the two-level problem at full
        // coupling: tan(2 theta) = 2 d / g
        let theta = 0.5 * (2.0_f64 * 0.3 / 2.0).atan();
        assert_relative_eq!(state.coeffs[0], theta.cos(), max_relative = 1e-4);
        assert_relative_eq!(state.coeffs[1], -theta.sin(), max_relative = 1e-3);
        assert_eq!(state.coeffs[2], 0.0);
        assert!(state.normalizer > 0.9 && state.normalizer < 1.1);
        assert!(continue_state(&series, 5, 4).is_err());
    }
}

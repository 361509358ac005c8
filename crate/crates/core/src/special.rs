//! Special functions needed by the exactly solvable bases: Hermite and
//! associated Laguerre polynomials, terminating Kummer series, and the Airy
//! function of the first kind with its derivative and zeros.
//!
//! Everything is implemented in-repo from recurrences, Taylor steps, and
//! asymptotic expansions so results are reproducible across platforms.

use crate::{Error, Result};
use std::sync::OnceLock;

/// Physicists' Hermite polynomial H_n(y) via the three-term recurrence
/// H_{n+1} = 2 y H_n - 2 n H_{n-1}.
pub fn hermite(n: usize, y: f64) -> f64 {
    let mut hm = 1.0;
    if n == 0 {
        return hm;
    }
    let mut h = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * h - 2.0 * (k as f64) * hm;
        hm = h;
        h = next;
    }
    h
}

/// Fill `out` with the orthonormal Hermite polynomials p_0..p_{dim-1} at y.
///
/// These satisfy integral p_m p_n e^{-y^2} dy = delta_mn; the weight is kept
/// out of the values so quadrature against a plain Gauss-Hermite rule stays
/// free of overflow at large nodes.
pub fn hermite_orthonormal_row(y: f64, out: &mut [f64]) {
    let dim = out.len();
    if dim == 0 {
        return;
    }
    out[0] = std::f64::consts::PI.powf(-0.25);
    if dim > 1 {
        out[1] = std::f64::consts::SQRT_2 * y * out[0];
    }
    for k in 1..dim.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * y * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// Orthonormal Hermite function p_n(y) e^{-y^2/2}, the oscillator
/// eigenfunction in the dimensionless coordinate.
///
/// For |y| large enough that the Gaussian underflows the true value is
/// below the smallest positive double and 0 is returned.
pub fn hermite_function(n: usize, y: f64) -> f64 {
    let env = (-0.5 * y * y).exp();
    if env == 0.0 {
        return 0.0;
    }
    let mut pm = std::f64::consts::PI.powf(-0.25) * env;
    if n == 0 {
        return pm;
    }
    let mut p = std::f64::consts::SQRT_2 * y * pm;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * p - (kf / (kf + 1.0)).sqrt() * pm;
        pm = p;
        p = next;
    }
    p
}

/// Associated Laguerre polynomial L_n^{(alpha)}(x) via the three-term
/// recurrence (k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}.
pub fn assoc_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut lm = 1.0;
    if n == 0 {
        return lm;
    }
    let mut l = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * l - (kf + alpha) * lm) / (kf + 1.0);
        lm = l;
        l = next;
    }
    l
}

/// Confluent hypergeometric function 1F1(a; b; z) for terminating series,
/// meaning a must be a nonpositive integer so the sum has -a + 1 terms.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    let m = -a;
    if m < -1e-9 || (m - m.round()).abs() > 1e-9 {
        return Err(Error::UnsupportedKummer { a });
    }
    if b <= 0.0 && (b - b.round()).abs() < 1e-9 {
        return Err(Error::Domain(format!(
            "kummer_1f1 second parameter must not be a nonpositive integer, got {b}"
        )));
    }
    let m = m.round() as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..m {
        let jf = j as f64;
        term *= (a + jf) / (b + jf) * z / (jf + 1.0);
        sum += term;
    }
    Ok(sum)
}

// Airy machinery. The function is seeded by its exponentially decaying
// asymptotic expansion at a point far enough right that the expansion is
// converged to machine precision, then marched to the left with Taylor
// steps of the defining equation Ai'' = y Ai. Marching leftward keeps the
// decaying solution dominant; marching rightward would amplify any
// contamination by the growing second solution.

const AIRY_SEED: f64 = 12.0;
const AIRY_FLOOR: f64 = -46.0;
const AIRY_STEP: f64 = 0.25;
const AIRY_TAYLOR_TERMS: usize = 34;

/// Taylor step for Ai'' = y Ai: from (value, slope) at anchor y0, return
/// (value, slope) at y0 + t using the coefficient recurrence
/// c_{k+2} = (y0 c_k + c_{k-1}) / ((k+1)(k+2)).
fn airy_taylor(y0: f64, f0: f64, f1: f64, t: f64) -> (f64, f64) {
    let mut c = [0.0_f64; AIRY_TAYLOR_TERMS];
    c[0] = f0;
    c[1] = f1;
    for k in 0..AIRY_TAYLOR_TERMS - 2 {
        let prev = if k == 0 { 0.0 } else { c[k - 1] };
        c[k + 2] = (y0 * c[k] + prev) / (((k + 1) * (k + 2)) as f64);
    }
    let mut value = 0.0;
    let mut slope = 0.0;
    for k in (0..AIRY_TAYLOR_TERMS).rev() {
        value = value * t + c[k];
        if k > 0 {
            slope = slope * t + (k as f64) * c[k];
        }
    }
    (value, slope)
}

/// Asymptotic expansion of (Ai, Ai') for y >= AIRY_SEED, truncated at the
/// smallest term.
fn airy_asymptotic_positive(y: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    let mut u = 1.0;
    let mut sum_u = 1.0;
    let mut sum_v = 1.0;
    let mut sign = 1.0;
    let mut prev = 1.0_f64;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let term = u / zeta.powi(k as i32);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        sign = -sign;
        sum_u += sign * term;
        let v = (6.0 * kf + 1.0) / (1.0 - 6.0 * kf) * u;
        sum_v += sign * v / zeta.powi(k as i32);
        if term.abs() < 1e-18 {
            break;
        }
    }
    let pref = 0.5 * std::f64::consts::PI.powf(-0.5) * (-zeta).exp();
    let ai = pref * y.powf(-0.25) * sum_u;
    let aip = -pref * y.powf(0.25) * sum_v;
    (ai, aip)
}

/// Asymptotic expansion of (Ai, Ai') for y <= AIRY_FLOOR (oscillatory side),
/// in terms of z = -y.
fn airy_asymptotic_negative(y: f64) -> (f64, f64) {
    let z = -y;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    // even and odd partial sums of the u_k and v_k sequences
    let mut u = 1.0;
    let mut u_even = 1.0;
    let mut u_odd = 0.0;
    let mut v_even = 1.0;
    let mut v_odd = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let v = (6.0 * kf + 1.0) / (1.0 - 6.0 * kf) * u;
        let pw = zeta.powi(k as i32);
        // signs follow (-1)^floor(k/2) on each parity class
        let sgn = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            u_even += sgn * u / pw;
            v_even += sgn * v / pw;
        } else {
            u_odd += sgn * u / pw;
            v_odd += sgn * v / pw;
        }
        if (u / pw).abs() < 1e-18 {
            break;
        }
    }
    let pref = std::f64::consts::PI.powf(-0.5);
    let ai = pref * z.powf(-0.25) * (s * u_even - c * u_odd);
    let aip = -pref * z.powf(0.25) * (c * v_even + s * v_odd);
    (ai, aip)
}

/// Anchor table of (Ai, Ai') on [AIRY_FLOOR, AIRY_SEED] at spacing AIRY_STEP,
/// built once by the leftward march.
fn airy_anchors() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let steps = ((AIRY_SEED - AIRY_FLOOR) / AIRY_STEP).round() as usize;
        let mut table = Vec::with_capacity(steps + 1);
        let (mut f, mut fp) = airy_asymptotic_positive(AIRY_SEED);
        table.push((f, fp));
        for i in 0..steps {
            let y0 = AIRY_SEED - AIRY_STEP * i as f64;
            let (nf, nfp) = airy_taylor(y0, f, fp, -AIRY_STEP);
            f = nf;
            fp = nfp;
            table.push((f, fp));
        }
        table
    })
}

/// Airy function of the first kind and its derivative at y.
pub fn airy_ai_pair(y: f64) -> (f64, f64) {
    if y >= AIRY_SEED {
        airy_asymptotic_positive(y)
    } else if y <= AIRY_FLOOR {
        airy_asymptotic_negative(y)
    } else {
        let table = airy_anchors();
        let idx = ((AIRY_SEED - y) / AIRY_STEP).round() as usize;
        let idx = idx.min(table.len() - 1);
        let y0 = AIRY_SEED - AIRY_STEP * idx as f64;
        let (f, fp) = table[idx];
        airy_taylor(y0, f, fp, y - y0)
    }
}

/// Airy function of the first kind.
pub fn airy_ai(y: f64) -> f64 {
    airy_ai_pair(y).0
}

/// Derivative of the Airy function of the first kind.
pub fn airy_ai_prime(y: f64) -> f64 {
    airy_ai_pair(y).1
}

/// Magnitude of the n-th negative zero of Ai from the asymptotic formula
/// a_n = [3 pi (4n - 1) / 8]^{2/3}, n >= 1.
pub fn airy_zero_asymptotic(n: usize) -> f64 {
    (3.0 * std::f64::consts::PI * (4.0 * n as f64 - 1.0) / 8.0).powf(2.0 / 3.0)
}

/// Magnitude of the n-th negative zero of Ai, Newton-polished from the
/// asymptotic estimate.
pub fn airy_zero_refined(n: usize) -> f64 {
    let mut a = airy_zero_asymptotic(n);
    for _ in 0..30 {
        let (f, fp) = airy_ai_pair(-a);
        let step = f / fp;
        a += step;
        if step.abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
    }
    a
}

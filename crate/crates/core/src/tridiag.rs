//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! lowest eigenvalues and inverse iteration for their eigenvectors.
//!
//! Deterministic by construction: bisection uses a fixed bracket-halving
//! schedule and inverse iteration starts from a fixed hash-seeded vector,
//! so repeated runs give bit-identical results.

use crate::{Error, Result};

/// Count of eigenvalues of the tridiagonal matrix strictly below x, from
/// the signs of the LDL^T pivots.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let mut denom = d;
        if denom.abs() < f64::MIN_POSITIVE {
            denom = if denom < 0.0 { -f64::MIN_POSITIVE } else { f64::MIN_POSITIVE };
        }
        d = (diag[i] - x) - off[i - 1] * off[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k lowest eigenvalues in ascending order.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::Domain(format!(
            "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    if k > n {
        return Err(Error::Domain(format!("requested {k} eigenvalues of a {n} matrix")));
    }
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i + 1 < n {
            radius += off[i].abs();
        }
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        let mut a = lo;
        let mut b = hi;
        // keep exactly j eigenvalues below a and at least j+1 below b
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) <= j {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-15 * scale {
                break;
            }
        }
        values.push(0.5 * (a + b));
    }
    Ok(values)
}

/// Solve (T - sigma I) x = b by Gaussian elimination with partial pivoting
/// between adjacent rows; the factorization fills one extra superdiagonal.
fn shifted_solve(diag: &[f64], off: &[f64], sigma: f64, b: &mut Vec<f64>) {
    let n = diag.len();
    let mut main: Vec<f64> = diag.iter().map(|d| d - sigma).collect();
    let mut upper1 = vec![0.0_f64; n];
    let mut upper2 = vec![0.0_f64; n];
    for i in 0..n - 1 {
        upper1[i] = off[i];
    }
    let mut lower = vec![0.0_f64; n]; // subdiagonal being eliminated
    for i in 0..n - 1 {
        lower[i + 1] = off[i];
    }
    for i in 0..n - 1 {
        if lower[i + 1].abs() > main[i].abs() {
            // swap rows i and i+1; row i+1 is still tridiagonal at this
            // point, so its entries land inside the stored bands
            std::mem::swap(&mut main[i], &mut lower[i + 1]);
            std::mem::swap(&mut upper1[i], &mut main[i + 1]);
            std::mem::swap(&mut upper2[i], &mut upper1[i + 1]);
            b.swap(i, i + 1);
        }
        let mut pivot = main[i];
        if pivot.abs() < f64::MIN_POSITIVE {
            pivot = if pivot < 0.0 { -f64::MIN_POSITIVE } else { f64::MIN_POSITIVE };
            main[i] = pivot;
        }
        let factor = lower[i + 1] / pivot;
        main[i + 1] -= factor * upper1[i];
        upper1[i + 1] -= factor * upper2[i];
        b[i + 1] -= factor * b[i];
    }
    // back substitution with the two stored superdiagonals
    for i in (0..n).rev() {
        let mut rhs = b[i];
        if i + 1 < n {
            rhs -= upper1[i] * b[i + 1];
        }
        if i + 2 < n {
            rhs -= upper2[i] * b[i + 2];
        }
        let mut pivot = main[i];
        if pivot.abs() < f64::MIN_POSITIVE {
            pivot = if pivot < 0.0 { -f64::MIN_POSITIVE } else { f64::MIN_POSITIVE };
        }
        b[i] = rhs / pivot;
    }
}

fn hashed_start(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let h = (i as u64).wrapping_mul(2654435761).wrapping_add(40503) % 8191;
            h as f64 / 8191.0 - 0.5
        })
        .collect()
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// The k lowest eigenpairs in ascending eigenvalue order. Eigenvectors are
/// unit-norm in the Euclidean sense with their largest component positive.
pub fn lowest_eigenpairs(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let values = lowest_eigenvalues(diag, off, k)?;
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, d) in diag.iter().enumerate() {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i + 1 < n {
            radius += off[i].abs();
        }
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for &lambda in values.iter() {
        // tiny off-eigenvalue shift keeps the solve well defined
        let sigma = lambda + 1e-13 * scale;
        let mut v = hashed_start(n);
        normalize(&mut v);
        for _ in 0..4 {
            shifted_solve(diag, off, sigma, &mut v);
            // orthogonalize against earlier eigenvectors of nearby levels
            for (prev_lambda, prev_vec) in pairs.iter() {
                if (lambda - prev_lambda).abs() < 1e-6 * scale {
                    let overlap: f64 = v.iter().zip(prev_vec).map(|(a, b)| a * b).sum();
                    for (x, p) in v.iter_mut().zip(prev_vec) {
                        *x -= overlap * p;
                    }
                }
            }
            normalize(&mut v);
        }
        // deterministic sign: largest component positive
        let mut idx = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[idx].abs() {
                idx = i;
            }
        }
        if v[idx] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        pairs.push((lambda, v));
    }
    Ok(pairs)
}

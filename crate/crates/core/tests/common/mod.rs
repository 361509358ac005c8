//! Shared helpers for the acceptance suite: a pass/fail banner per
//! criterion, a dense symmetric eigensolver independent of the library
//! under test, and a deterministic random-number generator.

/// Prints one verdict line per criterion: PASS when the test reaches
/// its end, FAIL when it unwinds through an assertion.
pub struct Verdict {
    name: &'static str,
    passed: bool,
}

impl Verdict {
    pub fn new(name: &'static str) -> Self {
        Verdict { name, passed: false }
    }

    pub fn pass(mut self) {
        self.passed = true;
    }
}

impl Drop for Verdict {
    fn drop(&mut self) {
        if self.passed {
            println!("{}: PASS", self.name);
        } else {
            println!("{}: FAIL", self.name);
        }
    }
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending. Independent of the library's tridiagonal machinery on
/// purpose: agreement between the two is then evidence.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let frobenius: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if frobenius == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * frobenius {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    values
}

/// A small deterministic generator so randomized suites are exactly
/// reproducible run to run.
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed.wrapping_mul(2685821657736338717).wrapping_add(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [lo, hi].
    pub fn int_range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

//! Gaussian quadrature rules: Gauss-Hermite, Gauss-Laguerre, and
//! Gauss-Legendre, plus a panel mapper for composite rules.
//!
//! Nodes come from Newton iteration on the orthonormal recurrences with the
//! usual asymptotic initial guesses; weights are Christoffel numbers
//! 1 / sum_k p_k(x_j)^2. The recurrences are renormalized by powers of
//! 2^512 whenever values grow past 2^500, so rules stay finite at node
//! counts where the raw polynomials would overflow. Weights are assembled
//! in log space; tail weights that underflow to zero are harmless because
//! they multiply integrand values of order one.
//!
//! All rules are plain: a Hermite rule approximates
//! integral f(x) e^{-x^2} dx as sum_j w_j f(x_j), a Laguerre rule carries
//! weight e^{-x}, and a Legendre rule has unit weight on [-1, 1].

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::{Error, Result};

/// Nodes and matching weights of a quadrature rule, nodes ascending.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

// node solves cost n^2 work, so identical rules are computed once per
// process and handed out as clones
type RuleCache = Mutex<HashMap<(u8, usize), QuadratureRule>>;

fn cached(kind: u8, n: usize, build: impl FnOnce() -> Result<QuadratureRule>) -> Result<QuadratureRule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let map = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(rule) = map.get(&(kind, n)) {
            return Ok(rule.clone());
        }
    }
    let rule = build()?;
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry((kind, n)).or_insert_with(|| rule.clone());
    Ok(rule)
}

// renormalization thresholds for the scaled recurrences; the growth bound
// leaves room for one more step at the largest Laguerre nodes before the
// squared value would overflow
const BIG: f64 = 1e140;
const RESCALE: f64 = 7.458340731200207e-155; // exactly 2^-512
const LN_RESCALE_SQ: f64 = 709.78271289338397; // ln(2^1024)

/// State of the scaled orthonormal recurrence at a point: the last two
/// polynomial values under a common scaling, the epoch count, and the
/// scaled sum of squares of p_0..p_{n-1}.
struct RecurrenceEval {
    pn: f64,
    pn_minus_1: f64,
    epochs: i32,
    sum_sq: f64,
}

impl RecurrenceEval {
    /// Newton step p_n / p_n' given the derivative expressed as
    /// deriv_factor * p_{n-1} + deriv_self * p_n.
    fn newton_step(&self, deriv_factor: f64, deriv_self: f64) -> f64 {
        self.pn / (deriv_factor * self.pn_minus_1 + deriv_self * self.pn)
    }

    /// Christoffel weight 1 / sum_{k<n} p_k^2, evaluated through logs so
    /// extreme nodes underflow to zero instead of dividing by infinity.
    fn weight(&self) -> f64 {
        (-(self.sum_sq.ln() + f64::from(self.epochs) * LN_RESCALE_SQ)).exp()
    }
}

/// Run a scaled orthonormal three-term recurrence
/// p_{k+1} = (x - a_k) / b_{k+1} * p_k - b_k / b_{k+1} * p_{k-1}
/// written through the caller-provided step closure.
fn scaled_recurrence(n: usize, p0: f64, step: impl Fn(usize, f64, f64) -> f64) -> RecurrenceEval {
    let mut pm = 0.0_f64;
    let mut p = p0;
    let mut epochs = 0;
    let mut sum_sq = 0.0_f64;
    for k in 0..n {
        sum_sq += p * p;
        let next = step(k, p, pm);
        pm = p;
        p = next;
        if p.abs() > BIG || pm.abs() > BIG {
            p *= RESCALE;
            pm *= RESCALE;
            sum_sq *= RESCALE * RESCALE;
            epochs += 1;
        }
    }
    RecurrenceEval {
        pn: p,
        pn_minus_1: pm,
        epochs,
        sum_sq,
    }
}

fn hermite_eval(n: usize, x: f64) -> RecurrenceEval {
    scaled_recurrence(n, std::f64::consts::PI.powf(-0.25), |k, p, pm| {
        let kf = k as f64;
        (2.0 / (kf + 1.0)).sqrt() * x * p - (kf / (kf + 1.0)).sqrt() * pm
    })
}

fn laguerre_eval(n: usize, x: f64) -> RecurrenceEval {
    scaled_recurrence(n, 1.0, |k, p, pm| {
        let kf = k as f64;
        ((2.0 * kf + 1.0 - x) * p - kf * pm) / (kf + 1.0)
    })
}

/// Gauss-Hermite rule with n nodes for integral f(x) e^{-x^2} dx.
///
/// Nodes are the eigenvalues of the symmetric Jacobi matrix of the
/// orthonormal recurrence (found by Sturm bisection, so the ordering is
/// guaranteed), then polished with Newton steps on the recurrence.
pub fn hermite_rule(n: usize) -> Result<QuadratureRule> {
    cached(0, n, || hermite_rule_uncached(n))
}

fn hermite_rule_uncached(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("hermite_rule needs at least one node".into()));
    }
    let diag = vec![0.0_f64; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = crate::tridiag::lowest_eigenvalues(&diag, &off, n)?;
    let deriv = (2.0 * n as f64).sqrt();
    for z in nodes.iter_mut() {
        // p_n'(x) = sqrt(2n) p_{n-1}(x)
        for _ in 0..3 {
            let eval = hermite_eval(n, *z);
            let step = eval.newton_step(deriv, 0.0);
            if !step.is_finite() {
                break;
            }
            *z -= step;
            if step.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
    }
    // enforce the exact reflection symmetry of the rule
    for i in 0..n / 2 {
        let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[n - 1 - i] = s;
        nodes[i] = -s;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    check_sorted(&nodes, "gauss-hermite")?;
    let weights = nodes.iter().map(|&x| hermite_eval(n, x).weight()).collect();
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Laguerre rule with n nodes for integral_0^inf f(x) e^{-x} dx.
///
/// Same scheme as the Hermite rule: Sturm bisection on the Jacobi
/// matrix (diagonal 2k+1, off-diagonal k) followed by Newton polish.
pub fn laguerre_rule(n: usize) -> Result<QuadratureRule> {
    cached(1, n, || laguerre_rule_uncached(n))
}

fn laguerre_rule_uncached(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("laguerre_rule needs at least one node".into()));
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|k| k as f64).collect();
    let mut nodes = crate::tridiag::lowest_eigenvalues(&diag, &off, n)?;
    let nf = n as f64;
    for z in nodes.iter_mut() {
        // L_n'(x) = n (L_n(x) - L_{n-1}(x)) / x
        for _ in 0..3 {
            let eval = laguerre_eval(n, *z);
            let step = eval.newton_step(-nf / *z, nf / *z);
            if !step.is_finite() {
                break;
            }
            *z -= step;
            if step.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
    }
    check_sorted(&nodes, "gauss-laguerre")?;
    let weights = nodes.iter().map(|&x| laguerre_eval(n, x).weight()).collect();
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Legendre rule with n nodes for integral_{-1}^{1} f(x) dx.
pub fn legendre_rule(n: usize) -> Result<QuadratureRule> {
    cached(2, n, || legendre_rule_uncached(n))
}

fn legendre_rule_uncached(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("legendre_rule needs at least one node".into()));
    }
    let mut nodes = vec![0.0_f64; n];
    let mut weights = vec![0.0_f64; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let mut pm = 0.0_f64;
            let mut p = 1.0_f64;
            for k in 0..n {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0) * z * p - kf * pm) / (kf + 1.0);
                pm = p;
                p = next;
            }
            pp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let step = p / pp;
            z -= step;
            if step.abs() <= 1e-15 * (1.0 + z.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "gauss-legendre node {i} of {n} did not converge"
            )));
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z;
        weights[i] = w;
        nodes[n - 1 - i] = z;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[half - 1] = 0.0;
    }
    check_sorted(&nodes, "gauss-legendre")?;
    Ok(QuadratureRule { nodes, weights })
}

/// Composite rule: copy a base [-1, 1] rule onto npanels equal panels
/// covering [a, b].
pub fn map_panels(base: &QuadratureRule, a: f64, b: f64, npanels: usize) -> Result<QuadratureRule> {
    if !(b > a) || npanels == 0 {
        return Err(Error::Domain(format!(
            "map_panels needs a positive interval and panel count, got [{a}, {b}] x {npanels}"
        )));
    }
    let width = (b - a) / npanels as f64;
    let mut nodes = Vec::with_capacity(base.nodes.len() * npanels);
    let mut weights = Vec::with_capacity(base.nodes.len() * npanels);
    for p in 0..npanels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        for (&y, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(mid + 0.5 * width * y);
            weights.push(0.5 * width * w);
        }
    }
    Ok(QuadratureRule { nodes, weights })
}

fn check_sorted(nodes: &[f64], label: &str) -> Result<()> {
    for (i, w) in nodes.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Err(Error::Numerical(format!(
                "{label} nodes are not strictly increasing: node {i} = {}, node {} = {}",
                w[0],
                i + 1,
                w[1]
            )));
        }
    }
    Ok(())
}

//! Exactly solvable reference problems: harmonic oscillator on the line,
//! attractive Coulomb s-wave, and the linear radial well.
//!
//! Each family provides eigenvalues, normalized eigenfunctions, and a
//! Gauss rule tailored to integrating smooth factors against a pair of
//! its eigenfunctions.

use crate::potential::{Domain, Potential};
use crate::quadrature::{self, QuadratureRule};
use crate::special;
use crate::{Error, Result};

/// A solvable reference Hamiltonian with a complete discrete basis.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactBasis {
    /// -d^2/dx^2 + curvature (x - center)^2 + offset on the line.
    Oscillator { curvature: f64, center: f64, offset: f64 },
    /// -d^2/dr^2 - alpha/r acting on u(r) = r psi(r), u(0) = 0.
    CoulombRadial { alpha: f64 },
    /// -d^2/dr^2 + slope r + intercept acting on u(r), u(0) = 0.
    LinearRadial { slope: f64, intercept: f64, refine_zeros: bool },
}

impl ExactBasis {
    pub fn oscillator(curvature: f64, center: f64, offset: f64) -> Result<Self> {
        if !(curvature > 0.0) || !curvature.is_finite() {
            return Err(Error::Domain(format!(
                "oscillator curvature must be positive, got {curvature}"
            )));
        }
        Ok(ExactBasis::Oscillator { curvature, center, offset })
    }

    pub fn coulomb(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "coulomb strength must be positive, got {alpha}"
            )));
        }
        Ok(ExactBasis::CoulombRadial { alpha })
    }

    pub fn linear(slope: f64, intercept: f64, refine_zeros: bool) -> Result<Self> {
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(Error::Domain(format!(
                "linear slope must be positive, got {slope}"
            )));
        }
        Ok(ExactBasis::LinearRadial { slope, intercept, refine_zeros })
    }

    pub fn domain(&self) -> Domain {
        match self {
            ExactBasis::Oscillator { .. } => Domain::Line,
            _ => Domain::RadialHalfLine,
        }
    }

    /// First valid level index: 0 on the line, 1 for the radial families.
    pub fn index_origin(&self) -> usize {
        match self {
            ExactBasis::Oscillator { .. } => 0,
            _ => 1,
        }
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < self.index_origin() {
            return Err(Error::Domain(format!(
                "level {n} below first index {} of {:?}",
                self.index_origin(),
                self
            )));
        }
        Ok(())
    }

    /// Negative-zero of the Airy function attached to level n of the
    /// linear family, honoring the refinement flag.
    pub fn airy_zero(&self, n: usize) -> f64 {
        match self {
            ExactBasis::LinearRadial { refine_zeros: true, .. } => special::airy_zero_refined(n),
            _ => special::airy_zero_asymptotic(n),
        }
    }

    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        Ok(match self {
            ExactBasis::Oscillator { curvature, offset, .. } => {
                curvature.sqrt() * (2.0 * n as f64 + 1.0) + offset
            }
            ExactBasis::CoulombRadial { alpha } => -alpha * alpha / (4.0 * (n * n) as f64),
            ExactBasis::LinearRadial { slope, intercept, .. } => {
                slope.powf(2.0 / 3.0) * self.airy_zero(n) + intercept
            }
        })
    }

    /// Radial wave u_n(r) for the half-line families, psi_n(x) on the
    /// line. Normalized so the square integrates to one in the native
    /// coordinate.
    pub fn wave(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        Ok(match self {
            ExactBasis::Oscillator { curvature, center, .. } => {
                let eps = curvature.powf(0.25);
                eps.sqrt() * special::hermite_function(n, eps * (x - center))
            }
            ExactBasis::CoulombRadial { alpha } => {
                let rate = coulomb_rate(*alpha, n);
                let envelope = (-rate * x).exp();
                if envelope == 0.0 {
                    0.0
                } else {
                    coulomb_u_poly(*alpha, n, x) * envelope
                }
            }
            ExactBasis::LinearRadial { slope, .. } => {
                let a = self.airy_zero(n);
                let (ai, aip) = special::airy_ai_pair(-a);
                let norm = slope.powf(1.0 / 6.0) / (a * ai * ai + aip * aip).sqrt();
                norm * special::airy_ai(slope.powf(1.0 / 3.0) * x - a)
            }
        })
    }

    /// Full eigenfunction psi_n: identical to `wave` on the line, u_n/r
    /// on the half line with the r -> 0 limit taken analytically.
    pub fn eigenfunction(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        match self {
            ExactBasis::Oscillator { .. } => self.wave(n, x),
            ExactBasis::CoulombRadial { alpha } => {
                if x == 0.0 {
                    let nf = n as f64;
                    let norm = (alpha / (2.0 * nf)).sqrt() / nf;
                    Ok(norm * (alpha / nf) * nf)
                } else {
                    Ok(self.wave(n, x)? / x)
                }
            }
            ExactBasis::LinearRadial { slope, .. } => {
                if x == 0.0 {
                    let a = self.airy_zero(n);
                    let (ai, aip) = special::airy_ai_pair(-a);
                    let norm = slope.powf(1.0 / 6.0) / (a * ai * ai + aip * aip).sqrt();
                    Ok(norm * slope.powf(1.0 / 3.0) * aip)
                } else {
                    Ok(self.wave(n, x)? / x)
                }
            }
        }
    }

    /// The potential this basis diagonalizes.
    pub fn implied_potential(&self) -> Potential {
        match self {
            ExactBasis::Oscillator { curvature, center, offset } => {
                Potential::harmonic(*curvature, *center, *offset)
            }
            ExactBasis::CoulombRadial { alpha } => Potential::coulomb(*alpha),
            ExactBasis::LinearRadial { slope, intercept, .. } => {
                Potential::linear_radial(*slope, *intercept)
            }
        }
    }

    /// Quadrature rule for the pair (m, n): nodes in the native
    /// coordinate, weights absorbing both eigenfunctions, so that
    /// sum_j w_j f(x_j) approximates the matrix element of f between
    /// levels m and n. Exact for polynomial f up to the rule's degree
    /// in the oscillator and Coulomb families.
    pub fn quadrature_rule(&self, m: usize, n: usize, npts: usize) -> Result<QuadratureRule> {
        self.check_index(m)?;
        self.check_index(n)?;
        if npts == 0 {
            return Err(Error::Domain("quadrature rule needs at least one point".into()));
        }
        match self {
            ExactBasis::Oscillator { curvature, center, .. } => {
                let eps = curvature.powf(0.25);
                let base = quadrature::hermite_rule(npts)?;
                let deg = m.max(n);
                let mut row = vec![0.0; deg + 1];
                let mut nodes = Vec::with_capacity(npts);
                let mut weights = Vec::with_capacity(npts);
                for (&y, &w) in base.nodes.iter().zip(&base.weights) {
                    nodes.push(y / eps + center);
                    if w == 0.0 {
                        weights.push(0.0);
                    } else {
                        special::hermite_orthonormal_row(y, &mut row);
                        weights.push(w * row[m] * row[n]);
                    }
                }
                Ok(QuadratureRule { nodes, weights })
            }
            ExactBasis::CoulombRadial { alpha } => {
                let rate_m = coulomb_rate(*alpha, m);
                let rate_n = coulomb_rate(*alpha, n);
                let scale = rate_m.min(rate_n);
                let residual = rate_m + rate_n - scale;
                let base = quadrature::laguerre_rule(npts)?;
                let mut nodes = Vec::with_capacity(npts);
                let mut weights = Vec::with_capacity(npts);
                for (&t, &w) in base.nodes.iter().zip(&base.weights) {
                    let r = t / scale;
                    nodes.push(r);
                    let envelope = (-residual * r).exp();
                    if w == 0.0 || envelope == 0.0 {
                        weights.push(0.0);
                    } else {
                        weights.push(
                            w / scale
                                * coulomb_u_poly(*alpha, m, r)
                                * coulomb_u_poly(*alpha, n, r)
                                * envelope,
                        );
                    }
                }
                Ok(QuadratureRule { nodes, weights })
            }
            ExactBasis::LinearRadial { slope, .. } => {
                let a_max = self.airy_zero(m.max(n));
                let rmax = (a_max + 8.0) / slope.powf(1.0 / 3.0);
                let base = quadrature::legendre_rule(32)?;
                let npanels = npts.div_ceil(32).max(1);
                let panel = quadrature::map_panels(&base, 0.0, rmax, npanels)?;
                let mut weights = Vec::with_capacity(panel.nodes.len());
                for (&r, &w) in panel.nodes.iter().zip(&panel.weights) {
                    weights.push(w * self.wave(m, r)? * self.wave(n, r)?);
                }
                Ok(QuadratureRule { nodes: panel.nodes, weights })
            }
        }
    }
}

/// Exponential decay rate of the Coulomb radial wave u_n.
pub(crate) fn coulomb_rate(alpha: f64, n: usize) -> f64 {
    alpha / (2.0 * n as f64)
}

/// Polynomial factor of the Coulomb radial wave: u_n(r) with the
/// e^{-alpha r / 2n} envelope stripped.
pub(crate) fn coulomb_u_poly(alpha: f64, n: usize, r: f64) -> f64 {
    let nf = n as f64;
    let rho = alpha * r / nf;
    let norm = (alpha / (2.0 * nf)).sqrt() / nf;
    norm * rho * special::assoc_laguerre(n - 1, 1.0, rho)
}

//! Target potentials: the built-in families the solver ships with plus a
//! custom-closure escape hatch, with derivative and closed-form helpers.
//!
//! Units fix hbar^2/2m = 1, so the Schrodinger operator is
//! -d^2/dx^2 + V(x) on the line or -d^2/dr^2 + V(r) on u(r) = r psi(r)
//! for radial s-waves.

use std::sync::Arc;

/// Coordinate domain of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Line,
    RadialHalfLine,
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PotentialKind {
    /// V(x) = -beta (beta + 1) sech^2 x, a reflectionless well on the line.
    PoschlTeller { beta: f64 },
    /// V(r) = -v0 e^{-r/r0} / (1 - e^{-r/r0}), a screened Coulomb well.
    Hulthen { v0: f64, r0: f64 },
    /// V(r) = r^{2/3} confining power law.
    PowerTwoThirds,
    /// Flat well of half-width l with quadratic walls, V(+-l) = 0.
    FlatBottom { half_width: f64 },
    /// V(x) = curvature (x - center)^2 + offset.
    HarmonicOscillator { curvature: f64, center: f64, offset: f64 },
    /// V(r) = -alpha / r.
    Coulomb { alpha: f64 },
    /// V(r) = slope r + intercept.
    LinearRadial { slope: f64, intercept: f64 },
    /// Caller-supplied evaluator.
    Custom { name: String, domain: Domain, eval: EvalFn },
}

/// An evaluable real potential with parameter metadata.
#[derive(Clone)]
pub struct Potential {
    pub kind: PotentialKind,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Potential({})", self.name())
    }
}

impl Potential {
    pub fn poschl_teller(beta: f64) -> Self {
        Potential { kind: PotentialKind::PoschlTeller { beta } }
    }

    pub fn hulthen(v0: f64, r0: f64) -> Self {
        Potential { kind: PotentialKind::Hulthen { v0, r0 } }
    }

    pub fn power_two_thirds() -> Self {
        Potential { kind: PotentialKind::PowerTwoThirds }
    }

    pub fn flat_bottom(half_width: f64) -> Self {
        Potential { kind: PotentialKind::FlatBottom { half_width } }
    }

    pub fn harmonic(curvature: f64, center: f64, offset: f64) -> Self {
        Potential { kind: PotentialKind::HarmonicOscillator { curvature, center, offset } }
    }

    pub fn coulomb(alpha: f64) -> Self {
        Potential { kind: PotentialKind::Coulomb { alpha } }
    }

    pub fn linear_radial(slope: f64, intercept: f64) -> Self {
        Potential { kind: PotentialKind::LinearRadial { slope, intercept } }
    }

    pub fn custom_line(name: &str, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential {
            kind: PotentialKind::Custom {
                name: name.to_string(),
                domain: Domain::Line,
                eval: Arc::new(eval),
            },
        }
    }

    pub fn custom_radial(name: &str, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential {
            kind: PotentialKind::Custom {
                name: name.to_string(),
                domain: Domain::RadialHalfLine,
                eval: Arc::new(eval),
            },
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.kind {
            PotentialKind::PoschlTeller { .. }
            | PotentialKind::FlatBottom { .. }
            | PotentialKind::HarmonicOscillator { .. } => Domain::Line,
            PotentialKind::Hulthen { .. }
            | PotentialKind::PowerTwoThirds
            | PotentialKind::Coulomb { .. }
            | PotentialKind::LinearRadial { .. } => Domain::RadialHalfLine,
            PotentialKind::Custom { domain, .. } => *domain,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            PotentialKind::PoschlTeller { .. } => "poschl-teller".into(),
            PotentialKind::Hulthen { .. } => "hulthen".into(),
            PotentialKind::PowerTwoThirds => "power23".into(),
            PotentialKind::FlatBottom { .. } => "flat-bottom".into(),
            PotentialKind::HarmonicOscillator { .. } => "oscillator".into(),
            PotentialKind::Coulomb { .. } => "coulomb".into(),
            PotentialKind::LinearRadial { .. } => "linear".into(),
            PotentialKind::Custom { name, .. } => name.clone(),
        }
    }

    /// Named parameters, for report headers.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.kind {
            PotentialKind::PoschlTeller { beta } => vec![("beta", *beta)],
            PotentialKind::Hulthen { v0, r0 } => vec![("v0", *v0), ("r0", *r0)],
            PotentialKind::PowerTwoThirds => vec![],
            PotentialKind::FlatBottom { half_width } => vec![("l", *half_width)],
            PotentialKind::HarmonicOscillator { curvature, center, offset } => {
                vec![("c", *curvature), ("x0", *center), ("voff", *offset)]
            }
            PotentialKind::Coulomb { alpha } => vec![("alpha", *alpha)],
            PotentialKind::LinearRadial { slope, intercept } => {
                vec![("k", *slope), ("b", *intercept)]
            }
            PotentialKind::Custom { .. } => vec![],
        }
    }

    /// Potential value; the coordinate must lie in the domain interior.
    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::PoschlTeller { beta } => {
                let sech = 1.0 / x.cosh();
                -beta * (beta + 1.0) * sech * sech
            }
            PotentialKind::Hulthen { v0, r0 } => -v0 / (x / r0).exp_m1(),
            PotentialKind::PowerTwoThirds => x.powf(2.0 / 3.0),
            PotentialKind::FlatBottom { half_width } => {
                let overhang = x.abs() - half_width;
                if overhang > 0.0 {
                    overhang * overhang
                } else {
                    0.0
                }
            }
            PotentialKind::HarmonicOscillator { curvature, center, offset } => {
                curvature * (x - center) * (x - center) + offset
            }
            PotentialKind::Coulomb { alpha } => -alpha / x,
            PotentialKind::LinearRadial { slope, intercept } => slope * x + intercept,
            PotentialKind::Custom { eval, .. } => eval(x),
        }
    }

    /// Second derivative of the potential at x: closed forms for the
    /// built-ins, a central five-point stencil otherwise.
    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::PoschlTeller { beta } => {
                let sech2 = 1.0 / x.cosh().powi(2);
                let tanh2 = x.tanh().powi(2);
                -beta * (beta + 1.0) * (4.0 * sech2 * tanh2 - 2.0 * sech2 * sech2)
            }
            PotentialKind::Hulthen { v0, r0 } => {
                let t = x / r0;
                let em = t.exp_m1();
                -v0 * t.exp() * (t.exp() + 1.0) / (em * em * em * r0 * r0)
            }
            PotentialKind::PowerTwoThirds => -2.0 / 9.0 * x.powf(-4.0 / 3.0),
            PotentialKind::FlatBottom { half_width } => {
                if x.abs() > *half_width {
                    2.0
                } else {
                    0.0
                }
            }
            PotentialKind::HarmonicOscillator { curvature, .. } => 2.0 * curvature,
            PotentialKind::Coulomb { alpha } => -2.0 * alpha / (x * x * x),
            PotentialKind::LinearRadial { .. } => 0.0,
            PotentialKind::Custom { .. } => {
                let h = 1e-4_f64.max(1e-4 * x.abs());
                (-self.evaluate(x - 2.0 * h) + 16.0 * self.evaluate(x - h)
                    - 30.0 * self.evaluate(x)
                    + 16.0 * self.evaluate(x + h)
                    - self.evaluate(x + 2.0 * h))
                    / (12.0 * h * h)
            }
        }
    }

    /// Characteristic length of the potential, used for default domains
    /// and root tolerances.
    pub fn length_scale(&self) -> f64 {
        match &self.kind {
            PotentialKind::Hulthen { r0, .. } => *r0,
            PotentialKind::FlatBottom { half_width } => half_width.max(1.0),
            PotentialKind::HarmonicOscillator { curvature, .. } => curvature.powf(-0.25).max(1.0),
            _ => 1.0,
        }
    }

    /// Location and value of the potential minimum, for line potentials.
    pub fn find_minimum(&self) -> (f64, f64) {
        match &self.kind {
            PotentialKind::PoschlTeller { beta } => (0.0, -beta * (beta + 1.0)),
            PotentialKind::FlatBottom { .. } => (0.0, 0.0),
            PotentialKind::HarmonicOscillator { center, offset, .. } => (*center, *offset),
            _ => {
                // coarse scan then golden-section refinement
                let scale = self.length_scale();
                let (mut a, b) = match self.domain() {
                    Domain::Line => (-12.0_f64.max(6.0 * scale), 12.0_f64.max(6.0 * scale)),
                    Domain::RadialHalfLine => (1e-6 * scale, 40.0 * scale),
                };
                if a >= b {
                    a = -b;
                }
                let npts = 4096;
                let mut best = a;
                let mut best_v = f64::INFINITY;
                for i in 0..=npts {
                    let x = a + (b - a) * i as f64 / npts as f64;
                    let v = self.evaluate(x);
                    if v < best_v {
                        best_v = v;
                        best = x;
                    }
                }
                let h = (b - a) / npts as f64;
                let (mut lo, mut hi) = (best - h, best + h);
                let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
                for _ in 0..200 {
                    if hi - lo < 1e-12 * scale {
                        break;
                    }
                    let c = hi - phi * (hi - lo);
                    let d = lo + phi * (hi - lo);
                    if self.evaluate(c) < self.evaluate(d) {
                        hi = d;
                    } else {
                        lo = c;
                    }
                }
                let x = 0.5 * (lo + hi);
                (x, self.evaluate(x))
            }
        }
    }

    /// Closed-form bound-state energy of level n where one exists.
    ///
    /// Index conventions follow the family: the oscillator counts from
    /// n = 0, the radial families from n = 1.
    pub fn closed_form_level(&self, n: usize) -> Option<f64> {
        match &self.kind {
            PotentialKind::PoschlTeller { beta } => {
                let nf = n as f64;
                if nf < *beta {
                    Some(-(beta - nf) * (beta - nf))
                } else {
                    None
                }
            }
            PotentialKind::Hulthen { v0, r0 } => {
                let beta_sq = v0 * r0 * r0;
                let nf = n as f64;
                if n >= 1 && beta_sq > nf * nf {
                    let num = beta_sq - nf * nf;
                    Some(-v0 * (num / (2.0 * beta_sq.sqrt() * nf)).powi(2))
                } else {
                    None
                }
            }
            PotentialKind::HarmonicOscillator { curvature, offset, .. } => {
                Some(curvature.sqrt() * (2.0 * n as f64 + 1.0) + offset)
            }
            PotentialKind::Coulomb { alpha } => {
                if n >= 1 {
                    Some(-alpha * alpha / (4.0 * (n * n) as f64))
                } else {
                    None
                }
            }
            PotentialKind::LinearRadial { slope, intercept } => {
                if n >= 1 {
                    Some(slope.powf(2.0 / 3.0) * crate::special::airy_zero_refined(n) + intercept)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Effective bound-state parameter beta with beta^2 = V0 r0^2; finite
    /// only for potentials with a finite discrete spectrum attached to a
    /// Coulomb-like origin.
    pub fn bound_state_beta(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Hulthen { v0, r0 } => Some((v0 * r0 * r0).sqrt()),
            _ => None,
        }
    }

    /// Closed-form Coulomb strength alpha = -lim r V(r), when known.
    pub fn coulomb_strength(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Hulthen { v0, r0 } => Some(v0 * r0),
            PotentialKind::Coulomb { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

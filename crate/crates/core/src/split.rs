//! Splitting a target Hamiltonian H = H0 + Delta into a solvable part
//! and a bounded remainder.
//!
//! Each constructor picks the solvable basis by a different rule:
//! local curvature at an energy contour, the Coulomb tail at the
//! origin, a least-squares fit over a window, or an explicit choice.
//! The remainder Delta(x) = V(x) - U(x) is what the perturbation
//! expansion feeds on.

use crate::basis::ExactBasis;
use crate::potential::{Domain, Potential, PotentialKind};
use crate::{Error, Result};

/// Which side of the potential minimum to place the expansion point on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn label(self) -> &'static str {
        match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        }
    }
}

/// Fit model used by `fit_auxiliary`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitFamily {
    /// y = k x + b, mapped to the linear radial basis.
    Linear,
    /// y = c x^2 + b about the origin, mapped to the oscillator basis.
    Quadratic,
}

/// How the auxiliary problem was chosen; echoed into report headers.
#[derive(Debug, Clone)]
pub enum Provenance {
    Taylor { x_e: f64, energy: f64 },
    Laurent { alpha: f64 },
    Fit { family: FitFamily, range: (f64, f64), npts: usize },
    Explicit,
    Identity,
}

impl Provenance {
    pub fn describe(&self) -> String {
        match self {
            Provenance::Taylor { x_e, energy } => format!("taylor x_e={x_e:.6} e={energy:.6}"),
            Provenance::Laurent { alpha } => format!("laurent alpha={alpha:.6}"),
            Provenance::Fit { family, range, npts } => {
                let name = match family {
                    FitFamily::Linear => "linear",
                    FitFamily::Quadratic => "quadratic",
                };
                format!("fit {name} on [{:.6}, {:.6}] with {npts} samples", range.0, range.1)
            }
            Provenance::Explicit => "explicit".into(),
            Provenance::Identity => "identity".into(),
        }
    }
}

#[derive(Debug, Clone)]
enum DeltaForm {
    /// Delta(x) = V(x) - U(x) evaluated directly.
    Difference,
    /// Delta is identically zero.
    Zero,
    /// Screened-Coulomb remainder V0 (1/2 - t/12 + t^3/720 - ...) with
    /// t = r/r0, evaluated in closed form away from the origin.
    ScreenedCoulomb { v0: f64, r0: f64 },
}

/// A target potential paired with its solvable auxiliary.
#[derive(Debug, Clone)]
pub struct AuxiliarySplit {
    pub target: Potential,
    pub basis: ExactBasis,
    pub provenance: Provenance,
    delta_form: DeltaForm,
}

impl AuxiliarySplit {
    /// The auxiliary potential U.
    pub fn auxiliary(&self, x: f64) -> f64 {
        self.basis.implied_potential().evaluate(x)
    }

    /// The remainder Delta(x) = V(x) - U(x).
    pub fn delta(&self, x: f64) -> f64 {
        match &self.delta_form {
            DeltaForm::Zero => 0.0,
            DeltaForm::Difference => self.target.evaluate(x) - self.auxiliary(x),
            DeltaForm::ScreenedCoulomb { v0, r0 } => {
                let t = x / r0;
                if t < 1e-3 {
                    v0 * (0.5 - t / 12.0 + t * t * t / 720.0)
                } else {
                    -v0 / t.exp_m1() + v0 / t
                }
            }
        }
    }

    /// Switch the linear radial basis to Newton-refined Airy zeros.
    /// No effect on the other families.
    pub fn with_refined_zeros(mut self) -> Self {
        if let ExactBasis::LinearRadial { refine_zeros, .. } = &mut self.basis {
            *refine_zeros = true;
        }
        self
    }
}

/// Expand the target to second order about the point x_E on the given
/// side of the minimum where V(x_E) = e, and take the tangent parabola
/// centered at the origin as the auxiliary:
/// U(x) = (V''(x_E)/2) x^2 + V(x_E).
pub fn taylor_auxiliary(v: &Potential, e: f64, side: Side) -> Result<AuxiliarySplit> {
    let scale = v.length_scale();
    let (xmin, vmin) = v.find_minimum();
    let x_e = if (e - vmin).abs() <= 1e-12 * e.abs().max(1.0) {
        xmin
    } else if e < vmin {
        return Err(Error::RootNotFound { energy: e, side: side.label() });
    } else {
        let dir = match side {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        };
        let radial = v.domain() == Domain::RadialHalfLine;
        let mut lo = xmin;
        let mut step = 0.1 * scale;
        let mut hi = None;
        for _ in 0..60 {
            let mut x = xmin + dir * step;
            if radial && x <= 0.0 {
                // walk toward the origin geometrically instead
                x = lo * 0.5;
                if x <= f64::MIN_POSITIVE {
                    break;
                }
            }
            if v.evaluate(x) >= e {
                hi = Some(x);
                break;
            }
            lo = x;
            step *= 2.0;
        }
        let mut hi = hi.ok_or(Error::RootNotFound { energy: e, side: side.label() })?;
        let mut lo = lo;
        for _ in 0..200 {
            if (hi - lo).abs() <= 1e-15 * (1.0 + hi.abs()) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if v.evaluate(mid) >= e {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let half_curvature = 0.5 * v.second_derivative(x_e);
    if !(half_curvature > 0.0) {
        return Err(Error::NonConfiningAuxiliary { curvature: half_curvature, x_e });
    }
    let offset = v.evaluate(x_e);
    let basis = ExactBasis::oscillator(half_curvature, 0.0, offset)?;
    Ok(AuxiliarySplit {
        target: v.clone(),
        basis,
        provenance: Provenance::Taylor { x_e, energy: e },
        delta_form: DeltaForm::Difference,
    })
}

/// Match the Coulomb tail at the origin: alpha = -lim_{r->0} r V(r),
/// taken in closed form when the family provides it and by Richardson
/// extrapolation of sampled values otherwise.
pub fn laurent_auxiliary(v: &Potential) -> Result<AuxiliarySplit> {
    if v.domain() != Domain::RadialHalfLine {
        return Err(Error::Domain("coulomb tail matching needs a radial potential".into()));
    }
    let alpha = match v.coulomb_strength() {
        Some(a) => a,
        None => extrapolated_strength(v)?,
    };
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::NotCoulombLike { limit: alpha });
    }
    let basis = ExactBasis::coulomb(alpha)?;
    let delta_form = match &v.kind {
        PotentialKind::Coulomb { .. } => DeltaForm::Zero,
        PotentialKind::Hulthen { v0, r0 } => DeltaForm::ScreenedCoulomb { v0: *v0, r0: *r0 },
        _ => DeltaForm::Difference,
    };
    Ok(AuxiliarySplit {
        target: v.clone(),
        basis,
        provenance: Provenance::Laurent { alpha },
        delta_form,
    })
}

/// Limit of -r V(r) as r -> 0 by repeated halving with Richardson
/// acceleration, assuming an error expansion in powers of r.
fn extrapolated_strength(v: &Potential) -> Result<f64> {
    let scale = v.length_scale();
    let depth: usize = 18;
    let mut tableau: Vec<f64> = (0..depth)
        .map(|j| {
            let r = scale * 0.25 * 0.5_f64.powi(j as i32);
            -r * v.evaluate(r)
        })
        .collect();
    if tableau.iter().any(|t| !t.is_finite()) {
        return Err(Error::NotCoulombLike { limit: f64::NAN });
    }
    let sample_span = tableau.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    // accept the diagonal entry whose distance to its predecessor is
    // smallest; past the optimal column the entries only pick up noise
    let mut previous = tableau[0];
    let mut best = tableau[depth - 1];
    let mut best_step = f64::INFINITY;
    for k in 1..depth {
        let factor = 2.0_f64.powi(k as i32);
        for j in 0..depth - k {
            tableau[j] = (factor * tableau[j + 1] - tableau[j]) / (factor - 1.0);
        }
        let step = (tableau[0] - previous).abs();
        if step < best_step {
            best_step = step;
            best = tableau[0];
        }
        previous = tableau[0];
    }
    // a limit far below the sampled magnitudes means the tail vanishes
    if best.abs() <= 1e-6 * sample_span.max(f64::MIN_POSITIVE) {
        return Err(Error::NotCoulombLike { limit: best });
    }
    Ok(best)
}

/// Least-squares auxiliary over a sample window: a straight line for
/// the linear radial basis or a centered parabola for the oscillator.
pub fn fit_auxiliary(
    v: &Potential,
    family: FitFamily,
    range: (f64, f64),
    npts: usize,
) -> Result<AuxiliarySplit> {
    let (a, b) = range;
    if !(a < b) {
        return Err(Error::Domain(format!("fit range [{a}, {b}] is empty")));
    }
    if npts < 2 {
        return Err(Error::FitFailure(format!("need at least two samples, got {npts}")));
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let nf = npts as f64;
    for i in 0..npts {
        let x = a + (b - a) * i as f64 / (nf - 1.0);
        let feature = match family {
            FitFamily::Linear => x,
            FitFamily::Quadratic => x * x,
        };
        let y = v.evaluate(x);
        sx += feature;
        sy += y;
        sxx += feature * feature;
        sxy += feature * y;
    }
    let var = sxx - sx * sx / nf;
    if var.abs() <= 1e-14 * sxx.abs().max(1.0) {
        return Err(Error::FitFailure("degenerate sample window".into()));
    }
    let slope = (sxy - sx * sy / nf) / var;
    let intercept = (sy - slope * sx) / nf;
    let basis = match family {
        FitFamily::Linear => {
            if !(slope > 0.0) {
                return Err(Error::FitFailure(format!(
                    "fitted slope {slope} is not positive"
                )));
            }
            ExactBasis::linear(slope, intercept, false)?
        }
        FitFamily::Quadratic => {
            if !(slope > 0.0) {
                return Err(Error::FitFailure(format!(
                    "fitted curvature {slope} is not positive"
                )));
            }
            ExactBasis::oscillator(slope, 0.0, intercept)?
        }
    };
    Ok(AuxiliarySplit {
        target: v.clone(),
        basis,
        provenance: Provenance::Fit { family, range, npts },
        delta_form: DeltaForm::Difference,
    })
}

/// Pair the target with a caller-chosen auxiliary basis.
pub fn explicit_auxiliary(v: &Potential, basis: ExactBasis) -> AuxiliarySplit {
    AuxiliarySplit {
        target: v.clone(),
        basis,
        provenance: Provenance::Explicit,
        delta_form: DeltaForm::Difference,
    }
}

/// Split a solvable problem against itself; the remainder vanishes
/// identically.
pub fn identity_split(basis: ExactBasis) -> AuxiliarySplit {
    AuxiliarySplit {
        target: basis.implied_potential(),
        basis,
        provenance: Provenance::Identity,
        delta_form: DeltaForm::Zero,
    }
}

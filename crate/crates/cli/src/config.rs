//! Resolving a job description from flags, an optional flat config
//! file, and the documented defaults.
//!
//! Precedence is flags over file over defaults. The file format is one
//! `key=value` per line with `#` starting a comment; keys mirror the
//! long flag names.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use eigenpade::basis::ExactBasis;
use eigenpade::oracle::GridSpec;
use eigenpade::potential::{Domain, Potential};
use eigenpade::solver::PipelineConfig;
use eigenpade::split::{
    explicit_auxiliary, fit_auxiliary, identity_split, laurent_auxiliary, taylor_auxiliary,
    AuxiliarySplit, FitFamily, Side,
};

use crate::{CliError, JobArgs};

/// Keys a config file may contain; anything else is treated as a typo.
const KNOWN_KEYS: &[&str] = &[
    "potential",
    "params",
    "aux",
    "levels",
    "order",
    "pade",
    "dim",
    "accuracy",
    "out",
    "jobs",
    "refine_zeros",
    "grid",
    "energies",
    "xe",
    "ranges",
    "level",
    "count",
];

/// Where the Taylor construction gets its expansion energy.
#[derive(Debug, Clone, Copy)]
pub enum EnergySpec {
    /// Use the potential minimum, the natural ground-state choice.
    Minimum,
    /// Use the given energy; the expansion point is where V crosses it.
    Value(f64),
}

/// An exactly solvable basis spelled out by its parameters.
#[derive(Debug, Clone, Copy)]
pub enum BasisSpec {
    Oscillator { curvature: f64, center: f64, offset: f64 },
    Coulomb { alpha: f64 },
    Linear { slope: f64, intercept: f64 },
}

impl BasisSpec {
    pub fn build(&self, refine_zeros: bool) -> Result<ExactBasis, CliError> {
        Ok(match *self {
            BasisSpec::Oscillator { curvature, center, offset } => {
                ExactBasis::oscillator(curvature, center, offset)?
            }
            BasisSpec::Coulomb { alpha } => ExactBasis::coulomb(alpha)?,
            BasisSpec::Linear { slope, intercept } => {
                ExactBasis::linear(slope, intercept, refine_zeros)?
            }
        })
    }
}

/// How the auxiliary problem is to be built.
#[derive(Debug, Clone)]
pub enum AuxSpec {
    Taylor { energy: EnergySpec, side: Side },
    Laurent,
    Fit { family: FitFamily, range: (f64, f64), npts: usize },
    Explicit(BasisSpec),
    Identity(BasisSpec),
}

/// One fully resolved job.
#[derive(Clone)]
pub struct JobConfig {
    pub potential: Potential,
    pub aux: AuxSpec,
    /// Requested levels; None means the first level of the basis.
    pub levels: Option<Vec<usize>>,
    pub order: usize,
    /// Continuation degrees for the wavefunction command; the energy
    /// ladder always walks the near-diagonal sequence.
    pub pade: Option<(usize, usize)>,
    pub dim: usize,
    pub accuracy: f64,
    pub out: Option<PathBuf>,
    /// Sweep worker bound; 0 lets the pool pick.
    pub jobs: usize,
    pub refine_zeros: bool,
    pub grid: Option<GridSpec>,
    /// Config-file entries consumed by individual commands (sweep
    /// points, wavefunction level, oracle count).
    pub extras: BTreeMap<String, String>,
}

impl JobConfig {
    /// Construct the auxiliary split this job describes.
    pub fn build_split(&self) -> Result<AuxiliarySplit, CliError> {
        let split = match &self.aux {
            AuxSpec::Taylor { energy, side } => {
                let e = match energy {
                    EnergySpec::Minimum => self.potential.find_minimum().1,
                    EnergySpec::Value(v) => *v,
                };
                taylor_auxiliary(&self.potential, e, *side)?
            }
            AuxSpec::Laurent => laurent_auxiliary(&self.potential)?,
            AuxSpec::Fit { family, range, npts } => {
                fit_auxiliary(&self.potential, *family, *range, *npts)?
            }
            AuxSpec::Explicit(basis) => {
                explicit_auxiliary(&self.potential, basis.build(self.refine_zeros)?)
            }
            AuxSpec::Identity(basis) => identity_split(basis.build(self.refine_zeros)?),
        };
        Ok(if self.refine_zeros { split.with_refined_zeros() } else { split })
    }

    /// Pipeline knobs with the level default filled in from the basis.
    pub fn pipeline_for(&self, split: &AuxiliarySplit) -> PipelineConfig {
        let levels = self
            .levels
            .clone()
            .unwrap_or_else(|| vec![split.basis.index_origin()]);
        PipelineConfig {
            levels,
            order: self.order,
            dim: self.dim,
            accuracy: self.accuracy,
        }
    }

    /// The grid for oracle references, defaulted from the potential.
    pub fn grid_for_potential(&self) -> GridSpec {
        self.grid
            .unwrap_or_else(|| GridSpec::default_for(&self.potential))
    }

    /// Deterministic one-line echo of the potential and its parameters.
    pub fn potential_echo(&self) -> String {
        let mut echo = self.potential.name();
        for (key, value) in self.potential.params() {
            echo.push_str(&format!(" {key}={value}"));
        }
        echo
    }
}

/// The sweep axis: one auxiliary construction per point.
#[derive(Debug, Clone)]
pub enum SweepPoints {
    /// Taylor expansion energies.
    Energies(Vec<f64>),
    /// Taylor expansion points x_E, mapped to energies V(x_E); the sign
    /// of x_E picks the root side.
    ExpansionPoints(Vec<f64>),
    /// Fit windows (a, b); family and sample count come from the base
    /// auxiliary when it is a fit, otherwise linear with 4001 samples.
    Ranges(Vec<(f64, f64)>),
}

impl SweepPoints {
    pub fn len(&self) -> usize {
        match self {
            SweepPoints::Energies(v) | SweepPoints::ExpansionPoints(v) => v.len(),
            SweepPoints::Ranges(v) => v.len(),
        }
    }

    /// Column names for the sweep key.
    pub fn key_header(&self) -> &'static [&'static str] {
        match self {
            SweepPoints::Energies(_) => &["e_aux"],
            SweepPoints::ExpansionPoints(_) => &["x_e"],
            SweepPoints::Ranges(_) => &["fit_lo", "fit_hi"],
        }
    }

    /// Numeric sort key of one point.
    pub fn key_values(&self, i: usize) -> Vec<f64> {
        match self {
            SweepPoints::Energies(v) | SweepPoints::ExpansionPoints(v) => vec![v[i]],
            SweepPoints::Ranges(v) => vec![v[i].0, v[i].1],
        }
    }

    /// Human label of one point, for failure reports.
    pub fn label(&self, i: usize) -> String {
        match self {
            SweepPoints::Energies(v) => format!("e_aux={}", v[i]),
            SweepPoints::ExpansionPoints(v) => format!("x_e={}", v[i]),
            SweepPoints::Ranges(v) => format!("range=({}, {})", v[i].0, v[i].1),
        }
    }

    /// Short echo of the whole axis for CSV comments.
    pub fn describe(&self) -> String {
        match self {
            SweepPoints::Energies(v) => format!("sweep e_aux over {v:?}"),
            SweepPoints::ExpansionPoints(v) => format!("sweep x_e over {v:?}"),
            SweepPoints::Ranges(v) => format!("sweep fit range over {v:?}"),
        }
    }

    /// The job for one sweep point: the base config with its auxiliary
    /// replaced.
    pub fn job_for(&self, base: &JobConfig, i: usize) -> JobConfig {
        let mut job = base.clone();
        job.aux = match self {
            SweepPoints::Energies(v) => AuxSpec::Taylor {
                energy: EnergySpec::Value(v[i]),
                side: Side::Positive,
            },
            SweepPoints::ExpansionPoints(v) => {
                let x = v[i];
                AuxSpec::Taylor {
                    energy: EnergySpec::Value(base.potential.evaluate(x)),
                    side: if x < 0.0 { Side::Negative } else { Side::Positive },
                }
            }
            SweepPoints::Ranges(v) => {
                let (family, npts) = match &base.aux {
                    AuxSpec::Fit { family, npts, .. } => (*family, *npts),
                    _ => (FitFamily::Linear, 4001),
                };
                AuxSpec::Fit { family, range: v[i], npts }
            }
        };
        job
    }
}

/// Merge flags with the optional config file and fill defaults.
pub fn resolve(args: &JobArgs) -> Result<JobConfig, CliError> {
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let take_string = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };

    let potential_id = take_string(&args.potential, "potential")
        .ok_or_else(|| CliError::Config("pick a target with --potential".into()))?;
    let params = take_string(&args.params, "params").unwrap_or_default();
    let potential = parse_potential(&potential_id, &params)?;

    let aux = match take_string(&args.aux, "aux") {
        Some(spec) => parse_aux(&spec)?,
        None => default_aux(&potential)?,
    };

    let levels = match take_string(&args.levels, "levels") {
        Some(list) => Some(parse_levels(&list)?),
        None => None,
    };

    let order = match args.order {
        Some(n) => n,
        None => file_value(&file, "order")?.unwrap_or(16),
    };
    let dim = match args.dim {
        Some(n) => n,
        None => file_value(&file, "dim")?.unwrap_or(48),
    };
    let accuracy = match args.accuracy {
        Some(a) => a,
        None => file_value(&file, "accuracy")?.unwrap_or(1e-10),
    };
    let jobs = match args.jobs {
        Some(n) => n,
        None => file_value(&file, "jobs")?.unwrap_or(0),
    };

    let pade = match &args.pade {
        Some(pair) => Some((pair[0], pair[1])),
        None => match file.get("pade") {
            Some(text) => Some(parse_pade(text)?),
            None => None,
        },
    };
    if let Some((l, m)) = pade {
        if l + m > order {
            return Err(CliError::Config(format!(
                "pade degrees [{l}/{m}] need a series of order {}, but the expansion order is {order}",
                l + m
            )));
        }
    }

    let out = args
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from));

    let refine_zeros = args.refine_zeros
        || match file.get("refine_zeros") {
            Some(text) => parse_bool(text)?,
            None => false,
        };

    let grid = match take_string(&args.grid, "grid") {
        Some(text) => Some(parse_grid(&text)?),
        None => None,
    };

    let mut extras = BTreeMap::new();
    for key in ["energies", "xe", "ranges", "level", "count"] {
        if let Some(value) = file.get(key) {
            extras.insert(key.to_string(), value.clone());
        }
    }

    Ok(JobConfig {
        potential,
        aux,
        levels,
        order,
        pade,
        dim,
        accuracy,
        out,
        jobs,
        refine_zeros,
        grid,
        extras,
    })
}

/// Pick the sweep axis from flags or the config file; exactly one of
/// the three spellings must be present.
pub fn resolve_sweep_points(
    job: &JobConfig,
    energies: Option<String>,
    xe: Option<String>,
    ranges: Option<String>,
) -> Result<SweepPoints, CliError> {
    let energies = energies.or_else(|| job.extras.get("energies").cloned());
    let xe = xe.or_else(|| job.extras.get("xe").cloned());
    let ranges = ranges.or_else(|| job.extras.get("ranges").cloned());
    let given = [energies.is_some(), xe.is_some(), ranges.is_some()]
        .iter()
        .filter(|&&g| g)
        .count();
    if given != 1 {
        return Err(CliError::Config(
            "a sweep needs exactly one of --energies, --xe, or --ranges".into(),
        ));
    }
    let points = if let Some(list) = energies {
        SweepPoints::Energies(parse_f64_list(&list)?)
    } else if let Some(list) = xe {
        SweepPoints::ExpansionPoints(parse_f64_list(&list)?)
    } else {
        SweepPoints::Ranges(parse_range_list(&ranges.unwrap())?)
    };
    if points.len() == 0 {
        return Err(CliError::Config("the sweep list is empty".into()));
    }
    Ok(points)
}

/// Read a flat key=value file, rejecting unknown keys.
fn read_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(CliError::Config(format!(
                "config line {} is not key=value: {line:?}",
                lineno + 1
            )));
        };
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!(
                "unknown config key {key:?} on line {}",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn file_value<T: std::str::FromStr>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    match file.get(key) {
        Some(text) => text.parse::<T>().map(Some).map_err(|_| {
            CliError::Config(format!("config key {key} has unusable value {text:?}"))
        }),
        None => Ok(None),
    }
}

fn parse_bool(text: &str) -> Result<bool, CliError> {
    match text {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Config(format!("expected a boolean, got {other:?}"))),
    }
}

fn parse_f64(text: &str, what: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{what} must be a number, got {text:?}")))
}

fn parse_usize(text: &str, what: &str) -> Result<usize, CliError> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| CliError::Config(format!("{what} must be a nonnegative integer, got {text:?}")))
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|piece| parse_f64(piece, "list entry"))
        .collect()
}

fn parse_range_list(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|piece| {
            let Some((a, b)) = piece.split_once(':') else {
                return Err(CliError::Config(format!(
                    "fit range must be a:b, got {piece:?}"
                )));
            };
            Ok((parse_f64(a, "range start")?, parse_f64(b, "range end")?))
        })
        .collect()
}

/// Comma-separated level indices, with a..b allowed for inclusive runs.
pub fn parse_levels(text: &str) -> Result<Vec<usize>, CliError> {
    let mut levels = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if let Some((lo, hi)) = piece.split_once("..") {
            let lo = parse_usize(lo, "level range start")?;
            let hi = parse_usize(hi, "level range end")?;
            if hi < lo {
                return Err(CliError::Config(format!("empty level range {piece:?}")));
            }
            levels.extend(lo..=hi);
        } else {
            levels.push(parse_usize(piece, "level")?);
        }
    }
    Ok(levels)
}

fn parse_pade(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "pade wants two degrees L M, got {text:?}"
        )));
    }
    Ok((
        parse_usize(parts[0], "numerator degree")?,
        parse_usize(parts[1], "denominator degree")?,
    ))
}

/// A grid spelled a:b:npts.
pub fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "grid wants a:b:npts, got {text:?}"
        )));
    }
    Ok(GridSpec {
        a: parse_f64(parts[0], "grid start")?,
        b: parse_f64(parts[1], "grid end")?,
        npts: parse_usize(parts[2], "grid point count")?,
    })
}

/// Parameter pairs like beta=20,v0=2.
fn parse_params(text: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let Some((key, value)) = piece.split_once('=') else {
            return Err(CliError::Config(format!(
                "parameter must be key=value, got {piece:?}"
            )));
        };
        map.insert(key.trim().to_string(), parse_f64(value, key.trim())?);
    }
    Ok(map)
}

/// Build a potential from its id and parameter pairs. Parameters not
/// listed fall back to the worked-example values documented in the
/// help text; unknown names are rejected.
pub fn parse_potential(id: &str, params: &str) -> Result<Potential, CliError> {
    let mut given = parse_params(params)?;
    let mut fetch = |key: &str, default: Option<f64>| -> Result<f64, CliError> {
        match given.remove(key) {
            Some(v) => Ok(v),
            None => default.ok_or_else(|| {
                CliError::Config(format!("potential {id} needs parameter {key}"))
            }),
        }
    };
    let potential = match id {
        "poschl-teller" => Potential::poschl_teller(fetch("beta", Some(20.0))?),
        "hulthen" => Potential::hulthen(fetch("v0", Some(2.0))?, fetch("r0", Some(3.0))?),
        "power23" => Potential::power_two_thirds(),
        "flat-bottom" => Potential::flat_bottom(fetch("l", Some(1.0))?),
        "oscillator" => Potential::harmonic(
            fetch("c", Some(1.0))?,
            fetch("x0", Some(0.0))?,
            fetch("voff", Some(0.0))?,
        ),
        "coulomb" => Potential::coulomb(fetch("alpha", Some(6.0))?),
        "linear" => Potential::linear_radial(fetch("k", None)?, fetch("b", None)?),
        other => {
            return Err(CliError::Config(format!(
                "unknown potential {other:?}; choices are poschl-teller, hulthen, \
                 power23, flat-bottom, oscillator, coulomb, linear"
            )))
        }
    };
    if let Some(stray) = given.keys().next() {
        return Err(CliError::Config(format!(
            "potential {id} has no parameter {stray:?}"
        )));
    }
    Ok(potential)
}

/// Auxiliary scheme grammar:
/// taylor:E[:positive|negative] with E a number or "min", laurent,
/// fit:linear|quadratic:a:b[:npts], explicit:FAMILY:PARAMS, and
/// identity:FAMILY:PARAMS with FAMILY:PARAMS one of
/// oscillator:c:x0:voff, coulomb:alpha, linear:k:b.
pub fn parse_aux(text: &str) -> Result<AuxSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let wrong = || CliError::Config(format!("unusable auxiliary spec {text:?}"));
    match parts[0] {
        "taylor" => {
            if parts.len() < 2 || parts.len() > 3 {
                return Err(wrong());
            }
            let energy = if parts[1] == "min" {
                EnergySpec::Minimum
            } else {
                EnergySpec::Value(parse_f64(parts[1], "expansion energy")?)
            };
            let side = match parts.get(2) {
                None | Some(&"positive") => Side::Positive,
                Some(&"negative") => Side::Negative,
                Some(_) => return Err(wrong()),
            };
            Ok(AuxSpec::Taylor { energy, side })
        }
        "laurent" => {
            if parts.len() != 1 {
                return Err(wrong());
            }
            Ok(AuxSpec::Laurent)
        }
        "fit" => {
            if parts.len() < 4 || parts.len() > 5 {
                return Err(wrong());
            }
            let family = match parts[1] {
                "linear" => FitFamily::Linear,
                "quadratic" => FitFamily::Quadratic,
                _ => return Err(wrong()),
            };
            let range = (
                parse_f64(parts[2], "fit range start")?,
                parse_f64(parts[3], "fit range end")?,
            );
            let npts = match parts.get(4) {
                Some(n) => parse_usize(n, "fit sample count")?,
                None => 4001,
            };
            Ok(AuxSpec::Fit { family, range, npts })
        }
        "explicit" | "identity" => {
            let basis = parse_basis_spec(&parts[1..]).ok_or_else(wrong)?;
            if parts[0] == "explicit" {
                Ok(AuxSpec::Explicit(basis))
            } else {
                Ok(AuxSpec::Identity(basis))
            }
        }
        _ => Err(wrong()),
    }
}

fn parse_basis_spec(parts: &[&str]) -> Option<BasisSpec> {
    let num = |s: &str| s.trim().parse::<f64>().ok();
    match parts {
        ["oscillator", c, x0, voff] => Some(BasisSpec::Oscillator {
            curvature: num(c)?,
            center: num(x0)?,
            offset: num(voff)?,
        }),
        ["coulomb", alpha] => Some(BasisSpec::Coulomb { alpha: num(alpha)? }),
        ["linear", k, b] => Some(BasisSpec::Linear {
            slope: num(k)?,
            intercept: num(b)?,
        }),
        _ => None,
    }
}

/// The scheme used when --aux is absent: expand line potentials about
/// their minimum, attach the Coulomb tail for screened radial ones.
fn default_aux(potential: &Potential) -> Result<AuxSpec, CliError> {
    match potential.domain() {
        Domain::Line => Ok(AuxSpec::Taylor {
            energy: EnergySpec::Minimum,
            side: Side::Positive,
        }),
        Domain::RadialHalfLine => {
            if potential.coulomb_strength().is_some() {
                Ok(AuxSpec::Laurent)
            } else {
                Err(CliError::Config(format!(
                    "no default auxiliary for {}; pass --aux, for example fit:linear:0:20",
                    potential.name()
                )))
            }
        }
    }
}

//! The five commands. Each one computes its table, writes one CSV with
//! a deterministic comment header, drops a gnuplot script next to it,
//! and prints a short report.

use std::fs;
use std::path::{Path, PathBuf};

use eigenpade::csv::{format_float, gnuplot_script, PlotSeries, Table};
use eigenpade::oracle::{grid_eigensolve, richardson_refine};
use eigenpade::pade::{continue_state, pade_from_series};
use eigenpade::potential::Domain;
use eigenpade::solver::{solve_levels, PipelineConfig, SolveReport};
use eigenpade::split::AuxiliarySplit;
use rayon::prelude::*;

use crate::config::{JobConfig, SweepPoints};
use crate::CliError;

/// Version stamp shared by every CSV comment line.
fn version_echo() -> String {
    format!("eigenpade {} (core {})", env!("CARGO_PKG_VERSION"), eigenpade::VERSION)
}

/// Write the rendered table, then a gnuplot script beside it.
fn write_outputs(
    out: &Path,
    table: &Table,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[PlotSeries],
) -> Result<PathBuf, CliError> {
    write_atomic(out, &table.render())?;
    let name = out
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Config(format!("unusable output path {}", out.display())))?;
    let script = gnuplot_script(name, title, xlabel, ylabel, series);
    let script_path = out.with_extension("gp");
    fs::write(&script_path, script)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", script_path.display())))?;
    Ok(script_path)
}

/// Write through a sibling temp file and rename into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::Config(format!("cannot move output into {}: {e}", path.display())))
}

/// Tabulate sqrt(1+x) against its quartic series and the [2/2]
/// continuation of that series, x from 0 to 10 in steps of 0.05.
pub fn demo_sqrt(out: Option<PathBuf>) -> Result<(), CliError> {
    let coeffs = [1.0, 0.5, -0.125, 0.0625, -5.0 / 128.0];
    let approximant = pade_from_series(&coeffs, 2, 2)?;
    let comment = format!(
        "{}; sqrt(1+x) demo, quartic series against its [2/2] continuation, \
         x in [0, 10] step 0.05",
        version_echo()
    );
    let mut table = Table::new(comment, &["x", "exact", "polynomial", "rational"]);
    for i in 0..=200 {
        let x = i as f64 * 0.05;
        let exact = (1.0 + x).sqrt();
        let poly = coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        let rational = approximant.eval(x)?;
        table.push_row(vec![
            format_float(x),
            format_float(exact),
            format_float(poly),
            format_float(rational),
        ]);
    }
    let out = out.unwrap_or_else(|| PathBuf::from("demo_sqrt.csv"));
    let series = [
        PlotSeries { x_col: 0, y_col: 1, label: "exact".into() },
        PlotSeries { x_col: 0, y_col: 2, label: "polynomial".into() },
        PlotSeries { x_col: 0, y_col: 3, label: "rational".into() },
    ];
    let script = write_outputs(&out, &table, "sqrt(1+x) approximations", "x", "f(x)", &series)?;
    println!("wrote {} and {}", out.display(), script.display());
    Ok(())
}

/// One solved job with everything the reports need.
pub struct SolvedJob {
    pub split: AuxiliarySplit,
    pub pipeline: PipelineConfig,
    pub report: SolveReport,
    pub references: Vec<f64>,
}

/// Run the pipeline and attach the per-level reference energies.
pub fn run_pipeline(job: &JobConfig) -> Result<SolvedJob, CliError> {
    let split = job.build_split()?;
    let pipeline = job.pipeline_for(&split);
    let report = solve_levels(&split, &pipeline)?;
    let references = reference_levels(job, &pipeline.levels, split.basis.index_origin())?;
    Ok(SolvedJob { split, pipeline, report, references })
}

/// Closed-form level energies where the potential has them, grid oracle
/// values otherwise.
fn reference_levels(
    job: &JobConfig,
    levels: &[usize],
    origin: usize,
) -> Result<Vec<f64>, CliError> {
    let mut out: Vec<Option<f64>> = levels
        .iter()
        .map(|&n| job.potential.closed_form_level(n))
        .collect();
    if out.iter().any(Option::is_none) {
        let spec = job.grid_for_potential();
        let needed = levels.iter().map(|&n| n + 1 - origin).max().unwrap_or(1);
        let refined = richardson_refine(&job.potential, &spec, needed)?;
        for (slot, &n) in out.iter_mut().zip(levels) {
            if slot.is_none() {
                *slot = Some(refined[n - origin].value);
            }
        }
    }
    Ok(out.into_iter().map(|v| v.unwrap()).collect())
}

const SOLVE_HEADER: [&str; 9] = [
    "n",
    "e_zeroth",
    "e_poly",
    "e_pade",
    "ladder_spread",
    "pole_warning_count",
    "e_reference",
    "abs_err",
    "rel_err",
];

/// Per-level CSV cells in SOLVE_HEADER order.
fn solve_rows(solved: &SolvedJob) -> Vec<Vec<String>> {
    solved
        .report
        .levels
        .iter()
        .zip(&solved.references)
        .map(|(level, &reference)| {
            let abs_err = (level.e_pade - reference).abs();
            let rel_err = if reference == 0.0 { abs_err } else { abs_err / reference.abs() };
            vec![
                level.n.to_string(),
                format_float(level.e_zeroth),
                format_float(level.e_poly),
                format_float(level.e_pade),
                format_float(level.spread),
                level.pole_warnings.len().to_string(),
                format_float(reference),
                format_float(abs_err),
                format_float(rel_err),
            ]
        })
        .collect()
}

/// Deterministic comment line naming the whole configuration.
fn job_comment(job: &JobConfig, solved: &SolvedJob) -> String {
    let levels: Vec<String> = solved.pipeline.levels.iter().map(usize::to_string).collect();
    format!(
        "{}; potential {}; auxiliary {}; levels {}; order {}; dim {}; accuracy {:e}; basis dim {}",
        version_echo(),
        job.potential_echo(),
        solved.split.provenance.describe(),
        levels.join(","),
        solved.pipeline.order,
        solved.pipeline.dim,
        solved.pipeline.accuracy,
        solved.report.dim,
    )
}

/// Solve one job and write the level table.
pub fn solve(job: &JobConfig) -> Result<(), CliError> {
    let solved = run_pipeline(job)?;
    let mut table = Table::new(job_comment(job, &solved), &SOLVE_HEADER);
    for row in solve_rows(&solved) {
        table.push_row(row);
    }
    let out = job.out.clone().unwrap_or_else(|| PathBuf::from("solve.csv"));
    let series = [
        PlotSeries { x_col: 0, y_col: 3, label: "continued".into() },
        PlotSeries { x_col: 0, y_col: 6, label: "reference".into() },
    ];
    let script = write_outputs(&out, &table, "energy levels", "n", "E", &series)?;
    print_solve_report(&solved);
    println!("wrote {} and {}", out.display(), script.display());
    Ok(())
}

fn print_solve_report(solved: &SolvedJob) {
    println!("auxiliary: {}", solved.split.provenance.describe());
    println!(
        "basis dim {}, quadrature points {}, parity pruned {}, probe drift {:.3e}",
        solved.report.dim,
        solved.report.npts_used,
        if solved.report.parity_pruned { "yes" } else { "no" },
        solved.report.spot_delta,
    );
    println!(
        "{:>4} {:>21} {:>21} {:>10} {:>10} {:>6}",
        "n", "E_pade", "reference", "rel_err", "spread", "poles"
    );
    for (level, &reference) in solved.report.levels.iter().zip(&solved.references) {
        let rel_err = if reference == 0.0 {
            (level.e_pade - reference).abs()
        } else {
            ((level.e_pade - reference) / reference).abs()
        };
        println!(
            "{:>4} {:>21} {:>21} {:>10.3e} {:>10.3e} {:>6}",
            level.n,
            format_float(level.e_pade),
            format_float(reference),
            rel_err,
            level.spread,
            level.pole_warnings.len(),
        );
    }
}

/// Run one solve per sweep point, each written atomically to its own
/// part file, then merge the parts sorted by sweep key and level.
pub fn sweep(job: &JobConfig, points: &SweepPoints) -> Result<(), CliError> {
    let out = job.out.clone().unwrap_or_else(|| PathBuf::from("sweep.csv"));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
    let outcomes: Vec<Result<PathBuf, CliError>> = pool.install(|| {
        (0..points.len())
            .into_par_iter()
            .map(|i| {
                let sub = points.job_for(job, i);
                let solved = run_pipeline(&sub)?;
                let key_cells: Vec<String> =
                    points.key_values(i).into_iter().map(format_float).collect();
                let mut part = String::new();
                for row in solve_rows(&solved) {
                    let mut cells = key_cells.clone();
                    cells.extend(row);
                    part.push_str(&cells.join(","));
                    part.push('\n');
                }
                let part_path = PathBuf::from(format!("{}.part{i}", out.display()));
                write_atomic(&part_path, &part)?;
                Ok(part_path)
            })
            .collect()
    });

    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (i, outcome) in outcomes.iter().enumerate() {
        match outcome {
            Ok(path) => parts.push(path.clone()),
            Err(e) => failures.push(format!("sweep point {} failed: {}", points.label(i), e.message())),
        }
    }
    for failure in &failures {
        eprintln!("{failure}");
    }
    if parts.is_empty() {
        return Err(outcomes
            .into_iter()
            .find_map(Result::err)
            .unwrap_or_else(|| CliError::Config("the sweep list is empty".into())));
    }

    // merge from the part files, sorted by key columns then level
    let key_width = points.key_header().len();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for path in &parts {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    rows.sort_by(|a, b| {
        let parse = |row: &Vec<String>| -> (Vec<f64>, usize) {
            let keys = row[..key_width]
                .iter()
                .map(|c| c.parse::<f64>().unwrap_or(f64::INFINITY))
                .collect();
            let n = row[key_width].parse::<usize>().unwrap_or(usize::MAX);
            (keys, n)
        };
        let (ka, na) = parse(a);
        let (kb, nb) = parse(b);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal).then(na.cmp(&nb))
    });

    let comment = format!(
        "{}; potential {}; {}; order {}; dim {}; accuracy {:e}",
        version_echo(),
        job.potential_echo(),
        points.describe(),
        job.order,
        job.dim,
        job.accuracy,
    );
    let header: Vec<&str> = points
        .key_header()
        .iter()
        .chain(SOLVE_HEADER.iter())
        .copied()
        .collect();
    let mut table = Table::new(comment, &header);
    for row in rows {
        table.push_row(row);
    }
    let series = [
        PlotSeries { x_col: key_width, y_col: key_width + 3, label: "continued".into() },
        PlotSeries { x_col: key_width, y_col: key_width + 6, label: "reference".into() },
    ];
    let script = write_outputs(&out, &table, "energy levels by sweep point", "n", "E", &series)?;
    for path in &parts {
        let _ = fs::remove_file(path);
    }
    println!(
        "swept {} points, {} failed; wrote {} and {}",
        points.len(),
        failures.len(),
        out.display(),
        script.display()
    );
    if !failures.is_empty() {
        return Err(CliError::PartialSweep(format!(
            "{} of {} sweep points failed",
            failures.len(),
            points.len()
        )));
    }
    Ok(())
}

/// Rescale to unit norm on the grid and make the peak value positive.
fn align_state(h: f64, values: &mut [f64]) -> Result<(), CliError> {
    let norm = (h * values.iter().map(|v| v * v).sum::<f64>()).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(CliError::Numerical(
            "pade continuation stage: the state has no usable norm".into(),
        ));
    }
    // Antisymmetric states carry two peaks equal up to rounding; take
    // the rightmost of the near-equal ones so both columns of a
    // comparison resolve the tie the same way.
    let max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let peak = (0..values.len())
        .rev()
        .find(|&i| values[i].abs() >= max * (1.0 - 1e-9))
        .unwrap();
    let sign = if values[peak] < 0.0 { -1.0 } else { 1.0 };
    for value in values.iter_mut() {
        *value *= sign / norm;
    }
    Ok(())
}

/// Tabulate one continued eigenfunction against the grid oracle state,
/// both unit-normalized and positive at their peak.
pub fn wavefunction(job: &JobConfig, level: usize) -> Result<(), CliError> {
    let mut narrowed = job.clone();
    narrowed.levels = Some(vec![level]);
    let solved = run_pipeline(&narrowed)?;
    let result = &solved.report.levels[0];
    let origin = solved.split.basis.index_origin();
    let state = match job.pade {
        Some((l, m)) => continue_state(&result.series, l, m)?,
        None => result.state.clone(),
    };

    let spec = job.grid_for_potential();
    let grid = grid_eigensolve(&job.potential, &spec, level + 1 - origin)?;
    let mut oracle_state = grid.states[level - origin].clone();

    let mut psi = Vec::with_capacity(grid.xs.len());
    for &x in &grid.xs {
        let mut sum = 0.0;
        for (row, &c) in state.coeffs.iter().enumerate() {
            if c != 0.0 {
                sum += c * solved.split.basis.wave(row + origin, x)?;
            }
        }
        psi.push(sum);
    }
    align_state(grid.h, &mut psi)?;
    align_state(grid.h, &mut oracle_state)?;

    let comment = format!(
        "{}; potential {}; auxiliary {}; level {}; order {}; dim {}; accuracy {:e}; \
         grid ({}, {}) with {} points; basis dim {}",
        version_echo(),
        job.potential_echo(),
        solved.split.provenance.describe(),
        level,
        solved.pipeline.order,
        solved.pipeline.dim,
        solved.pipeline.accuracy,
        spec.a,
        spec.b,
        spec.npts,
        solved.report.dim,
    );
    let mut table = Table::new(comment, &["x", "psi_pade", "psi_oracle"]);
    for ((&x, &pade), &oracle) in grid.xs.iter().zip(&psi).zip(&oracle_state) {
        table.push_row(vec![format_float(x), format_float(pade), format_float(oracle)]);
    }
    let out = job
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("wavefunction.csv"));
    let series = [
        PlotSeries { x_col: 0, y_col: 1, label: "continued".into() },
        PlotSeries { x_col: 0, y_col: 2, label: "grid".into() },
    ];
    let script = write_outputs(&out, &table, "eigenfunction", "x", "psi", &series)?;
    let overlap: f64 = grid.h * psi.iter().zip(oracle_state).map(|(a, b)| a * b).sum::<f64>();
    println!("level {level}: overlap with the grid state {overlap:.6}");
    println!("wrote {} and {}", out.display(), script.display());
    Ok(())
}

/// Grid eigenvalues with Richardson refinement, no expansion involved.
pub fn oracle(job: &JobConfig, count: usize) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Config("oracle needs at least one level".into()));
    }
    let spec = job.grid_for_potential();
    let refined = richardson_refine(&job.potential, &spec, count)?;
    let origin = match job.potential.domain() {
        Domain::RadialHalfLine => 1,
        Domain::Line => 0,
    };
    let comment = format!(
        "{}; potential {}; grid ({}, {}) with {} points; {} levels, step-halved refinement",
        version_echo(),
        job.potential_echo(),
        spec.a,
        spec.b,
        spec.npts,
        count,
    );
    let mut table = Table::new(comment, &["n", "energy", "error_estimate"]);
    for (i, level) in refined.iter().enumerate() {
        table.push_row(vec![
            (i + origin).to_string(),
            format_float(level.value),
            format_float(level.error),
        ]);
    }
    let out = job.out.clone().unwrap_or_else(|| PathBuf::from("oracle.csv"));
    let series = [PlotSeries { x_col: 0, y_col: 1, label: "energy".into() }];
    let script = write_outputs(&out, &table, "grid reference levels", "n", "E", &series)?;
    for (i, level) in refined.iter().enumerate() {
        println!(
            "{:>4} {:>21} error {:.3e}",
            i + origin,
            format_float(level.value),
            level.error
        );
    }
    println!("wrote {} and {}", out.display(), script.display());
    Ok(())
}

//! Deterministic CSV tables and companion gnuplot scripts.
//!
//! Every float is printed through one fixed-precision formatter so a
//! rerun with the same inputs reproduces output byte for byte.

use std::io::Write as _;
use std::path::Path;

use crate::Result;

/// Render a float at full working precision in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.14e}")
}

/// An in-memory table with one leading comment line.
#[derive(Debug, Clone)]
pub struct Table {
    comment: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(comment: impl Into<String>, header: &[&str]) -> Self {
        Table {
            comment: comment.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Append a row; the cell count must match the header.
    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(
            cells.len(),
            self.header.len(),
            "row width {} does not match header width {}",
            cells.len(),
            self.header.len()
        );
        self.rows.push(cells);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// The full file contents, newline-terminated.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&self.comment);
        out.push('\n');
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)
            .map_err(|e| crate::Error::Config(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(self.render().as_bytes())
            .map_err(|e| crate::Error::Config(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }
}

/// One curve to draw: x column, y column, legend label.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub x_col: usize,
    pub y_col: usize,
    pub label: String,
}

/// A gnuplot script that draws columns of the named CSV next to it.
pub fn gnuplot_script(
    csv_name: &str,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[PlotSeries],
) -> String {
    let stem = csv_name.strip_suffix(".csv").unwrap_or(csv_name);
    let mut out = String::new();
    out.push_str("set datafile separator ','\n");
    out.push_str("set key outside\n");
    out.push_str("set grid\n");
    out.push_str(&format!("set title '{title}'\n"));
    out.push_str(&format!("set xlabel '{xlabel}'\n"));
    out.push_str(&format!("set ylabel '{ylabel}'\n"));
    out.push_str("set terminal pngcairo size 900,600\n");
    out.push_str(&format!("set output '{stem}.png'\n"));
    let clauses: Vec<String> = series
        .iter()
        .map(|s| {
            format!(
                "'{csv_name}' using {}:{} with linespoints title '{}'",
                s.x_col + 1,
                s.y_col + 1,
                s.label
            )
        })
        .collect();
    out.push_str(&format!("plot {}\n", clauses.join(", \\\n     ")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_fixed_width_scientific() {
        assert_eq!(format_float(1.0), "1.00000000000000e0");
        assert_eq!(format_float(-0.5), "-5.00000000000000e-1");
        assert_eq!(format_float(121.0 / 61.0), "1.98360655737705e0");
        assert_eq!(format_float(0.0), "0.00000000000000e0");
    }

    #[test]
    fn rendering_is_deterministic_and_newline_terminated() {
        let build = || {
            let mut t = Table::new("demo run, dim=4", &["x", "value"]);
            t.push_row(vec![format_float(0.05), format_float(1.0249)]);
            t.push_row(vec![format_float(0.10), format_float(1.0488)]);
            t.render()
        };
        let a = build();
        let b = build();
        assert_eq!(a, b);
        assert!(a.starts_with("# demo run, dim=4\n"));
        assert!(a.ends_with('\n'));
        assert_eq!(a.lines().count(), 4);
        assert_eq!(a.lines().nth(1), Some("x,value"));
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_are_refused() {
        let mut t = Table::new("c", &["a", "b"]);
        t.push_row(vec!["1".into()]);
    }

    #[test]
    fn plot_script_points_at_the_csv() {
        let script = gnuplot_script(
            "levels.csv",
            "levels",
            "n",
            "energy",
            &[
                PlotSeries { x_col: 0, y_col: 2, label: "resummed".into() },
                PlotSeries { x_col: 0, y_col: 3, label: "reference".into() },
            ],
        );
        assert!(script.contains("set output 'levels.png'"));
        assert!(script.contains("'levels.csv' using 1:3 with linespoints title 'resummed'"));
        assert!(script.contains("using 1:4"));
        assert!(script.ends_with('\n'));
    }
}

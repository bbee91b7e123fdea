//! Convergence-series CSV output. Values are printed with 17 significant
//! digits so parsing the file back reproduces the exact binary values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub samples: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

pub fn render_convergence_csv(rows: &[ConvergenceRow]) -> Result<String, String> {
    for pair in rows.windows(2) {
        if pair[1].samples <= pair[0].samples {
            return Err(format!(
                "sample counts must be strictly increasing: {} then {}",
                pair[0].samples, pair[1].samples
            ));
        }
    }
    let mut out = String::from("samples,estimate,stderr,ci95_low,ci95_high\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.samples, row.estimate, row.stderr, row.ci95_low, row.ci95_high
        );
    }
    Ok(out)
}

pub fn write_convergence_csv(rows: &[ConvergenceRow], path: &Path) -> Result<(), String> {
    let text = render_convergence_csv(rows)?;
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(samples: u64, estimate: f64) -> ConvergenceRow {
        ConvergenceRow { samples, estimate, stderr: 0.1, ci95_low: 0.0, ci95_high: 1.0 }
    }

    #[test]
    fn empty_series_renders_header_only() {
        assert_eq!(
            render_convergence_csv(&[]).unwrap(),
            "samples,estimate,stderr,ci95_low,ci95_high\n"
        );
    }

    #[test]
    fn rejects_non_increasing_sample_counts() {
        let rows = [row(1000, 1.0), row(1000, 1.1)];
        assert!(render_convergence_csv(&rows).is_err());
    }

    #[test]
    fn values_roundtrip_through_the_text() {
        let rows = [row(1000, 1.0 / 3.0), row(10_000, std::f64::consts::PI)];
        let text = render_convergence_csv(&rows).unwrap();
        for (line, r) in text.lines().skip(1).zip(&rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[1].parse::<f64>().unwrap(), r.estimate);
        }
    }
}

//! The `mpp` and `stats-fit` subcommands.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rbrdo::problems::{ProblemId, ProblemOptions};
use rbrdo::stats::{fit_report, RmsConvention};
use rbrdo::{asosl_mpp, AsoslParams, MppResult};

use crate::error::{CliError, CliResult};

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Inverse reliability analysis of constraint `index` (1-based) at design `d`.
pub fn mpp(
    id: ProblemId,
    opts: &ProblemOptions,
    index: usize,
    d: &[f64],
    params: &AsoslParams<f64>,
) -> CliResult<MppResult<f64>> {
    let problem = id.rbrdo(opts)?;
    let gs = problem.constraints();
    if index == 0 || index > gs.len() {
        return Err(CliError::config(format!(
            "{id} has constraints 1..={} (got {index})",
            gs.len()
        )));
    }
    let n = problem.design_bounds().dim();
    if d.len() != n {
        return Err(CliError::config(format!("{id} takes {n} design values (got {})", d.len())));
    }
    let rv = problem.random_vars(d)?;
    Ok(asosl_mpp(&gs[index - 1], &rv, d, params)?)
}

pub fn print_mpp(r: &MppResult<f64>) {
    println!("u_star={}", join(&r.u_star));
    println!("x_star={}", join(&r.x_star));
    println!("g_star={}", r.g_star);
    println!("iterations={}", r.iterations);
    println!("converged={}", r.converged);
}

pub fn write_trace(r: &MppResult<f64>, path: &Path) -> CliResult<()> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    r.write_trace(BufWriter::new(f)).map_err(|e| CliError::io(path, e))
}

/// Numeric table read from a delimited file with a header row.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
        let header: Vec<String> = r
            .headers()
            .map_err(|e| CliError::io(path, e))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| CliError::io(path, e))?;
            let row = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::io(path, format!("row {}: {e}", i + 1)))?;
            rows.push(row);
        }
        if header.is_empty() || rows.is_empty() {
            return Err(CliError::io(path, "no data rows"));
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> CliResult<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| {
            CliError::config(format!("no column '{name}' (columns: {})", self.header.join(", ")))
        })
    }

    fn values(&self, col: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[col]).collect()
    }
}

/// Fits `y` against `x`, once per value of the `group` column when present.
/// Returns the printed report lines.
pub fn stats_fit(table: &Table, x: &str, y: &str, group: Option<&str>, rms: RmsConvention) -> CliResult<Vec<String>> {
    let (xi, yi) = (table.column(x)?, table.column(y)?);
    let gi = group.map(|g| table.column(g)).transpose()?;
    let Some(gi) = gi else {
        let r = fit_report(&table.values(xi), &table.values(yi), rms)?;
        return Ok(vec![r.to_string()]);
    };
    let mut levels = table.values(gi);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
        .into_iter()
        .map(|level| {
            let rows: Vec<&Vec<f64>> = table.rows.iter().filter(|r| r[gi] == level).collect();
            let xs: Vec<f64> = rows.iter().map(|r| r[xi]).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r[yi]).collect();
            let r = fit_report(&xs, &ys, rms).map_err(|e| CliError::from(e).context(&format!("{}={level}", table.header[gi])))?;
            Ok(format!("{}={level} {r}", table.header[gi]))
        })
        .collect()
}

//! Plot-ready convergence table.
//!
//! Columns, comma separated:
//!
//! * `iteration`: 1 ..= t_max
//! * `run{k}_best`: best-so-far value of the k-th history (objective sense)
//! * `run{k}_swarm{j}`: best value of swarm j, only for histories that ever
//!   had more than one swarm. After a collapse the retired columns are blank.
//!
//! `k` follows the order the histories were given in.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};
use crate::history::HistoryFile;
use crate::summary::check_compatible;

fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn plot_table(files: &[HistoryFile]) -> Result<String> {
    check_compatible(files)?;
    let t_max = files[0].header.t_max;
    let swarm_cols: Vec<usize> = files
        .iter()
        .map(|f| match f.max_swarm_count() {
            n if n > 1 => n,
            _ => 0,
        })
        .collect();

    let mut header = vec!["iteration".to_string()];
    header.extend((0..files.len()).map(|k| format!("run{k}_best")));
    for (k, &n) in swarm_cols.iter().enumerate() {
        header.extend((0..n).map(|j| format!("run{k}_swarm{j}")));
    }
    let mut out = header.join(",");
    out.push('\n');

    for t in 1..=t_max {
        let mut row = vec![t.to_string()];
        row.extend(files.iter().map(|f| {
            f.iterations
                .get(t - 1)
                .map_or_else(String::new, |it| num(it.best_value))
        }));
        for (f, &n) in files.iter().zip(&swarm_cols) {
            let sense = f.header.sense;
            let sbest = f
                .iterations
                .get(t - 1)
                .map(|it| it.sbest_fitness.as_slice())
                .unwrap_or(&[]);
            row.extend((0..n).map(|j| {
                sbest
                    .get(j)
                    .map_or_else(String::new, |v| num(sense.to_raw(*v)))
            }));
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

/// Writes the convergence table for `history_paths` to `out_path`.
pub fn emit_plot_data(history_paths: &[PathBuf], out_path: &Path) -> Result<()> {
    if history_paths.is_empty() {
        return Err(HarnessError::NoHistories);
    }
    let files = history_paths
        .iter()
        .map(|p| HistoryFile::read(p))
        .collect::<Result<Vec<_>>>()?;
    let table = plot_table(&files)?;
    std::fs::write(out_path, table).map_err(|e| HarnessError::io(out_path, e))
}

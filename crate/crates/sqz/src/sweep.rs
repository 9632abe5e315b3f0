//! Cartesian-product sweeps. Points are evaluated concurrently and merged in
//! grid order, so output bytes do not depend on the worker count.

use std::io::Write;

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};
use crate::format::{columns_of, flat_map, write_json, write_table, Format};
use crate::params::complete;
use crate::svg::{line_chart, Series};

pub const THREADS_ENV: &str = "SQZ_THREADS";

/// Requested worker count, capped by `SQZ_THREADS` when set.
pub fn resolve_threads(requested: Option<usize>) -> CliResult<usize> {
    let base = requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match std::env::var(THREADS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(cap) if cap >= 1 => Ok(base.min(cap)),
            _ => Err(CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))),
        },
        Err(_) => Ok(base.max(1)),
    }
}

/// Runs `f` on a private rayon pool of `threads` workers.
pub fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub operation: String,
    pub grid_names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<(String, Value)>>,
}

fn evaluate(cfg: &SweepConfig, index: usize) -> Vec<(String, Value)> {
    let digits = cfg.digits(index);
    let raw = cfg.point(&digits);
    let mut row: Vec<(String, Value)> =
        cfg.grid.iter().zip(&digits).map(|(a, &i)| (a.spec.name.to_string(), a.values[i].to_json())).collect();
    for (k, v) in raw.iter() {
        if !cfg.grid.iter().any(|a| a.spec.name == *k) {
            row.push((k.to_string(), v.to_json()));
        }
    }
    let result = complete(&cfg.operation.all_params(), raw).and_then(|p| (cfg.operation.run)(&p));
    match result {
        Ok(out) => {
            row.push(("status".into(), Value::from("ok")));
            row.extend(flat_map(&out.summary));
        }
        Err(e) => row.push(("status".into(), Value::from(format!("error: {e}")))),
    }
    row
}

pub fn run_sweep(cfg: &SweepConfig, threads: usize) -> CliResult<SweepTable> {
    let rows: Vec<Vec<(String, Value)>> =
        in_pool(threads, || (0..cfg.n_points()).into_par_iter().map(|i| evaluate(cfg, i)).collect())?;
    Ok(SweepTable {
        operation: cfg.operation.name.to_string(),
        grid_names: cfg.grid.iter().map(|a| a.spec.name.to_string()).collect(),
        columns: columns_of(&rows),
        rows,
    })
}

impl SweepTable {
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (k, v) in r {
                    m.insert(k.clone(), v.clone());
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("operation".into(), Value::from(self.operation.clone()));
        top.insert("grid".into(), Value::from(self.grid_names.clone()));
        top.insert("columns".into(), Value::from(self.columns.clone()));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    fn cell(row: &[(String, Value)], col: &str) -> Option<f64> {
        row.iter().find(|(k, _)| k == col).and_then(|(_, v)| v.as_f64())
    }

    /// Numeric output columns (not parameters, not status).
    fn output_columns(&self) -> Vec<&String> {
        let first_out = self.columns.iter().position(|c| c == "status").map_or(0, |i| i + 1);
        self.columns[first_out..].iter().filter(|c| self.rows.iter().any(|r| Self::cell(r, c).is_some())).collect()
    }

    /// x is the fastest-varying axis; one series per plotted column and per
    /// combination of the other axes.
    pub fn to_svg(&self, plot: &[String]) -> CliResult<String> {
        let x = self.grid_names.last().ok_or_else(|| CliError::usage("sweep has no grid"))?;
        let outputs = self.output_columns();
        let chosen: Vec<String> = if plot.is_empty() {
            let default = outputs.iter().find(|c| c.as_str() == "xi_S2").or(outputs.first());
            default.map(|c| vec![(*c).clone()]).unwrap_or_default()
        } else {
            for c in plot {
                if !self.columns.contains(c) {
                    return Err(CliError::usage(format!("plot column {c:?} is not in the sweep output")));
                }
            }
            plot.to_vec()
        };
        let mut series: Vec<Series> = Vec::new();
        for col in &chosen {
            for r in &self.rows {
                let others: Vec<String> = self.grid_names[..self.grid_names.len() - 1]
                    .iter()
                    .map(|g| format!("{g}={}", r.iter().find(|(k, _)| k == g).map_or(String::new(), |(_, v)| v.to_string())))
                    .collect();
                let name = if others.is_empty() { col.clone() } else { format!("{col} [{}]", others.join(", ")) };
                let (Some(xv), Some(yv)) = (Self::cell(r, x), Self::cell(r, col)) else { continue };
                match series.iter_mut().find(|s| s.name == name) {
                    Some(s) => s.points.push((xv, yv)),
                    None => series.push(Series { name, points: vec![(xv, yv)] }),
                }
            }
        }
        Ok(line_chart(x, &series))
    }

    pub fn write<W: Write>(&self, mut w: W, format: Format, plot: &[String]) -> CliResult<()> {
        match format {
            Format::Csv => write_table(w, &self.columns, &self.rows),
            Format::Json => write_json(w, &self.to_json()),
            Format::Svg => {
                w.write_all(self.to_svg(plot)?.as_bytes())?;
                Ok(())
            }
        }
    }
}

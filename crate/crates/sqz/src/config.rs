//! TOML configuration for sweeps and for single commands. Flags given on the
//! command line override values from the file.

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};
use crate::format::Format;
use crate::ops::{lookup, OpSpec};
use crate::params::{complete, find, ParamKind, ParamSpec, ParamValue, Params};

/// Values for one grid axis, in evaluation order.
#[derive(Clone, Debug)]
pub struct GridAxis {
    pub spec: ParamSpec,
    pub values: Vec<ParamValue>,
}

#[derive(Clone)]
pub struct SweepConfig {
    pub operation: &'static OpSpec,
    /// Axes in file order; the first varies slowest.
    pub grid: Vec<GridAxis>,
    pub fixed: Params,
    pub format: Format,
    pub path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub plot: Vec<String>,
}

impl std::fmt::Debug for SweepConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SweepConfig")
            .field("operation", &self.operation.name)
            .field("grid", &self.grid)
            .field("fixed", &self.fixed)
            .field("format", &self.format)
            .field("path", &self.path)
            .field("seed", &self.seed)
            .field("threads", &self.threads)
            .field("plot", &self.plot)
            .finish()
    }
}

pub fn read_table(path: &Path) -> CliResult<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_table(&text, &path.display().to_string())
}

pub fn parse_table(text: &str, origin: &str) -> CliResult<toml::Table> {
    text.parse::<toml::Table>().map_err(|e| CliError::usage(format!("{origin}: {e}")))
}

fn as_str<'a>(v: &'a toml::Value, key: &str) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| CliError::usage(format!("{key} must be a string")))
}

fn as_positive(v: &toml::Value, key: &str, min: i64) -> CliResult<i64> {
    match v.as_integer() {
        Some(i) if i >= min => Ok(i),
        _ => Err(CliError::usage(format!("{key} must be an integer >= {min}"))),
    }
}

/// Fixed parameters from a `[params]` table.
fn fixed_params(op: &OpSpec, specs: &[ParamSpec], t: Option<&toml::Value>) -> CliResult<Params> {
    let mut p = Params::default();
    let Some(t) = t else { return Ok(p) };
    let t = t.as_table().ok_or_else(|| CliError::usage("[params] must be a table"))?;
    for (k, v) in t {
        let spec = find(specs, k).ok_or_else(|| CliError::usage(format!("operation {} has no parameter {k:?}", op.name)))?;
        p.insert(spec.name, ParamValue::from_toml(spec, v)?);
    }
    Ok(p)
}

fn integral(spec: &ParamSpec, x: f64) -> CliResult<ParamValue> {
    let r = x.round();
    if (x - r).abs() > 1e-9 * r.abs().max(1.0) {
        return Err(CliError::usage(format!("grid for integer parameter {} hits non-integer {x}", spec.name)));
    }
    Ok(ParamValue::Int(r as i64))
}

fn grid_axis(spec: &ParamSpec, v: &toml::Value) -> CliResult<GridAxis> {
    let values = match v {
        toml::Value::Array(items) => items.iter().map(|x| ParamValue::from_toml(spec, x)).collect::<CliResult<Vec<_>>>()?,
        toml::Value::Table(t) => {
            for k in t.keys() {
                if !["start", "stop", "count"].contains(&k.as_str()) {
                    return Err(CliError::usage(format!("grid {}: unknown key {k:?}", spec.name)));
                }
            }
            let num = |k: &str| -> CliResult<f64> {
                match t.get(k) {
                    Some(toml::Value::Float(f)) => Ok(*f),
                    Some(toml::Value::Integer(i)) => Ok(*i as f64),
                    _ => Err(CliError::usage(format!("grid {}: {k} must be a number", spec.name))),
                }
            };
            let (start, stop) = (num("start")?, num("stop")?);
            let count = t.get("count").map(|c| as_positive(c, &format!("grid {}.count", spec.name), 1)).transpose()?;
            let count = count.ok_or_else(|| CliError::usage(format!("grid {}: count is required", spec.name)))? as usize;
            if matches!(spec.kind, ParamKind::Choice(_)) {
                return Err(CliError::usage(format!("grid {}: ranges need a numeric parameter", spec.name)));
            }
            (0..count)
                .map(|i| {
                    let x = if count == 1 { start } else { start + (stop - start) * i as f64 / (count - 1) as f64 };
                    match spec.kind {
                        ParamKind::Int => integral(spec, x),
                        _ => Ok(ParamValue::Float(x)),
                    }
                })
                .collect::<CliResult<Vec<_>>>()?
        }
        scalar => vec![ParamValue::from_toml(spec, scalar)?],
    };
    if values.is_empty() {
        return Err(CliError::usage(format!("grid {} is empty", spec.name)));
    }
    Ok(GridAxis { spec: *spec, values })
}

pub fn sweep_from_table(t: &toml::Table) -> CliResult<SweepConfig> {
    const KEYS: [&str; 8] = ["operation", "output", "path", "seed", "threads", "plot", "grid", "params"];
    for k in t.keys() {
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::usage(format!("unknown config key {k:?}")));
        }
    }
    let op_name = as_str(t.get("operation").ok_or_else(|| CliError::usage("config needs an operation"))?, "operation")?;
    let operation = lookup(op_name).ok_or_else(|| CliError::usage(format!("unknown operation {op_name:?}")))?;
    let specs = operation.all_params();
    let grid_table = t.get("grid").and_then(|g| g.as_table()).ok_or_else(|| CliError::usage("config needs a [grid] table"))?;
    if grid_table.is_empty() {
        return Err(CliError::usage("[grid] has no axes"));
    }
    let mut grid = Vec::new();
    for (k, v) in grid_table {
        let spec = find(&specs, k).ok_or_else(|| CliError::usage(format!("operation {op_name} has no parameter {k:?}")))?;
        grid.push(grid_axis(spec, v)?);
    }
    let fixed = fixed_params(operation, &specs, t.get("params"))?;
    if let Some(axis) = grid.iter().find(|a| fixed.contains(a.spec.name)) {
        return Err(CliError::usage(format!("{} is both a grid axis and a fixed parameter", axis.spec.name)));
    }
    let format = match t.get("output") {
        Some(v) => Format::parse(as_str(v, "output")?)?,
        None => Format::Csv,
    };
    let path = t.get("path").map(|v| as_str(v, "path").map(PathBuf::from)).transpose()?;
    let seed = t.get("seed").map(|v| as_positive(v, "seed", 0).map(|s| s as u64)).transpose()?;
    let threads = t.get("threads").map(|v| as_positive(v, "threads", 1).map(|s| s as usize)).transpose()?;
    let plot = match t.get("plot") {
        Some(toml::Value::Array(a)) => a.iter().map(|v| as_str(v, "plot").map(String::from)).collect::<CliResult<Vec<_>>>()?,
        Some(_) => return Err(CliError::usage("plot must be a list of column names")),
        None => Vec::new(),
    };
    let cfg = SweepConfig { operation, grid, fixed, format, path, seed, threads, plot };
    // every point must resolve to a complete parameter set
    complete(&specs, cfg.point(&vec![0; cfg.grid.len()]))?;
    Ok(cfg)
}

impl SweepConfig {
    pub fn n_points(&self) -> usize {
        self.grid.iter().map(|a| a.values.len()).product()
    }

    /// Mixed-radix digits of point `index`, first axis most significant.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut d = vec![0; self.grid.len()];
        for (slot, axis) in d.iter_mut().zip(&self.grid).rev() {
            *slot = index % axis.values.len();
            index /= axis.values.len();
        }
        d
    }

    /// Parameters of one grid point before defaults are filled in.
    pub fn point(&self, digits: &[usize]) -> Params {
        let mut p = self.fixed.clone();
        for (axis, &i) in self.grid.iter().zip(digits) {
            p.insert(axis.spec.name, axis.values[i].clone());
        }
        if let (Some(seed), Some(spec)) = (self.seed, find(&self.operation.all_params(), "seed")) {
            if !p.contains("seed") {
                p.insert(spec.name, ParamValue::Int(seed as i64));
            }
        }
        p
    }
}

/// Output options and fixed parameters for a single command.
pub struct CommandConfig {
    pub params: Params,
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

pub fn command_from_table(op: &OpSpec, t: &toml::Table) -> CliResult<CommandConfig> {
    for k in t.keys() {
        if !["output", "path", "params"].contains(&k.as_str()) {
            return Err(CliError::usage(format!("unknown config key {k:?}")));
        }
    }
    let params = fixed_params(op, &op.all_params(), t.get("params"))?;
    let format = t.get("output").map(|v| as_str(v, "output").and_then(Format::parse)).transpose()?;
    let path = t.get("path").map(|v| as_str(v, "path").map(PathBuf::from)).transpose()?;
    Ok(CommandConfig { params, format, path })
}

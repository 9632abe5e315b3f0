//! Argument parsing and dispatch. Exit codes: 0 success, 1 numeric or I/O
//! failure, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, ArgMatches, Command};

use crate::config::{command_from_table, read_table, sweep_from_table};
use crate::error::{CliError, CliResult};
use crate::format::{flat_map, write_json, write_output_csv, Format, Output};
use crate::ops::{OpSpec, OPERATIONS};
use crate::params::{complete, ParamValue, Params};
use crate::svg::{line_chart, Series};
use crate::sweep::{in_pool, resolve_threads, run_sweep};

fn output_args(cmd: Command) -> Command {
    cmd.arg(Arg::new("output").long("output").value_name("FORMAT").value_parser(Format::NAMES.to_vec()).help("csv, json or svg"))
        .arg(Arg::new("out").long("out").value_name("PATH").help("write to a file instead of stdout"))
}

fn op_command(op: &'static OpSpec) -> Command {
    let mut cmd = Command::new(op.name).about(op.about);
    for p in op.all_params() {
        let mut help = p.help.to_string();
        if let Some(d) = p.default {
            help.push_str(&format!(" [default: {d}]"));
        }
        cmd = cmd.arg(Arg::new(p.name).long(p.name).value_name("VALUE").allow_negative_numbers(true).help(help));
    }
    cmd = cmd.arg(Arg::new("config").long("config").value_name("FILE").help("TOML file with [params]; flags win"));
    output_args(cmd)
}

pub fn command() -> Command {
    let mut cmd = Command::new("sqz")
        .about("Spin squeezing and entanglement calculations for collective spin systems")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for op in OPERATIONS {
        cmd = cmd.subcommand(op_command(op));
    }
    let sweep = Command::new("sweep")
        .about("Evaluate an operation over a parameter grid described by a TOML file")
        .arg(Arg::new("config").long("config").value_name("FILE").required(true).help("sweep description"))
        .arg(Arg::new("threads").long("threads").value_name("K").value_parser(clap::value_parser!(u64).range(1..)).help("worker count (capped by SQZ_THREADS)"))
        .arg(Arg::new("seed").long("seed").value_name("SEED").value_parser(clap::value_parser!(u64)).help("seed passed to every point that takes one"))
        .arg(Arg::new("plot").long("plot").value_name("COLUMN").action(ArgAction::Append).help("column to draw in SVG output"));
    cmd.subcommand(output_args(sweep))
}

/// Run with the given arguments (including the program name), writing
/// results to `stdout` and diagnostics to `stderr`.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(&matches, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "sqz: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(m: &ArgMatches, stdout: &mut dyn Write) -> CliResult<()> {
    let (name, sub) = m.subcommand().expect("subcommand is required");
    if name == "sweep" {
        return run_sweep_command(sub, stdout);
    }
    let op = OPERATIONS.iter().find(|o| o.name == name).expect("subcommands mirror the registry");
    let cfg = match sub.get_one::<String>("config") {
        Some(path) => Some(command_from_table(op, &read_table(Path::new(path))?)?),
        None => None,
    };
    let specs = op.all_params();
    let mut params = cfg.as_ref().map(|c| c.params.clone()).unwrap_or_default();
    for s in &specs {
        if let Some(raw) = sub.get_one::<String>(s.name) {
            params.insert(s.name, ParamValue::parse(s, raw)?);
        }
    }
    let params: Params = complete(&specs, params)?;
    let format = match sub.get_one::<String>("output") {
        Some(f) => Format::parse(f)?,
        None => cfg.as_ref().and_then(|c| c.format).unwrap_or(Format::Json),
    };
    let path = sub.get_one::<String>("out").map(PathBuf::from).or_else(|| cfg.and_then(|c| c.path));
    let out = in_pool(resolve_threads(None)?, || (op.run)(&params))??;
    emit(path.as_deref(), stdout, |w| write_output(w, &out, format))
}

fn run_sweep_command(sub: &ArgMatches, stdout: &mut dyn Write) -> CliResult<()> {
    let path = sub.get_one::<String>("config").expect("required by clap");
    let mut cfg = sweep_from_table(&read_table(Path::new(path))?)?;
    if let Some(f) = sub.get_one::<String>("output") {
        cfg.format = Format::parse(f)?;
    }
    if let Some(p) = sub.get_one::<String>("out") {
        cfg.path = Some(PathBuf::from(p));
    }
    if let Some(&s) = sub.get_one::<u64>("seed") {
        cfg.seed = Some(s);
    }
    if let Some(&t) = sub.get_one::<u64>("threads") {
        cfg.threads = Some(t as usize);
    }
    if let Some(cols) = sub.get_many::<String>("plot") {
        cfg.plot = cols.cloned().collect();
    }
    let threads = resolve_threads(cfg.threads)?;
    let table = run_sweep(&cfg, threads)?;
    emit(cfg.path.as_deref(), stdout, |w| table.write(w, cfg.format, &cfg.plot))
}

fn emit(path: Option<&Path>, stdout: &mut dyn Write, write: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            write(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            write(stdout)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_output(w: &mut dyn Write, out: &Output, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(w, &out.to_json_value()),
        Format::Csv => write_output_csv(w, out),
        Format::Svg => {
            let svg = rows_chart(out).ok_or_else(|| CliError::usage("svg output needs a command that produces rows (kicked-top, husimi) or a sweep"))?;
            w.write_all(svg.as_bytes())?;
            Ok(())
        }
    }
}

/// x is `kick` when present, otherwise the first column; every other numeric column is a series.
fn rows_chart(out: &Output) -> Option<String> {
    let first = out.rows.first()?;
    let cols: Vec<String> = flat_map(first).into_iter().map(|(k, _)| k).collect();
    let x = if cols.iter().any(|c| c == "kick") { "kick".to_string() } else { cols[0].clone() };
    let series = cols
        .iter()
        .filter(|c| **c != x)
        .map(|c| Series {
            name: c.clone(),
            points: out
                .rows
                .iter()
                .filter_map(|r| Some((r.get(&x)?.as_f64()?, r.get(c)?.as_f64()?)))
                .collect(),
        })
        .collect::<Vec<_>>();
    Some(line_chart(&x, &series))
}

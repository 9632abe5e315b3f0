//! Named parameters shared by subcommand flags, config files and sweep grids.

use std::collections::BTreeMap;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Float,
    Choice(&'static [&'static str]),
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    /// `None` marks a required parameter unless `optional` is set.
    pub default: Option<&'static str>,
    pub optional: bool,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn required(name: &'static str, kind: ParamKind, help: &'static str) -> Self {
        ParamSpec { name, kind, default: None, optional: false, help }
    }

    pub const fn with_default(name: &'static str, kind: ParamKind, default: &'static str, help: &'static str) -> Self {
        ParamSpec { name, kind, default: Some(default), optional: false, help }
    }

    pub const fn optional(name: &'static str, kind: ParamKind, help: &'static str) -> Self {
        ParamSpec { name, kind, default: None, optional: true, help }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    /// Parse a flag value according to its declared kind.
    pub fn parse(spec: &ParamSpec, raw: &str) -> CliResult<Self> {
        let bad = || CliError::usage(format!("--{}: cannot parse {raw:?}", spec.name));
        match spec.kind {
            ParamKind::Int => raw.trim().parse::<i64>().map(ParamValue::Int).map_err(|_| bad()),
            ParamKind::Float => raw.trim().parse::<f64>().map(ParamValue::Float).map_err(|_| bad()),
            ParamKind::Choice(options) => {
                if options.contains(&raw) {
                    Ok(ParamValue::Text(raw.to_string()))
                } else {
                    Err(CliError::usage(format!("--{}: expected one of {}, got {raw:?}", spec.name, options.join("|"))))
                }
            }
        }
    }

    /// Convert a config-file value according to the declared kind.
    pub fn from_toml(spec: &ParamSpec, v: &toml::Value) -> CliResult<Self> {
        let bad = || CliError::usage(format!("parameter {}: unsupported value {v}", spec.name));
        match (spec.kind, v) {
            (ParamKind::Int, toml::Value::Integer(i)) => Ok(ParamValue::Int(*i)),
            (ParamKind::Int, toml::Value::Float(f)) if f.fract() == 0.0 && f.abs() < 9.0e15 => Ok(ParamValue::Int(*f as i64)),
            (ParamKind::Float, toml::Value::Integer(i)) => Ok(ParamValue::Float(*i as f64)),
            (ParamKind::Float, toml::Value::Float(f)) => Ok(ParamValue::Float(*f)),
            (ParamKind::Choice(_), toml::Value::String(s)) => ParamValue::parse(spec, s),
            _ => Err(bad()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ParamValue::Int(i) => serde_json::Value::from(*i),
            ParamValue::Float(f) => serde_json::Value::from(*f),
            ParamValue::Text(s) => serde_json::Value::from(s.clone()),
        }
    }
}

/// Resolved parameter set for one evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<&'static str, ParamValue>,
}

impl Params {
    pub fn insert(&mut self, name: &'static str, v: ParamValue) {
        self.values.insert(name, v);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&&'static str, &ParamValue)> {
        self.values.iter()
    }

    pub fn float(&self, name: &str) -> CliResult<f64> {
        match self.values.get(name) {
            Some(ParamValue::Float(f)) => Ok(*f),
            Some(ParamValue::Int(i)) => Ok(*i as f64),
            _ => Err(CliError::usage(format!("missing parameter --{name}"))),
        }
    }

    pub fn opt_float(&self, name: &str) -> CliResult<Option<f64>> {
        if self.values.contains_key(name) {
            self.float(name).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn int(&self, name: &str) -> CliResult<i64> {
        match self.values.get(name) {
            Some(ParamValue::Int(i)) => Ok(*i),
            _ => Err(CliError::usage(format!("missing parameter --{name}"))),
        }
    }

    /// Non-negative integer such as a particle number or count.
    pub fn count(&self, name: &str) -> CliResult<usize> {
        let v = self.int(name)?;
        usize::try_from(v).map_err(|_| CliError::usage(format!("--{name} must be non-negative, got {v}")))
    }

    pub fn seed(&self, name: &str) -> CliResult<u64> {
        let v = self.int(name)?;
        u64::try_from(v).map_err(|_| CliError::usage(format!("--{name} must be non-negative, got {v}")))
    }

    pub fn text(&self, name: &str) -> CliResult<&str> {
        match self.values.get(name) {
            Some(ParamValue::Text(s)) => Ok(s),
            _ => Err(CliError::usage(format!("missing parameter --{name}"))),
        }
    }
}

/// Fill defaults and reject missing required parameters.
pub fn complete(specs: &[ParamSpec], mut p: Params) -> CliResult<Params> {
    for s in specs {
        if p.contains(s.name) {
            continue;
        }
        match s.default {
            Some(d) => p.insert(s.name, ParamValue::parse(s, d)?),
            None if s.optional => {}
            None => return Err(CliError::usage(format!("missing required parameter --{}", s.name))),
        }
    }
    Ok(p)
}

pub fn find<'a>(specs: &'a [ParamSpec], name: &str) -> Option<&'a ParamSpec> {
    specs.iter().find(|s| s.name == name)
}

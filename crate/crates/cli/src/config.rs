//! Config ingestion: preset base, JSON file, dotted overrides, seed variable.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use morphoevo_core::runner::preset_experiment;
use morphoevo_core::SimulationConfig;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SEED_VAR: &str = "MORPHOEVO_SEED";

/// Recursively merges `patch` into `base`; objects merge key by key, any
/// other value replaces.
pub fn deep_merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Parses `a.b.c=value`. The value is read as JSON when it parses, else as a
/// plain string.
pub fn parse_override(spec: &str) -> CliResult<(Vec<String>, Value)> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Schema(format!("override {spec:?} is not key=value")))?;
    let path: Vec<String> = key.split('.').map(str::to_string).collect();
    if path.iter().any(String::is_empty) {
        return Err(CliError::Schema(format!("override key {key:?} has an empty segment")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((path, value))
}

fn set_path(root: &mut Value, path: &[String], value: Value) -> CliResult<()> {
    let mut node = root;
    for key in &path[..path.len() - 1] {
        let map = node
            .as_object_mut()
            .ok_or_else(|| CliError::Schema(format!("override path {} crosses a non-object", path.join("."))))?;
        node = map.entry(key.clone()).or_insert_with(|| Value::Object(Map::new()));
    }
    let map = node
        .as_object_mut()
        .ok_or_else(|| CliError::Schema(format!("override path {} crosses a non-object", path.join("."))))?;
    map.insert(path[path.len() - 1].clone(), value);
    Ok(())
}

fn preset_base(name: &str) -> CliResult<Value> {
    let cfg = preset_experiment(name)?;
    let mut v = serde_json::to_value(cfg).map_err(|e| CliError::Other(e.to_string()))?;
    // Presets leave the metric interval to follow the cycle budget.
    if let Some(map) = v.as_object_mut() {
        map.remove("metric_interval");
    }
    Ok(v)
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => CliError::MissingFile(path.to_path_buf()),
        _ => CliError::Io(e),
    })?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    if !value.is_object() {
        return Err(CliError::Schema(format!("{}: top level must be an object", path.display())));
    }
    Ok(value)
}

/// Everything a config can be assembled from.
#[derive(Debug, Default)]
pub struct ConfigSources<'a> {
    pub file: Option<&'a Path>,
    pub preset: Option<&'a str>,
    pub overrides: &'a [String],
    /// Value of the seed environment variable, if set.
    pub seed_env: Option<String>,
}

/// Builds and validates the config. Precedence, lowest first: the preset
/// (from `preset` or the file's `"preset"` key), the file, the overrides,
/// the seed variable.
pub fn load_config(src: &ConfigSources) -> CliResult<SimulationConfig> {
    let mut file = match src.file {
        Some(path) => Some(read_json(path)?),
        None => None,
    };
    let file_preset = match file.as_mut().and_then(|f| f.as_object_mut()).and_then(|m| m.remove("preset")) {
        Some(Value::String(s)) => Some(s),
        Some(other) => return Err(CliError::Schema(format!("preset must be a string, got {other}"))),
        None => None,
    };
    let preset = src.preset.map(str::to_string).or(file_preset);
    let mut merged = match &preset {
        Some(name) => preset_base(name)?,
        None => Value::Object(Map::new()),
    };
    if let Some(f) = file {
        deep_merge(&mut merged, f);
    }
    for spec in src.overrides {
        let (path, value) = parse_override(spec)?;
        set_path(&mut merged, &path, value)?;
    }
    if let Some(seed) = &src.seed_env {
        let seed: u64 = seed
            .trim()
            .parse()
            .map_err(|_| CliError::Schema(format!("{SEED_VAR}={seed:?} is not an unsigned integer")))?;
        set_path(&mut merged, &["master_seed".to_string()], Value::from(seed))?;
    }
    if merged.as_object().is_some_and(Map::is_empty) {
        return Err(CliError::Schema("no config given: use --config and/or --preset".into()));
    }
    let cfg: SimulationConfig = serde_json::from_value(merged).map_err(|e| CliError::Schema(e.to_string()))?;
    Ok(cfg.resolve()?)
}

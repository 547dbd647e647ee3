//! Fixture regression: recompute every `fixtures/<module>/<name>.json` and compare canonical payloads.
//!
//! A fixture is `{"command": …, "config": {…}, "payload": …}`. Runs that end in an engine error
//! are recorded as `{"error": kind}` so expected failures are fixtures too.

use crate::commands;
use crate::config::{Layer, RunConfig};
use crate::envelope::{canonical, pretty};
use crate::{CliError, Result};
use nygaard_core::error::Error as CoreError;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegressReport {
    pub checked: usize,
    pub mismatched: Vec<String>,
    pub warnings: Vec<String>,
}

impl RegressReport {
    pub fn passed(&self) -> bool {
        self.mismatched.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "checked": self.checked,
            "mismatched": self.mismatched,
            "warnings": self.warnings,
            "passed": self.passed(),
        })
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::NotStabilized(_) => "NotStabilized",
        CoreError::PrecisionExhausted { .. } => "PrecisionExhausted",
        CoreError::TruncationTooTight(_) => "TruncationTooTight",
        CoreError::BoundViolated(_) => "BoundViolated",
        CoreError::Invalid(_) => "Invalid",
        _ => "Engine",
    }
}

/// Payload of a run, with engine errors folded into `{"error": kind}`.
pub fn payload_or_error(command: &str, cfg: &RunConfig) -> Result<Value> {
    match commands::run(command, cfg) {
        Ok(v) => Ok(v),
        Err(CliError::Engine(e)) => Ok(json!({ "error": error_kind(&e) })),
        Err(other) => Err(other),
    }
}

fn collect(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect(&path, out)?;
        } else if path.extension().is_some_and(|x| x == "json") {
            out.push(path);
        }
    }
    Ok(())
}

pub fn fixture_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("{} is not a directory", dir.display())));
    }
    let mut out = Vec::new();
    collect(dir, &mut out)?;
    Ok(out)
}

struct Fixture {
    command: String,
    config: Value,
    payload: Value,
}

fn load(path: &Path) -> Result<Fixture> {
    let bad = |msg: String| CliError::Fixture { path: path.display().to_string(), msg };
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(format!("parse error: {e}")))?;
    let command = v
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing string field `command`".into()))?
        .to_string();
    let config = v.get("config").cloned().ok_or_else(|| bad("missing field `config`".into()))?;
    let payload = v.get("payload").cloned().unwrap_or(Value::Null);
    Ok(Fixture { command, config, payload })
}

/// Recompute one fixture; returns the fresh payload.
pub fn recompute(path: &Path) -> Result<(Value, Value)> {
    let fx = load(path)?;
    let bad = |msg: String| CliError::Fixture { path: path.display().to_string(), msg };
    let layer = Layer::from_json(&fx.config).map_err(bad)?;
    let cfg = RunConfig::resolve(&layer).map_err(|e| bad(e.to_string()))?;
    Ok((fx.payload, payload_or_error(&fx.command, &cfg)?))
}

/// With `bless`, payloads are rewritten instead of compared.
pub fn fixture_regress(dir: &Path, bless: bool) -> Result<RegressReport> {
    let paths = fixture_paths(dir)?;
    let mut report = RegressReport::default();
    if paths.is_empty() {
        report.warnings.push(format!("no fixtures under {}", dir.display()));
    }
    for path in paths {
        let (expected, fresh) = recompute(&path)?;
        report.checked += 1;
        if bless {
            let fx = load(&path)?;
            let v = json!({"command": fx.command, "config": fx.config, "payload": fresh});
            std::fs::write(&path, pretty(&v) + "\n")?;
        } else if canonical(&expected) != canonical(&fresh) {
            report.mismatched.push(path.display().to_string());
        }
    }
    Ok(report)
}

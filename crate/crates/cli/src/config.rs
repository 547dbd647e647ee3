//! Run configuration: flags over a flat `key = value` file over defaults.

use crate::{CliError, Result};
use nygaard_core::syntomic::Model;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;

/// Keys as they appear in config files, fixtures and the config echo.
pub const KEYS: &[&str] = &["p", "n", "r", "N", "e", "W", "M", "V", "d", "i", "model", "f", "fixture"];

fn canonical_key(k: &str) -> Option<&'static str> {
    let k = match k {
        "prime" => "p",
        "precision" => "n",
        "trunc" => "N",
        "depth" => "e",
        "weight-bound" | "weight_bound" => "W",
        "box" => "M",
        "cap" => "V",
        "dim" => "d",
        "twist" => "i",
        other => other,
    };
    KEYS.iter().copied().find(|&c| c == k)
}

/// Unparsed settings from one source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer(pub BTreeMap<&'static str, String>);

impl Layer {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let k = canonical_key(key).ok_or_else(|| CliError::Usage(format!("unknown config key `{key}`")))?;
        self.0.insert(k, value.into());
        Ok(())
    }

    pub fn parse_text(text: &str, origin: &str) -> Result<Self> {
        let mut layer = Layer::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key = value", no + 1)))?;
            layer.set(k.trim(), v.trim())?;
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_text(&text, &path.display().to_string())
    }

    /// A fixture's `config` object; numbers and strings are both accepted.
    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        let obj = v.as_object().ok_or("config is not an object")?;
        let mut layer = Layer::default();
        for (k, val) in obj {
            let s = match val {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                Value::Null => continue,
                other => return Err(format!("config value for `{k}` has unsupported type: {other}")),
            };
            layer.set(k, s).map_err(|e| e.to_string())?;
        }
        Ok(layer)
    }

    /// Keys set here win over `lower`.
    pub fn over(&self, lower: &Layer) -> Layer {
        let mut out = lower.clone();
        out.0.extend(self.0.iter().map(|(k, v)| (*k, v.clone())));
        out
    }
}

/// Validated settings. `W`, `M` and `V` default per command when unset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    pub r: u32,
    pub n_trunc: usize,
    pub e: u32,
    pub weight_bound: Option<u32>,
    pub box_bound: Option<i64>,
    pub cap: Option<u32>,
    pub d: usize,
    pub i: i64,
    pub model: Model,
    pub f: String,
    pub fixture: String,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn parse<T: std::str::FromStr>(layer: &Layer, key: &str) -> Result<Option<T>> {
    match layer.0.get(key) {
        None => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("invalid value `{s}` for -{key}"))),
    }
}

fn positive<T: PartialOrd + Default + Copy + std::fmt::Display>(v: T, key: &str) -> Result<T> {
    if v <= T::default() {
        return Err(CliError::Usage(format!("-{key} must be at least 1, got {v}")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn resolve(layer: &Layer) -> Result<Self> {
        let p: u64 = match layer.0.get("p") {
            Some(s) if s.trim().is_empty() => return Err(CliError::Usage("empty prime".into())),
            _ => parse(layer, "p")?.unwrap_or(2),
        };
        if !is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
        let model = match layer.0.get("model").map(String::as_str) {
            None | Some("charp") => Model::Charp,
            Some("q") => Model::Q,
            Some("acrys") => Model::Acrys,
            Some(other) => return Err(CliError::Usage(format!("unknown model `{other}` (charp, q, acrys)"))),
        };
        let cfg = RunConfig {
            p,
            n: positive(parse(layer, "n")?.unwrap_or(2), "n")?,
            r: positive(parse(layer, "r")?.unwrap_or(1), "r")?,
            n_trunc: positive(parse(layer, "N")?.unwrap_or(4), "N")?,
            e: parse(layer, "e")?.unwrap_or(2),
            weight_bound: parse(layer, "W")?.map(|w| positive(w, "W")).transpose()?,
            box_bound: parse(layer, "M")?.map(|m| positive(m, "M")).transpose()?,
            cap: parse(layer, "V")?,
            d: positive(parse(layer, "d")?.unwrap_or(1), "d")?,
            i: parse(layer, "i")?.unwrap_or(0),
            model,
            f: layer.0.get("f").cloned().unwrap_or_else(|| "p".into()),
            fixture: layer.0.get("fixture").cloned().unwrap_or_else(|| "koszul_p".into()),
        };
        Ok(cfg)
    }

    pub fn weight_bound(&self) -> u32 {
        self.weight_bound.unwrap_or(2 * (self.p * self.p) as u32)
    }

    pub fn box_bound(&self) -> i64 {
        self.box_bound.unwrap_or(nygaard_core::derham_witt::default_box(self.p))
    }

    /// The settings a command actually reads, with defaults filled in.
    pub fn echo(&self, command: &str) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("p".into(), json!(self.p));
        let mut put = |k: &str, v: Value| {
            m.insert(k.into(), v);
        };
        match command {
            "witt" => {
                put("n", json!(self.n));
                put("N", json!(self.n_trunc));
            }
            "eta" => {
                put("f", json!(self.f));
                put("fixture", json!(self.fixture));
            }
            "derham" => {
                put("d", json!(self.d));
                put("n", json!(self.n));
                put("i", json!(self.i));
                put("M", json!(self.box_bound()));
            }
            "qderham" => {
                put("d", json!(self.d));
                put("n", json!(self.n));
                put("N", json!(self.n_trunc));
                put("i", json!(self.i));
                put("M", json!(self.box_bound()));
            }
            "acrys" => {
                put("d", json!(self.d));
                put("e", json!(self.e));
                put("n", json!(self.n));
                put("W", json!(self.weight_bound()));
                put("i", json!(self.i));
            }
            "syntomic" => {
                put("model", json!(self.model.tag()));
                put("i", json!(self.i));
                put("r", json!(self.r));
                put("d", json!(self.d));
                match self.model {
                    Model::Acrys => {
                        put("e", json!(self.e));
                        put("W", json!(self.weight_bound()));
                    }
                    Model::Charp | Model::Q => {
                        put("M", json!(self.box_bound()));
                        if let Some(v) = self.cap {
                            put("V", json!(v));
                        }
                        if self.model == Model::Q {
                            put("N", json!(self.n_trunc));
                        }
                    }
                }
            }
            _ => {}
        }
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_division() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = Layer::parse_text("p = 3\n# comment\nr=2\nbox = 5\n", "cfg").unwrap();
        let mut flags = Layer::default();
        flags.set("r", "3").unwrap();
        let cfg = RunConfig::resolve(&flags.over(&file)).unwrap();
        assert_eq!((cfg.p, cfg.r, cfg.box_bound(), cfg.d), (3, 3, 5, 1));
    }

    #[test]
    fn bad_inputs_are_usage_errors() {
        assert!(Layer::parse_text("nonsense", "cfg").is_err());
        assert!(Layer::parse_text("colour = red", "cfg").is_err());
        let mut l = Layer::default();
        l.set("p", "4").unwrap();
        assert!(matches!(RunConfig::resolve(&l), Err(CliError::Usage(_))));
        l.set("p", "").unwrap();
        assert!(matches!(RunConfig::resolve(&l), Err(CliError::Usage(_))));
        l.set("p", "2").unwrap();
        l.set("r", "0").unwrap();
        assert!(matches!(RunConfig::resolve(&l), Err(CliError::Usage(_))));
    }
}

//! Flat `key = value` run configuration.
//!
//! ```text
//! # default hyperbolic leaf
//! construction = h2
//! delta_rad = 0.1
//! epsilon = 0.1
//! n_max = 2
//! samples_per_segment = 4096
//! oracle = tower
//! out_dir = out
//! emit = leaf,csv,svg
//! ```
//!
//! `k_width` applies to `e2` only; there `delta_rad` is the parabola
//! coefficient. Oracles are `tower`, `ackermann:M`, `table:PATH` (relative
//! to the config file) or `none` for the bare horocycle.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::growth::GrowthOracle;
use crate::leafgen::{ConstructionParams, Geometry};

pub const KEYS: [&str; 9] = [
    "construction",
    "delta_rad",
    "epsilon",
    "k_width",
    "n_max",
    "samples_per_segment",
    "oracle",
    "out_dir",
    "emit",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emit {
    Csv,
    Svg,
    Leaf,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Emit::Csv),
            "svg" => Ok(Emit::Svg),
            "leaf" => Ok(Emit::Leaf),
            other => Err(format!("unknown emit kind '{other}' (expected csv, svg or leaf)")),
        }
    }
}

pub fn parse_emit(s: &str) -> Result<BTreeSet<Emit>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(Emit::from_str).collect()
}

/// `KIND[:ARG]`; `None` is the bare horocycle.
pub fn parse_oracle(spec: &str, base: &Path) -> Result<Option<GrowthOracle>, String> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    };
    match (kind, arg) {
        ("none", None) => Ok(None),
        ("tower", None) => Ok(Some(GrowthOracle::Tower)),
        ("ackermann", Some(m)) => m
            .parse::<u64>()
            .map(|m| Some(GrowthOracle::AckermannLog { m }))
            .map_err(|_| format!("ackermann row '{m}' is not a non-negative integer")),
        ("table", Some(p)) if !p.is_empty() => GrowthOracle::load_table(&base.join(p))
            .map(Some)
            .map_err(|e| e.to_string()),
        _ => Err(format!(
            "bad oracle '{spec}' (expected tower, ackermann:M, table:PATH or none)"
        )),
    }
}

/// Settings as read from a config file, before flags are applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub construction: Option<Geometry>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub k_width: Option<f64>,
    pub n_max: Option<usize>,
    pub samples_per_segment: Option<usize>,
    pub oracle: Option<Option<GrowthOracle>>,
    pub out_dir: Option<PathBuf>,
    pub emit: Option<BTreeSet<Emit>>,
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("{key}: cannot parse '{v}'"))
}

impl ConfigFile {
    /// Parses config text. Relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<ConfigFile, String> {
        let mut c = ConfigFile::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at = |m: String| format!("config line {}: {m}", i + 1);
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| at(format!("expected key = value, got '{line}'")))?;
            if !KEYS.contains(&key) {
                return Err(at(format!("unknown key '{key}'")));
            }
            if !seen.insert(key.to_string()) {
                return Err(at(format!("duplicate key '{key}'")));
            }
            match key {
                "construction" => {
                    c.construction = Some(match value {
                        "h2" => Geometry::H2,
                        "e2" => Geometry::E2,
                        _ => return Err(at(format!("construction must be h2 or e2, got '{value}'"))),
                    })
                }
                "delta_rad" => c.delta = Some(num(key, value).map_err(at)?),
                "epsilon" => c.epsilon = Some(num(key, value).map_err(at)?),
                "k_width" => c.k_width = Some(num(key, value).map_err(at)?),
                "n_max" => c.n_max = Some(num(key, value).map_err(at)?),
                "samples_per_segment" => c.samples_per_segment = Some(num(key, value).map_err(at)?),
                "oracle" => c.oracle = Some(parse_oracle(value, base).map_err(at)?),
                "out_dir" => c.out_dir = Some(base.join(value)),
                "emit" => c.emit = Some(parse_emit(value).map_err(at)?),
                _ => unreachable!(),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        ConfigFile::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub params: ConstructionParams,
    pub oracle: Option<GrowthOracle>,
    pub out_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
}

/// Command-line overrides, applied over the config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub geometry: Option<Geometry>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub k_width: Option<f64>,
    pub n_max: Option<usize>,
    pub samples: Option<usize>,
    pub oracle: Option<Option<GrowthOracle>>,
    pub out_dir: Option<PathBuf>,
    pub emit: Option<BTreeSet<Emit>>,
}

impl RunConfig {
    /// Defaults, then the file, then the flags; validated before return.
    pub fn resolve(file: ConfigFile, flags: Overrides) -> Result<RunConfig, String> {
        let geometry = flags.geometry.or(file.construction).unwrap_or(Geometry::H2);
        let mut p = ConstructionParams::defaults_for(geometry);
        p.delta = flags.delta.or(file.delta).unwrap_or(p.delta);
        p.epsilon = flags.epsilon.or(file.epsilon).unwrap_or(p.epsilon);
        p.k_width = flags.k_width.or(file.k_width).unwrap_or(p.k_width);
        p.n_max = flags.n_max.or(file.n_max).unwrap_or(p.n_max);
        p.samples_per_segment = flags.samples.or(file.samples_per_segment).unwrap_or(p.samples_per_segment);
        p.validate(geometry).map_err(|e| e.to_string())?;
        let oracle = flags.oracle.or(file.oracle).unwrap_or(Some(GrowthOracle::Tower));
        if oracle.is_none() && geometry == Geometry::E2 {
            return Err("oracle none (bare horocycle) exists only for construction h2".into());
        }
        Ok(RunConfig {
            geometry,
            params: p,
            oracle,
            out_dir: flags.out_dir.or(file.out_dir).unwrap_or_else(|| PathBuf::from("out")),
            emit: flags
                .emit
                .or(file.emit)
                .unwrap_or_else(|| [Emit::Leaf, Emit::Csv, Emit::Svg].into_iter().collect()),
        })
    }
}

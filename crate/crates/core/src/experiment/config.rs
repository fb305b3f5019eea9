//! Flat TOML scenario files.
//!
//! Every key is optional; missing keys keep the [`Scenario::default`] values.
//!
//! | key | meaning |
//! |-----|---------|
//! | `n_frames`, `pixels`, `raw_bits`, `feature_bits` | frame source |
//! | `bandwidth`, `se_up`, `se_down` | link, Hz and bit/s/Hz |
//! | `m_min`, `m_max` | model-update range, bit/s |
//! | `ladder` | array of bits-per-pixel levels |
//! | `cloud_feature_only`, `cloud_ceiling`, `cloud_kappa` | exponential `g` |
//! | `cloud_table` | two-column file replacing the exponential `g` |
//! | `edge_baseline`, `edge_max`, `edge_kappa` | exponential `h` |
//! | `edge_table` | two-column file replacing `h` (its ends set the update range) |
//! | `model_names`, `model_cloud_ceiling`, `model_edge_max`, `model_cloud_feature_only`, `model_edge_baseline` | parallel arrays, one entry per model configuration |
//! | `solver_b_up_points`, `solver_beta_scan_points`, `solver_beta_tol`, `solver_refine_passes` | solver |
//! | `oracle_beta_steps`, `oracle_b_up_steps`, `oracle_m_steps` | oracle grid |
//!
//! Table paths are relative to the config file.

use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::allocator::SolverSettings;
use crate::error::{Error, Result};
use crate::oracle::OracleGrid;
use crate::quantization::QuantizationLadder;
use crate::response::{Breakpoints, CloudResponseModel, EdgeResponseModel};
use crate::scenario::Scenario;

/// An alternative pair of response models, selected by the `model_config`
/// sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub name: String,
    pub cloud_model: CloudResponseModel,
    pub edge_model: EdgeResponseModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    pub solver: SolverSettings,
    pub oracle: OracleGrid,
    pub model_configs: Vec<ModelConfig>,
}

impl Default for Config {
    fn default() -> Self {
        let scenario = Scenario::default();
        Self {
            oracle: OracleGrid::for_scenario(&scenario),
            scenario,
            solver: SolverSettings::default(),
            model_configs: Vec::new(),
        }
    }
}

const KEYS: &[&str] = &[
    "n_frames",
    "pixels",
    "raw_bits",
    "feature_bits",
    "bandwidth",
    "se_up",
    "se_down",
    "m_min",
    "m_max",
    "ladder",
    "cloud_feature_only",
    "cloud_ceiling",
    "cloud_kappa",
    "cloud_table",
    "edge_baseline",
    "edge_max",
    "edge_kappa",
    "edge_table",
    "model_names",
    "model_cloud_ceiling",
    "model_edge_max",
    "model_cloud_feature_only",
    "model_edge_baseline",
    "solver_b_up_points",
    "solver_beta_scan_points",
    "solver_beta_tol",
    "solver_refine_passes",
    "oracle_beta_steps",
    "oracle_b_up_steps",
    "oracle_m_steps",
];

const CLOUD_FEATURE_ONLY: f64 = 0.70;
const CLOUD_CEILING: f64 = 0.92;
const CLOUD_KAPPA: f64 = 3.0;
const EDGE_BASELINE: f64 = 0.75;
const EDGE_MAX: f64 = 0.85;
const EDGE_KAPPA: f64 = 3.0;

/// Reads the scenario part of a config file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    load_config(path).map(|c| c.scenario)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, path, &base)
}

/// Parses config text; `origin` labels errors and `base` resolves table paths.
pub fn parse_config(text: &str, origin: &Path, base: &Path) -> Result<Config> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| Error::Parse {
        path: origin.to_path_buf(),
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        reason: e.message().to_string(),
    })?;
    let doc = Doc {
        table: &table,
        text,
        origin,
    };
    for (key, value) in &table {
        if !KEYS.contains(&key.as_str()) {
            return Err(doc.err(key, format!("unknown key `{key}`")));
        }
        if value.is_table() {
            return Err(doc.err(key, format!("`{key}` must be a plain value, not a table")));
        }
    }

    let d = Scenario::default();
    let m_min = doc.float("m_min")?;
    let m_max = doc.float("m_max")?;
    if let (Some(lo), Some(hi)) = (m_min, m_max) {
        if lo >= hi {
            return Err(Error::invalid(format!(
                "`m_min` ({lo}) must be below `m_max` ({hi})"
            )));
        }
    }

    let cloud_model = match doc.path("cloud_table", base)? {
        Some(p) => CloudResponseModel::table(Breakpoints::load(&p)?)?,
        None => CloudResponseModel::exponential(
            doc.float("cloud_feature_only")?
                .unwrap_or(CLOUD_FEATURE_ONLY),
            doc.float("cloud_ceiling")?.unwrap_or(CLOUD_CEILING),
            doc.float("cloud_kappa")?.unwrap_or(CLOUD_KAPPA),
        )
        .map_err(|e| Error::field("cloud_model", e.to_string()))?,
    };
    let edge_model = match doc.path("edge_table", base)? {
        Some(p) => {
            if m_min.is_some() || m_max.is_some() {
                return Err(Error::field(
                    "edge_table",
                    "the table's first and last rates define the update range; drop `m_min`/`m_max`",
                ));
            }
            EdgeResponseModel::table(Breakpoints::load(&p)?)?
        }
        None => EdgeResponseModel::exponential(
            doc.float("edge_baseline")?.unwrap_or(EDGE_BASELINE),
            doc.float("edge_max")?.unwrap_or(EDGE_MAX),
            m_min.unwrap_or(d.m_min()),
            m_max.unwrap_or(d.m_max()),
            doc.float("edge_kappa")?.unwrap_or(EDGE_KAPPA),
        )
        .map_err(|e| Error::field("edge_model", e.to_string()))?,
    };

    let ladder = match doc.floats("ladder")? {
        Some(levels) => QuantizationLadder::new(levels)?,
        None => d.ladder.clone(),
    };
    let scenario = Scenario {
        n_frames: doc.float("n_frames")?.unwrap_or(d.n_frames),
        pixels: doc.float("pixels")?.unwrap_or(d.pixels),
        raw_bits: doc.float("raw_bits")?.unwrap_or(d.raw_bits),
        feature_bits: doc.float("feature_bits")?.unwrap_or(d.feature_bits),
        bandwidth: doc.float("bandwidth")?.unwrap_or(d.bandwidth),
        se_up: doc.float("se_up")?.unwrap_or(d.se_up),
        se_down: doc.float("se_down")?.unwrap_or(d.se_down),
        ladder,
        cloud_model,
        edge_model,
        frame_models: Vec::new(),
    };
    scenario.validate()?;

    let ds = SolverSettings::default();
    let solver = SolverSettings {
        b_up_points: doc.count("solver_b_up_points")?.unwrap_or(ds.b_up_points),
        beta_scan_points: doc
            .count("solver_beta_scan_points")?
            .unwrap_or(ds.beta_scan_points),
        beta_tol: doc.float("solver_beta_tol")?.unwrap_or(ds.beta_tol),
        refine_passes: doc
            .count("solver_refine_passes")?
            .unwrap_or(ds.refine_passes),
    };
    solver.validate()?;

    let dg = OracleGrid::for_scenario(&scenario);
    let oracle = OracleGrid {
        beta_steps: doc.count("oracle_beta_steps")?.unwrap_or(dg.beta_steps),
        b_up_steps: doc.count("oracle_b_up_steps")?.unwrap_or(dg.b_up_steps),
        m_steps: doc.count("oracle_m_steps")?.unwrap_or(dg.m_steps),
        bit_levels: dg.bit_levels,
    };
    oracle.validate()?;

    let model_configs = model_configs(&doc, &scenario)?;
    Ok(Config {
        scenario,
        solver,
        oracle,
        model_configs,
    })
}

fn model_configs(doc: &Doc, scenario: &Scenario) -> Result<Vec<ModelConfig>> {
    let ceilings = doc.floats("model_cloud_ceiling")?;
    let maxes = doc.floats("model_edge_max")?;
    let (ceilings, maxes) = match (ceilings, maxes) {
        (None, None) => return Ok(Vec::new()),
        (Some(c), Some(m)) => (c, m),
        _ => {
            return Err(Error::invalid(
                "`model_cloud_ceiling` and `model_edge_max` must be given together",
            ))
        }
    };
    let n = ceilings.len();
    let per_model = |key: &str, fallback: f64| -> Result<Vec<f64>> {
        match doc.floats(key)? {
            Some(v) if v.len() == n => Ok(v),
            Some(v) => Err(Error::field(
                key,
                format!("has {} entries, expected {n}", v.len()),
            )),
            None => Ok(vec![fallback; n]),
        }
    };
    let maxes = match maxes.len() == n {
        true => maxes,
        false => {
            return Err(Error::field(
                "model_edge_max",
                format!("has {} entries, expected {n}", maxes.len()),
            ))
        }
    };
    let feature_only = per_model(
        "model_cloud_feature_only",
        scenario.cloud_model.map_feature_only(),
    )?;
    let baseline = per_model("model_edge_baseline", scenario.edge_model.map_baseline())?;
    let names = match doc.strings("model_names")? {
        Some(v) if v.len() == n => v,
        Some(v) => {
            return Err(Error::field(
                "model_names",
                format!("has {} entries, expected {n}", v.len()),
            ))
        }
        None => (1..=n).map(|i| format!("config {i}")).collect(),
    };
    let cloud_kappa = doc.float("cloud_kappa")?.unwrap_or(CLOUD_KAPPA);
    let edge_kappa = doc.float("edge_kappa")?.unwrap_or(EDGE_KAPPA);
    (0..n)
        .map(|i| {
            let wrap = |e: Error| Error::field(format!("model {}", names[i]), e.to_string());
            Ok(ModelConfig {
                name: names[i].clone(),
                cloud_model: CloudResponseModel::exponential(
                    feature_only[i],
                    ceilings[i],
                    cloud_kappa,
                )
                .map_err(wrap)?,
                edge_model: EdgeResponseModel::exponential(
                    baseline[i],
                    maxes[i],
                    scenario.m_min(),
                    scenario.m_max(),
                    edge_kappa,
                )
                .map_err(wrap)?,
            })
        })
        .collect()
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

struct Doc<'a> {
    table: &'a Table,
    text: &'a str,
    origin: &'a Path,
}

impl Doc<'_> {
    /// Line of the first assignment to `key`, for error messages.
    fn line(&self, key: &str) -> usize {
        self.text
            .lines()
            .position(|l| {
                let l = l.trim_start();
                l.strip_prefix(key)
                    .is_some_and(|rest| rest.trim_start().starts_with('='))
                    || l.strip_prefix(&format!("\"{key}\"")).is_some()
            })
            .map_or(1, |i| i + 1)
    }

    fn err(&self, key: &str, reason: String) -> Error {
        Error::Parse {
            path: self.origin.to_path_buf(),
            line: self.line(key),
            reason,
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => as_float(v)
                .map(Some)
                .ok_or_else(|| self.err(key, format!("`{key}` must be a number"))),
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(self.err(key, format!("`{key}` must be a non-negative integer"))),
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    as_float(v).ok_or_else(|| self.err(key, format!("`{key}` must hold numbers")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.err(key, format!("`{key}` must be an array of numbers"))),
        }
    }

    fn strings(&self, key: &str) -> Result<Option<Vec<String>>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| self.err(key, format!("`{key}` must hold strings")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.err(key, format!("`{key}` must be an array of strings"))),
        }
    }

    fn path(&self, key: &str, base: &Path) -> Result<Option<PathBuf>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(base.join(s))),
            Some(_) => Err(self.err(key, format!("`{key}` must be a file path"))),
        }
    }
}

fn as_float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config> {
        parse_config(text, Path::new("cfg.toml"), Path::new("."))
    }

    #[test]
    fn empty_config_is_default_scenario() {
        let c = parse("").unwrap();
        assert_eq!(c.scenario, Scenario::default());
        assert_eq!(c.solver, SolverSettings::default());
        assert_eq!(c.oracle, OracleGrid::for_scenario(&Scenario::default()));
        assert!(c.model_configs.is_empty());
    }

    #[test]
    fn overrides_apply() {
        let c = parse("bandwidth = 40e6\nn_frames = 15\nladder = [0.25, 0.5]\n").unwrap();
        assert_eq!(c.scenario.bandwidth, 40e6);
        assert_eq!(c.scenario.n_frames, 15.0);
        assert_eq!(c.scenario.ladder.levels(), &[0.25, 0.5]);
        assert_eq!(c.oracle.bit_levels, vec![0.0, 0.25, 0.5]);
    }

    #[test]
    fn inverted_update_range_names_both_fields() {
        let msg = parse("m_min = 23e6\nm_max = 230e3\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("m_min") && msg.contains("m_max"), "{msg}");
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let msg = parse("bandwidth = 1e6\n\nbandwith = 2e6\n")
            .unwrap_err()
            .to_string();
        assert_eq!(msg, "cfg.toml:3: unknown key `bandwith`");
    }

    #[test]
    fn syntax_error_reports_its_line() {
        let err = parse("n_frames = 10\nse_up = = 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn wrong_type_and_bad_value() {
        let msg = parse("se_up = \"fast\"\n").unwrap_err().to_string();
        assert!(
            msg.starts_with("cfg.toml:1:") && msg.contains("se_up"),
            "{msg}"
        );
        let msg = parse("se_down = -1\n").unwrap_err().to_string();
        assert!(msg.contains("se_down"), "{msg}");
    }

    #[test]
    fn model_configs_from_parallel_arrays() {
        let c = parse(
            "model_names = [\"a\", \"b\"]\nmodel_cloud_ceiling = [0.92, 0.95]\nmodel_edge_max = [0.85, 0.88]\n",
        )
        .unwrap();
        assert_eq!(c.model_configs.len(), 2);
        assert_eq!(c.model_configs[1].name, "b");
        assert_eq!(c.model_configs[1].cloud_model.map_ceiling(), 0.95);
        assert_eq!(c.model_configs[1].edge_model.map_max(), 0.88);
        assert!(parse("model_cloud_ceiling = [0.9]\nmodel_edge_max = [0.8, 0.9]\n").is_err());
        assert!(parse("model_cloud_ceiling = [0.9]\n").is_err());
    }

    #[test]
    fn tables_resolve_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("g.txt"), "0 0.6\n0.5 0.8\n1.0 0.9\n").unwrap();
        std::fs::write(dir.path().join("h.txt"), "1e5 0.7\n1e7 0.8\n").unwrap();
        let cfg = dir.path().join("s.toml");
        std::fs::write(&cfg, "cloud_table = \"g.txt\"\nedge_table = \"h.txt\"\n").unwrap();
        let s = load_scenario(&cfg).unwrap();
        assert_eq!(s.cloud_model.map_ceiling(), 0.9);
        assert_eq!((s.m_min(), s.m_max()), (1e5, 1e7));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_config("/nonexistent/x.toml"),
            Err(Error::Io { .. })
        ));
    }
}

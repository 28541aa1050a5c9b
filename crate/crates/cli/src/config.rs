//! Run configuration: a JSON document, optionally patched by `--set key=value`.

use std::fmt;
use std::path::{Path, PathBuf};

use polariton_core::model::{HilbertSpace, SystemParams};
use polariton_core::transitions::DEFAULT_TYPE_THRESHOLD;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Eigen,
    Sweep,
    Table1,
    Spectrum,
    Classify,
    OracleCheck,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Eigen => "eigen",
            Task::Sweep => "sweep",
            Task::Table1 => "table1",
            Task::Spectrum => "spectrum",
            Task::Classify => "classify",
            Task::OracleCheck => "oracle-check",
        })
    }
}

/// Linear grid `start..=stop` with `count` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect()
    }

    fn validate(&self, what: &str) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Config(format!(
                "{what}: count must be at least 2, got {}",
                self.count
            )));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Config(format!(
                "{what}: need finite start < stop, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }
}

/// Quantities an axis may sweep.
pub const AXIS_NAMES: &[&str] = &[
    "omega_q", "omega_r", "g", "omega_d", "Omega", "gamma_q", "gamma_c", "A_c", "A_p", "omega_c",
    "Delta",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize) -> Self {
        Self {
            name: name.to_string(),
            start,
            stop,
            count,
        }
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    #[default]
    Rotating,
    Lab,
}

/// Probe and control amplitudes on the cavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Drive {
    #[serde(rename = "A_c")]
    pub a_c: f64,
    #[serde(rename = "A_p")]
    pub a_p: f64,
    /// Control frequency; omitted means resonant with omega_32 at every point.
    pub omega_c: Option<f64>,
    pub frame: Frame,
}

impl Default for Drive {
    fn default() -> Self {
        Self {
            a_c: 5.0,
            a_p: 0.01,
            omega_c: None,
            frame: Frame::Rotating,
        }
    }
}

impl Drive {
    /// Control frequency in the rotating frame of the qubit drive.
    pub fn rotating_omega_c(&self, omega_d: f64) -> Option<f64> {
        self.omega_c.map(|w| match self.frame {
            Frame::Rotating => w,
            Frame::Lab => w - omega_d,
        })
    }
}

/// Three-level rates given directly instead of from the polariton pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticRates {
    pub gamma_31: f64,
    pub gamma_32: f64,
    pub gamma_21: f64,
    #[serde(rename = "Omega_c")]
    pub omega_c: f64,
    #[serde(rename = "Delta_2", default)]
    pub delta_2: f64,
    #[serde(default)]
    pub gamma_3deph: f64,
    #[serde(default)]
    pub gamma_2deph: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    /// Standard output when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    #[default]
    Energy,
    Tracked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<Task>,
    pub params: SystemParams,
    pub n_max: usize,
    pub axes: Vec<Axis>,
    pub drive: Drive,
    pub delta: Grid,
    pub rates: Option<SyntheticRates>,
    pub output: Output,
    pub seed: u64,
    pub type_threshold: f64,
    pub probe_epsilon: Option<f64>,
    pub labeling: LabelMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            task: None,
            params: SystemParams::default(),
            n_max: HilbertSpace::DEFAULT_N_MAX,
            axes: Vec::new(),
            drive: Drive::default(),
            delta: Grid::new(-40.0, 40.0, 161),
            rates: None,
            output: Output::default(),
            seed: 0,
            type_threshold: DEFAULT_TYPE_THRESHOLD,
            probe_epsilon: None,
            labeling: LabelMode::Energy,
        }
    }
}

impl RunConfig {
    /// Parses directly from text so errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn from_value(value: Value) -> Result<Self, CliError> {
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Reads `path` (or starts from defaults) and applies `--set` overrides.
    pub fn load(path: Option<&Path>, sets: &[String]) -> Result<Self, CliError> {
        let base = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Self::from_json(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Self::default(),
        };
        if sets.is_empty() {
            return Ok(base);
        }
        // Overrides go onto the filled-in document so `delta.count` keeps its siblings.
        let mut value = serde_json::to_value(base).expect("config serializes");
        for set in sets {
            apply_set(&mut value, set)?;
        }
        Self::from_value(value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn space(&self) -> Result<HilbertSpace, CliError> {
        HilbertSpace::new(self.n_max).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(|e| CliError::Config(format!("params: {e}")))?;
        self.space()?;
        for (k, axis) in self.axes.iter().enumerate() {
            if !AXIS_NAMES.contains(&axis.name.as_str()) {
                return Err(CliError::Config(format!(
                    "axes[{k}]: unknown parameter `{}` (expected one of {})",
                    axis.name,
                    AXIS_NAMES.join(", ")
                )));
            }
            axis.grid()
                .validate(&format!("axes[{k}] ({})", axis.name))?;
        }
        if self.axes.len() > 2 {
            return Err(CliError::Config(format!(
                "at most two axes are supported, got {}",
                self.axes.len()
            )));
        }
        self.delta.validate("delta")?;
        if !(self.type_threshold > 0.0) {
            return Err(CliError::Config(format!(
                "type_threshold must be positive, got {}",
                self.type_threshold
            )));
        }
        Ok(())
    }
}

/// Applies `a.b.c=value`; the value is parsed as JSON and otherwise kept as a string.
pub fn apply_set(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{assignment}`")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("--set: empty key in `{path}`")));
    }
    let mut node = root;
    for (depth, key) in keys.iter().enumerate() {
        let last = depth + 1 == keys.len();
        node = match node {
            Value::Array(items) => {
                let index: usize = key.parse().map_err(|_| {
                    CliError::Config(format!("--set: `{key}` in `{path}` must index an array"))
                })?;
                let len = items.len();
                items.get_mut(index).ok_or_else(|| {
                    CliError::Config(format!(
                        "--set: index {index} out of range ({len} items) in `{path}`"
                    ))
                })?
            }
            Value::Object(map) => map.entry(key.to_string()).or_insert(Value::Null),
            other => {
                if other.is_null() {
                    *other = Value::Object(Default::default());
                    other
                        .as_object_mut()
                        .unwrap()
                        .entry(key.to_string())
                        .or_insert(Value::Null)
                } else {
                    return Err(CliError::Config(format!(
                        "--set: `{path}` descends into a scalar"
                    )));
                }
            }
        };
        if last {
            *node = value;
            return Ok(());
        }
    }
    unreachable!("split always yields at least one key")
}

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::estimators::DfaSelection;
use crate::lmcore::{ProcessKind, ProcessSpec};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "LMDISC_WORKERS";

/// How each replicate path is observed before estimation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TransformSetting {
    Continuous,
    Sign,
    /// Round-off with `delta = sqrt(D / chi)`.
    Chi(f64),
    /// Round-off with an explicit grid step.
    Delta(f64),
}

impl TransformSetting {
    pub fn resolve(&self, variance: f64) -> Result<Option<DiscretizationSpec>> {
        Ok(match *self {
            TransformSetting::Continuous => None,
            TransformSetting::Sign => Some(DiscretizationSpec::Sign),
            TransformSetting::Chi(chi) => Some(DiscretizationSpec::from_chi(chi, variance)?),
            TransformSetting::Delta(d) => Some(DiscretizationSpec::round(d)?),
        })
    }
}

impl fmt::Display for TransformSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSetting::Continuous => write!(f, "continuous"),
            TransformSetting::Sign => write!(f, "sign"),
            TransformSetting::Chi(c) => write!(f, "chi={c}"),
            TransformSetting::Delta(d) => write!(f, "delta={d}"),
        }
    }
}

impl FromStr for TransformSetting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let positive = |v: &str| -> Result<f64> {
            match v.trim().parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                _ => Err(Error::invalid(
                    "transform",
                    format!("`{s}`: value must be a positive number"),
                )),
            }
        };
        match lower.as_str() {
            "continuous" | "none" => Ok(TransformSetting::Continuous),
            "sign" => Ok(TransformSetting::Sign),
            _ => {
                if let Some(v) = lower.strip_prefix("chi=") {
                    Ok(TransformSetting::Chi(positive(v)?))
                } else if let Some(v) = lower.strip_prefix("delta=") {
                    Ok(TransformSetting::Delta(positive(v)?))
                } else {
                    Err(Error::invalid(
                        "transform",
                        format!("`{s}` (expected continuous, sign, chi=<x> or delta=<x>)"),
                    ))
                }
            }
        }
    }
}

impl TryFrom<String> for TransformSetting {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TransformSetting> for String {
    fn from(t: TransformSetting) -> String {
        t.to_string()
    }
}

/// One estimator configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "lowercase")]
pub enum EstimatorSetting {
    /// Local Whittle with bandwidth `floor(n^gamma)`.
    Lw { gamma: f64 },
    /// DFA fitted over the top fraction `q` of the box sizes.
    Dfa { q: f64 },
}

impl EstimatorSetting {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorSetting::Lw { .. } => "lw",
            EstimatorSetting::Dfa { .. } => "dfa",
        }
    }

    pub fn setting_label(&self) -> String {
        match self {
            EstimatorSetting::Lw { gamma } => format!("m=n^{gamma}"),
            EstimatorSetting::Dfa { q } => format!("q={q}"),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            EstimatorSetting::Lw { gamma } if !(gamma > 0.0 && gamma < 1.0) => Err(Error::invalid(
                "gamma",
                format!("{gamma} is outside (0, 1)"),
            )),
            EstimatorSetting::Dfa { q } if !(q > 0.0 && q <= 1.0) => {
                Err(Error::invalid("q", format!("{q} is outside (0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// Full Monte Carlo experiment matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    pub lengths: Vec<usize>,
    pub transforms: Vec<TransformSetting>,
    pub estimators: Vec<EstimatorSetting>,
    pub replicates: usize,
    pub master_seed: u64,
    /// `None` uses `LMDISC_WORKERS` or the rayon default.
    pub workers: Option<usize>,
    pub dfa_selection: DfaSelection,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::invalid("replicates", "must be at least 1"));
        }
        if self.lengths.is_empty() {
            return Err(Error::invalid("lengths", "at least one length is required"));
        }
        for &n in &self.lengths {
            if n < 16 {
                return Err(Error::invalid("lengths", format!("{n} is below 16")));
            }
        }
        if self.transforms.is_empty() {
            return Err(Error::invalid(
                "transforms",
                "at least one transform is required",
            ));
        }
        if self.estimators.is_empty() {
            return Err(Error::invalid(
                "estimators",
                "at least one estimator is required",
            ));
        }
        for t in &self.transforms {
            t.resolve(self.process.variance)?;
        }
        for e in &self.estimators {
            e.validate()?;
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers", "must be at least 1"));
        }
        Ok(())
    }

    /// Explicit worker count, else the environment variable, else `None`.
    pub fn effective_workers(&self) -> Result<Option<usize>> {
        if let Some(w) = self.workers {
            return Ok(Some(w));
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(w) if w > 0 => Ok(Some(w)),
                _ => Err(Error::invalid(
                    "workers",
                    format!("{WORKERS_ENV}=`{v}` is not a positive integer"),
                )),
            },
            Err(_) => Ok(None),
        }
    }
}

/// Flat key-value experiment file; every key is optional so that command
/// line flags can fill in or override values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub process: Option<ProcessKind>,
    pub hurst: Option<f64>,
    pub variance: Option<f64>,
    pub lengths: Option<Vec<usize>>,
    pub transforms: Option<Vec<TransformSetting>>,
    pub lw_gammas: Option<Vec<f64>>,
    pub dfa_qs: Option<Vec<f64>>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub dfa_selection: Option<DfaSelection>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    /// Values of `other` take precedence.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            process: other.process.or(self.process),
            hurst: other.hurst.or(self.hurst),
            variance: other.variance.or(self.variance),
            lengths: other.lengths.or(self.lengths),
            transforms: other.transforms.or(self.transforms),
            lw_gammas: other.lw_gammas.or(self.lw_gammas),
            dfa_qs: other.dfa_qs.or(self.dfa_qs),
            replicates: other.replicates.or(self.replicates),
            seed: other.seed.or(self.seed),
            workers: other.workers.or(self.workers),
            dfa_selection: other.dfa_selection.or(self.dfa_selection),
        }
    }

    /// Fill in defaults (fGn, H = 0.7, D = 1, n = 1024, all five transforms,
    /// L = 1000, seed 0, LW at gamma 0.5..0.8 and DFA at q = 1 when neither
    /// estimator list is given) and validate.
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let process = ProcessSpec::new(
            self.process.unwrap_or(ProcessKind::Fgn),
            self.hurst.unwrap_or(0.7),
            self.variance.unwrap_or(1.0),
        )?;
        let (lw, dfa) = match (self.lw_gammas, self.dfa_qs) {
            (None, None) => (vec![0.5, 0.6, 0.7, 0.8], vec![1.0]),
            (lw, dfa) => (lw.unwrap_or_default(), dfa.unwrap_or_default()),
        };
        let mut estimators: Vec<EstimatorSetting> = lw
            .into_iter()
            .map(|gamma| EstimatorSetting::Lw { gamma })
            .collect();
        estimators.extend(dfa.into_iter().map(|q| EstimatorSetting::Dfa { q }));
        let config = ExperimentConfig {
            process,
            lengths: self.lengths.unwrap_or_else(|| vec![1024]),
            transforms: self.transforms.unwrap_or_else(default_transforms),
            estimators,
            replicates: self.replicates.unwrap_or(1000),
            master_seed: self.seed.unwrap_or(0),
            workers: self.workers,
            dfa_selection: self.dfa_selection.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Sign, the three grid sizes of the tables, then the continuous path.
pub fn default_transforms() -> Vec<TransformSetting> {
    vec![
        TransformSetting::Sign,
        TransformSetting::Chi(0.1),
        TransformSetting::Chi(0.25),
        TransformSetting::Chi(0.5),
        TransformSetting::Continuous,
    ]
}

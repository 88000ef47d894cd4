use rayon::prelude::*;
use serde::Serialize;

use super::config::{EstimatorSetting, ExperimentConfig, TransformSetting};
use super::stats::summarize;
use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::estimators::{
    bandwidth, dfa_curve, dfa_estimate_with, local_whittle_from_periodogram, PeriodogramPlan,
};
use crate::lmcore::Series;
use crate::synth::{GaussianSimulator, SeedSpec};

/// One summarised cell of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub transform: String,
    pub n: usize,
    pub estimator: String,
    pub setting: String,
    pub mean: f64,
    /// Standard error of the mean; undefined for a single replicate.
    pub se: Option<f64>,
    pub q025: f64,
    pub q50: f64,
    pub q975: f64,
    pub replicates: usize,
}

/// Labels of one cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub n: usize,
    pub transform: TransformSetting,
    pub estimator: EstimatorSetting,
}

/// Every replicate estimate, by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub cells: Vec<Cell>,
    /// `estimates[c][r]` is replicate `r` of cell `c`.
    pub estimates: Vec<Vec<f64>>,
}

impl ExperimentOutput {
    pub fn rows(&self) -> Vec<ResultRow> {
        self.cells
            .iter()
            .zip(&self.estimates)
            .map(|(cell, xs)| {
                let s = summarize(xs);
                ResultRow {
                    transform: cell.transform.to_string(),
                    n: cell.n,
                    estimator: cell.estimator.name().to_string(),
                    setting: cell.estimator.setting_label(),
                    mean: s.mean,
                    se: s.se,
                    q025: s.q025,
                    q50: s.q50,
                    q975: s.q975,
                    replicates: s.count,
                }
            })
            .collect()
    }

    pub fn find(
        &self,
        n: usize,
        transform: TransformSetting,
        estimator: EstimatorSetting,
    ) -> Option<&[f64]> {
        self.cells
            .iter()
            .position(|c| c.n == n && c.transform == transform && c.estimator == estimator)
            .map(|i| self.estimates[i].as_slice())
    }
}

struct LengthPlan {
    n: usize,
    sim: GaussianSimulator,
    fft: Option<PeriodogramPlan<f64>>,
}

/// Runs the configured matrix and summarises each cell.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    Ok(run_experiment_raw(config)?.rows())
}

/// Runs the configured matrix and keeps every replicate estimate.
///
/// Replicate `r` draws its path from `SeedSpec(master_seed, r)`; results are
/// gathered in replicate order, so the output does not depend on the number
/// of workers.
pub fn run_experiment_raw(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let needs_fft = config
        .estimators
        .iter()
        .any(|e| matches!(e, EstimatorSetting::Lw { .. }));
    let plans = config
        .lengths
        .iter()
        .map(|&n| {
            Ok(LengthPlan {
                n,
                sim: GaussianSimulator::new(&config.process, n)?,
                fft: if needs_fft {
                    Some(PeriodogramPlan::new(n)?)
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let transforms = config
        .transforms
        .iter()
        .map(|t| t.resolve(config.process.variance))
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    for &n in &config.lengths {
        for &transform in &config.transforms {
            for &estimator in &config.estimators {
                cells.push(Cell {
                    n,
                    transform,
                    estimator,
                });
            }
        }
    }

    let run = |r: usize| -> Result<Vec<f64>> {
        replicate(config, &plans, &transforms, r).map_err(|e| Error::Replicate {
            index: r,
            source: Box::new(e),
        })
    };
    let results: Vec<Result<Vec<f64>>> = match config.effective_workers()? {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid("workers", e.to_string()))?;
            pool.install(|| (0..config.replicates).into_par_iter().map(run).collect())
        }
        None => (0..config.replicates).into_par_iter().map(run).collect(),
    };

    let mut estimates = vec![Vec::with_capacity(config.replicates); cells.len()];
    for res in results {
        for (c, v) in res?.into_iter().enumerate() {
            estimates[c].push(v);
        }
    }
    Ok(ExperimentOutput { cells, estimates })
}

fn replicate(
    config: &ExperimentConfig,
    plans: &[LengthPlan],
    transforms: &[Option<DiscretizationSpec>],
    r: usize,
) -> Result<Vec<f64>> {
    let seed = SeedSpec::new(config.master_seed, r as u64);
    let mut out = Vec::with_capacity(plans.len() * transforms.len() * config.estimators.len());
    for plan in plans {
        let base = plan.sim.sample(seed);
        for t in transforms {
            let mut xs = base.clone();
            if let Some(spec) = t {
                spec.apply_slice(&mut xs);
            }
            let pg = match &plan.fft {
                Some(fft) => Some(fft.compute(&xs)?),
                None => None,
            };
            let series = Series::new(xs)?;
            let mut curve = None;
            for e in &config.estimators {
                let h = match *e {
                    EstimatorSetting::Lw { gamma } => local_whittle_from_periodogram(
                        pg.as_ref().expect("planned when LW is configured"),
                        bandwidth(plan.n, gamma),
                    )?,
                    EstimatorSetting::Dfa { q } => {
                        if curve.is_none() {
                            curve = Some(dfa_curve(&series)?);
                        }
                        dfa_estimate_with(curve.as_ref().unwrap(), q, config.dfa_selection)?
                    }
                };
                out.push(h);
            }
        }
    }
    Ok(out)
}

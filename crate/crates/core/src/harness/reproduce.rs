use std::str::FromStr;

use super::config::{default_transforms, EstimatorSetting, ExperimentConfig};
use super::figures::{FigureKind, FigureSpec};
use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::estimators::DfaSelection;
use crate::lmcore::ProcessSpec;
use crate::synth::SeedSpec;

pub const LW_GAMMAS: [f64; 4] = [0.5, 0.6, 0.7, 0.8];
pub const DFA_QS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Table1,
    Table2,
    Table3,
    Table4,
    Fig1,
    Fig2,
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Table1,
        Preset::Table2,
        Preset::Table3,
        Preset::Table4,
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
            Preset::Table3 => "table3",
            Preset::Table4 => "table4",
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn figure(self) -> Option<FigureKind> {
        match self {
            Preset::Fig1 => Some(FigureKind::Acv),
            Preset::Fig2 => Some(FigureKind::Periodogram),
            Preset::Fig4 => Some(FigureKind::Dfa),
            _ => None,
        }
    }

    /// Hurst exponent of the table; 0.7 for the figures.
    pub fn hurst(self) -> f64 {
        match self {
            Preset::Table2 | Preset::Table4 => 0.85,
            _ => 0.7,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(
                    "preset",
                    format!("`{s}` (expected table1..table4, fig1, fig2 or fig4)"),
                )
            })
    }
}

/// Experiment behind a table preset: fGn with unit variance, the five
/// observation schemes, and four bandwidths (tables 1-2, local Whittle) or
/// four fit fractions (tables 3-4, DFA).
pub fn table_config(
    preset: Preset,
    lengths: Vec<usize>,
    replicates: usize,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<ExperimentConfig> {
    let estimators = match preset {
        Preset::Table1 | Preset::Table2 => LW_GAMMAS
            .iter()
            .map(|&gamma| EstimatorSetting::Lw { gamma })
            .collect(),
        Preset::Table3 | Preset::Table4 => DFA_QS
            .iter()
            .map(|&q| EstimatorSetting::Dfa { q })
            .collect(),
        _ => {
            return Err(Error::invalid(
                "preset",
                format!("{} is a figure, not a table", preset.name()),
            ))
        }
    };
    let config = ExperimentConfig {
        process: ProcessSpec::fgn(preset.hurst(), 1.0)?,
        lengths,
        transforms: default_transforms(),
        estimators,
        replicates,
        master_seed,
        workers,
        dfa_selection: DfaSelection::Range,
    };
    config.validate()?;
    Ok(config)
}

/// Figure preset: fGn with `H = 0.7`, round-off at `chi = 0.1`.
pub fn figure_spec(n: usize, master_seed: u64) -> Result<FigureSpec> {
    Ok(FigureSpec {
        process: ProcessSpec::fgn(0.7, 1.0)?,
        transform: Some(DiscretizationSpec::from_chi(0.1, 1.0)?),
        n,
        seed: SeedSpec::new(master_seed, 0),
        max_lag: 100,
    })
}

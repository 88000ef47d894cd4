//! Monte Carlo experiments, result tables, figure data and file IO.

pub mod config;
pub mod experiment;
pub mod figures;
pub mod reproduce;
pub mod seriesio;
pub mod stats;
pub mod table;

pub use config::{
    default_transforms, ConfigFile, EstimatorSetting, ExperimentConfig, TransformSetting,
    WORKERS_ENV,
};
pub use experiment::{run_experiment, run_experiment_raw, Cell, ExperimentOutput, ResultRow};
pub use figures::{figure_data, ColumnData, FigureKind, FigureSpec};
pub use reproduce::{figure_spec, table_config, Preset, DFA_QS, LW_GAMMAS};
pub use seriesio::{read_series, read_series_from, write_series, write_series_to};
pub use stats::{quantile_sorted, summarize, Summary};
pub use table::{emit_table, read_table, read_table_from, write_table, TABLE_HEADER};

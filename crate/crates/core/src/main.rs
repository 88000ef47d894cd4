use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lmdisc::discretize::{apply, zero_fraction};
use lmdisc::estimators::{
    bandwidth, dfa_curve, dfa_estimate_with, local_whittle, periodogram, sample_acv, DfaSelection,
};
use lmdisc::harness::{
    figure_data, figure_spec, read_series, run_experiment, table_config, write_series,
    write_series_to, write_table, ColumnData, ConfigFile, Preset, TransformSetting,
};
use lmdisc::lmcore::{HurstExponent, ProcessKind};
use lmdisc::synth::simulate_gaussian;
use lmdisc::theory::{
    asymptotic_power_terms, dfa_asymptote, discretized_kurtosis, discretized_variance,
    expected_dfa_exact, hermite_coefficients, hosking_bias, kurtosis_minimum, scaling_for,
    spectral_density_numeric, spectral_expansion, AcvExpansion, SecondOrder, TransformedProcess,
};
use lmdisc::{DiscretizationSpec, Error, ProcessSpec, Result, SeedSpec};

#[derive(Parser)]
#[command(name = "lmdisc", version, about = "Discretized long-memory processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a Gaussian long-memory path and write it as a series file.
    Simulate {
        #[command(flatten)]
        process: ProcessArgs,
        /// Path length.
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        replicate: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Round a series to a grid or take its sign.
    Transform {
        input: PathBuf,
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Estimate the Hurst exponent of a series.
    Estimate {
        input: PathBuf,
        #[command(subcommand)]
        estimator: EstimatorCmd,
    },
    /// Evaluate a closed-form quantity.
    Theory {
        #[command(subcommand)]
        quantity: TheoryCmd,
    },
    /// Regenerate a table or figure dataset as CSV.
    Reproduce {
        #[arg(value_parser = parse_preset)]
        preset: Preset,
        /// Monte Carlo replicates (tables only).
        #[arg(long, default_value_t = 1000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Series length; repeat for several. Tables default to 1024, figures to 16384.
        #[arg(short = 'n', long = "n")]
        lengths: Vec<usize>,
        /// Worker threads; falls back to LMDISC_WORKERS, then all cores.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment described by a TOML file; flags override file values.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        process: Option<ProcessKind>,
        #[arg(long)]
        hurst: Option<f64>,
        #[arg(long)]
        variance: Option<f64>,
        #[arg(short = 'n', long = "n")]
        lengths: Vec<usize>,
        /// continuous, sign, chi=<x> or delta=<x>; repeatable.
        #[arg(long = "transform")]
        transforms: Vec<TransformSetting>,
        #[arg(long = "lw-gamma")]
        lw_gammas: Vec<f64>,
        #[arg(long = "dfa-q")]
        dfa_qs: Vec<f64>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum)]
        dfa_selection: Option<Selection>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample autocovariance of a series as columns `k,acv`.
    Acv {
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_lag: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Periodogram of a series as columns `omega,periodogram`.
    Periodogram {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct ProcessArgs {
    /// fgn or farima.
    #[arg(long, default_value = "fgn")]
    process: ProcessKind,
    /// Hurst exponent in (0.5, 1).
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,
    /// Marginal variance D > 0.
    #[arg(long, default_value_t = 1.0)]
    variance: f64,
}

impl ProcessArgs {
    fn spec(&self) -> Result<ProcessSpec> {
        ProcessSpec::new(self.process, self.hurst, self.variance)
    }
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct TransformArgs {
    /// Round-off grid step.
    #[arg(long)]
    delta: Option<f64>,
    /// Round-off with delta = sqrt(D / chi).
    #[arg(long)]
    chi: Option<f64>,
    /// Sign transform.
    #[arg(long)]
    sign: bool,
}

impl TransformArgs {
    /// `None` means the continuous process.
    fn resolve(&self, variance: f64) -> Result<Option<DiscretizationSpec>> {
        match (self.delta, self.chi, self.sign) {
            (Some(d), _, _) => DiscretizationSpec::round(d).map(Some),
            (_, Some(c), _) => DiscretizationSpec::from_chi(c, variance).map(Some),
            (_, _, true) => Ok(Some(DiscretizationSpec::Sign)),
            _ => Ok(None),
        }
    }

    fn required(&self, variance: f64) -> Result<DiscretizationSpec> {
        self.resolve(variance)?
            .ok_or_else(|| Error::InvalidParameter {
                name: "transform",
                reason: "one of --delta, --chi or --sign is required".into(),
            })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Selection {
    Range,
    Count,
}

impl From<Selection> for DfaSelection {
    fn from(s: Selection) -> Self {
        match s {
            Selection::Range => DfaSelection::Range,
            Selection::Count => DfaSelection::Count,
        }
    }
}

#[derive(Subcommand)]
enum EstimatorCmd {
    /// Local Whittle with bandwidth floor(n^gamma), or an explicit --m.
    Lw {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long)]
        m: Option<usize>,
    },
    /// DFA over the top fraction q of the box sizes.
    Dfa {
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Selection::Range)]
        selection: Selection,
    },
}

#[derive(Subcommand)]
enum TheoryCmd {
    /// Fraction of observations rounded to zero.
    Q0 {
        #[arg(long)]
        chi: f64,
    },
    /// Variance of the rounded variable.
    Variance {
        #[arg(long)]
        chi: f64,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
    },
    /// Kurtosis of the rounded variable.
    Kurtosis {
        #[arg(long)]
        chi: f64,
    },
    /// Minimum of the kurtosis over chi in [lo, hi].
    KurtosisMin {
        #[arg(long, default_value_t = 0.1)]
        lo: f64,
        #[arg(long, default_value_t = 2.0)]
        hi: f64,
    },
    /// Hermite coefficients g_1..g_{max_j} of a transform.
    Hermite {
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
        #[arg(long, default_value_t = 41)]
        max_j: usize,
    },
    /// Autocovariance scaling factors of a transform.
    Scaling {
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
    },
    /// Autocovariance of the observed process at lag k.
    Acv {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long)]
        k: u64,
        /// Path length for the expected sample autocovariance.
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Leading finite-sample bias of the sample autocovariance.
    HoskingBias {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        hurst: f64,
        #[arg(short, long)]
        n: usize,
    },
    /// Low-frequency expansion of the spectral density.
    Spectral {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long)]
        omega: f64,
        /// Also sum the autocovariance series directly.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Expected squared DFA fluctuation at box size m.
    Dfa {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(short, long)]
        m: usize,
    },
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit_json(value: Value, diagnostics: Value) -> Result<()> {
    let out = json!({ "value": value, "diagnostics": diagnostics });
    println!("{out}");
    Ok(())
}

fn with_output<F>(output: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            let mut w = std::io::BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn second_order_json(s: &SecondOrder) -> Value {
    match *s {
        SecondOrder::Constant { c0 } => json!({ "kind": "constant", "c0": c0 }),
        SecondOrder::Power {
            coefficient,
            exponent,
        } => json!({ "kind": "power", "coefficient": coefficient, "exponent": exponent }),
        SecondOrder::Log { coefficient } => json!({ "kind": "log", "coefficient": coefficient }),
    }
}

fn theory(cmd: TheoryCmd) -> Result<()> {
    match cmd {
        TheoryCmd::Q0 { chi } => emit_json(json!(zero_fraction(chi)?), json!({ "chi": chi })),
        TheoryCmd::Variance { chi, variance } => emit_json(
            json!(discretized_variance(chi, variance)?),
            json!({ "chi": chi, "variance": variance }),
        ),
        TheoryCmd::Kurtosis { chi } => {
            emit_json(json!(discretized_kurtosis(chi)?), json!({ "chi": chi }))
        }
        TheoryCmd::KurtosisMin { lo, hi } => {
            let (chi, k) = kurtosis_minimum(lo, hi)?;
            emit_json(json!(k), json!({ "chi": chi }))
        }
        TheoryCmd::Hermite {
            transform,
            variance,
            max_j,
        } => {
            let spec = transform.required(variance)?;
            let c = hermite_coefficients(&spec, variance, max_j)?;
            let coeffs: Vec<Value> = c.coeffs.iter().map(|&(j, g)| json!([j, g])).collect();
            emit_json(
                json!(coeffs),
                json!({
                    "total_variance": c.total_variance,
                    "sum_of_squares": c.sum_of_squares(),
                    "missing_variance": c.missing_variance(),
                }),
            )
        }
        TheoryCmd::Scaling {
            transform,
            variance,
        } => {
            let spec = transform.resolve(variance)?;
            let s = scaling_for(spec.as_ref(), variance)?;
            emit_json(
                json!(s.covariance),
                json!({ "correlation": s.correlation, "chi": spec.and_then(|t| t.chi(variance)) }),
            )
        }
        TheoryCmd::Acv {
            process,
            transform,
            k,
            n,
        } => {
            let spec = process.spec()?;
            let t = TransformedProcess::new(spec, transform.resolve(spec.variance)?)?;
            let value = t.acv(k);
            let expected = match n {
                Some(n) => Some(t.expected_sample_acv(k, n)?),
                None => None,
            };
            emit_json(
                json!(value),
                json!({
                    "rho": spec.autocorrelation(k),
                    "variance": t.variance(),
                    "asymptotic_amplitude": t.asymptotic_amplitude()?,
                    "expected_sample_acv": expected,
                    "hermite_missing_variance": t.coefficients().missing_variance(),
                }),
            )
        }
        TheoryCmd::HoskingBias { lambda, hurst, n } => emit_json(
            json!(hosking_bias(lambda, HurstExponent::new(hurst)?, n)?),
            Value::Null,
        ),
        TheoryCmd::Spectral {
            process,
            transform,
            omega,
            numeric,
            tolerance,
        } => {
            let spec = process.spec()?;
            let t = TransformedProcess::new(spec, transform.resolve(spec.variance)?)?;
            let acv = AcvExpansion::for_process(&spec);
            let e = spectral_expansion(t.coefficients(), &acv)?;
            let numeric = if numeric {
                let terms = asymptotic_power_terms(t.coefficients(), &acv, 12.0);
                let v = spectral_density_numeric(|k| t.acv(k), &terms, omega, tolerance)?;
                json!({ "value": v.value, "tail_estimate": v.tail_estimate, "lags": v.lags })
            } else {
                Value::Null
            };
            emit_json(
                json!(e.eval(omega)),
                json!({
                    "leading": e.leading(omega),
                    "leading_amplitude": e.leading_amplitude,
                    "leading_exponent": e.leading_exponent,
                    "second_order": second_order_json(&e.second_order),
                    "hermite_terms": e.diagnostics.hermite_terms,
                    "zeta_terms": e.diagnostics.zeta_terms,
                    "last_term": e.diagnostics.last_term,
                    "numeric": numeric,
                }),
            )
        }
        TheoryCmd::Dfa {
            process,
            transform,
            m,
        } => {
            let spec = process.spec()?;
            let t = TransformedProcess::new(spec, transform.resolve(spec.variance)?)?;
            let exact = expected_dfa_exact(|k| t.acv(k), t.variance(), m)?;
            let lead = dfa_asymptote(spec.hurst, t.asymptotic_amplitude()?, m)?;
            emit_json(
                json!(exact),
                json!({ "leading": lead, "ratio": exact / lead }),
            )
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate {
            process,
            n,
            seed,
            replicate,
            output,
        } => {
            let s = simulate_gaussian(&process.spec()?, n, SeedSpec::new(seed, replicate))?;
            match output {
                Some(p) => write_series(&s, &p),
                None => write_series_to(&s, std::io::stdout().lock()).map_err(stdout_err),
            }
        }
        Command::Transform {
            input,
            transform,
            output,
        } => {
            let s = read_series(&input)?;
            let variance = s.meta.spec.map_or(1.0, |p| p.variance);
            let t = transform.required(variance)?;
            let out = apply(&s, &t);
            match output {
                Some(p) => write_series(&out, &p),
                None => write_series_to(&out, std::io::stdout().lock()).map_err(stdout_err),
            }
        }
        Command::Estimate { input, estimator } => {
            let s = read_series(&input)?;
            match estimator {
                EstimatorCmd::Lw { gamma, m } => {
                    if !(gamma > 0.0 && gamma < 1.0) {
                        return Err(Error::InvalidParameter {
                            name: "gamma",
                            reason: format!("{gamma} is outside (0, 1)"),
                        });
                    }
                    let m = m.unwrap_or_else(|| bandwidth(s.len(), gamma));
                    let h = local_whittle(&s, m)?;
                    emit_json(json!(h), json!({ "estimator": "lw", "m": m, "n": s.len() }))
                }
                EstimatorCmd::Dfa { q, selection } => {
                    let curve = dfa_curve(&s)?;
                    let h = dfa_estimate_with(&curve, q, selection.into())?;
                    emit_json(
                        json!(h),
                        json!({
                            "estimator": "dfa",
                            "q": q,
                            "n": s.len(),
                            "box_sizes": curve.box_sizes,
                            "fluctuations": curve.fluctuations,
                        }),
                    )
                }
            }
        }
        Command::Theory { quantity } => theory(quantity),
        Command::Reproduce {
            preset,
            replicates,
            seed,
            lengths,
            workers,
            output,
        } => {
            if let Some(kind) = preset.figure() {
                let n = match lengths.as_slice() {
                    [] => 1 << 14,
                    [n] => *n,
                    _ => {
                        return Err(Error::InvalidParameter {
                            name: "n",
                            reason: "figures take a single length".into(),
                        })
                    }
                };
                let data = figure_data(kind, &figure_spec(n, seed)?)?;
                with_output(output.as_deref(), |w| data.write_csv(w))
            } else {
                let lengths = if lengths.is_empty() {
                    vec![1024]
                } else {
                    lengths
                };
                let config = table_config(preset, lengths, replicates, seed, workers)?;
                log::info!(
                    "{}: {} replicates at n = {:?}",
                    preset.name(),
                    replicates,
                    config.lengths
                );
                let rows = run_experiment(&config)?;
                with_output(output.as_deref(), |w| write_table(&rows, w))
            }
        }
        Command::Run {
            config,
            process,
            hurst,
            variance,
            lengths,
            transforms,
            lw_gammas,
            dfa_qs,
            replicates,
            seed,
            workers,
            dfa_selection,
            output,
        } => {
            let file = match &config {
                Some(p) => ConfigFile::load(p)?,
                None => ConfigFile::default(),
            };
            let flags = ConfigFile {
                process,
                hurst,
                variance,
                lengths: if lengths.is_empty() {
                    None
                } else {
                    Some(lengths)
                },
                transforms: if transforms.is_empty() {
                    None
                } else {
                    Some(transforms)
                },
                lw_gammas: if lw_gammas.is_empty() {
                    None
                } else {
                    Some(lw_gammas)
                },
                dfa_qs: if dfa_qs.is_empty() {
                    None
                } else {
                    Some(dfa_qs)
                },
                replicates,
                seed,
                workers,
                dfa_selection: dfa_selection.map(Into::into),
            };
            let config = file.overridden_by(flags).into_config()?;
            let rows = run_experiment(&config)?;
            with_output(output.as_deref(), |w| write_table(&rows, w))
        }
        Command::Acv {
            input,
            max_lag,
            output,
        } => {
            let s = read_series(&input)?;
            let acv = sample_acv(&s, max_lag)?;
            let mut data = ColumnData::new();
            data.push("k", (0..=max_lag).map(|k| k as f64).collect());
            data.push("acv", acv);
            with_output(output.as_deref(), |w| data.write_csv(w))
        }
        Command::Periodogram { input, output } => {
            let s = read_series(&input)?;
            let pg = periodogram(&s)?;
            let mut data = ColumnData::new();
            data.push("omega", pg.frequencies);
            data.push("periodogram", pg.ordinates);
            with_output(output.as_deref(), |w| data.write_csv(w))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = json!({ "error": e.to_string(), "kind": e.kind() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}

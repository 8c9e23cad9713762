//! Command line drivers over the associative-memory library.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or input error.

mod io;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hopfield::capacity::{
    capacity_base_c, capacity_base_c_lower, capacity_dimension, CapacityParams, DimensionMethod,
};
use hopfield::headmode::{analyze_head, AttentionRow};
use hopfield::layers::{
    gaussian_head_attention, gaussian_head_init, pattern_normalize, GaussianHeadParams,
    GaussianInit, Normalization,
};
use hopfield::linalg::Mat;
use hopfield::{
    classify_regime, energy, gaussian_mixture_form, iterate, InverseTemperature,
    IterationConfig, PatternMatrix, StateVector,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unusable input files (exit 2).
    Usage(String),
    /// Unexpected failure (exit 1).
    Internal(String),
}

#[derive(Parser)]
#[command(name = "hopfield", version, about = "Continuous associative memory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizeMode {
    Input,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CapacityMethod {
    Exact,
    Lower,
    Dimension,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitScheme {
    Supports,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate queries to their fixed points and write JSONL records.
    Retrieve {
        /// CSV of stored patterns, one pattern per row.
        #[arg(long)]
        patterns: PathBuf,
        /// CSV of query states, one query per row.
        #[arg(long)]
        queries: PathBuf,
        /// Inverse temperature.
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 100)]
        max_updates: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Row normalization applied to patterns and queries on ingest.
        #[arg(long, value_enum, default_value = "none")]
        normalize: NormalizeMode,
        /// Skip the first line of each CSV input.
        #[arg(long, default_value_t = false)]
        header: bool,
        /// JSONL output path, one record per query.
        #[arg(long)]
        out: PathBuf,
    },
    /// Storage-capacity constants from the exponential-capacity bounds.
    Capacity {
        #[arg(long)]
        beta: f64,
        /// Sphere radius factor: patterns live on radius K sqrt(d-1).
        #[arg(long = "K")]
        k: f64,
        /// Pattern-space dimension (methods exact and lower).
        #[arg(long, required_if_eq_any([("method", "exact"), ("method", "lower")]))]
        d: Option<u32>,
        /// Failure probability in (0, 1].
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "exact")]
        method: CapacityMethod,
        /// Capacity base (method dimension only).
        #[arg(long, required_if_eq("method", "dimension"))]
        c: Option<f64>,
    },
    /// Classify attention heads from CSV softmax rows.
    AnalyzeHeads {
        /// One attention CSV file, or a directory of *.csv files.
        #[arg(long)]
        attention: PathBuf,
        /// Mass threshold for the minimal count.
        #[arg(long, default_value_t = 0.90)]
        mass: f64,
        /// Inverse temperature for the Jacobian Frobenius norms.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = false)]
        header: bool,
        /// JSONL output path, one report per file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the attention matrix of a Gaussian averaging head as CSV.
    GaussianHead {
        /// Sequence length (at least 2).
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        init: InitScheme,
        /// Seed for the random init (ChaCha8 stream).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies every scale parameter after initialization.
        #[arg(long, default_value_t = 1.0)]
        sigma_scale: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the energy of each query against the stored patterns.
    Energy {
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        beta: f64,
        /// Also print the Gaussian-mixture value of the energy landscape.
        #[arg(long, default_value_t = false)]
        mixture: bool,
        #[arg(long, default_value_t = false)]
        header: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_beta(beta: f64) -> Result<InverseTemperature, CliError> {
    InverseTemperature::new(beta)
        .map_err(|e| CliError::Usage(format!("--beta: {e}")))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Retrieve { patterns, queries, beta, max_updates, tol, normalize, header, out } => {
            cmd_retrieve(&patterns, &queries, beta, max_updates, tol, normalize, header, &out)
        }
        Command::Capacity { beta, k, d, p, method, c } => cmd_capacity(beta, k, d, p, method, c),
        Command::AnalyzeHeads { attention, mass, beta, header, out } => {
            cmd_analyze_heads(&attention, mass, beta, header, &out)
        }
        Command::GaussianHead { n, init, seed, sigma_scale, out } => {
            cmd_gaussian_head(n, init, seed, sigma_scale, &out)
        }
        Command::Energy { patterns, query, beta, mixture, header } => {
            cmd_energy(&patterns, &query, beta, mixture, header)
        }
    }
}

fn load_rows(path: &Path, header: bool, normalize: NormalizeMode) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = io::read_matrix(path, header)?;
    match normalize {
        NormalizeMode::None => Ok(rows),
        NormalizeMode::Input => {
            let mat = Mat::from_nested(&rows);
            let normed = pattern_normalize(&mat, Normalization::Input, 1e-5);
            Ok((0..normed.rows()).map(|i| normed.row(i).to_vec()).collect())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_retrieve(
    patterns: &Path,
    queries: &Path,
    beta: f64,
    max_updates: usize,
    tol: f64,
    normalize: NormalizeMode,
    header: bool,
    out: &Path,
) -> Result<(), CliError> {
    let bt = parse_beta(beta)?;
    if max_updates == 0 {
        return Err(CliError::Usage("--max-updates must be at least 1".into()));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage("--tol must be finite and nonnegative".into()));
    }
    let pattern_rows = load_rows(patterns, header, normalize)?;
    let query_rows = load_rows(queries, header, normalize)?;
    let x = PatternMatrix::from_columns(&pattern_rows)
        .map_err(|e| CliError::Usage(format!("patterns: {e}")))?;

    let regime = classify_regime(&x, bt, None)
        .map_err(|e| CliError::Internal(format!("regime certificates: {e}")))?;
    let regime_json = json!({
        "global_fixed_point_certified": regime.global_fixed_point_certified,
        "stored_pattern_certified": regime.stored_pattern_certified,
    });

    let cfg = IterationConfig { max_updates, tol, record_energy: true };
    let mut sink = io::create_writer(out)?;
    for (index, row) in query_rows.iter().enumerate() {
        let xi = StateVector::new(row.clone())
            .map_err(|e| CliError::Usage(format!("query {index}: {e}")))?;
        if xi.dim() != x.dim() {
            return Err(CliError::Usage(format!(
                "query {index} has {} features, patterns have {}",
                xi.dim(),
                x.dim()
            )));
        }
        let res = iterate(&x, &xi, bt, &cfg)
            .map_err(|e| CliError::Internal(format!("query {index}: {e}")))?;
        let record = json!({
            "query_index": index,
            "updates_used": res.updates_used,
            "converged": res.converged,
            "energy_trace": res.energy_trace,
            "fixed_point": res.fixed_point.values(),
            "softmax": res.final_softmax,
            "regime": regime_json,
        });
        writeln!(sink, "{record}").map_err(io::internal)?;
    }
    sink.flush().map_err(io::internal)?;
    Ok(())
}

fn cmd_capacity(
    beta: f64,
    k: f64,
    d: Option<u32>,
    p: f64,
    method: CapacityMethod,
    c: Option<f64>,
) -> Result<(), CliError> {
    let output = match method {
        CapacityMethod::Exact | CapacityMethod::Lower => {
            let d = d.expect("clap enforces --d");
            let params = CapacityParams::new(beta, k, d, p)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if method == CapacityMethod::Exact {
                let r = capacity_base_c(&params).map_err(|e| CliError::Usage(e.to_string()))?;
                json!({
                    "a": r.a, "b": r.b, "c_hat": r.c_hat,
                    "feasible": r.feasible, "N_lower": r.n_lower,
                    "method": "exact",
                })
            } else {
                let r = capacity_base_c(&params).map_err(|e| CliError::Usage(e.to_string()))?;
                let c_low = capacity_base_c_lower(&params)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let n_lower = p.sqrt() * c_low.powf((d - 1) as f64 / 4.0);
                json!({
                    "a": r.a, "b": r.b, "c_hat": c_low,
                    "feasible": c_low >= (2.0 / p.sqrt()).powf(4.0 / ((d - 1) as f64)),
                    "N_lower": n_lower,
                    "method": "lower",
                })
            }
        }
        CapacityMethod::Dimension => {
            let c = c.expect("clap enforces --c");
            let r = capacity_dimension(beta, k, c, p)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            json!({
                "a": r.a, "b": r.b,
                "d_real": r.d_real,
                "d_ceil": r.d_real.ceil(),
                "method": match r.method {
                    DimensionMethod::LambertExact => "lambert",
                    DimensionMethod::AZero => "a_zero",
                    DimensionMethod::ClosedFormBound => "closed_form_bound",
                },
            })
        }
    };
    println!("{output}");
    Ok(())
}

fn attention_files(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: no .csv files found",
                path.display()
            )));
        }
        return Ok(files);
    }
    Err(CliError::Usage(format!("{}: no such file or directory", path.display())))
}

fn cmd_analyze_heads(
    attention: &Path,
    mass: f64,
    beta: f64,
    header: bool,
    out: &Path,
) -> Result<(), CliError> {
    if !(mass > 0.0 && mass <= 1.0) {
        return Err(CliError::Usage("--mass must lie in (0, 1]".into()));
    }
    parse_beta(beta)?;
    let files = attention_files(attention)?;
    let mut sink = io::create_writer(out)?;
    for file in files {
        let rows = io::read_matrix(&file, header)?;
        let n = rows[0].len();
        let attention_rows: Vec<AttentionRow> = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                AttentionRow::new(r).map_err(|e| {
                    CliError::Usage(format!("{}:{}: {e}", file.display(), i + 1))
                })
            })
            .collect::<Result<_, _>>()?;
        let report = analyze_head(&attention_rows, n, mass, Some(beta))
            .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
        let record = json!({
            "file": file.display().to_string(),
            "n": report.n,
            "k_values": report.k_values,
            "k_median": report.k_median,
            "class": report.class.to_string(),
            "frobenius_norms": report.frobenius_norms,
        });
        writeln!(sink, "{record}").map_err(io::internal)?;
    }
    sink.flush().map_err(io::internal)?;
    Ok(())
}

fn cmd_gaussian_head(
    n: usize,
    init: InitScheme,
    seed: u64,
    sigma_scale: f64,
    out: &Path,
) -> Result<(), CliError> {
    if !(sigma_scale.is_finite() && sigma_scale > 0.0) {
        return Err(CliError::Usage("--sigma-scale must be positive".into()));
    }
    let scheme = match init {
        InitScheme::Supports => GaussianInit::Supports,
        InitScheme::Random => GaussianInit::Random { seed },
    };
    let params = gaussian_head_init(n, scheme).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = GaussianHeadParams::new(
        params.mu,
        params.sigma.into_iter().map(|s| s * sigma_scale).collect(),
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let a = gaussian_head_attention(&params, n).map_err(|e| CliError::Usage(e.to_string()))?;
    io::write_matrix(out, (0..a.rows()).map(|i| a.row(i).to_vec()))?;
    Ok(())
}

fn cmd_energy(
    patterns: &Path,
    query: &Path,
    beta: f64,
    mixture: bool,
    header: bool,
) -> Result<(), CliError> {
    let bt = parse_beta(beta)?;
    let pattern_rows = io::read_matrix(patterns, header)?;
    let query_rows = io::read_matrix(query, header)?;
    let x = PatternMatrix::from_columns(&pattern_rows)
        .map_err(|e| CliError::Usage(format!("patterns: {e}")))?;
    for (index, row) in query_rows.iter().enumerate() {
        let xi = StateVector::new(row.clone())
            .map_err(|e| CliError::Usage(format!("query {index}: {e}")))?;
        let e = energy(&x, &xi, bt)
            .map_err(|e| CliError::Usage(format!("query {index}: {e}")))?;
        let record = if mixture {
            let m = gaussian_mixture_form(&x, &xi, bt)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            json!({ "query_index": index, "energy": e, "mixture": m })
        } else {
            json!({ "query_index": index, "energy": e })
        };
        println!("{record}");
    }
    Ok(())
}

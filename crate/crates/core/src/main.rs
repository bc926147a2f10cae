use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qrg_core::analysis::components;
use qrg_core::branching::{extinction_fixed_point, gw_survival_mc, GwConfig};
use qrg_core::error::{QrgError, Result};
use qrg_core::export::{write_component_table, write_edge_list, write_edge_points, write_vertex_table};
use qrg_core::harness::{
    create_file, er_crosscheck, phase_sweep, run_ensemble, write_csv, write_json, write_report,
    ExperimentConfig, OutputFormat,
};
use qrg_core::model::ModelParams;
use qrg_core::sampler::{build_graph_with, simplify, SamplerOptions};
use qrg_core::theory::{predictions, solve_gamma, GAMMA_TOLERANCE};

#[derive(Parser)]
#[command(name = "qrg", version, about = "Quantum random graph simulator and theory engine")]
struct Cli {
    /// Worker threads (falls back to QRG_THREADS, then all cores).
    #[arg(long, global = true, env = "QRG_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Circle length.
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Hole intensity per unit length.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted. CSV also writes <stem>.summary.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run an ensemble and report empirical densities against theory.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Circle counts; repeat or comma-separate for a schedule.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
        /// Analyse the multigraph instead of collapsing parallel edges.
        #[arg(long)]
        keep_multi: bool,
        /// Exit with status 2 if any aggregate misses its tolerance.
        #[arg(long)]
        check: bool,
    },
    /// Print the limiting constants as JSON.
    Theory {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Sweep a (beta, lambda) grid.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 5)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare branching-process survival with the fixed point and solver.
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        max_generations: u32,
        #[arg(long, default_value_t = 10_000)]
        pop_cap: u64,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[arg(long)]
        check: bool,
    },
    /// Compare the zero-intensity ensemble with the classical G(n, p) limit.
    ErCheck {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 20)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        check: bool,
    },
    /// Write one graph as text tables: PREFIX.vertices, PREFIX.edges,
    /// PREFIX.components and, with --audit, PREFIX.points.
    ExportGraph {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        keep_multi: bool,
        #[arg(long)]
        audit: bool,
    },
}

#[derive(Serialize)]
struct OracleReport {
    beta: f64,
    lambda: f64,
    trials: u64,
    gamma_mc: f64,
    stderr: f64,
    gamma_fp: f64,
    gamma_solver: f64,
    agree: bool,
    upper_biased: bool,
}

fn emit<T: Serialize>(records: &[T], output: &OutputArgs, json_single: bool) -> Result<()> {
    let stdout = io::stdout();
    match (&output.out, output.format) {
        (Some(p), Format::Csv) => write_csv(records, create_file(p)?),
        (Some(p), Format::Json) if json_single && records.len() == 1 => {
            write_json(&records[0], create_file(p)?)
        }
        (Some(p), Format::Json) => write_json(records, create_file(p)?),
        (None, Format::Csv) => write_csv(records, stdout.lock()),
        (None, Format::Json) if json_single && records.len() == 1 => {
            write_json(&records[0], stdout.lock())
        }
        (None, Format::Json) => write_json(records, stdout.lock()),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_table(path: &Path, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut w = create_file(path)?;
    f(&mut w).map_err(|source| QrgError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Returns whether every checked quantity was within tolerance.
fn run(cli: Cli) -> Result<bool> {
    let threads = cli.threads;
    if let Some(t) = threads {
        if t == 0 {
            return Err(QrgError::Domain("threads must be at least 1".into()));
        }
    }
    match cli.command {
        Command::Simulate {
            model,
            n,
            reps,
            seed,
            output,
            keep_multi,
            check,
        } => {
            let params = ModelParams::new(model.beta, model.lambda, n[0])?;
            let mut config = ExperimentConfig::new(params, reps, seed);
            config.n_schedule = n;
            config.output_path = output.out.clone();
            config.output_format = output.format.into();
            config.simplify = !keep_multi;
            config.threads = threads;
            let report = run_ensemble(&config)?;
            for f in &report.failures {
                eprintln!("replicate n={} r={} failed: {}", f.n, f.replicate, f.message);
            }
            write_report(
                &report,
                config.output_format,
                config.output_path.as_deref(),
                &mut io::stdout().lock(),
            )?;
            Ok(!check || report.all_within_tolerance())
        }
        Command::Theory { model } => {
            let p = predictions(model.beta, model.lambda)?;
            write_json(&p, io::stdout().lock())?;
            Ok(true)
        }
        Command::Sweep {
            betas,
            lambdas,
            n,
            reps,
            seed,
            output,
        } => {
            let cells = phase_sweep(&betas, &lambdas, n, reps, seed, threads)?;
            emit(&cells, &output, false)?;
            Ok(true)
        }
        Command::Oracle {
            model,
            trials,
            seed,
            max_generations,
            pop_cap,
            tol,
            check,
        } => {
            let mut cfg = GwConfig::new(model.beta, model.lambda, trials);
            cfg.max_generations = max_generations;
            cfg.population_cap = pop_cap;
            let run = || gw_survival_mc(&cfg, seed);
            let mc = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| QrgError::Domain(e.to_string()))?
                    .install(run)?,
                None => run()?,
            };
            let gamma_fp = extinction_fixed_point(model.beta, model.lambda, tol)?;
            let gamma_solver = solve_gamma(model.beta, model.lambda, GAMMA_TOLERANCE)?;
            let agree = (mc.estimate - gamma_solver).abs() <= 3.0 * mc.stderr
                && (gamma_fp - gamma_solver).abs() <= 1e-9;
            let report = OracleReport {
                beta: model.beta,
                lambda: model.lambda,
                trials,
                gamma_mc: mc.estimate,
                stderr: mc.stderr,
                gamma_fp,
                gamma_solver,
                agree,
                upper_biased: mc.upper_biased,
            };
            write_json(&report, io::stdout().lock())?;
            Ok(!check || agree)
        }
        Command::ErCheck {
            beta,
            n,
            reps,
            seed,
            output,
            check,
        } => {
            let cmp = er_crosscheck(beta, n, reps, seed, threads)?;
            emit(&[cmp], &output, true)?;
            Ok(!check || cmp.within_tolerance)
        }
        Command::ExportGraph {
            model,
            n,
            seed,
            out,
            keep_multi,
            audit,
        } => {
            let params = ModelParams::new(model.beta, model.lambda, n)?;
            let options = SamplerOptions {
                audit,
                ..Default::default()
            };
            let graph = build_graph_with(&params, seed, &options)?;
            let graph = if keep_multi { graph } else { simplify(&graph).0 };
            write_table(&with_suffix(&out, ".vertices"), |w| write_vertex_table(&graph, w))?;
            write_table(&with_suffix(&out, ".edges"), |w| write_edge_list(&graph, w))?;
            let stats = components(&graph);
            write_table(&with_suffix(&out, ".components"), |w| {
                write_component_table(&stats, keep_multi, w)
            })?;
            if let Some(points) = graph.edge_points() {
                write_table(&with_suffix(&out, ".points"), |w| write_edge_points(points, w))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("tolerance check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

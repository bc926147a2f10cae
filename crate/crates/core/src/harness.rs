//! Ensemble execution and reports comparing simulation to theory.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{components, nth_component, same_component_length_prob_from};
use crate::error::{domain, QrgError, Result};
use crate::model::ModelParams;
use crate::rng::{derive_seed, Purpose};
use crate::sampler::{build_graph, simplify};
use crate::theory::{predictions, TheoryPrediction};

pub const SCHEMA_VERSION: u32 = 1;

/// Absolute floor of the convergence tolerance; the limit theorems give no rates.
pub const ABSOLUTE_TOLERANCE: f64 = 0.02;
/// Multiple of the replicate standard error allowed around a target.
pub const STDERR_MULTIPLE: f64 = 3.0;

pub const TOLERANCE_POLICY: &str =
    "|mean - target| <= max(0.02, 3 * stderr); excess_edges: mean <= beta^2/4 + 3 * stderr";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// `params.n` is ignored when `n_schedule` is non-empty.
    pub params: ModelParams,
    pub replicates: u32,
    pub master_seed: u64,
    pub n_schedule: Vec<u64>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Collapse parallel edges before component analysis.
    pub simplify: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(params: ModelParams, replicates: u32, master_seed: u64) -> Self {
        Self {
            params,
            replicates,
            master_seed,
            n_schedule: Vec::new(),
            output_path: None,
            output_format: OutputFormat::Csv,
            simplify: true,
            threads: None,
        }
    }

    pub fn schedule(&self) -> Vec<u64> {
        if self.n_schedule.is_empty() {
            vec![self.params.n]
        } else {
            let mut s = self.n_schedule.clone();
            s.sort_unstable();
            s.dedup();
            s
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.replicates == 0 {
            return Err(domain("replicates must be at least 1"));
        }
        if self.n_schedule.contains(&0) {
            return Err(domain("every n in the schedule must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(domain("threads must be at least 1"));
        }
        Ok(())
    }
}

/// Per-graph measurements, all normalised by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub schema: u32,
    pub n: u64,
    pub replicate: u32,
    pub seed: u64,
    pub v_q_over_n: f64,
    pub e_q_over_n_multi: f64,
    pub e_q_over_n_simple: f64,
    pub length_over_n: f64,
    pub v_c1_over_n: f64,
    pub len_c1_over_n: f64,
    pub e_c1_over_n: f64,
    pub v_c2_over_n: f64,
    pub len_c2_over_n: f64,
    pub e_c2_over_n: f64,
    pub same_comp_prob: f64,
    pub excess_edges: u64,
    pub max_circle_length_error: f64,
}

/// Names of the aggregated row columns, in output order.
pub const METRICS: [&str; 13] = [
    "v_q_over_n",
    "e_q_over_n_multi",
    "e_q_over_n_simple",
    "length_over_n",
    "v_c1_over_n",
    "len_c1_over_n",
    "e_c1_over_n",
    "v_c2_over_n",
    "len_c2_over_n",
    "e_c2_over_n",
    "same_comp_prob",
    "excess_edges",
    "max_circle_length_error",
];

impl EnsembleRow {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "v_q_over_n" => self.v_q_over_n,
            "e_q_over_n_multi" => self.e_q_over_n_multi,
            "e_q_over_n_simple" => self.e_q_over_n_simple,
            "length_over_n" => self.length_over_n,
            "v_c1_over_n" => self.v_c1_over_n,
            "len_c1_over_n" => self.len_c1_over_n,
            "e_c1_over_n" => self.e_c1_over_n,
            "v_c2_over_n" => self.v_c2_over_n,
            "len_c2_over_n" => self.len_c2_over_n,
            "e_c2_over_n" => self.e_c2_over_n,
            "same_comp_prob" => self.same_comp_prob,
            "excess_edges" => self.excess_edges as f64,
            "max_circle_length_error" => self.max_circle_length_error,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Mean should match the target.
    Equal,
    /// Mean should not exceed the target.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub schema: u32,
    pub n: u64,
    pub metric: String,
    pub replicates: u32,
    pub mean: f64,
    pub stderr: f64,
    pub target: Option<f64>,
    pub target_kind: Option<TargetKind>,
    pub deviation: Option<f64>,
    pub relative_deviation: Option<f64>,
    pub within_tolerance: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub n: u64,
    pub replicate: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub schema: u32,
    pub beta: f64,
    pub lambda: f64,
    pub replicates: u32,
    pub master_seed: u64,
    pub n_schedule: Vec<u64>,
    pub simplify: bool,
    pub tolerance_policy: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub metadata: ReportMetadata,
    pub theory: TheoryPrediction,
    /// Sorted by `n`, then replicate.
    pub rows: Vec<EnsembleRow>,
    pub aggregates: Vec<MetricSummary>,
    pub failures: Vec<ReplicateFailure>,
}

impl EnsembleReport {
    pub fn rows_for(&self, n: u64) -> impl Iterator<Item = &EnsembleRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }

    pub fn summary(&self, n: u64, metric: &str) -> Option<&MetricSummary> {
        self.aggregates
            .iter()
            .find(|s| s.n == n && s.metric == metric)
    }

    /// False if any targeted aggregate is outside tolerance or a replicate
    /// failed.
    pub fn all_within_tolerance(&self) -> bool {
        self.failures.is_empty()
            && self
                .aggregates
                .iter()
                .all(|s| s.within_tolerance.unwrap_or(true))
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

/// Whether an empirical mean meets a target under the harness policy.
pub fn within_tolerance(mean: f64, stderr: f64, target: f64) -> bool {
    (mean - target).abs() <= ABSOLUTE_TOLERANCE.max(STDERR_MULTIPLE * stderr)
}

fn target_for(metric: &str, theory: &TheoryPrediction) -> Option<(f64, TargetKind)> {
    use TargetKind::*;
    Some(match metric {
        "v_q_over_n" => (theory.vertex_density, Equal),
        "e_q_over_n_multi" | "e_q_over_n_simple" => (theory.edge_density, Equal),
        "length_over_n" => (theory.beta, Equal),
        "v_c1_over_n" => (theory.rho, Equal),
        "len_c1_over_n" => (theory.giant_length_density, Equal),
        "e_c1_over_n" => (theory.zeta, Equal),
        "v_c2_over_n" | "len_c2_over_n" | "e_c2_over_n" => (0.0, Equal),
        "same_comp_prob" => (theory.gamma * theory.gamma, Equal),
        "excess_edges" => (theory.beta * theory.beta / 4.0, UpperBound),
        _ => return None,
    })
}

/// Seed of replicate `r` at size `n`.
pub fn replicate_seed(master_seed: u64, n: u64, replicate: u32) -> u64 {
    derive_seed(master_seed, Purpose::Replicate, &[n, u64::from(replicate)])
}

/// Builds and measures a single graph.
pub fn measure_replicate(
    params: &ModelParams,
    seed: u64,
    replicate: u32,
    simplify_first: bool,
) -> Result<EnsembleRow> {
    let graph = build_graph(params, seed)?;
    let nf = params.n as f64;
    let e_multi = graph.edge_count_multi();
    let e_simple = graph.edge_count_simple();
    let excess = graph.excess_edges();

    let mut max_err = 0.0f64;
    for c in 0..params.n as u32 {
        let len: f64 = graph.circle_vertices(c).iter().map(|v| v.length).sum();
        max_err = max_err.max((len - params.beta).abs());
    }

    let analysed = if simplify_first {
        simplify(&graph).0
    } else {
        graph
    };
    let stats = components(&analysed);
    let c1 = nth_component(&stats, 1);
    let c2 = nth_component(&stats, 2);
    let edges = |c: &crate::analysis::ComponentStats| {
        if simplify_first {
            c.edge_count_simple
        } else {
            c.edge_count_multi
        }
    };

    Ok(EnsembleRow {
        schema: SCHEMA_VERSION,
        n: params.n,
        replicate,
        seed,
        v_q_over_n: analysed.vertex_count() as f64 / nf,
        e_q_over_n_multi: e_multi as f64 / nf,
        e_q_over_n_simple: e_simple as f64 / nf,
        length_over_n: analysed.total_length() / nf,
        v_c1_over_n: c1.vertex_count as f64 / nf,
        len_c1_over_n: c1.total_length / nf,
        e_c1_over_n: edges(&c1) as f64 / nf,
        v_c2_over_n: c2.vertex_count as f64 / nf,
        len_c2_over_n: c2.total_length / nf,
        e_c2_over_n: edges(&c2) as f64 / nf,
        same_comp_prob: same_component_length_prob_from(&stats, &analysed),
        excess_edges: excess,
        max_circle_length_error: max_err,
    })
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| domain(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs every `(n, replicate)` cell of the configuration.
///
/// A replicate that errors or panics is recorded in `failures` and the run
/// continues. The report depends only on the configuration, never on the
/// thread count.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleReport> {
    config.validate()?;
    let schedule = config.schedule();
    let theory = predictions(config.params.beta, config.params.hole_intensity)?;

    let cells: Vec<(u64, u32)> = schedule
        .iter()
        .flat_map(|&n| (0..config.replicates).map(move |r| (n, r)))
        .collect();

    let outcomes: Vec<std::result::Result<EnsembleRow, ReplicateFailure>> =
        with_threads(config.threads, || {
            cells
                .par_iter()
                .map(|&(n, r)| {
                    let params = ModelParams { n, ..config.params };
                    let seed = replicate_seed(config.master_seed, n, r);
                    let result = panic::catch_unwind(AssertUnwindSafe(|| {
                        measure_replicate(&params, seed, r, config.simplify)
                    }));
                    match result {
                        Ok(Ok(row)) => Ok(row),
                        Ok(Err(e)) => Err(ReplicateFailure {
                            n,
                            replicate: r,
                            message: e.to_string(),
                        }),
                        Err(p) => Err(ReplicateFailure {
                            n,
                            replicate: r,
                            message: panic_message(p),
                        }),
                    }
                })
                .collect()
        })?;

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by_key(|r| (r.n, r.replicate));

    let aggregates = aggregate(&rows, &schedule, &theory);
    Ok(EnsembleReport {
        metadata: ReportMetadata {
            schema: SCHEMA_VERSION,
            beta: config.params.beta,
            lambda: config.params.hole_intensity,
            replicates: config.replicates,
            master_seed: config.master_seed,
            n_schedule: schedule,
            simplify: config.simplify,
            tolerance_policy: TOLERANCE_POLICY.to_string(),
        },
        theory,
        rows,
        aggregates,
        failures,
    })
}

/// Per-`n` means and standard errors of every metric, with theory targets.
pub fn aggregate(rows: &[EnsembleRow], schedule: &[u64], theory: &TheoryPrediction) -> Vec<MetricSummary> {
    let mut out = Vec::new();
    for &n in schedule {
        let cell: Vec<&EnsembleRow> = rows.iter().filter(|r| r.n == n).collect();
        if cell.is_empty() {
            continue;
        }
        for metric in METRICS {
            let values: Vec<f64> = cell.iter().filter_map(|r| r.metric(metric)).collect();
            let (mean, stderr) = mean_and_stderr(&values);
            let target = target_for(metric, theory);
            let (deviation, relative, within) = match target {
                Some((t, kind)) => {
                    let dev = mean - t;
                    let rel = if t != 0.0 { Some(dev / t) } else { None };
                    let ok = match kind {
                        TargetKind::Equal => within_tolerance(mean, stderr, t),
                        TargetKind::UpperBound => mean <= t + STDERR_MULTIPLE * stderr,
                    };
                    (Some(dev), rel, Some(ok))
                }
                None => (None, None, None),
            };
            out.push(MetricSummary {
                schema: SCHEMA_VERSION,
                n,
                metric: metric.to_string(),
                replicates: values.len() as u32,
                mean,
                stderr,
                target: target.map(|t| t.0),
                target_kind: target.map(|t| t.1),
                deviation,
                relative_deviation: relative,
                within_tolerance: within,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub schema: u32,
    pub beta: f64,
    pub lambda: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub gamma: f64,
    pub rho: f64,
    pub zeta: f64,
    pub n: u64,
    pub replicates: u32,
    pub mean_v_c1_over_n: f64,
    pub stderr_v_c1_over_n: f64,
    pub supercritical: bool,
}

/// One row per `(beta, lambda)` grid cell: theory and the mean giant
/// vertex fraction at size `n`.
pub fn phase_sweep(
    beta_grid: &[f64],
    lambda_grid: &[f64],
    n: u64,
    replicates: u32,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<Vec<SweepCell>> {
    if beta_grid.is_empty() || lambda_grid.is_empty() {
        return Err(domain("sweep grids must be non-empty"));
    }
    let mut cells = Vec::with_capacity(beta_grid.len() * lambda_grid.len());
    for (bi, &beta) in beta_grid.iter().enumerate() {
        for (li, &lambda) in lambda_grid.iter().enumerate() {
            let params = ModelParams::new(beta, lambda, n)?;
            let seed = derive_seed(master_seed, Purpose::Sweep, &[bi as u64, li as u64]);
            let mut config = ExperimentConfig::new(params, replicates, seed);
            config.threads = threads;
            let report = run_ensemble(&config)?;
            if let Some(f) = report.failures.first() {
                return Err(QrgError::ReplicatePanicked {
                    n: f.n,
                    replicate: f.replicate,
                    message: f.message.clone(),
                });
            }
            let s = report
                .summary(n, "v_c1_over_n")
                .expect("v_c1_over_n is always aggregated");
            let t = report.theory;
            cells.push(SweepCell {
                schema: SCHEMA_VERSION,
                beta,
                lambda,
                f: t.f,
                gamma: t.gamma,
                rho: t.rho,
                zeta: t.zeta,
                n,
                replicates,
                mean_v_c1_over_n: s.mean,
                stderr_v_c1_over_n: s.stderr,
                supercritical: t.f > 1.0,
            });
        }
    }
    Ok(cells)
}

/// Root of `g = 1 - e^{-beta g}` by bisection; 0 when `beta <= 1`.
pub fn er_giant_fraction(beta: f64) -> f64 {
    if beta <= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (f64::EPSILON, 1.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if -(-beta * mid).exp_m1() - mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErComparison {
    pub schema: u32,
    pub beta: f64,
    pub n: u64,
    pub replicates: u32,
    pub gamma_er: f64,
    pub mean_v_c1_over_n: f64,
    pub stderr_v_c1_over_n: f64,
    pub deviation: f64,
    pub within_tolerance: bool,
}

/// Runs the zero-intensity ensemble and compares the giant vertex fraction
/// with the classical random-graph prediction.
pub fn er_crosscheck(
    beta: f64,
    n: u64,
    replicates: u32,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<ErComparison> {
    let params = ModelParams::new(beta, 0.0, n)?;
    let mut config = ExperimentConfig::new(params, replicates, master_seed);
    config.threads = threads;
    let report = run_ensemble(&config)?;
    if let Some(f) = report.failures.first() {
        return Err(QrgError::ReplicatePanicked {
            n: f.n,
            replicate: f.replicate,
            message: f.message.clone(),
        });
    }
    let values: Vec<f64> = report.rows.iter().map(|r| r.v_c1_over_n).collect();
    let (mean, stderr) = mean_and_stderr(&values);
    let gamma_er = er_giant_fraction(beta);
    Ok(ErComparison {
        schema: SCHEMA_VERSION,
        beta,
        n,
        replicates,
        gamma_er,
        mean_v_c1_over_n: mean,
        stderr_v_c1_over_n: stderr,
        deviation: mean - gamma_er,
        within_tolerance: within_tolerance(mean, stderr, gamma_er),
    })
}

fn csv_error(e: csv::Error) -> QrgError {
    QrgError::Serialize(e.to_string())
}

/// Writes serialisable records as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush().map_err(|e| QrgError::Serialize(e.to_string()))
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| QrgError::Serialize(e.to_string()))?;
    writeln!(out).map_err(|e| QrgError::Serialize(e.to_string()))
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| QrgError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Path of the aggregate table written next to a CSV row table.
pub fn summary_path(rows_path: &Path) -> PathBuf {
    let stem = rows_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".to_string());
    rows_path.with_file_name(format!("{stem}.summary.csv"))
}

/// Writes a report. CSV puts rows at `path` and aggregates at
/// [`summary_path`]; JSON writes one document. Without a path, output goes
/// to `stdout` (CSV: rows, a blank line, then aggregates).
pub fn write_report<W: Write>(
    report: &EnsembleReport,
    format: OutputFormat,
    path: Option<&Path>,
    stdout: &mut W,
) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| QrgError::Io { path, source }
    };
    match (format, path) {
        (OutputFormat::Json, Some(p)) => {
            let mut f = create_file(p)?;
            write_json(report, &mut f)?;
            f.flush().map_err(io_err(p))
        }
        (OutputFormat::Json, None) => write_json(report, stdout),
        (OutputFormat::Csv, Some(p)) => {
            let mut f = create_file(p)?;
            write_csv(&report.rows, &mut f)?;
            f.flush().map_err(io_err(p))?;
            let sp = summary_path(p);
            let mut s = create_file(&sp)?;
            write_csv(&report.aggregates, &mut s)?;
            s.flush().map_err(io_err(&sp))
        }
        (OutputFormat::Csv, None) => {
            write_csv(&report.rows, &mut *stdout)?;
            writeln!(stdout).map_err(|e| QrgError::Serialize(e.to_string()))?;
            write_csv(&report.aggregates, &mut *stdout)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stderr_of_constant_sample_is_zero() {
        assert_eq!(mean_and_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, s) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn er_root() {
        assert!((er_giant_fraction(2.0) - 0.796_812_13).abs() < 1e-8);
        assert_eq!(er_giant_fraction(0.5), 0.0);
    }

    #[test]
    fn small_ensemble_is_consistent() {
        let params = ModelParams::new(2.0, 0.5, 500).unwrap();
        let mut config = ExperimentConfig::new(params, 4, 17);
        config.n_schedule = vec![800, 300];
        let report = run_ensemble(&config).unwrap();
        assert!(report.failures.is_empty());
        assert_eq!(report.rows.len(), 8);
        assert_eq!(report.metadata.n_schedule, vec![300, 800]);
        assert!(report.rows.windows(2).all(|w| (w[0].n, w[0].replicate) < (w[1].n, w[1].replicate)));
        for r in &report.rows {
            assert!(r.e_q_over_n_multi >= r.e_q_over_n_simple);
            assert!(r.v_c1_over_n >= r.v_c2_over_n);
            assert!(r.max_circle_length_error < 1e-9);
            assert!((r.length_over_n - 2.0).abs() < 1e-9);
        }
        assert_eq!(report.aggregates.len(), 2 * METRICS.len());
        let s = report.summary(300, "v_c1_over_n").unwrap();
        let values: Vec<f64> = report.rows_for(300).map(|r| r.v_c1_over_n).collect();
        assert_eq!((s.mean, s.stderr), mean_and_stderr(&values));
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let params = ModelParams::new(1.5, 1.0, 400).unwrap();
        let mut a = ExperimentConfig::new(params, 5, 99);
        a.threads = Some(1);
        let mut b = a.clone();
        b.threads = Some(3);
        assert_eq!(run_ensemble(&a).unwrap(), run_ensemble(&b).unwrap());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let params = ModelParams::new(1.5, 1.0, 400).unwrap();
        let mut c = ExperimentConfig::new(params, 0, 1);
        assert!(run_ensemble(&c).is_err());
        c.replicates = 1;
        c.n_schedule = vec![0];
        assert!(run_ensemble(&c).is_err());
    }

    #[test]
    fn sweep_shape() {
        let cells = phase_sweep(&[0.5, 2.0], &[0.0, 0.5, 1.0], 200, 2, 5, None).unwrap();
        assert_eq!(cells.len(), 6);
        assert!(cells.iter().all(|c| c.supercritical == (c.f > 1.0)));
        assert!(phase_sweep(&[], &[1.0], 10, 1, 1, None).is_err());
    }

    #[test]
    fn csv_has_schema_column() {
        let params = ModelParams::new(1.0, 1.0, 50).unwrap();
        let report = run_ensemble(&ExperimentConfig::new(params, 2, 3)).unwrap();
        let mut buf = Vec::new();
        write_csv(&report.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("schema,n,replicate,seed,"));
        assert!(lines.next().unwrap().starts_with("1,50,0,"));
    }
}

//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p qrg-core --test acceptance`. Every tolerance is
//! pinned below; the convergence thresholds of 0.01 and 0.02 are engineering
//! policy because the limit theorems carry no rates.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrg_core::analysis::degree_histogram;
use qrg_core::branching::{extinction_fixed_point, gw_survival_mc, GwConfig};
use qrg_core::harness::{mean_and_stderr, run_ensemble, EnsembleReport, ExperimentConfig};
use qrg_core::model::{full_circle_atom_mass, mu_rectangle_mass, MeasureHat, ModelParams, TypeRect};
use qrg_core::sampler::{build_graph, build_graph_with, EdgeSampling, SamplerOptions};
use qrg_core::theory::{
    critical_f, degree_pmf, predictions, rho_closed, rho_integral, solve_gamma, zeta_closed,
    zeta_integral, GAMMA_TOLERANCE,
};

/// Root of `g = 1 - e^{-2g}`, frozen from the bisection in `er_root`.
const ER_GAMMA_BETA2: f64 = 0.796_812_1;
const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for &b in &linspace(0.2, 4.0, 10) {
        for &l in &linspace(0.0, 3.0, 10) {
            g.push((b, l));
        }
    }
    g
}

fn er_root(beta: f64) -> f64 {
    let (mut lo, mut hi) = (1e-9, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - (-beta * mid).exp() - mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ensemble(beta: f64, lambda: f64, n: u64, reps: u32, seed: u64) -> EnsembleReport {
    let params = ModelParams::new(beta, lambda, n).unwrap();
    let report = run_ensemble(&ExperimentConfig::new(params, reps, seed)).unwrap();
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    report
}

fn column(report: &EnsembleReport, f: impl Fn(&qrg_core::harness::EnsembleRow) -> f64) -> (f64, f64) {
    let values: Vec<f64> = report.rows.iter().map(f).collect();
    mean_and_stderr(&values)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for (b, l) in grid() {
        let closed = critical_f(b, l).unwrap();
        let integral = MeasureHat::new(b, l).unwrap().integral(|x| x * x / b).unwrap();
        worst = worst.max((closed - integral).abs());
    }
    let elapsed = t.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(1),
        format!("max |F - ∫x²dμ̂/β| = {worst:.2e} (tol 1e-8), {elapsed:.2?} (< 1 s)"),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut zero_rule = true;
    for (b, l) in grid() {
        let solved = solve_gamma(b, l, GAMMA_TOLERANCE).unwrap();
        let fp = extinction_fixed_point(b, l, 1e-11).unwrap();
        worst = worst.max((solved - fp).abs());
        let sub = critical_f(b, l).unwrap() <= 1.0;
        zero_rule &= sub == (solved == 0.0) && sub == (fp == 0.0);
    }
    let elapsed = t.elapsed();
    outcome(
        worst <= 1e-9 && zero_rule && elapsed < Duration::from_secs(5),
        format!(
            "max |solver - fixed point| = {worst:.2e} (tol 1e-9), zero iff F<=1: {zero_rule}, {elapsed:.2?} (< 5 s)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rho_worst = 0.0f64;
    for _ in 0..1000 {
        let b = rng.random_range(0.2..4.0);
        let l = rng.random_range(0.0..3.0);
        let g = rng.random_range(0.0..1.0);
        rho_worst = rho_worst.max((rho_closed(b, l, g) - rho_integral(b, l, g).unwrap()).abs());
    }
    let mut zeta_worst = 0.0f64;
    for (b, l) in grid() {
        let g = solve_gamma(b, l, GAMMA_TOLERANCE).unwrap();
        zeta_worst = zeta_worst.max((zeta_closed(b, g) - zeta_integral(b, l, g).unwrap()).abs());
    }
    outcome(
        rho_worst <= 1e-10 && zeta_worst <= 1e-8,
        format!("max ρ gap {rho_worst:.2e} (tol 1e-10), max ζ gap {zeta_worst:.2e} (tol 1e-8)"),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let oracle = er_root(2.0);
    let report = ensemble(2.0, 0.0, 100_000, 20, SEED ^ 4);
    let (mean, se) = column(&report, |r| r.v_c1_over_n);
    let elapsed = t.elapsed();
    let dev = (mean - ER_GAMMA_BETA2).abs();
    outcome(
        dev <= 0.01 && (oracle - ER_GAMMA_BETA2).abs() < 1e-7 && elapsed < Duration::from_secs(120),
        format!("mean v(C1)/n = {mean:.5} ± {se:.5}, |dev| = {dev:.5} (tol 0.01), {elapsed:.2?} (< 2 min)"),
    )
}

struct Supercritical {
    report: EnsembleReport,
    elapsed: Duration,
}

fn supercritical() -> Supercritical {
    let t = Instant::now();
    let report = ensemble(2.0, 0.5, 50_000, 20, SEED ^ 5);
    Supercritical {
        report,
        elapsed: t.elapsed(),
    }
}

fn criterion_5(run: &Supercritical) -> Outcome {
    let th = predictions(2.0, 0.5).unwrap();
    let (v, _) = column(&run.report, |r| r.v_c1_over_n);
    let (len, _) = column(&run.report, |r| r.len_c1_over_n);
    let (e, _) = column(&run.report, |r| r.e_c1_over_n);
    let ok = (v - th.rho).abs() <= 0.02
        && (len - th.giant_length_density).abs() <= 0.02
        && (e - th.zeta).abs() <= 0.02
        && run.elapsed < Duration::from_secs(180);
    outcome(
        ok,
        format!(
            "v(C1)/n {v:.4} vs ρ {:.4}; λ(C1)/n {len:.4} vs γβ {:.4}; e(C1)/n {e:.4} vs ζ {:.4} (tol 0.02), {:.2?} (< 3 min)",
            th.rho, th.giant_length_density, th.zeta, run.elapsed
        ),
    )
}

fn criterion_6() -> Outcome {
    let report = ensemble(0.5, 1.0, 50_000, 5, SEED ^ 6);
    let worst = report
        .rows
        .iter()
        .map(|r| r.v_c1_over_n.max(r.len_c1_over_n).max(r.e_c1_over_n))
        .fold(0.0f64, f64::max);
    let f = critical_f(0.5, 1.0).unwrap();
    outcome(
        worst <= 0.02 && f < 1.0,
        format!("F = {f:.7}; largest C1 density over 5 replicates = {worst:.5} (tol 0.02)"),
    )
}

fn criterion_7() -> Outcome {
    let (b, l) = (1.0, 1.0);
    let report = ensemble(b, l, 100_000, 20, SEED ^ 7);
    let (v, v_se) = column(&report, |r| r.v_q_over_n);
    let (e, e_se) = column(&report, |r| r.e_q_over_n_multi);
    let length_err = report
        .rows
        .iter()
        .map(|r| r.max_circle_length_error)
        .fold(0.0f64, f64::max);
    let v_target = l * b + (-l * b).exp();
    let e_target = b / 2.0;
    let ok = (v - v_target).abs() <= 3.0 * v_se && (e - e_target).abs() <= 3.0 * e_se && length_err <= 1e-9;
    outcome(
        ok,
        format!(
            "v(Q)/n {v:.5} vs {v_target:.5} ({:.2} SE); e(Q)/n {e:.5} vs {e_target:.5} ({:.2} SE); max circle length error {length_err:.1e}",
            (v - v_target).abs() / v_se,
            (e - e_target).abs() / e_se
        ),
    )
}

fn criterion_8(run: &Supercritical) -> Outcome {
    let g = predictions(2.0, 0.5).unwrap().gamma;
    let (p, _) = column(&run.report, |r| r.same_comp_prob);
    outcome(
        (p - g * g).abs() <= 0.02,
        format!("same-component probability {p:.4} vs γ² {:.4} (tol 0.02)", g * g),
    )
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for l in [0.0, 0.5] {
        let report = ensemble(2.0, l, 10_000, 50, SEED ^ 9 ^ (l * 10.0) as u64);
        let (mean, se) = column(&report, |r| r.excess_edges as f64);
        ok &= mean <= 1.0 + 3.0 * se;
        lines.push(format!("λ={l}: mean excess {mean:.3} ± {se:.3}"));
    }
    outcome(ok, format!("{} (bound β²/4 = 1 + 3 SE)", lines.join("; ")))
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for (k, (b, l)) in [(0.5, 1.0), (2.0, 0.5), (2.0, 0.0)].into_iter().enumerate() {
        let mut cfg = GwConfig::new(b, l, 100_000);
        cfg.population_cap = 1_000;
        let est = gw_survival_mc(&cfg, SEED + k as u64).unwrap();
        let target = solve_gamma(b, l, GAMMA_TOLERANCE).unwrap();
        let pass = (est.estimate - target).abs() <= 3.0 * est.stderr;
        ok &= pass;
        lines.push(format!(
            "(β={b}, λ={l}) MC {:.4} ± {:.4} vs γ {target:.4}",
            est.estimate, est.stderr
        ));
    }
    outcome(ok, lines.join("; "))
}

/// Upper 1% point of the chi-square law (Wilson–Hilferty).
fn chi_square_upper_1pct(df: usize) -> f64 {
    const Z_99: f64 = 2.326_347_874_040_841;
    let k = df as f64;
    let c = 2.0 / (9.0 * k);
    k * (1.0 - c + Z_99 * c.sqrt()).powi(3)
}

/// Two-sample chi-square homogeneity statistic for equal-size samples, with
/// sparse tails merged so every bin holds at least 10 pooled observations.
fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, usize) {
    let max = a.iter().chain(b).copied().max().unwrap_or(0) as usize;
    let mut ca = vec![0u64; max + 1];
    let mut cb = vec![0u64; max + 1];
    a.iter().for_each(|&x| ca[x as usize] += 1);
    b.iter().for_each(|&x| cb[x as usize] += 1);
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let (mut acc_a, mut acc_b) = (0, 0);
    for k in 0..=max {
        acc_a += ca[k];
        acc_b += cb[k];
        if acc_a + acc_b >= 10 {
            bins.push((acc_a, acc_b));
            acc_a = 0;
            acc_b = 0;
        }
    }
    if acc_a + acc_b > 0 {
        let last = bins.last_mut().unwrap();
        last.0 += acc_a;
        last.1 += acc_b;
    }
    let stat = bins
        .iter()
        .map(|&(x, y)| (x as f64 - y as f64).powi(2) / (x + y) as f64)
        .sum();
    (stat, bins.len() - 1)
}

fn criterion_11() -> Outcome {
    // Aggregate vs per-pair edge sampling at n = 20.
    let params = ModelParams::new(2.0, 1.0, 20).unwrap();
    let reps = 10_000u64;
    let draw = |sampling, offset: u64| {
        let opts = SamplerOptions {
            edge_sampling: sampling,
            audit: false,
        };
        let graphs: Vec<_> = (0..reps)
            .map(|r| build_graph_with(&params, offset + r, &opts).unwrap())
            .collect();
        let multi: Vec<u64> = graphs.iter().map(|g| g.edge_count_multi()).collect();
        let simple: Vec<u64> = graphs.iter().map(|g| g.edge_count_simple()).collect();
        (multi, simple)
    };
    let (agg_multi, agg_simple) = draw(EdgeSampling::Aggregate, 0);
    let (pair_multi, pair_simple) = draw(EdgeSampling::PerPair, 1 << 40);
    let (s_multi, df_multi) = two_sample_chi_square(&agg_multi, &pair_multi);
    let (s_simple, df_simple) = two_sample_chi_square(&agg_simple, &pair_simple);
    let crit_multi = chi_square_upper_1pct(df_multi);
    let crit_simple = chi_square_upper_1pct(df_simple);
    let exchange_ok = s_multi < crit_multi && s_simple < crit_simple;

    // Empirical type measure against rectangle masses at n = 1e5.
    let (beta, lambda, n) = (2.0, 1.0, 100_000u64);
    let graph = build_graph(&ModelParams::new(beta, lambda, n).unwrap(), SEED ^ 11).unwrap();
    let rects = [
        TypeRect { x_lo: 0.0, x_hi: 0.5, len_lo: 0.0, len_hi: 0.25 },
        TypeRect { x_lo: 0.5, x_hi: 1.5, len_lo: 0.25, len_hi: 1.0 },
        TypeRect { x_lo: 1.0, x_hi: 2.0, len_lo: 1.0, len_hi: 2.0 },
        TypeRect { x_lo: 0.0, x_hi: 2.0, len_lo: 0.0, len_hi: 0.1 },
        TypeRect { x_lo: 1.2, x_hi: 1.3, len_lo: 0.0, len_hi: 2.0 },
    ];
    let mut measure_ok = true;
    let mut zs = Vec::new();
    let mut check = |per_circle: Vec<f64>, target: f64| {
        let (mean, se) = mean_and_stderr(&per_circle);
        let z = (mean - target).abs() / se;
        measure_ok &= z <= 3.0;
        zs.push(z);
    };
    for rect in &rects {
        let per_circle: Vec<f64> = (0..n as u32)
            .map(|c| {
                graph
                    .circle_vertices(c)
                    .iter()
                    .filter(|v| rect.contains(v, beta))
                    .count() as f64
            })
            .collect();
        check(per_circle, mu_rectangle_mass(rect, beta, lambda).unwrap());
    }
    let atom: Vec<f64> = (0..n as u32)
        .map(|c| f64::from(u8::from(graph.circle_vertices(c)[0].is_full_circle(beta))))
        .collect();
    check(atom, full_circle_atom_mass(beta, lambda));

    outcome(
        exchange_ok && measure_ok,
        format!(
            "χ² multi {s_multi:.1} < {crit_multi:.1} (df {df_multi}), simple {s_simple:.1} < {crit_simple:.1} (df {df_simple}); measure |z| = [{}] (<= 3)",
            zs.iter().map(|z| format!("{z:.2}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn criterion_12() -> Outcome {
    let graph = build_graph(&ModelParams::new(1.0, 1.0, 100_000).unwrap(), SEED ^ 12).unwrap();
    let hist = degree_histogram(&graph, false);
    let freq = hist.frequencies();
    let k_max = freq.len() + 10;
    let pmf = degree_pmf(1.0, 1.0, k_max).unwrap();
    let mut tv = pmf.tail;
    for (k, p) in pmf.probabilities.iter().enumerate() {
        tv += (freq.get(k).copied().unwrap_or(0.0) - p).abs();
    }
    tv *= 0.5;
    let slope = hist.length_slope();
    outcome(
        tv <= 0.02 && (0.95..=1.05).contains(&slope),
        format!("TV distance {tv:.4} (tol 0.02), length slope {slope:.4} (in [0.95, 1.05])"),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id, name, o: Outcome| {
        println!("[{}] {id:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "critical functional = second moment of μ̂", criterion_1());
    record(2, "solver = fixed-point iteration", criterion_2());
    record(3, "ρ and ζ closed forms = integrals", criterion_3());
    record(4, "zero-intensity reduction to G(n,p)", criterion_4());
    let sup = supercritical();
    record(5, "supercritical giant densities", criterion_5(&sup));
    record(6, "subcritical smallness", criterion_6());
    record(7, "global densities", criterion_7());
    record(8, "two-point same-component probability", criterion_8(&sup));
    record(9, "multi-edge bound", criterion_9());
    record(10, "branching Monte Carlo", criterion_10());
    record(11, "sampler fidelity", criterion_11());
    record(12, "degree law", criterion_12());

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}

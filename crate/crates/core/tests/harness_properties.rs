use qrg_core::harness::{
    er_giant_fraction, mean_and_stderr, phase_sweep, run_ensemble, write_csv, EnsembleRow,
    ExperimentConfig,
};
use qrg_core::model::ModelParams;
use qrg_core::theory::predictions;

fn config(beta: f64, lambda: f64, n: u64, reps: u32, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(ModelParams::new(beta, lambda, n).unwrap(), reps, seed)
}

#[test]
fn output_is_independent_of_thread_count() {
    let mut a = config(2.0, 0.5, 3000, 6, 99);
    a.n_schedule = vec![1000, 3000];
    let mut b = a.clone();
    a.threads = Some(1);
    b.threads = Some(4);
    let (ra, rb) = (run_ensemble(&a).unwrap(), run_ensemble(&b).unwrap());
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    write_csv(&ra.rows, &mut ca).unwrap();
    write_csv(&rb.rows, &mut cb).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(ra.rows.len(), 12);
}

#[test]
fn csv_rows_round_trip() {
    let report = run_ensemble(&config(1.0, 1.0, 500, 3, 5)).unwrap();
    let mut buf = Vec::new();
    write_csv(&report.rows, &mut buf).unwrap();
    let back: Vec<EnsembleRow> = csv::Reader::from_reader(buf.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(back.len(), report.rows.len());
    for (x, y) in back.iter().zip(&report.rows) {
        assert_eq!((x.n, x.replicate, x.seed), (y.n, y.replicate, y.seed));
        assert!((x.v_c1_over_n - y.v_c1_over_n).abs() < 1e-15);
    }
}

/// Standard error should shrink like 1/sqrt(replicates): about 2 from 5 to 20.
#[test]
fn stderr_ratio_five_vs_twenty() {
    let mut ratios = Vec::new();
    for seed in 0..10u64 {
        let report = run_ensemble(&config(2.0, 0.5, 2000, 20, 1000 + seed)).unwrap();
        let v: Vec<f64> = report.rows.iter().map(|r| r.v_q_over_n).collect();
        let (_, se5) = mean_and_stderr(&v[..5]);
        let (_, se20) = mean_and_stderr(&v);
        ratios.push(se5 / se20);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((1.6..=2.4).contains(&mean), "mean ratio {mean}, {ratios:?}");
}

#[test]
fn sweep_tracks_the_phase_boundary() {
    let betas = [0.5, 1.0, 2.0, 3.0];
    let lambdas = [0.0, 0.5, 1.5];
    let cells = phase_sweep(&betas, &lambdas, 20_000, 3, 3, None).unwrap();
    assert_eq!(cells.len(), 12);
    for c in &cells {
        assert_eq!(c.supercritical, c.f > 1.0);
        if (c.f - 1.0).abs() < 0.2 {
            continue;
        }
        let has_giant = c.mean_v_c1_over_n > 0.05;
        assert_eq!(has_giant, c.f > 1.0, "{c:?}");
        if c.f > 1.0 {
            assert!((c.mean_v_c1_over_n - c.rho).abs() < 0.03, "{c:?}");
        }
        if c.lambda == 0.0 {
            assert!((c.mean_v_c1_over_n - er_giant_fraction(c.beta)).abs() < 0.03, "{c:?}");
        }
    }
}

#[test]
fn vanishing_intensity_is_continuous() {
    for beta in [0.5, 1.5, 2.0, 3.0] {
        let a = predictions(beta, 1e-8).unwrap();
        let b = predictions(beta, 0.0).unwrap();
        for (x, y) in [(a.f, b.f), (a.gamma, b.gamma), (a.rho, b.rho), (a.zeta, b.zeta)] {
            assert!((x - y).abs() < 1e-5, "beta {beta}: {x} vs {y}");
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = config(1.0, 1.0, 10, 0, 1);
    assert!(run_ensemble(&c).is_err());
    c.replicates = 2;
    c.n_schedule = vec![0];
    assert!(run_ensemble(&c).is_err());
    c.n_schedule = vec![10];
    c.threads = Some(0);
    assert!(run_ensemble(&c).is_err());
}

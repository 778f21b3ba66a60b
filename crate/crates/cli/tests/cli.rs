use std::process::Command;

use proptest::prelude::*;
use ris_linklab::montecarlo::{PointResult, SweepResult};
use ris_linklab::schemes::Scheme;
use ris_linklab_cli::presets::{run_figure_preset, PresetOptions};
use ris_linklab_cli::runs::{simulate, Series, SimBudget, SnrGrid};
use ris_linklab_cli::table::{read_csv, rows_from_sweep, sweeps_from_rows, write_csv, Metric};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ris-linklab"))
}

fn sweep_strategy() -> impl Strategy<Value = SweepResult> {
    let scheme = prop::sample::select(Scheme::ALL.to_vec());
    let order = prop::sample::select(vec![2usize, 4, 16, 64]);
    (
        scheme,
        1usize..512,
        order,
        prop::collection::vec((1u64..1u64 << 40, 0.0f64..1.0, 0.0f64..1.0), 1..8),
    )
        .prop_map(|(scheme, n, order, pts)| {
            let bits = order.trailing_zeros();
            let points = pts
                .into_iter()
                .enumerate()
                .map(|(i, (trials, fs, fb))| {
                    let symbol_errors = (trials as f64 * fs) as u64;
                    PointResult {
                        snr_db: -60.0 + i as f64 * 0.1 + fs * 1e-3,
                        trials,
                        symbol_errors,
                        bit_errors: symbol_errors
                            + ((symbol_errors * u64::from(bits - 1)) as f64 * fb) as u64,
                        bits_per_symbol: bits,
                    }
                })
                .collect();
            SweepResult {
                scheme,
                n_reflectors: n,
                order,
                points,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_reproduces_sweep(sweep in sweep_strategy()) {
        let rows = rows_from_sweep(&sweep);
        let text = write_csv(&rows).unwrap();
        let parsed = read_csv(&text).unwrap();
        prop_assert_eq!(&parsed, &rows);
        prop_assert_eq!(sweeps_from_rows(&parsed).unwrap(), vec![sweep]);
    }
}

#[test]
fn simulated_sweep_round_trips() {
    let s = Series::new(Scheme::ApIntelligent, 8, 4).unwrap();
    let grid = SnrGrid::new(-20.0, -10.0, 2.5).unwrap().points();
    let budget = SimBudget {
        max_trials: 5_000,
        min_errors: 50,
        chunk_size: 500,
        ..SimBudget::default()
    };
    let sweep = simulate(s, &grid, 3, &budget).unwrap();
    let text = write_csv(&rows_from_sweep(&sweep)).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(
        sweeps_from_rows(&read_csv(&text).unwrap()).unwrap(),
        vec![sweep]
    );
}

#[test]
fn fig2_is_analytic_only() {
    let fig = run_figure_preset("fig2", &PresetOptions::default()).unwrap();
    let rows = read_csv(&fig.csv).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 61);
    assert!(rows
        .iter()
        .all(|r| r.counts.is_none() && !r.metric.is_simulated()));
    assert!(rows.iter().all(|r| r.scheme == Scheme::DhIntelligent));
    assert!(rows.iter().any(|r| r.metric == Metric::SepBound));
    assert!(fig.plot_script.contains("fig2.csv"));
}

#[test]
fn presets_are_pure_in_seed() {
    let options = PresetOptions {
        seed: 5,
        budget: SimBudget {
            max_trials: 2_000,
            min_errors: 20,
            chunk_size: 500,
            stop_on_zero_errors: true,
            workers: None,
        },
        grid: Some(SnrGrid::new(-40.0, -30.0, 5.0).unwrap()),
        ..PresetOptions::default()
    };
    let a = run_figure_preset("fig6", &options).unwrap();
    assert_eq!(a, run_figure_preset("fig6", &options).unwrap());
    let rows = read_csv(&a.csv).unwrap();
    assert!(rows.iter().all(|r| r.n_reflectors == 64 && r.order >= 4));
    assert!(rows.iter().any(|r| r.metric == Metric::Ser));
    let other = run_figure_preset("fig6", &PresetOptions { seed: 6, ..options }).unwrap();
    assert_ne!(a.csv, other.csv);
}

#[test]
fn unknown_preset_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["figure", "fig9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig9"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec![
            "analytic",
            "--scheme",
            "dh_blind",
            "--n",
            "4",
            "--snr-start-db",
            "0",
            "--snr-stop-db",
            "-1",
        ],
        vec![
            "analytic",
            "--scheme",
            "warp",
            "--n",
            "4",
            "--snr-start-db",
            "0",
            "--snr-stop-db",
            "1",
        ],
        vec![
            "analytic",
            "--scheme",
            "dh_blind",
            "--n",
            "4",
            "--m",
            "8",
            "--snr-start-db",
            "0",
            "--snr-stop-db",
            "1",
        ],
        vec![
            "analytic",
            "--scheme",
            "dh_blind",
            "--n",
            "4",
            "--nodes",
            "8",
            "--snr-start-db",
            "0",
            "--snr-stop-db",
            "1",
        ],
        vec![
            "simulate",
            "--scheme",
            "ap_blind",
            "--n",
            "4",
            "--min-errors",
            "0",
            "--snr-start-db",
            "0",
            "--snr-stop-db",
            "1",
        ],
        vec![
            "compare", "--scheme", "dh_blind", "--n", "4", "--target", "0.9",
        ],
        vec![
            "compare", "--scheme", "dh_blind", "--n", "4,8,16", "--target", "1e-3",
        ],
        vec!["bogus"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn analytic_to_file_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let args = [
        "analytic",
        "--scheme",
        "ap_intelligent",
        "--n",
        "8,16",
        "--m",
        "4",
        "--snr-start-db",
        "-30",
        "--snr-stop-db",
        "-20",
        "--snr-step-db",
        "0.5",
    ];
    let stdout = bin().args(args).output().unwrap();
    assert_eq!(stdout.status.code(), Some(0));
    let file = bin().args(args).arg("--out").arg(&path).output().unwrap();
    assert_eq!(file.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.as_bytes(), stdout.stdout.as_slice());
    assert_eq!(read_csv(&text).unwrap().len(), 2 * 21 * 2);
}

#[test]
fn compare_prints_gap() {
    let out = bin()
        .args([
            "compare", "--scheme", "dh_blind", "--n", "16,32", "--target", "1e-3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let gap: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("gap_db="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((gap - 3.0103).abs() < 1e-3, "{gap}");
}

#[test]
fn figure_writes_csv_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "figure",
            "fig7",
            "--max-trials",
            "2000",
            "--min-errors",
            "20",
            "--snr-start-db",
            "-10",
            "--snr-stop-db",
            "0",
            "--snr-step-db",
            "5",
            "--out",
        ])
        .arg(dir.path())
        .env("RIS_LINKLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("fig7.csv")).unwrap();
    let rows = read_csv(&csv).unwrap();
    assert!(rows.iter().any(|r| r.metric == Metric::Ber));
    assert!(rows.iter().any(|r| r.metric == Metric::SepExact));
    let script = std::fs::read_to_string(dir.path().join("plot_fig7.py")).unwrap();
    assert!(script.contains("import matplotlib"));
}

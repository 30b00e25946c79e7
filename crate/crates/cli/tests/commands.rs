//! End-to-end tests of the CLI commands through the real binary: file
//! formats, summaries, exit codes, and the documented error contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rhythmiq::quat::geodesic_distance;
use rhythmiq::trajectory::QuatTrajectory;
use rhythmiq::UnitQuaternion64;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rhythmiq"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn rhythmiq");
    assert!(
        out.status.success(),
        "command {:?} failed: {}\n{}",
        args,
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_value(out: &Output, key: &str) -> String {
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for line in text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            if k.trim() == key {
                return v.trim().to_string();
            }
        }
    }
    panic!("key '{key}' not found in stdout:\n{text}");
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rhythmiq-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn load_csv(path: &Path) -> QuatTrajectory<f64> {
    let file = fs::File::open(path).unwrap();
    QuatTrajectory::read_csv(std::io::BufReader::new(file)).unwrap()
}

#[test]
fn generate_constant_trajectory_with_zero_amplitudes() {
    let out_csv = tmp("const.csv");
    run_ok(&[
        "generate",
        "--output",
        out_csv.to_str().unwrap(),
        "--amplitude",
        "0,0,0",
        "--center",
        "0.8,0.4,0.2,-0.4",
    ]);
    let traj = load_csv(&out_csv);
    let center = UnitQuaternion64::new(0.8, 0.4, 0.2, -0.4).unwrap();
    for q in traj.samples() {
        assert!(geodesic_distance(q, &center) < 1e-12);
    }
}

#[test]
fn generate_single_sinusoid_excursion() {
    let out_csv = tmp("single.csv");
    run_ok(&[
        "generate",
        "--output",
        out_csv.to_str().unwrap(),
        "--amplitude",
        "0.3,0,0",
    ]);
    let traj = load_csv(&out_csv);
    let id = UnitQuaternion64::identity();
    let max = traj
        .samples()
        .iter()
        .map(|q| geodesic_distance(q, &id))
        .fold(0.0, f64::max);
    assert!((max - 0.3).abs() < 1e-9, "excursion {max}");
}

#[test]
fn generate_rejects_amplitude_of_pi_or_more() {
    let out_csv = tmp("reject.csv");
    let out = bin()
        .args([
            "generate",
            "--output",
            out_csv.to_str().unwrap(),
            "--amplitude",
            "3.15,0,0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "expected usage exit code");
}

#[test]
fn train_constant_demo_reports_tiny_error() {
    let demo = tmp("train-const.csv");
    run_ok(&[
        "generate",
        "--output",
        demo.to_str().unwrap(),
        "--amplitude",
        "0,0,0",
        "--center",
        "0.6,0.2,-0.7,0.1",
    ]);
    let model = tmp("train-const.json");
    let out = run_ok(&[
        "train",
        "--input",
        demo.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--method",
        "rmp",
    ]);
    let err: f64 = stdout_value(&out, "reproduction_error_rad").parse().unwrap();
    assert!(err < 1e-9, "constant-demo reproduction error {err}");
}

#[test]
fn train_both_methods_on_the_same_demo() {
    let demo = tmp("train-demo.csv");
    run_ok(&["generate", "--output", demo.to_str().unwrap()]);
    for method in ["rmp", "qp"] {
        let model = tmp(&format!("train-{method}.json"));
        let out = run_ok(&[
            "train",
            "--input",
            demo.to_str().unwrap(),
            "--output",
            model.to_str().unwrap(),
            "--method",
            method,
        ]);
        let err: f64 = stdout_value(&out, "reproduction_error_rad").parse().unwrap();
        assert!(err < 0.02, "{method} reproduction error {err}");
        assert!(model.exists());
    }
}

#[test]
fn train_missing_input_exits_2_and_names_the_path() {
    let out = bin()
        .args([
            "train",
            "--input",
            "/nonexistent/demo.csv",
            "--output",
            tmp("never.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("/nonexistent/demo.csv"),
        "diagnostic must name the path: {err}"
    );
}

#[test]
fn unknown_flag_exits_1() {
    let out = bin().args(["generate", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let bare = bin().output().unwrap();
    assert_eq!(bare.status.code(), Some(1), "bare invocation is a usage error");
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    // file sets period=4 and dt=0.02; the flag overrides dt only
    let cfg = tmp("precedence.conf");
    fs::write(&cfg, "period = 4.0\ndt = 0.02\n").unwrap();
    let out_csv = tmp("precedence.csv");
    run_ok(&[
        "generate",
        "--output",
        out_csv.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--dt",
        "0.01",
    ]);
    let traj = load_csv(&out_csv);
    // period 4 (file) at dt 0.01 (flag) over the default 1 cycle
    assert_eq!(traj.len(), 400);
    assert!((traj.dt() - 0.01).abs() < 1e-12);
}

#[test]
fn rollout_of_constant_model_stays_at_goal() {
    let demo = tmp("roll-const.csv");
    run_ok(&[
        "generate",
        "--output",
        demo.to_str().unwrap(),
        "--amplitude",
        "0,0,0",
        "--center",
        "0.6,0.2,-0.7,0.1",
    ]);
    let model = tmp("roll-const.json");
    run_ok(&[
        "train",
        "--input",
        demo.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--method",
        "qp",
    ]);
    let roll = tmp("roll-const-out.csv");
    run_ok(&[
        "rollout",
        "--input",
        model.to_str().unwrap(),
        "--output",
        roll.to_str().unwrap(),
        "--cycles",
        "2",
    ]);
    let goal = UnitQuaternion64::new(0.6, 0.2, -0.7, 0.1).unwrap();
    let text = fs::read_to_string(&roll).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let q = UnitQuaternion64::new(f[1], f[2], f[3], f[4]).unwrap();
        assert!(geodesic_distance(&q, &goal) < 1e-9);
        assert!(f[8] < 1e-12, "norm_err {}", f[8]);
    }
}

#[test]
fn perturbed_rollout_converges_within_two_cycles() {
    let demo = tmp("roll-pert.csv");
    run_ok(&["generate", "--output", demo.to_str().unwrap()]);
    let model = tmp("roll-pert.json");
    run_ok(&[
        "train",
        "--input",
        demo.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--method",
        "rmp",
    ]);
    let roll = tmp("roll-pert-out.csv");
    run_ok(&[
        "rollout",
        "--input",
        model.to_str().unwrap(),
        "--output",
        roll.to_str().unwrap(),
        "--cycles",
        "4",
        "--dt",
        "0.001",
        "--perturb",
        "0.3",
        "--seed",
        "3",
    ]);
    // reference: the analytic curve the default generate emits (period 2)
    let gen = rhythmiq_cli::synth::GeneratorConfig::default();
    let text = fs::read_to_string(&roll).unwrap();
    let mut worst_after_two: f64 = 0.0;
    for (k, line) in text.lines().skip(1).enumerate() {
        let t = k as f64 * 1e-3;
        if t < 2.0 * gen.period {
            continue;
        }
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let q = UnitQuaternion64::new(f[1], f[2], f[3], f[4]).unwrap();
        // the rollout and the demo share the phase convention phi = omega t
        let expected = {
            let omega = std::f64::consts::TAU / gen.period;
            let z = rhythmiq::vec3::Vec3::new(
                gen.amplitudes[0] * (gen.harmonics[0] * omega * t + gen.phases[0]).sin(),
                gen.amplitudes[1] * (gen.harmonics[1] * omega * t + gen.phases[1]).sin(),
                gen.amplitudes[2] * (gen.harmonics[2] * omega * t + gen.phases[2]).sin(),
            );
            rhythmiq::quat::exp_map(z, &gen.center).unwrap()
        };
        worst_after_two = worst_after_two.max(geodesic_distance(&q, &expected));
    }
    assert!(
        worst_after_two < 0.02,
        "error after 2 cycles {worst_after_two}"
    );
}

#[test]
fn hundred_cycle_rollout_keeps_the_norm() {
    let demo = tmp("roll-norm.csv");
    run_ok(&["generate", "--output", demo.to_str().unwrap()]);
    let model = tmp("roll-norm.json");
    run_ok(&[
        "train",
        "--input",
        demo.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--method",
        "qp",
    ]);
    let roll = tmp("roll-norm-out.csv");
    run_ok(&[
        "rollout",
        "--input",
        model.to_str().unwrap(),
        "--output",
        roll.to_str().unwrap(),
        "--cycles",
        "100",
        "--dt",
        "0.001",
    ]);
    let text = fs::read_to_string(&roll).unwrap();
    let max_norm_err = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max_norm_err < 1e-9, "norm_err {max_norm_err}");
}

fn write_signal(path: &Path, f: impl Fn(f64) -> f64, dt: f64, n: usize) {
    let mut text = String::from("t,u\n");
    for k in 0..n {
        let t = k as f64 * dt;
        text.push_str(&format!("{:.16e},{:.16e}\n", t, f(t)));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn oscillate_zero_error_input_keeps_omega_constant() {
    let signal = tmp("osc-zero.csv");
    write_signal(&signal, |_| 0.0, 1e-3, 2000);
    let out_csv = tmp("osc-zero-out.csv");
    run_ok(&[
        "oscillate",
        "--input",
        signal.to_str().unwrap(),
        "--output",
        out_csv.to_str().unwrap(),
        "--omega",
        "5.0",
    ]);
    let text = fs::read_to_string(&out_csv).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(f[2], 5.0, "Omega drifted with zero error");
    }
}

#[test]
fn oscillate_converges_to_one_hertz() {
    let signal = tmp("osc-1hz.csv");
    write_signal(&signal, |t| (std::f64::consts::TAU * t).sin(), 1e-3, 20_000);
    let out_csv = tmp("osc-1hz-out.csv");
    let out = run_ok(&[
        "oscillate",
        "--input",
        signal.to_str().unwrap(),
        "--output",
        out_csv.to_str().unwrap(),
        "--omega",
        "4.0",
    ]);
    let omega_final: f64 = stdout_value(&out, "omega_final").parse().unwrap();
    let rel = (omega_final - std::f64::consts::TAU).abs() / std::f64::consts::TAU;
    assert!(rel < 0.01, "frequency error {rel}");
}

#[test]
fn coupled_oscillate_tracks_the_demo() {
    // 1 Hz demo, trained model, oscillator-driven rollout
    let demo = tmp("osc-demo.csv");
    run_ok(&[
        "generate",
        "--output",
        demo.to_str().unwrap(),
        "--period",
        "1.0",
        "--dt",
        "0.005",
    ]);
    let model = tmp("osc-model.json");
    run_ok(&[
        "train",
        "--input",
        demo.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--method",
        "rmp",
    ]);
    let signal = tmp("osc-signal.csv");
    write_signal(&signal, |t| (std::f64::consts::TAU * t).sin(), 1e-3, 30_000);
    let out_csv = tmp("osc-coupled.csv");
    run_ok(&[
        "oscillate",
        "--input",
        signal.to_str().unwrap(),
        "--output",
        out_csv.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--omega",
        "4.0",
    ]);
    // last second of output vs the analytic demo cycle, aligned over shifts
    let gen = rhythmiq_cli::synth::GeneratorConfig {
        period: 1.0,
        dt: 0.005,
        ..Default::default()
    };
    let omega = std::f64::consts::TAU / gen.period;
    let analytic: Vec<UnitQuaternion64> = (0..1000)
        .map(|k| {
            let t = k as f64 * 1e-3;
            let z = rhythmiq::vec3::Vec3::new(
                gen.amplitudes[0] * (gen.harmonics[0] * omega * t + gen.phases[0]).sin(),
                gen.amplitudes[1] * (gen.harmonics[1] * omega * t + gen.phases[1]).sin(),
                gen.amplitudes[2] * (gen.harmonics[2] * omega * t + gen.phases[2]).sin(),
            );
            rhythmiq::quat::exp_map(z, &gen.center).unwrap()
        })
        .collect();
    let text = fs::read_to_string(&out_csv).unwrap();
    let rows: Vec<UnitQuaternion64> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            UnitQuaternion64::new(f[5], f[6], f[7], f[8]).unwrap()
        })
        .collect();
    let last = &rows[rows.len() - 1000..];
    let mut best = f64::INFINITY;
    for shift in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in (0..1000).step_by(7) {
            worst = worst.max(geodesic_distance(&last[k], &analytic[(k + shift) % 1000]));
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    }
    assert!(best < 0.05, "coupled tracking error {best}");
}

//! The four subcommands: generate, train, rollout, oscillate.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhythmiq::euclid_pdmp::{FitMethod, PdmpConfig};
use rhythmiq::model_io::{self, Model};
use rhythmiq::oscillator::{AdaptiveOscillator, OscillatorConfig};
use rhythmiq::qp_dmp::{QpDmpModel, QpGoal, QpTrainConfig};
use rhythmiq::quat::{exp_map, geodesic_distance, log_map};
use rhythmiq::rmp_dmp::{RmpDmpModel, RmpGoal, RmpTrainConfig};
use rhythmiq::trajectory::{angular_velocity, phase_grid, project_to_tangent, DiffScheme, QuatTrajectory};
use rhythmiq::vec3::Vec3;
use rhythmiq::UnitQuaternion64;

use crate::config::{parse_quat, parse_triple, resolve, resolve_opt, FileConfig};
use crate::error::{CliError, CliResult};
use crate::synth::{generate, GeneratorConfig};

#[derive(Parser)]
#[command(
    name = "rhythmiq",
    version,
    about = "Periodic orientation DMPs: synthetic demos, training, rollout, oscillator coupling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write a synthetic periodic orientation demonstration as CSV
    Generate(GenerateArgs),
    /// Train a model (rmp or qp) from a demonstration CSV
    Train(TrainArgs),
    /// Roll out a trained model to CSV
    Rollout(RolloutArgs),
    /// Run the adaptive frequency oscillator on a scalar signal CSV,
    /// optionally driving a trained model with its phase and frequency
    Oscillate(OscillateArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Train(args) => cmd_train(args),
        Command::Rollout(args) => cmd_rollout(args),
        Command::Oscillate(args) => cmd_oscillate(args),
    }
}

fn open_input(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))
}

fn create_output(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))
}

fn load_file_config(path: &Option<PathBuf>) -> CliResult<FileConfig> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::empty()),
    }
}

fn required<T>(value: Option<T>, what: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing required parameter: {what}")))
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

// ---------------------------------------------------------------- generate

#[derive(Args)]
pub struct GenerateArgs {
    /// Output CSV path (header t,qw,qx,qy,qz)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Sampling step in seconds
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of cycles to emit
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Cycle period in seconds
    #[arg(long)]
    pub period: Option<f64>,
    /// Per-axis sinusoid amplitudes in rad, e.g. 0.3,0.2,0.15
    #[arg(long)]
    pub amplitude: Option<String>,
    /// Per-axis integer harmonics of the base frequency, e.g. 1,1,2
    #[arg(long)]
    pub harmonics: Option<String>,
    /// Per-axis phase offsets in rad
    #[arg(long)]
    pub phases: Option<String>,
    /// Center orientation as w,x,y,z
    #[arg(long)]
    pub center: Option<String>,
    /// Tangent-space noise standard deviation in rad
    #[arg(long)]
    pub noise: Option<f64>,
    /// RNG seed for the noise
    #[arg(long)]
    pub seed: Option<u64>,
    /// Config file with key = value lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    let file = load_file_config(&args.config)?;
    let defaults = GeneratorConfig::default();
    let output = required(
        resolve_opt(args.output, &file, "output")?,
        "--output",
    )?;
    let amplitude_text = resolve(
        args.amplitude,
        &file,
        "amplitude",
        "0.3,0.2,0.15".to_string(),
    )?;
    let harmonics_text = resolve(args.harmonics, &file, "harmonics", "1,1,2".to_string())?;
    let phases_text = resolve(
        args.phases,
        &file,
        "phases",
        format!("0,{},0", std::f64::consts::FRAC_PI_2),
    )?;
    let center = match resolve_opt(args.center, &file, "center")? {
        Some(text) => parse_quat(&text)?,
        None => UnitQuaternion64::identity(),
    };
    let config = GeneratorConfig {
        period: resolve(args.period, &file, "period", defaults.period)?,
        dt: resolve(args.dt, &file, "dt", defaults.dt)?,
        cycles: resolve(args.cycles, &file, "cycles", defaults.cycles)?,
        amplitudes: parse_triple(&amplitude_text, "--amplitude")?,
        harmonics: parse_triple(&harmonics_text, "--harmonics")?,
        phases: parse_triple(&phases_text, "--phases")?,
        center,
        noise: resolve(args.noise, &file, "noise", defaults.noise)?,
        seed: resolve(args.seed, &file, "seed", defaults.seed)?,
    };
    let traj = generate(&config)?;
    let mut out = create_output(&output)?;
    traj.write_csv(&mut out).map_err(CliError::from)?;
    out.flush()
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
    println!("samples = {}", traj.len());
    println!("period = {}", config.period);
    println!("output = {}", output.display());
    Ok(())
}

// ------------------------------------------------------------------- train

#[derive(Args)]
pub struct TrainArgs {
    /// Demonstration CSV (header t,qw,qx,qy,qz)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output model file (JSON)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Formulation: rmp or qp
    #[arg(long)]
    pub method: Option<String>,
    /// Number of cycles contained in the demonstration
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Number of kernels N
    #[arg(long)]
    pub kernels: Option<usize>,
    /// Kernel width h (default 1.5 N)
    #[arg(long)]
    pub width: Option<f64>,
    /// Gain alpha_z
    #[arg(long = "alpha-z")]
    pub alpha_z: Option<f64>,
    /// Fitting procedure: batch or rls
    #[arg(long)]
    pub fit: Option<String>,
    /// RLS forgetting factor
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RLS passes over the demonstration
    #[arg(long)]
    pub passes: Option<usize>,
    /// Cycle frequency in rad/s (default: cycles * 2 pi / duration)
    #[arg(long)]
    pub omega: Option<f64>,
    /// Attractor: mean, identity or zero
    #[arg(long)]
    pub goal: Option<String>,
    /// Amplitude diagonal A_r for the qp method, e.g. 1,1,1
    #[arg(long)]
    pub amplitude: Option<String>,
    /// Config file with key = value lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn cmd_train(args: TrainArgs) -> CliResult<()> {
    let file = load_file_config(&args.config)?;
    let input = required(resolve_opt(args.input, &file, "input")?, "--input")?;
    let output = required(resolve_opt(args.output, &file, "output")?, "--output")?;
    let method = resolve(args.method, &file, "method", "rmp".to_string())?;
    let cycles = resolve(args.cycles, &file, "cycles", 1usize)?;
    if cycles == 0 {
        return Err(CliError::Usage("cycles must be at least 1".into()));
    }
    let kernels = resolve(args.kernels, &file, "kernels", 25usize)?;
    let width = resolve_opt(args.width, &file, "width")?;
    let alpha_z = resolve(args.alpha_z, &file, "alpha-z", 48.0)?;
    let fit_name = resolve(args.fit, &file, "fit", "batch".to_string())?;
    let lambda = resolve(args.lambda, &file, "lambda", 0.994)?;
    let passes = resolve(args.passes, &file, "passes", 5usize)?;
    let omega_flag = resolve_opt(args.omega, &file, "omega")?;
    let goal = resolve(args.goal, &file, "goal", "mean".to_string())?;
    let amplitude = resolve_opt(args.amplitude, &file, "amplitude")?;

    let demo = QuatTrajectory::read_csv(open_input(&input)?).map_err(|e| {
        CliError::Input(format!("{}: {e}", input.display()))
    })?;
    let omega = match omega_flag {
        Some(om) if om > 0.0 => om,
        Some(_) => return Err(CliError::Usage("omega must be positive".into())),
        None => std::f64::consts::TAU * cycles as f64 / demo.period(),
    };
    let fit = match fit_name.as_str() {
        "batch" => FitMethod::Batch,
        "rls" => FitMethod::Rls { lambda, passes },
        other => {
            return Err(CliError::Usage(format!(
                "unknown fit '{other}' (expected batch or rls)"
            )))
        }
    };
    let pdmp = PdmpConfig {
        n_kernels: kernels,
        width,
        alpha_z,
        ..PdmpConfig::default()
    };

    let model = match method.as_str() {
        "rmp" => {
            if amplitude.is_some() {
                return Err(CliError::Usage(
                    "--amplitude (A_r) applies to the qp method".into(),
                ));
            }
            let goal = match goal.as_str() {
                "mean" => RmpGoal::MeanZeta,
                "zero" => RmpGoal::Zero,
                "identity" => RmpGoal::Orientation(UnitQuaternion64::identity()),
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown goal '{other}' (expected mean, identity or zero)"
                    )))
                }
            };
            let cfg = RmpTrainConfig {
                pdmp,
                omega: Some(omega),
                fit,
                goal,
                ..RmpTrainConfig::default()
            };
            Model::Rmp(RmpDmpModel::train(&demo, &cfg)?)
        }
        "qp" => {
            let goal = match goal.as_str() {
                "mean" => QpGoal::DemoMean,
                "identity" => QpGoal::Identity,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown goal '{other}' for qp (expected mean or identity)"
                    )))
                }
            };
            let a_r = match amplitude {
                Some(text) => parse_triple(&text, "--amplitude")?,
                None => [1.0; 3],
            };
            for a in a_r {
                if !(a > 0.0) {
                    return Err(CliError::Usage(
                        "amplitude diagonal entries must be positive".into(),
                    ));
                }
            }
            let cfg = QpTrainConfig {
                pdmp,
                omega: Some(omega),
                amplitude: a_r,
                fit,
                goal,
                ..QpTrainConfig::default()
            };
            Model::Qp(QpDmpModel::train(&demo, &cfg)?)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown method '{other}' (expected rmp or qp)"
            )))
        }
    };

    let reproduction = reproduction_error(&model, &demo, cycles)?;
    let coverage = kernel_coverage_min(&model, &demo, omega);
    model_io::save(&model, create_output(&output)?)?;

    println!("method = {method}");
    println!("samples = {}", demo.len());
    println!("cycles = {cycles}");
    println!("kernels = {kernels}");
    println!(
        "width = {}",
        width.unwrap_or_else(|| rhythmiq::euclid_pdmp::default_width::<f64>(kernels))
    );
    println!("alpha_z = {alpha_z}");
    println!("omega = {omega}");
    println!("goal = {goal}");
    println!("fit = {fit_name}");
    println!("kernel_coverage_min = {coverage}");
    println!("reproduction_error_rad = {reproduction:e}");
    println!("output = {}", output.display());
    Ok(())
}

fn kernel_coverage_min(model: &Model<f64>, demo: &QuatTrajectory<f64>, omega: f64) -> f64 {
    let kernels = match model {
        Model::Rmp(m) => m.inner().kernels(),
        Model::Qp(m) => m.kernels(),
    };
    let mut totals = vec![0.0f64; kernels.len()];
    for phi in phase_grid(demo, omega) {
        for (i, a) in kernels.eval(phi).into_iter().enumerate() {
            totals[i] += a;
        }
    }
    totals.into_iter().fold(f64::INFINITY, f64::min)
}

/// Phase-aligned max geodesic distance between the last rollout cycle and
/// the first demonstrated cycle, at the demonstration's own sampling rate.
fn reproduction_error(
    model: &Model<f64>,
    demo: &QuatTrajectory<f64>,
    cycles: usize,
) -> CliResult<f64> {
    let per_cycle = demo.len() / cycles;
    if per_cycle < 3 {
        return Err(CliError::Input(
            "demonstration too short for its cycle count".into(),
        ));
    }
    let dt = demo.dt();
    let total = 4 * per_cycle;
    let mut outputs = Vec::with_capacity(per_cycle);
    match model {
        Model::Rmp(m) => {
            let tangent = project_to_tangent(demo, m.center(), DiffScheme::Periodic)?;
            let mut state = m.initial_state(&demo.samples()[0], tangent.dzeta[0], 0.0)?;
            for k in 0..total {
                let (next, q) = m.step(&state, dt)?;
                state = next;
                if k >= total - per_cycle {
                    outputs.push(q);
                }
            }
        }
        Model::Qp(m) => {
            let rates = angular_velocity(demo, DiffScheme::Periodic)?;
            let mut state = m.initial_state(&demo.samples()[0], rates.omega[0], 0.0);
            for k in 0..total {
                state = m.step(&state, dt)?;
                if k >= total - per_cycle {
                    outputs.push(state.q);
                }
            }
        }
    }
    let reference = &demo.samples()[..per_cycle];
    let n = per_cycle;
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            worst = worst.max(geodesic_distance(&outputs[k], &reference[(k + shift) % n]));
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    }
    Ok(best)
}

// ----------------------------------------------------------------- rollout

#[derive(Args)]
pub struct RolloutArgs {
    /// Trained model file (JSON)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output CSV (header t,qw,qx,qy,qz,wx,wy,wz,norm_err)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Integration step in seconds
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of cycles to roll out
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Perturb the initial orientation by this many rad off the attractor
    #[arg(long)]
    pub perturb: Option<f64>,
    /// RNG seed for the perturbation direction
    #[arg(long)]
    pub seed: Option<u64>,
    /// Config file with key = value lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn cmd_rollout(args: RolloutArgs) -> CliResult<()> {
    let file = load_file_config(&args.config)?;
    let input = required(resolve_opt(args.input, &file, "input")?, "--input")?;
    let output = required(resolve_opt(args.output, &file, "output")?, "--output")?;
    let dt = resolve(args.dt, &file, "dt", 1e-3)?;
    let cycles = resolve(args.cycles, &file, "cycles", 10usize)?;
    let perturb = resolve(args.perturb, &file, "perturb", 0.0)?;
    let seed = resolve(args.seed, &file, "seed", 0u64)?;
    if !(dt > 0.0) {
        return Err(CliError::Usage("dt must be positive".into()));
    }
    if cycles == 0 {
        return Err(CliError::Usage("cycles must be at least 1".into()));
    }

    let model: Model<f64> = model_io::load(open_input(&input)?)?;
    let omega = match &model {
        Model::Rmp(m) => m.omega(),
        Model::Qp(m) => m.phase_omega(),
    };
    let per_cycle = (std::f64::consts::TAU / omega / dt).round().max(1.0) as usize;
    let steps = cycles * per_cycle;

    let offset = if perturb > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() > 1e-3 {
                break v.scale(perturb / v.norm());
            }
        }
    } else {
        Vec3::zero()
    };

    // collect the orientation track, then derive body rates from pairs
    let mut track: Vec<UnitQuaternion64> = Vec::with_capacity(steps + 1);
    match &model {
        Model::Rmp(m) => {
            let rest_orientation = m.output(&m.rest_state())?;
            let q0 = exp_map(offset, &rest_orientation)?;
            let mut state = m.initial_state(&q0, Vec3::zero(), 0.0)?;
            track.push(q0);
            for _ in 0..steps {
                let (next, q) = m.step(&state, dt)?;
                state = next;
                track.push(q);
            }
        }
        Model::Qp(m) => {
            let q0 = exp_map(offset, m.goal())?;
            let mut state = m.initial_state(&q0, Vec3::zero(), 0.0);
            track.push(q0);
            for _ in 0..steps {
                state = m.step(&state, dt)?;
                track.push(state.q);
            }
        }
    }

    let mut out = create_output(&output)?;
    writeln!(out, "t,qw,qx,qy,qz,wx,wy,wz,norm_err")
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
    let mut prev_rate = Vec3::zero();
    for k in 0..steps {
        let q = &track[k];
        let rate = match log_map(&track[k + 1], q) {
            Ok(step_vec) => step_vec.scale(2.0 / dt),
            Err(_) => prev_rate,
        };
        prev_rate = rate;
        let (w, x, y, z) = (*q).into_components();
        let norm_err = (q.norm() - 1.0).abs();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt(k as f64 * dt),
            fmt(w),
            fmt(x),
            fmt(y),
            fmt(z),
            fmt(rate.x),
            fmt(rate.y),
            fmt(rate.z),
            fmt(norm_err),
        )
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
    }
    out.flush()
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
    println!("steps = {steps}");
    println!("dt = {dt}");
    println!("omega = {omega}");
    println!("output = {}", output.display());
    Ok(())
}

// --------------------------------------------------------------- oscillate

#[derive(Args)]
pub struct OscillateArgs {
    /// Scalar signal CSV (header t,u)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output CSV (t,phi,Omega,u,u_hat and, with a model, qw,qx,qy,qz)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Optional trained model driven by the oscillator phase/frequency
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Coupling constant K
    #[arg(long = "oscillator-K")]
    pub oscillator_k: Option<f64>,
    /// Fourier series size M
    #[arg(long = "oscillator-M")]
    pub oscillator_m: Option<usize>,
    /// Learning rate eta
    #[arg(long = "oscillator-eta")]
    pub oscillator_eta: Option<f64>,
    /// Initial frequency guess in rad/s
    #[arg(long)]
    pub omega: Option<f64>,
    /// Config file with key = value lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn read_signal(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let reader = open_input(path)?;
    let mut ts = Vec::new();
    let mut us = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if !saw_header {
            let cols: Vec<&str> = text.split(',').map(str::trim).collect();
            if cols != ["t", "u"] {
                return Err(CliError::Input(format!(
                    "{}:{line_no}: expected header 't,u', found '{text}'",
                    path.display()
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::Input(format!(
                "{}:{line_no}: expected 2 columns, found {}",
                path.display(),
                fields.len()
            )));
        }
        let t: f64 = fields[0].parse().map_err(|_| {
            CliError::Input(format!("{}:{line_no}: bad number '{}'", path.display(), fields[0]))
        })?;
        let u: f64 = fields[1].parse().map_err(|_| {
            CliError::Input(format!("{}:{line_no}: bad number '{}'", path.display(), fields[1]))
        })?;
        ts.push(t);
        us.push(u);
    }
    if ts.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: need at least 2 signal samples",
            path.display()
        )));
    }
    for w in ts.windows(2) {
        if w[1] <= w[0] {
            return Err(CliError::Input(format!(
                "{}: timestamps must be strictly increasing",
                path.display()
            )));
        }
    }
    Ok((ts, us))
}

fn cmd_oscillate(args: OscillateArgs) -> CliResult<()> {
    let file = load_file_config(&args.config)?;
    let input = required(resolve_opt(args.input, &file, "input")?, "--input")?;
    let output = required(resolve_opt(args.output, &file, "output")?, "--output")?;
    let model_path = resolve_opt(args.model, &file, "model")?;
    let coupling = resolve(args.oscillator_k, &file, "oscillator-K", 10.0)?;
    let harmonics = resolve(args.oscillator_m, &file, "oscillator-M", 10usize)?;
    let learning_rate = resolve(args.oscillator_eta, &file, "oscillator-eta", 2.0)?;
    let omega_init = resolve(args.omega, &file, "omega", std::f64::consts::TAU)?;

    let (ts, us) = read_signal(&input)?;
    let model: Option<Model<f64>> = match model_path {
        Some(p) => Some(model_io::load(open_input(&p)?)?),
        None => None,
    };
    let mut osc = AdaptiveOscillator::new(&OscillatorConfig {
        coupling,
        harmonics,
        learning_rate,
        omega_init,
        ..OscillatorConfig::default()
    })
    .map_err(CliError::from)?;

    enum Coupled {
        Rmp(RmpDmpModel<f64>, rhythmiq::euclid_pdmp::DmpState<f64>),
        Qp(QpDmpModel<f64>, rhythmiq::qp_dmp::QpDmpState<f64>),
    }
    let mut coupled = match &model {
        Some(Model::Rmp(m)) => Some(Coupled::Rmp(m.clone(), m.rest_state())),
        Some(Model::Qp(m)) => Some(Coupled::Qp(m.clone(), m.rest_state())),
        None => None,
    };

    let mut out = create_output(&output)?;
    let header = if coupled.is_some() {
        "t,phi,Omega,u,u_hat,qw,qx,qy,qz"
    } else {
        "t,phi,Omega,u,u_hat"
    };
    writeln!(out, "{header}")
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;

    for k in 0..ts.len() {
        let dt = if k + 1 < ts.len() {
            ts[k + 1] - ts[k]
        } else {
            ts[k] - ts[k - 1]
        };
        let phi = osc.phase();
        let omega = osc.frequency();
        let u_hat = osc.estimate_signal();
        let mut row = format!(
            "{},{},{},{},{}",
            fmt(ts[k]),
            fmt(phi),
            fmt(omega),
            fmt(us[k]),
            fmt(u_hat)
        );
        if let Some(state) = &mut coupled {
            let q = match state {
                Coupled::Rmp(m, s) => {
                    let (next, q) = m.step_coupled(s, dt, phi, omega)?;
                    *s = next;
                    q
                }
                Coupled::Qp(m, s) => {
                    let next = m.step_coupled(s, dt, phi, omega)?;
                    let q = next.q;
                    *s = next;
                    q
                }
            };
            let (w, x, y, z) = q.into_components();
            row = format!("{row},{},{},{},{}", fmt(w), fmt(x), fmt(y), fmt(z));
        }
        writeln!(out, "{row}")
            .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
        osc.step(us[k], dt).map_err(CliError::from)?;
    }
    out.flush()
        .map_err(|e| CliError::Input(format!("write {}: {e}", output.display())))?;
    println!("samples = {}", ts.len());
    println!("omega_final = {}", osc.frequency());
    println!("output = {}", output.display());
    Ok(())
}

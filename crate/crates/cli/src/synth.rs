//! Synthetic periodic orientation demonstrations: per-axis sinusoids in a
//! tangent space, mapped through the exponential map, with optional seeded
//! Gaussian noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhythmiq::quat::exp_map;
use rhythmiq::trajectory::QuatTrajectory;
use rhythmiq::vec3::Vec3;
use rhythmiq::UnitQuaternion64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub period: f64,
    pub dt: f64,
    pub cycles: usize,
    /// Per-axis sinusoid amplitude (rad, tangent scale).
    pub amplitudes: [f64; 3],
    /// Per-axis integer harmonic of the base frequency.
    pub harmonics: [f64; 3],
    /// Per-axis phase offset (rad).
    pub phases: [f64; 3],
    pub center: UnitQuaternion64,
    /// Standard deviation of tangent-space noise (rad).
    pub noise: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            period: 2.0,
            dt: 0.01,
            cycles: 1,
            amplitudes: [0.3, 0.2, 0.15],
            harmonics: [1.0, 1.0, 2.0],
            phases: [0.0, std::f64::consts::FRAC_PI_2, 0.0],
            center: UnitQuaternion64::identity(),
            noise: 0.0,
            seed: 0,
        }
    }
}

pub fn generate(config: &GeneratorConfig) -> CliResult<QuatTrajectory<f64>> {
    if !(config.period > 0.0) || !(config.dt > 0.0) {
        return Err(CliError::Usage("period and dt must be positive".into()));
    }
    if config.cycles == 0 {
        return Err(CliError::Usage("cycles must be at least 1".into()));
    }
    let reach: f64 = config
        .amplitudes
        .iter()
        .map(|a| a * a)
        .sum::<f64>()
        .sqrt();
    if reach >= std::f64::consts::PI {
        return Err(CliError::Usage(format!(
            "amplitudes reach {reach:.3} rad; the tangent curve must stay below pi"
        )));
    }
    if config.noise < 0.0 {
        return Err(CliError::Usage("noise must be non-negative".into()));
    }

    let per_cycle = (config.period / config.dt).round() as usize;
    if per_cycle < 3 {
        return Err(CliError::Usage(
            "dt too coarse: fewer than 3 samples per cycle".into(),
        ));
    }
    let n = per_cycle * config.cycles;
    let omega = std::f64::consts::TAU / config.period;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut timestamps = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 * config.dt;
        let mut z = Vec3::new(
            config.amplitudes[0] * (config.harmonics[0] * omega * t + config.phases[0]).sin(),
            config.amplitudes[1] * (config.harmonics[1] * omega * t + config.phases[1]).sin(),
            config.amplitudes[2] * (config.harmonics[2] * omega * t + config.phases[2]).sin(),
        );
        if config.noise > 0.0 {
            z += Vec3::new(
                config.noise * gaussian(&mut rng),
                config.noise * gaussian(&mut rng),
                config.noise * gaussian(&mut rng),
            );
        }
        let q = exp_map(z, &config.center).map_err(|e| CliError::Numeric(e.to_string()))?;
        timestamps.push(t);
        samples.push(q);
    }
    QuatTrajectory::new(timestamps, samples).map_err(CliError::from)
}

/// Box-Muller standard normal.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

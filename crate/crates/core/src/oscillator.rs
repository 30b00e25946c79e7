//! Adaptive frequency oscillator with a Fourier-series signal estimator.
//!
//! Extracts phase and frequency from a scalar periodic input online:
//!
//! ```text
//! φ̇ = Ω − K·e·sin(φ)        Ω̇ = −K·e·sin(φ)
//! α̇_c = η cos(cφ)·e          β̇_c = η sin(cφ)·e
//! ```
//!
//! with `e = U − Û` and `Û = Σ_{c=0}^{M} (α_c cos(cφ) + β_c sin(cφ))`.
//!
//! Phase and frequency updates share the same coupling term, so per step
//! `ΔΩ = Δφ − Ω·dt` holds exactly.

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Tuning of the oscillator. Defaults are `K = 10`, `M = 10`, `η = 2`.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorConfig<T> {
    /// Coupling constant K (> 0).
    pub coupling: T,
    /// Fourier series size M.
    pub harmonics: usize,
    /// Learning rate η (> 0).
    pub learning_rate: T,
    /// Initial frequency guess in rad/s. Convergence is only assured for
    /// guesses within roughly a factor of two of the true frequency.
    pub omega_init: T,
    pub phi_init: T,
    /// Lower clamp keeping Ω positive on degenerate inputs.
    pub omega_floor: T,
}

impl<T: Real> Default for OscillatorConfig<T> {
    fn default() -> Self {
        Self {
            coupling: T::of(10.0),
            harmonics: 10,
            learning_rate: T::of(2.0),
            omega_init: T::TAU(),
            phi_init: T::zero(),
            omega_floor: T::of(1e-6),
        }
    }
}

/// Oscillator state: phase, frequency and Fourier coefficients, advanced by
/// explicit Euler steps at the control rate. Single-owner by design; the
/// filter is inherently sequential.
#[derive(Debug, Clone)]
pub struct AdaptiveOscillator<T> {
    /// Unwrapped phase (rad).
    phi: T,
    /// Frequency estimate (rad/s).
    omega: T,
    /// Cosine coefficients α_0..α_M.
    alpha: Vec<T>,
    /// Sine coefficients β_0..β_M.
    beta: Vec<T>,
    coupling: T,
    learning_rate: T,
    omega_floor: T,
}

impl<T: Real> AdaptiveOscillator<T> {
    pub fn new(config: &OscillatorConfig<T>) -> Result<Self> {
        if !(config.coupling > T::zero()) {
            return Err(Error::DegenerateInput("coupling K must be positive".into()));
        }
        if !(config.learning_rate > T::zero()) {
            return Err(Error::DegenerateInput(
                "learning rate eta must be positive".into(),
            ));
        }
        if !(config.omega_init > T::zero()) {
            return Err(Error::DegenerateInput(
                "initial frequency must be positive".into(),
            ));
        }
        Ok(Self {
            phi: config.phi_init,
            omega: config.omega_init,
            alpha: vec![T::zero(); config.harmonics + 1],
            beta: vec![T::zero(); config.harmonics + 1],
            coupling: config.coupling,
            learning_rate: config.learning_rate,
            omega_floor: config.omega_floor,
        })
    }

    /// Fourier synthesis `Û` at the current phase.
    pub fn estimate_signal(&self) -> T {
        let mut acc = T::zero();
        for (c, (a, b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            let cphi = T::of_usize(c) * self.phi;
            acc += *a * cphi.cos() + *b * cphi.sin();
        }
        acc
    }

    /// One Euler step driven by the input sample `u`. All four ODE groups
    /// use the error `e = u − Û` computed from the pre-step state. Returns
    /// `e`.
    pub fn step(&mut self, u: T, dt: T) -> Result<T> {
        if !(dt > T::zero()) {
            return Err(Error::DegenerateInput("dt must be positive".into()));
        }
        let e = u - self.estimate_signal();
        let coupling_term = self.coupling * e * self.phi.sin();
        let phi_dot = self.omega - coupling_term;
        let omega_dot = -coupling_term;
        for (c, (a, b)) in self.alpha.iter_mut().zip(self.beta.iter_mut()).enumerate() {
            let cphi = T::of_usize(c) * self.phi;
            *a += dt * self.learning_rate * cphi.cos() * e;
            *b += dt * self.learning_rate * cphi.sin() * e;
        }
        self.phi += dt * phi_dot;
        self.omega = (self.omega + dt * omega_dot).max(self.omega_floor);
        Ok(e)
    }

    /// Phase wrapped to `[0, 2π)`.
    pub fn phase(&self) -> T {
        wrap_angle(self.phi)
    }

    /// Phase without wrapping (accumulates over cycles).
    pub fn phase_unwrapped(&self) -> T {
        self.phi
    }

    /// Current frequency estimate (rad/s).
    pub fn frequency(&self) -> T {
        self.omega
    }

    pub fn cosine_coefficients(&self) -> &[T] {
        &self.alpha
    }

    pub fn sine_coefficients(&self) -> &[T] {
        &self.beta
    }
}

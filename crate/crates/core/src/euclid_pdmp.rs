//! Classical periodic DMP for D independent real-valued degrees of freedom:
//! canonical phase system, periodic kernels, forcing term, batch and
//! recursive weight learning, and rollout integration.
//!
//! The transformation system per DoF is
//!
//! ```text
//! ż = Ω(α_z(β_z(g − y) − z) + f(φ)),   ẏ = Ω z,   φ̇ = Ω
//! ```
//!
//! with the 2π-periodic forcing `f(φ) = r · Σ Ψ_i w_i / Σ Ψ_i` over von
//! Mises kernels `Ψ_i(φ) = exp(h(cos(φ − c_i) − 1))`.
//!
//! Weights are estimated by weighted least squares on the normalized kernel
//! basis with a ridge prior of precision `1/P0`; the recursive trainer is
//! the exact streaming counterpart (matrix RLS with forgetting), so a batch
//! fit and a λ=1 RLS pass over the same data produce identical weights up
//! to rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Uniformly spaced periodic kernels on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseKernels<T> {
    centers: Vec<T>,
    width: T,
}

impl<T: Real> PhaseKernels<T> {
    /// `n` kernels at `c_i = 2π(i−1)/n` with common width `h`.
    pub fn new(n: usize, width: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegenerateInput(
                "at least 2 kernels are required".into(),
            ));
        }
        if !(width > T::zero()) {
            return Err(Error::DegenerateInput("kernel width must be positive".into()));
        }
        let centers = (0..n)
            .map(|i| T::TAU() * T::of_usize(i) / T::of_usize(n))
            .collect();
        Ok(Self { centers, width })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn width(&self) -> T {
        self.width
    }

    /// Raw activations `Ψ_i(φ) = exp(h(cos(φ − c_i) − 1))`, each in `(0, 1]`
    /// with the maximum 1 exactly at `φ = c_i`.
    pub fn eval(&self, phi: T) -> Vec<T> {
        self.centers
            .iter()
            .map(|c| (self.width * ((phi - *c).cos() - T::one())).exp())
            .collect()
    }

    /// Activations normalized to sum 1 (the regression basis).
    pub fn normalized(&self, phi: T) -> Vec<T> {
        let mut x = self.eval(phi);
        let sum: T = x.iter().copied().sum();
        for v in &mut x {
            *v /= sum;
        }
        x
    }
}

/// Default kernel width for `n` kernels.
pub fn default_width<T: Real>(n: usize) -> T {
    T::of(1.5) * T::of_usize(n)
}

/// Explicit integration scheme for [`PeriodicDmpModel::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    #[default]
    Euler,
    Rk4,
}

/// Hyperparameters for building and fitting a periodic DMP.
#[derive(Debug, Clone)]
pub struct PdmpConfig<T> {
    /// Number of kernels N.
    pub n_kernels: usize,
    /// Kernel width h; `None` picks [`default_width`].
    pub width: Option<T>,
    pub alpha_z: T,
    /// `None` picks critical damping `alpha_z / 4`.
    pub beta_z: Option<T>,
    /// RLS prior variance P0 per kernel; the batch ridge is `1/P0`.
    pub prior_variance: T,
    /// Minimum total raw activation a kernel must receive during fitting.
    pub coverage_tol: T,
    pub integrator: Integrator,
    /// Stability guard: a step is rejected when `dt·Ω` exceeds this.
    pub step_guard: T,
}

impl<T: Real> Default for PdmpConfig<T> {
    fn default() -> Self {
        Self {
            n_kernels: 25,
            width: None,
            alpha_z: T::of(48.0),
            beta_z: None,
            prior_variance: T::of(1e3),
            coverage_tol: T::of(1e-6),
            integrator: Integrator::Euler,
            step_guard: T::of(0.1),
        }
    }
}

impl<T: Real> PdmpConfig<T> {
    pub fn width_for(&self, n: usize) -> T {
        self.width.unwrap_or_else(|| default_width::<T>(n))
    }

    pub fn beta_z_value(&self) -> T {
        self.beta_z.unwrap_or(self.alpha_z / T::of(4.0))
    }
}

/// Everything besides the sample data that a fit needs.
#[derive(Debug, Clone)]
pub struct ModelSpec<T> {
    pub config: PdmpConfig<T>,
    /// Frequency Ω = 1/τ in rad/s.
    pub omega: T,
    /// Attractor per DoF.
    pub goal: Vec<T>,
    /// Amplitude modulation r per DoF; `None` means all ones.
    pub amplitude: Option<Vec<T>>,
}

impl<T: Real> ModelSpec<T> {
    fn amplitude_for(&self, dims: usize) -> Vec<T> {
        self.amplitude
            .clone()
            .unwrap_or_else(|| vec![T::one(); dims])
    }
}

/// A trained periodic DMP: forcing weights plus hyperparameters. Immutable
/// after fitting; may be shared read-only across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicDmpModel<T> {
    kernels: PhaseKernels<T>,
    /// One row of N weights per DoF.
    weights: Vec<Vec<T>>,
    alpha_z: T,
    beta_z: T,
    goal: Vec<T>,
    omega: T,
    amplitude: Vec<T>,
    integrator: Integrator,
    step_guard: T,
}

/// Instantaneous rollout state of a periodic DMP.
#[derive(Debug, Clone, PartialEq)]
pub struct DmpState<T> {
    pub y: Vec<T>,
    /// Scaled velocity z = ẏ/Ω.
    pub z: Vec<T>,
    /// Phase in `[0, 2π)`.
    pub phi: T,
}

impl<T: Real> DmpState<T> {
    pub fn new(y: Vec<T>, z: Vec<T>, phi: T) -> Self {
        Self {
            y,
            z,
            phi: wrap_angle(phi),
        }
    }

    pub fn at_rest(dims: usize) -> Self {
        Self::new(vec![T::zero(); dims], vec![T::zero(); dims], T::zero())
    }
}

impl<T: Real> PeriodicDmpModel<T> {
    /// Batch fit: ridge-regularized weighted least squares of
    /// `target/r` against the normalized kernel basis, solved per DoF.
    ///
    /// `targets[t]` is the D-vector forcing target at `phases[t]`. Fails
    /// with [`Error::InsufficientCoverage`] when a kernel receives total raw
    /// activation below the configured threshold.
    pub fn fit_batch(spec: &ModelSpec<T>, phases: &[T], targets: &[Vec<T>]) -> Result<Self> {
        let mut model = Self::with_zero_weights(spec, dims_of(targets, &spec.goal)?)?;
        if phases.len() != targets.len() {
            return Err(Error::DegenerateInput(format!(
                "{} phases vs {} targets",
                phases.len(),
                targets.len()
            )));
        }
        if phases.len() < model.kernels.len() {
            return Err(Error::DegenerateInput(format!(
                "{} samples cannot constrain {} kernels",
                phases.len(),
                model.kernels.len()
            )));
        }
        let n = model.kernels.len();
        let dims = model.goal.len();
        let ridge = T::one() / spec.config.prior_variance;
        let mut gram = vec![vec![T::zero(); n]; n];
        let mut rhs = vec![vec![T::zero(); dims]; n];
        let mut coverage = vec![T::zero(); n];
        for (t, phi) in phases.iter().enumerate() {
            let raw = model.kernels.eval(*phi);
            let sum: T = raw.iter().copied().sum();
            for (i, cov) in coverage.iter_mut().enumerate() {
                *cov += raw[i];
            }
            let x: Vec<T> = raw.iter().map(|p| *p / sum).collect();
            for i in 0..n {
                for j in i..n {
                    gram[i][j] += x[i] * x[j];
                }
                for d in 0..dims {
                    rhs[i][d] += x[i] * targets[t][d] / model.amplitude[d];
                }
            }
        }
        check_coverage(&coverage, spec.config.coverage_tol)?;
        for i in 0..n {
            gram[i][i] += ridge;
            for j in 0..i {
                gram[i][j] = gram[j][i];
            }
        }
        let sol = cholesky_solve(gram, rhs)?;
        for d in 0..dims {
            for i in 0..n {
                model.weights[d][i] = sol[i][d];
            }
        }
        Ok(model)
    }

    fn with_zero_weights(spec: &ModelSpec<T>, dims: usize) -> Result<Self> {
        let n = spec.config.n_kernels;
        let kernels = PhaseKernels::new(n, spec.config.width_for(n))?;
        let amplitude = spec.amplitude_for(dims);
        if amplitude.len() != dims {
            return Err(Error::DegenerateInput(format!(
                "amplitude has {} entries for {} DoF",
                amplitude.len(),
                dims
            )));
        }
        if amplitude.iter().any(|r| !(r.abs() > T::zero())) {
            return Err(Error::DegenerateInput(
                "amplitude entries must be nonzero".into(),
            ));
        }
        if !(spec.config.alpha_z > T::zero()) || !(spec.config.beta_z_value() > T::zero()) {
            return Err(Error::DegenerateInput(
                "alpha_z and beta_z must be positive".into(),
            ));
        }
        if !(spec.omega > T::zero()) {
            return Err(Error::DegenerateInput("frequency must be positive".into()));
        }
        Ok(Self {
            kernels,
            weights: vec![vec![T::zero(); n]; dims],
            alpha_z: spec.config.alpha_z,
            beta_z: spec.config.beta_z_value(),
            goal: spec.goal.clone(),
            omega: spec.omega,
            amplitude,
            integrator: spec.config.integrator,
            step_guard: spec.config.step_guard,
        })
    }

    /// Forcing term `f(φ) = r ∘ (Σ Ψ_i w_i / Σ Ψ_i)`.
    pub fn forcing(&self, phi: T) -> Vec<T> {
        let x = self.kernels.normalized(phi);
        self.weights
            .iter()
            .zip(&self.amplitude)
            .map(|(row, r)| {
                let s: T = row.iter().zip(&x).map(|(w, xi)| *w * *xi).sum();
                s * *r
            })
            .collect()
    }

    /// One explicit integration step of the phase and transformation
    /// systems. The phase advances by exactly `Ω·dt` (wrapped).
    pub fn step(&self, state: &DmpState<T>, dt: T) -> Result<DmpState<T>> {
        self.step_with(state, dt, state.phi, self.omega, true)
    }

    /// Step with an externally supplied phase and frequency (adaptive
    /// oscillator coupling). The returned phase equals `phi`; the caller
    /// owns phase evolution.
    pub fn step_coupled(&self, state: &DmpState<T>, dt: T, phi: T, omega: T) -> Result<DmpState<T>> {
        self.step_with(state, dt, phi, omega, false)
    }

    fn step_with(
        &self,
        state: &DmpState<T>,
        dt: T,
        phi: T,
        omega: T,
        advance_phase: bool,
    ) -> Result<DmpState<T>> {
        if !(dt > T::zero()) {
            return Err(Error::DegenerateInput("dt must be positive".into()));
        }
        let dt_omega = dt * omega;
        if dt_omega > self.step_guard {
            return Err(Error::StepTooLarge {
                dt_omega: dt_omega.as_f64(),
                guard: self.step_guard.as_f64(),
            });
        }
        let dims = self.goal.len();
        let mut y = state.y.clone();
        let mut z = state.z.clone();
        match self.integrator {
            Integrator::Euler => {
                let f = self.forcing(phi);
                for d in 0..dims {
                    let zdot = omega
                        * (self.alpha_z * (self.beta_z * (self.goal[d] - y[d]) - z[d]) + f[d]);
                    let ydot = omega * z[d];
                    y[d] += dt * ydot;
                    z[d] += dt * zdot;
                }
            }
            Integrator::Rk4 => {
                let deriv = |yv: &[T], zv: &[T], ph: T| -> (Vec<T>, Vec<T>) {
                    let f = self.forcing(ph);
                    let mut dy = vec![T::zero(); dims];
                    let mut dz = vec![T::zero(); dims];
                    for d in 0..dims {
                        dz[d] = omega
                            * (self.alpha_z * (self.beta_z * (self.goal[d] - yv[d]) - zv[d])
                                + f[d]);
                        dy[d] = omega * zv[d];
                    }
                    (dy, dz)
                };
                let half = dt / T::of(2.0);
                let (k1y, k1z) = deriv(&y, &z, phi);
                let y2: Vec<T> = (0..dims).map(|d| y[d] + half * k1y[d]).collect();
                let z2: Vec<T> = (0..dims).map(|d| z[d] + half * k1z[d]).collect();
                let (k2y, k2z) = deriv(&y2, &z2, phi + half * omega);
                let y3: Vec<T> = (0..dims).map(|d| y[d] + half * k2y[d]).collect();
                let z3: Vec<T> = (0..dims).map(|d| z[d] + half * k2z[d]).collect();
                let (k3y, k3z) = deriv(&y3, &z3, phi + half * omega);
                let y4: Vec<T> = (0..dims).map(|d| y[d] + dt * k3y[d]).collect();
                let z4: Vec<T> = (0..dims).map(|d| z[d] + dt * k3z[d]).collect();
                let (k4y, k4z) = deriv(&y4, &z4, phi + dt * omega);
                let sixth = dt / T::of(6.0);
                let two = T::of(2.0);
                for d in 0..dims {
                    y[d] += sixth * (k1y[d] + two * k2y[d] + two * k3y[d] + k4y[d]);
                    z[d] += sixth * (k1z[d] + two * k2z[d] + two * k3z[d] + k4z[d]);
                }
            }
        }
        let new_phi = if advance_phase {
            wrap_angle(state.phi + dt_omega)
        } else {
            wrap_angle(phi)
        };
        Ok(DmpState {
            y,
            z,
            phi: new_phi,
        })
    }

    pub fn kernels(&self) -> &PhaseKernels<T> {
        &self.kernels
    }

    pub fn weights(&self) -> &[Vec<T>] {
        &self.weights
    }

    pub fn dims(&self) -> usize {
        self.goal.len()
    }

    pub fn goal(&self) -> &[T] {
        &self.goal
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn alpha_z(&self) -> T {
        self.alpha_z
    }

    pub fn beta_z(&self) -> T {
        self.beta_z
    }

    pub fn amplitude(&self) -> &[T] {
        &self.amplitude
    }

    /// Decompose a fitted model into its kernel bank and weights.
    pub(crate) fn into_fitted_parts(self) -> (PhaseKernels<T>, Vec<Vec<T>>) {
        (self.kernels, self.weights)
    }
}

/// Streaming weight estimation: matrix recursive least squares with
/// forgetting factor λ over the normalized kernel basis.
///
/// With λ = 1 the result after one pass over a dataset equals
/// [`PeriodicDmpModel::fit_batch`] on the same data to rounding accuracy.
#[derive(Debug, Clone)]
pub struct RlsTrainer<T> {
    model: PeriodicDmpModel<T>,
    /// Inverse-correlation matrix, shared across DoFs.
    p: Vec<Vec<T>>,
    lambda: T,
    coverage: Vec<T>,
}

/// Cap on inverse-correlation growth so long-dormant kernels cannot push
/// P to infinity under forgetting.
fn p_cap<T: Real>() -> T {
    T::of(1e100)
}

impl<T: Real> RlsTrainer<T> {
    /// `dims` output dimensions, forgetting factor `0 < lambda <= 1`.
    pub fn new(spec: &ModelSpec<T>, dims: usize, lambda: T) -> Result<Self> {
        if !(lambda > T::zero() && lambda <= T::one()) {
            return Err(Error::DegenerateInput(
                "forgetting factor must be in (0, 1]".into(),
            ));
        }
        let model = PeriodicDmpModel::with_zero_weights(spec, dims)?;
        let n = model.kernels.len();
        let mut p = vec![vec![T::zero(); n]; n];
        for (i, row) in p.iter_mut().enumerate() {
            row[i] = spec.config.prior_variance;
        }
        Ok(Self {
            coverage: vec![T::zero(); n],
            p,
            lambda,
            model,
        })
    }

    /// Incorporate one sample `(φ, target)`.
    pub fn update(&mut self, phi: T, target: &[T]) {
        let n = self.model.kernels.len();
        debug_assert_eq!(target.len(), self.model.dims());
        let raw = self.model.kernels.eval(phi);
        let sum: T = raw.iter().copied().sum();
        for (i, cov) in self.coverage.iter_mut().enumerate() {
            *cov += raw[i];
        }
        let x: Vec<T> = raw.iter().map(|p| *p / sum).collect();
        let mut px = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                acc += self.p[i][j] * x[j];
            }
            px[i] = acc;
        }
        let denom = self.lambda + x.iter().zip(&px).map(|(a, b)| *a * *b).sum::<T>();
        let gain: Vec<T> = px.iter().map(|v| *v / denom).collect();
        for (d, row) in self.model.weights.iter_mut().enumerate() {
            let pred: T = row.iter().zip(&x).map(|(w, xi)| *w * *xi).sum();
            let err = target[d] / self.model.amplitude[d] - pred;
            for i in 0..n {
                row[i] += err * gain[i];
            }
        }
        let cap = p_cap::<T>();
        for i in 0..n {
            for j in 0..n {
                let v = (self.p[i][j] - gain[i] * px[j]) / self.lambda;
                self.p[i][j] = v.max(-cap).min(cap);
            }
        }
    }

    /// Predicted forcing at `φ` with the current weights.
    pub fn forcing(&self, phi: T) -> Vec<T> {
        self.model.forcing(phi)
    }

    /// Total raw activation received per kernel so far.
    pub fn coverage(&self) -> &[T] {
        &self.coverage
    }

    pub fn model(&self) -> &PeriodicDmpModel<T> {
        &self.model
    }

    /// Freeze into an immutable model.
    pub fn finish(self) -> PeriodicDmpModel<T> {
        self.model
    }
}

/// How the weights are estimated.
#[derive(Debug, Clone, Copy, Default)]
pub enum FitMethod<T> {
    /// Ridge-regularized weighted least squares over the whole dataset.
    #[default]
    Batch,
    /// Recursive least squares streamed over the dataset `passes` times
    /// with forgetting factor `lambda`.
    Rls { lambda: T, passes: usize },
}

/// Fit a model with either method; the RLS route additionally enforces the
/// kernel coverage threshold after streaming.
pub fn fit_model<T: Real>(
    spec: &ModelSpec<T>,
    phases: &[T],
    targets: &[Vec<T>],
    method: FitMethod<T>,
) -> Result<PeriodicDmpModel<T>> {
    match method {
        FitMethod::Batch => PeriodicDmpModel::fit_batch(spec, phases, targets),
        FitMethod::Rls { lambda, passes } => {
            let dims = targets.first().map(|t| t.len()).unwrap_or(spec.goal.len());
            let mut trainer = RlsTrainer::new(spec, dims, lambda)?;
            for _ in 0..passes.max(1) {
                for (phi, target) in phases.iter().zip(targets) {
                    trainer.update(*phi, target);
                }
            }
            check_coverage(trainer.coverage(), spec.config.coverage_tol)?;
            Ok(trainer.finish())
        }
    }
}

/// Invert the transformation system on a demonstrated signal:
/// `f_t = ÿ/Ω² − α_z(β_z(g − y) − ẏ/Ω)` per DoF.
pub fn forcing_targets<T: Real>(
    alpha_z: T,
    beta_z: T,
    omega: T,
    goal: &[T],
    y: &[Vec<T>],
    dy: &[Vec<T>],
    ddy: &[Vec<T>],
) -> Vec<Vec<T>> {
    let om2 = omega * omega;
    y.iter()
        .zip(dy)
        .zip(ddy)
        .map(|((yt, dyt), ddyt)| {
            goal.iter()
                .enumerate()
                .map(|(d, g)| {
                    ddyt[d] / om2 - alpha_z * (beta_z * (*g - yt[d]) - dyt[d] / omega)
                })
                .collect()
        })
        .collect()
}

fn dims_of<T: Real>(targets: &[Vec<T>], goal: &[T]) -> Result<usize> {
    let dims = goal.len();
    if dims == 0 {
        return Err(Error::DegenerateInput("zero-dimensional goal".into()));
    }
    if let Some(bad) = targets.iter().find(|t| t.len() != dims) {
        return Err(Error::DegenerateInput(format!(
            "target with {} entries for {} DoF",
            bad.len(),
            dims
        )));
    }
    Ok(dims)
}

fn check_coverage<T: Real>(coverage: &[T], tol: T) -> Result<()> {
    for (kernel, cov) in coverage.iter().enumerate() {
        if *cov < tol {
            return Err(Error::InsufficientCoverage {
                kernel,
                activation: cov.as_f64(),
            });
        }
    }
    Ok(())
}

/// Solve `A X = B` for symmetric positive definite `A` (N×N) and `B` (N×D)
/// by Cholesky factorization.
fn cholesky_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    for j in 0..n {
        for k in 0..j {
            let f = a[j][k];
            for i in j..n {
                a[i][j] = a[i][j] - a[i][k] * f;
            }
        }
        let d = a[j][j];
        if !(d > T::zero()) {
            return Err(Error::DegenerateInput(
                "normal equations are not positive definite".into(),
            ));
        }
        let root = d.sqrt();
        for i in j..n {
            a[i][j] /= root;
        }
    }
    let dims = b[0].len();
    // forward substitution L y = b
    for i in 0..n {
        for d in 0..dims {
            let mut acc = b[i][d];
            for k in 0..i {
                acc -= a[i][k] * b[k][d];
            }
            b[i][d] = acc / a[i][i];
        }
    }
    // back substitution L^T x = y
    for i in (0..n).rev() {
        for d in 0..dims {
            let mut acc = b[i][d];
            for k in i + 1..n {
                acc -= a[k][i] * b[k][d];
            }
            b[i][d] = acc / a[i][i];
        }
    }
    Ok(b)
}

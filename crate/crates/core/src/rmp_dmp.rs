//! Riemannian-projection periodic DMP: learn a 3-DoF Euclidean periodic DMP
//! in the tangent space anchored at the demonstration's Karcher mean, then
//! map every generated tangent point back to the sphere through the
//! exponential map.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::euclid_pdmp::{
    fit_model, forcing_targets, DmpState, FitMethod, ModelSpec, PdmpConfig, PeriodicDmpModel,
};
use crate::quat::{exp_map, karcher_mean, log_map, KarcherConfig, UnitQuaternion};
use crate::scalar::{wrap_angle, Real};
use crate::trajectory::{phase_grid, project_to_tangent, DiffScheme, QuatTrajectory, TangentTrajectory};
use crate::vec3::Vec3;

/// Where the tangent space is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Anchor {
    /// Karcher mean of the demonstration — the farthest point from the
    /// extremes, keeping the projection well inside the chart.
    #[default]
    KarcherMean,
    /// First demonstration sample; kept for comparison experiments. Fails
    /// on demonstrations whose extremes approach a geodesic angle of π
    /// from the start.
    FirstSample,
}

/// Attractor choice in the tangent space.
#[derive(Debug, Clone, Copy, Default)]
pub enum RmpGoal<T> {
    /// Mean of the projected demonstration (≈ 0 when anchored at the
    /// Karcher mean).
    #[default]
    MeanZeta,
    /// Exactly zero: the attractor is the anchor orientation itself.
    Zero,
    /// Tangent coordinates of a fixed orientation.
    Orientation(UnitQuaternion<T>),
}

/// Training settings for [`RmpDmpModel::train`].
#[derive(Debug, Clone)]
pub struct RmpTrainConfig<T> {
    pub pdmp: PdmpConfig<T>,
    /// Cycle frequency Ω (rad/s). `None` assumes the demonstration holds
    /// exactly one cycle: Ω = 2π / period.
    pub omega: Option<T>,
    pub fit: FitMethod<T>,
    pub goal: RmpGoal<T>,
    pub anchor: Anchor,
    pub karcher: KarcherConfig<T>,
    pub diff: DiffScheme,
}

impl<T: Real> Default for RmpTrainConfig<T> {
    fn default() -> Self {
        Self {
            pdmp: PdmpConfig::default(),
            omega: None,
            fit: FitMethod::default(),
            goal: RmpGoal::default(),
            anchor: Anchor::default(),
            karcher: KarcherConfig::default(),
            diff: DiffScheme::default(),
        }
    }
}

/// A periodic DMP over tangent coordinates plus the chart anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct RmpDmpModel<T> {
    inner: PeriodicDmpModel<T>,
    center: UnitQuaternion<T>,
}

impl<T: Real> RmpDmpModel<T> {
    /// Train on a single periodic demonstration.
    pub fn train(demo: &QuatTrajectory<T>, config: &RmpTrainConfig<T>) -> Result<Self> {
        let center = match config.anchor {
            Anchor::KarcherMean => karcher_mean(demo.samples(), &config.karcher)?,
            Anchor::FirstSample => demo.samples()[0],
        };
        let tangent = project_to_tangent(demo, &center, config.diff)?;
        let omega = match config.omega {
            Some(om) => om,
            None => T::TAU() / demo.period(),
        };
        let goal = match config.goal {
            RmpGoal::MeanZeta => {
                let mut acc = Vec3::zero();
                for z in &tangent.zeta {
                    acc += *z;
                }
                acc.scale(T::one() / T::of_usize(tangent.zeta.len()))
            }
            RmpGoal::Zero => Vec3::zero(),
            RmpGoal::Orientation(q) => log_map(&q, &center)?,
        };
        let spec = ModelSpec {
            config: config.pdmp.clone(),
            omega,
            goal: goal.to_array().to_vec(),
            amplitude: None,
        };
        let phases = phase_grid(demo, omega);
        let targets = tangent_targets(&spec, &tangent);
        let inner = fit_model(&spec, &phases, &targets, config.fit)?;
        Ok(Self { inner, center })
    }

    /// Advance the tangent-space DMP one step and map the output back to
    /// the sphere. Fails with [`Error::Domain`] if the tangent state left
    /// the chart (`‖y‖ ≥ π`).
    pub fn step(&self, state: &DmpState<T>, dt: T) -> Result<(DmpState<T>, UnitQuaternion<T>)> {
        let next = self.inner.step(state, dt)?;
        let q = self.output(&next)?;
        Ok((next, q))
    }

    /// Step with phase and frequency supplied by an adaptive oscillator.
    pub fn step_coupled(
        &self,
        state: &DmpState<T>,
        dt: T,
        phi: T,
        omega: T,
    ) -> Result<(DmpState<T>, UnitQuaternion<T>)> {
        let next = self.inner.step_coupled(state, dt, phi, omega)?;
        let q = self.output(&next)?;
        Ok((next, q))
    }

    /// Orientation corresponding to a rollout state.
    pub fn output(&self, state: &DmpState<T>) -> Result<UnitQuaternion<T>> {
        exp_map(Vec3::from_array([state.y[0], state.y[1], state.y[2]]), &self.center)
    }

    /// State resting at the attractor with phase 0.
    pub fn rest_state(&self) -> DmpState<T> {
        DmpState::new(self.inner.goal().to_vec(), vec![T::zero(); 3], T::zero())
    }

    /// State starting from orientation `q0` with tangent velocity
    /// `zeta_dot0` (rad/s) and phase `phi0`.
    pub fn initial_state(
        &self,
        q0: &UnitQuaternion<T>,
        zeta_dot0: Vec3<T>,
        phi0: T,
    ) -> Result<DmpState<T>> {
        let y0 = log_map(q0, &self.center)?;
        let z0 = zeta_dot0 / self.inner.omega();
        Ok(DmpState::new(
            y0.to_array().to_vec(),
            z0.to_array().to_vec(),
            wrap_angle(phi0),
        ))
    }

    pub fn inner(&self) -> &PeriodicDmpModel<T> {
        &self.inner
    }

    pub fn center(&self) -> &UnitQuaternion<T> {
        &self.center
    }

    pub fn omega(&self) -> T {
        self.inner.omega()
    }
}

fn tangent_targets<T: Real>(spec: &ModelSpec<T>, tangent: &TangentTrajectory<T>) -> Vec<Vec<T>> {
    let to_rows = |vs: &[Vec3<T>]| -> Vec<Vec<T>> {
        vs.iter().map(|v| v.to_array().to_vec()).collect()
    };
    forcing_targets(
        spec.config.alpha_z,
        spec.config.beta_z_value(),
        spec.omega,
        &spec.goal,
        &to_rows(&tangent.zeta),
        &to_rows(&tangent.dzeta),
        &to_rows(&tangent.ddzeta),
    )
}

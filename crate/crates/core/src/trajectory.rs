//! Demonstration ingestion and preprocessing: uniform resampling, tangent
//! space projection, and numerical differentiation that produces the
//! training signals for both DMP variants.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::quat::{exp_map, hemisphere_align, log_map, TangentVector, UnitQuaternion};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Maximum deviation of a step from the mean step (seconds) for a sampling
/// grid to count as uniform.
pub fn uniform_step_tol<T: Real>() -> T {
    T::of(1e-9)
}

/// Finite-difference scheme for trajectory derivatives.
///
/// Periodic demonstrations use circular (wrap-around) differences, which is
/// the default everywhere in this crate; `Boundary` uses second-order
/// one-sided stencils at the ends instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffScheme {
    #[default]
    Periodic,
    Boundary,
}

/// A timestamped, hemisphere-aligned, uniformly sampled sequence of unit
/// quaternions.
#[derive(Debug, Clone)]
pub struct QuatTrajectory<T> {
    timestamps: Vec<T>,
    samples: Vec<UnitQuaternion<T>>,
}

impl<T: Real> QuatTrajectory<T> {
    /// Validate and ingest a demonstration.
    ///
    /// Aligns hemispheres and, when the grid is not uniform within
    /// [`uniform_step_tol`], resamples by geodesic interpolation at the mean
    /// step. Needs at least 3 samples and strictly increasing timestamps.
    pub fn new(timestamps: Vec<T>, samples: Vec<UnitQuaternion<T>>) -> Result<Self> {
        if timestamps.len() != samples.len() {
            return Err(Error::DegenerateInput(format!(
                "{} timestamps vs {} samples",
                timestamps.len(),
                samples.len()
            )));
        }
        if timestamps.len() < 3 {
            return Err(Error::DegenerateInput(
                "a trajectory needs at least 3 samples".into(),
            ));
        }
        for w in timestamps.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::DegenerateInput(
                    "timestamps must be strictly increasing".into(),
                ));
            }
        }
        let samples = hemisphere_align(&samples);
        let steps: Vec<T> = timestamps.windows(2).map(|w| w[1] - w[0]).collect();
        let mean_dt = steps.iter().copied().sum::<T>() / T::of_usize(steps.len());
        let max_dev = steps
            .iter()
            .map(|s| (*s - mean_dt).abs())
            .fold(T::zero(), T::max);
        if max_dev > uniform_step_tol::<T>() {
            return resample_uniform(&timestamps, &samples, mean_dt);
        }
        Ok(Self {
            timestamps,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn timestamps(&self) -> &[T] {
        &self.timestamps
    }

    pub fn samples(&self) -> &[UnitQuaternion<T>] {
        &self.samples
    }

    /// Mean sampling step.
    pub fn dt(&self) -> T {
        let span = *self.timestamps.last().unwrap() - self.timestamps[0];
        span / T::of_usize(self.len() - 1)
    }

    /// Time span covered by the samples plus one trailing step: for a
    /// demonstration holding exactly one cycle (no duplicated endpoint)
    /// this is the cycle period.
    pub fn period(&self) -> T {
        self.dt() * T::of_usize(self.len())
    }

    /// Read from CSV with header `t,qw,qx,qy,qz`.
    ///
    /// Lines starting with `#` are ignored. Rows with quaternion norm error
    /// above 1e-3 are rejected; smaller deviations are renormalized.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut timestamps = Vec::new();
        let mut samples = Vec::new();
        let mut saw_header = false;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if !saw_header {
                let cols: Vec<&str> = text.split(',').map(str::trim).collect();
                if cols != ["t", "qw", "qx", "qy", "qz"] {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header 't,qw,qx,qy,qz', found '{text}'"),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = text.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 5 columns, found {}", fields.len()),
                });
            }
            let mut vals = [T::zero(); 5];
            for (k, f) in fields.iter().enumerate() {
                vals[k] = parse_scalar(f, line_no)?;
            }
            let norm_sq = vals[1] * vals[1] + vals[2] * vals[2] + vals[3] * vals[3] + vals[4] * vals[4];
            let norm_err = (norm_sq.sqrt() - T::one()).abs();
            if norm_err > T::of(1e-3) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "quaternion norm error {} exceeds 1e-3",
                        norm_err.as_f64()
                    ),
                });
            }
            timestamps.push(vals[0]);
            samples.push(
                UnitQuaternion::new(vals[1], vals[2], vals[3], vals[4]).map_err(|e| {
                    Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    }
                })?,
            );
        }
        if !saw_header {
            return Err(Error::Parse {
                line: 0,
                message: "missing header 't,qw,qx,qy,qz'".into(),
            });
        }
        Self::new(timestamps, samples)
    }

    /// Write as CSV with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "t,qw,qx,qy,qz")?;
        for (t, q) in self.timestamps.iter().zip(&self.samples) {
            let (w, x, y, z) = (*q).into_components();
            writeln!(
                writer,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t.as_f64(),
                w.as_f64(),
                x.as_f64(),
                y.as_f64(),
                z.as_f64()
            )?;
        }
        Ok(())
    }
}

fn parse_scalar<T: Real>(s: &str, line: usize) -> Result<T> {
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse '{s}' as a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value '{s}'"),
        });
    }
    Ok(T::of(v))
}

/// A demonstration projected onto the tangent space at `center`, with first
/// and second finite-difference derivatives.
#[derive(Debug, Clone)]
pub struct TangentTrajectory<T> {
    pub timestamps: Vec<T>,
    pub zeta: Vec<TangentVector<T>>,
    pub dzeta: Vec<TangentVector<T>>,
    pub ddzeta: Vec<TangentVector<T>>,
    pub center: UnitQuaternion<T>,
}

/// Project each sample through the log map at `center` and differentiate.
pub fn project_to_tangent<T: Real>(
    traj: &QuatTrajectory<T>,
    center: &UnitQuaternion<T>,
    scheme: DiffScheme,
) -> Result<TangentTrajectory<T>> {
    let mut zeta = Vec::with_capacity(traj.len());
    for q in traj.samples() {
        zeta.push(log_map(q, center)?);
    }
    let dt = traj.dt();
    let dzeta = differentiate(&zeta, dt, scheme)?;
    let ddzeta = second_difference(&zeta, dt, scheme)?;
    Ok(TangentTrajectory {
        timestamps: traj.timestamps().to_vec(),
        zeta,
        dzeta,
        ddzeta,
        center: *center,
    })
}

/// Body angular velocity and acceleration extracted from a demonstration.
#[derive(Debug, Clone)]
pub struct OmegaTrajectory<T> {
    pub timestamps: Vec<T>,
    pub omega: Vec<Vec3<T>>,
    pub domega: Vec<Vec3<T>>,
}

/// `ω_t = 2·log_map(q_{t+1}, q_t)/δt`, the exact inverse of one
/// exponential-map integration step; `ω̇` by forward differences of ω so the
/// pair inverts the explicit Euler update exactly.
///
/// With [`DiffScheme::Periodic`] the last sample wraps around to the first;
/// otherwise the final ω repeats the last interior value (backward
/// difference) and ω̇ uses one-sided stencils.
pub fn angular_velocity<T: Real>(
    traj: &QuatTrajectory<T>,
    scheme: DiffScheme,
) -> Result<OmegaTrajectory<T>> {
    let n = traj.len();
    let dt = traj.dt();
    let two = T::of(2.0);
    let qs = traj.samples();
    let mut omega = Vec::with_capacity(n);
    for t in 0..n - 1 {
        omega.push(log_map(&qs[t + 1], &qs[t])?.scale(two / dt));
    }
    match scheme {
        DiffScheme::Periodic => omega.push(log_map(&qs[0], &qs[n - 1])?.scale(two / dt)),
        DiffScheme::Boundary => omega.push(omega[n - 2]),
    }
    let domega = forward_difference(&omega, dt, scheme);
    Ok(OmegaTrajectory {
        timestamps: traj.timestamps().to_vec(),
        omega,
        domega,
    })
}

/// Resample onto a uniform grid by piecewise shortest-arc geodesic
/// interpolation, preserving both endpoints. The step is adjusted to the
/// nearest exact divisor of the time span; input that is already uniform at
/// the requested step is returned unchanged.
pub fn resample_uniform<T: Real>(
    timestamps: &[T],
    samples: &[UnitQuaternion<T>],
    target_dt: T,
) -> Result<QuatTrajectory<T>> {
    if timestamps.len() != samples.len() || timestamps.len() < 2 {
        return Err(Error::DegenerateInput(
            "resampling needs at least 2 timestamped samples".into(),
        ));
    }
    if !(target_dt > T::zero()) {
        return Err(Error::DegenerateInput("target step must be positive".into()));
    }
    for w in timestamps.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::DegenerateInput(
                "timestamps must be strictly increasing".into(),
            ));
        }
    }
    let span = *timestamps.last().unwrap() - timestamps[0];
    if !(span > T::zero()) {
        return Err(Error::DegenerateInput("zero time span".into()));
    }
    let samples = hemisphere_align(samples);

    // fast path: already uniform at the requested step
    let steps: Vec<T> = timestamps.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_dt = span / T::of_usize(steps.len());
    let max_dev = steps
        .iter()
        .map(|s| (*s - mean_dt).abs())
        .fold(T::zero(), T::max);
    if max_dev <= uniform_step_tol::<T>()
        && (mean_dt - target_dt).abs() <= mean_dt * T::of(1e-12)
        && timestamps.len() >= 3
    {
        return Ok(QuatTrajectory {
            timestamps: timestamps.to_vec(),
            samples,
        });
    }

    let intervals = (span / target_dt).round().max(T::of(2.0));
    let n_out = intervals.as_f64() as usize + 1;
    let dt = span / intervals;
    let mut out_t = Vec::with_capacity(n_out);
    let mut out_q = Vec::with_capacity(n_out);
    let mut seg = 0usize;
    for k in 0..n_out {
        let t = if k + 1 == n_out {
            *timestamps.last().unwrap()
        } else {
            timestamps[0] + dt * T::of_usize(k)
        };
        while seg + 2 < timestamps.len() && timestamps[seg + 1] < t {
            seg += 1;
        }
        let t0 = timestamps[seg];
        let t1 = timestamps[seg + 1];
        let s = ((t - t0) / (t1 - t0)).max(T::zero()).min(T::one());
        let step = log_map(&samples[seg + 1], &samples[seg])?;
        out_q.push(exp_map(step.scale(s), &samples[seg])?);
        out_t.push(t);
    }
    if out_t.len() < 3 {
        return Err(Error::DegenerateInput(
            "resampled trajectory has fewer than 3 samples".into(),
        ));
    }
    Ok(QuatTrajectory {
        timestamps: out_t,
        samples: out_q,
    })
}

/// Phase of each sample for a cycle frequency Ω: `φ_t = Ω(t − t₀)` wrapped
/// to `[0, 2π)`.
pub fn phase_grid<T: Real>(traj: &QuatTrajectory<T>, omega: T) -> Vec<T> {
    let t0 = traj.timestamps()[0];
    traj.timestamps()
        .iter()
        .map(|t| crate::scalar::wrap_angle(omega * (*t - t0)))
        .collect()
}

/// Second-order central differences; circular or one-sided at the ends
/// depending on the scheme.
pub fn differentiate<T: Real>(
    v: &[Vec3<T>],
    dt: T,
    scheme: DiffScheme,
) -> Result<Vec<Vec3<T>>> {
    let n = v.len();
    if n < 3 {
        return Err(Error::DegenerateInput(
            "differentiation needs at least 3 samples".into(),
        ));
    }
    let half = T::of(0.5) / dt;
    let mut out = Vec::with_capacity(n);
    match scheme {
        DiffScheme::Periodic => {
            for t in 0..n {
                let next = v[(t + 1) % n];
                let prev = v[(t + n - 1) % n];
                out.push((next - prev).scale(half));
            }
        }
        DiffScheme::Boundary => {
            // 2nd-order one-sided: (-3 v0 + 4 v1 - v2) / (2 dt)
            out.push(
                (v[1].scale(T::of(4.0)) - v[0].scale(T::of(3.0)) - v[2]).scale(half),
            );
            for t in 1..n - 1 {
                out.push((v[t + 1] - v[t - 1]).scale(half));
            }
            out.push(
                (v[n - 1].scale(T::of(3.0)) - v[n - 2].scale(T::of(4.0)) + v[n - 3]).scale(half),
            );
        }
    }
    Ok(out)
}

/// Second finite difference `(v_{t+1} - 2 v_t + v_{t-1}) / dt²`; circular or
/// one-sided (first-order at the ends) per scheme.
pub fn second_difference<T: Real>(
    v: &[Vec3<T>],
    dt: T,
    scheme: DiffScheme,
) -> Result<Vec<Vec3<T>>> {
    let n = v.len();
    if n < 3 {
        return Err(Error::DegenerateInput(
            "differentiation needs at least 3 samples".into(),
        ));
    }
    let inv = T::one() / (dt * dt);
    let two = T::of(2.0);
    let mut out = Vec::with_capacity(n);
    let interior = |t: usize| (v[t + 1] - v[t].scale(two) + v[t - 1]).scale(inv);
    match scheme {
        DiffScheme::Periodic => {
            for t in 0..n {
                let next = v[(t + 1) % n];
                let prev = v[(t + n - 1) % n];
                out.push((next - v[t].scale(two) + prev).scale(inv));
            }
        }
        DiffScheme::Boundary => {
            out.push((v[2] - v[1].scale(two) + v[0]).scale(inv));
            for t in 1..n - 1 {
                out.push(interior(t));
            }
            out.push((v[n - 1] - v[n - 2].scale(two) + v[n - 3]).scale(inv));
        }
    }
    Ok(out)
}

fn forward_difference<T: Real>(v: &[Vec3<T>], dt: T, scheme: DiffScheme) -> Vec<Vec3<T>> {
    let n = v.len();
    let inv = T::one() / dt;
    let mut out = Vec::with_capacity(n);
    for t in 0..n - 1 {
        out.push((v[t + 1] - v[t]).scale(inv));
    }
    match scheme {
        DiffScheme::Periodic => out.push((v[0] - v[n - 1]).scale(inv)),
        DiffScheme::Boundary => out.push(out[n - 2]),
    }
    out
}

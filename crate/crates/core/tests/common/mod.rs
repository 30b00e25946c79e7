//! Shared helpers for integration and acceptance tests: synthetic
//! demonstration generation, phase-aligned error metrics, and independent
//! oracles.

use rhythmiq::quat::{exp_map, geodesic_distance, UnitQuaternion};
use rhythmiq::trajectory::QuatTrajectory;
use rhythmiq::vec3::Vec3;

pub type Q = UnitQuaternion<f64>;

/// Sum-of-sinusoids tangent curve mapped through the exponential map.
#[derive(Clone)]
pub struct SyntheticDemo {
    pub center: Q,
    pub amps: [f64; 3],
    pub harmonics: [usize; 3],
    pub phase_offsets: [f64; 3],
    pub period: f64,
}

impl SyntheticDemo {
    pub fn fig2_like(period: f64) -> Self {
        Self {
            center: Q::identity(),
            amps: [0.3, 0.2, 0.15],
            harmonics: [1, 1, 2],
            phase_offsets: [0.0, std::f64::consts::FRAC_PI_2, 0.0],
            period,
        }
    }

    pub fn tangent_at(&self, t: f64) -> Vec3<f64> {
        let omega = std::f64::consts::TAU / self.period;
        Vec3::new(
            self.amps[0] * (self.harmonics[0] as f64 * omega * t + self.phase_offsets[0]).sin(),
            self.amps[1] * (self.harmonics[1] as f64 * omega * t + self.phase_offsets[1]).sin(),
            self.amps[2] * (self.harmonics[2] as f64 * omega * t + self.phase_offsets[2]).sin(),
        )
    }

    pub fn orientation_at(&self, t: f64) -> Q {
        exp_map(self.tangent_at(t), &self.center).unwrap()
    }

    /// One cycle sampled at `dt` without a duplicated endpoint.
    pub fn trajectory(&self, dt: f64) -> QuatTrajectory<f64> {
        let n = (self.period / dt).round() as usize;
        let ts: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let qs: Vec<Q> = ts.iter().map(|t| self.orientation_at(*t)).collect();
        QuatTrajectory::new(ts, qs).unwrap()
    }
}

/// Max geodesic distance between two equally long cycles, minimized over
/// circular sample shifts (phase alignment).
pub fn phase_aligned_error(cycle: &[Q], reference: &[Q]) -> f64 {
    assert_eq!(cycle.len(), reference.len());
    let n = cycle.len();
    let probe = (n / 128).max(1);
    // coarse scan for the best shift, then exact evaluation there
    let mut best_shift = 0;
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let mut worst: f64 = 0.0;
        for k in (0..n).step_by(probe) {
            worst = worst.max(geodesic_distance(&cycle[k], &reference[(k + shift) % n]));
            if worst >= best {
                break;
            }
        }
        if worst < best {
            best = worst;
            best_shift = shift;
        }
    }
    let mut exact: f64 = 0.0;
    for k in 0..n {
        exact = exact.max(geodesic_distance(
            &cycle[k],
            &reference[(k + best_shift) % n],
        ));
    }
    exact
}

/// Max geodesic distance without any alignment (same phase convention).
pub fn pointwise_error(cycle: &[Q], reference: &[Q]) -> f64 {
    cycle
        .iter()
        .zip(reference)
        .map(|(a, b)| geodesic_distance(a, b))
        .fold(0.0, f64::max)
}

/// Summed squared geodesic distance computed from dot products only; shares
/// no code with the log map it is used to check.
pub fn frechet_objective(samples: &[Q], mu: &Q) -> f64 {
    samples
        .iter()
        .map(|q| {
            let d = (q.scalar() * mu.scalar() + q.vector().dot(mu.vector())).clamp(-1.0, 1.0);
            d.acos().powi(2)
        })
        .sum()
}

/// Brute-force Fréchet mean: projected gradient descent on the 4-vector
/// embedding with numerical gradients and backtracking line search.
/// Independent of the iterative tangent-space averaging it checks.
pub fn brute_force_karcher(samples: &[Q]) -> Q {
    let normalize = |v: [f64; 4]| -> Q {
        UnitQuaternion::new(v[0], v[1], v[2], v[3]).expect("nonzero 4-vector")
    };
    let components = |q: &Q| -> [f64; 4] {
        let (w, x, y, z) = (*q).into_components();
        [w, x, y, z]
    };

    // init at the normalized 4-vector mean
    let mut acc = [0.0; 4];
    for q in samples {
        let c = components(q);
        for i in 0..4 {
            acc[i] += c[i];
        }
    }
    let mut mu = normalize(acc);

    let h = 1e-6;
    for _ in 0..10_000 {
        let m = components(&mu);
        // orthonormal tangent basis: Gram-Schmidt of the axes against mu,
        // dropping the axis most parallel to mu
        let drop = (0..4)
            .max_by(|a, b| m[*a].abs().partial_cmp(&m[*b].abs()).unwrap())
            .unwrap();
        let mut basis: Vec<[f64; 4]> = Vec::new();
        for axis in 0..4 {
            if axis == drop {
                continue;
            }
            let mut e = [0.0; 4];
            e[axis] = 1.0;
            for i in 0..4 {
                e[i] -= m[i] * m[axis];
            }
            for prev in &basis {
                let d: f64 = (0..4).map(|i| e[i] * prev[i]).sum();
                for i in 0..4 {
                    e[i] -= d * prev[i];
                }
            }
            let n: f64 = (0..4).map(|i| e[i] * e[i]).sum::<f64>().sqrt();
            for v in &mut e {
                *v /= n;
            }
            basis.push(e);
        }

        let f0 = frechet_objective(samples, &mu);
        let mut grad = [0.0; 3];
        for (j, e) in basis.iter().enumerate() {
            let mut plus = [0.0; 4];
            let mut minus = [0.0; 4];
            for i in 0..4 {
                plus[i] = m[i] + h * e[i];
                minus[i] = m[i] - h * e[i];
            }
            grad[j] = (frechet_objective(samples, &normalize(plus))
                - frechet_objective(samples, &normalize(minus)))
                / (2.0 * h);
        }
        let gnorm = (grad.iter().map(|g| g * g).sum::<f64>()).sqrt();
        if gnorm < 1e-11 {
            break;
        }

        let mut step = 1.0 / samples.len() as f64;
        let mut moved = false;
        while step > 1e-18 {
            let mut cand = [0.0; 4];
            for i in 0..4 {
                cand[i] = m[i] - step * (0..3).map(|j| grad[j] * basis[j][i]).sum::<f64>();
            }
            let candidate = normalize(cand);
            if frechet_objective(samples, &candidate) < f0 - 0.3 * step * gnorm * gnorm {
                mu = candidate;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    mu
}

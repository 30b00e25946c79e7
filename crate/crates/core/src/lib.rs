//! Periodic dynamic movement primitives for orientation trajectories on the
//! unit-quaternion sphere.
//!
//! Two formulations are provided on top of a shared classical periodic DMP:
//!
//! - [`rmp_dmp`]: project the demonstration onto the tangent space at its
//!   Karcher mean, learn a 3-DoF Euclidean periodic DMP there, and map each
//!   generated point back through the exponential map;
//! - [`qp_dmp`]: evolve the quaternion state directly with a geodesic
//!   attractor and a norm-preserving exponential-map integration step.
//!
//! [`oscillator`] supplies the adaptive frequency oscillator used to extract
//! phase and frequency from a scalar periodic input online, and
//! [`trajectory`] handles demonstration ingestion and differentiation.
//!
//! Everything numeric is generic over the scalar type through
//! [`scalar::Real`] (`f32` or `f64`); `*64`/`*32` aliases are exported at the
//! crate root. Default tolerances target `f64`.

// `!(x > 0)` deliberately rejects NaN where `x <= 0` would accept it
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops mirror the matrix subscripts in the fitting code
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod euclid_pdmp;
pub mod model_io;
pub mod oscillator;
pub mod qp_dmp;
pub mod quat;
pub mod rmp_dmp;
pub mod scalar;
pub mod trajectory;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vec3f64 = vec3::Vec3<f64>;
pub type Vec3f32 = vec3::Vec3<f32>;
pub type UnitQuaternion64 = quat::UnitQuaternion<f64>;
pub type UnitQuaternion32 = quat::UnitQuaternion<f32>;
pub type QuatTrajectory64 = trajectory::QuatTrajectory<f64>;
pub type PeriodicDmpModel64 = euclid_pdmp::PeriodicDmpModel<f64>;
pub type AdaptiveOscillator64 = oscillator::AdaptiveOscillator<f64>;
pub type RmpDmpModel64 = rmp_dmp::RmpDmpModel<f64>;
pub type QpDmpModel64 = qp_dmp::QpDmpModel<f64>;

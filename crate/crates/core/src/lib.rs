//! Simulation models for a 21-DOF tendon-driven robotic hand: D-H finger
//! kinematics with DIP/PIP coupling, law-of-cosines tendon transmission,
//! screw-nut motor and SMA drive modules, and gesture/grasp feasibility.

pub mod actuation;
pub mod error;
pub mod export;
pub mod hand_model;
pub mod kinematics;
pub mod posture;
pub mod roots;
pub mod tendon;

pub use error::{Error, Result};

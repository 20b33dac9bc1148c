//! Forward and inverse kinematics of the finger chains.
//!
//! Each link transform is `Rx(-α)·Rz(θ)·Tx(a)·Tz(d)`, with the link length
//! applied after the joint rotation on the same row. With the stored twist
//! `α = +90°` on the MCP flexion row this puts flexion toward `-z`, which
//! gives the closed form
//!
//! ```text
//! x = (a4 c234 + a3 c23 + a2 c2) c1
//! y = (a4 c234 + a3 c23 + a2 c2) s1
//! z = -(a4 s234 + a3 s23 + a2 s2)
//! ```

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hand_model::{BaseFrame, CouplingRule, DHChain, DHRow, JointAngles};
use crate::roots;

/// Scalar residual tolerance for the coupled reach equation.
pub const REACH_EQ_TOL: f64 = 1e-10;
/// Iteration cap shared by the IK root finders.
pub const MAX_ITER: usize = 200;
/// Fingertip residual accepted by [`inverse_kinematics`], mm.
pub const IK_POSITION_TOL: f64 = 1e-6;

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90°.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let quarter = deg / 90.0;
    if quarter.fract() == 0.0 && quarter.abs() < 1e15 {
        match (quarter as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        deg.to_radians().sin_cos()
    }
}

/// Rigid transform: rotation plus translation (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Matrix3<f64>,
    pub position: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            position: Vector3::zeros(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * other.rotation,
            position: self.position + self.rotation * other.position,
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.position + self.rotation * p
    }

    /// Largest deviation of `RᵀR` from identity and of `det R` from 1.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.rotation.transpose() * self.rotation - Matrix3::identity();
        let gram_err = gram.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        gram_err.max((self.rotation.determinant() - 1.0).abs())
    }

    pub fn from_base(base: &BaseFrame) -> Pose {
        let [roll, pitch, yaw] = base.rpy_deg;
        let (sr, cr) = sin_cos_deg(roll);
        let (sp, cp) = sin_cos_deg(pitch);
        let (sy, cy) = sin_cos_deg(yaw);
        let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, cr, -sr, 0.0, sr, cr);
        let ry = Matrix3::new(cp, 0.0, sp, 0.0, 1.0, 0.0, -sp, 0.0, cp);
        let rz = Matrix3::new(cy, -sy, 0.0, sy, cy, 0.0, 0.0, 0.0, 1.0);
        Pose {
            rotation: rz * ry * rx,
            position: Vector3::from(base.translation),
        }
    }
}

/// Fingertip position in a digit's frame 0, mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingertipPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FingertipPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }

    pub fn distance(&self, other: &FingertipPoint) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }

    pub fn to_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

impl From<Vector3<f64>> for FingertipPoint {
    fn from(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }
}

/// Single-link transform for `row` at joint angle `theta` (degrees).
pub fn joint_transform(row: &DHRow, theta: f64) -> Pose {
    let (sa, ca) = sin_cos_deg(row.alpha_prev);
    let (st, ct) = sin_cos_deg(theta);
    let rotation = Matrix3::new(
        ct, -st, 0.0, //
        ca * st, ca * ct, sa, //
        -sa * st, -sa * ct, ca,
    );
    let position = Vector3::new(
        row.a * ct,
        row.a * ca * st + sa * row.d,
        -row.a * sa * st + ca * row.d,
    );
    Pose { rotation, position }
}

/// Product of the link transforms without limit checks.
pub(crate) fn chain_pose(chain: &DHChain, angles_deg: &[f64]) -> Pose {
    chain
        .rows
        .iter()
        .zip(angles_deg)
        .fold(Pose::identity(), |acc, (row, &theta)| acc.compose(&joint_transform(row, theta)))
}

/// Origins of every link frame after its transform, base to tip (the last
/// entry is the fingertip). Unchecked.
pub fn frame_origins(chain: &DHChain, angles: &JointAngles) -> Vec<Vector3<f64>> {
    let mut pose = Pose::identity();
    chain
        .rows
        .iter()
        .zip(angles.iter())
        .map(|(row, &theta)| {
            pose = pose.compose(&joint_transform(row, theta));
            pose.position
        })
        .collect()
}

/// Fingertip frame relative to frame 0. Angles must be within limits.
pub fn forward_kinematics(chain: &DHChain, angles: &JointAngles) -> Result<Pose> {
    chain.check_limits(angles)?;
    Ok(chain_pose(chain, &angles.0))
}

/// Fingertip position; identical to the position block of
/// [`forward_kinematics`].
pub fn fingertip(chain: &DHChain, angles: &JointAngles) -> Result<FingertipPoint> {
    forward_kinematics(chain, angles).map(|pose| pose.position.into())
}

/// Sets the driven joint to `ratio · driver`, clamped into the driven range.
pub fn apply_coupling(chain: &DHChain, rule: &CouplingRule, angles: &JointAngles) -> Result<JointAngles> {
    chain.check_arity(angles)?;
    let driver_row = chain
        .rows
        .get(rule.driver_joint)
        .ok_or_else(|| Error::InvalidArgument(format!("driver joint {} out of range", rule.driver_joint)))?;
    let driven_row = chain
        .rows
        .get(rule.driven_joint)
        .ok_or_else(|| Error::InvalidArgument(format!("driven joint {} out of range", rule.driven_joint)))?;
    let driver = angles[rule.driver_joint];
    if !driver_row.contains(driver) {
        return Err(Error::OutOfLimits {
            joint: format!("{} {}", chain.name, driver_row.joint),
            value: driver,
            min: driver_row.theta_min,
            max: driver_row.theta_max,
        });
    }
    let mut out = angles.clone();
    out[rule.driven_joint] = driven_row.clamp(rule.ratio * driver);
    Ok(out)
}

/// Checks that `chain` has the universal layout the closed-form IK assumes.
fn check_ik_layout(chain: &DHChain, rule: &CouplingRule) -> Result<()> {
    let ok = chain.len() == 4
        && chain.rows[0].a == 0.0
        && chain.rows[0].alpha_prev == 0.0
        && chain.rows[1].alpha_prev == 90.0
        && chain.rows[2].alpha_prev == 0.0
        && chain.rows[3].alpha_prev == 0.0
        && chain.rows.iter().all(|r| r.d == 0.0)
        && chain.rows[1..].iter().all(|r| r.a > 0.0);
    if !ok {
        return Err(Error::InvalidArgument(format!(
            "chain {} does not have the universal MCP/PIP/DIP layout",
            chain.name
        )));
    }
    if rule.driver_joint != 2 || rule.driven_joint != 3 {
        return Err(Error::InvalidArgument("IK expects the DIP-PIP coupling (joints 2 -> 3)".into()));
    }
    Ok(())
}

/// Left side of the coupled reach equation, divided through by `2 a2 a3 a4`:
/// `cos(kθ)/a2 + cos((1+k)θ)/a3 + cos(θ)/a4`.
fn reach_lhs(links: [f64; 3], k: f64, theta3: f64) -> f64 {
    let [a2, a3, a4] = links;
    (k * theta3).cos() / a2 + ((1.0 + k) * theta3).cos() / a3 + theta3.cos() / a4
}

/// Inverse kinematics of a coupled universal finger.
///
/// `θ1 = atan2(y, x)`; `θ3` is the smallest root of the coupled reach
/// equation on the PIP range whose `θ2` is admissible; `θ4 = k·θ3`; `θ2` is
/// Newton-solved on the `x` equation from the two-vector estimate, with
/// bisection as the fallback.
pub fn inverse_kinematics(chain: &DHChain, target: &FingertipPoint, coupling: &CouplingRule) -> Result<JointAngles> {
    check_ik_layout(chain, coupling)?;
    let [x, y, z] = [target.x, target.y, target.z];
    if ![x, y, z].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite target".into()));
    }
    let links = [chain.rows[1].a, chain.rows[2].a, chain.rows[3].a];
    let [a2, a3, a4] = links;
    let reach = a2 + a3 + a4;
    let dist = target.norm();
    if dist > reach + 1e-9 {
        return Err(Error::Unreachable(format!(
            "target distance {dist:.6} mm exceeds reach {reach:.6} mm"
        )));
    }
    let t = x.hypot(y);
    if t == 0.0 {
        return Err(Error::LateralIndeterminate);
    }

    let lateral = &chain.rows[0];
    let branches = [(y.atan2(x), t), ((-y).atan2(-x), -t)];
    let Some(&(theta1, planar)) = branches
        .iter()
        .find(|(th, _)| lateral.contains(th.to_degrees()) || (th.to_degrees() - lateral.clamp(th.to_degrees())).abs() < 1e-9)
    else {
        return Err(Error::Unreachable(format!(
            "lateral angle {:.6}° outside [{}°, {}°]",
            y.atan2(x).to_degrees(),
            lateral.theta_min,
            lateral.theta_max
        )));
    };

    let k = coupling.ratio;
    let pip = &chain.rows[2];
    let dip = &chain.rows[3];
    let upper_deg = pip.theta_max.min(dip.theta_max / k);
    let lower = pip.theta_min.max(dip.theta_min / k).to_radians();
    let upper = upper_deg.to_radians();
    let rhs = (z * z + t * t - a2 * a2 - a3 * a3 - a4 * a4) / (2.0 * a2 * a3 * a4);
    let residual = |th: f64| reach_lhs(links, k, th) - rhs;
    let intervals = ((upper_deg - lower.to_degrees()) * 2.0).ceil().max(1.0) as usize;
    let theta3_roots = roots::bracketed_roots(residual, lower, upper, intervals, REACH_EQ_TOL, MAX_ITER);
    if theta3_roots.is_empty() {
        return Err(Error::Unreachable(format!(
            "no PIP angle in [{:.3}°, {:.3}°] reaches distance {dist:.6} mm",
            lower.to_degrees(),
            upper_deg
        )));
    }

    let mcp = &chain.rows[1];
    let mut best_err = f64::INFINITY;
    for theta3 in theta3_roots {
        let theta4 = k * theta3;
        let Some(theta2) = solve_theta2(links, theta3, theta4, planar, -z, mcp) else {
            continue;
        };
        let angles = JointAngles::from_radians(&[theta1, theta2, theta3, theta4]);
        let angles = JointAngles(
            chain
                .rows
                .iter()
                .zip(angles.iter())
                .map(|(row, &v)| row.clamp(v))
                .collect(),
        );
        let tip: FingertipPoint = chain_pose(chain, &angles.0).position.into();
        let err = tip.distance(target);
        if err <= IK_POSITION_TOL {
            return Ok(angles);
        }
        best_err = best_err.min(err);
    }
    Err(Error::Unreachable(format!(
        "no admissible MCP angle; best fingertip residual {best_err:.3e} mm"
    )))
}

/// MCP flexion that rotates the distal planar vector onto `(a_target, b_target)`.
fn solve_theta2(links: [f64; 3], theta3: f64, theta4: f64, a_target: f64, b_target: f64, mcp: &DHRow) -> Option<f64> {
    let [a2, a3, a4] = links;
    let p = a2 + a3 * theta3.cos() + a4 * (theta3 + theta4).cos();
    let q = a3 * theta3.sin() + a4 * (theta3 + theta4).sin();
    let lo = mcp.theta_min.to_radians();
    let hi = mcp.theta_max.to_radians();
    let slack = 1e-9_f64.to_radians();
    let wrap = |a: f64| (a + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;

    let seed = wrap(b_target.atan2(a_target) - q.atan2(p));
    let planar_x = |th: f64| p * th.cos() - q * th.sin() - a_target;
    let planar_dx = |th: f64| -(p * th.sin() + q * th.cos());
    let newton = if seed >= lo - slack && seed <= hi + slack {
        roots::newton(planar_x, planar_dx, seed.clamp(lo, hi), (lo - slack, hi + slack), 1e-12, 50)
            .filter(|th| (p * th.sin() + q * th.cos() - b_target).abs() < 1e-6)
    } else {
        None
    };
    let theta2 = newton.or_else(|| {
        let phase = q.atan2(p);
        let target_dir = b_target.atan2(a_target);
        roots::bisect(|th| wrap(th + phase - target_dir), lo, hi, 1e-15, MAX_ITER)
            .filter(|th| wrap(th + phase - target_dir).abs() < 1e-9)
    })?;
    (theta2 >= lo - slack && theta2 <= hi + slack).then(|| theta2.clamp(lo, hi))
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

/// Grid sweep over every joint except the coupled one, which follows its
/// driver. Nodes are ordered with the first free joint outermost. A
/// `grid_steps` below 2 is treated as 2.
pub fn sample_workspace(chain: &DHChain, coupling: &CouplingRule, grid_steps: usize) -> Vec<FingertipPoint> {
    let n = grid_steps.max(2);
    let free: Vec<usize> = (0..chain.len()).filter(|&i| i != coupling.driven_joint).collect();
    let total = n.pow(free.len() as u32);
    let axes: Vec<Vec<f64>> = free
        .iter()
        .map(|&i| linspace(chain.rows[i].theta_min, chain.rows[i].theta_max, n).collect())
        .collect();
    let driven = &chain.rows[coupling.driven_joint];
    (0..total)
        .map(|mut node| {
            let mut angles = vec![0.0; chain.len()];
            for (axis, &joint) in axes.iter().zip(&free).rev() {
                angles[joint] = axis[node % n];
                node /= n;
            }
            angles[coupling.driven_joint] = driven.clamp(coupling.ratio * angles[coupling.driver_joint]);
            chain_pose(chain, &angles).position.into()
        })
        .collect()
}

/// Seeded random in-limit configurations with the coupling applied and a
/// planar radius above `min_planar_radius` mm.
pub fn sample_coupled_configurations(
    chain: &DHChain,
    coupling: &CouplingRule,
    count: usize,
    min_planar_radius: f64,
    seed: u64,
) -> Vec<JointAngles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let driven = &chain.rows[coupling.driven_joint];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut angles: Vec<f64> = chain
            .rows
            .iter()
            .map(|r| rng.gen_range(r.theta_min..=r.theta_max))
            .collect();
        angles[coupling.driven_joint] = driven.clamp(coupling.ratio * angles[coupling.driver_joint]);
        let p = chain_pose(chain, &angles).position;
        if p.x.hypot(p.y) > min_planar_radius {
            out.push(JointAngles(angles));
        }
    }
    out
}

/// Position Jacobian `∂p/∂θ` (mm/rad) by central differences.
pub fn position_jacobian(chain: &DHChain, base: &Pose, angles_rad: &[f64], step: f64) -> DMatrix<f64> {
    let mut jac = DMatrix::zeros(3, angles_rad.len());
    let mut work = angles_rad.to_vec();
    let tip = |w: &[f64]| {
        let deg: Vec<f64> = w.iter().map(|r| r.to_degrees()).collect();
        base.compose(&chain_pose(chain, &deg)).position
    };
    for i in 0..angles_rad.len() {
        work[i] = angles_rad[i] + step;
        let plus = tip(&work);
        work[i] = angles_rad[i] - step;
        let minus = tip(&work);
        work[i] = angles_rad[i];
        jac.set_column(i, &((plus - minus) / (2.0 * step)));
    }
    jac
}

/// Result of [`reach_point`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReachResult {
    pub angles: JointAngles,
    pub tip: Vector3<f64>,
    /// Distance from the tip to the target, mm.
    pub residual: f64,
}

/// Numeric position IK for an arbitrary chain placed at `base`: damped least
/// squares with joint limits enforced by clamping, restarted from a fixed
/// seed set. Returns the best configuration found even when the target is
/// out of reach.
pub fn reach_point(chain: &DHChain, base: &Pose, target: &Vector3<f64>) -> ReachResult {
    let mut seeds: Vec<Vec<f64>> = vec![chain.rows.iter().map(DHRow::midpoint).collect()];
    for mask in 0..(1u32 << chain.len()) {
        seeds.push(
            chain
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let frac = if mask & (1 << i) != 0 { 0.8 } else { 0.2 };
                    r.theta_min + frac * (r.theta_max - r.theta_min)
                })
                .collect(),
        );
    }
    let lo: Vec<f64> = chain.rows.iter().map(|r| r.theta_min.to_radians()).collect();
    let hi: Vec<f64> = chain.rows.iter().map(|r| r.theta_max.to_radians()).collect();
    let tip_of = |rad: &[f64]| {
        let deg: Vec<f64> = rad.iter().map(|r| r.to_degrees()).collect();
        base.compose(&chain_pose(chain, &deg)).position
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for seed in seeds {
        let mut q: Vec<f64> = seed.iter().map(|d| d.to_radians()).collect();
        let mut err = (target - tip_of(&q)).norm();
        let mut damping = 1.0;
        for _ in 0..MAX_ITER {
            if err < 1e-10 {
                break;
            }
            let e = target - tip_of(&q);
            let jac = position_jacobian(chain, base, &q, 1e-6);
            let jjt = &jac * jac.transpose() + DMatrix::identity(3, 3) * (damping * damping);
            let Some(inv) = jjt.try_inverse() else { break };
            let e_dyn = DMatrix::from_column_slice(3, 1, e.as_slice());
            let dq = jac.transpose() * inv * e_dyn;
            let trial: Vec<f64> = q
                .iter()
                .zip(dq.iter())
                .enumerate()
                .map(|(i, (v, d))| (v + d).clamp(lo[i], hi[i]))
                .collect();
            let trial_err = (target - tip_of(&trial)).norm();
            if trial_err < err {
                let moved = trial.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                q = trial;
                err = trial_err;
                damping = (damping * 0.5).max(1e-3);
                if moved < 1e-14 {
                    break;
                }
            } else {
                damping *= 4.0;
                if damping > 1e6 {
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((q, err));
        }
    }
    let (q, residual) = best.expect("at least one seed");
    ReachResult {
        angles: JointAngles::from_radians(&q),
        tip: tip_of(&q),
        residual,
    }
}

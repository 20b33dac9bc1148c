//! Tendon length, moment arm and force transmission across a joint.
//!
//! At each crossing the tendon runs between two attachment points at chord
//! lengths `L1`, `L2` from the joint axis. The included angle is
//! `α = π − θ − atan(d2/R2) − atan(d1/R1)` and the law of cosines gives the
//! length `l = √(L1² + L2² − 2·L1·L2·cos α)` and the moment arm
//! `h = L1·L2·sin α / l`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hand_model::{DHChain, JointAngles};
use crate::kinematics::{position_jacobian, Pose};

/// Distal return spring torque, N·mm.
pub const DEFAULT_RETURN_SPRING_TORQUE: f64 = 5.0;

/// Central-difference step for the fingertip Jacobian, rad.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Condition number above which a configuration is flagged singular.
pub const SINGULAR_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointTendonGeometry {
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    pub d1: f64,
    pub d2: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
}

impl JointTendonGeometry {
    /// Uncalibrated starting geometry, mm.
    pub const TEMPLATE: JointTendonGeometry = JointTendonGeometry {
        l1: 12.0,
        l2: 12.0,
        d1: 2.0,
        d2: 2.0,
        r1: 6.0,
        r2: 6.0,
    };

    /// Included angle at the joint, radians, for joint angle `theta` in degrees.
    pub fn alpha(&self, theta: f64) -> f64 {
        PI - theta.to_radians() - (self.d2 / self.r2).atan() - (self.d1 / self.r1).atan()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            l1: self.l1 * factor,
            l2: self.l2 * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [self.l1, self.l2, self.d1, self.d2, self.r1, self.r2];
        if values.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::Validation(format!("tendon geometry values must be positive: {self:?}")))
        }
    }

    /// α stays inside (0, π) over the whole joint range. α is monotone in θ,
    /// so checking the endpoints suffices.
    pub fn validate_range(&self, theta_min: f64, theta_max: f64) -> Result<()> {
        self.validate()?;
        for theta in [theta_min, theta_max] {
            self.checked_alpha(theta)?;
        }
        Ok(())
    }

    fn checked_alpha(&self, theta: f64) -> Result<f64> {
        let alpha = self.alpha(theta);
        if alpha > 0.0 && alpha < PI && theta.is_finite() {
            Ok(alpha)
        } else {
            Err(Error::InvalidGeometry {
                theta,
                reason: format!("included angle {:.4}° outside (0°, 180°)", alpha.to_degrees()),
            })
        }
    }
}

/// Tendon length across one joint, mm.
pub fn tendon_length(geom: &JointTendonGeometry, theta: f64) -> Result<f64> {
    let alpha = geom.checked_alpha(theta)?;
    let (l1, l2) = (geom.l1, geom.l2);
    Ok((l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * alpha.cos()).sqrt())
}

/// Perpendicular distance from the joint axis to the tendon, mm.
pub fn moment_arm(geom: &JointTendonGeometry, theta: f64) -> Result<f64> {
    let alpha = geom.checked_alpha(theta)?;
    let l = tendon_length(geom, theta)?;
    Ok(geom.l1 * geom.l2 * alpha.sin() / l)
}

/// `l(from) − l(to)`: positive when the tendon shortens.
pub fn excursion(geom: &JointTendonGeometry, theta_from: f64, theta_to: f64) -> Result<f64> {
    Ok(tendon_length(geom, theta_from)? - tendon_length(geom, theta_to)?)
}

/// Joint torque produced by `tension` (N), N·mm.
pub fn joint_torque(geom: &JointTendonGeometry, theta: f64, tension: f64) -> Result<f64> {
    if !(tension >= 0.0) {
        return Err(Error::NegativeTension(tension));
    }
    Ok(tension * moment_arm(geom, theta)?)
}

/// Scales `L1` and `L2` of `template` by a common factor so that the
/// excursion over `theta_range` equals `target_excursion`. The excursion is
/// linear in the factor, so the scale is `target / template_excursion`.
pub fn calibrate_geometry(
    target_excursion: f64,
    theta_range: (f64, f64),
    template: JointTendonGeometry,
) -> Result<JointTendonGeometry> {
    if !(target_excursion > 0.0) || !target_excursion.is_finite() {
        return Err(Error::Calibration(format!("target excursion must be positive, got {target_excursion}")));
    }
    let (lo, hi) = theta_range;
    template
        .validate_range(lo, hi)
        .map_err(|e| Error::Calibration(format!("template invalid over range: {e}")))?;
    let base = excursion(&template, lo, hi)?;
    if !(base > 0.0) {
        return Err(Error::Calibration(format!(
            "template excursion over {lo}°..{hi}° is {base} mm; no positive scale reaches {target_excursion} mm"
        )));
    }
    Ok(template.scaled(target_excursion / base))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TendonKind {
    Flexor,
    Extensor,
    Lateral,
}

/// One joint crossed by a tendon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub joint: usize,
    pub geometry: JointTendonGeometry,
    /// +1 when the tendon shortens as the joint angle grows, −1 mirrored.
    pub sign: i8,
    /// Fraction of tension passed through this crossing (hole/tube friction).
    #[serde(default = "unit_efficiency")]
    pub efficiency: f64,
}

fn unit_efficiency() -> f64 {
    1.0
}

impl Crossing {
    pub fn new(joint: usize, geometry: JointTendonGeometry, sign: i8) -> Self {
        Self {
            joint,
            geometry,
            sign,
            efficiency: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TendonMaterial {
    pub description: String,
    pub diameter_mm: f64,
    pub nominal_strength_kgf: f64,
}

impl Default for TendonMaterial {
    fn default() -> Self {
        Self {
            description: "12-braid fishing line".into(),
            diameter_mm: 0.55,
            nominal_strength_kgf: 40.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TendonRoute {
    pub name: String,
    pub kind: TendonKind,
    pub finger: String,
    /// Proximal to distal.
    pub crossings: Vec<Crossing>,
    pub actuator: String,
    #[serde(default)]
    pub material: TendonMaterial,
}

impl TendonRoute {
    pub fn crosses(&self, joint: usize) -> bool {
        self.crossings.iter().any(|c| c.joint == joint)
    }

    pub fn validate(&self, chain: &DHChain) -> Result<()> {
        let mut seen = Vec::new();
        for crossing in &self.crossings {
            let row = chain.rows.get(crossing.joint).ok_or_else(|| {
                Error::Validation(format!("route {}: joint {} not in chain", self.name, crossing.joint))
            })?;
            if seen.contains(&crossing.joint) {
                return Err(Error::Validation(format!(
                    "route {}: joint {} crossed twice",
                    self.name, crossing.joint
                )));
            }
            seen.push(crossing.joint);
            if crossing.sign != 1 && crossing.sign != -1 {
                return Err(Error::Validation(format!("route {}: crossing sign must be ±1", self.name)));
            }
            if !(crossing.efficiency > 0.0 && crossing.efficiency <= 1.0) {
                return Err(Error::Validation(format!(
                    "route {}: crossing efficiency must be in (0, 1]",
                    self.name
                )));
            }
            crossing
                .geometry
                .validate_range(row.theta_min, row.theta_max)
                .map_err(|e| Error::Validation(format!("route {} joint {}: {e}", self.name, row.joint)))?;
        }
        if !(self.material.diameter_mm > 0.0 && self.material.nominal_strength_kgf > 0.0) {
            return Err(Error::Validation(format!("route {}: invalid tendon material", self.name)));
        }
        Ok(())
    }
}

/// A long finger carries 3 flexor, 2 extensor and 2 lateral routes, the
/// lateral pair pulling with opposite signs on the abduction joint.
pub fn check_universal_route_census<'a>(finger: &str, routes: impl Iterator<Item = &'a TendonRoute>) -> Result<()> {
    let routes: Vec<&TendonRoute> = routes.collect();
    let count = |kind| routes.iter().filter(|r| r.kind == kind).count();
    let counts = (
        count(TendonKind::Flexor),
        count(TendonKind::Extensor),
        count(TendonKind::Lateral),
    );
    if counts != (3, 2, 2) {
        return Err(Error::Validation(format!(
            "{finger}: expected 3 flexor, 2 extensor, 2 lateral routes, found {}/{}/{}",
            counts.0, counts.1, counts.2
        )));
    }
    let lateral_signs: Vec<i8> = routes
        .iter()
        .filter(|r| r.kind == TendonKind::Lateral)
        .map(|r| match r.crossings.as_slice() {
            [c] if c.joint == 0 => c.sign,
            _ => 0,
        })
        .collect();
    if lateral_signs[0] == 0 || lateral_signs[0] != -lateral_signs[1] {
        return Err(Error::Validation(format!(
            "{finger}: lateral routes must cross only the abduction joint with opposite signs"
        )));
    }
    Ok(())
}

/// Signed total excursion of a route between two postures of its finger.
pub fn route_excursion(route: &TendonRoute, from: &JointAngles, to: &JointAngles) -> Result<f64> {
    route.crossings.iter().try_fold(0.0, |acc, crossing| {
        let (Some(&a), Some(&b)) = (from.0.get(crossing.joint), to.0.get(crossing.joint)) else {
            return Err(Error::ArityMismatch {
                expected: crossing.joint + 1,
                got: from.len().min(to.len()),
            });
        };
        let e = excursion(&crossing.geometry, a, b).map_err(|e| match e {
            Error::InvalidGeometry { theta, reason } => Error::InvalidGeometry {
                theta,
                reason: format!("route {} joint {}: {reason}", route.name, crossing.joint),
            },
            other => other,
        })?;
        Ok(acc + f64::from(crossing.sign) * e)
    })
}

/// Torque contributed by `tension` at every joint of the finger, N·mm. Tension
/// is attenuated by each crossing's efficiency from the proximal end on.
pub fn route_joint_torques(route: &TendonRoute, angles: &JointAngles, tension: f64) -> Result<Vec<f64>> {
    if !(tension >= 0.0) {
        return Err(Error::NegativeTension(tension));
    }
    let mut torques = vec![0.0; angles.len()];
    let mut carried = tension;
    for crossing in &route.crossings {
        let theta = *angles.0.get(crossing.joint).ok_or(Error::ArityMismatch {
            expected: crossing.joint + 1,
            got: angles.len(),
        })?;
        carried *= crossing.efficiency;
        torques[crossing.joint] += f64::from(crossing.sign) * joint_torque(&crossing.geometry, theta, carried)?;
    }
    Ok(torques)
}

/// Static fingertip force estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceEstimate {
    /// Fingertip force in the finger's frame 0, N.
    pub force: Vector3<f64>,
    /// `|Jᵀ·F − τ|`, N·mm.
    pub residual: f64,
    /// `σ_max / σ_min` of the Jacobian; infinite when rank deficient.
    pub condition_number: f64,
    pub rank: usize,
    pub singular: bool,
}

/// Least-squares solution of `Jᵀ·F = τ` for the fingertip force.
///
/// `J` is the central-difference position Jacobian (mm/rad). Singular
/// directions (σ below `1e-8·σ_max`) are dropped from the solve and the
/// estimate is flagged `singular` whenever the condition number exceeds
/// [`SINGULAR_CONDITION`].
pub fn fingertip_force(chain: &DHChain, angles: &JointAngles, joint_torques: &[f64]) -> Result<ForceEstimate> {
    chain.check_limits(angles)?;
    if joint_torques.len() != chain.len() {
        return Err(Error::ArityMismatch {
            expected: chain.len(),
            got: joint_torques.len(),
        });
    }
    if joint_torques.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("joint torques must be finite".into()));
    }
    let jac = position_jacobian(chain, &Pose::identity(), &angles.radians(), JACOBIAN_STEP);
    let jt = jac.transpose();
    let svd = jt.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    if !(sigma_max > 0.0) {
        return Err(Error::Singular("fingertip Jacobian vanishes".into()));
    }
    let cutoff = sigma_max * 1e-8;
    let rank = svd.singular_values.iter().filter(|s| **s > cutoff).count();
    let sigma_min = svd.singular_values.min();
    let condition_number = if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY };
    let tau = DVector::from_column_slice(joint_torques);
    let solution: DMatrix<f64> = svd
        .solve(&DMatrix::from_column_slice(tau.len(), 1, tau.as_slice()), cutoff)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let force = Vector3::new(solution[0], solution[1], solution[2]);
    let residual = (jt * DVector::from_column_slice(force.as_slice()) - tau).norm();
    Ok(ForceEstimate {
        force,
        residual,
        condition_number,
        rank,
        singular: condition_number > SINGULAR_CONDITION,
    })
}

/// One row of a tendon profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub theta: f64,
    pub length: f64,
    pub moment_arm: f64,
}

/// Length and moment arm from `theta_min` to `theta_max` in `step` degree
/// increments; the last row is always `theta_max`.
pub fn tendon_profile(geom: &JointTendonGeometry, theta_min: f64, theta_max: f64, step: f64) -> Result<Vec<ProfileRow>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("profile step must be positive, got {step}")));
    }
    let mut thetas = Vec::new();
    let mut i = 0u64;
    loop {
        let theta = theta_min + step * i as f64;
        if theta >= theta_max - 1e-9 {
            break;
        }
        thetas.push(theta);
        i += 1;
    }
    thetas.push(theta_max);
    thetas
        .into_iter()
        .map(|theta| {
            Ok(ProfileRow {
                theta,
                length: tendon_length(geom, theta)?,
                moment_arm: moment_arm(geom, theta)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand_model::{universal_chain, INDEX};

    const G: JointTendonGeometry = JointTendonGeometry::TEMPLATE;

    fn offset_deg(g: &JointTendonGeometry) -> f64 {
        ((g.d2 / g.r2).atan() + (g.d1 / g.r1).atan()).to_degrees()
    }

    fn calibrated() -> JointTendonGeometry {
        calibrate_geometry(16.86, (0.0, 110.0), G).unwrap()
    }

    #[test]
    fn right_angle_length_and_arm() {
        // α = π/2 when θ = 90° − offset
        let theta = 90.0 - offset_deg(&G);
        let l = tendon_length(&G, theta).unwrap();
        assert!((l - (144.0f64 + 144.0).sqrt()).abs() < 1e-12);
        let h = moment_arm(&G, theta).unwrap();
        assert!((h - 144.0 / 288f64.sqrt()).abs() < 1e-12);
        let t = joint_torque(&G, theta, 400.0).unwrap();
        assert!((t - 400.0 * 144.0 / 288f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn collinear_limit() {
        // α → π as θ → −offset
        let theta = -offset_deg(&G) + 1e-7;
        let l = tendon_length(&G, theta).unwrap();
        assert!((l - 24.0).abs() < 1e-9);
        assert!(moment_arm(&G, theta).unwrap() < 1e-6);
        assert!(matches!(
            tendon_length(&G, -offset_deg(&G) - 1.0),
            Err(Error::InvalidGeometry { .. })
        ));
        assert!(tendon_length(&G, 180.0).is_err());
    }

    #[test]
    fn calibrated_excursion_anchor() {
        let g = calibrated();
        let e = excursion(&g, 0.0, 110.0).unwrap();
        assert!((e - 16.86).abs() < 1e-9);
        assert!((tendon_length(&g, 0.0).unwrap() - tendon_length(&g, 110.0).unwrap() - 16.86).abs() < 0.05);
    }

    #[test]
    fn calibration_fixed_point_and_homogeneity() {
        let own = excursion(&G, 0.0, 110.0).unwrap();
        assert_eq!(calibrate_geometry(own, (0.0, 110.0), G).unwrap(), G);
        let g1 = calibrate_geometry(16.86, (0.0, 110.0), G).unwrap();
        let g2 = calibrate_geometry(2.0 * 16.86, (0.0, 110.0), G).unwrap();
        assert_eq!(g2.l1, 2.0 * g1.l1);
        assert_eq!(g2.l2, 2.0 * g1.l2);
        assert_eq!((g2.d1, g2.r2), (g1.d1, g1.r2));
    }

    #[test]
    fn calibration_oracle_bisection() {
        // independent route: bisect the scale directly
        let f = |s: f64| excursion(&G.scaled(s), 0.0, 110.0).unwrap() - 16.86;
        let (mut lo, mut hi) = (0.1, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let g = calibrated();
        assert!((g.l1 / G.l1 - lo).abs() < 1e-12);
    }

    #[test]
    fn calibration_errors() {
        assert!(calibrate_geometry(0.0, (0.0, 110.0), G).is_err());
        assert!(calibrate_geometry(-1.0, (0.0, 110.0), G).is_err());
        assert!(calibrate_geometry(10.0, (110.0, 0.0), G).is_err());
        assert!(calibrate_geometry(10.0, (0.0, 170.0), G).is_err());
    }

    #[test]
    fn moment_arm_monotone_on_calibrated() {
        let g = calibrated();
        let h: Vec<f64> = (0..=90).map(|d| moment_arm(&g, d as f64).unwrap()).collect();
        assert!(h.windows(2).all(|w| w[1] > w[0]));
        let t0 = joint_torque(&g, 0.0, 100.0).unwrap();
        let t90 = joint_torque(&g, 90.0, 100.0).unwrap();
        assert!(t90 > t0);
    }

    #[test]
    fn excursion_identities() {
        let g = calibrated();
        assert_eq!(excursion(&g, 33.0, 33.0).unwrap(), 0.0);
        let sum = excursion(&g, 0.0, 55.0).unwrap() + excursion(&g, 55.0, 110.0).unwrap();
        assert!((sum - excursion(&g, 0.0, 110.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn torque_errors_and_linearity() {
        let g = calibrated();
        assert_eq!(joint_torque(&g, 10.0, 0.0).unwrap(), 0.0);
        assert_eq!(joint_torque(&g, 10.0, -1.0), Err(Error::NegativeTension(-1.0)));
        let t = joint_torque(&g, 40.0, 3.0).unwrap();
        assert_eq!(joint_torque(&g, 40.0, 6.0).unwrap(), 2.0 * t);
    }

    fn route(crossings: Vec<Crossing>, kind: TendonKind) -> TendonRoute {
        TendonRoute {
            name: "r".into(),
            kind,
            finger: INDEX.into(),
            crossings,
            actuator: "a".into(),
            material: TendonMaterial::default(),
        }
    }

    #[test]
    fn single_crossing_route_equals_excursion() {
        let g = calibrated();
        let r = route(vec![Crossing::new(2, g, 1)], TendonKind::Flexor);
        let from = JointAngles::from([0.0; 4]);
        let to = JointAngles::from([0.0, 0.0, 110.0, 0.0]);
        assert_eq!(route_excursion(&r, &from, &to).unwrap(), excursion(&g, 0.0, 110.0).unwrap());
    }

    #[test]
    fn lateral_pair_is_antagonistic() {
        let g = calibrated();
        let radial = route(vec![Crossing::new(0, g, 1)], TendonKind::Lateral);
        let ulnar = route(vec![Crossing::new(0, g, -1)], TendonKind::Lateral);
        let from = JointAngles::from([-10.0, 0.0, 0.0, 0.0]);
        let to = JointAngles::from([10.0, 0.0, 0.0, 0.0]);
        let er = route_excursion(&radial, &from, &to).unwrap();
        let eu = route_excursion(&ulnar, &from, &to).unwrap();
        // oracle: the ulnar tendon sees the mirrored joint angle
        let mirrored = tendon_length(&g, 10.0).unwrap() - tendon_length(&g, -10.0).unwrap();
        assert!(er > 0.0);
        assert!((eu - mirrored).abs() < 1e-12);
        assert!((er + eu).abs() < 1e-12);
    }

    #[test]
    fn flexor_route_matches_per_joint_sum() {
        let g = calibrated();
        let r = route(
            vec![Crossing::new(1, g, 1), Crossing::new(2, g, 1), Crossing::new(3, g, 1)],
            TendonKind::Flexor,
        );
        let from = JointAngles::from([0.0; 4]);
        let to = JointAngles::from([0.0, 90.0, 110.0, 90.0]);
        let oracle: f64 = [(90.0, 1), (110.0, 2), (90.0, 3)]
            .iter()
            .map(|&(th, _)| {
                let l = |t: f64| {
                    let a = g.alpha(t);
                    (g.l1 * g.l1 + g.l2 * g.l2 - 2.0 * g.l1 * g.l2 * a.cos()).sqrt()
                };
                l(0.0) - l(th)
            })
            .sum();
        assert!((route_excursion(&r, &from, &to).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn route_geometry_error_names_joint() {
        let g = calibrated();
        let r = route(vec![Crossing::new(2, g, 1)], TendonKind::Flexor);
        let err = route_excursion(&r, &JointAngles::from([0.0; 4]), &JointAngles::from([0.0, 0.0, 170.0, 0.0]))
            .unwrap_err();
        assert!(err.to_string().contains("joint 2"), "{err}");
    }

    #[test]
    fn friction_attenuates_distal_torque() {
        let g = calibrated();
        let mut crossings = vec![Crossing::new(1, g, 1), Crossing::new(2, g, 1)];
        crossings[0].efficiency = 0.9;
        crossings[1].efficiency = 0.8;
        let r = route(crossings, TendonKind::Flexor);
        let angles = JointAngles::from([0.0, 30.0, 30.0, 0.0]);
        let tau = route_joint_torques(&r, &angles, 10.0).unwrap();
        let h = moment_arm(&g, 30.0).unwrap();
        assert!((tau[1] - 9.0 * h).abs() < 1e-12);
        assert!((tau[2] - 7.2 * h).abs() < 1e-12);
        assert_eq!((tau[0], tau[3]), (0.0, 0.0));
    }

    #[test]
    fn zero_torque_gives_zero_force() {
        let chain = universal_chain(INDEX, 47.0);
        let est = fingertip_force(&chain, &JointAngles::from([5.0, 30.0, 40.0, 20.0]), &[0.0; 4]).unwrap();
        assert_eq!(est.force.norm(), 0.0);
    }

    #[test]
    fn straight_finger_lever() {
        let chain = universal_chain(INDEX, 47.0);
        let angles = JointAngles::from([0.0; 4]);
        // torques a downward tip load f would demand: the MCP sees f · 99.5
        let f = 2.0;
        let tau = [0.0, 99.5 * f, 52.5 * f, 23.5 * f];
        let est = fingertip_force(&chain, &angles, &tau).unwrap();
        assert!(est.singular);
        assert_eq!(est.rank, 2);
        assert!((est.force.norm() - tau[1] / 99.5).abs() < 1e-6, "{est:?}");
        assert!(est.residual < 1e-6);
        // MCP torque alone: least squares spreads it over the three flexion rows
        let est = fingertip_force(&chain, &angles, &[0.0, 100.0, 0.0, 0.0]).unwrap();
        let expected = 100.0 * 99.5 / (99.5f64.powi(2) + 52.5f64.powi(2) + 23.5f64.powi(2));
        assert!((est.force.norm() - expected).abs() < 1e-6, "{est:?}");
        assert!(est.residual > 1.0);
    }

    #[test]
    fn profile_rows() {
        let g = calibrated();
        let rows = tendon_profile(&g, 0.0, 110.0, 1.0).unwrap();
        assert_eq!(rows.len(), 111);
        assert_eq!(rows.last().unwrap().theta, 110.0);
        assert!((rows[0].length - rows[110].length - 16.86).abs() < 0.05);
        assert_eq!(tendon_profile(&g, 0.0, 110.0, 500.0).unwrap().len(), 2);
        assert!(tendon_profile(&g, 0.0, 110.0, 0.0).is_err());
        assert_eq!(tendon_profile(&g, 0.0, 110.0, 0.3).unwrap().last().unwrap().theta, 110.0);
    }
}

//! Structural description of the hand: kinematic chains, joint limits,
//! coupling rules, tendon routing and actuator allocation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::actuation::{ActuatorAllocation, ActuatorKind, MotorModuleSpec, SmaModuleSpec};
use crate::error::{Error, Result};
use crate::tendon::{self, Crossing, JointTendonGeometry, TendonKind, TendonMaterial, TendonRoute};

pub const SPEC_VERSION: &str = "1.0";

pub const THUMB: &str = "thumb";
pub const INDEX: &str = "index";
pub const MIDDLE: &str = "middle";
pub const RING: &str = "ring";
pub const LITTLE: &str = "little";

/// Digits in radial-to-ulnar order.
pub const FINGER_NAMES: [&str; 5] = [THUMB, INDEX, MIDDLE, RING, LITTLE];

/// The four long fingers that share the MCP/PIP/DIP chain layout.
pub const UNIVERSAL_FINGERS: [&str; 4] = [INDEX, MIDDLE, RING, LITTLE];

/// Default DIP/PIP coupling ratio.
pub const DIP_PIP_RATIO: f64 = 2.0 / 3.0;

pub const UNIVERSAL_LINKS_MM: [f64; 3] = [47.0, 29.0, 23.5];
pub const LITTLE_PROXIMAL_MM: f64 = 38.0;
pub const THUMB_LINKS_MM: [f64; 4] = [0.0, 40.0, 32.0, 25.0];

/// Tendon excursion of the proximal-joint flexor over 0°..110°.
pub const PROXIMAL_FLEXOR_EXCURSION_MM: f64 = 16.86;

pub const TOTAL_DOF: u32 = 21;

/// One row of a modified Denavit-Hartenberg table. Angles in degrees, lengths
/// in millimetres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DHRow {
    pub joint: String,
    pub alpha_prev: f64,
    pub a: f64,
    pub d: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl DHRow {
    pub fn new(joint: &str, alpha_prev: f64, a: f64, d: f64, theta_min: f64, theta_max: f64) -> Self {
        Self {
            joint: joint.to_string(),
            alpha_prev,
            a,
            d,
            theta_min,
            theta_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha_prev, self.a, self.d, self.theta_min, self.theta_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("joint {}: non-finite D-H parameter", self.joint)));
        }
        if self.theta_min > self.theta_max {
            return Err(Error::Validation(format!(
                "joint {}: theta_min {} > theta_max {}",
                self.joint, self.theta_min, self.theta_max
            )));
        }
        if self.a < 0.0 {
            return Err(Error::Validation(format!("joint {}: link length a = {} < 0", self.joint, self.a)));
        }
        Ok(())
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.theta_min && theta <= self.theta_max
    }

    pub fn clamp(&self, theta: f64) -> f64 {
        theta.clamp(self.theta_min, self.theta_max)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.theta_min + self.theta_max)
    }
}

/// Ordered D-H rows for one digit, base to tip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DHChain {
    pub name: String,
    pub rows: Vec<DHRow>,
}

impl DHChain {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sum of the link lengths, the radius of the reach sphere.
    pub fn reach(&self) -> f64 {
        self.rows.iter().map(|r| r.a).sum()
    }

    pub fn joint_index(&self, joint: &str) -> Result<usize> {
        self.rows
            .iter()
            .position(|r| r.joint.eq_ignore_ascii_case(joint))
            .ok_or_else(|| Error::UnknownJoint(format!("{}/{}", self.name, joint)))
    }

    pub fn check_arity(&self, angles: &JointAngles) -> Result<()> {
        if angles.len() != self.rows.len() {
            return Err(Error::ArityMismatch {
                expected: self.rows.len(),
                got: angles.len(),
            });
        }
        Ok(())
    }

    /// Rejects any angle outside its row's range.
    pub fn check_limits(&self, angles: &JointAngles) -> Result<()> {
        self.check_arity(angles)?;
        for (row, &value) in self.rows.iter().zip(angles.iter()) {
            if !value.is_finite() || !row.contains(value) {
                return Err(Error::OutOfLimits {
                    joint: format!("{} {}", self.name, row.joint),
                    value,
                    min: row.theta_min,
                    max: row.theta_max,
                });
            }
        }
        Ok(())
    }

    pub fn zero_angles(&self) -> JointAngles {
        JointAngles(vec![0.0; self.rows.len()])
    }

    pub fn max_angles(&self) -> JointAngles {
        JointAngles(self.rows.iter().map(|r| r.theta_max).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Validation(format!("chain {} has no rows", self.name)));
        }
        self.rows.iter().try_for_each(DHRow::validate)
    }
}

/// Index/middle/ring/little layout: MCP abduction, MCP flexion, PIP, DIP.
pub fn universal_chain(name: &str, proximal_length: f64) -> DHChain {
    let [_, middle, distal] = UNIVERSAL_LINKS_MM;
    DHChain {
        name: name.to_string(),
        rows: vec![
            DHRow::new("MCP-abduction", 0.0, 0.0, 0.0, -15.0, 15.0),
            DHRow::new("MCP", 90.0, proximal_length, 0.0, 0.0, 90.0),
            DHRow::new("PIP", 0.0, middle, 0.0, 0.0, 110.0),
            DHRow::new("DIP", 0.0, distal, 0.0, 0.0, 90.0),
        ],
    }
}

/// Thumb: CMC split into abduction and flexion segments, then MCP and IP.
pub fn thumb_chain(links: [f64; 4]) -> DHChain {
    DHChain {
        name: THUMB.to_string(),
        rows: vec![
            DHRow::new("CMC-abduction", 0.0, links[0], 0.0, 0.0, 53.0),
            DHRow::new("CMC-flexion", 90.0, links[1], 0.0, 0.0, 107.0),
            DHRow::new("MCP", 0.0, links[2], 0.0, 0.0, 90.0),
            DHRow::new("IP", 0.0, links[3], 0.0, 0.0, 90.0),
        ],
    }
}

/// `θ_driven = ratio · θ_driver` within one digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingRule {
    pub finger: String,
    pub driver_joint: usize,
    pub driven_joint: usize,
    pub ratio: f64,
}

impl CouplingRule {
    pub fn dip_pip(finger: &str) -> Self {
        Self {
            finger: finger.to_string(),
            driver_joint: 2,
            driven_joint: 3,
            ratio: DIP_PIP_RATIO,
        }
    }
}

/// Joint angles in degrees, one per chain row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JointAngles(pub Vec<f64>);

impl JointAngles {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Self(values.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn radians(&self) -> Vec<f64> {
        self.0.iter().map(|d| d.to_radians()).collect()
    }

    pub fn from_radians(values: &[f64]) -> Self {
        Self(values.iter().map(|r| r.to_degrees()).collect())
    }
}

impl std::ops::Index<usize> for JointAngles {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for JointAngles {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<[f64; 4]> for JointAngles {
    fn from(values: [f64; 4]) -> Self {
        Self(values.to_vec())
    }
}

/// Placement of a digit's frame 0 in the hand frame (x distal, y radial,
/// z dorsal). Rotation is roll-pitch-yaw in degrees, applied as Rz·Ry·Rx.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFrame {
    pub translation: [f64; 3],
    pub rpy_deg: [f64; 3],
}

impl BaseFrame {
    pub fn at(x: f64, y: f64, z: f64) -> Self {
        Self {
            translation: [x, y, z],
            rpy_deg: [0.0; 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finger {
    pub chain: DHChain,
    pub base: BaseFrame,
    /// Degrees of freedom carried by the digit but not modelled as chain rows.
    #[serde(default)]
    pub extra_dofs: u32,
    /// Restoring torque of the distal return spring, N·mm.
    pub return_spring_torque: f64,
}

impl Finger {
    pub fn dof(&self) -> u32 {
        self.chain.len() as u32 + self.extra_dofs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub version: String,
    #[serde(default)]
    pub assumed_defaults: Vec<String>,
    #[serde(default)]
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Actuators {
    pub motor: MotorModuleSpec,
    pub sma: SmaModuleSpec,
    pub allocation: ActuatorAllocation,
}

/// Full hand description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandSpec {
    pub meta: Meta,
    pub fingers: BTreeMap<String, Finger>,
    pub couplings: Vec<CouplingRule>,
    pub tendon_routes: Vec<TendonRoute>,
    pub actuators: Actuators,
}

impl HandSpec {
    pub fn finger(&self, name: &str) -> Result<&Finger> {
        self.fingers.get(name).ok_or_else(|| Error::UnknownFinger(name.to_string()))
    }

    pub fn chain(&self, name: &str) -> Result<&DHChain> {
        self.finger(name).map(|f| &f.chain)
    }

    pub fn thumb_chain(&self) -> Result<&DHChain> {
        self.chain(THUMB)
    }

    pub fn coupling(&self, finger: &str) -> Option<&CouplingRule> {
        self.couplings.iter().find(|c| c.finger == finger)
    }

    pub fn route(&self, name: &str) -> Result<&TendonRoute> {
        self.tendon_routes
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRoute(name.to_string()))
    }

    pub fn routes_for<'a>(&'a self, finger: &'a str) -> impl Iterator<Item = &'a TendonRoute> + 'a {
        self.tendon_routes.iter().filter(move |r| r.finger == finger)
    }

    pub fn total_dof(&self) -> u32 {
        self.fingers.values().map(Finger::dof).sum()
    }

    /// Checks every structural invariant; the error names the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.fingers.len() != FINGER_NAMES.len() {
            return Err(Error::Validation(format!(
                "expected 5 fingers, found {}",
                self.fingers.len()
            )));
        }
        for name in FINGER_NAMES {
            let finger = self
                .fingers
                .get(name)
                .ok_or_else(|| Error::Validation(format!("expected 5 fingers, missing `{name}`")))?;
            finger.chain.validate()?;
            if !finger.return_spring_torque.is_finite() || finger.return_spring_torque < 0.0 {
                return Err(Error::Validation(format!("{name}: return spring torque must be >= 0")));
            }
            if finger.base.translation.iter().chain(&finger.base.rpy_deg).any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("{name}: non-finite base frame")));
            }
        }
        for name in UNIVERSAL_FINGERS {
            let rows = &self.fingers[name].chain.rows;
            if rows.len() != 4 {
                return Err(Error::Validation(format!("{name}: expected 4 chain rows, found {}", rows.len())));
            }
        }
        let index_rows = &self.fingers[INDEX].chain.rows;
        for name in [MIDDLE, RING] {
            if &self.fingers[name].chain.rows != index_rows {
                return Err(Error::Validation(format!("{name}: chain must match the index finger chain")));
            }
        }
        let thumb = &self.fingers[THUMB].chain;
        if thumb.rows.len() != 4 {
            return Err(Error::Validation(format!("thumb: expected 4 chain rows, found {}", thumb.rows.len())));
        }
        for (row, (lo, hi)) in thumb.rows.iter().take(2).zip([(0.0, 53.0), (0.0, 107.0)]) {
            if row.theta_min != lo || row.theta_max != hi {
                return Err(Error::Validation(format!(
                    "thumb {}: range must be {lo}..{hi} degrees",
                    row.joint
                )));
            }
        }
        let dof = self.total_dof();
        if dof != TOTAL_DOF {
            return Err(Error::Validation(format!("expected {TOTAL_DOF} DOFs, found {dof}")));
        }
        for rule in &self.couplings {
            let chain = &self.finger(&rule.finger).map_err(|_| {
                Error::Validation(format!("coupling references unknown finger `{}`", rule.finger))
            })?.chain;
            if rule.driver_joint == rule.driven_joint {
                return Err(Error::Validation(format!("{}: coupling driver equals driven joint", rule.finger)));
            }
            if rule.driver_joint >= chain.len() || rule.driven_joint >= chain.len() {
                return Err(Error::Validation(format!("{}: coupling joint index out of range", rule.finger)));
            }
            if !rule.ratio.is_finite() || rule.ratio <= 0.0 {
                return Err(Error::Validation(format!("{}: coupling ratio must be positive", rule.finger)));
            }
        }
        for route in &self.tendon_routes {
            let finger = self.finger(&route.finger).map_err(|_| {
                Error::Validation(format!("route {} references unknown finger `{}`", route.name, route.finger))
            })?;
            route.validate(&finger.chain)?;
        }
        let mut names: Vec<&str> = self.tendon_routes.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("duplicate tendon route `{}`", w[0])));
        }
        for name in UNIVERSAL_FINGERS {
            tendon::check_universal_route_census(name, self.routes_for(name))?;
        }
        self.actuators.motor.validate()?;
        self.actuators.sma.validate()?;
        self.actuators.allocation.validate(&self.tendon_routes)?;
        Ok(())
    }
}

/// Serializes to the JSON spec-file format.
pub fn save_spec(spec: &HandSpec) -> String {
    let mut text = serde_json::to_string_pretty(spec).expect("hand spec serializes");
    text.push('\n');
    text
}

/// Parses and validates a JSON spec file.
pub fn load_spec(document: &str) -> Result<HandSpec> {
    let spec: HandSpec = serde_json::from_str(document)?;
    spec.validate()?;
    Ok(spec)
}

/// Clamps every angle into its row's range.
pub fn clamp_to_limits(chain: &DHChain, angles: &JointAngles) -> Result<JointAngles> {
    chain.check_arity(angles)?;
    Ok(JointAngles(
        chain.rows.iter().zip(angles.iter()).map(|(row, &v)| row.clamp(v)).collect(),
    ))
}

fn universal_routes(finger: &str, geometry: JointTendonGeometry) -> Vec<TendonRoute> {
    let route = |suffix: &str, kind: TendonKind, crossings: &[(usize, i8)], actuator: String| TendonRoute {
        name: format!("{finger}-{suffix}"),
        kind,
        finger: finger.to_string(),
        crossings: crossings
            .iter()
            .map(|&(joint, sign)| Crossing::new(joint, geometry, sign))
            .collect(),
        actuator,
        material: TendonMaterial::default(),
    };
    let motor = |n: &str| format!("{finger}-motor-{n}");
    let sma = |n: &str| format!("{finger}-sma-{n}");
    vec![
        route("flexor-proximal", TendonKind::Flexor, &[(1, 1)], motor("proximal")),
        route("flexor-middle", TendonKind::Flexor, &[(1, 1), (2, 1)], motor("middle")),
        route("flexor-distal", TendonKind::Flexor, &[(1, 1), (2, 1), (3, 1)], motor("distal")),
        route("extensor-proximal", TendonKind::Extensor, &[(1, -1)], sma("extensor-proximal")),
        route("extensor-middle", TendonKind::Extensor, &[(1, -1), (2, -1)], sma("extensor-middle")),
        route("lateral-radial", TendonKind::Lateral, &[(0, 1)], sma("lateral")),
        route("lateral-ulnar", TendonKind::Lateral, &[(0, -1)], sma("lateral")),
    ]
}

fn thumb_routes(geometry: JointTendonGeometry) -> Vec<TendonRoute> {
    let route = |suffix: &str, kind: TendonKind, crossings: &[(usize, i8)], actuator: &str| TendonRoute {
        name: format!("{THUMB}-{suffix}"),
        kind,
        finger: THUMB.to_string(),
        crossings: crossings
            .iter()
            .map(|&(joint, sign)| Crossing::new(joint, geometry, sign))
            .collect(),
        actuator: format!("{THUMB}-{actuator}"),
        material: TendonMaterial::default(),
    };
    vec![
        route("flexor-cmc", TendonKind::Flexor, &[(1, 1)], "motor-cmc"),
        route("flexor-mcp", TendonKind::Flexor, &[(1, 1), (2, 1)], "motor-mcp"),
        route("flexor-ip", TendonKind::Flexor, &[(1, 1), (2, 1), (3, 1)], "motor-ip"),
        route("extensor-cmc", TendonKind::Extensor, &[(1, -1)], "sma-extensor-cmc"),
        route("extensor-mcp", TendonKind::Extensor, &[(1, -1), (2, -1)], "sma-extensor-mcp"),
        route("extensor-ip", TendonKind::Extensor, &[(1, -1), (2, -1), (3, -1)], "sma-extensor-ip"),
        route("abductor", TendonKind::Lateral, &[(0, 1)], "sma-abductor"),
        route("adductor", TendonKind::Lateral, &[(0, -1)], "sma-adductor"),
    ]
}

/// Geometry of the proximal-joint crossing after calibration against the
/// 16.86 mm excursion over 0°..110°.
pub fn default_joint_geometry() -> JointTendonGeometry {
    tendon::calibrate_geometry(PROXIMAL_FLEXOR_EXCURSION_MM, (0.0, 110.0), JointTendonGeometry::TEMPLATE)
        .expect("template geometry calibrates")
}

/// Default base frames: MCP origins across the palm, thumb CMC near the
/// wrist, rolled so that thumb flexion sweeps across the palm.
pub fn default_base(finger: &str) -> BaseFrame {
    match finger {
        THUMB => BaseFrame {
            translation: [-44.0, 19.0, -28.0],
            rpy_deg: [-88.0, 16.0, 62.0],
        },
        INDEX => BaseFrame::at(0.0, 24.0, 0.0),
        MIDDLE => BaseFrame::at(3.0, 4.0, 0.0),
        RING => BaseFrame::at(0.0, -16.0, 0.0),
        _ => BaseFrame::at(-8.0, -34.0, 0.0),
    }
}

/// The built-in hand description.
pub fn default_hand_spec() -> HandSpec {
    let geometry = default_joint_geometry();
    let mut fingers = BTreeMap::new();
    let mut tendon_routes = Vec::new();
    let mut couplings = Vec::new();
    tendon_routes.extend(thumb_routes(geometry));
    fingers.insert(
        THUMB.to_string(),
        Finger {
            chain: thumb_chain(THUMB_LINKS_MM),
            base: default_base(THUMB),
            extra_dofs: 1,
            return_spring_torque: tendon::DEFAULT_RETURN_SPRING_TORQUE,
        },
    );
    for name in UNIVERSAL_FINGERS {
        let proximal = if name == LITTLE { LITTLE_PROXIMAL_MM } else { UNIVERSAL_LINKS_MM[0] };
        fingers.insert(
            name.to_string(),
            Finger {
                chain: universal_chain(name, proximal),
                base: default_base(name),
                extra_dofs: 0,
                return_spring_torque: tendon::DEFAULT_RETURN_SPRING_TORQUE,
            },
        );
        couplings.push(CouplingRule::dip_pip(name));
        tendon_routes.extend(universal_routes(name, geometry));
    }
    let allocation = ActuatorAllocation::from_routes(&tendon_routes, |route| match route.kind {
        TendonKind::Flexor => ActuatorKind::Motor,
        TendonKind::Extensor | TendonKind::Lateral => ActuatorKind::Sma,
    });
    HandSpec {
        meta: Meta {
            version: SPEC_VERSION.to_string(),
            assumed_defaults: vec![
                "thumb link lengths (0, 40, 32, 25) mm".into(),
                "thumb MCP and IP ranges 0..90 deg".into(),
                "little finger proximal phalanx 38 mm".into(),
                "per-finger base frames".into(),
                "thumb CMC axial rotation counted as 1 extra DOF, not modelled".into(),
                "tendon template geometry L1 = L2 = 12, d1 = d2 = 2, R1 = R2 = 6 mm before calibration".into(),
                "crossing friction efficiency 1.0".into(),
                "distal return spring 5 N*mm".into(),
                "SMA wire 0.31 mm x 225 mm, 12.2 ohm/m, convection 0 W/(m^2 K)".into(),
                "per-route actuator table (totals 17 SMA / 15 motor are fixed)".into(),
            ],
            assumptions: vec![
                "each flexor crosses only the joints proximal to its insertion".into(),
                "extensor crossings mirror the flexor geometry with a sign flip".into(),
                "a universal finger's lateral pair shares one SMA module".into(),
                "only 12 SMA modules are integrated in the forearm build; the allocation follows the 17/15 totals".into(),
            ],
        },
        fingers,
        couplings,
        tendon_routes,
        actuators: Actuators {
            motor: MotorModuleSpec::default(),
            sma: SmaModuleSpec::default(),
            allocation,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index_chain() -> DHChain {
        universal_chain(INDEX, 47.0)
    }

    #[test]
    fn default_spec_is_valid_and_deterministic() {
        let a = default_hand_spec();
        a.validate().unwrap();
        let b = default_hand_spec();
        assert_eq!(save_spec(&a), save_spec(&b));
    }

    #[test]
    fn index_link_lengths() {
        let spec = default_hand_spec();
        let a: Vec<f64> = spec.chain(INDEX).unwrap().rows.iter().map(|r| r.a).collect();
        assert_eq!(a, vec![0.0, 47.0, 29.0, 23.5]);
    }

    #[test]
    fn universal_chain_matches_table() {
        let chain = index_chain();
        let alpha_a: Vec<(f64, f64)> = chain.rows.iter().map(|r| (r.alpha_prev, r.a)).collect();
        assert_eq!(alpha_a, vec![(0.0, 0.0), (90.0, 47.0), (0.0, 29.0), (0.0, 23.5)]);
        let ranges: Vec<(f64, f64)> = chain.rows.iter().map(|r| (r.theta_min, r.theta_max)).collect();
        assert_eq!(ranges, vec![(-15.0, 15.0), (0.0, 90.0), (0.0, 110.0), (0.0, 90.0)]);
    }

    #[test]
    fn dof_and_actuator_totals() {
        let spec = default_hand_spec();
        assert_eq!(spec.total_dof(), 21);
        let census = spec.actuators.allocation.census();
        assert_eq!((census.total, census.sma, census.motor), (32, 17, 15));
    }

    #[test]
    fn couplings_are_two_thirds_on_last_row() {
        let spec = default_hand_spec();
        assert_eq!(spec.couplings.len(), 4);
        for rule in &spec.couplings {
            assert_ne!(rule.finger, THUMB);
            assert_eq!(rule.ratio, 2.0 / 3.0);
            assert_eq!(rule.driven_joint, spec.chain(&rule.finger).unwrap().len() - 1);
        }
    }

    #[test]
    fn thumb_ranges() {
        let spec = default_hand_spec();
        let thumb = spec.thumb_chain().unwrap();
        assert_eq!((thumb.rows[0].theta_min, thumb.rows[0].theta_max), (0.0, 53.0));
        assert_eq!((thumb.rows[1].theta_min, thumb.rows[1].theta_max), (0.0, 107.0));
    }

    #[test]
    fn round_trip_is_exact() {
        let spec = default_hand_spec();
        let loaded = load_spec(&save_spec(&spec)).unwrap();
        assert_eq!(loaded, spec);
    }

    #[test]
    fn inverted_range_rejected() {
        let mut spec = default_hand_spec();
        let row = &mut spec.fingers.get_mut(LITTLE).unwrap().chain.rows[2];
        row.theta_min = 120.0;
        let err = load_spec(&save_spec(&spec)).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("theta_min")), "{err}");
    }

    #[test]
    fn missing_finger_rejected() {
        let mut spec = default_hand_spec();
        spec.fingers.remove(RING);
        let err = load_spec(&save_spec(&spec)).unwrap_err();
        assert!(err.to_string().contains("expected 5 fingers"), "{err}");
    }

    #[test]
    fn malformed_document_is_parse_error() {
        assert!(matches!(load_spec("{ \"fingers\": "), Err(Error::Parse(_))));
        assert!(matches!(load_spec("[]"), Err(Error::Parse(_))));
    }

    #[test]
    fn clamp_examples() {
        let chain = index_chain();
        let inside = JointAngles::from([0.0, 45.0, 55.0, 45.0]);
        assert_eq!(clamp_to_limits(&chain, &inside).unwrap(), inside);
        let high = clamp_to_limits(&chain, &JointAngles::from([20.0, 100.0, 120.0, 95.0])).unwrap();
        assert_eq!(high, JointAngles::from([15.0, 90.0, 110.0, 90.0]));
        let low = clamp_to_limits(&chain, &JointAngles::from([-20.0, -5.0, -1.0, -1.0])).unwrap();
        assert_eq!(low, JointAngles::from([-15.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn clamp_arity_mismatch() {
        let err = clamp_to_limits(&index_chain(), &JointAngles::new(vec![0.0; 3])).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { expected: 4, got: 3 });
    }

    #[test]
    fn limit_check_names_joint() {
        let err = index_chain().check_limits(&JointAngles::from([0.0, 0.0, 120.0, 0.0])).unwrap_err();
        assert!(err.to_string().contains("index PIP"), "{err}");
    }
}

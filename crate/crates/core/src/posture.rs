//! Gesture and grasp feasibility: joint-limit and coupling checks, the
//! 32-gesture library, the Kapandji opposition score, and grasp-class
//! posture generation by a 1-D aperture search.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hand_model::{HandSpec, JointAngles, FINGER_NAMES, INDEX, LITTLE, MIDDLE, RING, SPEC_VERSION, THUMB};
use crate::kinematics::{chain_pose, reach_point, FingertipPoint, Pose};
use crate::roots;

/// Allowed deviation from `θ_driven = k·θ_driver`, degrees.
pub const COUPLING_TOLERANCE_DEG: f64 = 0.5;
/// Aperture match required of [`generate_grasp`], mm.
pub const APERTURE_TOLERANCE_MM: f64 = 1.0;

const APERTURE_SCAN_STEPS: usize = 400;

/// Named joint targets for some or all digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gesture {
    pub name: String,
    pub targets: BTreeMap<String, JointAngles>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AboveLimit {
        finger: String,
        joint: String,
        value: f64,
        bound: f64,
    },
    BelowLimit {
        finger: String,
        joint: String,
        value: f64,
        bound: f64,
    },
    Coupling {
        finger: String,
        driver: String,
        driven: String,
        value: f64,
        expected: f64,
    },
}

/// Up to three decimals, trailing zeros dropped.
fn deg(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AboveLimit {
                finger,
                joint,
                value,
                bound,
            } => write!(f, "{finger} {joint} exceeds {}° (got {}°)", deg(*bound), deg(*value)),
            Violation::BelowLimit {
                finger,
                joint,
                value,
                bound,
            } => write!(f, "{finger} {joint} is below {}° (got {}°)", deg(*bound), deg(*value)),
            Violation::Coupling {
                finger,
                driver,
                driven,
                value,
                expected,
            } => write!(
                f,
                "{finger} {driven} {}° breaks the {driven}/{driver} coupling (expected {}°)",
                deg(*value),
                deg(*expected)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every target against its chain's limits and every coupled pair
/// against its ratio.
pub fn check_gesture(spec: &HandSpec, gesture: &Gesture) -> Result<Verdict> {
    let mut violations = Vec::new();
    for (finger, angles) in &gesture.targets {
        let chain = spec.chain(finger)?;
        chain.check_arity(angles)?;
        for (row, &value) in chain.rows.iter().zip(angles.iter()) {
            let (joint, finger) = (row.joint.clone(), finger.clone());
            if value > row.theta_max || value.is_nan() {
                violations.push(Violation::AboveLimit {
                    finger,
                    joint,
                    value,
                    bound: row.theta_max,
                });
            } else if value < row.theta_min {
                violations.push(Violation::BelowLimit {
                    finger,
                    joint,
                    value,
                    bound: row.theta_min,
                });
            }
        }
        if let Some(rule) = spec.coupling(finger) {
            let expected = rule.ratio * angles[rule.driver_joint];
            let value = angles[rule.driven_joint];
            if !((value - expected).abs() <= COUPLING_TOLERANCE_DEG) {
                violations.push(Violation::Coupling {
                    finger: finger.clone(),
                    driver: chain.rows[rule.driver_joint].joint.clone(),
                    driven: chain.rows[rule.driven_joint].joint.clone(),
                    value,
                    expected,
                });
            }
        }
    }
    Ok(Verdict { violations })
}

/// Symbolic per-digit posture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DigitState {
    Extended,
    Flexed,
    Half,
    Abducted,
}

/// Joint angles for `state` on `finger`, with the finger's coupling applied.
pub fn digit_posture(spec: &HandSpec, finger: &str, state: DigitState) -> Result<JointAngles> {
    let chain = spec.chain(finger)?;
    let mut angles = match state {
        DigitState::Extended => chain.zero_angles(),
        DigitState::Flexed => chain.max_angles(),
        DigitState::Half => JointAngles(chain.rows.iter().map(|r| r.midpoint()).collect()),
        DigitState::Abducted => {
            let mut a = chain.zero_angles();
            a[0] = chain.rows[0].theta_max;
            a
        }
    };
    if matches!(state, DigitState::Flexed | DigitState::Half) {
        // lateral joint stays centred
        angles[0] = chain.rows[0].clamp(0.0);
    }
    if let Some(rule) = spec.coupling(finger) {
        let driven = &chain.rows[rule.driven_joint];
        angles[rule.driven_joint] = driven.clamp(rule.ratio * angles[rule.driver_joint]);
    }
    Ok(angles)
}

/// Gesture from one symbolic state per digit.
pub fn gesture_from_states(
    spec: &HandSpec,
    name: &str,
    states: &[(&str, DigitState)],
    provenance: &str,
) -> Result<Gesture> {
    let targets = states
        .iter()
        .map(|&(finger, state)| Ok((finger.to_string(), digit_posture(spec, finger, state)?)))
        .collect::<Result<_>>()?;
    Ok(Gesture {
        name: name.into(),
        targets,
        provenance: provenance.into(),
    })
}

fn gesture_name(extended: &[bool; 5]) -> String {
    let common = match extended {
        [false, false, false, false, false] => Some("fist"),
        [true, true, true, true, true] => Some("open-hand"),
        [true, false, false, false, false] => Some("thumbs-up"),
        [false, true, false, false, false] => Some("pointing"),
        [false, true, true, false, false] => Some("victory"),
        [false, true, true, true, false] => Some("three"),
        [false, true, true, true, true] => Some("four"),
        [true, true, false, false, false] => Some("l-shape"),
        [true, false, false, false, true] => Some("call-me"),
        [false, true, false, false, true] => Some("horns"),
        [false, false, false, false, true] => Some("little-up"),
        [false, false, true, false, false] => Some("middle-up"),
        _ => None,
    };
    common.map(str::to_string).unwrap_or_else(|| {
        let digits: Vec<&str> = FINGER_NAMES
            .iter()
            .zip(extended)
            .filter_map(|(name, &e)| e.then_some(*name))
            .collect();
        format!("extend-{}", digits.join("-"))
    })
}

/// The 32 open/flexed combinations of the five digits.
pub fn builtin_gesture_library() -> Vec<Gesture> {
    let spec = crate::hand_model::default_hand_spec();
    (0u32..32)
        .map(|mask| {
            // bit 4 = thumb ... bit 0 = little, so the fist comes first
            let extended: [bool; 5] = std::array::from_fn(|i| mask & (1 << (4 - i)) != 0);
            let states: Vec<(&str, DigitState)> = FINGER_NAMES
                .iter()
                .zip(extended)
                .map(|(&f, e)| (f, if e { DigitState::Extended } else { DigitState::Flexed }))
                .collect();
            gesture_from_states(
                &spec,
                &gesture_name(&extended),
                &states,
                "open/flexed combination of the five digits",
            )
            .expect("default fingers exist")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GestureLibrary {
    pub version: String,
    pub gestures: Vec<Gesture>,
}

pub fn save_gesture_library(gestures: &[Gesture]) -> String {
    let lib = GestureLibrary {
        version: SPEC_VERSION.into(),
        gestures: gestures.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&lib).expect("gestures serialize");
    text.push('\n');
    text
}

/// Parses a gesture library document. Feasibility is not checked here.
pub fn load_gesture_library(document: &str) -> Result<Vec<Gesture>> {
    let lib: GestureLibrary = serde_json::from_str(document)?;
    if lib.version != SPEC_VERSION {
        return Err(Error::Validation(format!(
            "unsupported gesture library version {}",
            lib.version
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for g in &lib.gestures {
        if !seen.insert(g.name.as_str()) {
            return Err(Error::Validation(format!("duplicate gesture `{}`", g.name)));
        }
    }
    Ok(lib.gestures)
}

/// Pose of a finger's base in the hand frame.
pub fn finger_base(spec: &HandSpec, finger: &str) -> Result<Pose> {
    Ok(Pose::from_base(&spec.finger(finger)?.base))
}

/// Joint origins of a posed finger in the hand frame: `[base, PIP-or-MCP,
/// next joint, ..., tip]`.
pub fn hand_frame_points(spec: &HandSpec, finger: &str, angles: &JointAngles) -> Result<Vec<Vector3<f64>>> {
    let f = spec.finger(finger)?;
    f.chain.check_arity(angles)?;
    let base = Pose::from_base(&f.base);
    let mut points = vec![base.position];
    for i in 1..=f.chain.len() {
        points.push(base.compose(&chain_pose(&f.chain, &angles.0[..i])).position);
    }
    Ok(points)
}

/// Fingertip of a posed finger in the hand frame.
pub fn hand_frame_tip(spec: &HandSpec, finger: &str, angles: &JointAngles) -> Result<Vector3<f64>> {
    Ok(*hand_frame_points(spec, finger, angles)?.last().expect("non-empty chain"))
}

/// Radial direction across the palm, hand frame.
const RADIAL: Vector3<f64> = Vector3::new(0.0, 1.0, 0.0);
/// Palmar direction, hand frame.
const PALMAR: Vector3<f64> = Vector3::new(0.0, 0.0, -1.0);
/// Half thickness of a phalanx, mm.
const PHALANX_HALF_WIDTH: f64 = 7.0;

#[derive(Debug, Clone, PartialEq)]
pub struct KapandjiTarget {
    pub index: u8,
    pub description: String,
    pub finger: String,
    pub posture: JointAngles,
    pub point: FingertipPoint,
}

/// Posture a long finger takes to meet the thumb tip-to-tip.
fn opposition_posture(spec: &HandSpec, finger: &str) -> Result<JointAngles> {
    let chain = spec.chain(finger)?;
    let mut angles = JointAngles::from([0.0, 46.0, 110.0, 0.0]);
    if let Some(rule) = spec.coupling(finger) {
        angles[rule.driven_joint] = chain.rows[rule.driven_joint].clamp(rule.ratio * angles[rule.driver_joint]);
    }
    Ok(angles)
}

/// The ten opposition landmarks in clinical order: radial side of the index
/// proximal and middle phalanges, the four fingertips, the little finger's
/// DIP, PIP and MCP creases, and the distal palmar crease.
pub fn kapandji_targets(spec: &HandSpec) -> Result<Vec<KapandjiTarget>> {
    let mut out = Vec::with_capacity(10);
    let mut push = |description: &str, finger: &str, posture: JointAngles, p: Vector3<f64>| {
        out.push(KapandjiTarget {
            index: out.len() as u8 + 1,
            description: description.into(),
            finger: finger.into(),
            posture,
            point: p.into(),
        });
    };
    let straight = spec.chain(INDEX)?.zero_angles();
    let pts = hand_frame_points(spec, INDEX, &straight)?;
    let side = RADIAL * PHALANX_HALF_WIDTH;
    push(
        "radial side of the index proximal phalanx",
        INDEX,
        straight.clone(),
        (pts[1] + pts[2]) / 2.0 + side,
    );
    push(
        "radial side of the index middle phalanx",
        INDEX,
        straight,
        (pts[2] + pts[3]) / 2.0 + side,
    );
    for (finger, label) in [(INDEX, "index"), (MIDDLE, "middle"), (RING, "ring"), (LITTLE, "little")] {
        let posture = opposition_posture(spec, finger)?;
        let tip = hand_frame_tip(spec, finger, &posture)?;
        push(&format!("tip of the {label} finger"), finger, posture, tip);
    }
    let straight = spec.chain(LITTLE)?.zero_angles();
    let pts = hand_frame_points(spec, LITTLE, &straight)?;
    let pad = PALMAR * PHALANX_HALF_WIDTH;
    push("little finger DIP crease", LITTLE, straight.clone(), pts[3] + pad);
    push("little finger PIP crease", LITTLE, straight.clone(), pts[2] + pad);
    push("little finger MCP crease", LITTLE, straight.clone(), pts[1] + pad);
    push(
        "distal palmar crease",
        LITTLE,
        straight,
        pts[1] + pad + Vector3::new(-15.0, 0.0, 0.0),
    );
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KapandjiEntry {
    pub target: KapandjiTarget,
    pub thumb_angles: JointAngles,
    pub residual: f64,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KapandjiReport {
    pub score: usize,
    pub tolerance: f64,
    pub entries: Vec<KapandjiEntry>,
}

/// Thumb reach toward each landmark; a landmark counts when the residual is
/// within `tolerance` mm.
pub fn kapandji_score(spec: &HandSpec, tolerance: f64) -> Result<KapandjiReport> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    let thumb = spec.finger(THUMB)?;
    let base = Pose::from_base(&thumb.base);
    let entries: Vec<KapandjiEntry> = kapandji_targets(spec)?
        .into_iter()
        .map(|target| {
            let res = reach_point(&thumb.chain, &base, &target.point.to_vector());
            KapandjiEntry {
                reached: res.residual <= tolerance,
                thumb_angles: res.angles,
                residual: res.residual,
                target,
            }
        })
        .collect();
    Ok(KapandjiReport {
        score: entries.iter().filter(|e| e.reached).count(),
        tolerance,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Taxonomy {
    Schlesinger,
    Cutkosky,
}

impl fmt::Display for Taxonomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Object held by a grasp; sizes in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum GraspObject {
    Cylinder { diameter: f64 },
    Sphere { diameter: f64 },
    Slab { thickness: f64 },
    None,
}

impl GraspObject {
    /// Thumb-to-finger aperture the object calls for.
    pub fn aperture(&self) -> Option<f64> {
        match *self {
            GraspObject::Cylinder { diameter } | GraspObject::Sphere { diameter } => Some(diameter),
            GraspObject::Slab { thickness } => Some(thickness),
            GraspObject::None => None,
        }
    }
}

/// How the thumb takes part in a grasp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThumbPlacement {
    /// Scales its template angles with the fingers.
    Template,
    /// Closes from the open pose onto the primary fingertip, meeting it at
    /// the contact flexion.
    Follow,
    /// Parked from the start where the primary fingertip is at the contact
    /// flexion.
    Oppose,
}

/// A grasp class. Template angles are the full-closure posture; the
/// flexion parameter `s ∈ [0, 1]` scales them from the open hand. Unless the
/// placement is [`ThumbPlacement::Template`], the thumb entry is replaced by
/// a reach toward the primary fingertip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspClass {
    pub taxonomy: Taxonomy,
    pub name: String,
    pub object: GraspObject,
    pub template: Gesture,
    /// Finger whose tip opposes the thumb tip.
    pub primary: String,
    pub thumb: ThumbPlacement,
    /// Flexion at which the thumb meets the primary fingertip, and the
    /// flexion used when there is no object.
    pub contact: f64,
    pub demonstrated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspResult {
    pub gesture: Gesture,
    pub flexion: f64,
    pub aperture: f64,
    pub target_aperture: Option<f64>,
}

impl GraspResult {
    pub fn aperture_error(&self) -> f64 {
        self.target_aperture.map_or(0.0, |t| (self.aperture - t).abs())
    }
}

struct GraspModel<'a> {
    spec: &'a HandSpec,
    class: &'a GraspClass,
    thumb: Option<JointAngles>,
}

impl GraspModel<'_> {
    fn posture(&self, s: f64) -> BTreeMap<String, JointAngles> {
        self.class
            .template
            .targets
            .iter()
            .map(|(finger, angles)| {
                let posed = match (&self.thumb, finger.as_str()) {
                    (Some(t), THUMB) => match self.class.thumb {
                        ThumbPlacement::Follow => {
                            let f = if self.class.contact > 0.0 { (s / self.class.contact).min(1.0) } else { 1.0 };
                            JointAngles(t.iter().map(|a| a * f).collect())
                        }
                        _ => t.clone(),
                    },
                    _ => JointAngles(angles.iter().map(|a| a * s).collect()),
                };
                (finger.clone(), posed)
            })
            .collect()
    }

    fn aperture(&self, s: f64) -> f64 {
        let p = self.posture(s);
        let tip = |f: &str| hand_frame_tip(self.spec, f, &p[f]).expect("validated fingers");
        (tip(THUMB) - tip(&self.class.primary)).norm()
    }
}

/// Instantiates a grasp class: a single flexion parameter is searched until
/// the thumb-to-primary-fingertip distance matches the object size. The scan
/// runs from the open hand and takes the first crossing.
pub fn generate_grasp(spec: &HandSpec, class: &GraspClass) -> Result<GraspResult> {
    for finger in [THUMB, class.primary.as_str()] {
        if !class.template.targets.contains_key(finger) {
            return Err(Error::GraspInfeasible(format!(
                "{} template has no {finger} target",
                class.name
            )));
        }
    }
    let verdict = check_gesture(spec, &class.template)?;
    if let Some(v) = verdict.violations.first() {
        return Err(Error::GraspInfeasible(format!("{} template: {v}", class.name)));
    }
    if !(0.0..=1.0).contains(&class.contact) {
        return Err(Error::InvalidArgument(format!("contact flexion {} outside [0, 1]", class.contact)));
    }
    let target = class.object.aperture();
    if let Some(t) = target {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("object size must be non-negative, got {t} mm")));
        }
    }
    let mut model = GraspModel {
        spec,
        class,
        thumb: None,
    };
    if class.thumb != ThumbPlacement::Template {
        let p = model.posture(class.contact);
        let tip = hand_frame_tip(spec, &class.primary, &p[class.primary.as_str()])?;
        let thumb = spec.finger(THUMB)?;
        let reach = reach_point(&thumb.chain, &Pose::from_base(&thumb.base), &tip);
        model.thumb = Some(reach.angles);
    }
    let flexion = match target {
        None => class.contact,
        Some(t) => aperture_search(&model, t)?,
    };
    let gesture = Gesture {
        name: class.name.clone(),
        targets: model.posture(flexion),
        provenance: format!("{} grasp class", class.taxonomy),
    };
    Ok(GraspResult {
        gesture,
        flexion,
        aperture: model.aperture(flexion),
        target_aperture: target,
    })
}

fn aperture_search(model: &GraspModel<'_>, target: f64) -> Result<f64> {
    let f = |s: f64| model.aperture(s) - target;
    let grid: Vec<(f64, f64)> = (0..=APERTURE_SCAN_STEPS)
        .map(|i| {
            let s = i as f64 / APERTURE_SCAN_STEPS as f64;
            (s, f(s))
        })
        .collect();
    let open = grid[0].1 + target;
    if grid[0].1.abs() <= f64::EPSILON * target.max(1.0) {
        return Ok(0.0);
    }
    if grid[0].1 < -APERTURE_TOLERANCE_MM {
        return Err(Error::GraspInfeasible(format!(
            "{}: object too large, open aperture {open:.3} mm < {target:.3} mm",
            model.class.name
        )));
    }
    if grid[0].1 > 0.0 {
        if let Some(w) = grid.windows(2).find(|w| w[1].1 <= 0.0) {
            if w[1].1 == 0.0 {
                return Ok(w[1].0);
            }
            return roots::bisect(f, w[0].0, w[1].0, 0.0, 200)
                .ok_or_else(|| Error::GraspInfeasible(format!("{}: aperture search failed", model.class.name)));
        }
    }
    // no crossing: accept the closest approach if it is within tolerance
    let (i_best, _) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
        .expect("non-empty grid");
    let h = 1.0 / APERTURE_SCAN_STEPS as f64;
    let (mut lo, mut hi) = ((grid[i_best].0 - h).max(0.0), (grid[i_best].0 + h).min(1.0));
    let g = |s: f64| f(s).abs();
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    for _ in 0..100 {
        let m1 = hi - INV_PHI * (hi - lo);
        let m2 = lo + INV_PHI * (hi - lo);
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let s = (lo + hi) / 2.0;
    let s = if g(s) <= grid[i_best].1.abs() { s } else { grid[i_best].0 };
    if g(s) <= APERTURE_TOLERANCE_MM {
        return Ok(s);
    }
    let closed = f(s) + target;
    if closed > target {
        Err(Error::GraspInfeasible(format!(
            "{}: object too small, tightest aperture {closed:.3} mm > {target:.3} mm",
            model.class.name
        )))
    } else {
        Err(Error::GraspInfeasible(format!(
            "{}: no flexion matches {target:.3} mm (closest {closed:.3} mm)",
            model.class.name
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspLibrary {
    pub version: String,
    pub classes: Vec<GraspClass>,
}

pub fn save_grasp_classes(classes: &[GraspClass]) -> String {
    let lib = GraspLibrary {
        version: SPEC_VERSION.into(),
        classes: classes.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&lib).expect("grasp classes serialize");
    text.push('\n');
    text
}

/// Parses a grasp class table. Templates are not checked here.
pub fn load_grasp_classes(document: &str) -> Result<Vec<GraspClass>> {
    let lib: GraspLibrary = serde_json::from_str(document)?;
    if lib.version != SPEC_VERSION {
        return Err(Error::Validation(format!("unsupported grasp table version {}", lib.version)));
    }
    Ok(lib.classes)
}

/// Closure posture for a set of flexing fingers; the others stay extended.
fn grasp_template(
    spec: &HandSpec,
    name: &str,
    flexing: &[(&str, [f64; 3])],
    thumb: [f64; 4],
) -> Gesture {
    let mut targets = BTreeMap::new();
    for finger in FINGER_NAMES {
        let angles = if finger == THUMB {
            JointAngles::from(thumb)
        } else if let Some((_, [abd, mcp, pip])) = flexing.iter().find(|(f, _)| *f == finger) {
            let k = spec.coupling(finger).map_or(0.0, |r| r.ratio);
            JointAngles::from([*abd, *mcp, *pip, k * pip])
        } else {
            JointAngles::from([0.0; 4])
        };
        targets.insert(finger.to_string(), angles);
    }
    Gesture {
        name: name.into(),
        targets,
        provenance: "grasp template".into(),
    }
}

#[allow(clippy::too_many_arguments)]
fn class(
    spec: &HandSpec,
    taxonomy: Taxonomy,
    name: &str,
    object: GraspObject,
    flexing: &[(&str, [f64; 3])],
    thumb: [f64; 4],
    placement: ThumbPlacement,
    contact: f64,
    demonstrated: bool,
) -> GraspClass {
    GraspClass {
        taxonomy,
        name: name.into(),
        object,
        template: grasp_template(spec, name, flexing, thumb),
        primary: INDEX.into(),
        thumb: placement,
        contact,
        demonstrated,
    }
}

const WRAP: [f64; 3] = [0.0, 90.0, 110.0];
const PINCH: [f64; 3] = [0.0, 90.0, 90.0];
const POWER_THUMB: [f64; 4] = [53.0, 60.0, 40.0, 30.0];

/// The six classical grasp types; the hook is defined but was never
/// demonstrated on hardware.
pub fn schlesinger_classes() -> Vec<GraspClass> {
    let spec = crate::hand_model::default_hand_spec();
    let all = [(INDEX, WRAP), (MIDDLE, WRAP), (RING, WRAP), (LITTLE, WRAP)];
    use GraspObject::*;
    use ThumbPlacement::*;
    let t = Taxonomy::Schlesinger;
    vec![
        class(&spec, t, "cylindrical", Cylinder { diameter: 65.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(&spec, t, "spherical", Sphere { diameter: 70.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(
            &spec,
            t,
            "three-finger pinch",
            Sphere { diameter: 20.0 },
            &[(INDEX, PINCH), (MIDDLE, PINCH)],
            [0.0; 4],
            Oppose,
            0.5,
            true,
        ),
        class(&spec, t, "side pinch", Slab { thickness: 3.0 }, &[(INDEX, PINCH)], [0.0; 4], Oppose, 0.6, true),
        class(&spec, t, "two-finger pinch", Slab { thickness: 2.0 }, &[(INDEX, PINCH)], [0.0; 4], Oppose, 0.5, true),
        class(&spec, t, "hook", None, &all, [0.0; 4], Template, 1.0, false),
    ]
}

/// The sixteen grasp names of the refined taxonomy.
pub const CUTKOSKY_TAXONOMY: [&str; 16] = [
    "large diameter",
    "small diameter",
    "medium wrap",
    "adducted thumb",
    "light tool",
    "thumb-4 finger",
    "thumb-3 finger",
    "thumb-2 finger",
    "thumb-index finger",
    "power disk",
    "power sphere",
    "precision disk",
    "precision sphere",
    "tripod",
    "platform",
    "lateral pinch",
];

/// The nine refined classes implemented.
pub fn cutkosky_classes() -> Vec<GraspClass> {
    let spec = crate::hand_model::default_hand_spec();
    let all = [(INDEX, WRAP), (MIDDLE, WRAP), (RING, WRAP), (LITTLE, WRAP)];
    use GraspObject::*;
    use ThumbPlacement::*;
    let t = Taxonomy::Cutkosky;
    vec![
        class(&spec, t, "large diameter", Cylinder { diameter: 75.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(&spec, t, "small diameter", Cylinder { diameter: 35.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(&spec, t, "medium wrap", Cylinder { diameter: 55.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(
            &spec,
            t,
            "adducted thumb",
            Cylinder { diameter: 45.0 },
            &all,
            [0.0, 60.0, 40.0, 30.0],
            Template,
            1.0,
            true,
        ),
        class(&spec, t, "power sphere", Sphere { diameter: 70.0 }, &all, POWER_THUMB, Follow, 1.0, true),
        class(&spec, t, "thumb-4 finger", Sphere { diameter: 40.0 }, &all, [0.0; 4], Oppose, 0.5, true),
        class(
            &spec,
            t,
            "thumb-2 finger",
            Sphere { diameter: 25.0 },
            &[(INDEX, PINCH), (MIDDLE, PINCH)],
            [0.0; 4],
            Oppose,
            0.5,
            true,
        ),
        class(
            &spec,
            t,
            "thumb-index finger",
            Sphere { diameter: 10.0 },
            &[(INDEX, PINCH)],
            [0.0; 4],
            Oppose,
            0.5,
            true,
        ),
        class(
            &spec,
            t,
            "tripod",
            Sphere { diameter: 20.0 },
            &[(INDEX, PINCH), (MIDDLE, PINCH)],
            [0.0; 4],
            Oppose,
            0.45,
            true,
        ),
    ]
}

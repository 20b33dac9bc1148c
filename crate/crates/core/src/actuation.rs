//! Screw-nut motor and SMA drive modules, the actuator allocation, and the
//! flex/extend sequencing of one finger.
//!
//! The motor pulls the flexor tendon; the SMA module, energized only while
//! the motor backs off, pulls the extensor. The lead screw self-locks, so an
//! unpowered motor holds its position.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hand_model::{DHChain, JointAngles};
use crate::roots;
use crate::tendon::{route_excursion, TendonKind, TendonRoute};

pub const TOTAL_ACTUATORS: usize = 32;
pub const SMA_ACTUATORS: usize = 17;
pub const MOTOR_ACTUATORS: usize = 15;

/// Snap distance at the ends of the travel, mm.
const END_SNAP: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorModuleSpec {
    pub rated_voltage: f64,
    pub rated_current: f64,
    pub rated_speed_rpm: f64,
    pub rated_torque_kgcm: f64,
    pub screw_pitch: f64,
    pub stroke: f64,
    pub rated_force: f64,
    pub linear_speed: f64,
    pub mass_g: f64,
}

impl Default for MotorModuleSpec {
    fn default() -> Self {
        Self {
            rated_voltage: 12.0,
            rated_current: 0.18,
            rated_speed_rpm: 100.0,
            rated_torque_kgcm: 1.5,
            screw_pitch: 0.7,
            stroke: 20.0,
            rated_force: 400.0,
            linear_speed: 1.17,
            mass_g: 40.0,
        }
    }
}

impl MotorModuleSpec {
    /// Nut speed implied by the screw, mm/s.
    pub fn screw_speed(&self) -> f64 {
        self.rated_speed_rpm * self.screw_pitch / 60.0
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.rated_voltage,
            self.rated_current,
            self.rated_speed_rpm,
            self.rated_torque_kgcm,
            self.screw_pitch,
            self.stroke,
            self.rated_force,
            self.linear_speed,
            self.mass_g,
        ];
        if !positive.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::Validation("motor parameters must be positive".into()));
        }
        let implied = self.screw_speed();
        if (self.linear_speed - implied).abs() > 0.01 * implied {
            return Err(Error::Validation(format!(
                "motor linear speed {} mm/s differs from speed x pitch = {implied:.4} mm/s by more than 1%",
                self.linear_speed
            )));
        }
        Ok(())
    }

    /// Rejects pulls above the rated force.
    pub fn check_force(&self, force: f64) -> Result<()> {
        if !(0.0..=self.rated_force).contains(&force) {
            return Err(Error::InvalidArgument(format!(
                "motor force {force} N outside [0, {}] N",
                self.rated_force
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmaModuleSpec {
    pub max_displacement: f64,
    pub max_force: f64,
    /// °C
    pub transition_temperature: f64,
    /// g/cm³
    pub density: f64,
    /// J/(kg·K)
    pub specific_heat: f64,
    /// W/(m·K)
    pub thermal_conductivity: f64,
    pub wire_diameter: f64,
    pub wire_length: f64,
    /// Ω/m
    pub resistance_per_length: f64,
    /// W/(m²·K); 0 is the adiabatic bound.
    pub convection_coefficient: f64,
}

impl Default for SmaModuleSpec {
    fn default() -> Self {
        Self {
            max_displacement: 18.0,
            max_force: 784.0,
            transition_temperature: 90.0,
            density: 6.45,
            specific_heat: 837.0,
            thermal_conductivity: 18.0,
            wire_diameter: 0.31,
            wire_length: 225.0,
            resistance_per_length: 12.2,
            convection_coefficient: 0.0,
        }
    }
}

impl SmaModuleSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.max_displacement,
            self.max_force,
            self.density,
            self.specific_heat,
            self.thermal_conductivity,
            self.wire_diameter,
            self.wire_length,
            self.resistance_per_length,
        ];
        if !positive.iter().all(|v| v.is_finite() && *v > 0.0)
            || !self.transition_temperature.is_finite()
            || !(self.convection_coefficient >= 0.0)
        {
            return Err(Error::Validation("SMA parameters out of range".into()));
        }
        Ok(())
    }

    /// Displacement (mm) and force (N) must lie within the module's limits.
    pub fn check_command(&self, displacement: f64, force: f64) -> Result<()> {
        if !(0.0..=self.max_displacement).contains(&displacement) {
            return Err(Error::InvalidArgument(format!(
                "SMA displacement {displacement} mm outside [0, {}] mm",
                self.max_displacement
            )));
        }
        if !(0.0..=self.max_force).contains(&force) {
            return Err(Error::InvalidArgument(format!(
                "SMA force {force} N outside [0, {}] N",
                self.max_force
            )));
        }
        Ok(())
    }

    /// Wire mass, kg.
    pub fn wire_mass(&self) -> f64 {
        let radius_m = self.wire_diameter * 1e-3 / 2.0;
        self.density * 1e3 * std::f64::consts::PI * radius_m * radius_m * self.wire_length * 1e-3
    }

    /// Electrical resistance of the wire, Ω.
    pub fn resistance(&self) -> f64 {
        self.resistance_per_length * self.wire_length * 1e-3
    }

    /// Convective surface area, m².
    pub fn surface_area(&self) -> f64 {
        std::f64::consts::PI * self.wire_diameter * 1e-3 * self.wire_length * 1e-3
    }
}

/// Time for the wire to heat from `ambient` to the transition temperature
/// under current `current` (A), seconds.
///
/// Lumped capacitance: `m·c·dT/dt = I²R − h·A·(T − T_ambient)`. With `h = 0`
/// this is `m·c·ΔT / (I²R)`.
pub fn sma_heating_time(spec: &SmaModuleSpec, current: f64, ambient: f64) -> Result<f64> {
    if !(current > 0.0) || !current.is_finite() {
        return Err(Error::InvalidArgument(format!("current must be positive, got {current} A")));
    }
    let delta = spec.transition_temperature - ambient;
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ambient {ambient} °C is above the transition temperature {} °C",
            spec.transition_temperature
        )));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let capacity = spec.wire_mass() * spec.specific_heat;
    let power = current * current * spec.resistance();
    let conductance = spec.convection_coefficient * spec.surface_area();
    if conductance == 0.0 {
        return Ok(capacity * delta / power);
    }
    let loss = conductance * delta;
    if power <= loss {
        return Err(Error::InsufficientPower { power, loss });
    }
    Ok(-(capacity / conductance) * (1.0 - loss / power).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActuatorKind {
    Sma,
    Motor,
}

impl fmt::Display for ActuatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActuatorKind::Sma => "SMA",
            ActuatorKind::Motor => "motor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationEntry {
    pub actuator: String,
    pub kind: ActuatorKind,
}

/// Tendon route name → driving actuator. Several routes may share one
/// actuator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuatorAllocation {
    pub entries: BTreeMap<String, AllocationEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub total: usize,
    pub sma: usize,
    pub motor: usize,
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} actuators: {} SMA, {} motor", self.total, self.sma, self.motor)
    }
}

impl ActuatorAllocation {
    pub fn from_routes(routes: &[TendonRoute], kind: impl Fn(&TendonRoute) -> ActuatorKind) -> Self {
        Self {
            entries: routes
                .iter()
                .map(|r| {
                    (
                        r.name.clone(),
                        AllocationEntry {
                            actuator: r.actuator.clone(),
                            kind: kind(r),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Distinct actuators per kind.
    pub fn census(&self) -> Census {
        let ids = |kind| {
            self.entries
                .values()
                .filter(|e| e.kind == kind)
                .map(|e| e.actuator.as_str())
                .collect::<BTreeSet<_>>()
                .len()
        };
        let sma = ids(ActuatorKind::Sma);
        let motor = ids(ActuatorKind::Motor);
        Census {
            total: sma + motor,
            sma,
            motor,
        }
    }

    pub fn validate(&self, routes: &[TendonRoute]) -> Result<()> {
        for route in routes {
            let entry = self
                .entries
                .get(&route.name)
                .ok_or_else(|| Error::Validation(format!("route {} has no actuator", route.name)))?;
            if entry.actuator != route.actuator {
                return Err(Error::Validation(format!(
                    "route {} names actuator {} but the allocation maps it to {}",
                    route.name, route.actuator, entry.actuator
                )));
            }
            let expected = match route.kind {
                TendonKind::Flexor => ActuatorKind::Motor,
                TendonKind::Extensor | TendonKind::Lateral => ActuatorKind::Sma,
            };
            if entry.kind != expected {
                return Err(Error::Validation(format!(
                    "route {} ({:?}) must be driven by a {expected} module",
                    route.name, route.kind
                )));
            }
        }
        if let Some(name) = self.entries.keys().find(|n| !routes.iter().any(|r| &r.name == *n)) {
            return Err(Error::Validation(format!("allocation entry for unknown route {name}")));
        }
        let mut kinds: BTreeMap<&str, ActuatorKind> = BTreeMap::new();
        for entry in self.entries.values() {
            if *kinds.entry(&entry.actuator).or_insert(entry.kind) != entry.kind {
                return Err(Error::Validation(format!(
                    "actuator {} is listed as both SMA and motor",
                    entry.actuator
                )));
            }
        }
        let census = self.census();
        if (census.total, census.sma, census.motor) != (TOTAL_ACTUATORS, SMA_ACTUATORS, MOTOR_ACTUATORS) {
            return Err(Error::Validation(format!(
                "expected {TOTAL_ACTUATORS} actuators ({SMA_ACTUATORS} SMA, {MOTOR_ACTUATORS} motor), found {census}"
            )));
        }
        Ok(())
    }
}

fn flexion_path(route: &TendonRoute, chain: &DHChain, rest: &JointAngles, s: f64) -> JointAngles {
    let mut angles = rest.clone();
    for crossing in &route.crossings {
        let j = crossing.joint;
        angles[j] = rest[j] + s * (chain.rows[j].theta_max - rest[j]);
    }
    angles
}

/// Excursion of a route from `rest` to the end of its flexion path (every
/// crossed joint at its upper limit).
pub fn full_route_excursion(route: &TendonRoute, chain: &DHChain, rest: &JointAngles) -> Result<f64> {
    chain.check_limits(rest)?;
    route_excursion(route, rest, &flexion_path(route, chain, rest, 1.0))
}

/// Posture on the route's flexion path whose excursion from `rest` equals
/// `reel_in` (mm). Along the path every crossed joint moves from its rest
/// angle toward its upper limit in proportion.
pub fn motor_position_to_angle(
    route: &TendonRoute,
    chain: &DHChain,
    rest: &JointAngles,
    reel_in: f64,
) -> Result<JointAngles> {
    if route.kind != TendonKind::Flexor {
        return Err(Error::InvalidArgument(format!("route {} is not a flexor", route.name)));
    }
    let total = full_route_excursion(route, chain, rest)?;
    if !(reel_in >= 0.0) || reel_in > total + 1e-9 {
        return Err(Error::ExcursionExceeded {
            requested: reel_in,
            available: total,
        });
    }
    if reel_in == 0.0 {
        return Ok(rest.clone());
    }
    if reel_in >= total {
        return Ok(flexion_path(route, chain, rest, 1.0));
    }
    let residual = |s: f64| {
        route_excursion(route, rest, &flexion_path(route, chain, rest, s)).expect("path stays in range") - reel_in
    };
    let s = roots::bisect(residual, 0.0, 1.0, 0.0, 200).ok_or_else(|| {
        Error::InvalidArgument(format!("route {} excursion is not monotone along its path", route.name))
    })?;
    Ok(flexion_path(route, chain, rest, s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeReport {
    pub required: f64,
    pub available: f64,
    pub sufficient: bool,
}

/// Compares the route's zero-pose-to-full-flexion excursion with the motor
/// stroke.
pub fn stroke_sufficiency(route: &TendonRoute, chain: &DHChain, motor: &MotorModuleSpec) -> Result<StrokeReport> {
    let required = full_route_excursion(route, chain, &chain.zero_angles())?;
    Ok(StrokeReport {
        required,
        available: motor.stroke,
        sufficient: required <= motor.stroke,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub angles: JointAngles,
    pub motor_position: f64,
}

/// Constant-speed flexion from `rest` until the stroke or the route's full
/// excursion runs out, sampled every `dt` seconds plus the end point.
pub fn flexion_trajectory(
    route: &TendonRoute,
    chain: &DHChain,
    motor: &MotorModuleSpec,
    rest: &JointAngles,
    dt: f64,
) -> Result<Vec<TrajectorySample>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let travel = motor.stroke.min(full_route_excursion(route, chain, rest)?).max(0.0);
    let duration = travel / motor.linear_speed;
    let sample = |t: f64, position: f64| -> Result<TrajectorySample> {
        Ok(TrajectorySample {
            t,
            angles: motor_position_to_angle(route, chain, rest, position)?,
            motor_position: position,
        })
    };
    let mut out = Vec::new();
    let mut i = 0u64;
    loop {
        let t = dt * i as f64;
        if t >= duration {
            break;
        }
        out.push(sample(t, (motor.linear_speed * t).min(travel))?);
        i += 1;
    }
    out.push(sample(duration, travel)?);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Phase {
    Idle,
    Flexing,
    Holding,
    Extending,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Idle => "IDLE",
            Phase::Flexing => "FLEXING",
            Phase::Holding => "HOLDING",
            Phase::Extending => "EXTENDING",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Command {
    Flex,
    Extend,
    Hold,
    Release,
}

impl Command {
    pub const ALL: [Command; 4] = [Command::Flex, Command::Extend, Command::Hold, Command::Release];
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Flex => "FLEX",
            Command::Extend => "EXTEND",
            Command::Hold => "HOLD",
            Command::Release => "RELEASE",
        })
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "FLEX" => Ok(Command::Flex),
            "EXTEND" => Ok(Command::Extend),
            "HOLD" => Ok(Command::Hold),
            "RELEASE" => Ok(Command::Release),
            other => Err(Error::InvalidArgument(format!("unknown command `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerDriveState {
    pub phase: Phase,
    /// Nut travel along the stroke, mm.
    pub motor_position: f64,
    pub sma_powered: bool,
    /// Seconds.
    pub elapsed: f64,
}

impl Default for FingerDriveState {
    fn default() -> Self {
        Self {
            phase: Phase::Idle,
            motor_position: 0.0,
            sma_powered: false,
            elapsed: 0.0,
        }
    }
}

/// Advances the drive by `dt` seconds under `command`.
///
/// FLEX winds the nut toward the stroke end with the SMA off and settles in
/// HOLDING. EXTEND backs the nut off with the SMA energized and drops to IDLE,
/// SMA off, once the nut is home. HOLD freezes the nut. RELEASE cuts all
/// power; the screw self-locks so the nut stays put.
pub fn step_sequencer(state: FingerDriveState, command: Command, dt: f64, motor: &MotorModuleSpec) -> FingerDriveState {
    step_sequencer_limited(state, command, dt, motor, motor.stroke)
}

/// As [`step_sequencer`] with FLEX travel capped at `travel_limit` mm (never
/// beyond the stroke).
pub fn step_sequencer_limited(
    state: FingerDriveState,
    command: Command,
    dt: f64,
    motor: &MotorModuleSpec,
    travel_limit: f64,
) -> FingerDriveState {
    if !(dt > 0.0) {
        return state;
    }
    let limit = travel_limit.clamp(0.0, motor.stroke);
    let pos = state.motor_position.clamp(0.0, motor.stroke);
    let travel = motor.linear_speed * dt;
    let elapsed = state.elapsed + dt;
    let (phase, motor_position, sma_powered) = match command {
        Command::Flex if pos >= limit => (Phase::Holding, pos, false),
        Command::Flex => {
            let mut next = (pos + travel).min(limit);
            if limit - next <= END_SNAP {
                next = limit;
            }
            let phase = if next >= limit { Phase::Holding } else { Phase::Flexing };
            (phase, next, false)
        }
        Command::Extend if pos <= 0.0 => (Phase::Idle, 0.0, false),
        Command::Extend => {
            let mut next = (pos - travel).max(0.0);
            if next <= END_SNAP {
                next = 0.0;
            }
            if next == 0.0 {
                (Phase::Idle, 0.0, false)
            } else {
                (Phase::Extending, next, true)
            }
        }
        Command::Hold => {
            let phase = if pos > 0.0 { Phase::Holding } else { Phase::Idle };
            (phase, pos, false)
        }
        Command::Release => (Phase::Idle, pos, false),
    };
    FingerDriveState {
        phase,
        motor_position,
        sma_powered,
        elapsed,
    }
}

/// One line of a command script.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScriptEntry {
    pub time: f64,
    pub command: Command,
}

/// Parses `<t> <FLEX|EXTEND|HOLD|RELEASE>` lines. Blank lines and `#`
/// comments are skipped; times must be finite, non-negative and
/// non-decreasing.
pub fn parse_script(text: &str) -> Result<Vec<ScriptEntry>> {
    let mut entries: Vec<ScriptEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Script { line: line_no, message };
        let mut parts = line.split_whitespace();
        let (Some(t), Some(cmd), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `<t> <COMMAND>`, got `{line}`")));
        };
        let time: f64 = t.parse().map_err(|_| err(format!("invalid time `{t}`")))?;
        if !time.is_finite() || time < 0.0 {
            return Err(err(format!("time must be finite and non-negative, got `{t}`")));
        }
        if let Some(prev) = entries.last() {
            if time < prev.time {
                return Err(err(format!("time {time} precedes the previous command at {}", prev.time)));
            }
        }
        let command = cmd.parse().map_err(|_| err(format!("unknown command `{cmd}`")))?;
        entries.push(ScriptEntry { time, command });
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSample {
    pub t: f64,
    pub state: FingerDriveState,
    pub angles: JointAngles,
}

/// Whether `command` can still move the drive.
fn settled(state: &FingerDriveState, command: Option<Command>, limit: f64) -> bool {
    match command {
        None | Some(Command::Hold) | Some(Command::Release) => true,
        Some(Command::Flex) => state.motor_position >= limit,
        Some(Command::Extend) => state.motor_position <= 0.0 && !state.sma_powered,
    }
}

/// Runs a command script on one flexor route, sampling every `dt` seconds.
///
/// The run ends once the last command has settled; the final step is
/// shortened so the nut lands exactly on its end stop.
pub fn simulate(
    route: &TendonRoute,
    chain: &DHChain,
    motor: &MotorModuleSpec,
    rest: &JointAngles,
    script: &[ScriptEntry],
    dt: f64,
) -> Result<Vec<SimulationSample>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let limit = motor.stroke.min(full_route_excursion(route, chain, rest)?).max(0.0);
    let speed = motor.linear_speed;
    let mut state = FingerDriveState::default();
    let sample = |state: &FingerDriveState| -> Result<SimulationSample> {
        Ok(SimulationSample {
            t: state.elapsed,
            state: *state,
            angles: motor_position_to_angle(route, chain, rest, state.motor_position.min(limit))?,
        })
    };
    let mut out = vec![sample(&state)?];
    let mut next_entry = 0;
    let mut command: Option<Command> = None;
    const MAX_STEPS: usize = 10_000_000;
    for _ in 0..MAX_STEPS {
        while next_entry < script.len() && script[next_entry].time <= state.elapsed {
            command = Some(script[next_entry].command);
            next_entry += 1;
        }
        let pending = script.get(next_entry).map(|e| e.time);
        if pending.is_none() && settled(&state, command, limit) {
            return Ok(out);
        }
        let mut h = dt;
        if let Some(t_next) = pending {
            h = h.min(t_next - state.elapsed);
        }
        match command {
            Some(Command::Flex) if state.motor_position < limit => {
                h = h.min((limit - state.motor_position) / speed);
            }
            Some(Command::Extend) if state.motor_position > 0.0 => {
                h = h.min(state.motor_position / speed);
            }
            _ => {}
        }
        if h <= 0.0 {
            // a zero-length step only happens at an event boundary
            h = f64::MIN_POSITIVE.max(dt * 1e-12);
        }
        state = match command {
            Some(cmd) => step_sequencer_limited(state, cmd, h, motor, limit),
            None => FingerDriveState {
                elapsed: state.elapsed + h,
                ..state
            },
        };
        out.push(sample(&state)?);
    }
    Err(Error::InvalidArgument("simulation did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand_model::{default_hand_spec, INDEX};

    fn motor() -> MotorModuleSpec {
        MotorModuleSpec::default()
    }

    #[test]
    fn motor_speed_matches_screw() {
        let m = motor();
        m.validate().unwrap();
        assert!((m.screw_speed() - 1.1667).abs() < 1e-4);
        let mut bad = m.clone();
        bad.linear_speed = 1.3;
        assert!(bad.validate().is_err());
        assert!(m.check_force(400.0).is_ok());
        assert!(m.check_force(401.0).is_err());
    }

    #[test]
    fn sma_command_limits() {
        let s = SmaModuleSpec::default();
        assert!(s.check_command(18.0, 784.0).is_ok());
        assert!(s.check_command(18.5, 10.0).is_err());
        assert!(s.check_command(5.0, 800.0).is_err());
        assert!(s.check_command(-1.0, 0.0).is_err());
    }

    #[test]
    fn heating_time_edges() {
        let s = SmaModuleSpec::default();
        assert_eq!(sma_heating_time(&s, 1.0, 90.0).unwrap(), 0.0);
        assert!(sma_heating_time(&s, 0.0, 25.0).is_err());
        assert!(sma_heating_time(&s, 1.0, 95.0).is_err());
        let t1 = sma_heating_time(&s, 1.0, 25.0).unwrap();
        let t2 = sma_heating_time(&s, 2.0, 25.0).unwrap();
        assert!((t1 / t2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn heating_with_losses() {
        let mut s = SmaModuleSpec::default();
        let adiabatic = sma_heating_time(&s, 1.0, 25.0).unwrap();
        s.convection_coefficient = 50.0;
        let lossy = sma_heating_time(&s, 1.0, 25.0).unwrap();
        assert!(lossy > adiabatic);
        assert!(matches!(sma_heating_time(&s, 0.05, 25.0), Err(Error::InsufficientPower { .. })));
    }

    #[test]
    fn default_census() {
        let spec = default_hand_spec();
        let census = spec.actuators.allocation.census();
        assert_eq!(census.to_string(), "32 actuators: 17 SMA, 15 motor");
    }

    #[test]
    fn allocation_rejects_flexor_on_sma() {
        let spec = default_hand_spec();
        let mut alloc = spec.actuators.allocation.clone();
        alloc.entries.get_mut("index-flexor-distal").unwrap().kind = ActuatorKind::Sma;
        assert!(alloc.validate(&spec.tendon_routes).is_err());
    }

    #[test]
    fn sequencer_examples() {
        let m = motor();
        let s = step_sequencer(FingerDriveState::default(), Command::Flex, 100.0, &m);
        assert_eq!((s.phase, s.motor_position, s.sma_powered), (Phase::Holding, 20.0, false));
        let e = step_sequencer(s, Command::Extend, 0.5, &m);
        assert!(e.motor_position < 20.0);
        assert!(e.sma_powered);
        assert_eq!(e.phase, Phase::Extending);
        let h = step_sequencer(e, Command::Hold, 3.0, &m);
        assert_eq!(h.motor_position, e.motor_position);
        assert!(!h.sma_powered);
        let home = step_sequencer(e, Command::Extend, 100.0, &m);
        assert_eq!((home.phase, home.motor_position, home.sma_powered), (Phase::Idle, 0.0, false));
        let r = step_sequencer(s, Command::Release, 1.0, &m);
        assert_eq!((r.phase, r.motor_position), (Phase::Idle, 20.0));
        assert_eq!(r.elapsed, s.elapsed + 1.0);
    }

    #[test]
    fn script_parsing() {
        let script = parse_script("# demo\n0 FLEX\n\n5.5 HOLD   # pause\n10 EXTEND\n").unwrap();
        assert_eq!(script.len(), 3);
        assert_eq!(script[1], ScriptEntry { time: 5.5, command: Command::Hold });
        let err = parse_script("0 FLEX\n1 JUMP\n").unwrap_err();
        assert_eq!(err, Error::Script { line: 2, message: "unknown command `JUMP`".into() });
        assert!(matches!(parse_script("5 FLEX\n1 HOLD"), Err(Error::Script { line: 2, .. })));
        assert!(matches!(parse_script("x FLEX"), Err(Error::Script { line: 1, .. })));
        assert!(matches!(parse_script("1 FLEX extra"), Err(Error::Script { line: 1, .. })));
        assert!(matches!(parse_script("-1 FLEX"), Err(Error::Script { line: 1, .. })));
        assert!(matches!(parse_script("inf FLEX"), Err(Error::Script { line: 1, .. })));
    }

    #[test]
    fn position_to_angle_endpoints() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let route = spec.route("index-flexor-distal").unwrap();
        let rest = chain.zero_angles();
        assert_eq!(motor_position_to_angle(route, chain, &rest, 0.0).unwrap(), rest);
        let total = full_route_excursion(route, chain, &rest).unwrap();
        let full = motor_position_to_angle(route, chain, &rest, total).unwrap();
        assert_eq!(full, JointAngles::from([0.0, 90.0, 110.0, 90.0]));
        assert!(matches!(
            motor_position_to_angle(route, chain, &rest, total + 1.0),
            Err(Error::ExcursionExceeded { .. })
        ));
        let ext = spec.route("index-extensor-middle").unwrap();
        assert!(motor_position_to_angle(ext, chain, &rest, 1.0).is_err());
    }

    #[test]
    fn trajectory_degenerate_sampling() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let route = spec.route("index-flexor-distal").unwrap();
        let traj = flexion_trajectory(route, chain, &motor(), &chain.zero_angles(), 1000.0).unwrap();
        assert_eq!(traj.len(), 2);
        assert!((traj[1].t - 20.0 / 1.17).abs() < 1e-12);
    }

    /// Time for the lumped wire model to reach the transition temperature,
    /// by fixed-step RK4.
    fn integrate_heating(spec: &SmaModuleSpec, current: f64, ambient: f64, h: f64) -> f64 {
        let capacity = spec.wire_mass() * spec.specific_heat;
        let power = current * current * spec.resistance();
        let conductance = spec.convection_coefficient * spec.surface_area();
        let rate = |temp: f64| (power - conductance * (temp - ambient)) / capacity;
        let (mut t, mut temp) = (0.0, ambient);
        loop {
            let k1 = rate(temp);
            let k2 = rate(temp + 0.5 * h * k1);
            let k3 = rate(temp + 0.5 * h * k2);
            let k4 = rate(temp + h * k3);
            let next = temp + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if next >= spec.transition_temperature {
                return t + h * (spec.transition_temperature - temp) / (next - temp);
            }
            temp = next;
            t += h;
        }
    }

    #[test]
    fn heating_time_matches_ode() {
        let mut s = SmaModuleSpec::default();
        let closed = sma_heating_time(&s, 1.0, 25.0).unwrap();
        let ode = integrate_heating(&s, 1.0, 25.0, closed / 2000.0);
        assert!((closed - ode).abs() / ode < 1e-3, "{closed} vs {ode}");
        s.convection_coefficient = 40.0;
        let closed = sma_heating_time(&s, 1.0, 25.0).unwrap();
        let ode = integrate_heating(&s, 1.0, 25.0, closed / 2000.0);
        assert!((closed - ode).abs() / ode < 1e-3, "{closed} vs {ode}");
    }

    fn pip_only_route() -> TendonRoute {
        TendonRoute {
            name: "index-flexor-pip".into(),
            kind: TendonKind::Flexor,
            finger: INDEX.into(),
            crossings: vec![crate::tendon::Crossing::new(2, crate::hand_model::default_joint_geometry(), 1)],
            actuator: "index-motor-pip".into(),
            material: Default::default(),
        }
    }

    #[test]
    fn stroke_sufficiency_examples() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let route = pip_only_route();
        let report = stroke_sufficiency(&route, chain, &motor()).unwrap();
        assert!((report.required - 16.86).abs() < 1e-9);
        assert_eq!(report.available, 20.0);
        assert!(report.sufficient);
        let short = MotorModuleSpec {
            stroke: 10.0,
            ..motor()
        };
        assert!(!stroke_sufficiency(&route, chain, &short).unwrap().sufficient);
        let empty = TendonRoute {
            crossings: vec![],
            ..route
        };
        let report = stroke_sufficiency(&empty, chain, &motor()).unwrap();
        assert_eq!(report.required, 0.0);
        assert!(report.sufficient);
    }

    #[test]
    fn trajectory_durations() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let rest = chain.zero_angles();
        let full = flexion_trajectory(spec.route("index-flexor-distal").unwrap(), chain, &motor(), &rest, 0.5).unwrap();
        assert!((full.last().unwrap().t - 17.09).abs() < 0.01);
        assert_eq!(full.last().unwrap().motor_position, 20.0);
        let pip = flexion_trajectory(&pip_only_route(), chain, &motor(), &rest, 0.5).unwrap();
        let end = pip.last().unwrap();
        assert!((end.t - 14.41).abs() < 0.01, "{}", end.t);
        assert_eq!(end.angles, JointAngles::from([0.0, 0.0, 110.0, 0.0]));
        for w in pip.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!(w[1].angles[2] >= w[0].angles[2]);
        }
    }

    #[test]
    fn half_excursion_round_trip() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let route = spec.route("index-flexor-middle").unwrap();
        let rest = chain.zero_angles();
        let total = full_route_excursion(route, chain, &rest).unwrap();
        let angles = motor_position_to_angle(route, chain, &rest, total / 2.0).unwrap();
        let back = route_excursion(route, &rest, &angles).unwrap();
        assert!((back - total / 2.0).abs() < 1e-6);
    }

    #[test]
    fn simulate_flex_then_extend() {
        let spec = default_hand_spec();
        let chain = spec.chain(INDEX).unwrap();
        let route = spec.route("index-flexor-distal").unwrap();
        let script = parse_script("0 FLEX\n20 EXTEND\n").unwrap();
        let run = simulate(route, chain, &motor(), &chain.zero_angles(), &script, 0.25).unwrap();
        let last = run.last().unwrap();
        assert_eq!(last.state.phase, Phase::Idle);
        assert_eq!(last.state.motor_position, 0.0);
        assert!((last.t - (20.0 + 20.0 / 1.17)).abs() < 1e-9);
        for s in &run {
            assert_eq!(s.state.sma_powered, s.state.phase == Phase::Extending);
            if s.state.sma_powered {
                assert!(s.t > 20.0);
            }
        }
        assert!(run.iter().any(|s| s.state.sma_powered));
    }
}

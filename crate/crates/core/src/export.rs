//! Deterministic text and CSV rendering of numeric results.

use std::fmt::Write;

use crate::actuation::{SimulationSample, TrajectorySample};
use crate::kinematics::FingertipPoint;
use crate::tendon::ProfileRow;

/// Six decimals, with negative zero printed as zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn join(values: impl IntoIterator<Item = f64>, sep: &str) -> String {
    values.into_iter().map(fmt6).collect::<Vec<_>>().join(sep)
}

/// Space-separated six-decimal values.
pub fn fmt_row(values: impl IntoIterator<Item = f64>) -> String {
    join(values, " ")
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("theta_deg,length_mm,moment_arm_mm\n");
    for r in rows {
        let _ = writeln!(out, "{}", join([r.theta, r.length, r.moment_arm], ","));
    }
    out
}

pub fn profile_text(rows: &[ProfileRow]) -> String {
    let mut out = String::from("theta_deg length_mm moment_arm_mm\n");
    for r in rows {
        let _ = writeln!(out, "{}", fmt_row([r.theta, r.length, r.moment_arm]));
    }
    out
}

const TRAJECTORY_HEADER: &str = "t_s,theta1_deg,theta2_deg,theta3_deg,theta4_deg,motor_position_mm,sma_powered";

/// Sequencer run: time, joint angles, nut position and SMA power (0/1).
pub fn simulation_csv(samples: &[SimulationSample]) -> String {
    simulation_rows(samples, ",")
}

pub fn simulation_text(samples: &[SimulationSample]) -> String {
    simulation_rows(samples, " ")
}

fn simulation_rows(samples: &[SimulationSample], sep: &str) -> String {
    let mut out = TRAJECTORY_HEADER.replace(',', sep);
    out.push('\n');
    for s in samples {
        let mut fields = vec![fmt6(s.t)];
        fields.extend(s.angles.iter().map(|a| fmt6(*a)));
        fields.push(fmt6(s.state.motor_position));
        fields.push(if s.state.sma_powered { "1" } else { "0" }.into());
        out.push_str(&fields.join(sep));
        out.push('\n');
    }
    out
}

/// Constant-speed flexion samples; SMA power is always 0.
pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = format!("{TRAJECTORY_HEADER}\n");
    for s in samples {
        let mut values = vec![s.t];
        values.extend(s.angles.iter());
        values.push(s.motor_position);
        let _ = writeln!(out, "{},0", join(values, ","));
    }
    out
}

pub fn points_csv(points: &[FingertipPoint]) -> String {
    let mut out = String::from("x_mm,y_mm,z_mm\n");
    for p in points {
        let _ = writeln!(out, "{}", join([p.x, p.y, p.z], ","));
    }
    out
}

pub fn points_text(points: &[FingertipPoint]) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "{}", fmt_row([p.x, p.y, p.z]));
    }
    out
}

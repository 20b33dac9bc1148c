use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tendon_hand::actuation::{parse_script, simulate};
use tendon_hand::export::{self, fmt6, fmt_row};
use tendon_hand::hand_model::{default_hand_spec, load_spec, save_spec, HandSpec, JointAngles};
use tendon_hand::kinematics::{
    fingertip, forward_kinematics, inverse_kinematics, sample_coupled_configurations, sample_workspace, FingertipPoint,
};
use tendon_hand::posture::{
    builtin_gesture_library, check_gesture, cutkosky_classes, generate_grasp, kapandji_score, load_gesture_library,
    save_gesture_library, save_grasp_classes, schlesinger_classes, GraspClass, CUTKOSKY_TAXONOMY,
};
use tendon_hand::tendon::{tendon_profile, TendonKind};
use tendon_hand::Error;

#[derive(Parser)]
#[command(name = "tendon-hand", version, about = "Kinematics, tendon and actuation models of a 21-DOF tendon-driven hand")]
struct Cli {
    /// Hand description file (JSON); the built-in hand when omitted.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Fingertip position and orientation for the given joint angles.
    Fk {
        #[arg(long, default_value = "index")]
        finger: String,
        /// Four joint angles in degrees.
        #[arg(long, num_args = 4, allow_negative_numbers = true, required = true)]
        deg: Vec<f64>,
    },
    /// Coupled joint angles that put the fingertip at a point.
    Ik {
        #[arg(long, default_value = "index")]
        finger: String,
        /// Target x y z in mm, finger base frame.
        #[arg(long, num_args = 3, allow_negative_numbers = true, required = true)]
        mm: Vec<f64>,
    },
    /// Tendon length and moment arm over a joint's range.
    TendonProfile {
        #[arg(long, default_value = "index")]
        finger: String,
        /// Joint name (MCP, PIP or DIP).
        #[arg(long, default_value = "PIP")]
        joint: String,
        /// Angle step in degrees.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Run a FLEX/EXTEND/HOLD/RELEASE script on one finger's flexor drive.
    Simulate {
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value = "index")]
        finger: String,
        /// Flexor route; defaults to the finger's distal flexor.
        #[arg(long)]
        route: Option<String>,
        /// Sample interval in seconds.
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
    },
    /// Run a feasibility suite.
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        /// Landmark tolerance for the Kapandji test, mm.
        #[arg(long, default_value_t = 5.0)]
        tolerance: f64,
        /// Gesture library file; the built-in library when omitted.
        #[arg(long)]
        gestures: Option<PathBuf>,
    },
    /// Fingertip points over a joint grid with the coupling applied.
    Workspace {
        #[arg(long, default_value = "index")]
        finger: String,
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
    /// Seeded FK -> IK -> FK round trips over random coupled postures.
    Sweep {
        #[arg(long, default_value = "index")]
        finger: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Print a built-in data set as JSON.
    Dump {
        #[arg(value_enum)]
        what: DumpKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Gestures,
    Kapandji,
    Grasps,
    Allocation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpKind {
    Spec,
    Gestures,
    Grasps,
}

/// A failed command: exit status plus message.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unreachable(_) => 3,
            Error::LateralIndeterminate | Error::Singular(_) => 4,
            Error::Parse(_) | Error::Script { .. } => 5,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(5, format!("cannot read {}: {e}", path.display())))
}

fn load(cli: &Cli) -> Result<HandSpec, Failure> {
    match &cli.spec {
        None => Ok(default_hand_spec()),
        Some(path) => Ok(load_spec(&read_file(path)?)?),
    }
}

/// Command output and whether every check passed.
struct Report {
    text: String,
    ok: Option<String>,
}

impl Report {
    fn done(text: String) -> Self {
        Report { text, ok: None }
    }
}

fn cmd_fk(spec: &HandSpec, finger: &str, deg: &[f64], format: Format) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let angles = JointAngles::new(deg.to_vec());
    let pose = forward_kinematics(chain, &angles)?;
    let p = pose.position;
    let r = pose.rotation;
    let rows = (0..3).map(|i| [r[(i, 0)], r[(i, 1)], r[(i, 2)]]);
    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(out, "{}", fmt_row([p.x, p.y, p.z]));
            for row in rows {
                let _ = writeln!(out, "{}", fmt_row(row));
            }
        }
        Format::Csv => {
            out.push_str("x_mm,y_mm,z_mm,r11,r12,r13,r21,r22,r23,r31,r32,r33\n");
            let mut values = vec![p.x, p.y, p.z];
            values.extend(rows.flatten());
            let _ = writeln!(out, "{}", values.into_iter().map(fmt6).collect::<Vec<_>>().join(","));
        }
    }
    Ok(Report::done(out))
}

fn coupling<'a>(spec: &'a HandSpec, finger: &str) -> Result<&'a tendon_hand::hand_model::CouplingRule, Failure> {
    spec.chain(finger)?;
    spec.coupling(finger)
        .ok_or_else(|| fail(2, format!("finger {finger} has no coupling rule; closed-form IK needs one")))
}

fn cmd_ik(spec: &HandSpec, finger: &str, mm: &[f64], format: Format) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let rule = coupling(spec, finger)?;
    let angles = inverse_kinematics(chain, &FingertipPoint::new(mm[0], mm[1], mm[2]), rule)?;
    let out = match format {
        Format::Text => format!("{}\n", fmt_row(angles.iter().copied())),
        Format::Csv => format!(
            "theta1_deg,theta2_deg,theta3_deg,theta4_deg\n{}\n",
            angles.iter().map(|a| fmt6(*a)).collect::<Vec<_>>().join(",")
        ),
    };
    Ok(Report::done(out))
}

fn cmd_tendon_profile(spec: &HandSpec, finger: &str, joint: &str, step: f64, format: Format) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let index = chain
        .rows
        .iter()
        .position(|r| r.joint.eq_ignore_ascii_case(joint))
        .ok_or_else(|| Error::UnknownJoint(format!("{finger} {joint}")))?;
    let row = &chain.rows[index];
    let geometry = spec
        .routes_for(finger)
        .filter(|r| r.kind == TendonKind::Flexor)
        .flat_map(|r| r.crossings.iter())
        .find(|c| c.joint == index)
        .map(|c| c.geometry)
        .ok_or_else(|| fail(2, format!("no flexor tendon crosses {finger} {}", row.joint)))?;
    let rows = tendon_profile(&geometry, row.theta_min, row.theta_max, step)?;
    Ok(Report::done(match format {
        Format::Csv => export::profile_csv(&rows),
        Format::Text => export::profile_text(&rows),
    }))
}

fn cmd_simulate(
    spec: &HandSpec,
    script: &Path,
    finger: &str,
    route: Option<&str>,
    dt: f64,
    format: Format,
) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let route_name = route.map_or_else(|| format!("{finger}-flexor-distal"), str::to_string);
    let route = spec.route(&route_name)?;
    if route.finger != finger {
        return Err(fail(2, format!("route {route_name} belongs to {}", route.finger)));
    }
    let entries = parse_script(&read_file(script)?)?;
    let samples = simulate(route, chain, &spec.actuators.motor, &chain.zero_angles(), &entries, dt)?;
    Ok(Report::done(match format {
        Format::Csv => export::simulation_csv(&samples),
        Format::Text => export::simulation_text(&samples),
    }))
}

fn check_gestures(spec: &HandSpec, library: Option<&Path>) -> Result<Report, Failure> {
    let gestures = match library {
        None => builtin_gesture_library(),
        Some(path) => load_gesture_library(&read_file(path)?)?,
    };
    let mut out = String::new();
    let mut first_failure = None;
    let mut feasible = 0;
    for g in &gestures {
        let verdict = check_gesture(spec, g)?;
        if verdict.feasible() {
            feasible += 1;
        } else {
            for v in &verdict.violations {
                let _ = writeln!(out, "{}: {v}", g.name);
            }
            first_failure.get_or_insert_with(|| format!("gesture {} infeasible: {}", g.name, verdict.violations[0]));
        }
    }
    let _ = writeln!(out, "{feasible}/{} feasible", gestures.len());
    Ok(Report {
        text: out,
        ok: first_failure,
    })
}

fn check_kapandji(spec: &HandSpec, tolerance: f64) -> Result<Report, Failure> {
    let report = kapandji_score(spec, tolerance)?;
    let mut out = String::new();
    let mut first_failure = None;
    for e in &report.entries {
        let _ = writeln!(
            out,
            "{:>2} {:<45} residual {} mm {}",
            e.target.index,
            e.target.description,
            fmt6(e.residual),
            if e.reached { "reached" } else { "missed" }
        );
        if !e.reached {
            first_failure.get_or_insert_with(|| format!("landmark {} ({}) missed", e.target.index, e.target.description));
        }
    }
    let _ = writeln!(out, "Kapandji score {}/10 at {} mm", report.score, fmt6(tolerance));
    Ok(Report {
        text: out,
        ok: first_failure,
    })
}

fn check_grasps(spec: &HandSpec) -> Result<Report, Failure> {
    let mut out = String::new();
    let mut first_failure = None;
    let mut run = |classes: &[GraspClass], out: &mut String| -> Vec<bool> {
        classes
            .iter()
            .map(|c| match generate_grasp(spec, c) {
                Ok(g) => {
                    let _ = writeln!(
                        out,
                        "{} {}: flexion {} aperture {} mm",
                        c.taxonomy,
                        c.name,
                        fmt6(g.flexion),
                        fmt6(g.aperture)
                    );
                    true
                }
                Err(e) => {
                    let _ = writeln!(out, "{} {}: {e}", c.taxonomy, c.name);
                    first_failure.get_or_insert_with(|| format!("{} {}: {e}", c.taxonomy, c.name));
                    false
                }
            })
            .collect()
    };
    let schlesinger = schlesinger_classes();
    let s_ok = run(&schlesinger, &mut out);
    let cutkosky = cutkosky_classes();
    let c_ok = run(&cutkosky, &mut out);
    let demonstrated = schlesinger.iter().zip(&s_ok).filter(|(c, ok)| c.demonstrated && **ok).count();
    let untested: Vec<&str> = schlesinger
        .iter()
        .filter(|c| !c.demonstrated)
        .map(|c| c.name.as_str())
        .collect();
    let _ = write!(out, "Schlesinger {demonstrated}/{} demonstrated", schlesinger.len());
    if !untested.is_empty() {
        let _ = write!(out, " ({} untested)", untested.join(", "));
    }
    let _ = writeln!(
        out,
        ", Cutkosky {}/{}",
        c_ok.iter().filter(|ok| **ok).count(),
        CUTKOSKY_TAXONOMY.len()
    );
    Ok(Report {
        text: out,
        ok: first_failure,
    })
}

fn check_allocation(spec: &HandSpec) -> Result<Report, Failure> {
    let census = spec.actuators.allocation.census();
    match spec.actuators.allocation.validate(&spec.tendon_routes) {
        Ok(()) => Ok(Report::done(format!("{census} — OK\n"))),
        Err(e) => Ok(Report {
            text: format!("{census} — FAILED\n"),
            ok: Some(e.to_string()),
        }),
    }
}

fn cmd_workspace(spec: &HandSpec, finger: &str, grid: usize, format: Format) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let rule = coupling(spec, finger)?;
    let points = sample_workspace(chain, rule, grid);
    Ok(Report::done(match format {
        Format::Csv => export::points_csv(&points),
        Format::Text => export::points_text(&points),
    }))
}

fn cmd_sweep(spec: &HandSpec, finger: &str, count: usize, seed: u64, format: Format) -> Result<Report, Failure> {
    let chain = spec.chain(finger)?;
    let rule = coupling(spec, finger)?;
    let sep = if format == Format::Csv { "," } else { " " };
    let header = ["theta1_deg", "theta2_deg", "theta3_deg", "theta4_deg", "x_mm", "y_mm", "z_mm", "error_mm"];
    let mut out = header.join(sep);
    out.push('\n');
    let mut worst: f64 = 0.0;
    for angles in sample_coupled_configurations(chain, rule, count, 1.0, seed) {
        let tip = fingertip(chain, &angles)?;
        let solved = inverse_kinematics(chain, &tip, rule)?;
        let error = fingertip(chain, &solved)?.distance(&tip);
        worst = worst.max(error);
        let mut values: Vec<f64> = angles.iter().copied().collect();
        values.extend([tip.x, tip.y, tip.z, error]);
        out.push_str(&values.into_iter().map(fmt6).collect::<Vec<_>>().join(sep));
        out.push('\n');
    }
    if format == Format::Text {
        let _ = writeln!(out, "max round-trip error {} mm over {count} samples (seed {seed})", fmt6(worst));
    }
    Ok(Report::done(out))
}

fn cmd_dump(spec: &HandSpec, what: DumpKind) -> Result<Report, Failure> {
    Ok(Report::done(match what {
        DumpKind::Spec => save_spec(spec),
        DumpKind::Gestures => save_gesture_library(&builtin_gesture_library()),
        DumpKind::Grasps => {
            let classes: Vec<GraspClass> = schlesinger_classes().into_iter().chain(cutkosky_classes()).collect();
            save_grasp_classes(&classes)
        }
    }))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let spec = load(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Fk { finger, deg } => cmd_fk(&spec, finger, deg, format),
        Command::Ik { finger, mm } => cmd_ik(&spec, finger, mm, format),
        Command::TendonProfile { finger, joint, step } => cmd_tendon_profile(&spec, finger, joint, *step, format),
        Command::Simulate {
            script,
            finger,
            route,
            dt,
        } => cmd_simulate(&spec, script, finger, route.as_deref(), *dt, format),
        Command::Check {
            what,
            tolerance,
            gestures,
        } => match what {
            CheckKind::Gestures => check_gestures(&spec, gestures.as_deref()),
            CheckKind::Kapandji => check_kapandji(&spec, *tolerance),
            CheckKind::Grasps => check_grasps(&spec),
            CheckKind::Allocation => check_allocation(&spec),
        },
        Command::Workspace { finger, grid } => cmd_workspace(&spec, finger, *grid, format),
        Command::Sweep { finger, count } => cmd_sweep(&spec, finger, *count, cli.seed, format),
        Command::Dump { what } => cmd_dump(&spec, *what),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| fail(5, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        emit(&cli, &report.text)?;
        match report.ok {
            None => Ok(()),
            Some(first) => Err(fail(1, first)),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

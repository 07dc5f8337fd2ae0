//! Command-line front end for the actuator models: theoretical profiles,
//! scenario simulation, energy-recovery reports, model identification, and
//! EMG envelope extraction.
//!
//! Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 numerical
//! failure. All emitted numbers use fixed scientific notation so outputs are
//! byte-identical across runs.

mod config;
mod csvio;
mod errors;

use clap::{Args, Parser, Subcommand};
use config::{parse_convention, Config};
use csvio::{fmt_f, read_numeric_csv, write_out};
use errors::CliError;
use exosim_core::fit::{fit_pam_quartic, fit_pump, FitResult, SampleSeries};
use exosim_core::signal::{envelope, mvc_normalize, segment_by_transition, SegmentThresholds, SegmentedCycle, Trace};
use exosim_core::sim::{
    energy_report, run_scenario, synthetic_trajectory, theoretical_profiles, EnergyReport,
    ScenarioOptions, SimSample, TrajectoryPoint,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "exosim", version, about = "Air-regenerative knee-exoskeleton actuator simulator")]
struct Cli {
    /// Configuration file (`key = value` with `[section]` headers)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Pressure convention: absolute | gauge-naive
    #[arg(long, global = true)]
    convention: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Torque-mode profiles over an angle sweep (pressure, volumes, torque)
    Profiles(ProfilesArgs),
    /// Run the sit-to-stand protocol over a trajectory
    Simulate(SimulateArgs),
    /// Analytic refill/frequency/endurance report for one pump
    EnergyReport(EnergyReportArgs),
    /// Fit the exponential pump charge law to a `t,p` CSV
    FitPump(FitArgs),
    /// Fit the quartic contraction polynomial to a `p,eps` CSV
    FitPam(FitArgs),
    /// Rectified low-pass EMG envelope, optional MVC scaling and segmentation
    EmgEnvelope(EmgArgs),
}

#[derive(Args)]
struct ProfilesArgs {
    /// Initial gauge pressure [bar] at the flexed angle
    #[arg(long, default_value_t = 3.2)]
    p_init: f64,
    /// Sweep start angle [deg]
    #[arg(long, default_value_t = 107.0)]
    from: f64,
    /// Sweep end angle [deg]
    #[arg(long, default_value_t = 0.0)]
    to: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Trajectory CSV (`t,theta_deg`); a synthetic one is generated when omitted
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Sit-to-stand repetitions
    #[arg(long, default_value_t = 10)]
    repetitions: u32,
    /// Pump selection: small | large
    #[arg(long)]
    pump: Option<String>,
    /// Legs charged through the shared pump (1 or 2)
    #[arg(long)]
    legs: Option<u8>,
    /// Per-sample output CSV
    #[arg(long)]
    samples_out: Option<PathBuf>,
    /// Transition events CSV
    #[arg(long)]
    events_out: Option<PathBuf>,
    /// Energy report (`key=value`; stdout when omitted)
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyReportArgs {
    /// Pump selection: small | large
    #[arg(long)]
    pump: Option<String>,
    /// Charge set point [gauge bar]
    #[arg(long, default_value_t = 3.2)]
    p_set: f64,
    /// Pressure left after standing up without recovery [gauge bar]
    #[arg(long, default_value_t = 1.85)]
    p_standing: f64,
    /// Pressure after the air return [gauge bar]
    #[arg(long, default_value_t = 2.46)]
    p_recovered: f64,
    /// Legs charged through the shared pump (1 or 2)
    #[arg(long)]
    legs: Option<u8>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV `x,y` with one header row
    #[arg(long)]
    input: PathBuf,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmgArgs {
    /// Input CSV: `t,emg` or `t,emg,knee_deg`, one header row
    #[arg(long)]
    input: PathBuf,
    /// Sampling rate [Hz]
    #[arg(long)]
    sample_rate: f64,
    /// MVC level for %MVC normalization
    #[arg(long)]
    mvc: Option<f64>,
    /// Envelope output CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Segmented-cycle output CSV (`direction,phase_pct,mean,std`); requires
    /// the three-column input
    #[arg(long)]
    segments_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("exosim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(c) = &cli.convention {
        cfg.convention = parse_convention(c)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Profiles(a) => cmd_profiles(&cfg, a),
        Command::Simulate(a) => cmd_simulate(&cfg, a),
        Command::EnergyReport(a) => cmd_energy_report(&cfg, a),
        Command::FitPump(a) => cmd_fit(&cfg, a, FitWhat::Pump),
        Command::FitPam(a) => cmd_fit(&cfg, a, FitWhat::Pam),
        Command::EmgEnvelope(a) => cmd_emg(&cfg, a),
    }
}

const SAMPLE_HEADER: &str =
    "t_s,theta_deg,mode,p_pam_bar,p_cyl_bar,v_m_m3,v_c_m3,l_m_m,z_m,force_n,torque_nm";

fn sample_row(s: &SimSample) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_f(s.t_s),
        fmt_f(s.theta_deg),
        s.mode.name(),
        fmt_f(s.p_pam_bar),
        fmt_f(s.p_cyl_bar),
        fmt_f(s.v_m_m3),
        fmt_f(s.v_c_m3),
        fmt_f(s.l_m_m),
        fmt_f(s.z_m),
        fmt_f(s.force_n),
        fmt_f(s.torque_nm)
    )
}

fn cmd_profiles(cfg: &Config, a: &ProfilesArgs) -> Result<(), CliError> {
    if a.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    if !(a.from > a.to) {
        return Err(CliError::Usage("--from must be greater than --to".into()));
    }
    let models = cfg.models()?;
    let rows = theoretical_profiles(&models, cfg.convention, a.p_init, a.from, a.to, a.steps)?;
    let mut out = String::from(SAMPLE_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&sample_row(r));
        out.push('\n');
    }
    write_out(a.out.as_deref(), &out)
}

fn report_text(r: &EnergyReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("pump = {}\n", r.pump_label));
    s.push_str(&format!("legs = {}\n", r.legs));
    for (k, v) in [
        ("p_set_bar", r.p_set_bar),
        ("p_standing_bar", r.p_standing_bar),
        ("p_recovered_bar", r.p_recovered_bar),
        ("refill_with_er_one_leg_s", r.refill_with_er_one_leg_s),
        ("refill_with_er_both_legs_s", r.refill_with_er_both_legs_s),
        ("refill_without_er_one_leg_s", r.refill_without_er_one_leg_s),
        (
            "refill_without_er_both_legs_s",
            r.refill_without_er_both_legs_s,
        ),
        ("max_freq_with_er_per_min", r.max_freq_with_er_per_min),
        ("max_freq_without_er_per_min", r.max_freq_without_er_per_min),
        ("endurance_factor", r.endurance_factor),
        ("pump_on_total_s", r.pump_on_total_s),
    ] {
        s.push_str(&format!("{k} = {}\n", fmt_f(v)));
    }
    s
}

fn cmd_energy_report(cfg: &Config, a: &EnergyReportArgs) -> Result<(), CliError> {
    if !(a.p_standing < a.p_recovered && a.p_recovered < a.p_set) {
        return Err(CliError::Usage(
            "pressures must satisfy p_standing < p_recovered < p_set".into(),
        ));
    }
    let mut cfg = cfg.clone();
    if let Some(p) = &a.pump {
        cfg.pump_kind = p.clone();
    }
    let pump = cfg.pump()?;
    let legs = a.legs.unwrap_or(cfg.legs);
    let report = energy_report(&pump, a.p_set, a.p_standing, a.p_recovered, legs)?;
    write_out(a.out.as_deref(), &report_text(&report))
}

fn cmd_simulate(cfg: &Config, a: &SimulateArgs) -> Result<(), CliError> {
    let mut cfg = cfg.clone();
    if let Some(p) = &a.pump {
        cfg.pump_kind = p.clone();
    }
    if let Some(l) = a.legs {
        cfg.legs = l;
    }
    let models = cfg.models()?;
    let pump = cfg.pump()?;
    let trajectory: Vec<TrajectoryPoint> = match &a.trajectory {
        Some(path) => read_numeric_csv(path, 2)?
            .into_iter()
            .map(|row| TrajectoryPoint {
                t_s: row[0],
                theta_deg: row[1],
            })
            .collect(),
        None => synthetic_trajectory(
            cfg.seat_deg,
            cfg.transfer_s,
            cfg.sit_hold_s,
            cfg.stand_hold_s,
            a.repetitions,
            cfg.dt_s,
        ),
    };
    let options = ScenarioOptions {
        convention: cfg.convention,
        merge_on_torque_entry: cfg.merge_on_torque_entry,
        legs: cfg.legs,
    };
    let result = run_scenario(
        &models,
        &pump,
        &cfg.thresholds,
        &trajectory,
        a.repetitions,
        &options,
    )?;

    if let Some(path) = &a.samples_out {
        let mut out = String::from(SAMPLE_HEADER);
        out.push('\n');
        for s in &result.samples {
            out.push_str(&sample_row(s));
            out.push('\n');
        }
        write_out(Some(path), &out)?;
    }
    if let Some(path) = &a.events_out {
        let mut out = String::from("t,mode_from,mode_to,trigger\n");
        for e in &result.events {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f(e.t_s),
                e.from.name(),
                e.to.name(),
                e.trigger
            ));
        }
        write_out(Some(path), &out)?;
    }
    write_out(a.report_out.as_deref(), &report_text(&result.report))
}

enum FitWhat {
    Pump,
    Pam,
}

fn fit_text(r: &FitResult) -> String {
    let mut s = String::new();
    for (name, v) in &r.params {
        s.push_str(&format!("{name} = {}\n", fmt_f(*v)));
    }
    s.push_str(&format!("r_squared = {}\n", fmt_f(r.r_squared)));
    s.push_str(&format!("rms_residual = {}\n", fmt_f(r.rms_residual)));
    s
}

fn cmd_fit(_cfg: &Config, a: &FitArgs, what: FitWhat) -> Result<(), CliError> {
    let rows = read_numeric_csv(&a.input, 2)?;
    let (x, y): (Vec<f64>, Vec<f64>) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
    let series = SampleSeries::new(x, y)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let result = match what {
        FitWhat::Pump => fit_pump(&series)?,
        FitWhat::Pam => fit_pam_quartic(&series)?,
    };
    write_out(a.out.as_deref(), &fit_text(&result))
}

fn segment_rows(out: &mut String, direction: &str, c: &SegmentedCycle) {
    for i in 0..c.phase_pct.len() {
        out.push_str(&format!(
            "{direction},{},{},{}\n",
            fmt_f(c.phase_pct[i]),
            fmt_f(c.mean[i]),
            fmt_f(c.std[i])
        ));
    }
}

fn cmd_emg(_cfg: &Config, a: &EmgArgs) -> Result<(), CliError> {
    if !(a.sample_rate > 0.0) {
        return Err(CliError::Usage("--sample-rate must be positive".into()));
    }
    // accept two or three columns
    let rows = match read_numeric_csv(&a.input, 3) {
        Ok(rows) => rows,
        Err(_) => read_numeric_csv(&a.input, 2)?,
    };
    let has_knee = rows[0].len() == 3;
    if a.segments_out.is_some() && !has_knee {
        return Err(CliError::Usage(
            "--segments-out needs a three-column input (t,emg,knee_deg)".into(),
        ));
    }
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let emg = Trace::new(a.sample_rate, rows.iter().map(|r| r[1]).collect())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mut env = envelope(&emg).map_err(|e| match e {
        exosim_core::ModelError::FilterDesign(m) => CliError::Usage(m),
        other => CliError::Numeric(other.to_string()),
    })?;
    if let Some(mvc) = a.mvc {
        env = mvc_normalize(&env, mvc).map_err(|e| CliError::Usage(e.to_string()))?;
    }

    if let Some(path) = &a.segments_out {
        let knee = Trace::new(a.sample_rate, rows.iter().map(|r| r[2]).collect())
            .map_err(|e| CliError::Input(e.to_string()))?;
        let (sitting, standing) = segment_by_transition(&env, &knee, &SegmentThresholds::default())?;
        let mut out = String::from("direction,phase_pct,mean,std\n");
        segment_rows(&mut out, "sitting", &sitting);
        segment_rows(&mut out, "standing", &standing);
        write_out(Some(path), &out)?;
    }

    let mut out = String::from("t,envelope\n");
    for (ti, vi) in t.iter().zip(&env.samples) {
        out.push_str(&format!("{},{}\n", fmt_f(*ti), fmt_f(*vi)));
    }
    write_out(a.out.as_deref(), &out)
}

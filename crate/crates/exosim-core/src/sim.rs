//! Quasi-static scenario driver and energy-recovery accounting.
//!
//! A knee-angle trajectory is advanced sample by sample through the valve
//! state machine and the gas network. Each mode has its own plant rule:
//! charging follows the pump law, torque mode solves the coupled isothermal
//! expansion, quasi-passive mode Boyle-compresses the trapped cylinder air,
//! and air return merges the cylinder back into the muscle. Gas equilibrates
//! instantly at each sample (no flow resistance), matching the isothermal
//! quasi-static model.

use crate::error::ModelError;
use crate::fsm::{ExoMode, SensorSnapshot, StateMachine, Thresholds, TransitionEvent};
use crate::gas::{
    coupled_pressure_at_angle, merge_isothermal, torque_mode_volume, GasState,
};
use crate::linkage::exo_torque_nm;
use crate::models::ActuatorModels;
use crate::pressure::PressureConvention;
use crate::pump::PumpModel;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t_s: f64,
    pub theta_deg: f64,
}

/// Per-sample simulation record. Pressures are gauge bar.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSample {
    pub t_s: f64,
    pub theta_deg: f64,
    pub mode: ExoMode,
    pub p_pam_bar: f64,
    pub p_cyl_bar: f64,
    pub v_m_m3: f64,
    pub v_c_m3: f64,
    pub l_m_m: f64,
    pub z_m: f64,
    pub force_n: f64,
    pub torque_nm: f64,
}

/// Cycle-level energy-recovery accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub pump_label: String,
    pub legs: u8,
    pub p_set_bar: f64,
    pub p_standing_bar: f64,
    pub p_recovered_bar: f64,
    pub refill_with_er_one_leg_s: f64,
    pub refill_with_er_both_legs_s: f64,
    pub refill_without_er_one_leg_s: f64,
    pub refill_without_er_both_legs_s: f64,
    pub max_freq_with_er_per_min: f64,
    pub max_freq_without_er_per_min: f64,
    pub endurance_factor: f64,
    /// Total pump-on time over a simulated scenario [s]; zero for the
    /// purely analytic report.
    pub pump_on_total_s: f64,
}

/// Refill times and pump-limited actuation frequencies for one recovery
/// operating point.
///
/// With recovery the pump refills from `p_recovered`, without it from
/// `p_standing`. Charging both legs through the shared pump serializes, so
/// the both-legs interval doubles the one-leg time; the frequency ceiling is
/// `60 / (legs x one-leg time)` per minute.
pub fn energy_report(
    pump: &PumpModel,
    p_set_bar: f64,
    p_standing_bar: f64,
    p_recovered_bar: f64,
    legs: u8,
) -> Result<EnergyReport, ModelError> {
    if !(p_standing_bar < p_recovered_bar && p_recovered_bar < p_set_bar) {
        return Err(ModelError::Domain {
            quantity: "pressures",
            value: p_recovered_bar,
            constraint: "p_standing < p_recovered < p_set",
        });
    }
    if legs != 1 && legs != 2 {
        return Err(ModelError::Domain {
            quantity: "legs",
            value: legs as f64,
            constraint: "legs in {1, 2}",
        });
    }
    let with_er = pump.time_to(p_recovered_bar, p_set_bar)?;
    let without_er = pump.time_to(p_standing_bar, p_set_bar)?;
    let cycle_with = legs as f64 * with_er;
    let cycle_without = legs as f64 * without_er;
    Ok(EnergyReport {
        pump_label: pump.label.clone(),
        legs,
        p_set_bar,
        p_standing_bar,
        p_recovered_bar,
        refill_with_er_one_leg_s: with_er,
        refill_with_er_both_legs_s: 2.0 * with_er,
        refill_without_er_one_leg_s: without_er,
        refill_without_er_both_legs_s: 2.0 * without_er,
        max_freq_with_er_per_min: 60.0 / cycle_with,
        max_freq_without_er_per_min: 60.0 / cycle_without,
        endurance_factor: without_er / with_er,
        pump_on_total_s: 0.0,
    })
}

/// Scenario knobs beyond the FSM thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioOptions {
    pub convention: PressureConvention,
    /// On torque entry, merge the charged muscle with the near-atmospheric
    /// cylinder chamber (true) or take the muscle pressure as-is.
    pub merge_on_torque_entry: bool,
    pub legs: u8,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self {
            convention: PressureConvention::Absolute,
            merge_on_torque_entry: true,
            legs: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub samples: Vec<SimSample>,
    pub events: Vec<TransitionEvent>,
    pub report: EnergyReport,
    /// Pump-on time per completed repetition [s].
    pub pump_on_per_rep_s: Vec<f64>,
}

/// Minimum-jerk interpolation from 0 to 1.
fn min_jerk(tau: f64) -> f64 {
    let t = tau.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

/// Synthetic sit-to-stand trajectory: an initial sit hold, then for each
/// repetition a minimum-jerk stand-up, stand hold, minimum-jerk sit-down,
/// and sit hold. The sit hold must outlast the pump refill.
pub fn synthetic_trajectory(
    seat_deg: f64,
    transfer_s: f64,
    sit_hold_s: f64,
    stand_hold_s: f64,
    repetitions: u32,
    dt_s: f64,
) -> Vec<TrajectoryPoint> {
    // integer sample indexing keeps the angle exactly periodic cycle to cycle
    let n_sit = (sit_hold_s / dt_s + 0.5) as usize;
    let n_tr = ((transfer_s / dt_s + 0.5) as usize).max(1);
    let n_stand = (stand_hold_s / dt_s + 0.5) as usize;
    let n_cycle = 2 * n_tr + n_stand + n_sit;
    let n_total = n_sit + repetitions as usize * n_cycle;
    let mut points = Vec::with_capacity(n_total + 1);
    for i in 0..=n_total {
        let theta = if i < n_sit {
            seat_deg
        } else {
            let j = (i - n_sit) % n_cycle;
            if j < n_tr {
                seat_deg * (1.0 - min_jerk(j as f64 / n_tr as f64))
            } else if j < n_tr + n_stand {
                0.0
            } else if j < 2 * n_tr + n_stand {
                seat_deg * min_jerk((j - n_tr - n_stand) as f64 / n_tr as f64)
            } else {
                seat_deg
            }
        };
        points.push(TrajectoryPoint {
            t_s: i as f64 * dt_s,
            theta_deg: theta,
        });
    }
    points
}

/// Theoretical torque-mode profiles over an angle sweep.
///
/// The initial state takes `p_init` as the gas pressure at `theta_from`
/// with the muscle and cylinder already joined; each grid angle solves the
/// coupled isothermal expansion.
pub fn theoretical_profiles(
    models: &ActuatorModels,
    conv: PressureConvention,
    p_init_gauge_bar: f64,
    theta_from_deg: f64,
    theta_to_deg: f64,
    steps: usize,
) -> Result<Vec<SimSample>, ModelError> {
    if steps < 2 {
        return Err(ModelError::Domain {
            quantity: "steps",
            value: steps as f64,
            constraint: "steps >= 2",
        });
    }
    if !(theta_from_deg > theta_to_deg) {
        return Err(ModelError::Domain {
            quantity: "theta_from",
            value: theta_from_deg,
            constraint: "theta_from > theta_to",
        });
    }
    let p0 = conv.from_gauge(p_init_gauge_bar);
    let v0 = torque_mode_volume(models, theta_from_deg, p0, conv)?;
    let init = GasState::new(p0, v0, conv)?;
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let theta =
            theta_from_deg + (theta_to_deg - theta_from_deg) * i as f64 / (steps - 1) as f64;
        let p = coupled_pressure_at_angle(theta, &init, models, conv).map_err(|e| {
            ModelError::Scenario(format!("profile solve failed at theta = {theta}: {e}"))
        })?;
        rows.push(torque_sample(models, conv, theta, theta, p)?);
    }
    Ok(rows)
}

/// Cylinder-only Boyle compression in quasi-passive mode: air trapped at
/// `theta_standing` resists flexion to `theta` as a progressive air spring.
pub fn quasi_passive_compress(
    models: &ActuatorModels,
    conv: PressureConvention,
    p_trapped_gauge_bar: f64,
    theta_standing_deg: f64,
    theta_deg: f64,
) -> Result<(f64, f64), ModelError> {
    let z0 = models
        .linkage
        .piston_position_m(&models.cylinder, theta_standing_deg);
    let v0 = models.cylinder.volume_m3(z0)?;
    let trapped = GasState::from_gauge(p_trapped_gauge_bar, v0, conv)?;
    let z = models.linkage.piston_position_m(&models.cylinder, theta_deg);
    let v = models.cylinder.volume_m3(z)?;
    let p_work = trapped.pv() / v;
    let p_gauge = conv.to_gauge(p_work);
    let force = models.cylinder.force_n(p_gauge);
    Ok((p_gauge, exo_torque_nm(force, &models.linkage, theta_deg)))
}

fn torque_sample(
    models: &ActuatorModels,
    conv: PressureConvention,
    t_s: f64,
    theta_deg: f64,
    p_work: f64,
) -> Result<SimSample, ModelError> {
    let p_gauge = conv.to_gauge(p_work);
    let l_m = models.pam.length_m(p_gauge);
    let v_m = models.pam.volume_m3(l_m)?;
    let z = models.linkage.piston_position_m(&models.cylinder, theta_deg);
    let v_c = models.cylinder.volume_m3(z)?;
    let force = models.cylinder.force_n(p_gauge);
    Ok(SimSample {
        t_s,
        theta_deg,
        mode: ExoMode::Torque,
        p_pam_bar: p_gauge,
        p_cyl_bar: p_gauge,
        v_m_m3: v_m,
        v_c_m3: v_c,
        l_m_m: l_m,
        z_m: z,
        force_n: force,
        torque_nm: exo_torque_nm(force, &models.linkage, theta_deg),
    })
}

/// Run the full sit-to-stand protocol over a trajectory.
///
/// Couples the valve state machine with the gas network and returns the
/// sample table, the transition events, the per-repetition pump-on times,
/// and the energy report evaluated at the steady-state recovery pressures.
pub fn run_scenario(
    models: &ActuatorModels,
    pump: &PumpModel,
    thresholds: &Thresholds,
    trajectory: &[TrajectoryPoint],
    repetitions: u32,
    options: &ScenarioOptions,
) -> Result<ScenarioResult, ModelError> {
    if trajectory.len() < 2 {
        return Err(ModelError::Scenario(String::from(
            "trajectory needs at least two points",
        )));
    }
    let conv = options.convention;
    let atm = conv.atmosphere();

    let mut fsm = StateMachine::new(ExoMode::ReleaseAll);
    let mut events: Vec<TransitionEvent> = Vec::new();
    let mut samples: Vec<SimSample> = Vec::with_capacity(trajectory.len());

    // plant state (working-scale pressures)
    let mut p_pam = atm;
    let mut p_cyl = atm;
    let mut torque_invariant: Option<GasState> = None;
    let mut trapped: Option<GasState> = None;

    // accounting
    let mut air_returns: u32 = 0;
    let mut completed = false;
    let mut pump_on_total = 0.0;
    let mut pump_on_this_rep = 0.0;
    let mut pump_on_per_rep: Vec<f64> = Vec::new();
    let mut p_standing_gauge = f64::NAN;
    let mut p_recovered_gauge = f64::NAN;

    let mut prev: Option<TrajectoryPoint> = None;
    for point in trajectory {
        let (dt, omega) = match prev {
            Some(p) => {
                if point.t_s <= p.t_s {
                    return Err(ModelError::Scenario(format!(
                        "trajectory time not strictly increasing at t = {}",
                        point.t_s
                    )));
                }
                let dt = point.t_s - p.t_s;
                (dt, (point.theta_deg - p.theta_deg) / dt)
            }
            None => (0.0, 0.0),
        };
        prev = Some(*point);
        let theta = point.theta_deg;

        // scenario-level completion: after the last air return has settled
        // back into transparent hold, release everything and stop triggering
        if completed {
            // stays in release
        } else if air_returns >= repetitions && fsm.mode() == ExoMode::HoldAirTransparent {
            let ev = fsm.force(point.t_s, ExoMode::ReleaseAll, "scenario complete");
            events.push(ev);
            completed = true;
            p_pam = atm;
            p_cyl = atm;
        } else {
            let snap = SensorSnapshot {
                t_s: point.t_s,
                p_pam_bar_gauge: conv.to_gauge(p_pam),
                theta_deg: theta,
                omega_deg_s: omega,
            };
            let outcome = fsm.step(&snap, thresholds);
            if let Some(ev) = outcome.event {
                // transition side effects on the gas network
                match (ev.from, ev.to) {
                    (_, ExoMode::Torque) => {
                        let v_m = models.pam.volume_at_pressure_m3(conv.to_gauge(p_pam))?;
                        let muscle = GasState::new(p_pam, v_m, conv)?;
                        let z = models.linkage.piston_position_m(&models.cylinder, theta);
                        let v_c = models.cylinder.volume_m3(z)?;
                        let p_joint = if options.merge_on_torque_entry {
                            let chamber = GasState::new(atm, v_c, conv)?;
                            merge_isothermal(
                                &muscle,
                                &chamber,
                                |p| {
                                    models
                                        .pam
                                        .volume_at_pressure_m3(conv.to_gauge(p))
                                        .unwrap_or(f64::NAN)
                                        + v_c
                                },
                                conv,
                            )?
                        } else {
                            p_pam
                        };
                        let v_joint = torque_mode_volume(models, theta, p_joint, conv)?;
                        torque_invariant = Some(GasState::new(p_joint, v_joint, conv)?);
                        p_pam = p_joint;
                        p_cyl = p_joint;
                    }
                    (ExoMode::Torque, ExoMode::QuasiPassiveDamper) => {
                        let z = models.linkage.piston_position_m(&models.cylinder, theta);
                        let v_c = models.cylinder.volume_m3(z)?;
                        trapped = Some(GasState::new(p_cyl, v_c, conv)?);
                        torque_invariant = None;
                        p_standing_gauge = conv.to_gauge(p_pam);
                    }
                    (_, ExoMode::AirReturn) => {
                        let v_m = models.pam.volume_at_pressure_m3(conv.to_gauge(p_pam))?;
                        let muscle = GasState::new(p_pam, v_m, conv)?;
                        let z = models.linkage.piston_position_m(&models.cylinder, theta);
                        let v_c = models.cylinder.volume_m3(z)?;
                        let chamber = GasState::new(p_cyl, v_c, conv)?;
                        let p_joint = merge_isothermal(
                            &muscle,
                            &chamber,
                            |p| {
                                models
                                    .pam
                                    .volume_at_pressure_m3(conv.to_gauge(p))
                                    .unwrap_or(f64::NAN)
                                    + v_c
                            },
                            conv,
                        )?;
                        p_pam = p_joint;
                        p_cyl = p_joint;
                        trapped = None;
                        p_recovered_gauge = conv.to_gauge(p_joint);
                        air_returns += 1;
                        pump_on_per_rep.push(pump_on_this_rep);
                        pump_on_this_rep = 0.0;
                    }
                    (ExoMode::AirReturn, ExoMode::HoldAirTransparent) => {
                        // cylinder vents; the muscle keeps the recovered air
                        p_cyl = atm;
                    }
                    (_, ExoMode::ReleaseAll) => {
                        p_pam = atm;
                        p_cyl = atm;
                    }
                    _ => {}
                }
                events.push(ev);
            }
        }

        // plant update for the (possibly new) mode
        let mode = if completed { ExoMode::ReleaseAll } else { fsm.mode() };
        match mode {
            ExoMode::ReleaseAll => {
                p_pam = atm;
                p_cyl = atm;
            }
            ExoMode::PumpCharging => {
                if dt > 0.0 {
                    // stop exactly at the trigger band so the charge level --
                    // and with it the whole cycle -- is step-size independent
                    let target = thresholds.p_set_bar - thresholds.p_band_bar;
                    let g0 = conv.to_gauge(p_pam);
                    let g1 = pump.advance(g0, dt);
                    let (g_new, dt_on) = if g1 >= target && g0 < target {
                        (target, pump.time_to(g0, target)?)
                    } else {
                        (g1, dt)
                    };
                    p_pam = conv.from_gauge(g_new);
                    pump_on_total += dt_on;
                    pump_on_this_rep += dt_on;
                }
                p_cyl = atm;
            }
            ExoMode::HoldAirTransparent => {
                p_cyl = atm;
            }
            ExoMode::Torque | ExoMode::AirReturn => {
                if let Some(init) = &torque_invariant {
                    let p = coupled_pressure_at_angle(theta, init, models, conv)?;
                    p_pam = p;
                    p_cyl = p;
                }
                // in AirReturn the merge above already set the pressures
            }
            ExoMode::QuasiPassiveDamper => {
                if let Some(t) = &trapped {
                    let z = models.linkage.piston_position_m(&models.cylinder, theta);
                    let v_c = models.cylinder.volume_m3(z)?;
                    p_cyl = t.pv() / v_c;
                }
            }
        }

        // record the sample
        let p_pam_gauge = conv.to_gauge(p_pam);
        let p_cyl_gauge = conv.to_gauge(p_cyl);
        let l_m = models.pam.length_m(p_pam_gauge);
        let v_m = models.pam.volume_m3(l_m)?;
        let z = models.linkage.piston_position_m(&models.cylinder, theta);
        let v_c = models.cylinder.volume_m3(z)?;
        let force = match mode {
            ExoMode::Torque | ExoMode::QuasiPassiveDamper | ExoMode::AirReturn => {
                models.cylinder.force_n(p_cyl_gauge)
            }
            _ => 0.0,
        };
        samples.push(SimSample {
            t_s: point.t_s,
            theta_deg: theta,
            mode,
            p_pam_bar: p_pam_gauge,
            p_cyl_bar: p_cyl_gauge,
            v_m_m3: v_m,
            v_c_m3: v_c,
            l_m_m: l_m,
            z_m: z,
            force_n: force,
            torque_nm: exo_torque_nm(force, &models.linkage, theta),
        });
    }

    if air_returns < repetitions {
        let missing = match fsm.mode() {
            ExoMode::ReleaseAll => "pump charging (phase 2)",
            ExoMode::PumpCharging => "charged hold (phase 3)",
            ExoMode::HoldAirTransparent => "stand-up / torque (phase 4)",
            ExoMode::Torque => "standing / quasi-passive (phase 5)",
            ExoMode::QuasiPassiveDamper => "seated / air return (phase 6)",
            ExoMode::AirReturn => "transparent hold (phase 7)",
        };
        return Err(ModelError::Scenario(format!(
            "trajectory ended after {air_returns}/{repetitions} repetitions; never reached {missing}"
        )));
    }

    if !(p_standing_gauge < p_recovered_gauge) {
        return Err(ModelError::Scenario(format!(
            "no recovery: standing {p_standing_gauge} bar, recovered {p_recovered_gauge} bar"
        )));
    }
    let p_set = thresholds.p_set_bar;
    let mut report = energy_report(
        pump,
        p_set,
        p_standing_gauge.min(p_set - 2.0 * f64::EPSILON),
        p_recovered_gauge.min(p_set - f64::EPSILON),
        options.legs,
    )?;
    report.pump_on_total_s = pump_on_total;
    Ok(ScenarioResult {
        samples,
        events,
        report,
        pump_on_per_rep_s: pump_on_per_rep,
    })
}

/// Duty-cycle scaled battery autonomy: continuous-run autonomy stretched by
/// the fraction of cycle time the pump actually runs.
pub fn battery_autonomy_h(continuous_autonomy_h: f64, pump_on_s: f64, cycle_s: f64) -> f64 {
    if pump_on_s <= 0.0 {
        return f64::INFINITY;
    }
    continuous_autonomy_h * cycle_s / pump_on_s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ActuatorModels, PumpModel, Thresholds, ScenarioOptions) {
        (
            ActuatorModels::default_paper(),
            PumpModel::small(),
            Thresholds::default(),
            ScenarioOptions::default(),
        )
    }

    fn ten_rep_trajectory() -> Vec<TrajectoryPoint> {
        synthetic_trajectory(90.0, 2.0, 8.0, 2.0, 10, 0.01)
    }

    #[test]
    fn min_jerk_endpoints() {
        assert_eq!(min_jerk(0.0), 0.0);
        assert_eq!(min_jerk(1.0), 1.0);
        assert!((min_jerk(0.5) - 0.5).abs() < 1.0e-12);
    }

    #[test]
    fn profiles_first_row_is_p_init() {
        let (models, _, _, opt) = setup();
        let rows =
            theoretical_profiles(&models, opt.convention, 3.2, 107.0, 0.0, 50).unwrap();
        assert_eq!(rows.len(), 50);
        assert!((rows[0].p_pam_bar - 3.2).abs() < 1.0e-9);
    }

    #[test]
    fn profiles_monotone_and_conservative() {
        let (models, _, _, opt) = setup();
        let conv = opt.convention;
        let rows = theoretical_profiles(&models, conv, 3.2, 107.0, 0.0, 200).unwrap();
        let pv0 = conv.from_gauge(rows[0].p_pam_bar) * (rows[0].v_m_m3 + rows[0].v_c_m3);
        for w in rows.windows(2) {
            assert!(w[1].p_pam_bar <= w[0].p_pam_bar + 1.0e-12);
            assert!(w[1].torque_nm <= w[0].torque_nm + 1.0e-9);
            assert!(w[1].v_m_m3 <= w[0].v_m_m3 + 1.0e-15);
            let vt0 = w[0].v_m_m3 + w[0].v_c_m3;
            let vt1 = w[1].v_m_m3 + w[1].v_c_m3;
            assert!(vt1 >= vt0 - 1.0e-15);
            let pv = conv.from_gauge(w[1].p_pam_bar) * vt1;
            assert!((pv - pv0).abs() / pv0 < 1.0e-10);
        }
        let last = rows.last().unwrap();
        assert!((1.6..=2.1).contains(&last.p_pam_bar), "end pressure {}", last.p_pam_bar);
    }

    #[test]
    fn profiles_usage_errors() {
        let (models, _, _, opt) = setup();
        assert!(theoretical_profiles(&models, opt.convention, 3.2, 107.0, 0.0, 1).is_err());
        assert!(theoretical_profiles(&models, opt.convention, 3.2, 0.0, 107.0, 10).is_err());
    }

    #[test]
    fn quasi_passive_identities() {
        let (models, _, _, opt) = setup();
        let conv = opt.convention;
        // no compression at the trap angle
        let (p, _t) = quasi_passive_compress(&models, conv, 1.85, 5.0, 5.0).unwrap();
        assert!((p - 1.85).abs() < 1.0e-12);
        // halving the chamber volume doubles the absolute pressure
        let z0 = models.linkage.piston_position_m(&models.cylinder, 5.0);
        let v0 = models.cylinder.volume_m3(z0).unwrap();
        // find the angle whose chamber volume is half of v0
        let mut theta_half = 5.0;
        for i in 0..=10_000 {
            let th = 5.0 + i as f64 * 0.01;
            if th > 107.0 {
                break;
            }
            let z = models.linkage.piston_position_m(&models.cylinder, th);
            if models.cylinder.volume_m3(z).unwrap() <= v0 / 2.0 {
                theta_half = th;
                break;
            }
        }
        let (p_half, _) =
            quasi_passive_compress(&models, conv, 1.85, 5.0, theta_half).unwrap();
        let ratio = conv.from_gauge(p_half) / conv.from_gauge(1.85);
        assert!((ratio - 2.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn scenario_phase_sequence_is_golden() {
        let (models, pump, th, opt) = setup();
        let result =
            run_scenario(&models, &pump, &th, &ten_rep_trajectory(), 10, &opt).unwrap();
        let seq: Vec<&str> = result.events.iter().map(|e| e.to.name()).collect();
        let mut expect: Vec<&str> = Vec::new();
        for _ in 0..10 {
            expect.extend_from_slice(&[
                "pump_charging",
                "hold_air_transparent",
                "torque",
                "quasi_passive_damper",
                "air_return",
                "hold_air_transparent",
            ]);
        }
        expect.push("release_all");
        assert_eq!(seq, expect);
    }

    #[test]
    fn scenario_pump_only_during_charging() {
        let (models, pump, th, opt) = setup();
        let result =
            run_scenario(&models, &pump, &th, &ten_rep_trajectory(), 10, &opt).unwrap();
        let mut prev_p = 0.0;
        for s in &result.samples {
            if s.mode != ExoMode::PumpCharging && s.mode != ExoMode::ReleaseAll {
                // outside charging the muscle never gains pressure from the pump
                if s.mode == ExoMode::HoldAirTransparent {
                    assert!((s.p_pam_bar - prev_p).abs() < 1.0e-12);
                }
            }
            prev_p = s.p_pam_bar;
        }
    }

    #[test]
    fn scenario_recovers_pressure() {
        let (models, pump, th, opt) = setup();
        let result =
            run_scenario(&models, &pump, &th, &ten_rep_trajectory(), 10, &opt).unwrap();
        let r = &result.report;
        assert!(r.p_recovered_bar > r.p_standing_bar);
        assert!((1.6..=2.1).contains(&r.p_standing_bar), "standing {}", r.p_standing_bar);
        assert!((2.2..=2.8).contains(&r.p_recovered_bar), "recovered {}", r.p_recovered_bar);
    }

    #[test]
    fn scenario_steady_state_pump_time() {
        let (models, pump, th, opt) = setup();
        let result =
            run_scenario(&models, &pump, &th, &ten_rep_trajectory(), 10, &opt).unwrap();
        let reps = &result.pump_on_per_rep_s;
        assert_eq!(reps.len(), 10);
        for w in reps[1..].windows(2) {
            assert!((w[1] - w[0]).abs() <= 1.0e-3, "pump time drift {:?}", w);
        }
    }

    #[test]
    fn scenario_errors_on_short_trajectory() {
        let (models, pump, th, opt) = setup();
        let traj = synthetic_trajectory(90.0, 2.0, 8.0, 2.0, 2, 0.01);
        let err = run_scenario(&models, &pump, &th, &traj, 10, &opt).unwrap_err();
        assert!(matches!(err, ModelError::Scenario(_)));
    }

    #[test]
    fn analytic_energy_report_matches_published_table() {
        let small = energy_report(&PumpModel::small(), 3.2, 1.85, 2.46, 2).unwrap();
        assert!((small.max_freq_with_er_per_min - 8.32).abs() < 0.05);
        assert!((small.max_freq_without_er_per_min - 6.55).abs() < 0.05);
        assert!((small.endurance_factor - 1.27).abs() < 0.01);
        let large = energy_report(&PumpModel::large(), 3.2, 1.85, 2.46, 2).unwrap();
        assert!((large.max_freq_with_er_per_min - 71.53).abs() < 1.5);
        assert!((large.max_freq_without_er_per_min - 43.31).abs() < 1.5);
        assert!((large.endurance_factor - 1.69).abs() < 0.03);
        // frequency identity
        assert!(
            (small.max_freq_with_er_per_min * small.refill_with_er_both_legs_s - 60.0).abs()
                < 1.0e-9
        );
    }

    #[test]
    fn energy_report_ordering_errors() {
        let pump = PumpModel::small();
        assert!(energy_report(&pump, 3.2, 2.46, 1.85, 2).is_err());
        assert!(energy_report(&pump, 3.5, 1.85, 3.4, 2).is_err());
    }
}

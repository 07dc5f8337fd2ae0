//! Operating-mode state machine.
//!
//! Six modes drive the two actuator valves and the pump from pressure,
//! angle, and angular-velocity thresholds, replicating the seven-phase
//! sit-to-stand protocol: release, charge, hold transparent, torque,
//! quasi-passive damping, air return, hold transparent.
//!
//! Motion-derived triggers must hold for a dwell interval before they fire,
//! so single-sample spikes do not switch modes. Air return is a transient
//! mode that completes in one step (valve switching is milliseconds against
//! second-scale motion) and auto-advances back to transparent hold.

use alloc::format;
use alloc::string::String;

/// Position of a monostable 3/2 solenoid valve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValvePos {
    One,
    Two,
}

impl ValvePos {
    pub fn as_char(self) -> char {
        match self {
            ValvePos::One => '1',
            ValvePos::Two => '2',
        }
    }
}

/// Static valve/pump assignment of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValveConfig {
    pub v1: ValvePos,
    pub v2: ValvePos,
    /// Pump-line valve; position '2' only while pressurizing, it is vented
    /// right after charging so back-pressure cannot stall the pump restart.
    pub p_valve: ValvePos,
    pub pump_on: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExoMode {
    ReleaseAll,
    HoldAirTransparent,
    PumpCharging,
    Torque,
    QuasiPassiveDamper,
    AirReturn,
}

impl ExoMode {
    /// Mode-to-valve mapping. Torque and AirReturn share valve positions,
    /// as do HoldAirTransparent and PumpCharging (the pump flag differs).
    pub fn config(self) -> ValveConfig {
        use ExoMode::*;
        use ValvePos::*;
        match self {
            ReleaseAll => ValveConfig {
                v1: One,
                v2: One,
                p_valve: One,
                pump_on: false,
            },
            HoldAirTransparent => ValveConfig {
                v1: One,
                v2: Two,
                p_valve: One,
                pump_on: false,
            },
            PumpCharging => ValveConfig {
                v1: One,
                v2: Two,
                p_valve: Two,
                pump_on: true,
            },
            Torque | AirReturn => ValveConfig {
                v1: Two,
                v2: One,
                p_valve: One,
                pump_on: false,
            },
            QuasiPassiveDamper => ValveConfig {
                v1: Two,
                v2: Two,
                p_valve: One,
                pump_on: false,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExoMode::ReleaseAll => "release_all",
            ExoMode::HoldAirTransparent => "hold_air_transparent",
            ExoMode::PumpCharging => "pump_charging",
            ExoMode::Torque => "torque",
            ExoMode::QuasiPassiveDamper => "quasi_passive_damper",
            ExoMode::AirReturn => "air_return",
        }
    }
}

/// One sensor reading; angular velocity is the numerically differentiated
/// knee angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSnapshot {
    pub t_s: f64,
    pub p_pam_bar_gauge: f64,
    pub theta_deg: f64,
    pub omega_deg_s: f64,
}

/// Trigger thresholds. The published protocol names the triggers but not
/// their values; these defaults are conservative and fully configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Charge set point [gauge bar].
    pub p_set_bar: f64,
    /// Charging stops at `p_set - p_band`.
    pub p_band_bar: f64,
    /// Knee angle considered fully standing [deg].
    pub theta_standing_deg: f64,
    /// Knee angle considered fully seated [deg].
    pub theta_sitting_deg: f64,
    /// Stand-up detection: omega below `-omega_trigger` [deg/s].
    pub omega_trigger_deg_s: f64,
    /// Required persistence of motion/posture triggers [s].
    pub dwell_s: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            p_set_bar: 3.2,
            p_band_bar: 0.05,
            theta_standing_deg: 5.0,
            theta_sitting_deg: 85.0, // seat angle 90 minus 5
            omega_trigger_deg_s: 10.0,
            dwell_s: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEvent {
    pub t_s: f64,
    pub from: ExoMode,
    pub to: ExoMode,
    pub trigger: String,
}

/// Outcome of one FSM step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub mode: ExoMode,
    pub config: ValveConfig,
    pub event: Option<TransitionEvent>,
}

/// Candidate transitions that need a dwell timer, identified so a change of
/// candidate resets the timer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pending {
    Seated,
    StandUp,
    Standing,
    Recharge,
}

/// Deterministic, single-owner mode state machine.
#[derive(Debug, Clone)]
pub struct StateMachine {
    mode: ExoMode,
    pending: Option<(Pending, f64)>,
}

impl StateMachine {
    pub fn new(initial: ExoMode) -> Self {
        Self {
            mode: initial,
            pending: None,
        }
    }

    pub fn mode(&self) -> ExoMode {
        self.mode
    }

    /// Advance by one sensor snapshot. Unknown conditions leave the mode
    /// unchanged.
    pub fn step(&mut self, snap: &SensorSnapshot, th: &Thresholds) -> StepOutcome {
        use ExoMode::*;
        let seated = snap.theta_deg >= th.theta_sitting_deg;
        let standing = snap.theta_deg <= th.theta_standing_deg;
        let charged = snap.p_pam_bar_gauge >= th.p_set_bar - th.p_band_bar;
        let standup = snap.omega_deg_s <= -th.omega_trigger_deg_s;

        let mut event = None;
        match self.mode {
            ReleaseAll => {
                if self.dwell_elapsed(Pending::Seated, seated && !charged, snap.t_s, th) {
                    event = Some(self.transition(snap.t_s, PumpCharging, "seated"));
                }
            }
            PumpCharging => {
                if charged {
                    event = Some(self.transition(snap.t_s, HoldAirTransparent, "p_set reached"));
                }
            }
            HoldAirTransparent => {
                if self.dwell_elapsed(Pending::Recharge, seated && !charged, snap.t_s, th) {
                    event = Some(self.transition(snap.t_s, PumpCharging, "recharge"));
                } else if self.dwell_elapsed(Pending::StandUp, standup && charged, snap.t_s, th) {
                    // valve ordering on entry is part of the contract
                    event = Some(self.transition(
                        snap.t_s,
                        Torque,
                        "standup detected; v1 to '2' before v2 to '1'",
                    ));
                }
            }
            Torque => {
                if self.dwell_elapsed(Pending::Standing, standing, snap.t_s, th) {
                    event = Some(self.transition(snap.t_s, QuasiPassiveDamper, "standing"));
                }
            }
            QuasiPassiveDamper => {
                if self.dwell_elapsed(Pending::Seated, seated, snap.t_s, th) {
                    event = Some(self.transition(snap.t_s, AirReturn, "seated"));
                }
            }
            AirReturn => {
                // transient: completes within one step
                event = Some(self.transition(snap.t_s, HoldAirTransparent, "air return complete"));
            }
        }
        StepOutcome {
            mode: self.mode,
            config: self.mode.config(),
            event,
        }
    }

    /// Force a mode change from scenario-level control (e.g. end of trial).
    pub fn force(&mut self, t_s: f64, to: ExoMode, trigger: &str) -> TransitionEvent {
        self.transition(t_s, to, trigger)
    }

    fn transition(&mut self, t_s: f64, to: ExoMode, trigger: &str) -> TransitionEvent {
        let ev = TransitionEvent {
            t_s,
            from: self.mode,
            to,
            trigger: format!("{trigger}"),
        };
        self.mode = to;
        self.pending = None;
        ev
    }

    /// Track how long `cond` has held; true once it has persisted `dwell_s`.
    fn dwell_elapsed(&mut self, kind: Pending, cond: bool, t_s: f64, th: &Thresholds) -> bool {
        if !cond {
            if matches!(self.pending, Some((k, _)) if k == kind) {
                self.pending = None;
            }
            return false;
        }
        match self.pending {
            // small slack so float jitter in t cannot flip the comparison
            Some((k, since)) if k == kind => t_s - since >= th.dwell_s - 1.0e-9,
            _ => {
                self.pending = Some((kind, t_s));
                th.dwell_s <= 0.0
            }
        }
    }
}

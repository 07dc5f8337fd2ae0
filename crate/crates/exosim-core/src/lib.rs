//! Quasi-static model of an air-regenerative pneumatic knee-exoskeleton
//! actuator: pump charging, PAM storage, coupled isothermal expansion into a
//! cylinder, a valve-mode state machine, sit-to-stand cycle simulation with
//! energy-recovery accounting, plus the curve-fitting and EMG-envelope
//! pipelines used for model identification and evaluation.
//!
//! The crate is `no_std` + `alloc`; all file formats and the CLI live in the
//! companion `exosim-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cylinder;
pub mod error;
pub mod fit;
pub mod fsm;
pub mod gas;
pub mod linkage;
mod math;
pub mod models;
pub mod pam;
pub mod pressure;
pub mod pump;
pub mod signal;
pub mod sim;
pub mod solve;

pub use cylinder::CylinderModel;
pub use error::ModelError;
pub use fit::{FitResult, SampleSeries};
pub use fsm::{ExoMode, SensorSnapshot, StateMachine, Thresholds, TransitionEvent, ValveConfig, ValvePos};
pub use gas::GasState;
pub use linkage::LinkageModel;
pub use models::ActuatorModels;
pub use pam::PamModel;
pub use pressure::PressureConvention;
pub use pump::PumpModel;
pub use signal::{FilterKind, FilterSpec, SegmentThresholds, SegmentedCycle, Trace};
pub use sim::{EnergyReport, ScenarioOptions, ScenarioResult, SimSample, TrajectoryPoint};

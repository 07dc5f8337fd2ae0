//! Flat `key = value` configuration with `[section]` headers.
//!
//! Every parameter defaults to the identified hardware set; a config file
//! overrides defaults, and command-line flags override the file.

use crate::errors::CliError;
use exosim_core::fsm::Thresholds;
use exosim_core::models::{ActuatorModels, MAX_TORQUE_NM, MAX_TORQUE_PRESSURE_BAR};
use exosim_core::pam::{braid_from_rest, PamModel};
use exosim_core::pressure::BAR_TO_PA;
use exosim_core::{CylinderModel, LinkageModel, PressureConvention, PumpModel};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Config {
    pub pump_kind: String,
    pub pump_p_max_bar: Option<f64>,
    pub pump_k_s: Option<f64>,

    pub pam_rest_length_m: f64,
    pub pam_rest_diameter_m: f64,
    pub pam_braid_angle_deg: f64,
    pub pam_coeffs_mm: [f64; 5],
    pub pam_max_contraction_mm: f64,
    pub pam_tube_id_m: f64,
    pub pam_tube_len_m: f64,

    pub cyl_bore_m: f64,
    pub cyl_stroke_m: f64,
    pub cyl_tube_id_m: f64,
    pub cyl_tube_len_m: f64,

    /// Explicit pin geometry; when absent the pins are calibrated to the
    /// rated torque.
    pub link_pin_a_m: Option<f64>,
    pub link_pin_b_m: Option<f64>,
    pub link_gamma0_deg: f64,
    pub link_theta_hi_deg: f64,

    pub thresholds: Thresholds,
    pub convention: PressureConvention,
    pub legs: u8,

    pub seat_deg: f64,
    pub transfer_s: f64,
    pub sit_hold_s: f64,
    pub stand_hold_s: f64,
    pub dt_s: f64,
    pub merge_on_torque_entry: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            pump_kind: "small".into(),
            pump_p_max_bar: None,
            pump_k_s: None,
            pam_rest_length_m: 0.100,
            pam_rest_diameter_m: 0.020,
            pam_braid_angle_deg: 23.0,
            pam_coeffs_mm: [0.1022, -1.3370, 5.1426, -0.8131, 0.4189],
            pam_max_contraction_mm: 25.0,
            pam_tube_id_m: 0.0025,
            pam_tube_len_m: 0.3,
            cyl_bore_m: 0.025,
            cyl_stroke_m: 0.100,
            cyl_tube_id_m: 0.0025,
            cyl_tube_len_m: 0.3,
            link_pin_a_m: None,
            link_pin_b_m: None,
            link_gamma0_deg: 178.0,
            link_theta_hi_deg: 107.0,
            thresholds: Thresholds::default(),
            convention: PressureConvention::Absolute,
            legs: 2,
            seat_deg: 90.0,
            transfer_s: 2.0,
            sit_hold_s: 8.0,
            stand_hold_s: 2.0,
            dt_s: 0.01,
            merge_on_torque_entry: true,
        }
    }
}

fn parse_kv(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Input(format!(
                "{origin}:{line_no}: expected `key = value` or `[section]`"
            )));
        };
        let key = if section.is_empty() {
            k.trim().to_string()
        } else {
            format!("{section}.{}", k.trim())
        };
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn f64_of(v: &str, key: &str, origin: &str) -> Result<f64, CliError> {
    v.parse()
        .map_err(|_| CliError::Input(format!("{origin}: {key}: not a number: {v:?}")))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let origin = path.display().to_string();
        let map = parse_kv(&text, &origin)?;
        let mut cfg = Config::default();
        for (key, v) in &map {
            let num = || f64_of(v, key, &origin);
            match key.as_str() {
                "pump.kind" => cfg.pump_kind = v.clone(),
                "pump.p_max_bar" => cfg.pump_p_max_bar = Some(num()?),
                "pump.k_s" => cfg.pump_k_s = Some(num()?),
                "pam.rest_length_m" => cfg.pam_rest_length_m = num()?,
                "pam.rest_diameter_m" => cfg.pam_rest_diameter_m = num()?,
                "pam.braid_angle_deg" => cfg.pam_braid_angle_deg = num()?,
                "pam.c1" => cfg.pam_coeffs_mm[0] = num()?,
                "pam.c2" => cfg.pam_coeffs_mm[1] = num()?,
                "pam.c3" => cfg.pam_coeffs_mm[2] = num()?,
                "pam.c4" => cfg.pam_coeffs_mm[3] = num()?,
                "pam.c5" => cfg.pam_coeffs_mm[4] = num()?,
                "pam.max_contraction_mm" => cfg.pam_max_contraction_mm = num()?,
                "pam.tube_id_m" => cfg.pam_tube_id_m = num()?,
                "pam.tube_len_m" => cfg.pam_tube_len_m = num()?,
                "cylinder.bore_m" => cfg.cyl_bore_m = num()?,
                "cylinder.stroke_m" => cfg.cyl_stroke_m = num()?,
                "cylinder.tube_id_m" => cfg.cyl_tube_id_m = num()?,
                "cylinder.tube_len_m" => cfg.cyl_tube_len_m = num()?,
                "linkage.pin_a_m" => cfg.link_pin_a_m = Some(num()?),
                "linkage.pin_b_m" => cfg.link_pin_b_m = Some(num()?),
                "linkage.gamma0_deg" => cfg.link_gamma0_deg = num()?,
                "linkage.theta_hi_deg" => cfg.link_theta_hi_deg = num()?,
                "thresholds.p_set_bar" => cfg.thresholds.p_set_bar = num()?,
                "thresholds.p_band_bar" => cfg.thresholds.p_band_bar = num()?,
                "thresholds.theta_standing_deg" => cfg.thresholds.theta_standing_deg = num()?,
                "thresholds.theta_sitting_deg" => cfg.thresholds.theta_sitting_deg = num()?,
                "thresholds.omega_trigger_deg_s" => cfg.thresholds.omega_trigger_deg_s = num()?,
                "thresholds.dwell_s" => cfg.thresholds.dwell_s = num()?,
                "scenario.seat_deg" => cfg.seat_deg = num()?,
                "scenario.transfer_s" => cfg.transfer_s = num()?,
                "scenario.sit_hold_s" => cfg.sit_hold_s = num()?,
                "scenario.stand_hold_s" => cfg.stand_hold_s = num()?,
                "scenario.dt_s" => cfg.dt_s = num()?,
                "scenario.legs" => {
                    cfg.legs = v.parse().map_err(|_| {
                        CliError::Input(format!("{origin}: scenario.legs must be 1 or 2"))
                    })?
                }
                "scenario.merge_on_torque_entry" => {
                    cfg.merge_on_torque_entry = v.parse().map_err(|_| {
                        CliError::Input(format!(
                            "{origin}: scenario.merge_on_torque_entry must be true/false"
                        ))
                    })?
                }
                "scenario.convention" => cfg.convention = parse_convention(v)?,
                _ => {
                    return Err(CliError::Input(format!("{origin}: unknown key {key:?}")));
                }
            }
        }
        Ok(cfg)
    }

    pub fn pump(&self) -> Result<PumpModel, CliError> {
        match (self.pump_p_max_bar, self.pump_k_s) {
            (Some(p), Some(k)) => Ok(PumpModel::new(p, k, "custom")
                .map_err(|e| CliError::Usage(e.to_string()))?),
            (None, None) => match self.pump_kind.as_str() {
                "small" => Ok(PumpModel::small()),
                "large" => Ok(PumpModel::large()),
                other => Err(CliError::Usage(format!(
                    "unknown pump kind {other:?} (expected small or large)"
                ))),
            },
            _ => Err(CliError::Usage(
                "custom pumps need both pump.p_max_bar and pump.k_s".into(),
            )),
        }
    }

    pub fn models(&self) -> Result<ActuatorModels, CliError> {
        let (lf, n_tu) = braid_from_rest(
            self.pam_rest_length_m,
            self.pam_rest_diameter_m,
            self.pam_braid_angle_deg.to_radians(),
        );
        let tube_area = |id: f64| std::f64::consts::PI * (id / 2.0) * (id / 2.0);
        let pam = PamModel::new(
            self.pam_rest_length_m,
            self.pam_rest_diameter_m,
            self.pam_coeffs_mm,
            self.pam_max_contraction_mm,
            lf,
            n_tu,
            tube_area(self.pam_tube_id_m),
            self.pam_tube_len_m,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let bore_r = self.cyl_bore_m / 2.0;
        let cylinder = CylinderModel::new(
            std::f64::consts::PI * bore_r * bore_r,
            self.cyl_stroke_m,
            tube_area(self.cyl_tube_id_m),
            self.cyl_tube_len_m,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let gamma0 = self.link_gamma0_deg.to_radians();
        let linkage = match (self.link_pin_a_m, self.link_pin_b_m) {
            (Some(a), Some(b)) => LinkageModel::new(a, b, gamma0, self.link_theta_hi_deg),
            (None, None) => {
                let r_target = MAX_TORQUE_NM
                    / (MAX_TORQUE_PRESSURE_BAR * BAR_TO_PA * cylinder.piston_area_m2);
                LinkageModel::calibrated(1.0, 1.0, gamma0, self.link_theta_hi_deg, r_target)
            }
            _ => {
                return Err(CliError::Usage(
                    "explicit linkage geometry needs both pin_a_m and pin_b_m".into(),
                ))
            }
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(ActuatorModels {
            pam,
            cylinder,
            linkage,
        })
    }
}

pub fn parse_convention(v: &str) -> Result<PressureConvention, CliError> {
    match v {
        "absolute" => Ok(PressureConvention::Absolute),
        "gauge-naive" => Ok(PressureConvention::GaugeNaive),
        other => Err(CliError::Usage(format!(
            "unknown pressure convention {other:?} (expected absolute or gauge-naive)"
        ))),
    }
}

//! Bundle of the physical component models with paper-matched defaults.

use crate::cylinder::CylinderModel;
use crate::linkage::LinkageModel;
use crate::pam::PamModel;
use crate::pressure::BAR_TO_PA;

/// Rated peak torque [Nm] used to calibrate the linkage.
pub const MAX_TORQUE_NM: f64 = 20.0;

/// Gauge pressure [bar] at which the peak torque is rated.
pub const MAX_TORQUE_PRESSURE_BAR: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ActuatorModels {
    pub pam: PamModel,
    pub cylinder: CylinderModel,
    pub linkage: LinkageModel,
}

impl ActuatorModels {
    /// Default parameter set: identified PAM and cylinder, and a symmetric
    /// two-pin linkage calibrated so the rated 20 Nm at 8 bar is met exactly
    /// at the flexed end of the range.
    pub fn default_paper() -> Self {
        let pam = PamModel::festo_dmsp_20_100();
        let cylinder = CylinderModel::festo_dnsu_25_100();
        let r_target = MAX_TORQUE_NM / (MAX_TORQUE_PRESSURE_BAR * BAR_TO_PA * cylinder.piston_area_m2);
        let linkage =
            LinkageModel::calibrated(1.0, 1.0, 178.0_f64.to_radians(), 107.0, r_target).unwrap();
        Self {
            pam,
            cylinder,
            linkage,
        }
    }
}

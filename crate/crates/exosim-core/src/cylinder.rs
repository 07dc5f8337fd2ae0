//! Pneumatic cylinder: chamber volume and piston force.

use crate::error::ModelError;
use crate::pressure::BAR_TO_PA;

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderModel {
    /// Piston cross-section [m^2].
    pub piston_area_m2: f64,
    /// Stroke z_max [m].
    pub stroke_m: f64,
    /// Connecting tube cross-section [m^2].
    pub tube_area_m2: f64,
    /// Connecting tube length [m].
    pub tube_len_m: f64,
}

impl CylinderModel {
    pub fn new(
        piston_area_m2: f64,
        stroke_m: f64,
        tube_area_m2: f64,
        tube_len_m: f64,
    ) -> Result<Self, ModelError> {
        if !(piston_area_m2 > 0.0) {
            return Err(ModelError::Domain {
                quantity: "A_c",
                value: piston_area_m2,
                constraint: "A_c > 0",
            });
        }
        if !(stroke_m > 0.0) {
            return Err(ModelError::Domain {
                quantity: "z_max",
                value: stroke_m,
                constraint: "z_max > 0",
            });
        }
        Ok(Self {
            piston_area_m2,
            stroke_m,
            tube_area_m2,
            tube_len_m,
        })
    }

    /// DNSU-25-100: 25 mm bore, 100 mm stroke, 2.5 mm ID x 0.3 m tube.
    pub fn festo_dnsu_25_100() -> Self {
        let bore_r = 0.0125;
        let tube_r = 0.00125;
        Self::new(
            core::f64::consts::PI * bore_r * bore_r,
            0.100,
            core::f64::consts::PI * tube_r * tube_r,
            0.3,
        )
        .unwrap()
    }

    /// Chamber volume [m^3] at piston position `z_m`, tube dead volume included.
    pub fn volume_m3(&self, z_m: f64) -> Result<f64, ModelError> {
        if !(z_m >= 0.0 && z_m <= self.stroke_m) {
            return Err(ModelError::Domain {
                quantity: "z",
                value: z_m,
                constraint: "0 <= z <= z_max",
            });
        }
        Ok(self.piston_area_m2 * z_m + self.tube_area_m2 * self.tube_len_m)
    }

    /// Dead volume with the piston fully retracted.
    pub fn dead_volume_m3(&self) -> f64 {
        self.tube_area_m2 * self.tube_len_m
    }

    /// Piston force [N] from gauge pressure [bar].
    pub fn force_n(&self, p_gauge_bar: f64) -> f64 {
        p_gauge_bar * BAR_TO_PA * self.piston_area_m2
    }
}

//! Pneumatic artificial muscle: identified contraction polynomial and braid
//! volume kinematics.
//!
//! The contraction of the DMSP-20-100 was identified at zero force as a
//! quartic in gauge pressure (mm per bar^i). Enclosed volume follows the
//! braided-muscle relation `V = (L Lf^2 - L^3) / (4 pi n_tu^2)` plus the
//! dead volume of the connecting tube. Thread length and turn count are not
//! published for this muscle; they are calibrated from the rest geometry and
//! an assumed initial braid angle, which makes the relation exactly a
//! cylinder volume at rest.

use crate::error::ModelError;
use crate::math;

/// Upper end of the identified pressure domain [gauge bar].
pub const IDENTIFIED_P_MAX_BAR: f64 = 3.32;

/// Contraction polynomial result; `extrapolated` flags evaluation outside
/// the identified 0..=3.32 bar domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    pub millimeters: f64,
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PamModel {
    /// Rest length L0 [m].
    pub rest_length_m: f64,
    /// Rest diameter D0 [m].
    pub rest_diameter_m: f64,
    /// Contraction coefficients c1..c5 [mm/bar^4 .. mm].
    pub coeffs_mm: [f64; 5],
    /// Maximum contraction [mm].
    pub max_contraction_mm: f64,
    /// Braid thread length Lf [m].
    pub thread_length_m: f64,
    /// Number of thread turns n_tu.
    pub thread_turns: f64,
    /// Connecting tube cross-section [m^2].
    pub tube_area_m2: f64,
    /// Connecting tube length [m].
    pub tube_len_m: f64,
}

/// Thread length and turn count from rest geometry and initial braid angle.
///
/// `Lf = L0 / cos(alpha)`, `n_tu = sqrt(Lf^2 - L0^2) / (pi D0)`; this choice
/// reduces the braid volume at rest to exactly `pi (D0/2)^2 L0`.
pub fn braid_from_rest(l0_m: f64, d0_m: f64, braid_angle_rad: f64) -> (f64, f64) {
    let lf = l0_m / math::cos(braid_angle_rad);
    let n_tu = math::sqrt(lf * lf - l0_m * l0_m) / (core::f64::consts::PI * d0_m);
    (lf, n_tu)
}

impl PamModel {
    pub fn new(
        rest_length_m: f64,
        rest_diameter_m: f64,
        coeffs_mm: [f64; 5],
        max_contraction_mm: f64,
        thread_length_m: f64,
        thread_turns: f64,
        tube_area_m2: f64,
        tube_len_m: f64,
    ) -> Result<Self, ModelError> {
        if !(rest_length_m > 0.0) {
            return Err(ModelError::Domain {
                quantity: "L0",
                value: rest_length_m,
                constraint: "L0 > 0",
            });
        }
        if !(max_contraction_mm > 0.0 && max_contraction_mm < 1000.0 * rest_length_m) {
            return Err(ModelError::Domain {
                quantity: "eps_max",
                value: max_contraction_mm,
                constraint: "0 < eps_max < 1000 L0",
            });
        }
        if !(thread_length_m > rest_length_m) {
            return Err(ModelError::Domain {
                quantity: "L_f",
                value: thread_length_m,
                constraint: "L_f > L0",
            });
        }
        if !(thread_turns > 0.0) {
            return Err(ModelError::Domain {
                quantity: "n_tu",
                value: thread_turns,
                constraint: "n_tu > 0",
            });
        }
        let model = Self {
            rest_length_m,
            rest_diameter_m,
            coeffs_mm,
            max_contraction_mm,
            thread_length_m,
            thread_turns,
            tube_area_m2,
            tube_len_m,
        };
        // volume must be finite and positive across the reachable length range
        let l_short = rest_length_m - max_contraction_mm / 1000.0;
        for l in [l_short, rest_length_m] {
            let v = model.volume_m3(l)?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::Domain {
                    quantity: "pam_volume",
                    value: v,
                    constraint: "finite and positive over the contraction range",
                });
            }
        }
        Ok(model)
    }

    /// The identified DMSP-20-100 with a 23 degree initial braid angle and
    /// a 2.5 mm ID x 0.3 m connecting tube.
    pub fn festo_dmsp_20_100() -> Self {
        let (lf, n_tu) = braid_from_rest(0.100, 0.020, 23.0_f64.to_radians());
        let tube_r = 0.00125;
        Self::new(
            0.100,
            0.020,
            [0.1022, -1.3370, 5.1426, -0.8131, 0.4189],
            25.0,
            lf,
            n_tu,
            core::f64::consts::PI * tube_r * tube_r,
            0.3,
        )
        .unwrap()
    }

    /// Contraction [mm] at gauge pressure `p_bar`, clamped to `[0, eps_max]`.
    pub fn contraction(&self, p_bar: f64) -> Contraction {
        let [c1, c2, c3, c4, c5] = self.coeffs_mm;
        let raw = (((c1 * p_bar + c2) * p_bar + c3) * p_bar + c4) * p_bar + c5;
        Contraction {
            millimeters: raw.clamp(0.0, self.max_contraction_mm),
            extrapolated: p_bar < 0.0 || p_bar > IDENTIFIED_P_MAX_BAR,
        }
    }

    /// Muscle length [m] at gauge pressure `p_bar`: `L0 - eps/1000`.
    pub fn length_m(&self, p_bar: f64) -> f64 {
        self.rest_length_m - self.contraction(p_bar).millimeters / 1000.0
    }

    /// Enclosed volume [m^3] at muscle length `l_m`, tube dead volume included.
    pub fn volume_m3(&self, l_m: f64) -> Result<f64, ModelError> {
        if !(l_m > 0.0 && l_m < self.thread_length_m) {
            return Err(ModelError::Domain {
                quantity: "L_m",
                value: l_m,
                constraint: "0 < L_m < L_f",
            });
        }
        let lf2 = self.thread_length_m * self.thread_length_m;
        let braid = (l_m * lf2 - l_m * l_m * l_m)
            / (4.0 * core::f64::consts::PI * self.thread_turns * self.thread_turns);
        Ok(braid + self.tube_area_m2 * self.tube_len_m)
    }

    /// Volume [m^3] at gauge pressure `p_bar`.
    pub fn volume_at_pressure_m3(&self, p_bar: f64) -> Result<f64, ModelError> {
        self.volume_m3(self.length_m(p_bar))
    }
}

//! Isothermal gas arithmetic: Boyle expansion, volume merging, and the
//! coupled PAM + cylinder pressure solve.
//!
//! All pressures here are in the working scale of the active
//! [`PressureConvention`]; the pressure-volume product is the conserved
//! quantity.

use crate::error::ModelError;
use crate::models::ActuatorModels;
use crate::pressure::PressureConvention;
use crate::solve::bisect;

/// Bracket-width tolerance [bar] for gas-network root solves. Tighter than
/// the contract's 1e-6 bar so pV products stay conserved to ~1e-12 relative.
pub const PRESSURE_TOL_BAR: f64 = 1.0e-12;

/// Iteration cap for gas-network root solves.
pub const MAX_SOLVE_ITER: u32 = 200;

/// A (pressure, volume) pair; pressure is in the working scale of the
/// convention it was built with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState {
    pub pressure_bar: f64,
    pub volume_m3: f64,
}

impl GasState {
    pub fn new(pressure_bar: f64, volume_m3: f64, conv: PressureConvention) -> Result<Self, ModelError> {
        if !(volume_m3 > 0.0) {
            return Err(ModelError::Domain {
                quantity: "V",
                value: volume_m3,
                constraint: "V > 0",
            });
        }
        if pressure_bar < conv.floor() {
            return Err(ModelError::Domain {
                quantity: "p",
                value: pressure_bar,
                constraint: "absolute pressure >= 0",
            });
        }
        Ok(Self {
            pressure_bar,
            volume_m3,
        })
    }

    /// Build a state from a gauge reading.
    pub fn from_gauge(p_gauge_bar: f64, volume_m3: f64, conv: PressureConvention) -> Result<Self, ModelError> {
        Self::new(conv.from_gauge(p_gauge_bar), volume_m3, conv)
    }

    /// Gauge reading of this state's pressure.
    pub fn gauge_bar(&self, conv: PressureConvention) -> f64 {
        conv.to_gauge(self.pressure_bar)
    }

    /// Pressure-volume product [bar m^3], the conserved invariant.
    pub fn pv(&self) -> f64 {
        self.pressure_bar * self.volume_m3
    }
}

/// Boyle expansion (or compression) of a sealed gas volume to `v_new_m3`.
pub fn isothermal_expand(
    state: &GasState,
    v_new_m3: f64,
    conv: PressureConvention,
) -> Result<GasState, ModelError> {
    if !(v_new_m3 > 0.0) {
        return Err(ModelError::Domain {
            quantity: "V_new",
            value: v_new_m3,
            constraint: "V_new > 0",
        });
    }
    GasState::new(state.pv() / v_new_m3, v_new_m3, conv)
}

/// Equalized pressure after joining two sealed volumes whose combined
/// volume is `v_joint(p)` (positive, nondecreasing in p).
///
/// Solves `p * v_joint(p) = pa Va + pb Vb` by bisection; the pV product is
/// conserved to the solver tolerance.
pub fn merge_isothermal<F: Fn(f64) -> f64>(
    a: &GasState,
    b: &GasState,
    v_joint: F,
    conv: PressureConvention,
) -> Result<f64, ModelError> {
    let target = a.pv() + b.pv();
    let g = |p: f64| p * v_joint(p) - target;
    let lo = conv.floor().max(f64::MIN_POSITIVE);
    // v_joint is nondecreasing in p, so g is increasing; grow hi until g >= 0
    let mut hi = a.pressure_bar.max(b.pressure_bar).max(1.0);
    let mut grow = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(ModelError::Bracket {
                lo,
                hi,
                f_lo: g(lo),
                f_hi: g(hi),
            });
        }
    }
    bisect(g, lo, hi, PRESSURE_TOL_BAR, MAX_SOLVE_ITER)
}

/// Total volume seen by the merged air mass in "Torque" mode at a given
/// knee angle: compliant PAM volume (a function of its own pressure) plus
/// the cylinder chamber at that angle.
pub fn torque_mode_volume(
    models: &ActuatorModels,
    theta_deg: f64,
    p_work_bar: f64,
    conv: PressureConvention,
) -> Result<f64, ModelError> {
    let p_gauge = conv.to_gauge(p_work_bar);
    let v_m = models.pam.volume_at_pressure_m3(p_gauge)?;
    let z = models
        .linkage
        .piston_position_m(&models.cylinder, theta_deg);
    let v_c = models.cylinder.volume_m3(z)?;
    Ok(v_m + v_c)
}

/// Pressure [working scale bar] of the merged PAM + cylinder air mass at
/// knee angle `theta_deg`, given the state it expanded from.
///
/// Solves `p (V_c(theta) + V_m(p)) = p_init V_init`. The product
/// `p (V_c + V_m(p))` is strictly increasing in p (higher pressure contracts
/// the muscle, which only grows its enclosed volume on the operating branch),
/// so the root is unique.
pub fn coupled_pressure_at_angle(
    theta_deg: f64,
    init: &GasState,
    models: &ActuatorModels,
    conv: PressureConvention,
) -> Result<f64, ModelError> {
    let target = init.pv();
    let f = |p: f64| match torque_mode_volume(models, theta_deg, p, conv) {
        Ok(v) => p * v - target,
        Err(_) => f64::NAN,
    };
    let lo = conv.floor().max(f64::MIN_POSITIVE);
    let mut hi = init.pressure_bar.max(1.0);
    let mut grow = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(ModelError::Bracket {
                lo,
                hi,
                f_lo: f(lo),
                f_hi: f(hi),
            });
        }
    }
    bisect(f, lo, hi, PRESSURE_TOL_BAR, MAX_SOLVE_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::P_ATM_BAR;

    const ABS: PressureConvention = PressureConvention::Absolute;

    #[test]
    fn boyle_halves_pressure_on_doubled_volume() {
        let s = GasState::new(2.0, 1.0e-3, ABS).unwrap();
        let e = isothermal_expand(&s, 2.0e-3, ABS).unwrap();
        assert_eq!(e.pressure_bar, 1.0);
        assert_eq!(e.pv(), s.pv());
    }

    #[test]
    fn expand_to_same_volume_is_identity() {
        let s = GasState::new(3.7, 5.0e-5, ABS).unwrap();
        let e = isothermal_expand(&s, 5.0e-5, ABS).unwrap();
        assert_eq!(e, s);
    }

    #[test]
    fn expand_rejects_nonpositive_volume() {
        let s = GasState::new(2.0, 1.0e-3, ABS).unwrap();
        assert!(isothermal_expand(&s, 0.0, ABS).is_err());
        assert!(isothermal_expand(&s, -1.0, ABS).is_err());
    }

    #[test]
    fn merge_equal_pressures_rigid() {
        let a = GasState::new(2.5, 4.0e-5, ABS).unwrap();
        let b = GasState::new(2.5, 6.0e-5, ABS).unwrap();
        let p = merge_isothermal(&a, &b, |_| 1.0e-4, ABS).unwrap();
        assert!((p - 2.5).abs() < 1.0e-10);
    }

    #[test]
    fn merge_is_volume_weighted_mean_for_rigid_joint() {
        let a = GasState::new(3.0, 5.0e-5, ABS).unwrap();
        let b = GasState::new(1.0, 5.0e-5, ABS).unwrap();
        let p = merge_isothermal(&a, &b, |_| 1.0e-4, ABS).unwrap();
        assert!((p - 2.0).abs() < 1.0e-10);
    }

    #[test]
    fn merge_with_compliant_pam_matches_grid_oracle() {
        let models = ActuatorModels::default_paper();
        let pam = models.pam.clone();
        // cylinder air returning into the muscle
        let cyl = GasState::from_gauge(8.0, 1.5e-5, ABS).unwrap();
        let muscle = GasState::new(
            1.85 + P_ATM_BAR,
            pam.volume_at_pressure_m3(1.85).unwrap(),
            ABS,
        )
        .unwrap();
        let v_joint = |p: f64| pam.volume_at_pressure_m3(ABS.to_gauge(p)).unwrap() + 1.5e-5;
        let p = merge_isothermal(&muscle, &cyl, v_joint, ABS).unwrap();

        // dense grid oracle
        let target = muscle.pv() + cyl.pv();
        let (p_lo, p_hi) = (0.1, 10.0);
        let n = 100_000;
        let step = (p_hi - p_lo) / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=n {
            let pg = p_lo + step * i as f64;
            let r = (pg * v_joint(pg) - target).abs();
            if r < best.0 {
                best = (r, pg);
            }
        }
        assert!((p - best.1).abs() <= 2.0 * step, "p = {p}, grid = {}", best.1);
        // conservation
        let v = v_joint(p);
        assert!((p * v - target).abs() / target < 1.0e-10);
    }

    #[test]
    fn coupled_pressure_no_volume_change_is_identity() {
        let models = ActuatorModels::default_paper();
        let p0 = ABS.from_gauge(3.2);
        let v0 = torque_mode_volume(&models, 107.0, p0, ABS).unwrap();
        let init = GasState::new(p0, v0, ABS).unwrap();
        let p = coupled_pressure_at_angle(107.0, &init, &models, ABS).unwrap();
        assert!((p - p0).abs() < 1.0e-9);
    }

    #[test]
    fn coupled_pressure_standing_band() {
        // full extension from 3.2 bar gauge at the flexed reference angle
        let models = ActuatorModels::default_paper();
        let p0 = ABS.from_gauge(3.2);
        let v0 = torque_mode_volume(&models, 107.0, p0, ABS).unwrap();
        let init = GasState::new(p0, v0, ABS).unwrap();
        let p = coupled_pressure_at_angle(0.0, &init, &models, ABS).unwrap();
        let g = ABS.to_gauge(p);
        assert!((1.6..=2.1).contains(&g), "standing gauge pressure {g}");
    }

    #[test]
    fn torque_round_trip_restores_pressure() {
        let models = ActuatorModels::default_paper();
        let p0 = ABS.from_gauge(3.2);
        let v0 = torque_mode_volume(&models, 107.0, p0, ABS).unwrap();
        let init = GasState::new(p0, v0, ABS).unwrap();
        // 107 -> 0
        let p_ext = coupled_pressure_at_angle(0.0, &init, &models, ABS).unwrap();
        let v_ext = torque_mode_volume(&models, 0.0, p_ext, ABS).unwrap();
        let ext = GasState::new(p_ext, v_ext, ABS).unwrap();
        // 0 -> 107
        let p_back = coupled_pressure_at_angle(107.0, &ext, &models, ABS).unwrap();
        assert!((p_back - p0).abs() < 1.0e-8, "round trip drift {}", p_back - p0);
    }
}

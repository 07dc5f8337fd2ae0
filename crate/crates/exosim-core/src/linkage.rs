//! Two-pin crank geometry linking knee angle to cylinder length, piston
//! position, and lever arm.
//!
//! The cylinder spans two pins at distances `a` (thigh) and `b` (shank) from
//! the joint, with included angle `gamma0 - theta`. Piston position is the
//! normalized cylinder length, so `z(theta_hi) = 0` and `z(0) = z_max` hold
//! exactly by construction. The lever arm is the joint-to-cylinder-axis
//! distance `a b sin(gamma0 - theta) / l(theta)`.

use crate::cylinder::CylinderModel;
use crate::error::ModelError;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageModel {
    /// Thigh pin distance from the joint [m].
    pub thigh_pin_m: f64,
    /// Shank pin distance from the joint [m].
    pub shank_pin_m: f64,
    /// Included pin angle at full extension [rad].
    pub gamma0_rad: f64,
    /// Flexed reference angle where the piston bottoms out [deg].
    pub theta_hi_deg: f64,
    /// Cylinder length at `theta_hi` [m].
    pub l_min_m: f64,
    /// Cylinder length at full extension [m].
    pub l_max_m: f64,
}

impl LinkageModel {
    pub fn new(
        thigh_pin_m: f64,
        shank_pin_m: f64,
        gamma0_rad: f64,
        theta_hi_deg: f64,
    ) -> Result<Self, ModelError> {
        if !(thigh_pin_m > 0.0) || !(shank_pin_m > 0.0) {
            return Err(ModelError::Domain {
                quantity: "pin distance",
                value: thigh_pin_m.min(shank_pin_m),
                constraint: "a > 0 and b > 0",
            });
        }
        let theta_hi_rad = theta_hi_deg.to_radians();
        // l strictly decreasing on [0, theta_hi] needs sin(gamma0 - theta) > 0 there
        if !(gamma0_rad > theta_hi_rad && gamma0_rad < core::f64::consts::PI) {
            return Err(ModelError::Domain {
                quantity: "gamma0",
                value: gamma0_rad,
                constraint: "theta_hi < gamma0 < pi (monotone cylinder length)",
            });
        }
        let mut link = Self {
            thigh_pin_m,
            shank_pin_m,
            gamma0_rad,
            theta_hi_deg,
            l_min_m: 0.0,
            l_max_m: 0.0,
        };
        link.l_min_m = link.length_m(theta_hi_deg);
        link.l_max_m = link.length_m(0.0);
        Ok(link)
    }

    /// Scale the pin distances of a base geometry so the largest lever arm
    /// over `[0, theta_hi]` equals `r_target_m`. The lever arm is homogeneous
    /// of degree one in `(a, b)`, so a uniform scale hits the target exactly.
    pub fn calibrated(
        a_m: f64,
        b_m: f64,
        gamma0_rad: f64,
        theta_hi_deg: f64,
        r_target_m: f64,
    ) -> Result<Self, ModelError> {
        let base = Self::new(a_m, b_m, gamma0_rad, theta_hi_deg)?;
        let mut r_max = 0.0_f64;
        let n = 2000;
        for i in 0..=n {
            let theta = theta_hi_deg * i as f64 / n as f64;
            r_max = r_max.max(base.lever_arm_m(theta));
        }
        let s = r_target_m / r_max;
        Self::new(a_m * s, b_m * s, gamma0_rad, theta_hi_deg)
    }

    /// Cylinder length [m] at knee angle `theta_deg` (law of cosines).
    pub fn length_m(&self, theta_deg: f64) -> f64 {
        let gamma = self.gamma0_rad - theta_deg.to_radians();
        let (a, b) = (self.thigh_pin_m, self.shank_pin_m);
        math::sqrt(a * a + b * b - 2.0 * a * b * math::cos(gamma))
    }

    /// Lever arm r [m] at knee angle `theta_deg`.
    pub fn lever_arm_m(&self, theta_deg: f64) -> f64 {
        let gamma = self.gamma0_rad - theta_deg.to_radians();
        self.thigh_pin_m * self.shank_pin_m * math::sin(gamma) / self.length_m(theta_deg)
    }

    /// Piston position z [m]: normalized cylinder length over the stroke.
    pub fn piston_position_m(&self, cylinder: &CylinderModel, theta_deg: f64) -> f64 {
        let z = cylinder.stroke_m * (self.length_m(theta_deg) - self.l_min_m)
            / (self.l_max_m - self.l_min_m);
        z.clamp(0.0, cylinder.stroke_m)
    }
}

/// Joint torque [Nm] from cylinder force [N] at knee angle `theta_deg`.
pub fn exo_torque_nm(force_n: f64, link: &LinkageModel, theta_deg: f64) -> f64 {
    force_n * link.lever_arm_m(theta_deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link() -> LinkageModel {
        LinkageModel::new(0.0626, 0.0626, 178.0_f64.to_radians(), 107.0).unwrap()
    }

    #[test]
    fn endpoints_are_exact() {
        let l = link();
        let c = CylinderModel::festo_dnsu_25_100();
        assert_eq!(l.piston_position_m(&c, 107.0), 0.0);
        assert_eq!(l.piston_position_m(&c, 0.0), 0.100);
        assert!((l.length_m(107.0) - l.l_min_m).abs() < 1.0e-15);
        assert!((l.length_m(0.0) - l.l_max_m).abs() < 1.0e-15);
    }

    #[test]
    fn length_strictly_decreasing() {
        let l = link();
        let mut prev = l.length_m(0.0);
        for i in 1..=107 {
            let cur = l.length_m(i as f64);
            assert!(cur < prev, "l not decreasing at theta = {i}");
            prev = cur;
        }
        let mid = l.length_m(53.5);
        assert!(mid > l.l_min_m && mid < l.l_max_m);
    }

    #[test]
    fn piston_position_matches_geometry_oracle() {
        let l = link();
        let c = CylinderModel::festo_dnsu_25_100();
        // brute-force: recompute the triangle from scratch at 60 degrees
        let gamma = 178.0_f64.to_radians() - 60.0_f64.to_radians();
        let ll = (0.0626_f64.powi(2) + 0.0626_f64.powi(2)
            - 2.0 * 0.0626 * 0.0626 * gamma.cos())
        .sqrt();
        let z_oracle = 0.1 * (ll - l.l_min_m) / (l.l_max_m - l.l_min_m);
        assert!((l.piston_position_m(&c, 60.0) - z_oracle).abs() < 1.0e-12);
    }

    #[test]
    fn lever_arm_positive_over_range() {
        let l = link();
        for i in 0..=107 {
            assert!(l.lever_arm_m(i as f64) > 0.0);
        }
    }

    #[test]
    fn calibration_hits_lever_arm_target() {
        let l = LinkageModel::calibrated(1.0, 1.0, 178.0_f64.to_radians(), 107.0, 0.0509).unwrap();
        let mut r_max = 0.0_f64;
        for i in 0..=1070 {
            r_max = r_max.max(l.lever_arm_m(i as f64 / 10.0));
        }
        assert!((r_max - 0.0509).abs() < 1.0e-6);
    }

    #[test]
    fn rejects_non_monotone_geometry() {
        assert!(LinkageModel::new(0.055, 0.32, 1.0, 107.0).is_err());
        assert!(LinkageModel::new(0.055, 0.32, 3.2, 107.0).is_err());
    }
}

//! Exponential pump charge law and its inverse.
//!
//! Charging a fixed reservoir with a small diaphragm pump was identified as
//! `p(t) = p_max (1 - e^(-t/k))` in gauge bar; refill times between two
//! operating points follow from the closed-form inverse.

use crate::error::ModelError;
use crate::math;
use alloc::string::String;

#[derive(Debug, Clone, PartialEq)]
pub struct PumpModel {
    /// Asymptotic gauge pressure [bar].
    pub p_max_bar: f64,
    /// Charge time constant [s].
    pub k_s: f64,
    pub label: String,
}

impl PumpModel {
    pub fn new(p_max_bar: f64, k_s: f64, label: &str) -> Result<Self, ModelError> {
        if !(p_max_bar > 0.0) || !p_max_bar.is_finite() {
            return Err(ModelError::Domain {
                quantity: "p_max",
                value: p_max_bar,
                constraint: "p_max > 0",
            });
        }
        if !(k_s > 0.0) || !k_s.is_finite() {
            return Err(ModelError::Domain {
                quantity: "k",
                value: k_s,
                constraint: "k > 0",
            });
        }
        Ok(Self {
            p_max_bar,
            k_s,
            label: String::from(label),
        })
    }

    /// The identified small diaphragm pump (BD-04A-20L).
    pub fn small() -> Self {
        Self::new(3.32, 1.8302, "BD-04A-20L").unwrap()
    }

    /// The identified large piston pump (BD-07A-35L).
    pub fn large() -> Self {
        Self::new(6.5, 2.0713, "BD-07A-35L").unwrap()
    }

    /// Gauge pressure [bar] after charging an empty reservoir for `t_s` seconds.
    pub fn pressure_at(&self, t_s: f64) -> Result<f64, ModelError> {
        if !(t_s >= 0.0) {
            return Err(ModelError::Domain {
                quantity: "t",
                value: t_s,
                constraint: "t >= 0",
            });
        }
        Ok(self.p_max_bar * (1.0 - math::exp(-t_s / self.k_s)))
    }

    /// Time [s] to charge from `p_from` to `p_to` (both gauge bar).
    pub fn time_to(&self, p_from_bar: f64, p_to_bar: f64) -> Result<f64, ModelError> {
        if !(p_from_bar >= 0.0) {
            return Err(ModelError::Domain {
                quantity: "p_from",
                value: p_from_bar,
                constraint: "p_from >= 0",
            });
        }
        if p_from_bar > p_to_bar {
            return Err(ModelError::Domain {
                quantity: "p_from",
                value: p_from_bar,
                constraint: "p_from <= p_to",
            });
        }
        if p_to_bar >= self.p_max_bar {
            return Err(ModelError::UnreachablePressure {
                target_bar: p_to_bar,
                p_max_bar: self.p_max_bar,
            });
        }
        Ok(self.k_s * math::ln((self.p_max_bar - p_from_bar) / (self.p_max_bar - p_to_bar)))
    }

    /// Advance the charge law by `dt_s` from the current gauge pressure.
    ///
    /// Equivalent to continuing the exponential from whichever point of the
    /// curve the reservoir currently sits on.
    pub fn advance(&self, p_bar: f64, dt_s: f64) -> f64 {
        let p = p_bar.min(self.p_max_bar);
        self.p_max_bar - (self.p_max_bar - p) * math::exp(-dt_s / self.k_s)
    }
}

//! Error type shared by the model, solver, fitting, and signal modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// An input left the operation's admissible domain.
    Domain {
        quantity: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// Target pressure at or above the pump's asymptote.
    UnreachablePressure { target_bar: f64, p_max_bar: f64 },
    /// Bisection bracket without a sign change.
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// Root solver hit its iteration limit.
    IterationLimit { iterations: u32, last: f64 },
    IllConditionedFit(&'static str),
    FilterDesign(String),
    Segmentation(&'static str),
    Scenario(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Domain {
                quantity,
                value,
                constraint,
            } => write!(f, "{quantity} = {value} violates {constraint}"),
            ModelError::UnreachablePressure {
                target_bar,
                p_max_bar,
            } => write!(
                f,
                "target pressure {target_bar} bar unreachable (pump asymptote {p_max_bar} bar)"
            ),
            ModelError::Bracket { lo, hi, f_lo, f_hi } => write!(
                f,
                "no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
            ),
            ModelError::IterationLimit { iterations, last } => write!(
                f,
                "solver did not converge after {iterations} iterations (last x = {last})"
            ),
            ModelError::IllConditionedFit(what) => write!(f, "ill-conditioned fit: {what}"),
            ModelError::FilterDesign(what) => write!(f, "filter design: {what}"),
            ModelError::Segmentation(what) => write!(f, "segmentation: {what}"),
            ModelError::Scenario(what) => write!(f, "scenario: {what}"),
        }
    }
}

impl core::error::Error for ModelError {}

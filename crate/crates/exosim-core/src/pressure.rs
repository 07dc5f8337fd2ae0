//! Pressure scale handling.
//!
//! Boyle's law is physically valid in absolute pressure, while sensors and
//! the published operating points are gauge. All gas arithmetic runs in a
//! "working scale" chosen by [`PressureConvention`]: `Absolute` (the default,
//! gauge + 1.01325 bar) or `GaugeNaive`, which applies the gas law literally
//! to gauge values and exists to probe that alternative reading.

/// Standard atmosphere in bar.
pub const P_ATM_BAR: f64 = 1.01325;

/// Pascals per bar.
pub const BAR_TO_PA: f64 = 1.0e5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PressureConvention {
    #[default]
    Absolute,
    GaugeNaive,
}

impl PressureConvention {
    /// Convert a gauge reading [bar] into the working scale.
    pub fn from_gauge(self, p_gauge_bar: f64) -> f64 {
        match self {
            PressureConvention::Absolute => p_gauge_bar + P_ATM_BAR,
            PressureConvention::GaugeNaive => p_gauge_bar,
        }
    }

    /// Convert a working-scale pressure back to gauge [bar].
    pub fn to_gauge(self, p_work_bar: f64) -> f64 {
        match self {
            PressureConvention::Absolute => p_work_bar - P_ATM_BAR,
            PressureConvention::GaugeNaive => p_work_bar,
        }
    }

    /// Working-scale value of atmospheric pressure.
    pub fn atmosphere(self) -> f64 {
        self.from_gauge(0.0)
    }

    /// Smallest physically meaningful working-scale pressure.
    pub fn floor(self) -> f64 {
        match self {
            PressureConvention::Absolute => 0.0,
            PressureConvention::GaugeNaive => -P_ATM_BAR,
        }
    }
}

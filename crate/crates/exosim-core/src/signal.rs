//! EMG-style signal chain: Butterworth filtering, rectified low-pass
//! envelope, MVC normalization, and phase segmentation keyed to knee angle.
//!
//! Filters are designed as cascaded biquads from the analog Butterworth
//! prototype via the bilinear transform with frequency pre-warping, and
//! applied forward-backward for zero phase. Edge transients are suppressed
//! by odd-reflection padding sized at three times the slowest section's
//! settling length.

use crate::error::ModelError;
use crate::math;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Uniformly sampled real-valued signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub sample_rate_hz: f64,
    pub samples: Vec<f64>,
}

impl Trace {
    pub fn new(sample_rate_hz: f64, samples: Vec<f64>) -> Result<Self, ModelError> {
        if !(sample_rate_hz > 0.0) {
            return Err(ModelError::Domain {
                quantity: "sample_rate",
                value: sample_rate_hz,
                constraint: "sample_rate > 0",
            });
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(ModelError::Domain {
                quantity: "sample",
                value: f64::NAN,
                constraint: "finite",
            });
        }
        Ok(Self {
            sample_rate_hz,
            samples,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lowpass,
    Bandpass,
}

/// Butterworth filter description; `order` is the analog prototype order
/// (a bandpass doubles the pole count).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub order: u32,
    /// [cutoff] for lowpass, [low, high] band edges for bandpass [Hz].
    pub cutoffs: [f64; 2],
}

impl FilterSpec {
    pub fn lowpass(order: u32, cutoff_hz: f64) -> Self {
        Self {
            kind: FilterKind::Lowpass,
            order,
            cutoffs: [cutoff_hz, 0.0],
        }
    }

    pub fn bandpass(order: u32, low_hz: f64, high_hz: f64) -> Self {
        Self {
            kind: FilterKind::Bandpass,
            order,
            cutoffs: [low_hz, high_hz],
        }
    }

    fn validate(&self, sample_rate_hz: f64) -> Result<(), ModelError> {
        let nyquist = sample_rate_hz / 2.0;
        if self.order == 0 || self.order % 2 != 0 {
            return Err(ModelError::FilterDesign(format!(
                "order {} must be even and positive",
                self.order
            )));
        }
        let edges: &[f64] = match self.kind {
            FilterKind::Lowpass => &self.cutoffs[..1],
            FilterKind::Bandpass => &self.cutoffs[..2],
        };
        for &c in edges {
            if !(c > 0.0 && c < nyquist) {
                return Err(ModelError::FilterDesign(format!(
                    "cutoff {c} Hz outside (0, Nyquist = {nyquist} Hz)"
                )));
            }
        }
        if self.kind == FilterKind::Bandpass && !(self.cutoffs[0] < self.cutoffs[1]) {
            return Err(ModelError::FilterDesign(format!(
                "band edges must be ordered: {} >= {}",
                self.cutoffs[0], self.cutoffs[1]
            )));
        }
        Ok(())
    }
}

/// One second-order section; denominator is monic (`a0 = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sos {
    b: [f64; 3],
    a: [f64; 2],
}

impl Sos {
    /// Magnitude response at normalized angular frequency `w` [rad/sample].
    fn gain_at(&self, w: f64) -> f64 {
        let z = Complex64::new(math::cos(-w), math::sin(-w)); // z^-1
        let num = Complex64::new(self.b[0], 0.0) + z * (self.b[1] + z * self.b[2]);
        let den = Complex64::new(1.0, 0.0) + z * (self.a[0] + z * self.a[1]);
        (num / den).norm()
    }

    /// Slower of the two poles (magnitude in the z-plane).
    fn pole_radius(&self) -> f64 {
        // |z1 z2| = a2 for a monic quadratic with roots z1, z2
        math::sqrt(self.a[1].abs())
    }
}

/// Upper-half-plane poles of the normalized analog Butterworth prototype.
fn prototype_poles(order: u32) -> Vec<Complex64> {
    let n = order as f64;
    (1..=order / 2)
        .map(|k| {
            let angle = core::f64::consts::PI * (2.0 * k as f64 + n - 1.0) / (2.0 * n);
            Complex64::new(math::cos(angle), math::sin(angle))
        })
        .collect()
}

/// Biquad denominator from a conjugate z-plane pole pair.
fn denominator(z_pole: Complex64) -> [f64; 2] {
    [-2.0 * z_pole.re, z_pole.norm_sqr()]
}

fn bilinear_pole(s_pole: Complex64, k: f64) -> Complex64 {
    (Complex64::new(k, 0.0) + s_pole) / (Complex64::new(k, 0.0) - s_pole)
}

/// Design the cascade for a spec at a given sample rate.
fn design(spec: &FilterSpec, sample_rate_hz: f64) -> Result<Vec<Sos>, ModelError> {
    spec.validate(sample_rate_hz)?;
    let fs = sample_rate_hz;
    let k = 2.0 * fs;
    let warp = |f_hz: f64| k * math::tan(core::f64::consts::PI * f_hz / fs);
    let mut sections = Vec::new();
    match spec.kind {
        FilterKind::Lowpass => {
            let wc = warp(spec.cutoffs[0]);
            for p in prototype_poles(spec.order) {
                let zp = bilinear_pole(p * wc, k);
                // both zeros at z = -1
                let mut sos = Sos {
                    b: [1.0, 2.0, 1.0],
                    a: denominator(zp),
                };
                let g = sos.gain_at(0.0); // normalize at DC
                for b in &mut sos.b {
                    *b /= g;
                }
                sections.push(sos);
            }
        }
        FilterKind::Bandpass => {
            let w1 = warp(spec.cutoffs[0]);
            let w2 = warp(spec.cutoffs[1]);
            let w0 = math::sqrt(w1 * w2);
            let bw = w2 - w1;
            // digital center frequency of the analog w0
            let w0_d = 2.0 * math::atan(w0 / k);
            for p in prototype_poles(spec.order) {
                // lowpass-to-bandpass: s^2 - B p s + w0^2 = 0
                let bp = p * bw;
                let disc = (bp * bp - 4.0 * w0 * w0).sqrt();
                for s_pole in [(bp + disc) / 2.0, (bp - disc) / 2.0] {
                    let zp = bilinear_pole(s_pole, k);
                    // one zero at z = 1, one at z = -1
                    let mut sos = Sos {
                        b: [1.0, 0.0, -1.0],
                        a: denominator(zp),
                    };
                    let g = sos.gain_at(w0_d); // normalize at band center
                    if !(g > 0.0) {
                        return Err(ModelError::FilterDesign(format!(
                            "degenerate section gain at center frequency ({g})"
                        )));
                    }
                    for b in &mut sos.b {
                        *b /= g;
                    }
                    sections.push(sos);
                }
            }
        }
    }
    for s in &sections {
        if s.pole_radius() >= 1.0 {
            return Err(ModelError::FilterDesign(format!(
                "unstable section (pole radius {})",
                s.pole_radius()
            )));
        }
    }
    Ok(sections)
}

/// Single forward pass of the cascade (direct form II transposed).
fn filter_forward(sections: &[Sos], x: &mut [f64]) {
    for sos in sections {
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for v in x.iter_mut() {
            let input = *v;
            let out = sos.b[0] * input + s1;
            s1 = sos.b[1] * input - sos.a[0] * out + s2;
            s2 = sos.b[2] * input - sos.a[1] * out;
            *v = out;
        }
    }
}

/// Samples needed for the slowest pole to decay to 1e-3.
fn settling_len(sections: &[Sos]) -> usize {
    let rho = sections
        .iter()
        .map(Sos::pole_radius)
        .fold(0.0_f64, f64::max)
        .min(1.0 - 1.0e-9);
    if rho <= 0.0 {
        return 8;
    }
    let n = math::ln(1.0e-3) / math::ln(rho);
    (n as usize).max(8)
}

/// Zero-phase (forward-backward) filtering with odd-reflection padding.
pub fn filtfilt(spec: &FilterSpec, trace: &Trace) -> Result<Trace, ModelError> {
    let sections = design(spec, trace.sample_rate_hz)?;
    let x = &trace.samples;
    if x.is_empty() {
        return Ok(trace.clone());
    }
    let pad = (3 * settling_len(&sections)).min(x.len() - 1);
    let mut buf = Vec::with_capacity(x.len() + 2 * pad);
    // odd reflection about the first and last samples
    for i in (1..=pad).rev() {
        buf.push(2.0 * x[0] - x[i]);
    }
    buf.extend_from_slice(x);
    for i in (1..=pad).rev() {
        buf.push(2.0 * x[x.len() - 1] - x[x.len() - 1 - i]);
    }
    filter_forward(&sections, &mut buf);
    buf.reverse();
    filter_forward(&sections, &mut buf);
    buf.reverse();
    Ok(Trace {
        sample_rate_hz: trace.sample_rate_hz,
        samples: buf[pad..pad + x.len()].to_vec(),
    })
}

/// Rectified low-pass envelope: 4th-order 20-400 Hz band-pass, absolute
/// value, 4th-order 5 Hz low-pass; all zero-phase.
pub fn envelope(trace: &Trace) -> Result<Trace, ModelError> {
    let band = filtfilt(&FilterSpec::bandpass(4, 20.0, 400.0), trace)?;
    let rectified = Trace {
        sample_rate_hz: band.sample_rate_hz,
        samples: band.samples.iter().map(|v| v.abs()).collect(),
    };
    filtfilt(&FilterSpec::lowpass(4, 5.0), &rectified)
}

/// Express an envelope as percent of a maximum-voluntary-contraction level.
pub fn mvc_normalize(env: &Trace, mvc_level: f64) -> Result<Trace, ModelError> {
    if !(mvc_level > 0.0) {
        return Err(ModelError::Domain {
            quantity: "mvc_level",
            value: mvc_level,
            constraint: "mvc_level > 0",
        });
    }
    Ok(Trace {
        sample_rate_hz: env.sample_rate_hz,
        samples: env
            .samples
            .iter()
            .map(|v| 100.0 * v / mvc_level)
            .collect(),
    })
}

/// Hysteresis thresholds for transition detection, as fractions of the
/// knee-angle excursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentThresholds {
    pub low_fraction: f64,
    pub high_fraction: f64,
}

impl Default for SegmentThresholds {
    fn default() -> Self {
        Self {
            low_fraction: 0.10,
            high_fraction: 0.90,
        }
    }
}

/// Phase-normalized average of an envelope over repeated transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedCycle {
    /// Uniform 0..=100 percent grid.
    pub phase_pct: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub repetitions: usize,
}

const PHASE_POINTS: usize = 101;

fn resample_segment(env: &[f64], start: usize, end: usize) -> Vec<f64> {
    let span = (end - start) as f64;
    (0..PHASE_POINTS)
        .map(|i| {
            let pos = start as f64 + span * i as f64 / (PHASE_POINTS - 1) as f64;
            let i0 = pos as usize;
            let frac = pos - i0 as f64;
            if i0 + 1 < env.len() {
                env[i0] * (1.0 - frac) + env[i0 + 1] * frac
            } else {
                env[env.len() - 1]
            }
        })
        .collect()
}

fn average_cycles(segments: &[(usize, usize)], env: &[f64]) -> SegmentedCycle {
    let n = segments.len();
    let mut mean = vec![0.0; PHASE_POINTS];
    let mut m2 = vec![0.0; PHASE_POINTS];
    let resampled: Vec<Vec<f64>> = segments
        .iter()
        .map(|&(s, e)| resample_segment(env, s, e))
        .collect();
    for r in &resampled {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v / n as f64;
        }
    }
    for r in &resampled {
        for ((s, v), m) in m2.iter_mut().zip(r).zip(&mean) {
            *s += (v - m) * (v - m) / n as f64;
        }
    }
    SegmentedCycle {
        phase_pct: (0..PHASE_POINTS).map(|i| i as f64).collect(),
        mean,
        std: m2.iter().map(|v| math::sqrt(*v)).collect(),
        repetitions: n,
    }
}

/// Split an envelope into stand-to-sit and sit-to-stand repetitions from the
/// knee-angle trace and average each direction on a 0-100% phase grid.
///
/// Returns `(sitting, standing)`: angle excursions rising into the seated
/// band and falling into the standing band respectively.
pub fn segment_by_transition(
    env: &Trace,
    knee: &Trace,
    th: &SegmentThresholds,
) -> Result<(SegmentedCycle, SegmentedCycle), ModelError> {
    if env.samples.len() != knee.samples.len() || env.sample_rate_hz != knee.sample_rate_hz {
        return Err(ModelError::Segmentation(
            "envelope and knee traces must be time-aligned at equal rate",
        ));
    }
    if !(0.0 < th.low_fraction && th.low_fraction < th.high_fraction && th.high_fraction < 1.0) {
        return Err(ModelError::Segmentation(
            "thresholds must satisfy 0 < low < high < 1",
        ));
    }
    let angle = &knee.samples;
    if angle.len() < 2 {
        return Err(ModelError::Segmentation("trace too short"));
    }
    let a_min = angle.iter().cloned().fold(f64::INFINITY, f64::min);
    let a_max = angle.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(a_max > a_min) {
        return Err(ModelError::Segmentation("knee angle is constant"));
    }
    let lo = a_min + th.low_fraction * (a_max - a_min);
    let hi = a_min + th.high_fraction * (a_max - a_min);

    #[derive(Clone, Copy, PartialEq)]
    enum Side {
        Unknown,
        Low,
        High,
    }
    let mut side = Side::Unknown;
    let mut last_in_band = 0usize; // last index inside the current side's band
    let mut rising: Vec<(usize, usize)> = Vec::new(); // low -> high (sitting down)
    let mut falling: Vec<(usize, usize)> = Vec::new(); // high -> low (standing up)
    for (i, &a) in angle.iter().enumerate() {
        let in_low = a <= lo;
        let in_high = a >= hi;
        match side {
            Side::Unknown => {
                if in_low {
                    side = Side::Low;
                    last_in_band = i;
                } else if in_high {
                    side = Side::High;
                    last_in_band = i;
                }
            }
            Side::Low => {
                if in_high {
                    rising.push((last_in_band, i));
                    side = Side::High;
                    last_in_band = i;
                } else if in_low {
                    last_in_band = i;
                }
            }
            Side::High => {
                if in_low {
                    falling.push((last_in_band, i));
                    side = Side::Low;
                    last_in_band = i;
                } else if in_high {
                    last_in_band = i;
                }
            }
        }
    }
    if rising.is_empty() || falling.is_empty() {
        return Err(ModelError::Segmentation(
            "no complete transition between the angle bands",
        ));
    }
    Ok((
        average_cycles(&rising, &env.samples),
        average_cycles(&falling, &env.samples),
    ))
}

//! End-to-end acceptance gate.
//!
//! One test per criterion; each prints a PASS/FAIL line so the suite doubles
//! as a human-readable checklist. Tolerances are pinned in the constants
//! below and must not be loosened without revisiting the requirements.

use exosim_core::fit::{fit_pam_quartic, fit_pump, SampleSeries};
use exosim_core::fsm::{ExoMode, Thresholds};
use exosim_core::gas::{
    coupled_pressure_at_angle, isothermal_expand, merge_isothermal, torque_mode_volume, GasState,
};
use exosim_core::linkage::exo_torque_nm;
use exosim_core::models::ActuatorModels;
use exosim_core::pressure::PressureConvention;
use exosim_core::pump::PumpModel;
use exosim_core::signal::{
    envelope, filtfilt, segment_by_transition, FilterSpec, SegmentThresholds, Trace,
};
use exosim_core::sim::{
    energy_report, run_scenario, synthetic_trajectory, theoretical_profiles, ScenarioOptions,
    ScenarioResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const ABS: PressureConvention = PressureConvention::Absolute;

fn check(name: &str, cond: bool) {
    println!("[{}] {name}", if cond { "PASS" } else { "FAIL" });
    assert!(cond, "{name}");
}

fn within(value: f64, center: f64, tol: f64) -> bool {
    (value - center).abs() <= tol
}

fn default_scenario() -> ScenarioResult {
    let models = ActuatorModels::default_paper();
    let pump = PumpModel::small();
    let th = Thresholds::default();
    let traj = synthetic_trajectory(90.0, 2.0, 8.0, 2.0, 10, 0.01);
    run_scenario(&models, &pump, &th, &traj, 10, &ScenarioOptions::default()).unwrap()
}

#[test]
fn criterion_1_refill_times_and_actuation_frequencies() {
    let start = Instant::now();
    let small = energy_report(&PumpModel::small(), 3.2, 1.85, 2.46, 2).unwrap();
    let large = energy_report(&PumpModel::large(), 3.2, 1.85, 2.46, 2).unwrap();
    check(
        "criterion 1: small-pump refill 3.60 s +/- 0.05 (one leg, with recovery)",
        within(small.refill_with_er_one_leg_s, 3.60, 0.05),
    );
    check(
        "criterion 1: small-pump refill 4.59 s +/- 0.05 (one leg, without recovery)",
        within(small.refill_without_er_one_leg_s, 4.59, 0.05),
    );
    check(
        "criterion 1: small-pump frequency 8.32 +/- 0.05 per min (with recovery)",
        within(small.max_freq_with_er_per_min, 8.32, 0.05),
    );
    check(
        "criterion 1: small-pump frequency 6.55 +/- 0.05 per min (without recovery)",
        within(small.max_freq_without_er_per_min, 6.55, 0.05),
    );
    check(
        "criterion 1: large-pump refill 0.42 s +/- 0.02 (one leg, with recovery)",
        within(large.refill_with_er_one_leg_s, 0.42, 0.02),
    );
    check(
        "criterion 1: large-pump refill 0.71 s +/- 0.02 (one leg, without recovery)",
        within(large.refill_without_er_one_leg_s, 0.71, 0.02),
    );
    check(
        "criterion 1: large-pump frequency within 1.5 per min of 71.53 (with recovery)",
        within(large.max_freq_with_er_per_min, 71.53, 1.5),
    );
    check(
        "criterion 1: large-pump frequency within 1.5 per min of 43.31 (without recovery)",
        within(large.max_freq_without_er_per_min, 43.31, 1.5),
    );
    check(
        "criterion 1: analytic report runs in under 1 s",
        start.elapsed().as_secs_f64() < 1.0,
    );
}

#[test]
fn criterion_2_endurance_factors() {
    let small = energy_report(&PumpModel::small(), 3.2, 1.85, 2.46, 2).unwrap();
    let large = energy_report(&PumpModel::large(), 3.2, 1.85, 2.46, 2).unwrap();
    check(
        "criterion 2: small-pump endurance factor 1.27 +/- 0.01",
        within(small.endurance_factor, 1.27, 0.01),
    );
    check(
        "criterion 2: large-pump endurance factor 1.69 +/- 0.03",
        within(large.endurance_factor, 1.69, 0.03),
    );
}

#[test]
fn criterion_3_scenario_pressures() {
    let result = default_scenario();
    let standing = result.report.p_standing_bar;
    let recovered = result.report.p_recovered_bar;
    check(
        "criterion 3: standing reservoir pressure in [1.6, 2.1] bar gauge",
        (1.6..=2.1).contains(&standing),
    );
    check(
        "criterion 3: post-air-return pressure in [2.2, 2.8] bar gauge",
        (2.2..=2.8).contains(&recovered),
    );
}

#[test]
fn criterion_4_torque_plausibility() {
    let result = default_scenario();
    let mut entry = Vec::new();
    let mut qp_peak = 0.0_f64;
    let mut prev = ExoMode::ReleaseAll;
    for s in &result.samples {
        if s.mode == ExoMode::Torque && prev != ExoMode::Torque {
            entry.push(s.torque_nm);
        }
        if s.mode == ExoMode::QuasiPassiveDamper {
            qp_peak = qp_peak.max(s.torque_nm);
        }
        prev = s.mode;
    }
    check(
        "criterion 4: active torque at torque-mode entry in [5, 8.5] Nm",
        !entry.is_empty() && entry.iter().all(|t| (5.0..=8.5).contains(t)),
    );
    check(
        "criterion 4: quasi-passive peak torque in [10, 20] Nm",
        (10.0..=20.0).contains(&qp_peak),
    );
    let models = ActuatorModels::default_paper();
    let mut t_max = 0.0_f64;
    for i in 0..=1070 {
        let theta = i as f64 / 10.0;
        let f = models.cylinder.force_n(8.0);
        t_max = t_max.max(exo_torque_nm(f, &models.linkage, theta));
    }
    check(
        "criterion 4: calibrated peak torque 20 +/- 1 Nm at 8 bar",
        within(t_max, 20.0, 1.0),
    );
}

#[test]
fn criterion_5_gas_law_property_suite() {
    let start = Instant::now();
    let models = ActuatorModels::default_paper();

    // 1000 randomized expand/merge cases, pV conserved to 1e-10 relative
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let a = GasState::new(
            rng.gen_range(0.2..9.0),
            rng.gen_range(1.0e-6..2.0e-4),
            ABS,
        )
        .unwrap();
        let e = isothermal_expand(&a, rng.gen_range(1.0e-6..2.0e-4), ABS).unwrap();
        worst = worst.max((e.pv() - a.pv()).abs() / a.pv());
        let b = GasState::new(
            rng.gen_range(0.2..9.0),
            rng.gen_range(1.0e-6..2.0e-4),
            ABS,
        )
        .unwrap();
        let v_rigid = rng.gen_range(1.0e-6..1.0e-4);
        let pam = models.pam.clone();
        let v_joint = |p: f64| pam.volume_at_pressure_m3(ABS.to_gauge(p)).unwrap() + v_rigid;
        let p_star = merge_isothermal(&e, &b, v_joint, ABS).unwrap();
        let target = e.pv() + b.pv();
        worst = worst.max((p_star * v_joint(p_star) - target).abs() / target);
    }
    check(
        "criterion 5: pV conservation <= 1e-10 over 1000 randomized cases",
        worst <= 1.0e-10,
    );

    // solver vs dense grid on 50 randomized configurations
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut grid_ok = true;
    for _ in 0..50 {
        let theta0 = rng.gen_range(0.0..107.0);
        let p0 = ABS.from_gauge(rng.gen_range(0.5..3.3));
        let v0 = torque_mode_volume(&models, theta0, p0, ABS).unwrap();
        let init = GasState::new(p0, v0, ABS).unwrap();
        let theta = rng.gen_range(0.0..107.0);
        let p = coupled_pressure_at_angle(theta, &init, &models, ABS).unwrap();
        let target = init.pv();
        let (lo, hi, n) = (0.05, 12.0, 100_000);
        let step = (hi - lo) / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=n {
            let cand = lo + step * i as f64;
            let v = torque_mode_volume(&models, theta, cand, ABS).unwrap();
            let r = (cand * v - target).abs();
            if r < best.0 {
                best = (r, cand);
            }
        }
        grid_ok &= (p - best.1).abs() <= 2.0 * step;
    }
    check(
        "criterion 5: coupled solver within 2 grid steps of a 1e5-point oracle (50 configs)",
        grid_ok,
    );

    // torque-mode round trip
    let p0 = ABS.from_gauge(3.2);
    let v0 = torque_mode_volume(&models, 107.0, p0, ABS).unwrap();
    let init = GasState::new(p0, v0, ABS).unwrap();
    let p_ext = coupled_pressure_at_angle(0.0, &init, &models, ABS).unwrap();
    let v_ext = torque_mode_volume(&models, 0.0, p_ext, ABS).unwrap();
    let ext = GasState::new(p_ext, v_ext, ABS).unwrap();
    let p_back = coupled_pressure_at_angle(107.0, &ext, &models, ABS).unwrap();
    check(
        "criterion 5: torque-mode round trip restores pressure within solver tolerance",
        (p_back - p0).abs() < 1.0e-8,
    );
    check(
        "criterion 5: property suite runs in under 10 s",
        start.elapsed().as_secs_f64() < 10.0,
    );
}

#[test]
fn criterion_6_state_machine_golden_trace() {
    let result = default_scenario();
    let seq: Vec<&str> = result.events.iter().map(|e| e.to.name()).collect();
    let mut expect: Vec<&str> = Vec::new();
    for _ in 0..10 {
        expect.extend_from_slice(&[
            "pump_charging",
            "hold_air_transparent",
            "torque",
            "quasi_passive_damper",
            "air_return",
            "hold_air_transparent",
        ]);
    }
    expect.push("release_all");
    check(
        "criterion 6: ten repetitions produce the exact seven-phase sequence",
        seq == expect,
    );
    check(
        "criterion 6: pump runs only in charging segments",
        result
            .samples
            .iter()
            .all(|s| s.mode.config().pump_on == (s.mode == ExoMode::PumpCharging)),
    );
    let mut transparent_ok = true;
    let mut prev: Option<(ExoMode, f64)> = None;
    for s in &result.samples {
        if let Some((m, p)) = prev {
            if m == ExoMode::HoldAirTransparent && s.mode == ExoMode::HoldAirTransparent {
                transparent_ok &= (s.p_pam_bar - p).abs() < 1.0e-12;
            }
        }
        prev = Some((s.mode, s.p_pam_bar));
    }
    check(
        "criterion 6: reservoir pressure constant while transparent",
        transparent_ok,
    );
    let reps = &result.pump_on_per_rep_s;
    let steady = reps[1..]
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() <= 1.0e-3);
    check(
        "criterion 6: per-cycle pump-on time constant to 1e-3 s from repetition 2",
        reps.len() == 10 && steady,
    );
}

#[test]
fn criterion_7_identification_suite() {
    // pump fit under 1% noise, fixed seed
    let p_max = 3.32;
    let k = 1.8302;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x: Vec<f64> = (0..120).map(|i| i as f64 * 0.1).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|t| {
            let clean = p_max * (1.0 - (-t / k).exp());
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let g = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            clean + 0.01 * p_max * g
        })
        .collect();
    let fit = fit_pump(&SampleSeries::new(x, y).unwrap()).unwrap();
    let p_hat = fit.param("p_max").unwrap();
    let k_hat = fit.param("k").unwrap();
    check(
        "criterion 7: pump parameters recovered within 2% under 1% noise",
        (p_hat - p_max).abs() / p_max < 0.02 && (k_hat - k).abs() / k < 0.02,
    );
    check("criterion 7: pump fit R^2 above 0.99", fit.r_squared > 0.99);

    // quartic fit on noiseless samples of the published curve
    let c = [0.1022, -1.3370, 5.1426, -0.8131, 0.4189];
    let x: Vec<f64> = (0..25).map(|i| i as f64 * 3.32 / 24.0).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&p| (((c[0] * p + c[1]) * p + c[2]) * p + c[3]) * p + c[4])
        .collect();
    let fit = fit_pam_quartic(&SampleSeries::new(x, y).unwrap()).unwrap();
    let exact = ["c1", "c2", "c3", "c4", "c5"]
        .iter()
        .enumerate()
        .all(|(i, n)| (fit.param(n).unwrap() - c[i]).abs() < 1.0e-8);
    check(
        "criterion 7: quartic coefficients recovered to 1e-8 on noiseless data",
        exact,
    );
    check(
        "criterion 7: quartic fit R^2 equals 1",
        (fit.r_squared - 1.0).abs() < 1.0e-12,
    );
}

#[test]
fn criterion_8_signal_suite() {
    let fs = 2148.15;
    let sine = |freq: f64, secs: f64| {
        let n = (fs * secs) as usize;
        Trace::new(
            fs,
            (0..n)
                .map(|i| (std::f64::consts::TAU * freq * i as f64 / fs).sin())
                .collect(),
        )
        .unwrap()
    };
    let mid_amp = |t: &Trace| {
        let n = t.samples.len();
        t.samples[n / 4..3 * n / 4]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    };
    let band = FilterSpec::bandpass(4, 20.0, 400.0);
    let g50 = mid_amp(&filtfilt(&band, &sine(50.0, 3.0)).unwrap());
    check(
        "criterion 8: band-pass unity gain at 50 Hz within 5%",
        within(g50, 1.0, 0.05),
    );
    let g5 = mid_amp(&filtfilt(&band, &sine(5.0, 4.0)).unwrap());
    check(
        "criterion 8: band-pass attenuates 5 Hz by at least 20 dB",
        g5 <= 0.1,
    );

    // amplitude-modulated noise envelope
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = (2000.0 * 8.0) as usize;
    let modulator: Vec<f64> = (0..n)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::TAU * 0.5 * i as f64 / 2000.0).cos()))
        .collect();
    let trace = Trace::new(
        2000.0,
        modulator
            .iter()
            .map(|m| m * rng.gen_range(-1.0..1.0))
            .collect(),
    )
    .unwrap();
    let env = envelope(&trace).unwrap();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(&env.samples), mean(&modulator));
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (a, b) in env.samples.iter().zip(&modulator) {
        cov += (a - ma) * (b - mb);
        va += (a - ma) * (a - ma);
        vb += (b - mb) * (b - mb);
    }
    let corr = cov / (va.sqrt() * vb.sqrt());
    check(
        "criterion 8: envelope correlates with the modulator at 0.95 or better",
        corr >= 0.95,
    );

    // segmentation recovers the injected repetition count
    let fs2 = 200.0;
    let period = 4.0;
    let reps = 10usize;
    let m = (fs2 * period * reps as f64) as usize;
    let knee = Trace::new(
        fs2,
        (0..m)
            .map(|i| {
                let phase = (i as f64 / fs2) % period / period;
                let tri = if phase < 0.5 { phase * 2.0 } else { 2.0 - phase * 2.0 };
                90.0 * tri
            })
            .collect(),
    )
    .unwrap();
    let flat = Trace::new(fs2, vec![1.0; m]).unwrap();
    let (sit, stand) =
        segment_by_transition(&flat, &knee, &SegmentThresholds::default()).unwrap();
    check(
        "criterion 8: segmentation recovers the injected repetition count",
        sit.repetitions == reps && stand.repetitions == reps,
    );
}

#[test]
fn criterion_9_profile_monotonicity() {
    let models = ActuatorModels::default_paper();
    let rows = theoretical_profiles(&models, ABS, 3.2, 107.0, 0.0, 200).unwrap();
    let pressure_ok = rows.windows(2).all(|w| w[1].p_pam_bar <= w[0].p_pam_bar + 1.0e-12);
    let torque_ok = rows.windows(2).all(|w| w[1].torque_nm <= w[0].torque_nm + 1.0e-9);
    let volume_ok = rows
        .windows(2)
        .all(|w| w[1].v_m_m3 + w[1].v_c_m3 >= w[0].v_m_m3 + w[0].v_c_m3 - 1.0e-15);
    check(
        "criterion 9: pressure nonincreasing along 107 deg -> 0 deg",
        pressure_ok,
    );
    check(
        "criterion 9: torque nonincreasing along 107 deg -> 0 deg",
        torque_ok,
    );
    check(
        "criterion 9: total gas volume nondecreasing along 107 deg -> 0 deg",
        volume_ok,
    );
    let end = rows.last().unwrap().p_pam_bar;
    check(
        "criterion 9: endpoint pressure in [1.6, 2.1] bar gauge",
        (1.6..=2.1).contains(&end),
    );
}

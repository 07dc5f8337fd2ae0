//! Model identification: least-squares fits for the exponential pump charge
//! law and the quartic contraction polynomial, with goodness-of-fit metrics.
//!
//! The pump fit is deterministic and derivative-free: a coarse grid over the
//! time constant (the amplitude has a closed-form optimum per candidate),
//! refined by golden-section search. The polynomial fit solves the normal
//! problem through Householder QR on the monomial Vandermonde matrix.

use crate::error::ModelError;
use crate::math;
use alloc::vec;
use alloc::vec::Vec;

/// Paired, strictly increasing abscissa series.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl SampleSeries {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, ModelError> {
        if x.len() != y.len() {
            return Err(ModelError::Domain {
                quantity: "series length",
                value: y.len() as f64,
                constraint: "len(x) == len(y)",
            });
        }
        for v in x.iter().chain(y.iter()) {
            if !v.is_finite() {
                return Err(ModelError::Domain {
                    quantity: "sample",
                    value: *v,
                    constraint: "finite",
                });
            }
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ModelError::Domain {
                    quantity: "x",
                    value: w[1],
                    constraint: "strictly increasing",
                });
            }
        }
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Named coefficients plus goodness of fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Vec<(&'static str, f64)>,
    pub r_squared: f64,
    pub rms_residual: f64,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
    }
}

/// Coefficient of determination `1 - SS_res / SS_tot`.
pub fn r_squared(y: &[f64], y_hat: &[f64]) -> Result<f64, ModelError> {
    if y.len() != y_hat.len() || y.len() < 2 {
        return Err(ModelError::Domain {
            quantity: "series length",
            value: y.len() as f64,
            constraint: "equal lengths >= 2",
        });
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss_tot == 0.0 {
        return Err(ModelError::IllConditionedFit(
            "R^2 undefined for constant data",
        ));
    }
    let ss_res: f64 = y
        .iter()
        .zip(y_hat)
        .map(|(v, h)| (v - h) * (v - h))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

fn rms(res: &[f64]) -> f64 {
    math::sqrt(res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64)
}

/// Residual sum of squares for the charge law at time constant `k`, with the
/// closed-form optimal amplitude `p_max(k) = sum(y g) / sum(g^2)`,
/// `g = 1 - exp(-x/k)`.
fn pump_ss_res(data: &SampleSeries, k: f64) -> (f64, f64) {
    let mut sum_yg = 0.0;
    let mut sum_gg = 0.0;
    for (x, y) in data.x.iter().zip(&data.y) {
        let g = 1.0 - math::exp(-x / k);
        sum_yg += y * g;
        sum_gg += g * g;
    }
    if sum_gg == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let p_max = sum_yg / sum_gg;
    let mut ss = 0.0;
    for (x, y) in data.x.iter().zip(&data.y) {
        let r = y - p_max * (1.0 - math::exp(-x / k));
        ss += r * r;
    }
    (p_max, ss)
}

/// Fit `y = p_max (1 - exp(-x/k))`: coarse grid over `k` in [0.1, 20] s,
/// then golden-section refinement to 1e-6 relative.
pub fn fit_pump(data: &SampleSeries) -> Result<FitResult, ModelError> {
    if data.len() < 6 {
        return Err(ModelError::Domain {
            quantity: "sample count",
            value: data.len() as f64,
            constraint: ">= 6 for the pump fit",
        });
    }
    let y_min = data.y.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_max = data.y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if y_max - y_min <= 1.0e-12 * y_max.abs().max(1.0) {
        return Err(ModelError::IllConditionedFit(
            "constant ordinates carry no charge-law information",
        ));
    }

    const K_LO: f64 = 0.1;
    const K_HI: f64 = 20.0;
    const GRID: usize = 400;
    let mut best_i = 0;
    let mut best_ss = f64::INFINITY;
    for i in 0..=GRID {
        let k = K_LO + (K_HI - K_LO) * i as f64 / GRID as f64;
        let (_, ss) = pump_ss_res(data, k);
        if ss < best_ss {
            best_ss = ss;
            best_i = i;
        }
    }
    let step = (K_HI - K_LO) / GRID as f64;
    let mut a = (K_LO + step * best_i.saturating_sub(1) as f64).max(K_LO);
    let mut b = (K_LO + step * (best_i + 1) as f64).min(K_HI);

    // golden-section minimization of SS_res(k)
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = pump_ss_res(data, c).1;
    let mut fd = pump_ss_res(data, d).1;
    while (b - a) > 1.0e-6 * b {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = pump_ss_res(data, c).1;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = pump_ss_res(data, d).1;
        }
    }
    let k = 0.5 * (a + b);
    let (p_max, _) = pump_ss_res(data, k);

    let y_hat: Vec<f64> = data
        .x
        .iter()
        .map(|x| p_max * (1.0 - math::exp(-x / k)))
        .collect();
    let res: Vec<f64> = data.y.iter().zip(&y_hat).map(|(y, h)| y - h).collect();
    Ok(FitResult {
        params: vec![("p_max", p_max), ("k", k)],
        r_squared: r_squared(&data.y, &y_hat)?,
        rms_residual: rms(&res),
    })
}

/// Least-squares solve of `A beta = y` via Householder QR; `a` is row-major
/// with `cols` columns. Errors on (numerical) rank deficiency.
fn qr_solve(a: &mut [f64], y: &mut [f64], rows: usize, cols: usize) -> Result<Vec<f64>, ModelError> {
    debug_assert_eq!(a.len(), rows * cols);
    for j in 0..cols {
        // Householder vector for column j below the diagonal
        let mut norm = 0.0;
        for i in j..rows {
            norm += a[i * cols + j] * a[i * cols + j];
        }
        let norm = math::sqrt(norm);
        if norm == 0.0 {
            return Err(ModelError::IllConditionedFit(
                "rank-deficient design matrix",
            ));
        }
        let alpha = if a[j * cols + j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..rows).map(|i| a[i * cols + j]).collect();
        v[0] -= alpha;
        let v_norm2: f64 = v.iter().map(|x| x * x).sum();
        if v_norm2 > 0.0 {
            for col in j..cols {
                let dot: f64 = (j..rows).map(|i| v[i - j] * a[i * cols + col]).sum();
                let s = 2.0 * dot / v_norm2;
                for i in j..rows {
                    a[i * cols + col] -= s * v[i - j];
                }
            }
            let dot: f64 = (j..rows).map(|i| v[i - j] * y[i]).sum();
            let s = 2.0 * dot / v_norm2;
            for i in j..rows {
                y[i] -= s * v[i - j];
            }
        }
        a[j * cols + j] = alpha;
    }
    // back substitution on the upper-triangular R
    let scale = a
        .iter()
        .take(cols * cols)
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut beta = vec![0.0; cols];
    for j in (0..cols).rev() {
        let r_jj = a[j * cols + j];
        if r_jj.abs() <= 1.0e-12 * scale.max(1.0) {
            return Err(ModelError::IllConditionedFit(
                "rank-deficient design matrix",
            ));
        }
        let mut s = y[j];
        for l in (j + 1)..cols {
            s -= a[j * cols + l] * beta[l];
        }
        beta[j] = s / r_jj;
    }
    Ok(beta)
}

/// Ordinary least squares on the degree-4 monomial basis; coefficients are
/// returned highest power first (c1 x^4 ... c5 constant).
pub fn fit_pam_quartic(data: &SampleSeries) -> Result<FitResult, ModelError> {
    if data.len() < 10 {
        return Err(ModelError::Domain {
            quantity: "sample count",
            value: data.len() as f64,
            constraint: ">= 10 for the quartic fit",
        });
    }
    let rows = data.len();
    const COLS: usize = 5;
    let mut a = vec![0.0; rows * COLS];
    for (i, &x) in data.x.iter().enumerate() {
        let x2 = x * x;
        a[i * COLS] = x2 * x2;
        a[i * COLS + 1] = x2 * x;
        a[i * COLS + 2] = x2;
        a[i * COLS + 3] = x;
        a[i * COLS + 4] = 1.0;
    }
    let mut rhs = data.y.clone();
    let beta = qr_solve(&mut a, &mut rhs, rows, COLS)?;

    let eval = |x: f64| {
        (((beta[0] * x + beta[1]) * x + beta[2]) * x + beta[3]) * x + beta[4]
    };
    let y_hat: Vec<f64> = data.x.iter().map(|&x| eval(x)).collect();
    let res: Vec<f64> = data.y.iter().zip(&y_hat).map(|(y, h)| y - h).collect();
    Ok(FitResult {
        params: vec![
            ("c1", beta[0]),
            ("c2", beta[1]),
            ("c3", beta[2]),
            ("c4", beta[3]),
            ("c5", beta[4]),
        ],
        r_squared: r_squared(&data.y, &y_hat)?,
        rms_residual: rms(&res),
    })
}

//! Time-ordered products of exact exponentials for arbitrary `H(t)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::{expm_hermitian, operator_distance, Matrix8};

/// Default step count for verification runs.
pub const DEFAULT_STEPS: usize = 8192;

/// Where each slice samples the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Left endpoint; first order in `dt`.
    LeftPoint,
    /// Interval midpoint; second order in `dt`.
    Midpoint,
}

impl Scheme {
    fn sample_time(self, k: usize, dt: f64) -> f64 {
        match self {
            Scheme::LeftPoint => k as f64 * dt,
            Scheme::Midpoint => (k as f64 + 0.5) * dt,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::LeftPoint => "leftpoint",
            Scheme::Midpoint => "midpoint",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "leftpoint" | "left" | "left_point" => Ok(Scheme::LeftPoint),
            "midpoint" | "mid" => Ok(Scheme::Midpoint),
            other => Err(invalid("scheme", format!("unknown scheme {other:?}"))),
        }
    }
}

/// `exp(-i h(t_n) dt) ... exp(-i h(t_1) dt)` over `[0, duration]`.
pub fn propagate<H>(h: H, duration: f64, n_steps: usize, scheme: Scheme) -> Result<Matrix8>
where
    H: Fn(f64) -> Matrix8,
{
    if n_steps == 0 {
        return Err(invalid("n_steps", "must be at least 1"));
    }
    if !duration.is_finite() {
        return Err(invalid("duration", "must be finite"));
    }
    let dt = duration / n_steps as f64;
    let mut u = Matrix8::identity();
    for k in 0..n_steps {
        let hk = h(scheme.sample_time(k, dt));
        u = expm_hermitian(&hk, dt)? * u;
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log(error)` against `log(dt)`; `None` when fewer
    /// than two rows carry a resolvable error.
    pub fitted_order: Option<f64>,
}

impl ConvergenceReport {
    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.error)
    }
}

/// Errors below this are treated as round-off when fitting the order.
const ORDER_FIT_FLOOR: f64 = 1e-13;

/// Propagate at each step count and measure the Frobenius distance to `oracle`.
pub fn convergence_report<H>(
    h: H,
    duration: f64,
    oracle: &Matrix8,
    steps_list: &[usize],
    scheme: Scheme,
) -> Result<ConvergenceReport>
where
    H: Fn(f64) -> Matrix8,
{
    if steps_list.is_empty() {
        return Err(invalid("steps_list", "must not be empty"));
    }
    if steps_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("steps_list", "must be strictly ascending"));
    }
    let rows = steps_list
        .iter()
        .map(|&n| {
            let u = propagate(&h, duration, n, scheme)?;
            Ok(ConvergenceRow {
                n_steps: n,
                error: operator_distance(&u, oracle),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_order = fit_order(&rows, duration);
    Ok(ConvergenceReport {
        scheme,
        rows,
        fitted_order,
    })
}

fn fit_order(rows: &[ConvergenceRow], duration: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > ORDER_FIT_FLOOR)
        .map(|r| ((duration / r.n_steps as f64).ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

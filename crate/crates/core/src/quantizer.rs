//! Integer quantization of the optimal pulse.
//!
//! At the gate time every sector frequency is an integer multiple of `pi / T`
//! and the precession closes an integer number of turns:
//! `omega_pm T = pi n_pm`, `omega_0 T = pi n_0`, `Omega T = 2 pi m`.
//! Inverting the sector frequencies gives the pulse parameters as functions of
//! the integers; minimizing `f_minus = n_+^2 + n_-^2 - 2 n_0^2` minimizes `J T`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::{ControlParams, SynthesisTarget};

/// Default search bound on each of `n_+, n_-, n_0`.
pub const DEFAULT_N_MAX: u32 = 25;

/// Quantization integers. `m` counts field precession turns (`Omega T = 2 pi m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    pub n_plus: u32,
    pub n_minus: u32,
    pub n_zero: u32,
    pub m: i64,
}

impl Triple {
    pub fn new(n_plus: u32, n_minus: u32, n_zero: u32, m: i64) -> Result<Self> {
        if n_plus == 0 || n_minus == 0 || n_zero == 0 {
            return Err(invalid(
                "triple",
                "n_plus, n_minus and n_zero must be positive",
            ));
        }
        Ok(Self {
            n_plus,
            n_minus,
            n_zero,
            m,
        })
    }

    pub fn with_m(self, m: i64) -> Self {
        Self { m, ..self }
    }

    pub fn shape(&self) -> ShapeValues {
        shape_values(self)
    }

    /// The turn count relabelled so that `|Bz| T = pi |m_reported - |c||`, with
    /// `c = f_zero / (2 sqrt(2 f_minus))`; under this labelling the smallest
    /// longitudinal field always sits at `m_reported = 1` for the minimal triples.
    pub fn reported_m(&self) -> i64 {
        flip_for_shape(self.m, self.shape().f_zero)
    }

    /// Inverse of [`Triple::reported_m`].
    pub fn with_reported_m(self, reported_m: i64) -> Self {
        let f_zero = self.shape().f_zero;
        self.with_m(flip_for_shape(reported_m, f_zero))
    }
}

fn flip_for_shape(m: i64, f_zero: i64) -> i64 {
    if f_zero > 0 {
        -m
    } else {
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShapeValues {
    pub f_minus: i64,
    pub f_plus: i64,
    pub f_zero: i64,
}

impl ShapeValues {
    /// `f_zero / (2 sqrt(2 f_minus))`, so that `Bz T = pi (m + offset)`.
    pub fn longitudinal_offset(&self) -> f64 {
        self.f_zero as f64 / (2.0 * (2.0 * self.f_minus as f64).sqrt())
    }

    /// Turn count minimizing `|Bz|`.
    pub fn min_bz_m(&self) -> i64 {
        if self.f_minus <= 0 {
            return 0;
        }
        -(self.longitudinal_offset().round() as i64)
    }
}

pub fn shape_values(t: &Triple) -> ShapeValues {
    let (p, mi, z) = (t.n_plus as i64, t.n_minus as i64, t.n_zero as i64);
    ShapeValues {
        f_minus: p * p + mi * mi - 2 * z * z,
        f_plus: p * p + mi * mi + 2 * z * z,
        f_zero: p * p - mi * mi,
    }
}

/// Parity rule selecting which diagonal the propagator lands on.
///
/// U13S needs `n_0 = n_- (mod 2)` with `n_+` of the other parity; the CNOT
/// family needs `n_0 = n_+ (mod 2)` with `n_-` of the other parity.
pub fn parity_ok(t: &Triple, g: SynthesisTarget) -> bool {
    let (p, mi, z) = (t.n_plus % 2, t.n_minus % 2, t.n_zero % 2);
    match g {
        SynthesisTarget::U13S => z == mi && p != z,
        SynthesisTarget::Cnot13 | SynthesisTarget::CnotPm13 => z == p && mi != p,
    }
}

/// Parity, positive gate time, and a real transverse amplitude
/// (`8 n_0^2 f_minus >= f_zero^2`).
pub fn feasible(t: &Triple, g: SynthesisTarget) -> bool {
    if t.n_plus == 0 || t.n_minus == 0 || t.n_zero == 0 || !parity_ok(t, g) {
        return false;
    }
    let s = t.shape();
    let n0 = t.n_zero as i128;
    s.f_minus > 0 && 8 * n0 * n0 * s.f_minus as i128 >= (s.f_zero as i128).pow(2)
}

/// Pulse parameters realizing a quantized solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseSolution {
    pub params: ControlParams,
    /// Gate time `T`.
    pub duration: f64,
    /// Energy parameter `omega`.
    pub energy: f64,
}

/// Invert the quantization conditions for coupling `j`.
///
/// Uses `omega_+^2 - omega_-^2 = -2 pi J (Omega - 2 Bz)`, giving
/// `(Omega - 2 Bz) T = -pi f_zero / sqrt(2 f_minus)`.
pub fn physical_params(t: &Triple, g: SynthesisTarget, j: f64) -> Result<PulseSolution> {
    if !(j.is_finite() && j > 0.0) {
        return Err(invalid("J", format!("coupling must be positive, got {j}")));
    }
    if !feasible(t, g) {
        return Err(Error::InfeasibleTriple {
            n_plus: t.n_plus,
            n_minus: t.n_minus,
            n_zero: t.n_zero,
            target: g.name(),
        });
    }
    let s = t.shape();
    let f_minus = s.f_minus as f64;
    let f_zero = s.f_zero as f64;
    let n0 = t.n_zero as f64;

    let jt = (f_minus / 2.0).sqrt();
    let duration = jt / j;
    let b0t = PI
        * (n0 * n0 - f_zero * f_zero / (8.0 * f_minus))
            .max(0.0)
            .sqrt();
    let omega_t = 2.0 * PI * t.m as f64;
    let detuning_t = -PI * f_zero / (2.0 * f_minus).sqrt();
    let bz_t = (omega_t - detuning_t) / 2.0;

    let params = ControlParams::new(j, b0t / duration, bz_t / duration, omega_t / duration, 0.0)?;
    Ok(PulseSolution {
        params,
        duration,
        energy: params.energy(),
    })
}

/// `(omega T)^2` straight from the shape values.
pub fn energy_time_squared(t: &Triple) -> f64 {
    let s = t.shape();
    let ratio2 = (s.f_zero as f64).powi(2) / s.f_minus as f64;
    let bracket = t.m as f64 + s.longitudinal_offset();
    PI * PI / 4.0 * (s.f_plus as f64 - ratio2 / 2.0 + 4.0 * bracket * bracket)
}

/// Exhaustive search over `1 <= n_+, n_-, n_0 <= n_max`.
///
/// Each triple carries the `|Bz|`-minimizing turn count. Sorted by
/// `(f_minus, n_+, n_-, n_0)`.
pub fn search(g: SynthesisTarget, n_max: u32) -> Vec<Triple> {
    let mut out = Vec::new();
    for n_plus in 1..=n_max {
        for n_minus in 1..=n_max {
            for n_zero in 1..=n_max {
                let t = Triple {
                    n_plus,
                    n_minus,
                    n_zero,
                    m: 0,
                };
                if feasible(&t, g) {
                    out.push(t.with_m(t.shape().min_bz_m()));
                }
            }
        }
    }
    out.sort_by_key(|t| (t.shape().f_minus, t.n_plus, t.n_minus, t.n_zero));
    out
}

/// First entry of [`search`].
pub fn minimal_triple(g: SynthesisTarget, n_max: u32) -> Result<Triple> {
    if n_max == 0 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    search(g, n_max)
        .into_iter()
        .next()
        .ok_or(Error::NoFeasibleTriple {
            target: g.name(),
            n_max,
        })
}

/// Optimal `J T` versus the sequential-local-unitary reference `sqrt(pi/2)`.
pub fn baseline_comparison() -> (f64, f64) {
    let optimal = 1.5f64.sqrt();
    let reference = (PI / 2.0).sqrt();
    debug_assert!(optimal < reference);
    (optimal, reference)
}

/// `|B| / J` of the optimal pulse for turn count `m` (reporting labelling).
pub fn field_ratio(m: i64) -> f64 {
    let d = m as f64 - (3.0f64 / 8.0).sqrt();
    PI / (2.0 * 3.0f64.sqrt()) * (5.0 + 8.0 * d * d).sqrt()
}

/// `J / omega` of the optimal pulse for turn count `m` (reporting labelling).
pub fn coupling_energy_ratio(m: i64) -> f64 {
    let d = m as f64 - (3.0f64 / 8.0).sqrt();
    2.0 * 3.0f64.sqrt() / PI / (11.0 + 8.0 * d * d).sqrt()
}

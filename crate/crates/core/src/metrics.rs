//! Phase-insensitive gate comparison and gate-time boundary residuals.

use std::f64::consts::PI;

use serde::Serialize;

use crate::closed_form::{sector_frequencies, sector_trig};
use crate::error::{Error, Result};
use crate::matrix::{Matrix8, DIM};
use crate::model::{sector_longitudinal, ControlParams, SynthesisTarget};

/// Unitarity tolerance for fidelity inputs.
pub const UNITARY_TOL: f64 = 1e-10;

/// Minimum fidelity for which a global phase is reported.
pub const PHASE_FIDELITY_THRESHOLD: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateMatch {
    pub fidelity: f64,
    /// `arg Tr(V^dagger U)`; `None` when fidelity is too low to define it.
    pub global_phase: Option<f64>,
}

/// `|Tr(U^dagger V)| / 8`.
pub fn fidelity(u: &Matrix8, v: &Matrix8) -> Result<f64> {
    u.ensure_unitary(UNITARY_TOL)?;
    v.ensure_unitary(UNITARY_TOL)?;
    Ok(overlap(u, v).norm() / DIM as f64)
}

/// `Tr(U^dagger V)` without materializing the product.
fn overlap(u: &Matrix8, v: &Matrix8) -> num_complex::Complex64 {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for r in 0..DIM {
        for c in 0..DIM {
            acc += u[(r, c)].conj() * v[(r, c)];
        }
    }
    acc
}

/// `chi` with `U = e^{i chi} V`, i.e. `arg Tr(V^dagger U)` in `(-pi, pi]`.
pub fn global_phase(u: &Matrix8, v: &Matrix8) -> Result<f64> {
    let f = fidelity(u, v)?;
    if f <= PHASE_FIDELITY_THRESHOLD {
        return Err(Error::UndefinedPhase {
            fidelity: f,
            threshold: PHASE_FIDELITY_THRESHOLD,
        });
    }
    Ok(overlap(v, u).arg())
}

pub fn gate_match(u: &Matrix8, v: &Matrix8) -> Result<GateMatch> {
    let fidelity = fidelity(u, v)?;
    let global_phase = (fidelity > PHASE_FIDELITY_THRESHOLD).then(|| overlap(v, u).arg());
    Ok(GateMatch {
        fidelity,
        global_phase,
    })
}

/// Distance of `chi` from the admissible grid `(k + offset) pi` of `g`.
pub fn phase_grid_distance(chi: f64, g: SynthesisTarget) -> f64 {
    let x = chi / PI - g.phase_grid_offset();
    (x - x.round()).abs() * PI
}

/// Gate-time conditions on the rotating-frame propagator, evaluated per
/// `(q1, q3)` sector (`00, 01, 10, 11`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryResiduals {
    /// `B0 S(T) cos phi(T)`: the `X2` part must vanish.
    pub transverse_cos: [f64; 4],
    /// `B0 S(T) sin phi(T)`: the `Y2` part must vanish.
    pub transverse_sin: [f64; 4],
    /// `sin(Omega T/2) C(T) + cos(Omega T/2) B_D S(T)`: the `Z2` part must vanish.
    pub longitudinal: [f64; 4],
    /// Deviation of the identity part from the nearest unimodular multiple of
    /// the target diagonal.
    pub diagonal: [f64; 4],
    /// `B0 == 0`: the transverse conditions hold trivially; this branch is excluded.
    pub degenerate: bool,
}

impl BoundaryResiduals {
    pub fn max_abs(&self) -> f64 {
        [
            self.transverse_cos,
            self.transverse_sin,
            self.longitudinal,
            self.diagonal,
        ]
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
    }
}

pub fn boundary_residuals(p: &ControlParams, t: f64, g: SynthesisTarget) -> BoundaryResiduals {
    let trig = sector_trig(t, &sector_frequencies(p));
    let bd = sector_longitudinal(p);
    let (sh, ch) = (p.omega * t / 2.0).sin_cos();
    let phi = -(p.theta(t) + p.theta0) / 2.0;

    let transverse_cos = trig.s.map(|s| p.b0 * s * phi.cos());
    let transverse_sin = trig.s.map(|s| p.b0 * s * phi.sin());
    let longitudinal = std::array::from_fn(|k| sh * trig.c[k] + ch * bd[k] * trig.s[k]);
    let identity_part: [f64; 4] = std::array::from_fn(|k| ch * trig.c[k] - sh * bd[k] * trig.s[k]);

    // The identity part is real, so the best unimodular multiple of the real
    // target diagonal is +1 or -1.
    let target = g.sector_diagonal();
    let proj: f64 = identity_part.iter().zip(&target).map(|(a, b)| a * b).sum();
    let sign = if proj >= 0.0 { 1.0 } else { -1.0 };
    let diagonal = std::array::from_fn(|k| identity_part[k] - sign * target[k]);

    BoundaryResiduals {
        transverse_cos,
        transverse_sin,
        longitudinal,
        diagonal,
        degenerate: p.b0 == 0.0,
    }
}

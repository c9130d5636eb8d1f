//! End-to-end synthesis: pick the minimal quantized pulse for a target,
//! build its closed-form propagator and compare with the target gate.

use serde::Serialize;

use crate::closed_form::{u_opt, u_opt_modified};
use crate::error::{invalid, Result};
use crate::matrix::Matrix8;
use crate::metrics::{gate_match, phase_grid_distance};
use crate::model::{target_gate, ControlParams, SynthesisTarget};
use crate::quantizer::{minimal_triple, physical_params, Triple};

/// Phase-grid tolerance for a successful synthesis.
pub const PHASE_GRID_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub target: SynthesisTarget,
    /// Quantization integers; `triple.m` is the raw turn count (`Omega T = 2 pi m`).
    pub triple: Triple,
    /// Turn count in the reporting convention (see [`Triple::reported_m`]).
    pub m: i64,
    pub duration: f64,
    pub params: ControlParams,
    pub energy: f64,
    pub fidelity: f64,
    pub global_phase: Option<f64>,
    pub f_minus: i64,
}

impl SynthesisResult {
    /// Whether the global phase lies on the admissible grid of the target.
    pub fn phase_on_grid(&self) -> bool {
        self.global_phase
            .is_some_and(|chi| phase_grid_distance(chi, self.target) < PHASE_GRID_TOL)
    }
}

/// Closed-form propagator at time `t` for the Hamiltonian family used by `g`.
pub fn target_propagator(g: SynthesisTarget, t: f64, p: &ControlParams) -> Matrix8 {
    if g.uses_rotated_hamiltonian() {
        u_opt_modified(t, p)
    } else {
        u_opt(t, p)
    }
}

/// Time-dependent Hamiltonian used by `g`.
pub fn target_hamiltonian(g: SynthesisTarget, t: f64, p: &ControlParams) -> Matrix8 {
    if g.uses_rotated_hamiltonian() {
        crate::model::modified_hamiltonian(t, p)
    } else {
        crate::model::ising_hamiltonian(t, p)
    }
}

/// Synthesize `g` from an explicit triple.
pub fn synthesize_triple(
    g: SynthesisTarget,
    triple: Triple,
    j: f64,
    theta0: f64,
) -> Result<SynthesisResult> {
    if !theta0.is_finite() {
        return Err(invalid("theta0", "must be finite"));
    }
    let sol = physical_params(&triple, g, j)?;
    let params = sol.params.with_theta0(theta0);
    let u = target_propagator(g, sol.duration, &params);
    let gm = gate_match(&u, &target_gate(g))?;
    Ok(SynthesisResult {
        target: g,
        triple,
        m: triple.reported_m(),
        duration: sol.duration,
        params,
        energy: sol.energy,
        fidelity: gm.fidelity,
        global_phase: gm.global_phase,
        f_minus: triple.shape().f_minus,
    })
}

/// Synthesize `g` with the minimal triple within `n_max`.
///
/// `reported_m` selects the turn count in the reporting convention; `None`
/// picks the one minimizing `|Bz|`.
pub fn synthesize(
    g: SynthesisTarget,
    j: f64,
    reported_m: Option<i64>,
    theta0: f64,
    n_max: u32,
) -> Result<SynthesisResult> {
    let base = minimal_triple(g, n_max)?;
    let triple = match reported_m {
        Some(m) => base.with_reported_m(m),
        None => base,
    };
    synthesize_triple(g, triple, j, theta0)
}

use serde::Serialize;

use super::Costate;
use crate::error::{invalid, Result};
use crate::matrix::eigenvalues_hermitian;
use crate::pauli::{pauli_coefficient, PauliString};

/// Minimum step count accepted by [`integrate_flow`].
pub const MIN_FLOW_STEPS: usize = 10;

/// Number of stored samples along a trajectory (plus the endpoints).
const SAMPLE_TARGET: usize = 100;

/// Denominator floor for relative drifts of quantities that start at zero.
const DRIFT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    pub trace_f2: f64,
    pub trace_hf: f64,
    pub bz: f64,
    pub b0_squared: f64,
    pub combined: f64,
    /// Recorded only; not conserved on its own along generic trajectories.
    pub nu_rho_zz: f64,
    /// Recorded only.
    pub lambda_zzz: f64,
    pub spectrum: Vec<f64>,
}

/// Largest relative drift of each monitored quantity over the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct FlowSummary {
    pub trace_f2: f64,
    pub trace_hf: f64,
    pub bz: f64,
    pub b0_squared: f64,
    pub spectrum: f64,
    pub combined: f64,
    /// Largest `|dF/dt|` field-component mismatch against the multiplier formulas.
    pub field_rate_residual: f64,
    /// Largest identity coefficient of `dF/dt` (must stay zero).
    pub closure_residual: f64,
}

impl FlowSummary {
    /// Largest of the conservation drifts.
    pub fn max_drift(&self) -> f64 {
        [
            self.trace_f2,
            self.trace_hf,
            self.bz,
            self.b0_squared,
            self.spectrum,
            self.combined,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowReport {
    pub duration: f64,
    pub n_steps: usize,
    pub samples: Vec<FlowSample>,
    pub drift: FlowSummary,
    #[serde(skip)]
    pub final_state: Costate,
}

struct Monitor {
    trace_f2: f64,
    trace_hf: f64,
    bz: f64,
    b0_squared: f64,
    combined: f64,
}

impl Monitor {
    fn of(c: &Costate) -> Self {
        let [bx, by, bz] = c.extract_control();
        Self {
            trace_f2: c.trace_f2(),
            trace_hf: c.trace_hf(),
            bz,
            b0_squared: bx * bx + by * by,
            combined: c.combined_invariant(),
        }
    }
}

fn rel(x: f64, x0: f64) -> f64 {
    (x - x0).abs() / x0.abs().max(DRIFT_FLOOR)
}

fn sample(c: &Costate, t: f64) -> Result<FlowSample> {
    let m = Monitor::of(c);
    let view = c.multiplier_view();
    Ok(FlowSample {
        t,
        trace_f2: m.trace_f2,
        trace_hf: m.trace_hf,
        bz: m.bz,
        b0_squared: m.b0_squared,
        combined: m.combined,
        nu_rho_zz: view.get("nu_zz") + view.get("rho_zz"),
        lambda_zzz: view.get("lambda_zzz"),
        spectrum: eigenvalues_hermitian(c.matrix())?.to_vec(),
    })
}

fn spectrum_drift(s: &[f64], s0: &[f64]) -> f64 {
    let scale = s0
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(DRIFT_FLOOR);
    s.iter()
        .zip(s0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

fn rk4_step(c: &Costate, dt: f64) -> Costate {
    let f0 = *c.matrix();
    let stage = |f: crate::matrix::Matrix8| c.with_matrix(f).flow_rhs();
    let k1 = stage(f0);
    let k2 = stage(f0 + k1.scale_real(dt / 2.0));
    let k3 = stage(f0 + k2.scale_real(dt / 2.0));
    let k4 = stage(f0 + k3.scale_real(dt));
    let f1 = f0 + (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(dt / 6.0);
    c.with_matrix(f1.hermitian_part())
}

/// Fixed-step classical Runge-Kutta integration of the costate flow, with
/// the field re-extracted from `F` at every stage.
pub fn integrate_flow(c0: &Costate, duration: f64, n_steps: usize) -> Result<FlowReport> {
    if n_steps < MIN_FLOW_STEPS {
        return Err(invalid(
            "n_steps",
            format!("need at least {MIN_FLOW_STEPS}, got {n_steps}"),
        ));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(invalid(
            "duration",
            format!("must be positive, got {duration}"),
        ));
    }
    let dt = duration / n_steps as f64;
    let stride = (n_steps / SAMPLE_TARGET).max(1);

    let first = sample(c0, 0.0)?;
    let m0 = Monitor::of(c0);
    let mut drift = FlowSummary::default();
    let mut samples = vec![first.clone()];
    let mut state = *c0;

    let check_identities = |c: &Costate, drift: &mut FlowSummary| {
        drift.field_rate_residual = drift.field_rate_residual.max(c.field_rate_residual());
        let closure = pauli_coefficient(&c.flow_rhs(), PauliString::IDENTITY).norm();
        drift.closure_residual = drift.closure_residual.max(closure);
    };
    check_identities(&state, &mut drift);

    for step in 1..=n_steps {
        state = rk4_step(&state, dt);
        let m = Monitor::of(&state);
        drift.trace_f2 = drift.trace_f2.max(rel(m.trace_f2, m0.trace_f2));
        drift.trace_hf = drift.trace_hf.max(rel(m.trace_hf, m0.trace_hf));
        drift.bz = drift.bz.max(rel(m.bz, m0.bz));
        drift.b0_squared = drift.b0_squared.max(rel(m.b0_squared, m0.b0_squared));
        drift.combined = drift.combined.max(rel(m.combined, m0.combined));

        if step % stride == 0 || step == n_steps {
            let s = sample(&state, step as f64 * dt)?;
            drift.spectrum = drift
                .spectrum
                .max(spectrum_drift(&s.spectrum, &first.spectrum));
            check_identities(&state, &mut drift);
            samples.push(s);
        }
    }

    Ok(FlowReport {
        duration,
        n_steps,
        samples,
        drift,
        final_state: state,
    })
}

//! Analytic time-optimal propagator for the precessing-field Ising chain.
//!
//! In the frame co-rotating with the field the Hamiltonian is constant and
//! block diagonal over the `(q1, q3)` sectors, so each sector reduces to a
//! qubit-2 rotation with frequency `omega_plus` (sector 00), `omega_zero`
//! (01 and 10) or `omega_minus` (11).

use num_complex::Complex64;
use serde::Serialize;

use crate::matrix::Matrix8;
use crate::model::{conjugate_by_v, frame_hamiltonian, sector_longitudinal, ControlParams};
use crate::pauli::{Pauli, PauliString};

/// Below this `|omega t|` the `sin(omega t)/omega` factor uses its series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorFrequencies {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub omega_zero: f64,
}

impl SectorFrequencies {
    /// Per-sector frequencies in `00, 01, 10, 11` order.
    pub fn by_sector(&self) -> [f64; 4] {
        [
            self.omega_plus,
            self.omega_zero,
            self.omega_zero,
            self.omega_minus,
        ]
    }
}

/// Diagonals of the sine and cosine factors, per `(q1, q3)` sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorTrig {
    pub s: [f64; 4],
    pub c: [f64; 4],
}

pub fn sector_frequencies(p: &ControlParams) -> SectorFrequencies {
    let pj = std::f64::consts::PI * p.j;
    let b02 = p.b0 * p.b0;
    let detuned = |shift: f64| (b02 + 0.25 * (p.omega - 2.0 * (p.bz + shift)).powi(2)).sqrt();
    SectorFrequencies {
        omega_plus: detuned(pj),
        omega_minus: detuned(-pj),
        omega_zero: detuned(0.0),
    }
}

/// `sin(w t) / w`, continuous through `w = 0`.
pub fn sinc_t(w: f64, t: f64) -> f64 {
    let x = w * t;
    if x.abs() < SINC_SERIES_CUTOFF {
        t * (1.0 - x * x / 6.0 + x.powi(4) / 120.0)
    } else {
        (w * t).sin() / w
    }
}

pub fn sector_trig(t: f64, f: &SectorFrequencies) -> SectorTrig {
    let w = f.by_sector();
    SectorTrig {
        s: w.map(|w| sinc_t(w, t)),
        c: w.map(|w| (w * t).cos()),
    }
}

fn z2_rotation(angle: f64) -> Matrix8 {
    // exp(-i angle Z2 / 2) is diagonal; qubit 2 is bit 1 of the index.
    let diag = std::array::from_fn(|i| {
        let z = if i & 2 == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(1.0, -angle * z / 2.0)
    });
    Matrix8::from_diagonal(&diag)
}

/// `exp(-i H_frame t)` assembled from the sector expansion `C - i S H_frame`.
pub fn frame_propagator(t: f64, p: &ControlParams) -> Matrix8 {
    let trig = sector_trig(t, &sector_frequencies(p));
    let h = frame_hamiltonian(p);
    let lift = |v: [f64; 4]| crate::model::lift_sector_diagonal(&v.map(|x| Complex64::new(x, 0.0)));
    lift(trig.c) - lift(trig.s) * h * Complex64::new(0.0, 1.0)
}

/// Time-optimal propagator as the product of the frame rotation, the constant
/// frame evolution, and the inverse initial rotation.
pub fn u_opt(t: f64, p: &ControlParams) -> Matrix8 {
    z2_rotation(p.theta(t)) * frame_propagator(t, p) * z2_rotation(-p.theta0)
}

/// Same propagator written out term by term in the Pauli operators on qubit 2.
///
/// Kept independent of [`u_opt`] so the two evaluations can be compared.
pub fn u_opt_expanded(t: f64, p: &ControlParams) -> Matrix8 {
    let trig = sector_trig(t, &sector_frequencies(p));
    let bd = sector_longitudinal(p);
    let half = p.omega * t / 2.0;
    let (sh, ch) = half.sin_cos();
    let phi = -(p.theta(t) + p.theta0) / 2.0;

    let identity_part: [f64; 4] = std::array::from_fn(|k| ch * trig.c[k] - sh * bd[k] * trig.s[k]);
    let x_part: [f64; 4] = std::array::from_fn(|k| p.b0 * trig.s[k] * phi.cos());
    let y_part: [f64; 4] = std::array::from_fn(|k| -p.b0 * trig.s[k] * phi.sin());
    let z_part: [f64; 4] = std::array::from_fn(|k| sh * trig.c[k] + ch * bd[k] * trig.s[k]);

    let mi = Complex64::new(0.0, -1.0);
    let mut out = Matrix8::zeros();
    for (coef, letter) in [
        (identity_part.map(|x| Complex64::new(x, 0.0)), Pauli::I),
        (x_part.map(|x| mi * x), Pauli::X),
        (y_part.map(|x| mi * x), Pauli::Y),
        (z_part.map(|x| mi * x), Pauli::Z),
    ] {
        let sigma = PauliString::single(2, letter).matrix();
        out += crate::model::lift_sector_diagonal(&coef) * sigma;
    }
    out
}

/// Propagator for the qubit-3-rotated chain, `V u_opt V`.
pub fn u_opt_modified(t: f64, p: &ControlParams) -> Matrix8 {
    conjugate_by_v(&u_opt(t, p))
}

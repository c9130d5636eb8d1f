use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Costate, Variant, FIELD_STRINGS};
use crate::error::{invalid, Result};
use crate::matrix::Matrix8;
use crate::model::{conjugate_by_v, sector_of, ControlParams, SECTOR_SIGN};
use crate::pauli::{pauli_sum, Pauli, PauliString};

/// Central strings: commute with every admissible Hamiltonian.
const CENTRAL: [PauliString; 3] = [
    PauliString::new(Pauli::Z, Pauli::I, Pauli::I),
    PauliString::new(Pauli::I, Pauli::I, Pauli::Z),
    PauliString::new(Pauli::Z, Pauli::I, Pauli::Z),
];

fn is_outside(p: PauliString) -> bool {
    let flips = |q: Pauli| matches!(q, Pauli::X | Pauli::Y);
    flips(p.0[0]) || flips(p.0[2])
}

/// `1 / (8 omega^2)`, the multiplier normalising `Tr(H F) = 1` when the
/// coupling multipliers `nu_zz + rho_zz` vanish.
fn lambda0_for(p: &ControlParams) -> f64 {
    1.0 / (8.0 * p.energy().powi(2))
}

/// Costate whose flow reproduces the precessing field of `p` exactly.
///
/// Block diagonal in the `(q1, q3)` sectors, with sector block
/// `kappa_s (B0 cos theta0, B0 sin theta0, b_s - Omega/2) . sigma_2`. The
/// `kappa_s` fix the field slice, make `nu_zz + rho_zz` vanish (so
/// `Tr(H F) = 1`) and leave one free parameter `split`.
pub fn precessing_costate(p: &ControlParams, split: f64, variant: Variant) -> Result<Costate> {
    p.validate()?;
    if !split.is_finite() {
        return Err(invalid("split", "must be finite"));
    }
    let lambda0 = lambda0_for(p);
    let pj = PI * p.j;
    let a: [f64; 4] = SECTOR_SIGN.map(|d| p.bz + pj * d - p.omega / 2.0);
    let delta = 2.0 * lambda0 * p.omega / pj;
    let k11 = (2.0 * pj * lambda0 - delta * a[0]) / (2.0 * pj);
    let k00 = k11 + delta;
    let mid = (4.0 * lambda0 - k00 - k11) / 2.0;
    let kappa = [k00, mid + split, mid - split, k11];

    let (s, c) = p.theta0.sin_cos();
    let blocks: [[[Complex64; 2]; 2]; 4] = std::array::from_fn(|k| {
        let (fx, fy, fz) = (kappa[k] * p.b0 * c, kappa[k] * p.b0 * s, kappa[k] * a[k]);
        [
            [Complex64::new(fz, 0.0), Complex64::new(fx, -fy)],
            [Complex64::new(fx, fy), Complex64::new(-fz, 0.0)],
        ]
    });
    let f = Matrix8::from_fn(|r, col| {
        if sector_of(r) != sector_of(col) {
            return Complex64::new(0.0, 0.0);
        }
        blocks[sector_of(r)][r >> 1 & 1][col >> 1 & 1]
    });
    let f = match variant {
        Variant::Ising => f,
        Variant::Modified => conjugate_by_v(&f),
    };
    Costate::new(f, lambda0, p.j, variant)
}

fn uniform_coeffs(rng: &mut ChaCha8Rng, strings: &[PauliString], norm: f64) -> Matrix8 {
    let raw: Vec<(PauliString, f64)> = strings
        .iter()
        .map(|&s| (s, rng.gen_range(-1.0..=1.0)))
        .collect();
    let m = pauli_sum(raw);
    let n = m.frobenius_norm();
    if n == 0.0 {
        m
    } else {
        m.scale_real(norm / n)
    }
}

/// Seeded random costate compatible with the precessing form: a random
/// pulse, a random `split`, random central multipliers and random
/// multipliers on the 48 strings with `X` or `Y` on qubit 1 or 3.
///
/// Returns the costate together with the pulse it generates.
pub fn random_costate(seed: u64, j: f64, variant: Variant) -> Result<(Costate, ControlParams)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b0 = rng.gen_range(0.5..=2.0);
    let bz_sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let bz = bz_sign * rng.gen_range(0.5..=2.0);
    let omega = rng.gen_range(-3.0..=3.0);
    let theta0 = rng.gen_range(0.0..TAU);
    let p = ControlParams::new(j, b0, bz, omega, theta0)?;
    let lambda0 = lambda0_for(&p);
    let split = rng.gen_range(-lambda0..=lambda0);
    let base = precessing_costate(&p, split, Variant::Ising)?;

    let central = pauli_sum(CENTRAL.map(|s| (s, lambda0 * rng.gen_range(-1.0..=1.0))));
    let outside: Vec<PauliString> = PauliString::all().filter(|&s| is_outside(s)).collect();
    let h_norm = crate::model::ising_hamiltonian(0.0, &p).frobenius_norm();
    let extra = central + uniform_coeffs(&mut rng, &outside, 0.5 * lambda0 * h_norm);

    let f = *base.matrix() + extra;
    let f = match variant {
        Variant::Ising => f,
        Variant::Modified => conjugate_by_v(&f),
    };
    Ok((Costate::new(f, lambda0, j, variant)?, p))
}

/// Seeded costate with every multiplier drawn i.i.d. from `U[-1, 1]`,
/// rescaled to `|F'| = 0.5 lambda0 |H|` (Frobenius norms).
///
/// Such costates generally do not produce a pulse of the precessing form;
/// only the general invariants of the flow apply.
pub fn random_unconstrained_costate(seed: u64, j: f64, variant: Variant) -> Result<Costate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field: [f64; 3] = [
        rng.gen_range(-2.0..=2.0),
        rng.gen_range(-2.0..=2.0),
        rng.gen_range(-2.0..=2.0),
    ];
    let p = ControlParams::new(
        j,
        field[0].hypot(field[1]),
        field[2],
        0.0,
        field[1].atan2(field[0]),
    )?;
    let lambda0 = lambda0_for(&p);
    let couplings = variant.coupling_strings();
    let slots: Vec<PauliString> = PauliString::all()
        .filter(|s| {
            *s != PauliString::IDENTITY && !FIELD_STRINGS.contains(s) && !couplings.contains(s)
        })
        .collect();
    let h_norm = crate::model::ising_hamiltonian(0.0, &p).frobenius_norm();
    let mut f_prime = uniform_coeffs(&mut rng, &slots, 0.5 * lambda0 * h_norm);
    // the coupling multipliers too, on the same scale
    let per_slot = 0.5 * lambda0 * h_norm / (8.0 * slots.len() as f64).sqrt();
    f_prime += pauli_sum(couplings.map(|s| (s, per_slot * rng.gen_range(-1.0..=1.0))));
    Costate::from_parts(field, &f_prime, lambda0, j, variant)
}

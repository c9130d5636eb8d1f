use num_complex::Complex64;
use proptest::prelude::*;

use qbrach_core::closed_form::{frame_propagator, u_opt, u_opt_expanded, u_opt_modified};
use qbrach_core::matrix::{expm_hermitian, Matrix8};
use qbrach_core::model::{
    conjugate_by_v, energy_of, ising_hamiltonian, modified_hamiltonian, ControlParams,
};
use qbrach_core::pauli::{pauli_decompose, pauli_sum, PauliString};

fn hermitian_from(coeffs: &[f64]) -> Matrix8 {
    pauli_sum(PauliString::all().zip(coeffs.iter().copied()))
}

/// exp(-i A t) by scaling, a 30-term Taylor series and squaring.
fn taylor_expm(a: &Matrix8, t: f64) -> Matrix8 {
    let x = a.scale(Complex64::new(0.0, -t));
    let norm = x.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let y = x.scale_real(0.5f64.powi(squarings as i32));
    let mut term = Matrix8::identity();
    let mut sum = Matrix8::identity();
    for k in 1..30 {
        term = (term * y).scale_real(1.0 / k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn params() -> impl Strategy<Value = ControlParams> {
    (
        0.2..3.0f64,
        0.0..3.0f64,
        -3.0..3.0f64,
        -6.0..6.0f64,
        -3.2..3.2f64,
    )
        .prop_map(|(j, b0, bz, om, th)| ControlParams::new(j, b0, bz, om, th).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_strings_are_orthogonal(a in 0usize..64, b in 0usize..64) {
        let pa = PauliString::from_index(a).matrix();
        let pb = PauliString::from_index(b).matrix();
        let tr = (pa * pb).trace();
        let want = if a == b { 8.0 } else { 0.0 };
        prop_assert!((tr - Complex64::new(want, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn decomposition_round_trips(coeffs in prop::collection::vec(-2.0..2.0f64, 64)) {
        let m = hermitian_from(&coeffs);
        let d = pauli_decompose(&m);
        prop_assert!(d.reconstruct().max_abs_diff(&m) < 1e-13);
        for (p, c) in PauliString::all().zip(&coeffs) {
            prop_assert!((d.real(p) - c).abs() < 1e-13);
        }
    }

    #[test]
    fn expm_matches_taylor(coeffs in prop::collection::vec(-1.0..1.0f64, 64), t in -2.0..2.0f64) {
        let a = hermitian_from(&coeffs);
        let u = expm_hermitian(&a, t).unwrap();
        prop_assert!(u.max_abs_diff(&taylor_expm(&a, t)) < 1e-10);
        prop_assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn expm_semigroup(coeffs in prop::collection::vec(-1.0..1.0f64, 64), s in -1.5..1.5f64, t in -1.5..1.5f64) {
        let a = hermitian_from(&coeffs);
        let lhs = expm_hermitian(&a, s).unwrap() * expm_hermitian(&a, t).unwrap();
        prop_assert!(lhs.max_abs_diff(&expm_hermitian(&a, s + t).unwrap()) < 1e-11);
    }

    #[test]
    fn hamiltonian_energy_identity(p in params(), t in -5.0..5.0f64) {
        let want = p.energy();
        prop_assert!((energy_of(&ising_hamiltonian(t, &p)) - want).abs() < 1e-12);
        prop_assert!((energy_of(&modified_hamiltonian(t, &p)) - want).abs() < 1e-12);
        let h = ising_hamiltonian(t, &p);
        prop_assert!(h.is_hermitian(1e-15));
        prop_assert!(h.trace().norm() < 1e-14);
    }

    #[test]
    fn rotated_chain_is_conjugate(p in params(), t in -5.0..5.0f64) {
        let direct = modified_hamiltonian(t, &p);
        let rotated = conjugate_by_v(&ising_hamiltonian(t, &p));
        prop_assert!(direct.max_abs_diff(&rotated) < 1e-14);
    }

    #[test]
    fn closed_forms_agree(p in params(), t in 0.0..4.0f64) {
        let a = u_opt(t, &p);
        prop_assert!(a.is_unitary(1e-11));
        prop_assert!(a.max_abs_diff(&u_opt_expanded(t, &p)) < 1e-11);
        let b = u_opt_modified(t, &p);
        prop_assert!(b.max_abs_diff(&conjugate_by_v(&a)) < 1e-13);
    }

    #[test]
    fn frame_propagator_is_a_group(p in params(), s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let lhs = frame_propagator(s, &p) * frame_propagator(t, &p);
        prop_assert!(lhs.max_abs_diff(&frame_propagator(s + t, &p)) < 1e-11);
    }

    #[test]
    fn closed_form_solves_the_schrodinger_equation(p in params(), t in 0.1..3.0f64) {
        // central difference of U against -i H U
        let h = 1e-5;
        let du = (u_opt(t + h, &p) - u_opt(t - h, &p)).scale_real(0.5 / h);
        let rhs = (ising_hamiltonian(t, &p) * u_opt(t, &p)).scale(Complex64::new(0.0, -1.0));
        prop_assert!(du.max_abs_diff(&rhs) < 1e-6 * (1.0 + p.energy().powi(3)));
    }
}

use std::f64::consts::PI;

use qbrach_core::closed_form::u_opt;
use qbrach_core::matrix::Matrix8;
use qbrach_core::metrics::{boundary_residuals, fidelity};
use qbrach_core::model::{ising_hamiltonian, target_gate, ControlParams, SynthesisTarget};
use qbrach_core::propagate::{convergence_report, propagate, Scheme};
use qbrach_core::quantizer::{physical_params, search};
use qbrach_core::synthesis::{
    synthesize, synthesize_triple, target_hamiltonian, target_propagator,
};

#[test]
fn every_small_feasible_triple_synthesizes() {
    for g in SynthesisTarget::ALL {
        let triples: Vec<_> = search(g, 10)
            .into_iter()
            .filter(|t| t.shape().f_minus <= 11)
            .collect();
        assert!(!triples.is_empty());
        for t in triples {
            let r = synthesize_triple(g, t, 1.0, 0.0).unwrap();
            assert!(r.fidelity > 1.0 - 1e-10, "{g} {t:?}: {}", r.fidelity);
            assert!(r.phase_on_grid(), "{g} {t:?}: {:?}", r.global_phase);
        }
    }
}

#[test]
fn fidelity_is_independent_of_initial_phase() {
    for theta0 in [0.0, 0.4, -1.3, 2.9] {
        for g in SynthesisTarget::ALL {
            let r = synthesize(g, 1.0, None, theta0, 10).unwrap();
            assert!(r.fidelity > 1.0 - 1e-12, "{g} theta0={theta0}");
        }
    }
}

#[test]
fn coupling_rescales_time_only() {
    let a = synthesize(SynthesisTarget::U13S, 1.0, None, 0.0, 10).unwrap();
    let b = synthesize(SynthesisTarget::U13S, 2.5, None, 0.0, 10).unwrap();
    assert!((a.duration / b.duration - 2.5).abs() < 1e-12);
    assert!((b.params.b0 / a.params.b0 - 2.5).abs() < 1e-12);
    assert!((a.fidelity - b.fidelity).abs() < 1e-12);
}

#[test]
fn boundary_residuals_track_fidelity() {
    let g = SynthesisTarget::U13S;
    let t = search(g, 10)[0];
    let sol = physical_params(&t, g, 1.0).unwrap();
    let at_gate = boundary_residuals(&sol.params, sol.duration, g);
    assert!(at_gate.max_abs() < 1e-12, "{at_gate:?}");
    let f = fidelity(&u_opt(sol.duration, &sol.params), &target_gate(g)).unwrap();
    assert!(f > 1.0 - 1e-12);

    // off the gate time both detectors fire
    for frac in [0.9, 0.97, 1.05] {
        let t_off = frac * sol.duration;
        let r = boundary_residuals(&sol.params, t_off, g);
        let f = fidelity(&u_opt(t_off, &sol.params), &target_gate(g)).unwrap();
        assert!(
            r.max_abs() > 1e-3 && f < 1.0 - 1e-4,
            "frac {frac}: {} {f}",
            r.max_abs()
        );
    }

    // a perturbed pulse also fails both
    let mut p = sol.params;
    p.bz += 0.05;
    let r = boundary_residuals(&p, sol.duration, g);
    let f = fidelity(&u_opt(sol.duration, &p), &target_gate(g)).unwrap();
    assert!(r.max_abs() > 1e-3 && f < 1.0 - 1e-5);
}

#[test]
fn numerical_propagation_converges_to_the_closed_form() {
    for g in SynthesisTarget::ALL {
        let r = synthesize(g, 1.0, None, 0.3, 10).unwrap();
        let p = r.params;
        // away from the gate time the field has not closed a full turn, so the
        // left-point scheme shows its first-order error
        let t_end = 0.8 * r.duration;
        let oracle = target_propagator(g, t_end, &p);
        let steps = [256, 512, 1024, 2048];
        let h = |t| target_hamiltonian(g, t, &p);
        let mid = convergence_report(h, t_end, &oracle, &steps, Scheme::Midpoint).unwrap();
        let order = mid.fitted_order.unwrap();
        assert!((order - 2.0).abs() < 0.1, "{g} midpoint order {order}");
        let left = convergence_report(h, t_end, &oracle, &steps, Scheme::LeftPoint).unwrap();
        let order = left.fitted_order.unwrap();
        assert!((order - 1.0).abs() < 0.1, "{g} left-point order {order}");
    }
}

#[test]
fn left_point_is_superconvergent_at_the_gate_time() {
    // H(T) = H(0) cancels the first-order term
    let g = SynthesisTarget::U13S;
    let r = synthesize(g, 1.0, None, 0.3, 10).unwrap();
    let p = r.params;
    let oracle = target_propagator(g, r.duration, &p);
    let rep = convergence_report(
        |t| target_hamiltonian(g, t, &p),
        r.duration,
        &oracle,
        &[256, 512, 1024],
        Scheme::LeftPoint,
    )
    .unwrap();
    assert!(rep.fitted_order.unwrap() > 1.8);
}

#[test]
fn reversed_negated_pulse_gives_the_inverse() {
    let r = synthesize(SynthesisTarget::U13S, 1.0, None, 0.7, 10).unwrap();
    let p = r.params;
    let duration = r.duration;
    let forward = propagate(
        |t| ising_hamiltonian(t, &p),
        duration,
        2048,
        Scheme::Midpoint,
    )
    .unwrap();
    let backward = propagate(
        |t| -ising_hamiltonian(duration - t, &p),
        duration,
        2048,
        Scheme::Midpoint,
    )
    .unwrap();
    assert!((backward * forward).max_abs_diff(&Matrix8::identity()) < 1e-12);
    let closed = u_opt(duration, &p);
    assert!((backward * closed).max_abs_diff(&Matrix8::identity()) < 1e-5);
}

#[test]
fn gate_time_matches_quantized_formula() {
    let r = synthesize(SynthesisTarget::CnotPm13, 1.0, None, 0.0, 10).unwrap();
    let p: ControlParams = r.params;
    assert!((p.omega * r.duration - 2.0 * PI * r.triple.m as f64).abs() < 1e-12);
}

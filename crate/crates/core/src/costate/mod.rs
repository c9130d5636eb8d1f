//! The costate operator `F = lambda0 H + F'` and its brachistochrone flow
//! `dF/dt = -i [H(F), F]`.
//!
//! `F'` collects the Lagrange multipliers that pin the form of the
//! Hamiltonian. It spans every non-identity Pauli string except the three
//! `sigma_i` on qubit 2, so the field is read straight off `F`:
//! `B_i = c_{I sigma_i I}(F) / lambda0`.

mod flow;
mod sampling;

pub use flow::{integrate_flow, FlowReport, FlowSample, FlowSummary};
pub use sampling::{precessing_costate, random_costate, random_unconstrained_costate};

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::{Matrix8, HERMITIAN_TOL};
use crate::pauli::{pauli_coefficient, pauli_decompose, Pauli, PauliString};

/// Which coupling the Hamiltonian carries between qubits 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `Z2 Z3`.
    Ising,
    /// `Z2 X3`, the Walsh-Hadamard rotated chain.
    Modified,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Ising => "ising",
            Variant::Modified => "modified",
        }
    }

    /// The two fixed coupling strings.
    pub fn coupling_strings(self) -> [PauliString; 2] {
        let zz3 = match self {
            Variant::Ising => Pauli::Z,
            Variant::Modified => Pauli::X,
        };
        [
            PauliString::new(Pauli::Z, Pauli::Z, Pauli::I),
            PauliString::new(Pauli::I, Pauli::Z, zz3),
        ]
    }

    /// Qubit-3 letter as it appears in multiplier names.
    fn qubit3_label(self, p: Pauli) -> Pauli {
        match (self, p) {
            (Variant::Modified, Pauli::X) => Pauli::Z,
            (Variant::Modified, Pauli::Z) => Pauli::X,
            _ => p,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ising" => Ok(Variant::Ising),
            "modified" => Ok(Variant::Modified),
            other => Err(invalid("variant", format!("unknown variant {other:?}"))),
        }
    }
}

const FIELD_STRINGS: [PauliString; 3] = [
    PauliString::new(Pauli::I, Pauli::X, Pauli::I),
    PauliString::new(Pauli::I, Pauli::Y, Pauli::I),
    PauliString::new(Pauli::I, Pauli::Z, Pauli::I),
];

/// Trace tolerance for a valid costate.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Costate {
    f: Matrix8,
    lambda0: f64,
    j: f64,
    variant: Variant,
}

impl Costate {
    pub fn new(f: Matrix8, lambda0: f64, j: f64, variant: Variant) -> Result<Self> {
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(invalid(
                "lambda0",
                format!("must be positive, got {lambda0}"),
            ));
        }
        if !(j.is_finite() && j > 0.0) {
            return Err(invalid("J", format!("coupling must be positive, got {j}")));
        }
        f.ensure_hermitian(HERMITIAN_TOL)?;
        let tr = f.trace().norm();
        if tr >= TRACE_TOL {
            return Err(invalid("F", format!("must be traceless, |Tr F| = {tr:e}")));
        }
        Ok(Self {
            f: f.hermitian_part(),
            lambda0,
            j,
            variant,
        })
    }

    /// `lambda0 H` for the given field plus multiplier operator `f_prime`.
    ///
    /// `f_prime` must have no identity or `sigma_i` (qubit 2) component.
    pub fn from_parts(
        field: [f64; 3],
        f_prime: &Matrix8,
        lambda0: f64,
        j: f64,
        variant: Variant,
    ) -> Result<Self> {
        let leak = FIELD_STRINGS
            .iter()
            .chain(std::iter::once(&PauliString::IDENTITY))
            .map(|&p| pauli_coefficient(f_prime, p).norm())
            .fold(0.0, f64::max);
        if leak > 1e-12 {
            return Err(invalid(
                "F'",
                format!("multiplier operator has a field or identity component ({leak:e})"),
            ));
        }
        let h = hamiltonian_for(field, j, variant);
        Self::new(h.scale_real(lambda0) + *f_prime, lambda0, j, variant)
    }

    pub fn matrix(&self) -> &Matrix8 {
        &self.f
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Same multipliers and constants with a different operator.
    pub(crate) fn with_matrix(&self, f: Matrix8) -> Self {
        Self { f, ..*self }
    }

    /// Add multiplier terms; rejects anything touching the field slice.
    pub fn with_added_multipliers(&self, extra: &Matrix8) -> Result<Self> {
        let leak = FIELD_STRINGS
            .iter()
            .chain(std::iter::once(&PauliString::IDENTITY))
            .map(|&p| pauli_coefficient(extra, p).norm())
            .fold(0.0, f64::max);
        if leak > 1e-12 {
            return Err(invalid("extra", "field or identity component present"));
        }
        Self::new(self.f + *extra, self.lambda0, self.j, self.variant)
    }

    /// Field `(Bx, By, Bz)` encoded in the costate.
    pub fn extract_control(&self) -> [f64; 3] {
        FIELD_STRINGS.map(|p| pauli_coefficient(&self.f, p).re / self.lambda0)
    }

    /// Hamiltonian consistent with this costate.
    pub fn hamiltonian(&self) -> Matrix8 {
        hamiltonian_for(self.extract_control(), self.j, self.variant)
    }

    /// `F' = F - lambda0 H`.
    pub fn multiplier_operator(&self) -> Matrix8 {
        self.f - self.hamiltonian().scale_real(self.lambda0)
    }

    /// `dF/dt = -i [H(F), F]`.
    pub fn flow_rhs(&self) -> Matrix8 {
        self.hamiltonian()
            .commutator(&self.f)
            .scale(Complex64::new(0.0, -1.0))
    }

    pub fn multiplier_view(&self) -> MultiplierMap {
        MultiplierMap::from_operator(&self.multiplier_operator(), self.variant)
    }

    /// `Tr(F^2)`.
    pub fn trace_f2(&self) -> f64 {
        (self.f * self.f).trace().re
    }

    /// `Tr(H F)`.
    pub fn trace_hf(&self) -> f64 {
        (self.hamiltonian() * self.f).trace().re
    }

    /// `nu_zz + rho_zz + lambda0 (Bx^2 + By^2) / (pi J)`, conserved by the flow.
    pub fn combined_invariant(&self) -> f64 {
        let [bx, by, _] = self.extract_control();
        let view = self.multiplier_view();
        view.get("nu_zz") + view.get("rho_zz") + self.lambda0 * (bx * bx + by * by) / (PI * self.j)
    }

    /// Largest mismatch between the qubit-2 field components of `dF/dt` and
    /// their multiplier expressions:
    /// `x: -pi J (nu_zy + rho_yz)`, `y: pi J (nu_zx + rho_xz)`, `z: 0`.
    pub fn field_rate_residual(&self) -> f64 {
        let rate = self.flow_rhs();
        let view = self.multiplier_view();
        let pj = PI * self.j;
        let expected = [
            -pj * (view.get("nu_zy") + view.get("rho_yz")),
            pj * (view.get("nu_zx") + view.get("rho_xz")),
            0.0,
        ];
        FIELD_STRINGS
            .iter()
            .zip(expected)
            .map(|(&p, e)| (pauli_coefficient(&rate, p) - Complex64::new(e, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

fn hamiltonian_for(field: [f64; 3], j: f64, variant: Variant) -> Matrix8 {
    let [c1, c2] = variant.coupling_strings();
    let k = FRAC_PI_2 * j;
    crate::pauli::pauli_sum(
        [(c1, k), (c2, k)]
            .into_iter()
            .chain(FIELD_STRINGS.into_iter().zip(field)),
    )
}

/// Named multipliers of `F'`.
///
/// Families by support: `lambda_abc` (qubits 1,2,3), `mu_ac` (1,3), `nu_ab`
/// (1,2), `rho_bc` (2,3), `eta_a` (1), `xi_c` (3). For the rotated chain the
/// qubit-3 letters `x` and `z` trade places, so `rho_zz` is always the
/// multiplier on the fixed 2-3 coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierMap {
    values: BTreeMap<String, f64>,
}

impl MultiplierMap {
    fn from_operator(f_prime: &Matrix8, variant: Variant) -> Self {
        let d = pauli_decompose(f_prime);
        let values = PauliString::all()
            .filter(|p| *p != PauliString::IDENTITY && !FIELD_STRINGS.contains(p))
            .map(|p| (multiplier_name(p, variant), d.real(p)))
            .collect();
        Self { values }
    }

    /// Value by name, e.g. `"nu_zy"`. Unknown names panic.
    pub fn get(&self, name: &str) -> f64 {
        *self
            .values
            .get(name)
            .unwrap_or_else(|| panic!("no multiplier named {name:?}"))
    }

    pub fn try_get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

fn multiplier_name(p: PauliString, variant: Variant) -> String {
    let lower = |q: Pauli| q.letter().to_ascii_lowercase();
    let [a, b, c] = p.0;
    let c = variant.qubit3_label(c);
    let letters: String = [a, b, c]
        .into_iter()
        .filter(|&q| q != Pauli::I)
        .map(lower)
        .collect();
    let family = match (a != Pauli::I, b != Pauli::I, c != Pauli::I) {
        (true, true, true) => "lambda",
        (true, false, true) => "mu",
        (true, true, false) => "nu",
        (false, true, true) => "rho",
        (true, false, false) => "eta",
        (false, false, true) => "xi",
        _ => unreachable!("field strings and identity are excluded"),
    };
    format!("{family}_{letters}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ising_hamiltonian, ControlParams};
    use crate::pauli::pauli_sum;

    fn params() -> ControlParams {
        ControlParams::new(1.0, 1.2, 0.7, 2.0, 0.4).unwrap()
    }

    #[test]
    fn pure_hamiltonian_costate() {
        let p = params();
        let lambda0 = 0.05;
        let h = ising_hamiltonian(0.0, &p);
        let c = Costate::new(h.scale_real(lambda0), lambda0, p.j, Variant::Ising).unwrap();
        let b = c.extract_control();
        let want = p.field(0.0);
        for k in 0..3 {
            assert!((b[k] - want[k]).abs() < 1e-14);
        }
        assert!(c.flow_rhs().max_abs() < 1e-15);
        let view = c.multiplier_view();
        assert_eq!(view.len(), 60);
        assert!(view.iter().all(|(_, v)| v.abs() < 1e-15));
    }

    #[test]
    fn extra_multipliers_leave_field_alone() {
        let p = params();
        let extra = pauli_sum([
            ("XIY".parse().unwrap(), 0.3),
            ("ZII".parse().unwrap(), -0.2),
            ("IIX".parse().unwrap(), 0.5),
        ]);
        let c = Costate::from_parts(p.field(0.0), &extra, 0.05, p.j, Variant::Ising).unwrap();
        let b = c.extract_control();
        let want = p.field(0.0);
        for k in 0..3 {
            assert!((b[k] - want[k]).abs() < 1e-14);
        }
        let view = c.multiplier_view();
        assert!((view.get("mu_xy") - 0.3).abs() < 1e-15);
        assert!((view.get("eta_z") + 0.2).abs() < 1e-15);
        assert!((view.get("xi_x") - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_lambda_slot() {
        let extra = pauli_sum([("ZXZ".parse().unwrap(), 2.0)]);
        let c = Costate::from_parts([0.1, 0.2, 0.3], &extra, 0.05, 1.0, Variant::Ising).unwrap();
        let view = c.multiplier_view();
        for (name, v) in view.iter() {
            let want = if name == "lambda_zxz" { 2.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-14, "{name} = {v}");
        }
    }

    #[test]
    fn rotated_names_swap_qubit3_letters() {
        let extra = pauli_sum([
            ("IYX".parse().unwrap(), 1.5),
            ("ZYX".parse().unwrap(), -0.5),
        ]);
        let c = Costate::from_parts([0.1, 0.2, 0.3], &extra, 0.05, 1.0, Variant::Modified).unwrap();
        let view = c.multiplier_view();
        assert!((view.get("rho_yz") - 1.5).abs() < 1e-15);
        assert!((view.get("lambda_zyz") + 0.5).abs() < 1e-15);
        assert!(view.get("rho_yx").abs() < 1e-15);
        // the fixed 2-3 coupling is attributed to the Hamiltonian slice
        assert!(view.get("rho_zz").abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        let h = ising_hamiltonian(0.0, &params());
        assert!(Costate::new(h, 0.0, 1.0, Variant::Ising).is_err());
        assert!(Costate::new(h, -1.0, 1.0, Variant::Ising).is_err());
        assert!(Costate::new(h + Matrix8::identity(), 0.1, 1.0, Variant::Ising).is_err());
        let leaky = pauli_sum([("IXI".parse().unwrap(), 1.0)]);
        assert!(Costate::from_parts([0.0; 3], &leaky, 0.1, 1.0, Variant::Ising).is_err());
    }

    #[test]
    fn variant_parse() {
        assert_eq!("ising".parse::<Variant>().unwrap(), Variant::Ising);
        assert_eq!("Modified".parse::<Variant>().unwrap(), Variant::Modified);
        assert!("heisenberg".parse::<Variant>().is_err());
    }
}

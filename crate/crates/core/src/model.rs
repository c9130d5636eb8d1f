//! Hamiltonians of the three-qubit chain, the Walsh-Hadamard frame change on
//! qubit 3, and the entangling targets between the end qubits.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::{expm_hermitian, Matrix8, DIM};
use crate::pauli::{pauli_sum, Pauli, PauliString};

const ZZI: PauliString = PauliString::new(Pauli::Z, Pauli::Z, Pauli::I);
const IZZ: PauliString = PauliString::new(Pauli::I, Pauli::Z, Pauli::Z);
const IZX: PauliString = PauliString::new(Pauli::I, Pauli::Z, Pauli::X);
const IXI: PauliString = PauliString::new(Pauli::I, Pauli::X, Pauli::I);
const IYI: PauliString = PauliString::new(Pauli::I, Pauli::Y, Pauli::I);
const IZI: PauliString = PauliString::new(Pauli::I, Pauli::Z, Pauli::I);

/// Pulse parameters: coupling `j`, transverse amplitude `b0`, longitudinal
/// field `bz`, precession frequency `omega` and initial phase `theta0`.
///
/// All rates are in the same inverse-time unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlParams {
    pub j: f64,
    pub b0: f64,
    pub bz: f64,
    pub omega: f64,
    pub theta0: f64,
}

impl ControlParams {
    pub fn new(j: f64, b0: f64, bz: f64, omega: f64, theta0: f64) -> Result<Self> {
        let p = Self {
            j,
            b0,
            bz,
            omega,
            theta0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.j, self.b0, self.bz, self.omega, self.theta0];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("params", "all parameters must be finite"));
        }
        if self.j <= 0.0 {
            return Err(invalid(
                "J",
                format!("coupling must be positive, got {}", self.j),
            ));
        }
        if self.b0 < 0.0 {
            return Err(invalid(
                "B0",
                format!("amplitude must be >= 0, got {}", self.b0),
            ));
        }
        Ok(())
    }

    pub fn with_theta0(self, theta0: f64) -> Self {
        Self { theta0, ..self }
    }

    /// Field phase `Omega t + theta0`.
    pub fn theta(&self, t: f64) -> f64 {
        self.omega * t + self.theta0
    }

    /// Field vector `(B0 cos theta, B0 sin theta, Bz)` at time `t`.
    pub fn field(&self, t: f64) -> [f64; 3] {
        let th = self.theta(t);
        [self.b0 * th.cos(), self.b0 * th.sin(), self.bz]
    }

    /// `sqrt(B0^2 + Bz^2)`.
    pub fn field_magnitude(&self) -> f64 {
        self.b0.hypot(self.bz)
    }

    /// Energy parameter `omega` implied by the Hamiltonian norm.
    pub fn energy(&self) -> f64 {
        ((PI * self.j).powi(2) / 2.0 + self.b0 * self.b0 + self.bz * self.bz).sqrt()
    }
}

/// Gates synthesized between qubits 1 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthesisTarget {
    /// Symmetric entangler `exp(-i pi/4 (Z1 Z3 + Z1 + Z3))`.
    U13S,
    /// CNOT with control 1 and target 3, reached with the rotated Hamiltonian.
    Cnot13,
    /// Controlled-Z between 1 and 3 (the CNOT in the `|+>, |->` basis of qubit 3),
    /// reached with the plain Ising Hamiltonian.
    CnotPm13,
}

impl SynthesisTarget {
    pub const ALL: [SynthesisTarget; 3] = [Self::U13S, Self::Cnot13, Self::CnotPm13];

    pub fn name(self) -> &'static str {
        match self {
            Self::U13S => "u13s",
            Self::Cnot13 => "cnot13",
            Self::CnotPm13 => "cnotpm13",
        }
    }

    /// Whether the gate is driven by the qubit-3-rotated Hamiltonian.
    pub fn uses_rotated_hamiltonian(self) -> bool {
        matches!(self, Self::Cnot13)
    }

    /// Real diagonal over the `(q1, q3)` sectors `00, 01, 10, 11` that the
    /// rotating-frame propagator must match up to a global phase.
    pub fn sector_diagonal(self) -> [f64; 4] {
        match self {
            Self::U13S => [-1.0, 1.0, 1.0, 1.0],
            Self::Cnot13 | Self::CnotPm13 => [1.0, 1.0, 1.0, -1.0],
        }
    }

    /// Offset `c` of the admissible global phases `(k + c) pi`.
    pub fn phase_grid_offset(self) -> f64 {
        match self {
            Self::U13S => -0.25,
            Self::Cnot13 | Self::CnotPm13 => 0.0,
        }
    }
}

impl fmt::Display for SynthesisTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthesisTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u13s" => Ok(Self::U13S),
            "cnot13" => Ok(Self::Cnot13),
            "cnotpm13" | "cnot+-13" | "cz13" => Ok(Self::CnotPm13),
            other => Err(invalid("target", format!("unknown target {other:?}"))),
        }
    }
}

/// Fixed energy parameter `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBudget {
    pub omega: f64,
}

impl EnergyBudget {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be positive, got {omega}")));
        }
        Ok(Self { omega })
    }

    /// `B^2 = omega^2 - (pi J)^2 / 2`, rejecting budgets too small for the coupling.
    pub fn field_squared(&self, j: f64) -> Result<f64> {
        let b2 = self.omega * self.omega - (PI * j).powi(2) / 2.0;
        if b2 < 0.0 {
            return Err(invalid(
                "omega",
                format!(
                    "omega^2 = {} is below (pi J)^2 / 2",
                    self.omega * self.omega
                ),
            ));
        }
        Ok(b2)
    }
}

fn field_terms(p: &ControlParams, t: f64) -> [(PauliString, f64); 3] {
    let [bx, by, bz] = p.field(t);
    [(IXI, bx), (IYI, by), (IZI, bz)]
}

/// Ising chain with a precessing field on qubit 2:
/// `(pi/2) J (Z1 Z2 + Z2 Z3) + Bx(t) X2 + By(t) Y2 + Bz Z2`.
pub fn ising_hamiltonian(t: f64, p: &ControlParams) -> Matrix8 {
    let k = FRAC_PI_2 * p.j;
    pauli_sum([(ZZI, k), (IZZ, k)].into_iter().chain(field_terms(p, t)))
}

/// Chain whose 2-3 coupling is rotated to `Z2 X3`.
pub fn modified_hamiltonian(t: f64, p: &ControlParams) -> Matrix8 {
    let k = FRAC_PI_2 * p.j;
    pauli_sum([(ZZI, k), (IZX, k)].into_iter().chain(field_terms(p, t)))
}

/// `V = 1 (x) 1 (x) W` with `W` the Walsh-Hadamard gate.
pub fn walsh_v() -> Matrix8 {
    let s = FRAC_1_SQRT_2;
    Matrix8::from_fn(|r, c| {
        if r >> 1 != c >> 1 {
            return Complex64::new(0.0, 0.0);
        }
        let sign = if r & 1 == 1 && c & 1 == 1 { -1.0 } else { 1.0 };
        Complex64::new(sign * s, 0.0)
    })
}

/// Conjugation `V m V` (V is its own inverse).
pub fn conjugate_by_v(m: &Matrix8) -> Matrix8 {
    let v = walsh_v();
    v * *m * v
}

pub fn target_gate(g: SynthesisTarget) -> Matrix8 {
    let generator = match g {
        SynthesisTarget::U13S => pauli_sum([
            ("ZIZ".parse().unwrap(), FRAC_PI_4),
            ("ZII".parse().unwrap(), FRAC_PI_4),
            ("IIZ".parse().unwrap(), FRAC_PI_4),
        ]),
        SynthesisTarget::Cnot13 | SynthesisTarget::CnotPm13 => pauli_sum([
            (PauliString::IDENTITY, FRAC_PI_4),
            ("ZIX".parse().unwrap(), FRAC_PI_4),
            ("ZII".parse().unwrap(), -FRAC_PI_4),
            ("IIX".parse().unwrap(), -FRAC_PI_4),
        ]),
    };
    let u = expm_hermitian(&generator, 1.0).expect("Pauli sums with real weights are Hermitian");
    match g {
        SynthesisTarget::CnotPm13 => conjugate_by_v(&u),
        _ => u,
    }
}

/// `(q1, q3)` sector of a basis index, ordered `00, 01, 10, 11`.
pub fn sector_of(basis_index: usize) -> usize {
    2 * (basis_index >> 2 & 1) + (basis_index & 1)
}

/// Lift a per-sector diagonal on qubits 1 and 3 to an 8x8 diagonal (identity on qubit 2).
pub fn lift_sector_diagonal(values: &[Complex64; 4]) -> Matrix8 {
    let diag: [Complex64; DIM] = std::array::from_fn(|i| values[sector_of(i)]);
    Matrix8::from_diagonal(&diag)
}

/// Per-sector value of `(Z1 + Z3) / 2`: `+1, 0, 0, -1`.
pub const SECTOR_SIGN: [f64; 4] = [1.0, 0.0, 0.0, -1.0];

/// Longitudinal frame field per sector: `-(Omega - 2 Bz)/2 + pi J d`.
pub fn sector_longitudinal(p: &ControlParams) -> [f64; 4] {
    SECTOR_SIGN.map(|d| -(p.omega - 2.0 * p.bz) / 2.0 + PI * p.j * d)
}

/// Time-independent Hamiltonian in the frame co-rotating with the field:
/// `B0 X2 + [-(Omega - 2 Bz)/2 + (pi J / 2)(Z1 + Z3)] Z2`.
pub fn frame_hamiltonian(p: &ControlParams) -> Matrix8 {
    let k = FRAC_PI_2 * p.j;
    pauli_sum([(IXI, p.b0), (IZI, p.bz - p.omega / 2.0), (ZZI, k), (IZZ, k)])
}

/// `sqrt(Tr(H^2) / 8)`.
pub fn energy_of(h: &Matrix8) -> f64 {
    ((*h * *h).trace().re / DIM as f64).max(0.0).sqrt()
}

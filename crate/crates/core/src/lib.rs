//! Time-optimal synthesis of entangling gates between the end qubits of a
//! three-qubit Ising chain driven by a precessing field on the middle qubit.
//!
//! Basis index `4 q1 + 2 q2 + q3`, with `Z |0> = |0>`.

pub mod closed_form;
pub mod costate;
pub mod error;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod pauli;
pub mod propagate;
pub mod quantizer;
pub mod synthesis;

pub use closed_form::{u_opt, u_opt_expanded, u_opt_modified};
pub use costate::{Costate, MultiplierMap, Variant};
pub use error::{Error, Result};
pub use matrix::{Matrix8, DIM};
pub use metrics::{fidelity, gate_match, global_phase, GateMatch};
pub use model::{ControlParams, SynthesisTarget};
pub use pauli::{Pauli, PauliString};
pub use propagate::Scheme;
pub use quantizer::{Triple, DEFAULT_N_MAX};
pub use synthesis::{synthesize, SynthesisResult};

//! Exact analysis of Dicke-state transformations under limited access.
//!
//! An `N`-qubit Dicke state is split into an accessible block A of `k`
//! qubits and an untouched block B. This crate decides whether the state can
//! be turned into another Dicke state by acting on A alone, computes the best
//! success probability as an exact rational, synthesizes the filters that
//! achieve it (including gates that work for every `N`), and checks all of it
//! against a brute-force dense state-vector simulation.

pub mod dicke;
pub mod error;
pub mod feasibility;
pub mod gate;
pub mod optimal;
pub mod oracle;
pub mod rational;
pub mod schmidt;
pub mod state;
pub mod sweep;
pub mod universal;

pub use dicke::{binomial, dicke_vector, dicke_vector_within, symmetric_component, DickeSpec};
pub use error::{Error, Result};
pub use feasibility::{
    feasible, necessary_conditions, support_inclusion, validate_task, validate_task_with, Guard, FeasibilityDecision, RawTask, Reason,
    Rejection, RejectionKind, TransformTask,
};
pub use gate::{embed_full, GateOperator};
pub use optimal::{pmax, synthesize, synthesize_deletion_measurement, synthesize_optimal_gate, PmaxResult};
pub use oracle::{
    apply_on_subsystem, fidelity, numeric_schmidt, verify_gate, verify_task, verify_universal, Tolerances,
    VerificationReport,
};
pub use rational::ExactRational;
pub use schmidt::{j_range, schmidt_spectrum, SchmidtSpectrum};
pub use state::{weight_of_bitstring, DenseLimit, StateVector};
pub use universal::{
    optimality_gap, spin_flip_conjugate, universal_gate, universal_success_probability, UniversalGateSpec,
};

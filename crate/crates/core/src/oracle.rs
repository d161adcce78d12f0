//! Brute-force dense-vector checks.
//!
//! Everything here works on full `2^N` amplitude vectors and explicit
//! matrices: partial traces, symmetric eigendecompositions and direct
//! operator application. Only state construction and gate expansion are
//! shared with the exact modules; measured quantities are then compared with
//! the exact predictions.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::dicke::{dicke_vector_within, DickeSpec};
use crate::error::{Error, Result};
use crate::feasibility::{feasible, TransformTask};
use crate::gate::{embed_full, GateOperator};
use crate::optimal::{pmax, synthesize};
use crate::rational::ExactRational;
use crate::schmidt::schmidt_spectrum;
use crate::state::{DenseLimit, StateVector};
use crate::universal::{optimality_gap, universal_gate, UniversalGateSpec};

/// Eigenvalues below this are treated as zero.
pub const EIGEN_ZERO: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub fidelity: f64,
    pub probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fidelity: 1e-10,
            probability: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            fidelity: tol,
            probability: tol,
        }
    }
}

/// Applies `op` (a `2^{k_out} × 2^{k_in}` matrix) to the lowest `k_in` qubits.
///
/// The result is left unnormalized; its squared norm is the success
/// probability of the filter branch.
pub fn apply_on_subsystem(state: &StateVector, op: &DMatrix<f64>, k_in: usize, limit: &DenseLimit) -> Result<StateVector> {
    let n = state.qubit_count();
    if k_in > n {
        return Err(Error::Shape(format!("operator on {k_in} qubits, state has {n}")));
    }
    if op.ncols() != 1 << k_in || !op.nrows().is_power_of_two() {
        return Err(Error::Shape(format!(
            "operator is {}x{}, expected 2^k_out x {}",
            op.nrows(),
            op.ncols(),
            1usize << k_in
        )));
    }
    let k_out = op.nrows().trailing_zeros() as usize;
    let b_qubits = n - k_in;
    let out_qubits = b_qubits + k_out;
    limit.check_vector(out_qubits)?;
    let amps = state.amplitudes();
    let mut out = vec![0.0; 1 << out_qubits];
    for b in 0..1usize << b_qubits {
        let src = &amps[b << k_in..(b + 1) << k_in];
        let dst = &mut out[b << k_out..(b + 1) << k_out];
        for (a, &x) in src.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (row, y) in op.column(a).iter().enumerate() {
                dst[row] += y * x;
            }
        }
    }
    StateVector::new(out_qubits, out)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.qubit_count() != b.qubit_count() {
        return Err(Error::Shape(format!(
            "fidelity between {} and {} qubits",
            a.qubit_count(),
            b.qubit_count()
        )));
    }
    let overlap: f64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x * y).sum();
    Ok((overlap * overlap).min(1.0))
}

/// Amplitudes as a `2^{N-k} × 2^k` matrix: row = B index, column = A index.
fn split_matrix(state: &StateVector, k: usize) -> DMatrix<f64> {
    let n = state.qubit_count();
    DMatrix::from_row_slice(1 << (n - k), 1 << k, state.amplitudes())
}

/// Reduced density matrix on block A (lowest `k` qubits).
pub fn reduced_density_a(state: &StateVector, k: usize) -> Result<DMatrix<f64>> {
    check_cut(state, k)?;
    let psi = split_matrix(state, k);
    Ok(psi.transpose() * psi)
}

/// Reduced density matrix on block B (the top `N - k` qubits).
pub fn reduced_density_b(state: &StateVector, k: usize) -> Result<DMatrix<f64>> {
    check_cut(state, k)?;
    let psi = split_matrix(state, k);
    Ok(&psi * psi.transpose())
}

fn check_cut(state: &StateVector, k: usize) -> Result<()> {
    if k > state.qubit_count() {
        return Err(Error::Argument(format!(
            "cut {k} exceeds register of {} qubits",
            state.qubit_count()
        )));
    }
    Ok(())
}

/// Eigenvalues of the reduced density matrix of block A, descending, with
/// values below [`EIGEN_ZERO`] dropped.
///
/// The nonzero spectra of both reduced states coincide, so the smaller of the
/// two is diagonalized.
pub fn numeric_schmidt(state: &StateVector, k: usize) -> Result<Vec<f64>> {
    numeric_schmidt_with_cutoff(state, k, EIGEN_ZERO)
}

/// [`numeric_schmidt`] with an explicit zero cutoff.
pub fn numeric_schmidt_with_cutoff(state: &StateVector, k: usize, cutoff: f64) -> Result<Vec<f64>> {
    let n = state.qubit_count();
    if k == 0 || k >= n {
        return Err(Error::Argument(format!("cut {k} must lie in 1..={}", n.saturating_sub(1))));
    }
    let rho = if k <= n - k {
        reduced_density_a(state, k)?
    } else {
        reduced_density_b(state, k)?
    };
    let mut eig: Vec<f64> = SymmetricEigen::new(rho)
        .eigenvalues
        .iter()
        .copied()
        .filter(|e| *e > cutoff)
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// Largest deviation between a measured spectrum and exact coefficients,
/// matched in descending order and padded with zeros.
pub fn spectrum_distance(numeric: &[f64], exact: &[ExactRational]) -> f64 {
    let mut exact: Vec<f64> = exact.iter().map(ExactRational::to_f64).collect();
    exact.sort_by(|a, b| b.total_cmp(a));
    let len = numeric.len().max(exact.len());
    (0..len)
        .map(|i| (numeric.get(i).copied().unwrap_or(0.0) - exact.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subject {
    Task {
        #[serde(flatten)]
        task: TransformTask,
    },
    Universal {
        #[serde(flatten)]
        spec: UniversalGateSpec,
        qubits: usize,
        ups: usize,
    },
    Gate {
        k_in: usize,
        k_out: usize,
        m1_shift: i64,
        qubits: usize,
        ups: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub feasible: bool,
    pub expected_probability: ExactRational,
    pub success_probability: f64,
    /// `None` when there is no success branch to compare.
    pub fidelity: Option<f64>,
    pub spectrum_error: f64,
    /// Only for universal gates: `p_max` minus the gate's probability.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimality_gap: Option<ExactRational>,
    pub tolerances: Tolerances,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    fn failed(subject: Subject, tolerances: Tolerances, detail: String) -> Self {
        VerificationReport {
            subject,
            feasible: false,
            expected_probability: ExactRational::zero(),
            success_probability: 0.0,
            fidelity: None,
            spectrum_error: 0.0,
            optimality_gap: None,
            tolerances,
            passed: false,
            detail: Some(detail),
        }
    }
}

struct Measurement {
    probability: f64,
    fidelity: f64,
}

/// Applies `gate` to `|D_N^{M1}⟩` and compares the normalized output with
/// `|D_{N'}^{M1'}⟩`.
fn measure(
    gate: &GateOperator,
    source: DickeSpec,
    target: DickeSpec,
    limit: &DenseLimit,
) -> Result<Measurement> {
    let psi = dicke_vector_within(source, limit)?;
    let full = embed_full(gate, limit)?;
    let out = apply_on_subsystem(&psi, &full, gate.k_in(), limit)?;
    let probability = out.norm_sqr();
    let fidelity = match out.normalized() {
        Some(out) => fidelity(&out, &dicke_vector_within(target, limit)?)?,
        None => 0.0,
    };
    Ok(Measurement { probability, fidelity })
}

fn spectrum_error(state: DickeSpec, k: usize, limit: &DenseLimit) -> Result<f64> {
    if k == 0 || k >= state.qubits() {
        return Ok(0.0);
    }
    let numeric = numeric_schmidt(&dicke_vector_within(state, limit)?, k)?;
    let exact = schmidt_spectrum(state.qubits(), state.ups(), k)?;
    Ok(spectrum_distance(&numeric, exact.coefficients()))
}

/// End-to-end check of one task: decision, `p_max`, synthesized gate, dense
/// application and fidelity with the target.
pub fn verify_task(task: &TransformTask, tol: &Tolerances, limit: &DenseLimit) -> VerificationReport {
    let subject = Subject::Task { task: *task };
    match verify_task_inner(task, tol, limit) {
        Ok(r) => r,
        Err(e) => VerificationReport::failed(subject, *tol, e.to_string()),
    }
}

fn verify_task_inner(task: &TransformTask, tol: &Tolerances, limit: &DenseLimit) -> Result<VerificationReport> {
    let subject = Subject::Task { task: *task };
    let decision = feasible(task)?;
    let best = pmax(task)?;
    let source = DickeSpec::new(task.qubits(), task.ups())?;
    let target = DickeSpec::new(task.target_qubits(), task.target_ups())?;

    if !decision.feasible {
        let synth = synthesize(task);
        let passed = best.value.is_zero() && synth == Err(Error::Infeasible);
        let detail = (!passed).then(|| format!("infeasible task gave p_max {} and synthesis {:?}", best.value, synth));
        return Ok(VerificationReport {
            subject,
            feasible: false,
            expected_probability: best.value,
            success_probability: 0.0,
            fidelity: None,
            spectrum_error: 0.0,
            optimality_gap: None,
            tolerances: *tol,
            passed,
            detail,
        });
    }

    let gate = synthesize(task)?;
    let m = measure(&gate, source, target, limit)?;
    let spectrum_error = spectrum_error(source, task.access(), limit)?
        .max(spectrum_error(target, task.target_access(), limit)?);
    let expected = best.value.to_f64();
    let passed = best.value.is_positive()
        && m.fidelity >= 1.0 - tol.fidelity
        && (m.probability - expected).abs() <= tol.probability;
    Ok(VerificationReport {
        subject,
        feasible: true,
        expected_probability: best.value,
        success_probability: m.probability,
        fidelity: Some(m.fidelity),
        spectrum_error,
        optimality_gap: None,
        tolerances: *tol,
        passed,
        detail: None,
    })
}

/// Checks a universal gate on one initial state against its exact success
/// probability, and against `p_max` when `expect_optimal` is set.
pub fn verify_universal(
    spec: &UniversalGateSpec,
    qubits: usize,
    ups: usize,
    expect_optimal: bool,
    tol: &Tolerances,
    limit: &DenseLimit,
) -> VerificationReport {
    let subject = Subject::Universal {
        spec: *spec,
        qubits,
        ups,
    };
    match verify_universal_inner(spec, qubits, ups, expect_optimal, tol, limit) {
        Ok(r) => r,
        Err(e) => VerificationReport::failed(subject, *tol, e.to_string()),
    }
}

fn verify_universal_inner(
    spec: &UniversalGateSpec,
    qubits: usize,
    ups: usize,
    expect_optimal: bool,
    tol: &Tolerances,
    limit: &DenseLimit,
) -> Result<VerificationReport> {
    let gate = universal_gate(spec)?;
    let expected = gate.success_probability(qubits, ups)?;
    let gap = optimality_gap(spec, qubits, ups)?;
    let source = DickeSpec::new(qubits, ups)?;
    let target_qubits = qubits as i64 + spec.add_qubits;
    let target_ups = ups as i64 + spec.add_ups;
    let target = DickeSpec::new(target_qubits as usize, target_ups as usize)?;
    let m = measure(&gate, source, target, limit)?;
    let gap_ok = !gap.is_negative() && (!expect_optimal || gap.is_zero());
    let passed = expected.is_positive()
        && gap_ok
        && m.fidelity >= 1.0 - tol.fidelity
        && (m.probability - expected.to_f64()).abs() <= tol.probability;
    Ok(VerificationReport {
        subject: Subject::Universal {
            spec: *spec,
            qubits,
            ups,
        },
        feasible: true,
        expected_probability: expected,
        success_probability: m.probability,
        fidelity: Some(m.fidelity),
        spectrum_error: 0.0,
        detail: (!gap_ok).then(|| format!("optimality gap {gap}")),
        optimality_gap: Some(gap),
        tolerances: *tol,
        passed,
    })
}

/// Checks an arbitrary gate on `|D_N^{M1}⟩` against its exact success
/// probability; the target is `|D_{N + k_out - k_in}^{M1 + shift}⟩`.
pub fn verify_gate(gate: &GateOperator, qubits: usize, ups: usize, tol: &Tolerances, limit: &DenseLimit) -> VerificationReport {
    let subject = Subject::Gate {
        k_in: gate.k_in(),
        k_out: gate.k_out(),
        m1_shift: gate.shift(),
        qubits,
        ups,
    };
    let run = || -> Result<VerificationReport> {
        let expected = gate.success_probability(qubits, ups)?;
        let target_qubits = qubits + gate.k_out() - gate.k_in();
        let target_ups = ups as i64 + gate.shift();
        if target_ups < 0 || target_ups as usize > target_qubits {
            return Err(Error::Argument(format!(
                "gate takes {ups} excitations to {target_ups}, impossible on {target_qubits} qubits"
            )));
        }
        let source = DickeSpec::new(qubits, ups)?;
        let target = DickeSpec::new(target_qubits, target_ups as usize)?;
        let m = measure(gate, source, target, limit)?;
        let passed = expected.is_positive()
            && m.fidelity >= 1.0 - tol.fidelity
            && (m.probability - expected.to_f64()).abs() <= tol.probability;
        Ok(VerificationReport {
            subject: subject.clone(),
            feasible: expected.is_positive(),
            expected_probability: expected,
            success_probability: m.probability,
            fidelity: Some(m.fidelity),
            spectrum_error: 0.0,
            optimality_gap: None,
            tolerances: *tol,
            passed,
            detail: None,
        })
    };
    run().unwrap_or_else(|e| VerificationReport::failed(subject.clone(), *tol, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::dicke_vector;

    fn dv(n: usize, m: usize) -> StateVector {
        dicke_vector(DickeSpec::new(n, m).unwrap()).unwrap()
    }

    fn task(n: i64, m: i64, k: i64, dn: i64, dm: i64) -> TransformTask {
        TransformTask::new(n, m, k, dn, dm).unwrap()
    }

    #[test]
    fn identity_application() {
        let lim = DenseLimit::default();
        let psi = dv(4, 2);
        for k in 0..=4 {
            let out = apply_on_subsystem(&psi, &DMatrix::identity(1 << k, 1 << k), k, &lim).unwrap();
            assert_eq!(out, psi);
        }
    }

    #[test]
    fn shape_mismatch() {
        let lim = DenseLimit::default();
        let psi = dv(3, 1);
        assert!(apply_on_subsystem(&psi, &DMatrix::identity(2, 2), 2, &lim).is_err());
        assert!(apply_on_subsystem(&psi, &DMatrix::identity(3, 2), 1, &lim).is_err());
        assert!(apply_on_subsystem(&psi, &DMatrix::identity(16, 16), 4, &lim).is_err());
        assert!(fidelity(&dv(2, 1), &dv(3, 1)).is_err());
    }

    #[test]
    fn w_expansion_action() {
        let lim = DenseLimit::default();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let op = DMatrix::from_row_slice(4, 2, &[h, 0.0, 0.0, h, 0.0, h, 0.0, 0.0]);
        let out = apply_on_subsystem(&dv(2, 1), &op, 1, &lim).unwrap();
        assert!((out.norm_sqr() - 0.75).abs() < 1e-14);
        let f = fidelity(&out.normalized().unwrap(), &dv(3, 1)).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deletion_projection_action() {
        let lim = DenseLimit::default();
        let op = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let out = apply_on_subsystem(&dv(3, 1), &op, 1, &lim).unwrap();
        assert_eq!(out.qubit_count(), 2);
        assert!((out.norm_sqr() - 2.0 / 3.0).abs() < 1e-14);
        assert!((fidelity(&out.normalized().unwrap(), &dv(2, 1)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let psi = dv(5, 2);
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(fidelity(&dv(2, 0), &dv(2, 1)).unwrap(), 0.0);
    }

    #[test]
    fn numeric_schmidt_examples() {
        let s = numeric_schmidt(&dv(2, 1), 1).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| (x - 0.5).abs() < 1e-12));

        for k in 1..5 {
            let s = numeric_schmidt(&dv(5, 0), k).unwrap();
            assert_eq!(s.len(), 1);
            assert!((s[0] - 1.0).abs() < 1e-12);
        }

        let s = numeric_schmidt(&dv(4, 2), 2).unwrap();
        let expect = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
        assert_eq!(s.len(), 3);
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(numeric_schmidt(&dv(4, 2), 0).is_err());
        assert!(numeric_schmidt(&dv(4, 2), 4).is_err());
    }

    #[test]
    fn both_sides_agree() {
        let psi = dv(7, 3);
        let a = SymmetricEigen::new(reduced_density_a(&psi, 5).unwrap()).eigenvalues;
        let mut a: Vec<f64> = a.iter().copied().filter(|e| *e > EIGEN_ZERO).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        let b = numeric_schmidt(&psi, 5).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn verify_examples() {
        let tol = Tolerances::default();
        let lim = DenseLimit::default();
        let r = verify_task(&task(2, 1, 1, 1, 0), &tol, &lim);
        assert!(r.passed, "{r:?}");
        assert!((r.success_probability - 0.75).abs() < 1e-12);
        assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-12);

        let r = verify_task(&task(4, 2, 1, 1, 0), &tol, &lim);
        assert!(r.passed && !r.feasible);

        let r = verify_task(&task(5, 2, 3, 0, 0), &tol, &lim);
        assert!(r.passed);
        assert!((r.success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verify_reports_resource_failure() {
        let r = verify_task(&task(6, 3, 3, 1, 0), &Tolerances::default(), &DenseLimit::new(5));
        assert!(!r.passed);
        assert!(r.detail.unwrap().contains("ceiling"));
    }

    #[test]
    fn reimported_gate_verifies_identically() {
        let tol = Tolerances::default();
        let lim = DenseLimit::default();
        let g = synthesize(&task(5, 2, 2, 2, 0)).unwrap();
        let back: GateOperator = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        let a = verify_gate(&g, 5, 2, &tol, &lim);
        assert!(a.passed, "{a:?}");
        assert_eq!(a, verify_gate(&back, 5, 2, &tol, &lim));
        assert!((a.success_probability - pmax(&task(5, 2, 2, 2, 0)).unwrap().value.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn gate_on_incompatible_state_fails() {
        let g = synthesize(&task(3, 1, 1, 1, 0)).unwrap();
        // |D_4^2⟩ has a weight-2 block on B that the gate cannot reproduce
        let r = verify_gate(&g, 4, 2, &Tolerances::default(), &DenseLimit::default());
        assert!(!r.passed);
    }

    #[test]
    fn report_json() {
        let r = verify_task(&task(2, 1, 1, 1, 0), &Tolerances::default(), &DenseLimit::default());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["subject"]["kind"], "task");
        assert_eq!(v["subject"]["qubits"], 2);
        assert_eq!(v["expected_probability"]["num"], "3");
        assert_eq!(v["passed"], true);
    }
}

//! Optimal single-filter transformations.
//!
//! Block B is never touched, so a successful filter on A must reproduce the
//! target's Schmidt blocks one by one: `K|D_k^{M1-j}⟩ = c_j |D_{k+n}^{M1+m1-j}⟩`
//! with `λ_j c_j² = p λ'_j`. Contraction (`c_j² ≤ 1`) then bounds the success
//! probability by `p_max = min_{j ∈ [α', β']} λ_j / λ'_j`, attained by setting
//! `c_j² = p_max λ'_j / λ_j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{support_inclusion, TransformTask};
use crate::gate::GateOperator;
use crate::rational::ExactRational;
use crate::schmidt::{schmidt_spectrum, SchmidtSpectrum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmaxResult {
    pub value: ExactRational,
    /// Smallest `j` attaining the minimum; `None` when infeasible.
    pub argmin_j: Option<usize>,
    pub source: SchmidtSpectrum,
    pub target: SchmidtSpectrum,
}

/// Source spectrum at cut `k` and target spectrum at cut `k + n`, sharing B.
pub fn task_spectra(task: &TransformTask) -> Result<(SchmidtSpectrum, SchmidtSpectrum)> {
    Ok((
        schmidt_spectrum(task.qubits(), task.ups(), task.access())?,
        schmidt_spectrum(task.target_qubits(), task.target_ups(), task.target_access())?,
    ))
}

pub fn pmax(task: &TransformTask) -> Result<PmaxResult> {
    let (source, target) = task_spectra(task)?;
    if !support_inclusion(task) {
        return Ok(PmaxResult {
            value: ExactRational::zero(),
            argmin_j: None,
            source,
            target,
        });
    }
    let mut best: Option<(usize, ExactRational)> = None;
    for (j, lambda_t) in target.iter() {
        let ratio = &source.lambda(j) / lambda_t;
        if best.as_ref().is_none_or(|(_, b)| ratio < *b) {
            best = Some((j, ratio));
        }
    }
    let (j, value) = best.expect("target spectrum is never empty");
    Ok(PmaxResult {
        value,
        argmin_j: Some(j),
        source,
        target,
    })
}

/// The optimal filter for a feasible task with `k + n ≥ 1`.
///
/// Columns for source blocks that the target lacks, and for weights that never
/// occur in `|D_N^{M1}⟩`, are zero.
pub fn synthesize_optimal_gate(task: &TransformTask) -> Result<GateOperator> {
    if task.deletes_block() {
        return Err(Error::Argument(format!(
            "task {task} removes block A entirely; use the deletion measurement"
        )));
    }
    let p = pmax(task)?;
    if p.value.is_zero() {
        return Err(Error::Infeasible);
    }
    let k = task.access();
    let mut radicands = vec![ExactRational::zero(); k + 1];
    for (j, lambda_t) in p.target.iter() {
        let u = task.ups() - j;
        radicands[u] = &(&p.value * lambda_t) / &p.source.lambda(j);
    }
    GateOperator::new(k, task.target_access(), task.add_ups(), radicands)
}

/// Projection of block A onto `|D_k^{-m1}⟩` for tasks with `k = -n`.
///
/// Leaves B in `|D_{N-k}^{M1+m1}⟩` with probability `λ_{M1+m1} = p_max`.
pub fn synthesize_deletion_measurement(task: &TransformTask) -> Result<GateOperator> {
    if !task.deletes_block() {
        return Err(Error::Argument(format!(
            "task {task} keeps {} qubits in block A; deletion measurement needs k = -n",
            task.target_access()
        )));
    }
    let p = pmax(task)?;
    if p.value.is_zero() {
        return Err(Error::Infeasible);
    }
    let j = task.target_ups();
    let k = task.access();
    let mut radicands = vec![ExactRational::zero(); k + 1];
    radicands[task.ups() - j] = &p.value / &p.source.lambda(j);
    GateOperator::new(k, 0, task.add_ups(), radicands)
}

/// Dispatches to the filter or the deletion measurement.
pub fn synthesize(task: &TransformTask) -> Result<GateOperator> {
    if task.deletes_block() {
        synthesize_deletion_measurement(task)
    } else {
        synthesize_optimal_gate(task)
    }
}

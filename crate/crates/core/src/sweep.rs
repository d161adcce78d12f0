//! Exhaustive verification sweeps over small tasks.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{feasible, validate_task, RawTask, TransformTask};
use crate::oracle::{verify_task, verify_universal, Tolerances, VerificationReport};
use crate::state::DenseLimit;
use crate::universal::UniversalGateSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub min_qubits: usize,
    pub max_qubits: usize,
    /// Largest `|n|` considered.
    pub max_change: usize,
    pub tolerances: Tolerances,
    pub limit: DenseLimit,
}

impl SweepConfig {
    pub fn new(min_qubits: usize, max_qubits: usize, max_change: usize) -> Self {
        SweepConfig {
            min_qubits,
            max_qubits,
            max_change,
            tolerances: Tolerances::default(),
            limit: DenseLimit::default(),
        }
    }
}

/// Every task passing validation with `N` in range and `|n| ≤ max_change`,
/// sorted by `(N, M1, k, n, m1)`.
pub fn enumerate_tasks(min_qubits: usize, max_qubits: usize, max_change: usize) -> Vec<TransformTask> {
    let c = max_change as i64;
    let mut tasks = Vec::new();
    for n_total in min_qubits.max(1) as i64..=max_qubits as i64 {
        for ups in 0..=n_total {
            for k in 0..=n_total {
                for n in -c..=c {
                    for m1 in -ups..=(n_total + n - ups) {
                        if let Ok(t) = validate_task(RawTask {
                            qubits: n_total,
                            ups,
                            access: k,
                            add_qubits: n,
                            add_ups: m1,
                        }) {
                            tasks.push(t);
                        }
                    }
                }
            }
        }
    }
    tasks.sort();
    tasks
}

/// Whether the universal gate for this task's change is expected to be optimal.
pub fn is_minimal_access(task: &TransformTask) -> bool {
    let k = task.access();
    let (m0, m1) = (task.add_downs(), task.add_ups());
    task.is_identity() || (m0 > 0 && m1 == 0 && k == task.ups()) || (m1 > 0 && m0 == 0 && k == task.downs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub reports: Vec<VerificationReport>,
}

impl SweepOutcome {
    pub fn passed(&self) -> usize {
        self.reports.iter().filter(|r| r.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.reports.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// Verifies every task in range, then the universal gate of every feasible
/// task that keeps at least one qubit in A. Report order is deterministic.
pub fn run(config: &SweepConfig) -> Result<SweepOutcome> {
    if config.min_qubits > config.max_qubits {
        return Err(Error::Argument(format!(
            "empty qubit range {}..{}",
            config.min_qubits, config.max_qubits
        )));
    }
    config.limit.check_vector(config.max_qubits + config.max_change)?;
    config
        .limit
        .check_operator(config.max_qubits, config.max_qubits + config.max_change)?;

    let tasks = enumerate_tasks(config.min_qubits, config.max_qubits, config.max_change);
    let (tol, limit) = (&config.tolerances, &config.limit);
    let mut reports: Vec<VerificationReport> = tasks.par_iter().map(|t| verify_task(t, tol, limit)).collect();

    let universal: Vec<VerificationReport> = tasks
        .par_iter()
        .filter(|t| !t.deletes_block() && feasible(t).map(|d| d.feasible).unwrap_or(false))
        .map(|t| {
            let spec = UniversalGateSpec::new(t.access(), t.add_qubits(), t.add_ups());
            verify_universal(&spec, t.qubits(), t.ups(), is_minimal_access(t), tol, limit)
        })
        .collect();
    reports.extend(universal);
    Ok(SweepOutcome { reports })
}

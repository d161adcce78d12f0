//! Transformation tasks and their feasibility.
//!
//! A task takes `|D_N^{M1}⟩` to `|D_{N+n}^{M1+m1}⟩` while touching only the
//! `k` qubits of block A; block B (`N - k` qubits) is never accessed. With
//! `m0 = n - m1`, the transformation is possible exactly when
//!
//! * `m0 > 0` implies `k ≥ M1`,
//! * `m1 > 0` implies `k ≥ M0`,
//! * `m0 ≤ 0` and `m1 ≤ 0` imply `k ≥ -n`.
//!
//! Equivalently, the range of B-side excitation counts in the target must be
//! contained in the range already present in the source. Both criteria are
//! evaluated independently and [`feasible`] refuses to answer if they differ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unvalidated task fields, as they arrive from a caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawTask {
    pub qubits: i64,
    pub ups: i64,
    pub access: i64,
    pub add_qubits: i64,
    pub add_ups: i64,
}

impl RawTask {
    /// Builds the raw tuple from signed spin-up and spin-down changes.
    pub fn from_changes(qubits: i64, ups: i64, access: i64, add_ups: i64, add_downs: i64) -> Self {
        RawTask {
            qubits,
            ups,
            access,
            add_qubits: add_ups + add_downs,
            add_ups,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectionKind {
    /// Source or target is a product state.
    TrivialCase,
    /// `N ≥ k ≥ -n` does not hold.
    Range,
    /// Counts that cannot describe a Dicke state.
    Malformed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub kind: RejectionKind,
    pub message: String,
}

impl Rejection {
    fn new(kind: RejectionKind, message: impl Into<String>) -> Self {
        Rejection {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for RejectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectionKind::TrivialCase => "TRIVIAL_CASE",
            RejectionKind::Range => "RANGE",
            RejectionKind::Malformed => "MALFORMED",
        })
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// A validated transformation task.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TransformTask {
    qubits: usize,
    ups: usize,
    access: usize,
    add_qubits: i64,
    add_ups: i64,
}

impl TransformTask {
    pub fn new(qubits: i64, ups: i64, access: i64, add_qubits: i64, add_ups: i64) -> std::result::Result<Self, Rejection> {
        validate_task(RawTask {
            qubits,
            ups,
            access,
            add_qubits,
            add_ups,
        })
    }

    /// `N`
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// `M1`
    pub fn ups(&self) -> usize {
        self.ups
    }

    /// `M0 = N - M1`
    pub fn downs(&self) -> usize {
        self.qubits - self.ups
    }

    /// `k`
    pub fn access(&self) -> usize {
        self.access
    }

    /// `n`
    pub fn add_qubits(&self) -> i64 {
        self.add_qubits
    }

    /// `m1`
    pub fn add_ups(&self) -> i64 {
        self.add_ups
    }

    /// `m0 = n - m1`
    pub fn add_downs(&self) -> i64 {
        self.add_qubits - self.add_ups
    }

    pub fn target_qubits(&self) -> usize {
        (self.qubits as i64 + self.add_qubits) as usize
    }

    pub fn target_ups(&self) -> usize {
        (self.ups as i64 + self.add_ups) as usize
    }

    /// Size of block A after the transformation, `k + n`.
    pub fn target_access(&self) -> usize {
        (self.access as i64 + self.add_qubits) as usize
    }

    /// Size of the untouched block B, `N - k`.
    pub fn untouched(&self) -> usize {
        self.qubits - self.access
    }

    pub fn is_identity(&self) -> bool {
        self.add_qubits == 0 && self.add_ups == 0
    }

    /// True when block A is consumed entirely (`k = -n`).
    pub fn deletes_block(&self) -> bool {
        self.target_access() == 0
    }

    pub fn raw(&self) -> RawTask {
        RawTask {
            qubits: self.qubits as i64,
            ups: self.ups as i64,
            access: self.access as i64,
            add_qubits: self.add_qubits,
            add_ups: self.add_ups,
        }
    }

    /// The same task with the roles of spin-up and spin-down exchanged.
    pub fn spin_flipped(&self) -> TransformTask {
        TransformTask {
            ups: self.downs(),
            add_ups: self.add_downs(),
            ..*self
        }
    }
}

impl fmt::Display for TransformTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(N={}, M1={}, k={}, n={}, m1={})",
            self.qubits, self.ups, self.access, self.add_qubits, self.add_ups
        )
    }
}

/// Which product states [`validate_task_with`] lets through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Guard {
    /// Source and target must both be entangled.
    #[default]
    Strict,
    /// The target may be `|0...0⟩` or `|1...1⟩`, e.g. when a deletion
    /// removes the last spin-up. The source must still be entangled.
    AllowProductTarget,
}

/// Checks the guards on a raw task.
///
/// Order: source shape (`MALFORMED`), access range (`RANGE`), target shape
/// (`MALFORMED`), then product-state exclusion (`TRIVIAL_CASE`).
pub fn validate_task(raw: RawTask) -> std::result::Result<TransformTask, Rejection> {
    validate_task_with(raw, Guard::Strict)
}

pub fn validate_task_with(raw: RawTask, guard: Guard) -> std::result::Result<TransformTask, Rejection> {
    use RejectionKind::*;
    let RawTask {
        qubits: n_total,
        ups,
        access: k,
        add_qubits: n,
        add_ups: m1,
    } = raw;
    if n_total < 1 {
        return Err(Rejection::new(Malformed, format!("N = {n_total} must be positive")));
    }
    if ups < 0 || ups > n_total {
        return Err(Rejection::new(Malformed, format!("M1 = {ups} outside [0, {n_total}]")));
    }
    if k < 0 || k > n_total || k < -n {
        return Err(Rejection::new(
            Range,
            format!("need N >= k >= -n, got N = {n_total}, k = {k}, n = {n}"),
        ));
    }
    let target_qubits = n_total + n;
    let target_ups = ups + m1;
    if target_ups < 0 || target_ups > target_qubits {
        return Err(Rejection::new(
            Malformed,
            format!("M1 + m1 = {target_ups} outside [0, {target_qubits}]"),
        ));
    }
    let downs = n_total - ups;
    let target_downs = target_qubits - target_ups;
    let product_target = target_ups == 0 || target_downs == 0;
    if ups == 0 || downs == 0 || (product_target && guard == Guard::Strict) {
        return Err(Rejection::new(
            TrivialCase,
            format!("product state involved: M1 = {ups}, M0 = {downs}, M1 + m1 = {target_ups}, M0 + m0 = {target_downs}"),
        ));
    }
    Ok(TransformTask {
        qubits: n_total as usize,
        ups: ups as usize,
        access: k as usize,
        add_qubits: n,
        add_ups: m1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reason {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "NEEDS_K_GE_M1")]
    NeedsAccessAtLeastUps,
    #[serde(rename = "NEEDS_K_GE_M0")]
    NeedsAccessAtLeastDowns,
    #[serde(rename = "NEEDS_K_GE_MINUS_N")]
    NeedsAccessAtLeastDeleted,
    #[serde(rename = "SUPPORT_MISMATCH")]
    SupportMismatch,
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::Ok => "OK",
            Reason::NeedsAccessAtLeastUps => "NEEDS_K_GE_M1",
            Reason::NeedsAccessAtLeastDowns => "NEEDS_K_GE_M0",
            Reason::NeedsAccessAtLeastDeleted => "NEEDS_K_GE_MINUS_N",
            Reason::SupportMismatch => "SUPPORT_MISMATCH",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `reasons == [OK]` exactly when `feasible`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityDecision {
    pub feasible: bool,
    pub reasons: Vec<Reason>,
}

impl FeasibilityDecision {
    fn from_failures(failures: Vec<Reason>) -> Self {
        if failures.is_empty() {
            FeasibilityDecision {
                feasible: true,
                reasons: vec![Reason::Ok],
            }
        } else {
            FeasibilityDecision {
                feasible: false,
                reasons: failures,
            }
        }
    }
}

/// Evaluates the three access-count clauses.
pub fn necessary_conditions(task: &TransformTask) -> FeasibilityDecision {
    let k = task.access() as i64;
    let (m0, m1) = (task.add_downs(), task.add_ups());
    let mut failures = Vec::new();
    if m0 > 0 && k < task.ups() as i64 {
        failures.push(Reason::NeedsAccessAtLeastUps);
    }
    if m1 > 0 && k < task.downs() as i64 {
        failures.push(Reason::NeedsAccessAtLeastDowns);
    }
    if m0 <= 0 && m1 <= 0 && k < -task.add_qubits() {
        failures.push(Reason::NeedsAccessAtLeastDeleted);
    }
    FeasibilityDecision::from_failures(failures)
}

/// B-side excitation ranges `[α, β]` of the source and `[α', β']` of the target.
pub fn support_ranges(task: &TransformTask) -> ((usize, usize), (usize, usize)) {
    let b = task.untouched();
    let (ups, k) = (task.ups(), task.access());
    let (t_ups, t_k) = (task.target_ups(), task.target_access());
    (
        (ups.saturating_sub(k), b.min(ups)),
        (t_ups.saturating_sub(t_k), b.min(t_ups)),
    )
}

/// Whether `[α', β'] ⊆ [α, β]`.
pub fn support_inclusion(task: &TransformTask) -> bool {
    let ((alpha, beta), (alpha_t, beta_t)) = support_ranges(task);
    alpha_t >= alpha && beta_t <= beta
}

/// Combined decision; errors with [`Error::Consistency`] if the two criteria differ.
pub fn feasible(task: &TransformTask) -> Result<FeasibilityDecision> {
    let mut decision = necessary_conditions(task);
    let support = support_inclusion(task);
    if decision.feasible != support {
        return Err(Error::Consistency {
            necessary: decision.feasible,
            support,
        });
    }
    if !support {
        decision.reasons.push(Reason::SupportMismatch);
    }
    Ok(decision)
}

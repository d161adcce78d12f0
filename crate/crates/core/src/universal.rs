//! Gates that perform a transformation for every initial size `N`.
//!
//! For a split at `k` the ratio of target to source Schmidt weights is
//!
//! ```text
//! λ'_j / λ_j = (C(N, M1) / C(N+n, M1+m1)) · r_u,   r_u = C(k+n, u+m1) / C(k, u),
//! ```
//!
//! with `u = M1 - j`. The B-side factor `C(N-k, j)` cancels, so a filter with
//! `c_u² ∝ r_u` reaches the target from any compatible `|D_N^{M1}⟩`. Scaling so
//! that the largest admissible `r_u` gives `c_u² = 1` makes the filter a
//! maximal contraction.

use serde::{Deserialize, Serialize};

use crate::dicke::choose_int;
use crate::error::{Error, Result};
use crate::feasibility::{validate_task, RawTask};
use crate::gate::GateOperator;
use crate::optimal::pmax;
use crate::rational::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniversalGateSpec {
    pub access: usize,
    pub add_qubits: i64,
    pub add_ups: i64,
    /// Column normalized to `c_u² = 1`; defaults to the admissible argmax of `r_u`.
    pub normalization_u: Option<usize>,
}

impl UniversalGateSpec {
    pub fn new(access: usize, add_qubits: i64, add_ups: i64) -> Self {
        UniversalGateSpec {
            access,
            add_qubits,
            add_ups,
            normalization_u: None,
        }
    }

    pub fn normalized_at(mut self, u: usize) -> Self {
        self.normalization_u = Some(u);
        self
    }

    pub fn add_downs(&self) -> i64 {
        self.add_qubits - self.add_ups
    }

    pub fn target_access(&self) -> i64 {
        self.access as i64 + self.add_qubits
    }

    pub fn is_admissible(&self, u: usize) -> bool {
        let v = u as i64 + self.add_ups;
        u <= self.access && v >= 0 && v <= self.target_access()
    }

    pub fn admissible(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.access).filter(|u| self.is_admissible(*u))
    }

    /// `r_u = C(k+n, u+m1) / C(k, u)`, zero when `u` is inadmissible.
    pub fn ratio(&self, u: usize) -> ExactRational {
        if !self.is_admissible(u) {
            return ExactRational::zero();
        }
        ExactRational::new(
            choose_int(self.target_access() as u64, u as i64 + self.add_ups),
            choose_int(self.access as u64, u as i64),
        )
    }

    /// Smallest admissible `u` maximizing `r_u`.
    pub fn argmax_ratio(&self) -> Option<usize> {
        let mut best: Option<(usize, ExactRational)> = None;
        for u in self.admissible() {
            let r = self.ratio(u);
            if best.as_ref().is_none_or(|(_, b)| r > *b) {
                best = Some((u, r));
            }
        }
        best.map(|(u, _)| u)
    }

    /// The same spec with spin-up and spin-down exchanged.
    pub fn spin_flipped(&self) -> UniversalGateSpec {
        UniversalGateSpec {
            access: self.access,
            add_qubits: self.add_qubits,
            add_ups: self.add_downs(),
            normalization_u: self.normalization_u.map(|u| self.access - u),
        }
    }
}

/// Builds the N-independent gate for `spec`.
///
/// With an explicit `normalization_u`, columns whose `r_u` exceeds the chosen
/// normalization would not be contractions and are zeroed instead.
pub fn universal_gate(spec: &UniversalGateSpec) -> Result<GateOperator> {
    if spec.target_access() < 1 {
        return Err(Error::Argument(format!(
            "universal gates need k + n >= 1, got k = {}, n = {}",
            spec.access, spec.add_qubits
        )));
    }
    let norm_u = match spec.normalization_u {
        Some(u) if spec.is_admissible(u) => u,
        Some(u) => {
            return Err(Error::Argument(format!(
                "normalization weight {u} is not admissible"
            )))
        }
        None => spec
            .argmax_ratio()
            .ok_or_else(|| Error::Argument("no admissible input weight".into()))?,
    };
    let norm = spec.ratio(norm_u);
    let radicands = (0..=spec.access)
        .map(|u| {
            let c2 = &spec.ratio(u) / &norm;
            if c2 > ExactRational::one() {
                ExactRational::zero()
            } else {
                c2
            }
        })
        .collect();
    Ok(GateOperator::new(
        spec.access,
        spec.target_access() as usize,
        spec.add_ups,
        radicands,
    )?
    .with_normalization(norm_u))
}

/// Exact success probability of the universal gate on `|D_N^{M1}⟩`.
pub fn universal_success_probability(spec: &UniversalGateSpec, qubits: usize, ups: usize) -> Result<ExactRational> {
    universal_gate(spec)?.success_probability(qubits, ups)
}

/// `p_max - p_universal` for the task `(N, M1, k, n, m1)`; the task must be feasible.
pub fn optimality_gap(spec: &UniversalGateSpec, qubits: usize, ups: usize) -> Result<ExactRational> {
    let task = validate_task(RawTask {
        qubits: qubits as i64,
        ups: ups as i64,
        access: spec.access as i64,
        add_qubits: spec.add_qubits,
        add_ups: spec.add_ups,
    })?;
    let best = pmax(&task)?;
    if best.value.is_zero() {
        return Err(Error::Infeasible);
    }
    Ok(best.value - universal_success_probability(spec, qubits, ups)?)
}

/// Conjugates a gate by the global bit flip: entry `(v, u)` moves to
/// `(k_out - v, k_in - u)`.
pub fn spin_flip_conjugate(gate: &GateOperator) -> GateOperator {
    let (k_in, k_out) = (gate.k_in(), gate.k_out());
    let radicands: Vec<ExactRational> = (0..=k_in).rev().map(|u| gate.radicand(u)).collect();
    let flipped = GateOperator::new(k_in, k_out, k_out as i64 - k_in as i64 - gate.shift(), radicands)
        .expect("bit flip preserves gate validity");
    match gate.normalization_u() {
        Some(u) => flipped.with_normalization(k_in - u),
        None => flipped,
    }
}

//! Filtering gates acting on the symmetric subspace.
//!
//! Every gate here maps each symmetric basis state `|D_{k_in}^u⟩` to a
//! multiple `c_u |D_{k_out}^{u + shift}⟩`, so the compact matrix has at most
//! one nonzero entry per column. Entries are nonnegative square roots of
//! rationals; the radicands `c_u²` are kept exactly and floating values are
//! produced only when a gate is expanded to the full qubit space.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dicke::symmetric_basis_vector;
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::schmidt::schmidt_spectrum;
use crate::state::DenseLimit;

pub const BASIS_NAME: &str = "symmetric-dicke";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOperator {
    k_in: usize,
    k_out: usize,
    shift: i64,
    /// `c_u²` for `u = 0..=k_in`.
    radicands: Vec<ExactRational>,
    /// Set for N-independent gates built from a universal spec.
    normalization_u: Option<usize>,
}

impl GateOperator {
    /// Builds a gate from per-column radicands, checking the shape and `0 ≤ c_u² ≤ 1`.
    pub fn new(k_in: usize, k_out: usize, shift: i64, radicands: Vec<ExactRational>) -> Result<Self> {
        if radicands.len() != k_in + 1 {
            return Err(Error::Shape(format!(
                "{} radicands for a {k_in}-qubit input",
                radicands.len()
            )));
        }
        for (u, c2) in radicands.iter().enumerate() {
            if c2.is_negative() || *c2 > ExactRational::one() {
                return Err(Error::Argument(format!(
                    "column {u} has c^2 = {c2}, outside [0, 1]"
                )));
            }
            if !c2.is_zero() {
                let v = u as i64 + shift;
                if v < 0 || v > k_out as i64 {
                    return Err(Error::Shape(format!(
                        "column {u} maps to weight {v}, outside [0, {k_out}]"
                    )));
                }
            }
        }
        Ok(GateOperator {
            k_in,
            k_out,
            shift,
            radicands,
            normalization_u: None,
        })
    }

    pub(crate) fn with_normalization(mut self, u: usize) -> Self {
        self.normalization_u = Some(u);
        self
    }

    pub fn identity(k: usize) -> Self {
        GateOperator {
            k_in: k,
            k_out: k,
            shift: 0,
            radicands: vec![ExactRational::one(); k + 1],
            normalization_u: None,
        }
    }

    pub fn k_in(&self) -> usize {
        self.k_in
    }

    pub fn k_out(&self) -> usize {
        self.k_out
    }

    /// Change in excitation number, `v - u`.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn normalization_u(&self) -> Option<usize> {
        self.normalization_u
    }

    pub fn is_universal(&self) -> bool {
        self.normalization_u.is_some()
    }

    pub fn radicands(&self) -> &[ExactRational] {
        &self.radicands
    }

    /// `c_u²`, zero for `u > k_in`.
    pub fn radicand(&self, u: usize) -> ExactRational {
        self.radicands.get(u).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// Output weight of column `u` when it is nonzero.
    pub fn target_weight(&self, u: usize) -> Option<usize> {
        let c2 = self.radicands.get(u)?;
        if c2.is_zero() {
            None
        } else {
            Some((u as i64 + self.shift) as usize)
        }
    }

    /// Largest column norm², i.e. the largest eigenvalue of `K†K`.
    pub fn max_radicand(&self) -> ExactRational {
        self.radicands
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    /// `(k_out + 1) × (k_in + 1)` matrix of `⟨D_{k_out}^v| K |D_{k_in}^u⟩`.
    pub fn compact_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.k_out + 1, self.k_in + 1);
        for u in 0..=self.k_in {
            if let Some(v) = self.target_weight(u) {
                m[(v, u)] = self.radicands[u].to_f64().sqrt();
            }
        }
        m
    }

    /// Exact success probability of the filter on `|D_N^{M1}⟩` with A = the
    /// lowest `k_in` qubits: `Σ_j λ_j c_{M1-j}²`.
    pub fn success_probability(&self, qubits: usize, ups: usize) -> Result<ExactRational> {
        if self.k_in > qubits {
            return Err(Error::Argument(format!(
                "gate acts on {} qubits but the state has {qubits}",
                self.k_in
            )));
        }
        let spectrum = schmidt_spectrum(qubits, ups, self.k_in)?;
        Ok(spectrum
            .iter()
            .map(|(j, lambda)| lambda * &self.radicand(ups - j))
            .sum())
    }
}

/// Expands a compact gate to its `2^{k_out} × 2^{k_in}` matrix on the full
/// qubit space: `Σ_u c_u |D_{k_out}^{u+shift}⟩⟨D_{k_in}^u|`.
pub fn embed_full(gate: &GateOperator, limit: &DenseLimit) -> Result<DMatrix<f64>> {
    limit.check_operator(gate.k_in, gate.k_out)?;
    let mut full = DMatrix::zeros(1usize << gate.k_out, 1usize << gate.k_in);
    for u in 0..=gate.k_in {
        let Some(v) = gate.target_weight(u) else {
            continue;
        };
        let c = gate.radicands[u].to_f64().sqrt();
        let input = symmetric_basis_vector(gate.k_in, u, limit)?;
        let output = symmetric_basis_vector(gate.k_out, v, limit)?;
        let rows: Vec<(usize, f64)> = nonzero(output.amplitudes());
        for (col, a) in nonzero(input.amplitudes()) {
            for &(row, b) in &rows {
                full[(row, col)] += c * b * a;
            }
        }
    }
    Ok(full)
}

fn nonzero(v: &[f64]) -> Vec<(usize, f64)> {
    v.iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .map(|(i, a)| (i, *a))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ColumnWire {
    u: usize,
    v: usize,
    c_squared: ExactRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateWire {
    k_in: usize,
    k_out: usize,
    basis: String,
    m1_shift: i64,
    columns: Vec<ColumnWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalization_u: Option<usize>,
}

impl Serialize for GateOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let columns = (0..=self.k_in)
            .filter_map(|u| {
                self.target_weight(u).map(|v| ColumnWire {
                    u,
                    v,
                    c_squared: self.radicands[u].clone(),
                })
            })
            .collect();
        GateWire {
            k_in: self.k_in,
            k_out: self.k_out,
            basis: BASIS_NAME.to_string(),
            m1_shift: self.shift,
            columns,
            universal: self.normalization_u.map(|_| true),
            normalization_u: self.normalization_u,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = GateWire::deserialize(d)?;
        if w.basis != BASIS_NAME {
            return Err(D::Error::custom(format!("unsupported basis {:?}", w.basis)));
        }
        let mut radicands = vec![ExactRational::zero(); w.k_in + 1];
        for col in w.columns {
            if col.u > w.k_in {
                return Err(D::Error::custom(format!("column u = {} exceeds k_in", col.u)));
            }
            if col.v as i64 != col.u as i64 + w.m1_shift {
                return Err(D::Error::custom(format!(
                    "column u = {} maps to v = {}, inconsistent with m1_shift {}",
                    col.u, col.v, w.m1_shift
                )));
            }
            if !radicands[col.u].is_zero() {
                return Err(D::Error::custom(format!("duplicate column u = {}", col.u)));
            }
            radicands[col.u] = col.c_squared;
        }
        let gate = GateOperator::new(w.k_in, w.k_out, w.m1_shift, radicands).map_err(D::Error::custom)?;
        match (w.universal, w.normalization_u) {
            (Some(true), Some(u)) => Ok(gate.with_normalization(u)),
            (None | Some(false), None) => Ok(gate),
            _ => Err(D::Error::custom("universal and normalization_u must be given together")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn rejects_non_contractions_and_bad_shapes() {
        assert!(GateOperator::new(1, 2, 0, vec![r(3, 2), r(1, 1)]).is_err());
        assert!(GateOperator::new(1, 2, 0, vec![r(-1, 2), r(1, 1)]).is_err());
        assert!(GateOperator::new(1, 2, 0, vec![r(1, 1)]).is_err());
        assert!(GateOperator::new(1, 1, 1, vec![r(1, 2), r(1, 1)]).is_err());
        // a zero column may point anywhere
        assert!(GateOperator::new(1, 1, 1, vec![r(1, 2), r(0, 1)]).is_ok());
    }

    #[test]
    fn identity_embeds_to_identity() {
        let full = embed_full(&GateOperator::identity(1), &DenseLimit::default()).unwrap();
        assert_eq!(full, DMatrix::identity(2, 2));
        let full = embed_full(&GateOperator::identity(3), &DenseLimit::default()).unwrap();
        // identity on the symmetric subspace only: the projector onto it
        assert!((full.trace() - 4.0).abs() < 1e-12);
        assert!((&full * &full - &full).amax() < 1e-12);
    }

    #[test]
    fn w_expansion_embedding() {
        // |0⟩ -> (1/√2)|00⟩, |1⟩ -> (|01⟩ + |10⟩)/√2
        let g = GateOperator::new(1, 2, 0, vec![r(1, 2), r(1, 1)]).unwrap();
        let full = embed_full(&g, &DenseLimit::default()).unwrap();
        assert_eq!(full.shape(), (4, 2));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = DMatrix::from_row_slice(4, 2, &[h, 0.0, 0.0, h, 0.0, h, 0.0, 0.0]);
        assert!((full - expect).amax() < 1e-15);
    }

    #[test]
    fn measurement_embeds_as_row() {
        let g = GateOperator::new(2, 0, -1, vec![r(0, 1), r(1, 1), r(0, 1)]).unwrap();
        let full = embed_full(&g, &DenseLimit::default()).unwrap();
        assert_eq!(full.shape(), (1, 4));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((full - DMatrix::from_row_slice(1, 4, &[0.0, h, h, 0.0])).amax() < 1e-15);
    }

    #[test]
    fn compact_matrix_layout() {
        let g = GateOperator::new(1, 2, 1, vec![r(1, 4), r(1, 1)]).unwrap();
        let m = g.compact_matrix();
        assert_eq!(m.shape(), (3, 2));
        assert_eq!(m[(1, 0)], 0.5);
        assert_eq!(m[(2, 1)], 1.0);
        assert_eq!(m.iter().filter(|x| **x != 0.0).count(), 2);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = GateOperator::new(2, 3, 0, vec![r(1, 3), r(1, 2), r(1, 1)])
            .unwrap()
            .with_normalization(2);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"k_in":2,"k_out":3,"basis":"symmetric-dicke","m1_shift":0,"columns":[{"u":0,"v":0,"c_squared":{"num":"1","den":"3"}},{"u":1,"v":1,"c_squared":{"num":"1","den":"2"}},{"u":2,"v":2,"c_squared":{"num":"1","den":"1"}}],"universal":true,"normalization_u":2}"#
        );
        let back: GateOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_inconsistent_columns() {
        let bad = r#"{"k_in":1,"k_out":2,"basis":"symmetric-dicke","m1_shift":0,"columns":[{"u":0,"v":1,"c_squared":{"num":"1","den":"2"}}]}"#;
        assert!(serde_json::from_str::<GateOperator>(bad).is_err());
        let bad = r#"{"k_in":1,"k_out":2,"basis":"symmetric-dicke","m1_shift":0,"columns":[{"u":0,"v":0,"c_squared":{"num":"3","den":"2"}}]}"#;
        assert!(serde_json::from_str::<GateOperator>(bad).is_err());
        let bad = r#"{"k_in":1,"k_out":2,"basis":"computational","m1_shift":0,"columns":[]}"#;
        assert!(serde_json::from_str::<GateOperator>(bad).is_err());
    }

    #[test]
    fn exact_success_probability_on_w_states() {
        let g = GateOperator::new(1, 2, 0, vec![r(1, 2), r(1, 1)]).unwrap();
        for n in 2..=10i64 {
            assert_eq!(
                g.success_probability(n as usize, 1).unwrap(),
                r(n + 1, 2 * n)
            );
        }
    }
}

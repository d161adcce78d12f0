//! Dense real state vectors over qubit registers.
//!
//! Basis index `i` encodes a bitstring with bit `q` giving the state of qubit
//! `q` (1 = spin-up). Where a register is split into an accessible block A and
//! an untouched block B, A always occupies the lowest-index qubits, so an
//! index decomposes as `a + (b << k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the number of qubits held in a dense vector (16 MiB of `f64`).
pub const DEFAULT_MAX_QUBITS: usize = 20;

/// Dense operators may use this many more qubits' worth of entries than vectors.
pub const OPERATOR_EXTRA_QUBITS: usize = 4;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "DICKE_MAX_QUBITS";

/// Memory guard for dense vectors and operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseLimit {
    pub max_qubits: usize,
}

impl Default for DenseLimit {
    fn default() -> Self {
        DenseLimit {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl DenseLimit {
    pub fn new(max_qubits: usize) -> Self {
        DenseLimit { max_qubits }
    }

    /// Reads [`MAX_QUBITS_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_QUBITS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(DenseLimit::new)
                .map_err(|_| Error::Argument(format!("{MAX_QUBITS_ENV}={v:?} is not a qubit count"))),
            Err(_) => Ok(DenseLimit::default()),
        }
    }

    pub fn check_vector(&self, qubits: usize) -> Result<()> {
        if qubits > self.max_qubits {
            return Err(Error::Resource {
                requested: qubits,
                ceiling: self.max_qubits,
            });
        }
        Ok(())
    }

    /// An operator from `k_in` to `k_out` qubits holds `2^(k_in + k_out)` entries.
    pub fn check_operator(&self, k_in: usize, k_out: usize) -> Result<()> {
        let ceiling = self.max_qubits + OPERATOR_EXTRA_QUBITS;
        if k_in + k_out > ceiling || k_in > self.max_qubits || k_out > self.max_qubits {
            return Err(Error::Resource {
                requested: k_in + k_out,
                ceiling,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(qubit_count: usize, amplitudes: Vec<f64>) -> Result<Self> {
        if qubit_count >= usize::BITS as usize || amplitudes.len() != 1usize << qubit_count {
            return Err(Error::Shape(format!(
                "{} amplitudes do not describe {} qubits",
                amplitudes.len(),
                qubit_count
            )));
        }
        Ok(StateVector {
            qubit_count,
            amplitudes,
        })
    }

    pub fn zeros(qubit_count: usize, limit: &DenseLimit) -> Result<Self> {
        limit.check_vector(qubit_count)?;
        Ok(StateVector {
            qubit_count,
            amplitudes: vec![0.0; 1 << qubit_count],
        })
    }

    /// The computational basis state `|bits⟩`.
    pub fn basis(qubit_count: usize, bits: usize, limit: &DenseLimit) -> Result<Self> {
        let mut s = Self::zeros(qubit_count, limit)?;
        let len = s.amplitudes.len();
        *s.amplitudes
            .get_mut(bits)
            .ok_or_else(|| Error::Argument(format!("basis index {bits} out of range for {len} amplitudes")))? = 1.0;
        Ok(s)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: usize) -> f64 {
        self.amplitudes[bits]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Returns the normalized copy, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<StateVector> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return None;
        }
        Some(StateVector {
            qubit_count: self.qubit_count,
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }
}

/// Hamming weight of a basis index.
pub fn weight_of_bitstring(bits: usize) -> usize {
    bits.count_ones() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight() {
        assert_eq!(weight_of_bitstring(0b0110), 2);
        assert_eq!(weight_of_bitstring(0), 0);
        assert_eq!(weight_of_bitstring(0b1111_1111), 8);
    }

    #[test]
    fn shape_checked() {
        assert!(StateVector::new(2, vec![0.0; 3]).is_err());
        assert!(StateVector::new(2, vec![0.0; 4]).is_ok());
    }

    #[test]
    fn ceiling_enforced() {
        let lim = DenseLimit::new(4);
        assert!(StateVector::zeros(4, &lim).is_ok());
        assert_eq!(
            StateVector::zeros(5, &lim),
            Err(Error::Resource {
                requested: 5,
                ceiling: 4
            })
        );
        assert!(lim.check_operator(4, 4).is_ok());
        assert!(lim.check_operator(5, 1).is_err());
        assert!(lim.check_operator(4, 5).is_err());
    }

    #[test]
    fn basis_index_out_of_range() {
        let lim = DenseLimit::default();
        assert!(StateVector::basis(2, 4, &lim).is_err());
        let s = StateVector::basis(2, 3, &lim).unwrap();
        assert_eq!(s.amplitude(3), 1.0);
        assert!(s.is_normalized(1e-15));
    }

    #[test]
    fn normalize_zero_vector() {
        let s = StateVector::zeros(1, &DenseLimit::default()).unwrap();
        assert!(s.normalized().is_none());
    }
}

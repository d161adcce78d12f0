//! Binomial coefficients and Dicke states in the computational basis.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{weight_of_bitstring, DenseLimit, StateVector};

/// `C(n, r)`, with the convention `C(n, r) = 0` for `r < 0` or `r > n`.
pub fn binomial(n: i64, r: i64) -> Result<BigUint> {
    if n < 0 {
        return Err(Error::Argument(format!("binomial with negative n = {n}")));
    }
    Ok(choose(n as u64, r))
}

pub(crate) fn choose(n: u64, r: i64) -> BigUint {
    if r < 0 || r as u64 > n {
        return BigUint::ZERO;
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigUint::one();
    // Each partial product acc * (n - i) / (i + 1) is itself a binomial.
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub(crate) fn choose_int(n: u64, r: i64) -> BigInt {
    BigInt::from(choose(n, r))
}

/// An `N`-qubit Dicke state with `M1` excitations; `M0 = N - M1` is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DickeSpec {
    qubits: usize,
    ups: usize,
}

impl DickeSpec {
    pub fn new(qubits: usize, ups: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::Argument("a Dicke state needs at least one qubit".into()));
        }
        if ups > qubits {
            return Err(Error::Argument(format!(
                "spin-up count {ups} exceeds qubit count {qubits}"
            )));
        }
        Ok(DickeSpec { qubits, ups })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn ups(&self) -> usize {
        self.ups
    }

    pub fn downs(&self) -> usize {
        self.qubits - self.ups
    }
}

/// `|D_N^{M1}⟩` as a dense vector, within the default ceiling.
pub fn dicke_vector(spec: DickeSpec) -> Result<StateVector> {
    dicke_vector_within(spec, &DenseLimit::default())
}

pub fn dicke_vector_within(spec: DickeSpec, limit: &DenseLimit) -> Result<StateVector> {
    symmetric_basis_vector(spec.qubits, spec.ups, limit)
}

/// `|D_k^u⟩` for any `k ≥ 0`, including the empty register (`k = 0`, `u = 0`).
pub(crate) fn symmetric_basis_vector(k: usize, u: usize, limit: &DenseLimit) -> Result<StateVector> {
    if u > k {
        return Err(Error::Argument(format!("weight {u} out of range for {k} qubits")));
    }
    limit.check_vector(k)?;
    let amp = 1.0 / choose(k as u64, u as i64).to_f64_lossy().sqrt();
    let amps = (0..1usize << k)
        .map(|bits| if weight_of_bitstring(bits) == u { amp } else { 0.0 })
        .collect();
    StateVector::new(k, amps)
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for BigUint {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
}

/// Norm of `(⟨D_k^u| ⊗ I_B) |ψ⟩`, with `⟨D_k^u|` acting on the lowest `k` qubits.
///
/// For `k` equal to the register size this is the absolute overlap
/// `|⟨D_k^u|ψ⟩|`. For a Dicke state split at `k`, its square is the Schmidt
/// weight of the block with `u` excitations on A.
pub fn symmetric_component(state: &StateVector, k: usize, u: usize) -> Result<f64> {
    let n = state.qubit_count();
    if k > n {
        return Err(Error::Argument(format!("block of {k} qubits exceeds register of {n}")));
    }
    if u > k {
        return Err(Error::Argument(format!("weight {u} out of range for {k} qubits")));
    }
    let a_dim = 1usize << k;
    let b_dim = 1usize << (n - k);
    let amp = 1.0 / choose(k as u64, u as i64).to_f64_lossy().sqrt();
    let amps = state.amplitudes();
    let norm_sqr: f64 = (0..b_dim)
        .map(|b| {
            let s: f64 = (0..a_dim)
                .filter(|a| weight_of_bitstring(*a) == u)
                .map(|a| amp * amps[a + (b << k)])
                .sum();
            s * s
        })
        .sum();
    Ok(norm_sqr.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dv(n: usize, m: usize) -> StateVector {
        dicke_vector(DickeSpec::new(n, m).unwrap()).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(binomial(5, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(binomial(3, 5).unwrap(), BigUint::ZERO);
        assert_eq!(binomial(3, -1).unwrap(), BigUint::ZERO);
        assert_eq!(binomial(0, 0).unwrap(), BigUint::from(1u32));
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn binomial_large_is_exact() {
        // C(100, 50) = 100891344545564193334812497256
        assert_eq!(
            binomial(100, 50).unwrap().to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn dicke_two_qubits() {
        let d = dv(2, 1);
        assert!((d.amplitude(0b01) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((d.amplitude(0b10) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(d.amplitude(0b00), 0.0);
        assert_eq!(d.amplitude(0b11), 0.0);

        let d0 = dv(2, 0);
        assert_eq!(d0.amplitudes(), &[1.0, 0.0, 0.0, 0.0]);
        let d2 = dv(2, 2);
        assert_eq!(d2.amplitudes(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn w_state_three_qubits() {
        let w = dv(3, 1);
        let third = 1.0 / 3f64.sqrt();
        for bits in 0..8usize {
            let expect = if bits.count_ones() == 1 { third } else { 0.0 };
            assert!((w.amplitude(bits) - expect).abs() < 1e-15, "bits {bits:03b}");
        }
    }

    #[test]
    fn flatness_and_normalization() {
        for n in 1..=12usize {
            for m in 0..=n {
                let d = dv(n, m);
                assert!(d.is_normalized(1e-12));
                let expect = 1.0 / choose(n as u64, m as i64).to_f64_lossy().sqrt();
                for (bits, a) in d.amplitudes().iter().enumerate() {
                    if weight_of_bitstring(bits) == m {
                        assert!((a - expect).abs() < 1e-14);
                    } else {
                        assert_eq!(*a, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn spec_rejects_bad_counts() {
        assert!(DickeSpec::new(0, 0).is_err());
        assert!(DickeSpec::new(3, 4).is_err());
        assert_eq!(DickeSpec::new(5, 2).unwrap().downs(), 3);
    }

    #[test]
    fn ceiling_is_a_resource_error() {
        let spec = DickeSpec::new(6, 3).unwrap();
        assert!(matches!(
            dicke_vector_within(spec, &DenseLimit::new(5)),
            Err(Error::Resource { requested: 6, ceiling: 5 })
        ));
        assert!(matches!(
            dicke_vector(DickeSpec::new(21, 1).unwrap()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn symmetric_component_examples() {
        assert!((symmetric_component(&dv(2, 1), 2, 1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(symmetric_component(&dv(2, 0), 2, 1).unwrap(), 0.0);
        assert!(symmetric_component(&dv(2, 0), 2, 3).is_err());
        assert!(symmetric_component(&dv(2, 0), 3, 0).is_err());
    }

    #[test]
    fn symmetric_component_gives_block_weight() {
        // |D_4^2⟩ split 2|2: u = 1 on A carries weight 4/6.
        let c = symmetric_component(&dv(4, 2), 2, 1).unwrap();
        assert!((c * c - 4.0 / 6.0).abs() < 1e-14);
    }
}

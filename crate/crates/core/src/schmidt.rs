//! Closed-form bipartite Schmidt spectrum of a Dicke state.
//!
//! Splitting `|D_N^{M1}⟩` into A (`k` qubits) and B (`N - k` qubits) gives
//!
//! ```text
//! |D_N^{M1}⟩ = Σ_{j=α}^{β} √λ_j |D_k^{M1-j}⟩_A |D_{N-k}^j⟩_B,
//! λ_j = C(k, M1-j) C(N-k, j) / C(N, M1),
//! α = max{M1 - k, 0},  β = min{N - k, M1},
//! ```
//!
//! where `j` counts the excitations left on B.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dicke::choose_int;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Summation range `(α, β)` for the split of `|D_N^{M1}⟩` at `k`.
pub fn j_range(qubits: usize, ups: usize, k: usize) -> Result<(usize, usize)> {
    if ups > qubits {
        return Err(Error::Argument(format!(
            "spin-up count {ups} exceeds qubit count {qubits}"
        )));
    }
    if k > qubits {
        return Err(Error::Argument(format!(
            "cut {k} exceeds qubit count {qubits}"
        )));
    }
    Ok((ups.saturating_sub(k), (qubits - k).min(ups)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchmidtSpectrum {
    qubits: usize,
    ups: usize,
    k: usize,
    alpha: usize,
    beta: usize,
    /// `λ_α, ..., λ_β` in order.
    coefficients: Vec<ExactRational>,
}

impl SchmidtSpectrum {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn ups(&self) -> usize {
        self.ups
    }

    pub fn cut(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn contains(&self, j: usize) -> bool {
        (self.alpha..=self.beta).contains(&j)
    }

    /// `λ_j`, or zero outside `[α, β]`.
    pub fn lambda(&self, j: usize) -> ExactRational {
        if self.contains(j) {
            self.coefficients[j - self.alpha].clone()
        } else {
            ExactRational::zero()
        }
    }

    pub fn coefficients(&self) -> &[ExactRational] {
        &self.coefficients
    }

    /// `(j, λ_j)` pairs in increasing `j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ExactRational)> {
        (self.alpha..=self.beta).zip(self.coefficients.iter())
    }

    pub fn total(&self) -> ExactRational {
        self.coefficients.iter().sum()
    }
}

/// Exact Schmidt coefficients of `|D_N^{M1}⟩` across the cut after qubit `k`.
///
/// `k = 0` and `k = N` are allowed and give the single coefficient 1.
pub fn schmidt_spectrum(qubits: usize, ups: usize, k: usize) -> Result<SchmidtSpectrum> {
    if qubits == 0 {
        return Err(Error::Argument("a Dicke state needs at least one qubit".into()));
    }
    let (alpha, beta) = j_range(qubits, ups, k)?;
    let total = choose_int(qubits as u64, ups as i64);
    let b = (qubits - k) as u64;
    let coefficients = (alpha..=beta)
        .map(|j| {
            let num = choose_int(k as u64, ups as i64 - j as i64) * choose_int(b, j as i64);
            ExactRational::new(num, total.clone())
        })
        .collect();
    Ok(SchmidtSpectrum {
        qubits,
        ups,
        k,
        alpha,
        beta,
        coefficients,
    })
}

#[derive(Serialize)]
struct CoefficientWire {
    j: usize,
    num: String,
    den: String,
}

impl Serialize for SchmidtSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coefficients: Vec<CoefficientWire> = self
            .iter()
            .map(|(j, l)| CoefficientWire {
                j,
                num: l.numer().to_string(),
                den: l.denom().to_string(),
            })
            .collect();
        let mut st = s.serialize_struct("SchmidtSpectrum", 3)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("coefficients", &coefficients)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn range_examples() {
        assert_eq!(j_range(4, 2, 1).unwrap(), (1, 2));
        assert_eq!(j_range(2, 1, 1).unwrap(), (0, 1));
        assert_eq!(j_range(5, 4, 2).unwrap(), (2, 3));
        assert!(j_range(3, 4, 1).is_err());
        assert!(j_range(3, 1, 4).is_err());
    }

    // Expected values frozen from the dense partial-trace oracle.
    #[test]
    fn spectrum_examples() {
        let s = schmidt_spectrum(2, 1, 1).unwrap();
        assert_eq!(s.coefficients(), &[r(1, 2), r(1, 2)]);
        let s = schmidt_spectrum(3, 1, 1).unwrap();
        assert_eq!((s.alpha(), s.beta()), (0, 1));
        assert_eq!(s.coefficients(), &[r(1, 3), r(2, 3)]);
        let s = schmidt_spectrum(4, 2, 2).unwrap();
        assert_eq!(s.coefficients(), &[r(1, 6), r(4, 6), r(1, 6)]);
    }

    #[test]
    fn edge_cuts_are_trivial() {
        for (n, m) in [(1, 0), (3, 1), (5, 5)] {
            for k in [0, n] {
                let s = schmidt_spectrum(n, m, k).unwrap();
                assert_eq!(s.coefficients(), &[ExactRational::one()]);
            }
        }
        assert!(schmidt_spectrum(0, 0, 0).is_err());
    }

    #[test]
    fn lambda_outside_range_is_zero() {
        let s = schmidt_spectrum(4, 2, 1).unwrap();
        assert!(s.lambda(0).is_zero());
        assert!(s.lambda(3).is_zero());
        assert_eq!(s.lambda(1), r(1, 2));
    }

    #[test]
    fn normalization_exhaustive() {
        for n in 1..=12 {
            for m in 0..=n {
                for k in 0..=n {
                    let s = schmidt_spectrum(n, m, k).unwrap();
                    assert!(s.alpha() <= s.beta());
                    assert!(s.total().is_one(), "N={n} M1={m} k={k}");
                    assert!(s.coefficients().iter().all(|l| l.is_positive()));
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = schmidt_spectrum(3, 1, 1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "alpha": 0,
                "beta": 1,
                "coefficients": [
                    {"j": 0, "num": "1", "den": "3"},
                    {"j": 1, "num": "2", "den": "3"}
                ]
            })
        );
    }

    fn sorted(s: &SchmidtSpectrum) -> Vec<ExactRational> {
        let mut v = s.coefficients().to_vec();
        v.sort();
        v
    }

    proptest! {
        #[test]
        fn spin_flip_preserves_multiset((n, m, k) in (1usize..=16).prop_flat_map(|n| (Just(n), 0..=n, 0..=n))) {
            let a = schmidt_spectrum(n, m, k).unwrap();
            let b = schmidt_spectrum(n, n - m, k).unwrap();
            prop_assert_eq!(sorted(&a), sorted(&b));
        }

        #[test]
        fn cut_side_symmetry((n, m, k) in (1usize..=16).prop_flat_map(|n| (Just(n), 0..=n, 0..=n))) {
            let a = schmidt_spectrum(n, m, k).unwrap();
            let b = schmidt_spectrum(n, m, n - k).unwrap();
            prop_assert_eq!(sorted(&a), sorted(&b));
        }
    }
}

//! Quasi-orthogonal complete complementary arrays.
//!
//! Pipeline: a set of `N` mutually orthogonal ±1 sequences of length `N²`
//! (rows of a Sylvester–Walsh matrix), one of them folded into an `N×N`
//! array, optional row decorrelation, and expansion into a normalized
//! amplitude state `Σ a_ij |i⟩|j⟩` that can be padded with redundancy,
//! parity and auxiliary qubits.
//!
//! Two decorrelation rules are offered. [`adjust_literal`] subtracts the
//! scalar projection coefficient from each off-diagonal entry, exactly as
//! written in the source formula. [`adjust_gram_schmidt`] performs classical
//! Gram–Schmidt on the rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aqecc::{build_qc_code, CaseId};
use crate::error::{Error, Result};
use crate::sim::{Circuit, PROBABILITY_FLOOR, STATEVECTOR_QUBIT_CAP};

pub const MAX_CCC_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSet1D {
    pub base_n: usize,
    pub sequences: Vec<Vec<f64>>,
}

/// `N` Walsh rows of order `N²`: rows `0, N, 2N, …`.
pub fn build_1d_ccc(n: usize) -> Result<SequenceSet1D> {
    if n == 0 || !n.is_power_of_two() || n > MAX_CCC_ORDER {
        return Err(Error::NotPowerOfTwo(n));
    }
    let len = n * n;
    let sequences = (0..n)
        .map(|j| {
            let r = j * n;
            (0..len)
                .map(|c| if (r & c).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    Ok(SequenceSet1D { base_n: n, sequences })
}

/// Square real array with its original entries and, once adjusted, the
/// decorrelated ones.
#[derive(Clone, Debug, PartialEq)]
pub struct QoArray {
    n: usize,
    original: Vec<f64>,
    adjusted: Option<Vec<f64>>,
}

impl QoArray {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotPerfectSquare(0));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Ok(Self {
            n,
            original: rows.concat(),
            adjusted: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn original(&self, i: usize, j: usize) -> f64 {
        self.original[i * self.n + j]
    }

    pub fn adjusted(&self, i: usize, j: usize) -> Option<f64> {
        self.adjusted.as_ref().map(|a| a[i * self.n + j])
    }

    pub fn is_adjusted(&self) -> bool {
        self.adjusted.is_some()
    }

    pub fn original_rows(&self) -> Vec<Vec<f64>> {
        self.original.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn adjusted_rows(&self) -> Result<Vec<Vec<f64>>> {
        let a = self.adjusted.as_ref().ok_or(Error::NotAdjusted)?;
        Ok(a.chunks(self.n).map(<[f64]>::to_vec).collect())
    }

    /// Row-major CSV of the original entries, or the adjusted ones.
    pub fn to_csv(&self, adjusted: bool) -> Result<String> {
        let rows = if adjusted { self.adjusted_rows()? } else { self.original_rows() };
        let mut out = String::new();
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        Ok(out)
    }
}

/// Row-major fold: entry `(i, j)` is `c[i·n + j]`.
pub fn reshape_2d(c: &[f64]) -> Result<QoArray> {
    let n = (c.len() as f64).sqrt().round() as usize;
    if c.is_empty() || n * n != c.len() {
        return Err(Error::NotPerfectSquare(c.len()));
    }
    Ok(QoArray {
        n,
        original: c.to_vec(),
        adjusted: None,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `a′_ij = a_ij − ⟨a_i, a_j⟩ / ⟨a_i, a_i⟩` for `i ≠ j`. Diagonal entries and
/// zero rows pass through.
pub fn adjust_literal(a: &QoArray) -> Result<QoArray> {
    if a.is_adjusted() {
        return Err(Error::InvalidArgument("array is already adjusted".into()));
    }
    let rows = a.original_rows();
    let mut out = a.original.clone();
    for i in 0..a.n {
        let norm = dot(&rows[i], &rows[i]);
        if norm == 0.0 {
            continue;
        }
        for j in (0..a.n).filter(|&j| j != i) {
            out[i * a.n + j] -= dot(&rows[i], &rows[j]) / norm;
        }
    }
    Ok(QoArray {
        adjusted: Some(out),
        ..a.clone()
    })
}

/// Classical Gram–Schmidt over rows in index order; zero rows are skipped
/// as projection targets.
pub fn adjust_gram_schmidt(a: &QoArray) -> QoArray {
    let mut done: Vec<Vec<f64>> = Vec::with_capacity(a.n);
    for row in a.original_rows() {
        let mut v = row.clone();
        for u in &done {
            let uu = dot(u, u);
            if uu == 0.0 {
                continue;
            }
            let c = dot(&row, u) / uu;
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        done.push(v);
    }
    QoArray {
        adjusted: Some(done.concat()),
        ..a.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl AmplitudeState {
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if num_qubits > STATEVECTOR_QUBIT_CAP {
            return Err(Error::DenseCapExceeded {
                requested: num_qubits,
                cap: STATEVECTOR_QUBIT_CAP,
            });
        }
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::LengthMismatch {
                expected: 1 << num_qubits,
                actual: amplitudes.len(),
            });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_json(&self) -> String {
        crate::json::to_sorted_json(&StateJson {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: StateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            j.num_qubits,
            j.amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        )
    }
}

/// `Σ a_ij |i⟩|j⟩ / ‖a‖` on `2·log₂ n` qubits, `|i⟩` on the leading half.
pub fn expand_state(a: &QoArray, use_adjusted: bool) -> Result<AmplitudeState> {
    if a.n < 2 || !a.n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(a.n));
    }
    let entries = if use_adjusted {
        a.adjusted.as_ref().ok_or(Error::NotAdjusted)?
    } else {
        &a.original
    };
    let norm = dot(entries, entries).sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let num_qubits = 2 * a.n.trailing_zeros() as usize;
    // index i·n + j is exactly |i⟩ ⊗ |j⟩ with i in the high bits
    let amps = entries.iter().map(|&v| Complex64::new(v / norm, 0.0)).collect();
    AmplitudeState::new(num_qubits, amps)
}

/// Appends `k + p + a` qubits in `|0⟩` after the existing ones.
pub fn add_redundancy(s: &AmplitudeState, k: usize, p: usize, a: usize) -> Result<AmplitudeState> {
    let extra = k + p + a;
    let total = s.num_qubits + extra;
    if total > STATEVECTOR_QUBIT_CAP {
        return Err(Error::DenseCapExceeded {
            requested: total,
            cap: STATEVECTOR_QUBIT_CAP,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
    for (i, &v) in s.amplitudes.iter().enumerate() {
        amps[i << extra] = v;
    }
    AmplitudeState::new(total, amps)
}

/// `|amplitude|²` for every basis state above the probability floor.
pub fn probability_amplitudes(s: &AmplitudeState) -> BTreeMap<String, f64> {
    s.amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .filter(|&(_, p)| p > PROBABILITY_FLOOR)
        .map(|(i, p)| (crate::sim::index_to_bitstring(i, s.num_qubits), p))
        .collect()
}

/// Encoding circuit for a case; shares the generator rows of the
/// quasi-cyclic code.
pub fn qoccc_encode(case: CaseId) -> Result<Circuit> {
    build_qc_code(case)?.encoding_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arr(rows: &[&[f64]]) -> QoArray {
        QoArray::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn ccc_examples() {
        assert_eq!(build_1d_ccc(1).unwrap().sequences, vec![vec![1.0]]);
        let s = build_1d_ccc(2).unwrap();
        assert_eq!(s.sequences.len(), 2);
        assert!(s.sequences.iter().all(|q| q.len() == 4 && q.iter().all(|v| v.abs() == 1.0)));
        assert_eq!(dot(&s.sequences[0], &s.sequences[1]), 0.0);
        assert_eq!(build_1d_ccc(3), Err(Error::NotPowerOfTwo(3)));
        assert!(build_1d_ccc(32).is_err());
        assert!(build_1d_ccc(0).is_err());
    }

    #[test]
    fn ccc_orthogonality_for_all_orders() {
        for n in [1, 2, 4, 8, 16] {
            let s = build_1d_ccc(n).unwrap();
            for (i, a) in s.sequences.iter().enumerate() {
                assert_eq!(dot(a, a), (n * n) as f64);
                for b in &s.sequences[i + 1..] {
                    assert_eq!(dot(a, b), 0.0);
                }
            }
        }
    }

    #[test]
    fn reshape_examples() {
        let a = reshape_2d(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.original_rows(), vec![vec![0.0, 1.0], vec![2.0, 3.0]]);
        assert_eq!(reshape_2d(&[0.0; 5]), Err(Error::NotPerfectSquare(5)));
        assert_eq!(reshape_2d(&[7.0]).unwrap().original_rows(), vec![vec![7.0]]);
    }

    #[test]
    fn literal_adjustment_examples() {
        let id = adjust_literal(&arr(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(id.adjusted_rows().unwrap(), id.original_rows());

        let ones = adjust_literal(&arr(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(ones.adjusted(0, 1), Some(0.0));
        assert_eq!(ones.adjusted(1, 0), Some(0.0));
        assert_eq!(ones.adjusted(0, 0), Some(1.0));

        let z = adjust_literal(&arr(&[&[0.0, 0.0], &[2.0, 3.0]])).unwrap();
        assert_eq!(z.adjusted_rows().unwrap()[0], vec![0.0, 0.0]);
        assert!(adjust_literal(&z).is_err());
    }

    #[test]
    fn gram_schmidt_examples() {
        let id = adjust_gram_schmidt(&arr(&[&[1.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(id.adjusted_rows().unwrap(), id.original_rows());
        let ones = adjust_gram_schmidt(&arr(&[&[1.0, 1.0], &[1.0, 1.0]]));
        assert_eq!(ones.adjusted_rows().unwrap()[1], vec![0.0, 0.0]);
        let shear = adjust_gram_schmidt(&arr(&[&[1.0, 0.0], &[1.0, 1.0]]));
        assert_eq!(shear.adjusted_rows().unwrap()[1], vec![0.0, 1.0]);
    }

    #[test]
    fn gram_schmidt_rows_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [4, 8] {
            for _ in 0..100 {
                let c: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let rows = adjust_gram_schmidt(&reshape_2d(&c).unwrap()).adjusted_rows().unwrap();
                for i in 0..n {
                    for j in i + 1..n {
                        assert!(dot(&rows[i], &rows[j]).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let s = expand_state(&arr(&[&[1.0, 0.0], &[0.0, 0.0]]), false).unwrap();
        assert_eq!(s.num_qubits(), 2);
        assert_eq!(probability_amplitudes(&s), BTreeMap::from([("00".to_string(), 1.0)]));

        let u = expand_state(&arr(&[&[1.0, 1.0], &[1.0, 1.0]]), false).unwrap();
        assert!(u.amplitudes().iter().all(|a| (a.re - 0.5).abs() < 1e-15 && a.im == 0.0));
        let p = probability_amplitudes(&u);
        assert_eq!(p.len(), 4);
        assert!(p.values().all(|v| (v - 0.25).abs() < 1e-15));

        assert_eq!(expand_state(&arr(&[&[0.0, 0.0], &[0.0, 0.0]]), false), Err(Error::ZeroNorm));
        assert_eq!(expand_state(&arr(&[&[1.0, 0.0], &[0.0, 1.0]]), true), Err(Error::NotAdjusted));
    }

    #[test]
    fn expansion_ordering_puts_row_index_first() {
        let s = expand_state(&arr(&[&[0.0, 0.0], &[3.0, 4.0]]), false).unwrap();
        let p = probability_amplitudes(&s);
        assert!((p["10"] - 0.36).abs() < 1e-12 && (p["11"] - 0.64).abs() < 1e-12);
    }

    #[test]
    fn redundancy_examples() {
        let (a, b) = (0.6, 0.8);
        let s = AmplitudeState::new(1, vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap();
        assert_eq!(add_redundancy(&s, 0, 0, 0).unwrap(), s);
        let r = add_redundancy(&s, 1, 0, 0).unwrap();
        let re: Vec<f64> = r.amplitudes().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![a, 0.0, b, 0.0]);

        let u = expand_state(&arr(&[&[1.0, 1.0], &[1.0, 1.0]]), false).unwrap();
        let r = add_redundancy(&u, 1, 1, 1).unwrap();
        assert_eq!(r.num_qubits(), 5);
        let nonzero: Vec<f64> = r.amplitudes().iter().filter(|c| c.norm() > 0.0).map(|c| c.re).collect();
        assert_eq!(nonzero, vec![0.5; 4]);
        assert!(matches!(add_redundancy(&u, 10, 4, 1), Err(Error::DenseCapExceeded { .. })));
    }

    #[test]
    fn state_json_round_trip() {
        let u = expand_state(&reshape_2d(&build_1d_ccc(4).unwrap().sequences[1]).unwrap(), false).unwrap();
        let text = u.to_json();
        assert!(text.starts_with("{\n  \"amplitudes\""));
        assert_eq!(AmplitudeState::from_json(&text).unwrap(), u);
        assert!(AmplitudeState::from_json(r#"{"num_qubits": 1, "amplitudes": [[1, 0]]}"#).is_err());
    }

    #[test]
    fn array_csv() {
        let a = adjust_literal(&arr(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(a.to_csv(false).unwrap(), "1,1\n1,1\n");
        assert_eq!(a.to_csv(true).unwrap(), "1,0\n0,1\n");
        assert!(arr(&[&[1.0]]).to_csv(true).is_err());
    }

    #[test]
    fn encode_circuits() {
        let c1 = qoccc_encode(CaseId::C1).unwrap();
        assert_eq!((c1.num_qubits(), c1.count("H")), (8, 3));
        let c3 = qoccc_encode(CaseId::C3).unwrap();
        assert_eq!((c3.num_qubits(), c3.count("H")), (13, 1));
        assert_eq!(qoccc_encode(CaseId::C4).unwrap().num_qubits(), 29);
        assert_eq!(qoccc_encode(CaseId::C2).unwrap().num_qubits(), 10);
    }

    fn square_entries() -> impl Strategy<Value = Vec<f64>> {
        prop_oneof![Just(2usize), Just(4), Just(8)]
            .prop_flat_map(|n| proptest::collection::vec(-1.0f64..1.0, n * n))
    }

    proptest! {
        #[test]
        fn probabilities_sum_to_one(c in square_entries()) {
            prop_assume!(c.iter().any(|v| v.abs() > 1e-6));
            let s = expand_state(&reshape_2d(&c).unwrap(), false).unwrap();
            let total: f64 = probability_amplitudes(&s).values().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!((s.norm() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn literal_is_idempotent_on_orthogonal_rows(c in square_entries()) {
            let orth = adjust_gram_schmidt(&reshape_2d(&c).unwrap()).adjusted_rows().unwrap();
            let first = adjust_literal(&QoArray::from_rows(&orth).unwrap()).unwrap();
            for (x, y) in first.adjusted_rows().unwrap().concat().iter().zip(orth.concat()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn redundancy_preserves_marginals(c in square_entries(), k in 0usize..3, p in 0usize..2, a in 0usize..2) {
            prop_assume!(c.iter().any(|v| v.abs() > 1e-6));
            let s = expand_state(&reshape_2d(&c).unwrap(), false).unwrap();
            let before = probability_amplitudes(&s);
            let after = probability_amplitudes(&add_redundancy(&s, k, p, a).unwrap());
            let mut marginal: BTreeMap<String, f64> = BTreeMap::new();
            for (key, v) in after {
                let (head, tail) = key.split_at(s.num_qubits());
                prop_assert!(tail.chars().all(|ch| ch == '0'));
                *marginal.entry(head.to_string()).or_default() += v;
            }
            prop_assert_eq!(marginal, before);
        }
    }
}

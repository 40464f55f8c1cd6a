//! Circuit simulation.
//!
//! Two independent engines share one [`Circuit`] description:
//!
//! - [`Tableau`]: a bit-packed stabilizer tableau for the Clifford gates
//!   `H`, `X`, `Z`, `CNOT` and `CZ`, cheap enough for the 29-qubit presets.
//! - [`StateVector`]: dense amplitudes for up to 16 qubits. It also accepts
//!   arbitrary one- and two-qubit matrices (renormalizing afterwards) and
//!   serves as the oracle for the tableau engine.
//!
//! Shot `k` of a run seeded with `s` draws all of its randomness from
//! [`shot_rng`]`(s, k)`, so counts do not depend on how shots are scheduled
//! across threads.

mod circuit;
mod counts;
mod statevector;
mod tableau;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use circuit::{Circuit, Gate};
pub use counts::Counts;
pub use statevector::{StateVector, STATEVECTOR_QUBIT_CAP};
pub use tableau::Tableau;

use crate::error::Result;

/// Probabilities below this are dropped from exact distributions.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

/// Counter-based generator for one shot: ChaCha8 keyed by `seed`, with the
/// shot index selecting the stream.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Samples `shots` measurements of every qubit with the stabilizer engine.
pub fn tableau_run(circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts> {
    let prepared = Tableau::from_circuit(circuit)?;
    let outcomes: Vec<String> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            prepared.clone().measure_all(|| rng.gen::<bool>()).to_string()
        })
        .collect();
    Ok(Counts::from_outcomes(outcomes))
}

/// Samples `shots` measurements from the exact state-vector distribution.
pub fn statevector_run(circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts> {
    let state = StateVector::from_circuit(circuit)?;
    let cumulative: Vec<f64> = state
        .probabilities()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("non-empty state");
    let n = state.num_qubits();
    let outcomes: Vec<String> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let u: f64 = shot_rng(seed, shot).gen::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            index_to_bitstring(idx, n)
        })
        .collect();
    Ok(Counts::from_outcomes(outcomes))
}

/// `|amplitude|²` per basis state from the state-vector engine.
pub fn exact_distribution(circuit: &Circuit) -> Result<BTreeMap<String, f64>> {
    let state = StateVector::from_circuit(circuit)?;
    let n = state.num_qubits();
    Ok(state
        .probabilities()
        .enumerate()
        .filter(|(_, p)| *p > PROBABILITY_FLOOR)
        .map(|(i, p)| (index_to_bitstring(i, n), p))
        .collect())
}

/// Outcome distribution derived analytically from the stabilizer tableau by
/// following every random measurement branch with probability 1/2.
pub fn tableau_distribution(circuit: &Circuit) -> Result<BTreeMap<String, f64>> {
    Ok(Tableau::from_circuit(circuit)?.outcome_distribution())
}

pub fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// Qubit 0 is the most significant bit of `idx` and the leftmost character.
pub(crate) fn index_to_bitstring(idx: usize, n: usize) -> String {
    (0..n)
        .map(|q| if (idx >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Random circuit over `{H, X, Z, CNOT, CZ}` with 1..=`max_qubits` qubits and
/// 0..=`max_gates` gates.
pub fn random_clifford_circuit<R: Rng>(rng: &mut R, max_qubits: usize, max_gates: usize) -> Circuit {
    let n = rng.gen_range(1..=max_qubits);
    let len = rng.gen_range(0..=max_gates);
    let mut c = Circuit::new(n).expect("at least one qubit");
    for _ in 0..len {
        let kind = if n == 1 { rng.gen_range(0..3) } else { rng.gen_range(0..5) };
        let a = rng.gen_range(0..n);
        let gate = match kind {
            0 => Gate::H(a),
            1 => Gate::X(a),
            2 => Gate::Z(a),
            _ => {
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                if kind == 3 {
                    Gate::Cnot { control: a, target: b }
                } else {
                    Gate::Cz(a, b)
                }
            }
        };
        c.push(gate).expect("indices in range");
    }
    c
}

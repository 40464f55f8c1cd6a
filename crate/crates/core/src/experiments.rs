//! End-to-end case pipelines.
//!
//! A case run prepares the uniform superposition of codewords, flips the
//! requested qubits with X gates, samples the register on the tableau
//! backend and decodes every measured bitstring classically. A shot counts
//! as corrected when the decoder attributes exactly the injected number of
//! flips to it and recovers the logical bits the shot carried before the
//! flips.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::aqecc::CaseId;
use crate::aqecc::{build_qc_code, QCCode};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::json::to_sorted_json;
use crate::sim::{tableau_run, Circuit, Counts};
use crate::stats::{rows_from_counts, summarize, StatsSummary};

/// Which construction a run is labelled with. Both families share the same
/// quasi-cyclic encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Qoccc,
    Aqecc,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Qoccc => "qoccc",
            Family::Aqecc => "aqecc",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qoccc" => Ok(Family::Qoccc),
            "aqecc" => Ok(Family::Aqecc),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected qoccc or aqecc)"))),
        }
    }
}

/// Encoder followed by one X per error position.
pub fn build_case_circuit(case: CaseId, _family: Family, error_positions: &[usize]) -> Result<Circuit> {
    let code = build_qc_code(case)?;
    circuit_for(&code, error_positions)
}

fn circuit_for(code: &QCCode, error_positions: &[usize]) -> Result<Circuit> {
    // validates range and duplicates
    Bits::from_positions(code.spec().m_physical, error_positions)?;
    let mut c = code.encoding_circuit()?;
    for &q in error_positions {
        c.x(q)?;
    }
    Ok(c)
}

/// Decodes one measured bitstring and reports whether it counts as
/// corrected under the injected `error_mask`.
pub fn classify_outcome(code: &QCCode, outcome: &Bits, error_mask: &Bits) -> Result<(Bits, bool)> {
    let decoded = code.decode(outcome)?;
    let ideal = code.decode(&(outcome ^ error_mask))?.logical;
    let ok = decoded.error_weight == error_mask.weight() && decoded.logical == ideal;
    Ok((decoded.logical, ok))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: CaseId,
    pub family: Family,
    pub shots: u64,
    pub seed: u64,
    pub error_positions: Vec<usize>,
    pub counts: Counts,
    /// Histogram of decoded logical bits.
    pub logical_counts: BTreeMap<String, u64>,
    pub corrected_shots: u64,
    pub uncorrected_shots: u64,
    pub stats: StatsSummary,
}

impl CaseReport {
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: CaseReport = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if r.corrected_shots + r.uncorrected_shots != r.counts.total_shots() {
            return Err(Error::Parse("corrected + uncorrected differs from total shots".into()));
        }
        Ok(r)
    }
}

pub fn run_case(
    case: CaseId,
    family: Family,
    shots: u64,
    seed: u64,
    error_positions: &[usize],
) -> Result<CaseReport> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let code = build_qc_code(case)?;
    let circuit = circuit_for(&code, error_positions)?;
    let counts = tableau_run(&circuit, shots, seed)?;
    let mask = Bits::from_positions(code.spec().m_physical, error_positions)?;

    let mut verdict: BTreeMap<&str, bool> = BTreeMap::new();
    let mut logical_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut corrected = 0;
    for (outcome, &n) in counts.counts() {
        let bits: Bits = outcome.parse()?;
        let (logical, ok) = classify_outcome(&code, &bits, &mask)?;
        *logical_counts.entry(logical.to_string()).or_default() += n;
        if ok {
            corrected += n;
        }
        verdict.insert(outcome.as_str(), ok);
    }
    let rows = rows_from_counts(&counts);
    let stats = summarize(&rows, |r| !verdict[r.outcome.as_str()])?;
    Ok(CaseReport {
        case,
        family,
        shots,
        seed,
        error_positions: error_positions.to_vec(),
        logical_counts,
        corrected_shots: corrected,
        uncorrected_shots: shots - corrected,
        stats,
        counts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTally {
    pub weight: usize,
    pub patterns: u64,
    pub patterns_corrected: u64,
    pub cases: u64,
    pub cases_corrected: u64,
}

/// Outcome of decoding `codeword ⊕ pattern` for every codeword and every
/// pattern of weight `1..=max_weight`. A pattern is corrected when every
/// codeword survives it; a case is one `(pattern, codeword)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub case: CaseId,
    pub max_weight: usize,
    pub capability: usize,
    pub codewords: u64,
    pub patterns_tested: u64,
    pub patterns_corrected: u64,
    pub cases_tested: u64,
    pub cases_corrected: u64,
    pub by_weight: Vec<WeightTally>,
}

impl SweepReport {
    /// True when every pattern up to `min(max_weight, P)` was corrected.
    pub fn within_capability_ok(&self) -> bool {
        self.by_weight
            .iter()
            .filter(|t| t.weight <= self.capability)
            .all(|t| t.patterns == t.patterns_corrected)
    }

    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn exhaustive_correction_sweep(case: CaseId, max_weight: usize) -> Result<SweepReport> {
    let code = build_qc_code(case)?;
    let m = code.spec().m_physical;
    if max_weight > m {
        return Err(Error::InvalidArgument(format!("max weight {max_weight} exceeds {m} qubits")));
    }
    let codebook = code.codebook();
    let mut by_weight = Vec::with_capacity(max_weight);
    for w in 1..=max_weight {
        let (patterns_corrected, cases_corrected) = combinations(m, w)
            .par_iter()
            .map(|positions| {
                let e = Bits::from_positions(m, positions).expect("combinations are distinct and in range");
                let ok = codebook
                    .iter()
                    .filter(|(logical, word)| {
                        code.decode(&(word ^ &e)).expect("length matches").logical == *logical
                    })
                    .count() as u64;
                (u64::from(ok == codebook.len() as u64), ok)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let patterns = binomial(m, w);
        by_weight.push(WeightTally {
            weight: w,
            patterns,
            patterns_corrected,
            cases: patterns * codebook.len() as u64,
            cases_corrected,
        });
    }
    Ok(SweepReport {
        case,
        max_weight,
        capability: code.spec().capability,
        codewords: codebook.len() as u64,
        patterns_tested: by_weight.iter().map(|t| t.patterns).sum(),
        patterns_corrected: by_weight.iter().map(|t| t.patterns_corrected).sum(),
        cases_tested: by_weight.iter().map(|t| t.cases).sum(),
        cases_corrected: by_weight.iter().map(|t| t.cases_corrected).sum(),
        by_weight,
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circuit_examples() {
        let c = build_case_circuit(CaseId::C1, Family::Qoccc, &[]).unwrap();
        assert_eq!((c.num_qubits(), c.count("H"), c.count("X")), (8, 3, 0));
        let c = build_case_circuit(CaseId::C3, Family::Aqecc, &[0, 12]).unwrap();
        assert_eq!((c.num_qubits(), c.count("X")), (13, 2));
        let c = build_case_circuit(CaseId::C4, Family::Aqecc, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(c.count("X"), 6);
        assert!(build_case_circuit(CaseId::C1, Family::Aqecc, &[8]).is_err());
        assert!(build_case_circuit(CaseId::C1, Family::Aqecc, &[2, 2]).is_err());
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        for (n, k) in [(29, 5), (13, 2), (10, 1)] {
            assert_eq!(combinations(n, k).len() as u64, binomial(n, k));
        }
    }

    #[test]
    fn single_error_runs_are_fully_corrected() {
        for q in 0..8 {
            let r = run_case(CaseId::C1, Family::Aqecc, 1024, 42, &[q]).unwrap();
            assert_eq!(r.corrected_shots, 1024, "position {q}");
            assert_eq!(r.stats.error_rate_percent, 0.0);
        }
    }

    #[test]
    fn c3_double_errors_corrected_and_c4_excess_is_not() {
        let r = run_case(CaseId::C3, Family::Aqecc, 1024, 42, &[0, 12]).unwrap();
        assert_eq!(r.corrected_shots, 1024);
        let r = run_case(CaseId::C4, Family::Aqecc, 1024, 42, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(r.uncorrected_shots > 0);
        assert_eq!(r.corrected_shots + r.uncorrected_shots, 1024);
        assert!(r.stats.error_rate_percent > 0.0);
    }

    #[test]
    fn spot_check_patterns_within_capability() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in CaseId::ALL {
            let spec = case.spec();
            for _ in 0..20 {
                let w = rng.gen_range(1..=spec.capability);
                let mut pos = sample(&mut rng, spec.m_physical, w).into_vec();
                pos.sort_unstable();
                let r = run_case(case, Family::Aqecc, 256, rng.gen(), &pos).unwrap();
                assert_eq!(r.corrected_shots, 256, "{case} {pos:?}");
            }
        }
    }

    #[test]
    fn error_free_runs_only_yield_codewords() {
        for case in CaseId::ALL {
            let code = build_qc_code(case).unwrap();
            let r = run_case(case, Family::Qoccc, 512, 3, &[]).unwrap();
            for outcome in r.counts.counts().keys() {
                assert!(code.is_codeword(&outcome.parse().unwrap()));
            }
            assert_eq!(r.corrected_shots, 512);
            if code.spec().n_logical == 1 {
                assert_eq!(r.logical_counts.len(), 2);
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let s = exhaustive_correction_sweep(CaseId::C1, 1).unwrap();
        assert_eq!((s.patterns_tested, s.patterns_corrected, s.cases_tested, s.cases_corrected), (8, 8, 64, 64));
        let s = exhaustive_correction_sweep(CaseId::C3, 2).unwrap();
        assert_eq!((s.patterns_tested, s.cases_tested, s.cases_corrected), (91, 182, 182));
        let s = exhaustive_correction_sweep(CaseId::C1, 2).unwrap();
        assert!(s.patterns_corrected < s.patterns_tested);
        assert!(s.within_capability_ok());
        assert_eq!(SweepReport::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn report_round_trips() {
        let r = run_case(CaseId::C2, Family::Qoccc, 64, 9, &[1]).unwrap();
        let text = r.to_json();
        assert_eq!(CaseReport::from_json(&text).unwrap(), r);
        assert_eq!(text, run_case(CaseId::C2, Family::Qoccc, 64, 9, &[1]).unwrap().to_json());
        assert!(run_case(CaseId::C2, Family::Qoccc, 0, 9, &[]).is_err());
    }
}

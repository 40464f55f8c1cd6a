//! Quasi-cyclic codes for the four preset cases.
//!
//! A code is generated by `N` rows of length `M`, row `j` being a base vector
//! cyclically shifted by `j·stride` positions. Single-logical presets use the
//! repetition-like base `1^d 0^(M-d)`. Multi-logical presets pick the first
//! base, in lexicographic order of its rendered string, whose rows are
//! independent and whose brute-force distance is exactly `d`.
//!
//! Only bit-flip errors are modelled. Checks are Z-type Paulis over a null
//! space basis of the generator rows and logical operators are X-type Paulis
//! over the rows themselves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::gf2;
use crate::json::to_sorted_json;
use crate::pauli::PauliOperator;
use crate::sim::Circuit;

/// Largest `N` for which `2^N` codewords are enumerated.
pub const MAX_ENUMERABLE_ROWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    C1,
    C2,
    C3,
    C4,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::C1, CaseId::C2, CaseId::C3, CaseId::C4];

    pub fn spec(self) -> CodeSpec {
        let (m, n, d) = match self {
            CaseId::C1 => (8, 3, 3),
            CaseId::C2 => (10, 4, 3),
            CaseId::C3 => (13, 1, 5),
            CaseId::C4 => (29, 1, 11),
        };
        CodeSpec::new(m, n, d).expect("preset parameters are consistent")
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseId::C1 => "C1",
            CaseId::C2 => "C2",
            CaseId::C3 => "C3",
            CaseId::C4 => "C4",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(CaseId::C1),
            "C2" => Ok(CaseId::C2),
            "C3" => Ok(CaseId::C3),
            "C4" => Ok(CaseId::C4),
            _ => Err(Error::Parse(format!("unknown case {s:?} (expected c1..c4)"))),
        }
    }
}

/// `[M, N, d]` parameters with correction capability `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub m_physical: usize,
    pub n_logical: usize,
    pub distance: usize,
    pub capability: usize,
}

impl CodeSpec {
    pub fn new(m_physical: usize, n_logical: usize, distance: usize) -> Result<Self> {
        if n_logical == 0 || n_logical > m_physical || distance == 0 || distance > m_physical {
            return Err(Error::InvalidCode(format!(
                "[{m_physical},{n_logical},{distance}] is not a valid parameter set"
            )));
        }
        Ok(Self {
            m_physical,
            n_logical,
            distance,
            capability: correctable_errors(distance),
        })
    }
}

/// `⌊(d − 1)/2⌋`.
pub fn correctable_errors(d: usize) -> usize {
    d.saturating_sub(1) / 2
}

/// Position `p` of the result holds position `(p + i) mod len` of `v`.
pub fn cyclic_shift(v: &Bits, i: usize) -> Bits {
    v.rotate_left(i)
}

/// Minimum weight over all nonzero GF(2) combinations of `rows`.
pub fn min_distance(rows: &[Bits]) -> Result<usize> {
    if rows.len() > MAX_ENUMERABLE_ROWS {
        return Err(Error::TooManyRows(rows.len()));
    }
    if rows.iter().all(Bits::is_zero) {
        return Err(Error::ZeroRows);
    }
    // Gray-code walk: each step toggles one row into the running sum.
    let mut acc = Bits::zeros(rows[0].len());
    let mut best = usize::MAX;
    for step in 1u64..(1 << rows.len()) {
        acc ^= &rows[step.trailing_zeros() as usize];
        let w = acc.weight();
        if w > 0 && w < best {
            best = w;
        }
    }
    // Dependent rows give a zero combination; that is not a codeword.
    Ok(if best == usize::MAX { 0 } else { best })
}

/// Result of minimum-distance decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub logical: Bits,
    pub codeword: Bits,
    pub error_weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCCode {
    spec: CodeSpec,
    base: Bits,
    stride: usize,
    rows: Vec<Bits>,
    checks: Vec<Bits>,
    /// `(logical, codeword)` for every logical index in increasing order.
    codebook: Vec<(Bits, Bits)>,
}

fn shifted_rows(base: &Bits, n: usize, stride: usize) -> Vec<Bits> {
    (0..n).map(|j| cyclic_shift(base, j * stride)).collect()
}

fn is_valid_generator(rows: &[Bits], d: usize) -> bool {
    gf2::rank(rows) == rows.len() && min_distance(rows).is_ok_and(|w| w == d)
}

pub fn build_qc_code(case: CaseId) -> Result<QCCode> {
    let spec = case.spec();
    build_code(spec)
}

/// Construction used by the presets, for arbitrary parameters.
pub fn build_code(spec: CodeSpec) -> Result<QCCode> {
    let (m, n, d) = (spec.m_physical, spec.n_logical, spec.distance);
    let stride = m / n;
    if n == 1 {
        let mut base = Bits::zeros(m);
        for i in 0..d {
            base.set(i, true);
        }
        return QCCode::from_parts(spec, base, stride);
    }
    if m > 32 {
        return Err(Error::InvalidCode(format!("base search over 2^{m} vectors is not supported")));
    }
    for index in 1u64..(1 << m) {
        let base = Bits::from_index(m, index);
        if is_valid_generator(&shifted_rows(&base, n, stride), d) {
            return QCCode::from_parts(spec, base, stride);
        }
    }
    Err(Error::SearchExhausted { m, n, d })
}

impl QCCode {
    /// Assembles and certifies a code from its base vector.
    pub fn from_parts(spec: CodeSpec, base: Bits, stride: usize) -> Result<Self> {
        if base.len() != spec.m_physical {
            return Err(Error::LengthMismatch {
                expected: spec.m_physical,
                actual: base.len(),
            });
        }
        if spec.n_logical > MAX_ENUMERABLE_ROWS {
            return Err(Error::TooManyRows(spec.n_logical));
        }
        let rows = shifted_rows(&base, spec.n_logical, stride);
        if gf2::rank(&rows) != rows.len() {
            return Err(Error::InvalidCode("generator rows are linearly dependent".into()));
        }
        let dist = min_distance(&rows)?;
        if dist != spec.distance {
            return Err(Error::InvalidCode(format!(
                "brute-force distance {dist} differs from declared {}",
                spec.distance
            )));
        }
        let checks = gf2::null_space(&rows, spec.m_physical);
        let codebook = (0..1u64 << spec.n_logical)
            .map(|i| {
                let logical = Bits::from_index(spec.n_logical, i);
                let codeword = combine(&rows, &logical);
                (logical, codeword)
            })
            .collect();
        Ok(Self {
            spec,
            base,
            stride,
            rows,
            checks,
            codebook,
        })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn base(&self) -> &Bits {
        &self.base
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn generator_rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn checks(&self) -> &[Bits] {
        &self.checks
    }

    /// Every `(logical, codeword)` pair, logical bits in increasing order.
    pub fn codebook(&self) -> &[(Bits, Bits)] {
        &self.codebook
    }

    pub fn is_codeword(&self, word: &Bits) -> bool {
        self.codebook.iter().any(|(_, c)| c == word)
    }

    pub fn encode_logical(&self, logical: &Bits) -> Result<Bits> {
        if logical.len() != self.spec.n_logical {
            return Err(Error::LengthMismatch {
                expected: self.spec.n_logical,
                actual: logical.len(),
            });
        }
        Ok(combine(&self.rows, logical))
    }

    /// Exhaustive minimum-distance decoding. Ties go to the lexicographically
    /// smallest logical bits, which is the first one met in the codebook.
    pub fn decode(&self, received: &Bits) -> Result<Decoded> {
        if received.len() != self.spec.m_physical {
            return Err(Error::LengthMismatch {
                expected: self.spec.m_physical,
                actual: received.len(),
            });
        }
        let (logical, codeword, error_weight) = self
            .codebook
            .iter()
            .map(|(l, c)| (l, c, c.hamming_distance(received)))
            .min_by_key(|&(_, _, w)| w)
            .expect("codebook is never empty");
        Ok(Decoded {
            logical: logical.clone(),
            codeword: codeword.clone(),
            error_weight,
        })
    }

    /// Z-type check operators, one per null-space vector.
    pub fn stabilizer_check_operators(&self) -> Vec<PauliOperator> {
        self.checks.iter().map(PauliOperator::z_type).collect()
    }

    /// X-type logical operators, one per generator row.
    pub fn logical_x_operators(&self) -> Vec<PauliOperator> {
        self.rows.iter().map(PauliOperator::x_type).collect()
    }

    /// Rows driving the encoder together with the position holding each
    /// logical qubit.
    ///
    /// Logical qubit `j` sits on a column where only row `j` is set, so an H
    /// there followed by CNOTs onto the rest of the row prepares the uniform
    /// superposition of codewords. Codes without such columns fall back to
    /// their reduced echelon rows, whose pivots always qualify.
    pub fn encoder_layout(&self) -> (Vec<Bits>, Vec<usize>) {
        let private = |rows: &[Bits]| -> Option<Vec<usize>> {
            rows.iter()
                .enumerate()
                .map(|(j, row)| {
                    row.iter_ones()
                        .find(|&c| rows.iter().enumerate().all(|(i, r)| i == j || !r.get(c)))
                })
                .collect()
        };
        match private(&self.rows) {
            Some(pivots) => (self.rows.clone(), pivots),
            None => gf2::rref(&self.rows),
        }
    }

    /// H on each logical position, then CNOT fan-out over each row.
    pub fn encoding_circuit(&self) -> Result<Circuit> {
        let (rows, pivots) = self.encoder_layout();
        let mut c = Circuit::new(self.spec.m_physical)?;
        for &p in &pivots {
            c.h(p)?;
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            for t in row.iter_ones().filter(|&t| t != p) {
                c.cnot(p, t)?;
            }
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        to_sorted_json(&CodeJson {
            m: self.spec.m_physical,
            n: self.spec.n_logical,
            d: self.spec.distance,
            p: self.spec.capability,
            stride: self.stride,
            base: self.base.clone(),
            rows: self.rows.clone(),
            checks: self.checks.clone(),
        })
    }

    /// Parses and re-certifies a code written by [`QCCode::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let j: CodeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let spec = CodeSpec::new(j.m, j.n, j.d)?;
        if spec.capability != j.p {
            return Err(Error::InvalidCode(format!("p = {} but d = {} gives {}", j.p, j.d, spec.capability)));
        }
        let code = Self::from_parts(spec, j.base, j.stride)?;
        if code.rows != j.rows {
            return Err(Error::InvalidCode("rows are not shifts of the base".into()));
        }
        if code.checks != j.checks {
            return Err(Error::InvalidCode("checks differ from the canonical null space".into()));
        }
        Ok(code)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    m: usize,
    n: usize,
    d: usize,
    p: usize,
    stride: usize,
    base: Bits,
    rows: Vec<Bits>,
    checks: Vec<Bits>,
}

fn combine(rows: &[Bits], logical: &Bits) -> Bits {
    let mut out = Bits::zeros(rows.first().map_or(0, Bits::len));
    for j in logical.iter_ones() {
        out ^= &rows[j];
    }
    out
}

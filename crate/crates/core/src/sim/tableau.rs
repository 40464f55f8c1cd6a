//! Aaronson–Gottesman stabilizer tableau with column-major bit planes.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers and row `2n` is
//! scratch space for deterministic measurements. For each qubit the X bits
//! of all `2n + 1` rows are packed into `words` machine words (likewise for
//! Z), so a gate touches one or two columns with word-wide operations. The
//! sign bits of all rows are packed the same way.

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::error::{Error, Result};

use super::{Circuit, Gate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<u64>,
}

#[inline]
fn get(plane: &[u64], words: usize, col: usize, row: usize) -> bool {
    (plane[col * words + row / 64] >> (row % 64)) & 1 == 1
}

#[inline]
fn flip(plane: &mut [u64], words: usize, col: usize, row: usize) {
    plane[col * words + row / 64] ^= 1u64 << (row % 64);
}

#[inline]
fn put(plane: &mut [u64], words: usize, col: usize, row: usize, value: bool) {
    let mask = 1u64 << (row % 64);
    let w = &mut plane[col * words + row / 64];
    if value {
        *w |= mask;
    } else {
        *w &= !mask;
    }
}

/// Exponent of `i` picked up when multiplying single-qubit Pauli `(x1, z1)`
/// onto `(x2, z2)`.
#[inline]
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl Tableau {
    /// `|0…0⟩`: destabilizer `i` is `X_i`, stabilizer `i` is `Z_i`.
    pub fn new(n: usize) -> Self {
        let words = (2 * n + 1).div_ceil(64);
        let mut t = Self {
            n,
            words,
            x: vec![0; n * words],
            z: vec![0; n * words],
            r: vec![0; words],
        };
        for q in 0..n {
            flip(&mut t.x, words, q, q);
            flip(&mut t.z, words, q, n + q);
        }
        t
    }

    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        let mut t = Self::new(circuit.num_qubits());
        for g in circuit.gates() {
            t.apply(g)?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::H(q) => self.h(q),
            Gate::X(q) => self.x_gate(q),
            Gate::Z(q) => self.z_gate(q),
            Gate::Cnot { control, target } => self.cnot(control, target),
            Gate::Cz(a, b) => self.cz(a, b),
            Gate::Matrix1 { .. } | Gate::Matrix2 { .. } => {
                return Err(Error::NonClifford(gate.name().to_string()))
            }
        }
        Ok(())
    }

    fn col(&self, q: usize) -> std::ops::Range<usize> {
        q * self.words..(q + 1) * self.words
    }

    pub fn h(&mut self, q: usize) {
        for (k, w) in self.col(q).enumerate() {
            self.r[k] ^= self.x[w] & self.z[w];
            std::mem::swap(&mut self.x[w], &mut self.z[w]);
        }
    }

    pub fn x_gate(&mut self, q: usize) {
        for (k, w) in self.col(q).enumerate() {
            self.r[k] ^= self.z[w];
        }
    }

    pub fn z_gate(&mut self, q: usize) {
        for (k, w) in self.col(q).enumerate() {
            self.r[k] ^= self.x[w];
        }
    }

    pub fn cnot(&mut self, a: usize, b: usize) {
        for k in 0..self.words {
            let (wa, wb) = (a * self.words + k, b * self.words + k);
            let (xa, za, xb, zb) = (self.x[wa], self.z[wa], self.x[wb], self.z[wb]);
            self.r[k] ^= xa & zb & !(xb ^ za);
            self.x[wb] = xb ^ xa;
            self.z[wa] = za ^ zb;
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        for k in 0..self.words {
            let (wa, wb) = (a * self.words + k, b * self.words + k);
            let (xa, za, xb, zb) = (self.x[wa], self.z[wa], self.x[wb], self.z[wb]);
            self.r[k] ^= xa & xb & (za ^ zb);
            self.z[wa] = za ^ xb;
            self.z[wb] = zb ^ xa;
        }
    }

    #[inline]
    fn sign(&self, row: usize) -> bool {
        (self.r[row / 64] >> (row % 64)) & 1 == 1
    }

    #[inline]
    fn set_sign(&mut self, row: usize, value: bool) {
        let mask = 1u64 << (row % 64);
        if value {
            self.r[row / 64] |= mask;
        } else {
            self.r[row / 64] &= !mask;
        }
    }

    /// Row `h` ← row `h` · row `i`, with exact sign tracking.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let mut e = 2 * self.sign(h) as i32 + 2 * self.sign(i) as i32;
        for q in 0..self.n {
            let (x1, z1) = (get(&self.x, w, q, i), get(&self.z, w, q, i));
            if !(x1 || z1) {
                continue;
            }
            let (x2, z2) = (get(&self.x, w, q, h), get(&self.z, w, q, h));
            e += phase_exponent(x1, z1, x2, z2);
            if x1 {
                flip(&mut self.x, w, q, h);
            }
            if z1 {
                flip(&mut self.z, w, q, h);
            }
        }
        self.set_sign(h, e.rem_euclid(4) == 2);
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for q in 0..self.n {
            let xv = get(&self.x, w, q, src);
            let zv = get(&self.z, w, q, src);
            put(&mut self.x, w, q, dst, xv);
            put(&mut self.z, w, q, dst, zv);
        }
        let s = self.sign(src);
        self.set_sign(dst, s);
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.words;
        for q in 0..self.n {
            put(&mut self.x, w, q, row, false);
            put(&mut self.z, w, q, row, false);
        }
        self.set_sign(row, false);
    }

    /// First stabilizer row with an X component on `q`, if any. Its
    /// existence means a Z measurement of `q` is uniformly random.
    fn random_pivot(&self, q: usize) -> Option<usize> {
        (self.n..2 * self.n).find(|&row| get(&self.x, self.words, q, row))
    }

    pub fn is_random(&self, q: usize) -> bool {
        self.random_pivot(q).is_some()
    }

    /// Measures qubit `q` in the Z basis, calling `coin` only when the outcome
    /// is random. Returns `(outcome, was_random)`.
    pub fn measure(&mut self, q: usize, coin: impl FnOnce() -> bool) -> (bool, bool) {
        let (n, w) = (self.n, self.words);
        if let Some(p) = self.random_pivot(q) {
            for i in 0..2 * n {
                if i != p && get(&self.x, w, q, i) {
                    self.rowsum(i, p);
                }
            }
            self.copy_row(p - n, p);
            self.clear_row(p);
            put(&mut self.z, w, q, p, true);
            let outcome = coin();
            self.set_sign(p, outcome);
            (outcome, true)
        } else {
            let scratch = 2 * n;
            self.clear_row(scratch);
            for i in 0..n {
                if get(&self.x, w, q, i) {
                    self.rowsum(scratch, i + n);
                }
            }
            (self.sign(scratch), false)
        }
    }

    /// Measures every qubit in order, consuming the tableau.
    pub fn measure_all(mut self, mut coin: impl FnMut() -> bool) -> Bits {
        let mut out = Bits::zeros(self.n);
        for q in 0..self.n {
            let (v, _) = self.measure(q, &mut coin);
            out.set(q, v);
        }
        out
    }

    /// Exact outcome distribution of measuring every qubit, obtained by
    /// branching on each random measurement with probability 1/2.
    pub fn outcome_distribution(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        let mut prefix = Bits::zeros(self.n);
        self.branch(0, 1.0, &mut prefix, &mut out);
        out
    }

    fn branch(&self, q: usize, prob: f64, prefix: &mut Bits, out: &mut BTreeMap<String, f64>) {
        if q == self.n {
            *out.entry(prefix.to_string()).or_insert(0.0) += prob;
            return;
        }
        if self.is_random(q) {
            for v in [false, true] {
                let mut t = self.clone();
                t.measure(q, || v);
                prefix.set(q, v);
                t.branch(q + 1, prob * 0.5, prefix, out);
            }
            prefix.set(q, false);
        } else {
            let mut t = self.clone();
            let (v, _) = t.measure(q, || unreachable!("deterministic measurement"));
            prefix.set(q, v);
            t.branch(q + 1, prob, prefix, out);
            prefix.set(q, false);
        }
    }

    /// Stabilizer generator `i` as text, e.g. `+XZ` or `-ZI` (debugging aid).
    pub fn stabilizer_string(&self, i: usize) -> String {
        let row = self.n + i;
        let mut s = String::from(if self.sign(row) { "-" } else { "+" });
        for q in 0..self.n {
            s.push(
                match (get(&self.x, self.words, q, row), get(&self.z, self.words, q, row)) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (false, true) => 'Z',
                    (true, true) => 'Y',
                },
            );
        }
        s
    }
}

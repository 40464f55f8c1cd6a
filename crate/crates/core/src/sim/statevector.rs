use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::DenseMatrix;

use super::{Circuit, Gate};

pub const STATEVECTOR_QUBIT_CAP: usize = 16;

/// Dense amplitudes; qubit 0 is the most significant bit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n: usize) -> Result<Self> {
        if n > STATEVECTOR_QUBIT_CAP {
            return Err(Error::DenseCapExceeded {
                requested: n,
                cap: STATEVECTOR_QUBIT_CAP,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        let mut s = Self::zero_state(circuit.num_qubits())?;
        for g in circuit.gates() {
            s.apply(g)?;
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.iter().map(|a| a.norm_sqr())
    }

    #[inline]
    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let m = self.mask(*q);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * s;
                        self.amps[i | m] = (a - b) * s;
                    }
                }
            }
            Gate::X(q) => {
                let m = self.mask(*q);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Z(q) => {
                let m = self.mask(*q);
                self.amps.iter_mut().enumerate().filter(|(i, _)| i & m != 0).for_each(|(_, a)| *a = -*a);
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (self.mask(*control), self.mask(*target));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mab = self.mask(*a) | self.mask(*b);
                self.amps
                    .iter_mut()
                    .enumerate()
                    .filter(|(i, _)| i & mab == mab)
                    .for_each(|(_, v)| *v = -*v);
            }
            Gate::Matrix1 { qubit, matrix } => {
                self.apply_one(*qubit, matrix);
                self.renormalize()?;
            }
            Gate::Matrix2 { qubits, matrix } => {
                self.apply_two(*qubits, matrix);
                self.renormalize()?;
            }
        }
        Ok(())
    }

    fn apply_one(&mut self, q: usize, m: &DenseMatrix) {
        let mq = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mq == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mq]);
                self.amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                self.amps[i | mq] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
    }

    fn apply_two(&mut self, (a, b): (usize, usize), m: &DenseMatrix) {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for i in 0..self.amps.len() {
            if i & (ma | mb) != 0 {
                continue;
            }
            let idx = [i, i | mb, i | ma, i | ma | mb];
            let v = idx.map(|k| self.amps[k]);
            for (row, &k) in idx.iter().enumerate() {
                self.amps[k] = (0..4).map(|col| m[(row, col)] * v[col]).sum();
            }
        }
    }

    /// Rescales to unit 2-norm; needed after non-unitary matrices.
    pub fn renormalize(&mut self) -> Result<()> {
        let norm = self.probabilities().sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(())
    }
}

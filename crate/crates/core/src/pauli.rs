//! Pauli operators over `n` qubits in symplectic form.
//!
//! An operator is stored as `i^k · ⊗_q Z^{z_q} X^{x_q}`: on every qubit the X
//! factor acts first and the Z factor second. A qubit with both bits set is
//! therefore `Z·X = iY`; the text form prints it as `Y` and folds the extra
//! `i` into the printed phase.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Element of `{+1, +i, -1, -i}`, stored as the exponent of `i`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "i",
            2 => "-",
            _ => "-i",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliOperator {
    x: Bits,
    z: Bits,
    phase: Phase,
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x: Bits::zeros(num_qubits),
            z: Bits::zeros(num_qubits),
            phase: Phase::ONE,
        }
    }

    pub fn new(x: Bits, z: Bits, phase: Phase) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                actual: z.len(),
            });
        }
        Ok(Self { x, z, phase })
    }

    /// Product of X on every set position of `support`.
    pub fn x_type(support: &Bits) -> Self {
        Self {
            x: support.clone(),
            z: Bits::zeros(support.len()),
            phase: Phase::ONE,
        }
    }

    /// Product of Z on every set position of `support`.
    pub fn z_type(support: &Bits) -> Self {
        Self {
            x: Bits::zeros(support.len()),
            z: support.clone(),
            phase: Phase::ONE,
        }
    }

    pub fn single_x(num_qubits: usize, qubit: usize) -> Self {
        let mut s = Bits::zeros(num_qubits);
        s.set(qubit, true);
        Self::x_type(&s)
    }

    pub fn single_z(num_qubits: usize, qubit: usize) -> Self {
        let mut s = Bits::zeros(num_qubits);
        s.set(qubit, true);
        Self::z_type(&s)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &Bits {
        &self.x
    }

    pub fn z_mask(&self) -> &Bits {
        &self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero() && self.phase == Phase::ONE
    }

    /// True when the operator is proportional to the identity.
    pub fn is_scalar(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check_width(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::QubitMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_width(other)?;
        // Z^a X^b Z^c X^d = (-1)^{b·c} Z^{a+c} X^{b+d}
        let swaps = self.x.overlap(&other.z) as u32;
        let k = self.phase.0 as u32 + other.phase.0 as u32 + 2 * swaps;
        Ok(PauliOperator {
            x: &self.x ^ &other.x,
            z: &self.z ^ &other.z,
            phase: Phase::from_exponent(k),
        })
    }

    /// True iff the two operators commute (even symplectic form).
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_width(other)?;
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    /// Action on a computational basis state: returns `(phase, bits ⊕ x)`.
    pub fn apply_to_basis(&self, bits: &Bits) -> Result<(Phase, Bits)> {
        if bits.len() != self.num_qubits() {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits(),
                actual: bits.len(),
            });
        }
        let flipped = bits ^ &self.x;
        let sign = if self.z.dot(&flipped) { 2 } else { 0 };
        Ok((Phase::from_exponent(self.phase.0 as u32 + sign), flipped))
    }

    fn y_count(&self) -> usize {
        self.x.overlap(&self.z)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let printed = Phase::from_exponent(self.phase.0 as u32 + self.y_count() as u32);
        f.write_str(printed.prefix())?;
        for q in 0..self.num_qubits() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `[+|-|i|-i]` followed by one letter from `IXYZ` per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let (printed, body) = if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, s)
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        let n = body.chars().count();
        let mut x = Bits::zeros(n);
        let mut z = Bits::zeros(n);
        let mut ys = 0u32;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                    ys += 1;
                }
                other => return Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
            }
        }
        // printed Y = -i·ZX, so each Y removes one factor of i from storage
        let k = printed.0 as u32 + 4 * ys - ys;
        Ok(PauliOperator {
            x,
            z,
            phase: Phase::from_exponent(k),
        })
    }
}

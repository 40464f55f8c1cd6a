use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::groups::DenseMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    /// Arbitrary 2×2 matrix; state-vector engine only.
    Matrix1 { qubit: usize, matrix: DenseMatrix },
    /// Arbitrary 4×4 matrix with basis index `2·bit(a) + bit(b)`; state-vector
    /// engine only.
    Matrix2 { qubits: (usize, usize), matrix: DenseMatrix },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Matrix1 { .. } => "U1",
            Gate::Matrix2 { .. } => "U2",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Matrix1 { qubit: q, .. } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) | Gate::Matrix2 { qubits: (a, b), .. } => vec![a, b],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::Matrix1 { .. } | Gate::Matrix2 { .. })
    }
}

/// Ordered gate list over `num_qubits` qubits, measured in full at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Grows the register to at least `num_qubits`.
    pub fn widen(&mut self, num_qubits: usize) -> Result<()> {
        if num_qubits < self.num_qubits {
            return Err(Error::InvalidArgument(format!(
                "cannot shrink a {}-qubit circuit to {num_qubits}",
                self.num_qubits
            )));
        }
        self.num_qubits = num_qubits;
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.num_qubits {
                return Err(Error::InvalidQubit {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::DuplicateQubit(qs[0]));
        }
        match &gate {
            Gate::Matrix1 { matrix, .. } if (matrix.rows(), matrix.cols()) != (2, 2) => {
                return Err(Error::InvalidArgument("one-qubit gate needs a 2x2 matrix".into()))
            }
            Gate::Matrix2 { matrix, .. } if (matrix.rows(), matrix.cols()) != (4, 4) => {
                return Err(Error::InvalidArgument("two-qubit gate needs a 4x4 matrix".into()))
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::H(q))
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::X(q))
    }

    pub fn z(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::Z(q))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Cnot { control, target })
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(Gate::Cz(a, b))
    }

    /// Number of gates with the given mnemonic (`"H"`, `"CNOT"`, …).
    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Text form: a `QUBITS n` header then one gate per line.
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "QUBITS {}", self.num_qubits);
        for g in &self.gates {
            let line = match *g {
                Gate::H(q) => format!("H {q}"),
                Gate::X(q) => format!("X {q}"),
                Gate::Z(q) => format!("Z {q}"),
                Gate::Cnot { control, target } => format!("CNOT {control} {target}"),
                Gate::Cz(a, b) => format!("CZ {a} {b}"),
                Gate::Matrix1 { .. } | Gate::Matrix2 { .. } => {
                    return Err(Error::InvalidArgument(format!(
                        "gate {} has no text form",
                        g.name()
                    )))
                }
            };
            let _ = writeln!(out, "{line}");
        }
        Ok(out)
    }
}

impl FromStr for Circuit {
    type Err = Error;

    /// Parses `H q`, `X q`, `Z q`, `CNOT c t`, `CZ a b` lines with `#`
    /// comments. An optional `QUBITS n` line fixes the register size;
    /// otherwise it is one past the largest index used.
    fn from_str(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap_or_default().to_ascii_uppercase();
            let args: Vec<usize> = parts
                .map(|p| {
                    p.parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad qubit index {p:?}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            let want = |k: usize| -> Result<()> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(Error::Parse(format!(
                        "line {}: {op} takes {k} argument(s), got {}",
                        lineno + 1,
                        args.len()
                    )))
                }
            };
            match op.as_str() {
                "QUBITS" => {
                    want(1)?;
                    declared = Some(args[0]);
                }
                "H" => {
                    want(1)?;
                    gates.push(Gate::H(args[0]));
                }
                "X" => {
                    want(1)?;
                    gates.push(Gate::X(args[0]));
                }
                "Z" => {
                    want(1)?;
                    gates.push(Gate::Z(args[0]));
                }
                "CNOT" | "CX" => {
                    want(2)?;
                    gates.push(Gate::Cnot {
                        control: args[0],
                        target: args[1],
                    });
                }
                "CZ" => {
                    want(2)?;
                    gates.push(Gate::Cz(args[0], args[1]));
                }
                other => return Err(Error::Parse(format!("line {}: unknown gate {other:?}", lineno + 1))),
            }
        }
        let used = gates
            .iter()
            .flat_map(Gate::qubits)
            .collect::<HashSet<_>>()
            .into_iter()
            .max()
            .map_or(1, |m| m + 1);
        let mut c = Circuit::new(declared.unwrap_or(used))?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

//! Constructive group-theoretic checks: orthogonal and unitary predicates,
//! Hadamard layers, near-orthogonal perturbations `I + εM`, the ε-perturbed
//! controlled-Z and cyclic group generation.

mod matrix;

pub use matrix::DenseMatrix;

use num_complex::Complex64;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`hadamard_layer`].
pub const HADAMARD_LAYER_CAP: usize = 12;

const SKEW_TOLERANCE: f64 = 1e-12;

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `‖AᵀA − I‖_max ≤ tol`.
pub fn is_orthogonal(a: &DenseMatrix, tol: f64) -> Result<bool> {
    let n = a.require_square()?;
    let gram = &a.transpose() * a;
    Ok(gram.approx_eq(&DenseMatrix::identity(n), tol))
}

/// `‖U†U − I‖_max ≤ tol`.
pub fn is_unitary(u: &DenseMatrix, tol: f64) -> Result<bool> {
    let n = u.require_square()?;
    let gram = &u.adjoint() * u;
    Ok(gram.approx_eq(&DenseMatrix::identity(n), tol))
}

/// Unitary within `tol` and `|det U − 1| ≤ tol`.
pub fn is_special_unitary(u: &DenseMatrix, tol: f64) -> Result<bool> {
    if !is_unitary(u, tol)? {
        return Ok(false);
    }
    Ok((u.determinant()? - re(1.0)).norm() <= tol)
}

pub fn hadamard_matrix() -> DenseMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DenseMatrix::from_real(2, 2, &[s, s, s, -s]).expect("2x2")
}

pub fn pauli_x_matrix() -> DenseMatrix {
    DenseMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_z_matrix() -> DenseMatrix {
    DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// `H ⊗ H ⊗ … ⊗ H` on `n` qubits.
pub fn hadamard_layer(n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("hadamard layer needs at least one qubit".into()));
    }
    if n > HADAMARD_LAYER_CAP {
        return Err(Error::DenseCapExceeded {
            requested: n,
            cap: HADAMARD_LAYER_CAP,
        });
    }
    let h = hadamard_matrix();
    Ok((1..n).fold(h.clone(), |acc, _| acc.kron(&h)))
}

/// `R = I + εM` for a skew-symmetric `M`.
pub fn build_quasi_rotation(epsilon: f64, m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.require_square()?;
    let skew = m.transpose().scale(re(-1.0));
    if !m.approx_eq(&skew, SKEW_TOLERANCE) {
        return Err(Error::NotSkewSymmetric);
    }
    Ok(&DenseMatrix::identity(n) + &m.scale(re(epsilon)))
}

/// `‖RᵀR − I‖₂`, the distance from orthogonality.
pub fn orthogonality_defect(r: &DenseMatrix) -> Result<f64> {
    let n = r.require_square()?;
    let gram = &r.transpose() * r;
    Ok((&gram - &DenseMatrix::identity(n)).spectral_norm())
}

/// Which of the two printed presentations of the ε-perturbed CZ to build.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CzForm {
    /// `I + ε Z⊗Z`, i.e. `diag(1+ε, 1−ε, 1−ε, 1+ε)`.
    Formula,
    /// Identity with `ε` at the (3,4) and (4,3) entries.
    Displayed,
}

pub fn cz_epsilon(epsilon: f64, form: CzForm) -> DenseMatrix {
    match form {
        CzForm::Formula => {
            let zz = pauli_z_matrix().kron(&pauli_z_matrix());
            &DenseMatrix::identity(4) + &zz.scale(re(epsilon))
        }
        CzForm::Displayed => {
            let mut m = DenseMatrix::identity(4);
            m[(2, 3)] = re(epsilon);
            m[(3, 2)] = re(epsilon);
            m
        }
    }
}

/// Elements a cyclic group can be generated from.
pub trait GroupElement: Clone {
    /// `self · other`.
    fn compose(&self, other: &Self) -> Self;
    /// Identity element of the same shape.
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
}

/// Position permutation: applying it to a sequence puts input position
/// `perm[p]` at output position `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Cyclic left shift by `k` positions.
    pub fn rotation(n: usize, k: usize) -> Self {
        Self((0..n).map(|p| (p + k) % n.max(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply_bits(&self, bits: &Bits) -> Result<Bits> {
        if bits.len() != self.0.len() {
            return Err(Error::LengthMismatch {
                expected: self.0.len(),
                actual: bits.len(),
            });
        }
        let mut out = Bits::zeros(bits.len());
        for (p, &src) in self.0.iter().enumerate() {
            out.set(p, bits.get(src));
        }
        Ok(out)
    }
}

impl GroupElement for Permutation {
    /// Applying `a.compose(b)` equals applying `b` then `a`.
    fn compose(&self, other: &Self) -> Self {
        Self(self.0.iter().map(|&p| other.0[p]).collect())
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.0.len())
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl GroupElement for DenseMatrix {
    fn compose(&self, other: &Self) -> Self {
        self * other
    }

    fn identity_like(&self) -> Self {
        DenseMatrix::identity(self.rows())
    }

    fn is_identity(&self) -> bool {
        self.is_square() && self.approx_eq(&DenseMatrix::identity(self.rows()), 1e-9)
    }
}

/// `{g⁰, g¹, …, g^{n−1}}` with verified order `n`.
#[derive(Clone, Debug)]
pub struct CyclicGroupSpec<G> {
    pub order: usize,
    pub generator: G,
    pub elements: Vec<G>,
}

const ORDER_SEARCH_LIMIT: usize = 1 << 16;

pub fn generate_cyclic_group<G: GroupElement>(g: &G, n: usize) -> Result<CyclicGroupSpec<G>> {
    if n == 0 {
        return Err(Error::InvalidArgument("group order must be positive".into()));
    }
    let mut elements = Vec::with_capacity(n);
    let mut power = g.identity_like();
    for j in 0..n {
        if j > 0 && power.is_identity() {
            return Err(Error::WrongOrder {
                requested: n,
                actual: j,
            });
        }
        elements.push(power.clone());
        power = power.compose(g);
    }
    if !power.is_identity() {
        // report the true order when it is small enough to find
        let mut actual = 0;
        for j in n + 1..=ORDER_SEARCH_LIMIT {
            power = power.compose(g);
            if power.is_identity() {
                actual = j;
                break;
            }
        }
        return Err(Error::WrongOrder { requested: n, actual });
    }
    Ok(CyclicGroupSpec {
        order: n,
        generator: g.clone(),
        elements,
    })
}

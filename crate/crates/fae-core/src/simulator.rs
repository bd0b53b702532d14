//! Dense statevector model of the oracle circuit.
//!
//! The register layout is |system (n qubits), ancilla_a, ancilla_r> with the
//! basis index sys * 4 + qa * 2 + qr, so "the measured pair reads 11" means
//! index & 3 == 3. The state preparation is chi = I_{2^n} (x) rot(theta_a)
//! (x) rot(asin(1/4)): the problem rotation on ancilla_a and the fixed
//! attenuation rotation on ancilla_r. The Grover iterate reflects about the
//! prepared state and the 11 subspace:
//!
//!   q = chi (i - 2|0><0|) chi^dag (i - 2 i_n (x) |11><11|)
//!
//! Everything is kept dense and complex; at n <= 3 the dimension is at most
//! 32 and clarity beats sparsity.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Attenuation rotation angle on ancilla_r, asin(1/4).
const THETA_R: f64 = 0.25268025514207865;

/// Dense complex state over 2^(n+2) basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> of the given dimension.
    pub fn basis_zero(dim: usize) -> Self {
        assert!(dim.is_power_of_two(), "dimension must be a power of two");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Probability that the two ancilla qubits measure 11.
    pub fn p11(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & 3 == 3)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Dense square matrix acting on a [`StateVector`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    dim: usize,
    mat: Vec<Complex64>,
}

impl UnitaryOp {
    pub fn identity(dim: usize) -> Self {
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryOp { dim, mat }
    }

    /// Diagonal matrix with entries from `diag`.
    pub fn diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut op = UnitaryOp {
            dim,
            mat: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for (i, &d) in diag.iter().enumerate() {
            op.mat[i * dim + i] = Complex64::new(d, 0.0);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[row * self.dim + col]
    }

    /// Kronecker product self (x) rhs.
    pub fn kron(&self, rhs: &UnitaryOp) -> UnitaryOp {
        let p = self.dim;
        let q = rhs.dim;
        let dim = p * q;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i1 in 0..p {
            for j1 in 0..p {
                let a = self.mat[i1 * p + j1];
                for i2 in 0..q {
                    for j2 in 0..q {
                        mat[(i1 * q + i2) * dim + (j1 * q + j2)] = a * rhs.mat[i2 * q + j2];
                    }
                }
            }
        }
        UnitaryOp { dim, mat }
    }

    /// Matrix product self * rhs (rhs acts first).
    pub fn compose(&self, rhs: &UnitaryOp) -> UnitaryOp {
        assert_eq!(self.dim, rhs.dim, "operator dimensions must match");
        let dim = self.dim;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.mat[i * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    mat[i * dim + j] += a * rhs.mat[k * dim + j];
                }
            }
        }
        UnitaryOp { dim, mat }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> UnitaryOp {
        let dim = self.dim;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                mat[j * dim + i] = self.mat[i * dim + j].conj();
            }
        }
        UnitaryOp { dim, mat }
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(self.dim, state.dim(), "operator and state dimensions must match");
        let amps = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.mat[i * self.dim + j] * state.amps[j])
                    .sum()
            })
            .collect();
        StateVector { amps }
    }

    /// Largest absolute deviation of self * self^dag from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.compose(&self.dagger());
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { 1.0 } else { 0.0 };
                let dev = (prod.mat[i * self.dim + j] - Complex64::new(expect, 0.0)).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// Real rotation by `angle`: |0> -> cos|0> + sin|1>.
fn rot(angle: f64) -> UnitaryOp {
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    UnitaryOp {
        dim: 2,
        mat: vec![
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    }
}

/// State preparation chi = I_{2^n} (x) rot(theta_a) (x) rot(asin(1/4)).
///
/// Supports n in 1..=3; larger registers add nothing to a product-form
/// circuit and are out of scope.
pub fn build_chi(n: usize, theta_a: f64) -> UnitaryOp {
    assert!((1..=3).contains(&n), "system register must have 1..=3 qubits");
    UnitaryOp::identity(1 << n).kron(&rot(theta_a)).kron(&rot(THETA_R))
}

/// Grover iterate for the given preparation.
pub fn build_grover(chi: &UnitaryOp) -> UnitaryOp {
    let dim = chi.dim();
    let mut refl_zero = vec![1.0; dim];
    refl_zero[0] = -1.0;
    let refl_good: Vec<f64> = (0..dim).map(|i| if i & 3 == 3 { -1.0 } else { 1.0 }).collect();
    chi.compose(&UnitaryOp::diagonal(&refl_zero))
        .compose(&chi.dagger())
        .compose(&UnitaryOp::diagonal(&refl_good))
}

/// Probability of reading 11 after m Grover applications to chi|0>.
pub fn p11_after(chi: &UnitaryOp, grover: &UnitaryOp, m: u64) -> f64 {
    let mut state = chi.apply(&StateVector::basis_zero(chi.dim()));
    for _ in 0..m {
        state = grover.apply(&state);
    }
    state.p11()
}

/// p11 after each of m = 0..=m_max Grover applications, evolved
/// incrementally.
pub fn p11_sweep(chi: &UnitaryOp, grover: &UnitaryOp, m_max: u64) -> Vec<f64> {
    let mut state = chi.apply(&StateVector::basis_zero(chi.dim()));
    let mut out = Vec::with_capacity(m_max as usize + 1);
    out.push(state.p11());
    for _ in 0..m_max {
        state = grover.apply(&state);
        out.push(state.p11());
    }
    out
}

//! Small dense-matrix utilities.
//!
//! These back the verification oracles in the test suite (building explicit
//! matrices for Pauli sums so circuit compilation and encodings can be
//! checked against brute force) and a few production paths that genuinely
//! need dense linear algebra: orbital-rotation exponentials and the dense
//! branch of the exact diagonalizer. Everything here is written for matrices
//! of at most a few thousand rows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fermion::{Axis, PauliString, PauliSum};
use crate::{Error, Result};

/// Largest qubit count for which [`pauli_sum_to_matrix`] will allocate.
/// At 12 qubits the matrix is 4096² complex entries (≈ 268 MB) — anything
/// beyond that is not a sensible oracle.
pub const DENSE_QUBIT_CAP: usize = 12;

/// Action of a Pauli string on a computational basis state (little-endian:
/// qubit `q` is bit `q` of the index). Returns the resulting basis index and
/// the accumulated phase, using `X|b⟩ = |b̄⟩`, `Y|0⟩ = i|1⟩`, `Y|1⟩ = -i|0⟩`,
/// `Z|b⟩ = (-1)^b |b⟩`.
pub fn pauli_string_action(p: &PauliString, basis: usize) -> (usize, Complex64) {
    let mut out = basis;
    let mut phase = Complex64::new(1.0, 0.0);
    for (q, axis) in p.iter() {
        let bit = (basis >> q) & 1;
        match axis {
            Axis::X => out ^= 1 << q,
            Axis::Y => {
                out ^= 1 << q;
                phase *= if bit == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                };
            }
            Axis::Z => {
                if bit == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (out, phase)
}

/// Explicit matrix of a Pauli sum on `n_qubits` qubits.
pub fn pauli_sum_to_matrix(sum: &PauliSum, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits > DENSE_QUBIT_CAP {
        return Err(Error::QubitCapExceeded {
            requested: n_qubits,
            cap: DENSE_QUBIT_CAP,
        });
    }
    if let Some(max_q) = sum.max_qubit() {
        if max_q >= n_qubits {
            return Err(Error::InvalidOperator(format!(
                "operator acts on qubit {max_q} but the register has {n_qubits} qubits"
            )));
        }
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (p, coeff) in sum.iter() {
        for col in 0..dim {
            let (row, phase) = pauli_string_action(p, col);
            m[(row, col)] += coeff * phase;
        }
    }
    Ok(m)
}

/// Apply a Pauli sum to a dense statevector: `out = sum · v`.
pub fn apply_pauli_sum(sum: &PauliSum, v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut out = DVector::<Complex64>::zeros(v.len());
    for (p, coeff) in sum.iter() {
        for col in 0..v.len() {
            let (row, phase) = pauli_string_action(p, col);
            out[row] += coeff * phase * v[col];
        }
    }
    out
}

/// Matrix exponential of a real antisymmetric matrix via scaling-and-squaring
/// on a Taylor series. The result is orthogonal with determinant +1.
pub fn expm_antisymmetric(k: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !k.is_square() {
        return Err(Error::InvalidOperator(
            "matrix exponential needs a square matrix".into(),
        ));
    }
    let n = k.nrows();
    let asym = (k + k.transpose()).amax();
    if asym > 1e-10 {
        return Err(Error::InvalidOperator(format!(
            "matrix is not antisymmetric: max |K + Kᵀ| = {asym:.3e}"
        )));
    }
    let norm = k.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = k / 2f64.powi(squarings as i32);
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for order in 1..=24 {
        term = (&term * &scaled) / order as f64;
        result += &term;
        if term.amax() < 1e-17 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    debug_assert!(
        (result.transpose() * &result - DMatrix::<f64>::identity(n, n)).amax() < 1e-10,
        "exponential of an antisymmetric matrix must be orthogonal"
    );
    Ok(result)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn symmetric_eigen_ascending(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigenpairs(eig.eigenvalues, eig.eigenvectors)
}

/// Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen_ascending(
    m: &DMatrix<Complex64>,
) -> (DVector<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigenpairs(eig.eigenvalues, eig.eigenvectors)
}

fn sort_eigenpairs<T: nalgebra::Scalar + Copy>(
    values: DVector<f64>,
    vectors: DMatrix<T>,
) -> (DVector<f64>, DMatrix<T>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = DVector::from_iterator(values.len(), order.iter().map(|&i| values[i]));
    let sorted_vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| vectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (sorted_values, sorted_vectors)
}

/// Lowest eigenpair of a Hermitian Pauli sum on `n_qubits` qubits, by full
/// dense diagonalization. Oracle-grade: exact but exponential in qubits.
pub fn ground_state_dense(
    sum: &PauliSum,
    n_qubits: usize,
) -> Result<(f64, DVector<Complex64>)> {
    let m = pauli_sum_to_matrix(sum, n_qubits)?;
    let (values, vectors) = hermitian_eigen_ascending(&m);
    Ok((values[0], vectors.column(0).into_owned()))
}

/// Dense unitary `exp(-i·θ/2 · G)` of a Hermitian generator, via
/// eigendecomposition. Oracle for compiled generator rotations.
pub fn generator_unitary(
    generator: &PauliSum,
    theta: f64,
    n_qubits: usize,
) -> Result<DMatrix<Complex64>> {
    if !generator.is_hermitian(1e-12) {
        return Err(Error::InvalidOperator(
            "generator exponential needs a Hermitian generator".into(),
        ));
    }
    let m = pauli_sum_to_matrix(generator, n_qubits)?;
    let (values, vectors) = hermitian_eigen_ascending(&m);
    let dim = m.nrows();
    let mut exp_diag = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        exp_diag[(i, i)] = Complex64::from_polar(1.0, -theta / 2.0 * values[i]);
    }
    Ok(&vectors * exp_diag * vectors.adjoint())
}

//! Exact diagonalization within an (N, S_z) occupation sector.
//!
//! The reference oracle for every energy error and fidelity in this crate.
//! Determinants are occupation bitmasks over spin modes (mode `2k` = orbital
//! `k` spin-up, `2k+1` spin-down, matching the qubit convention), so a sector
//! eigenvector embeds directly into the dense statevector. Matrix elements
//! come from applying second-quantized operator products to bitmasks — no
//! Pauli detour — and the lowest eigenpair is found densely below
//! [`DENSE_EIGEN_CAP`] and by Lanczos iteration above it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fermion::{hamiltonian_fermion_terms, FermionOp};
use crate::integrals::MolecularIntegrals;
use crate::parallel::maybe_par_map_range;
use crate::sim::StateVector;
use crate::{Error, Result};

/// Largest sector dimension the solver will attempt.
pub const SECTOR_DIM_CAP: usize = 2_000_000;

/// Sector dimension above which the solver switches from dense
/// diagonalization to Lanczos iteration.
pub const DENSE_EIGEN_CAP: usize = 2_000;

/// Eigenvalues within this spread of the lowest are treated as one
/// degenerate ground space.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// All determinants (occupation bitmasks) with fixed electron count and spin
/// projection, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    /// Twice the spin projection (integer also for odd electron counts).
    pub two_s_z: i32,
    masks: Vec<u64>,
}

/// Subsets of `0..n` with `k` elements, as bitmasks over the chosen bits.
fn combinations(n: usize, k: usize, bit_of: impl Fn(usize) -> u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, u64)> = vec![(0, k, 0)];
    while let Some((start, remaining, acc)) = stack.pop() {
        if remaining == 0 {
            out.push(acc);
            continue;
        }
        // Reverse order keeps the DFS emitting—after the final sort—the
        // same result regardless of traversal details.
        for i in (start..=(n - remaining)).rev() {
            stack.push((i + 1, remaining - 1, acc | bit_of(i)));
        }
    }
    out
}

impl SectorBasis {
    pub fn new(n_orbitals: usize, n_electrons: usize, two_s_z: i32) -> Result<SectorBasis> {
        if n_orbitals > 32 {
            return Err(Error::InvalidConfig(format!(
                "sector basis supports at most 32 orbitals, got {n_orbitals}"
            )));
        }
        let n_i = n_electrons as i64;
        let up2 = n_i + two_s_z as i64;
        if up2 % 2 != 0 || up2 < 0 || up2 / 2 > n_orbitals as i64 {
            return Err(Error::InvalidConfig(format!(
                "no determinants with {n_electrons} electrons and 2·S_z = {two_s_z}"
            )));
        }
        let n_up = (up2 / 2) as usize;
        let n_down = n_electrons
            .checked_sub(n_up)
            .filter(|&d| d <= n_orbitals)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "no determinants with {n_electrons} electrons and 2·S_z = {two_s_z}"
                ))
            })?;
        let ups = combinations(n_orbitals, n_up, |orb| 1u64 << (2 * orb));
        let downs = combinations(n_orbitals, n_down, |orb| 1u64 << (2 * orb + 1));
        let mut masks = Vec::with_capacity(ups.len() * downs.len());
        for &u in &ups {
            for &d in &downs {
                masks.push(u | d);
            }
        }
        masks.sort_unstable();
        if masks.len() > SECTOR_DIM_CAP {
            return Err(Error::SectorCapExceeded {
                dim: masks.len(),
                cap: SECTOR_DIM_CAP,
            });
        }
        Ok(SectorBasis {
            n_orbitals,
            n_electrons,
            two_s_z,
            masks,
        })
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.masks.binary_search(&mask).ok()
    }
}

/// One Hamiltonian term prepared for row-major application: the adjoint
/// operator product (so `⟨i|T|j⟩` is found by applying `T†` to `|i⟩`) plus
/// the real coefficient.
#[derive(Debug, Clone)]
struct RowTerm {
    coeff: f64,
    adjoint_ops: Vec<FermionOp>,
}

/// Sector-restricted molecular Hamiltonian with a deterministic, row-parallel
/// matrix-vector product. Caches the dense matrix below [`DENSE_EIGEN_CAP`].
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    pub basis: SectorBasis,
    pub offset: f64,
    terms: Vec<RowTerm>,
    dense: Option<DMatrix<f64>>,
}

impl SectorHamiltonian {
    pub fn new(
        ints: &MolecularIntegrals,
        n_electrons: usize,
        two_s_z: i32,
    ) -> Result<SectorHamiltonian> {
        ints.check_finite()?;
        let basis = SectorBasis::new(ints.n_orbitals, n_electrons, two_s_z)?;
        let terms: Vec<RowTerm> = hamiltonian_fermion_terms(ints)
            .into_iter()
            .map(|t| RowTerm {
                coeff: t.coeff.re,
                adjoint_ops: t
                    .ops
                    .iter()
                    .rev()
                    .map(|op| FermionOp {
                        mode: op.mode,
                        dagger: !op.dagger,
                    })
                    .collect(),
            })
            .collect();
        let mut h = SectorHamiltonian {
            basis,
            offset: ints.e_offset,
            terms,
            dense: None,
        };
        if h.basis.dim() <= DENSE_EIGEN_CAP {
            h.dense = Some(h.build_dense());
        }
        Ok(h)
    }

    /// Row `i` of the Hamiltonian as sparse `(column, value)` pairs
    /// (duplicates possible; callers accumulate).
    fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let mask = self.basis.masks()[i];
        self.terms.iter().filter_map(move |term| {
            let (out, sign) = crate::fermion::apply_ops_to_mask(mask, &term.adjoint_ops)?;
            let j = self.basis.index_of(out)?;
            Some((j, sign * term.coeff))
        })
    }

    fn build_dense(&self) -> DMatrix<f64> {
        let dim = self.basis.dim();
        let rows = maybe_par_map_range(dim, |i| {
            let mut row = vec![0.0f64; dim];
            for (j, v) in self.row_entries(i) {
                row[j] += v;
            }
            row[i] += self.offset;
            row
        });
        DMatrix::from_fn(dim, dim, |i, j| rows[i][j])
    }

    /// Dense matrix (built on demand above the cache threshold).
    pub fn dense(&self) -> DMatrix<f64> {
        match &self.dense {
            Some(m) => m.clone(),
            None => self.build_dense(),
        }
    }

    /// `w = H·v`, deterministic and parallel over rows.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.basis.dim(), "sector dimension mismatch");
        if let Some(m) = &self.dense {
            let dim = v.len();
            return maybe_par_map_range(dim, |i| {
                let mut acc = 0.0;
                for j in 0..dim {
                    acc += m[(i, j)] * v[j];
                }
                acc
            });
        }
        maybe_par_map_range(v.len(), |i| {
            let mut acc = self.offset * v[i];
            for (j, h_ij) in self.row_entries(i) {
                acc += h_ij * v[j];
            }
            acc
        })
    }

    /// Project a dense statevector onto this sector. Returns the sector
    /// coefficients and the leaked probability weight outside the sector.
    pub fn project(&self, psi: &StateVector) -> Result<(Vec<Complex64>, f64)> {
        if psi.n_qubits() != 2 * self.basis.n_orbitals {
            return Err(Error::DimensionMismatch {
                left: psi.n_qubits(),
                right: 2 * self.basis.n_orbitals,
            });
        }
        let coeffs: Vec<Complex64> = self
            .basis
            .masks()
            .iter()
            .map(|&m| psi.amplitude(m as usize))
            .collect();
        let inside: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        Ok((coeffs, 1.0 - inside))
    }

    /// Energy `⟨ψ|H|ψ⟩` of a state that lies in this sector (leakage above
    /// 1e-10 is an error — the quadratic form would silently drop weight).
    pub fn energy_of(&self, psi: &StateVector) -> Result<f64> {
        let (v, leakage) = self.project(psi)?;
        if leakage > 1e-10 {
            return Err(Error::MixedSector { leakage });
        }
        let dim = v.len();
        let e = if let Some(m) = &self.dense {
            let mut acc = 0.0;
            for i in 0..dim {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    row += m[(i, j)] * v[j];
                }
                acc += (v[i].conj() * row).re;
            }
            acc
        } else {
            let mut acc = self.offset * v.iter().map(|c| c.norm_sqr()).sum::<f64>();
            for i in 0..dim {
                let mut row = Complex64::new(0.0, 0.0);
                for (j, h_ij) in self.row_entries(i) {
                    row += h_ij * v[j];
                }
                acc += (v[i].conj() * row).re;
            }
            acc
        };
        Ok(e)
    }
}

/// Lanczos iteration with full reorthogonalization: lowest eigenpair of the
/// implicit symmetric operator `matvec`.
fn lanczos_lowest(
    matvec: impl Fn(&[f64]) -> Vec<f64>,
    dim: usize,
    max_iters: usize,
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    // Deterministic pseudo-random start vector with no zero entries.
    let mut q: Vec<f64> = (0..dim)
        .map(|i| 0.7 + (i as f64 * 0.37).sin() + 0.01 * i as f64 / dim as f64)
        .collect();
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= norm);

    let mut vectors: Vec<Vec<f64>> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last_eig = f64::INFINITY;

    for it in 0..max_iters {
        let qk = vectors.last().expect("at least the start vector");
        let mut w = matvec(qk);
        let alpha: f64 = w.iter().zip(qk).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        // w ← w − α·q_k − β·q_{k−1}, then full reorthogonalization.
        for (wi, qi) in w.iter_mut().zip(qk) {
            *wi -= alpha * qi;
        }
        if let Some(beta) = betas.last() {
            let prev = &vectors[vectors.len() - 2];
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta * pi;
            }
        }
        for v in &vectors {
            let overlap: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= overlap * vi;
            }
        }
        // Tridiagonal eigenproblem for the current Krylov space.
        let k = alphas.len();
        let mut tri = DMatrix::<f64>::zeros(k, k);
        for (i, &a) in alphas.iter().enumerate() {
            tri[(i, i)] = a;
        }
        for (i, &b) in betas.iter().enumerate() {
            tri[(i, i + 1)] = b;
            tri[(i + 1, i)] = b;
        }
        let (evals, evecs) = crate::dense::symmetric_eigen_ascending(&tri);
        let lowest = evals[0];
        let converged = (last_eig - lowest).abs() < tol && it > 2;
        last_eig = lowest;

        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if converged || beta < 1e-12 || it + 1 == max_iters || k == dim {
            // Assemble the Ritz vector in the original basis.
            let mut ground = vec![0.0f64; dim];
            for (i, v) in vectors.iter().enumerate() {
                let c = evecs[(i, 0)];
                for (g, vi) in ground.iter_mut().zip(v) {
                    *g += c * vi;
                }
            }
            let n = ground.iter().map(|x| x * x).sum::<f64>().sqrt();
            ground.iter_mut().for_each(|x| *x /= n);
            if !(converged || beta < 1e-12 || k == dim) {
                return Err(Error::EigenFailure(format!(
                    "Lanczos did not converge in {max_iters} iterations \
                     (last change {:.3e})",
                    (last_eig - lowest).abs()
                )));
            }
            return Ok((lowest, ground));
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        vectors.push(w);
    }
    unreachable!("loop exits via the convergence branch");
}

/// Ground state of a sector Hamiltonian: energy and the degenerate ground
/// space embedded as dense statevectors. Above [`DENSE_EIGEN_CAP`] only a
/// single Lanczos eigenpair is computed (degeneracy detection needs the
/// dense spectrum).
#[derive(Debug, Clone)]
pub struct FciGround {
    pub energy: f64,
    /// One representative ground state in the full 2^(2n) space.
    pub state: StateVector,
    /// Orthonormal basis of the degenerate ground space (contains `state`).
    pub ground_space: Vec<StateVector>,
}

fn embed(basis: &SectorBasis, coeffs: &[f64]) -> Result<StateVector> {
    let n_qubits = 2 * basis.n_orbitals;
    if n_qubits > crate::sim::DEFAULT_QUBIT_CAP {
        return Err(Error::QubitCapExceeded {
            requested: n_qubits,
            cap: crate::sim::DEFAULT_QUBIT_CAP,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (&mask, &c) in basis.masks().iter().zip(coeffs) {
        amps[mask as usize] = Complex64::new(c, 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// Lowest eigenpair of the molecular Hamiltonian in the given sector.
pub fn fci_ground_state(
    ints: &MolecularIntegrals,
    n_electrons: usize,
    two_s_z: i32,
) -> Result<FciGround> {
    let h = SectorHamiltonian::new(ints, n_electrons, two_s_z)?;
    fci_ground_of(&h)
}

/// [`fci_ground_state`] on an already-built sector Hamiltonian.
pub fn fci_ground_of(h: &SectorHamiltonian) -> Result<FciGround> {
    let dim = h.basis.dim();
    if dim == 0 {
        return Err(Error::InvalidConfig("empty sector".into()));
    }
    if dim <= DENSE_EIGEN_CAP {
        let (evals, evecs) = crate::dense::symmetric_eigen_ascending(&h.dense());
        let energy = evals[0];
        let mut ground_space = Vec::new();
        for i in 0..dim {
            if evals[i] - energy > DEGENERACY_TOL {
                break;
            }
            let coeffs: Vec<f64> = evecs.column(i).iter().copied().collect();
            ground_space.push(embed(&h.basis, &coeffs)?);
        }
        Ok(FciGround {
            energy,
            state: ground_space[0].clone(),
            ground_space,
        })
    } else {
        let (energy, coeffs) = lanczos_lowest(|v| h.matvec(v), dim, 300, 1e-11)?;
        let state = embed(&h.basis, &coeffs)?;
        Ok(FciGround {
            energy,
            state: state.clone(),
            ground_space: vec![state],
        })
    }
}

/// Fidelity against a (possibly degenerate) ground space: the projector
/// overlap `Σ_i |⟨ψ|φ_i⟩|²`.
pub fn ground_space_fidelity(psi: &StateVector, ground: &FciGround) -> Result<f64> {
    let mut total = 0.0;
    for phi in &ground.ground_space {
        total += crate::sim::fidelity(psi, phi)?;
    }
    Ok(total.min(1.0))
}

/// Energy difference in millihartree.
pub fn error_millihartree(e: f64, e_ref: f64) -> f64 {
    (e - e_ref) * 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{expm_antisymmetric, pauli_sum_to_matrix};
    use crate::fermion::build_qubit_hamiltonian;
    use crate::integrals::{rotate_integrals, sample_integrals};
    use approx::assert_abs_diff_eq;

    #[test]
    fn sector_sizes_are_binomial_products() {
        // C(6,3)² = 400.
        let b = SectorBasis::new(6, 6, 0).unwrap();
        assert_eq!(b.dim(), 400);
        // C(3,2)·C(3,1) = 9 for N=3, 2S_z = 1.
        let b = SectorBasis::new(3, 3, 1).unwrap();
        assert_eq!(b.dim(), 9);
        // Masks have the right occupation and spin balance, no duplicates.
        let mut seen = std::collections::BTreeSet::new();
        for &m in b.masks() {
            assert_eq!(m.count_ones(), 3);
            let up = (m & 0x5555_5555_5555_5555).count_ones() as i32;
            let down = (m & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i32;
            assert_eq!(up - down, 1);
            assert!(seen.insert(m));
        }
        // Impossible sectors are rejected.
        assert!(SectorBasis::new(2, 3, 0).is_err());
        assert!(SectorBasis::new(2, 5, 1).is_err());
    }

    #[test]
    fn single_configuration_energy_is_closed_form() {
        let mut ints = MolecularIntegrals::zeros(1, 2);
        ints.h[(0, 0)] = -1.25;
        ints.set_g(0, 0, 0, 0, 0.66);
        ints.e_offset = 0.71;
        let ground = fci_ground_state(&ints, 2, 0).unwrap();
        assert_abs_diff_eq!(
            ground.energy,
            2.0 * (-1.25) + 0.66 + 0.71,
            epsilon = 1e-12
        );
        // The state is the doubly occupied determinant |11⟩.
        assert_abs_diff_eq!(ground.state.amplitude(0b11).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sector_solver_matches_full_dense_diagonalization() {
        let ints = sample_integrals(3);
        let h_pauli = build_qubit_hamiltonian(&ints).unwrap();
        let full = pauli_sum_to_matrix(&h_pauli, 6).unwrap();
        let h_sector = SectorHamiltonian::new(&ints, 4, 0).unwrap();
        // H is block-diagonal over sectors, so the sector block is just the
        // submatrix on the sector's basis masks.
        let masks = h_sector.basis.masks();
        let dim = masks.len();
        let block = DMatrix::from_fn(dim, dim, |i, j| {
            full[(masks[i] as usize, masks[j] as usize)].re
        });
        assert_abs_diff_eq!(h_sector.dense(), block, epsilon = 1e-10);
        let (evals, _) = crate::dense::symmetric_eigen_ascending(&block);
        let ground = fci_ground_of(&h_sector).unwrap();
        assert_abs_diff_eq!(ground.energy, evals[0], epsilon = 1e-10);
    }

    #[test]
    fn energy_is_invariant_under_orbital_rotation() {
        let ints = sample_integrals(3);
        let e0 = fci_ground_state(&ints, 4, 0).unwrap().energy;
        let mut k = DMatrix::<f64>::zeros(3, 3);
        k[(0, 1)] = 0.41;
        k[(1, 0)] = -0.41;
        k[(0, 2)] = -0.9;
        k[(2, 0)] = 0.9;
        k[(1, 2)] = 0.23;
        k[(2, 1)] = -0.23;
        let u = expm_antisymmetric(&k).unwrap();
        let rotated = rotate_integrals(&ints, &u).unwrap();
        let e1 = fci_ground_state(&rotated, 4, 0).unwrap().energy;
        assert_abs_diff_eq!(e0, e1, epsilon = 1e-9);
    }

    #[test]
    fn lanczos_agrees_with_dense_on_small_sectors() {
        let ints = sample_integrals(3);
        let h = SectorHamiltonian::new(&ints, 3, 1).unwrap();
        let dense_ground = fci_ground_of(&h).unwrap();
        let (e_lanczos, v) = lanczos_lowest(|x| h.matvec(x), h.basis.dim(), 200, 1e-12).unwrap();
        assert_abs_diff_eq!(e_lanczos, dense_ground.energy, epsilon = 1e-9);
        let embedded = embed(&h.basis, &v).unwrap();
        assert!(
            ground_space_fidelity(&embedded, &dense_ground).unwrap() > 1.0 - 1e-8,
            "Lanczos vector must lie in the ground space"
        );
    }

    #[test]
    fn sector_energy_fast_path_matches_pauli_expectation() {
        let ints = sample_integrals(2);
        let h_pauli = build_qubit_hamiltonian(&ints).unwrap();
        let h_sector = SectorHamiltonian::new(&ints, 2, 0).unwrap();
        let masks = [0b0011usize, 0b1100, 0b0110, 0b1001];
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        for (i, &m) in masks.iter().enumerate() {
            amps[m] = Complex64::new(0.4 - 0.15 * i as f64, 0.1 * i as f64);
        }
        let psi = StateVector::from_amplitudes(amps).unwrap();
        let fast = h_sector.energy_of(&psi).unwrap();
        let slow = crate::sim::expectation(&psi, &h_pauli).unwrap();
        assert_abs_diff_eq!(fast, slow, epsilon = 1e-10);
        // States outside the sector are rejected.
        let outside = StateVector::basis(4, 0b0111).unwrap();
        assert!(h_sector.energy_of(&outside).is_err());
    }

    #[test]
    fn millihartree_conversion() {
        assert_abs_diff_eq!(error_millihartree(-2.0, -2.0), 0.0);
        assert_abs_diff_eq!(error_millihartree(-2.151, -2.167), 16.0, epsilon = 1e-9);
        assert!(error_millihartree(-2.2, -2.1) < 0.0);
    }
}

//! Second-quantized fermionic operators and the Jordan-Wigner encoding.
//!
//! Mode convention (fixed crate-wide): spatial orbital `k` owns spin-up mode
//! `2k` and spin-down mode `2k+1`; each mode maps to the qubit of the same
//! index, with `|1⟩` = occupied so the number operator is `n̂ = (I - Z)/2`.
//!
//! Encoding: `a_i ↦ σ⁺_i ∏_{k<i} Z_k` and `a†_i ↦ σ⁻_i ∏_{k<i} Z_k` with
//! `σ± = (X ± iY)/2`. The pairing of the annihilator with `σ⁺` (rather than
//! `σ⁻`) is a documented convention choice; it is what makes `|1⟩` the
//! occupied state under the basis ordering used by the simulator.

pub mod pauli;

pub use pauli::{Axis, PauliString, PauliSum};

use num_complex::Complex64;

use crate::integrals::MolecularIntegrals;
use crate::{Error, Result};

/// One creation (`dagger = true`) or annihilation operator on a spin mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermionOp {
    pub mode: usize,
    pub dagger: bool,
}

/// A scalar multiple of an ordered product of fermionic operators.
/// `ops[0]` is the leftmost factor (applied last to a ket).
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coeff: Complex64,
    pub ops: Vec<FermionOp>,
}

impl FermionTerm {
    /// Build from `(mode, dagger)` pairs in operator (left-to-right) order.
    pub fn new(coeff: Complex64, ops: &[(usize, bool)]) -> FermionTerm {
        FermionTerm {
            coeff,
            ops: ops
                .iter()
                .map(|&(mode, dagger)| FermionOp { mode, dagger })
                .collect(),
        }
    }
}

/// Jordan-Wigner image of a single fermionic operator.
fn jw_single(op: FermionOp) -> PauliSum {
    let z_chain = |tail: Axis| -> PauliString {
        let mut factors: Vec<(usize, Axis)> = (0..op.mode).map(|k| (k, Axis::Z)).collect();
        factors.push((op.mode, tail));
        PauliString::new(factors).expect("distinct qubits by construction")
    };
    // σ± = (X ± iY)/2; the annihilator carries σ⁺, the creator σ⁻.
    let y_sign = if op.dagger { -0.5 } else { 0.5 };
    PauliSum::from_terms([
        (z_chain(Axis::X), Complex64::new(0.5, 0.0)),
        (z_chain(Axis::Y), Complex64::new(0.0, y_sign)),
    ])
}

/// Jordan-Wigner encoding of one term: the operator product is expanded and
/// simplified through exact Pauli algebra.
pub fn jordan_wigner(term: &FermionTerm) -> PauliSum {
    let mut acc = PauliSum::identity(term.coeff);
    for &op in &term.ops {
        acc = acc.mul(&jw_single(op));
    }
    acc
}

/// Jordan-Wigner encoding of a sum of terms.
pub fn jordan_wigner_sum(terms: &[FermionTerm]) -> PauliSum {
    let mut acc = PauliSum::zero();
    for term in terms {
        acc = acc.add(&jordan_wigner(term));
    }
    acc
}

/// Number operator `n̂_mode = (I - Z_mode)/2` as a Pauli sum.
pub fn number_operator(mode: usize) -> PauliSum {
    PauliSum::from_terms([
        (PauliString::identity(), Complex64::new(0.5, 0.0)),
        (PauliString::single(mode, Axis::Z), Complex64::new(-0.5, 0.0)),
    ])
}

/// Total number operator `N̂ = Σ_i n̂_i` over `n_modes` modes.
pub fn total_number_operator(n_modes: usize) -> PauliSum {
    let mut acc = PauliSum::zero();
    for mode in 0..n_modes {
        acc = acc.add(&number_operator(mode));
    }
    acc
}

/// Total spin projection `Ŝ_z = ½ Σ_k (n̂_{2k} - n̂_{2k+1})`.
pub fn total_sz_operator(n_modes: usize) -> PauliSum {
    let mut acc = PauliSum::zero();
    for mode in 0..n_modes {
        let sign = if mode % 2 == 0 { 0.5 } else { -0.5 };
        acc = acc.add(&number_operator(mode).scaled(Complex64::new(sign, 0.0)));
    }
    acc
}

/// Excitation generators available to the circuit builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excitation {
    /// Spatial single excitation `i → j`, both spins:
    /// `G = i Σ_σ (a†_{iσ} a_{jσ} - a†_{jσ} a_{iσ})` — the Hermitian Givens
    /// generator whose rotation mixes orbitals with a real angle.
    Single { i: usize, j: usize },
    /// Pair double excitation (pair transfer `i → j`):
    /// `G = i (a†_{2j} a_{2i} a†_{2j+1} a_{2i+1} - h.c.)`.
    PairDouble { i: usize, j: usize },
}

/// Fermionic terms of an excitation generator (before encoding).
pub fn excitation_generator_terms(ex: Excitation) -> Result<Vec<FermionTerm>> {
    let i_unit = Complex64::new(0.0, 1.0);
    match ex {
        Excitation::Single { i, j } => {
            if i == j {
                return Err(Error::InvalidOperator(
                    "single excitation needs two distinct orbitals".into(),
                ));
            }
            let mut terms = Vec::new();
            for spin in 0..2 {
                let (mi, mj) = (2 * i + spin, 2 * j + spin);
                terms.push(FermionTerm::new(i_unit, &[(mi, true), (mj, false)]));
                terms.push(FermionTerm::new(-i_unit, &[(mj, true), (mi, false)]));
            }
            Ok(terms)
        }
        Excitation::PairDouble { i, j } => {
            if i == j {
                return Err(Error::InvalidOperator(
                    "pair excitation needs two distinct orbitals".into(),
                ));
            }
            let fwd = [
                (2 * j, true),
                (2 * i, false),
                (2 * j + 1, true),
                (2 * i + 1, false),
            ];
            let rev = [
                (2 * i + 1, true),
                (2 * j + 1, false),
                (2 * i, true),
                (2 * j, false),
            ];
            Ok(vec![
                FermionTerm::new(i_unit, &fwd),
                FermionTerm::new(-i_unit, &rev),
            ])
        }
    }
}

/// Hermitian excitation generator as a Pauli sum.
pub fn excitation_generator(ex: Excitation) -> Result<PauliSum> {
    let encoded = jordan_wigner_sum(&excitation_generator_terms(ex)?);
    debug_assert!(encoded.is_hermitian(1e-12));
    Ok(encoded)
}

/// Fermionic terms of the molecular Hamiltonian (without the scalar offset):
/// `H = Σ h_kl Σ_σ a†_{kσ} a_{lσ}
///    + ½ Σ (kl|mn) Σ_{στ} a†_{kσ} a†_{mτ} a_{nτ} a_{lσ}`.
pub fn hamiltonian_fermion_terms(ints: &MolecularIntegrals) -> Vec<FermionTerm> {
    let n = ints.n_orbitals;
    let mut terms = Vec::new();
    for k in 0..n {
        for l in 0..n {
            let hkl = ints.h[(k, l)];
            if hkl == 0.0 {
                continue;
            }
            for spin in 0..2 {
                terms.push(FermionTerm::new(
                    Complex64::new(hkl, 0.0),
                    &[(2 * k + spin, true), (2 * l + spin, false)],
                ));
            }
        }
    }
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for q in 0..n {
                    let gv = ints.g(k, l, m, q);
                    if gv == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            terms.push(FermionTerm::new(
                                Complex64::new(0.5 * gv, 0.0),
                                &[
                                    (2 * k + sigma, true),
                                    (2 * m + tau, true),
                                    (2 * q + tau, false),
                                    (2 * l + sigma, false),
                                ],
                            ));
                        }
                    }
                }
            }
        }
    }
    terms
}

/// Jordan-Wigner-encoded molecular Hamiltonian including the scalar offset.
pub fn build_qubit_hamiltonian(ints: &MolecularIntegrals) -> Result<PauliSum> {
    ints.check_finite()?;
    let mut h = jordan_wigner_sum(&hamiltonian_fermion_terms(ints));
    h = h.add(&PauliSum::identity(Complex64::new(ints.e_offset, 0.0)));
    debug_assert!(
        h.is_hermitian(1e-12),
        "encoded Hamiltonian must be Hermitian, max imag {}",
        h.max_imag()
    );
    Ok(h)
}

/// Apply an ordered operator product to an occupation bitmask.
///
/// Returns the resulting mask and fermionic sign, or `None` if the product
/// annihilates the state. `ops[0]` is the leftmost operator, so factors act
/// right to left. The sign convention matches the Jordan-Wigner encoding
/// above: each operator on mode `i` picks up `(-1)^(number of occupied modes
/// below i)`.
pub fn apply_ops_to_mask(mask: u64, ops: &[FermionOp]) -> Option<(u64, f64)> {
    let mut m = mask;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = m & bit != 0;
        if op.dagger == occupied {
            return None; // create on occupied / annihilate on empty
        }
        if (m & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        m ^= bit;
    }
    Some((m, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn annihilator_is_sigma_plus() {
        let a0 = jordan_wigner(&FermionTerm::new(c(1.0, 0.0), &[(0, false)]));
        assert_eq!(a0.coeff(&"X0".parse().unwrap()), c(0.5, 0.0));
        assert_eq!(a0.coeff(&"Y0".parse().unwrap()), c(0.0, 0.5));
        // a₂ carries the Z parity chain.
        let a2 = jordan_wigner(&FermionTerm::new(c(1.0, 0.0), &[(2, false)]));
        assert_eq!(a2.coeff(&"Z0 Z1 X2".parse().unwrap()), c(0.5, 0.0));
    }

    #[test]
    fn number_operator_identity() {
        let n0 = jordan_wigner(&FermionTerm::new(c(1.0, 0.0), &[(0, true), (0, false)]));
        assert_eq!(n0, number_operator(0));
        // a†a + aa† = 1.
        let anti = n0.add(&jordan_wigner(&FermionTerm::new(
            c(1.0, 0.0),
            &[(0, false), (0, true)],
        )));
        assert_eq!(anti, PauliSum::identity(c(1.0, 0.0)));
    }

    #[test]
    fn jw_respects_adjoints() {
        let t = FermionTerm::new(c(0.3, -0.2), &[(1, true), (3, false)]);
        let t_dag = FermionTerm::new(c(0.3, 0.2), &[(3, true), (1, false)]);
        assert_eq!(jordan_wigner(&t).adjoint(), jordan_wigner(&t_dag));
    }

    #[test]
    fn double_creation_on_same_mode_vanishes() {
        let t = FermionTerm::new(c(1.0, 0.0), &[(0, true), (0, true)]);
        assert!(jordan_wigner(&t).is_zero());
    }

    #[test]
    fn single_generator_has_xzy_yzx_patterns() {
        let g = excitation_generator(Excitation::Single { i: 0, j: 1 }).unwrap();
        assert_eq!(g.num_terms(), 4);
        // Spin-up block on qubits 0..=2, spin-down block on 1..=3.
        let xzy: PauliString = "X0 Z1 Y2".parse().unwrap();
        let yzx: PauliString = "Y0 Z1 X2".parse().unwrap();
        assert!(g.coeff(&xzy).norm() > 0.0);
        assert!(g.coeff(&yzx).norm() > 0.0);
        assert!(g.coeff(&"X1 Z2 Y3".parse().unwrap()).norm() > 0.0);
        for (p, coeff) in g.iter() {
            assert_eq!(p.weight(), 3);
            assert_abs_diff_eq!(coeff.norm(), 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(coeff.im, 0.0, epsilon = 1e-14);
        }
        assert!(excitation_generator(Excitation::Single { i: 2, j: 2 }).is_err());
    }

    #[test]
    fn pair_generator_is_weight_four_and_conserving() {
        let g = excitation_generator(Excitation::PairDouble { i: 1, j: 2 }).unwrap();
        assert_eq!(g.num_terms(), 8);
        for (p, coeff) in g.iter() {
            assert_eq!(p.weight(), 4);
            assert_abs_diff_eq!(coeff.norm(), 0.125, epsilon = 1e-14);
        }
        // Commutes with N̂ and Ŝ_z.
        let n_tot = total_number_operator(6);
        let sz = total_sz_operator(6);
        assert!(g.commutator(&n_tot).coeff_norm() < 1e-12);
        assert!(g.commutator(&sz).coeff_norm() < 1e-12);
    }

    #[test]
    fn single_generator_conserves_number_and_spin() {
        let g = excitation_generator(Excitation::Single { i: 0, j: 2 }).unwrap();
        let n_tot = total_number_operator(6);
        let sz = total_sz_operator(6);
        assert!(g.commutator(&n_tot).coeff_norm() < 1e-12);
        assert!(g.commutator(&sz).coeff_norm() < 1e-12);
        assert!(g.is_hermitian(1e-14));
    }

    #[test]
    fn hamiltonian_of_zero_integrals_is_offset() {
        let mut ints = MolecularIntegrals::zeros(2, 2);
        ints.e_offset = 0.25;
        let h = build_qubit_hamiltonian(&ints).unwrap();
        assert_eq!(h, PauliSum::identity(c(0.25, 0.0)));
    }

    #[test]
    fn one_orbital_hamiltonian_is_two_number_operators() {
        let mut ints = MolecularIntegrals::zeros(1, 2);
        let eps = -0.47;
        ints.h[(0, 0)] = eps;
        let h = build_qubit_hamiltonian(&ints).unwrap();
        let expected = number_operator(0)
            .add(&number_operator(1))
            .scaled(c(eps, 0.0));
        assert_eq!(h, expected);
    }

    #[test]
    fn hamiltonian_rejects_non_finite_integrals() {
        let mut ints = MolecularIntegrals::zeros(1, 2);
        ints.h[(0, 0)] = f64::NAN;
        assert!(build_qubit_hamiltonian(&ints).is_err());
    }

    #[test]
    fn mask_application_matches_parity_convention() {
        // a₀ on |0011⟩-style mask {0,1}: no occupied modes below 0 → +.
        let a0 = [FermionOp { mode: 0, dagger: false }];
        assert_eq!(apply_ops_to_mask(0b11, &a0), Some((0b10, 1.0)));
        // a₁ on mask {0,1}: one occupied mode below → sign flips.
        let a1 = [FermionOp { mode: 1, dagger: false }];
        assert_eq!(apply_ops_to_mask(0b11, &a1), Some((0b01, -1.0)));
        // Annihilating an empty mode gives None; creating an occupied too.
        assert_eq!(apply_ops_to_mask(0b10, &a0), None);
        let c0 = [FermionOp { mode: 0, dagger: true }];
        assert_eq!(apply_ops_to_mask(0b11, &c0), None);
        // Rightmost operator acts first: a†₀ a₀ is the number operator.
        let n0 = [
            FermionOp { mode: 0, dagger: true },
            FermionOp { mode: 0, dagger: false },
        ];
        assert_eq!(apply_ops_to_mask(0b01, &n0), Some((0b01, 1.0)));
        assert_eq!(apply_ops_to_mask(0b00, &n0), None);
    }

    #[test]
    fn pair_transfer_sign_is_positive() {
        // The coupling ⟨{2,3}|a†₂a†₃a₁a₀|{0,1}⟩ fixing the dissociation
        // ground-state sign: must be +1 under this crate's conventions.
        let ops = [
            FermionOp { mode: 2, dagger: true },
            FermionOp { mode: 3, dagger: true },
            FermionOp { mode: 1, dagger: false },
            FermionOp { mode: 0, dagger: false },
        ];
        assert_eq!(apply_ops_to_mask(0b0011, &ops), Some((0b1100, 1.0)));
    }
}

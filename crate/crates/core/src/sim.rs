//! Dense statevector simulation and observable evaluation.
//!
//! Basis convention (pinned by tests): indices are little-endian, qubit 0 is
//! the least significant bit, and `|1⟩` on qubit `q` means spin mode `q` is
//! occupied. The ket `|1100⟩` written mode-0-first therefore has qubits 0 and
//! 1 set and is basis index 3.
//!
//! Composite gates (CRY, Pauli rotations) are applied directly through
//! closed-form kernels rather than via their primitive decompositions, so
//! simulation cost tracks the logical gate count.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::dense::pauli_string_action;
use crate::fermion::{FermionOp, PauliString, PauliSum};
use crate::integrals::MolecularIntegrals;
use crate::parallel::maybe_par_map;
use crate::{Error, Result};

/// Default qubit cap for dense simulation (2^16 amplitudes ≈ 1 MB).
pub const DEFAULT_QUBIT_CAP: usize = 16;

/// Dense quantum state over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<StateVector> {
        let dim = 1usize
            .checked_shl(n_qubits as u32)
            .filter(|_| n_qubits <= 60)
            .ok_or(Error::QubitCapExceeded {
                requested: n_qubits,
                cap: DEFAULT_QUBIT_CAP,
            })?;
        if index >= dim {
            return Err(Error::InvalidCircuit(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// The all-zeros state `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> StateVector {
        StateVector::basis(n_qubits, 0).expect("index 0 always valid")
    }

    /// Build from raw amplitudes (length must be a power of two); the vector
    /// is normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector> {
        let dim = amps.len();
        if dim == 0 || dim & (dim - 1) != 0 {
            return Err(Error::InvalidCircuit(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidCircuit("zero state vector".into()));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability weight outside the `n_electrons` occupation sector.
    pub fn sector_leakage(&self, n_electrons: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() as usize != n_electrons)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn apply_single(&mut self, q: usize, m: [Complex64; 4]) {
        let bit = 1usize << q;
        for base in 0..self.dim() {
            if base & bit != 0 {
                continue;
            }
            let i0 = base;
            let i1 = base | bit;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m[0] * a0 + m[1] * a1;
            self.amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }

    fn apply_controlled_single(&mut self, control: usize, target: usize, m: [Complex64; 4]) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for base in 0..self.dim() {
            if base & cbit == 0 || base & tbit != 0 {
                continue;
            }
            let i0 = base;
            let i1 = base | tbit;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m[0] * a0 + m[1] * a1;
            self.amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }

    fn apply_pauli_rotation(&mut self, string: &PauliString, theta: f64) {
        // exp(-iθ/2·P)ψ = cos(θ/2)ψ − i·sin(θ/2)·Pψ; P permutes basis states
        // with phases, so Pψ costs one pass.
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let minus_i_s = Complex64::new(0.0, -s);
        let mut rotated = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (j, amp) in self.amps.iter().enumerate() {
            let (row, phase) = pauli_string_action(string, j);
            rotated[row] = minus_i_s * phase * amp;
        }
        for (j, out) in rotated.iter_mut().enumerate() {
            *out += c * self.amps[j];
        }
        self.amps = rotated;
    }

    /// Apply one gate in place, resolving symbolic angles against `values`.
    pub fn apply_gate(&mut self, gate: &Gate, values: &BTreeMap<String, f64>) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "gate {gate} uses qubit {q}, state has {} qubits",
                    self.n_qubits
                )));
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match gate {
            Gate::X { qubit } => self.apply_single(*qubit, [zero, one, one, zero]),
            Gate::H { qubit } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(*qubit, [h, h, h, -h]);
            }
            Gate::Rx { qubit, angle } => {
                let t = angle.resolve(values)? / 2.0;
                let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(0.0, -t.sin()));
                self.apply_single(*qubit, [c, s, s, c]);
            }
            Gate::Ry { qubit, angle } => {
                let t = angle.resolve(values)? / 2.0;
                let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0));
                self.apply_single(*qubit, [c, -s, s, c]);
            }
            Gate::Rz { qubit, angle } => {
                let t = angle.resolve(values)? / 2.0;
                let (em, ep) = (Complex64::from_polar(1.0, -t), Complex64::from_polar(1.0, t));
                self.apply_single(*qubit, [em, zero, zero, ep]);
            }
            Gate::Cnot { control, target } => {
                self.apply_controlled_single(*control, *target, [zero, one, one, zero]);
            }
            Gate::Cry {
                control,
                target,
                angle,
            } => {
                let t = angle.resolve(values)? / 2.0;
                let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0));
                self.apply_controlled_single(*control, *target, [c, -s, s, c]);
            }
            Gate::PauliRotation { string, angle } => {
                let t = angle.resolve(values)?;
                self.apply_pauli_rotation(string, t);
            }
        }
        Ok(())
    }
}

/// Run a circuit on an initial state (default `|0…0⟩`) with the given
/// parameter bindings, enforcing the dense-simulation qubit cap.
pub fn simulate_with_cap(
    c: &Circuit,
    values: &BTreeMap<String, f64>,
    initial: Option<&StateVector>,
    cap: usize,
) -> Result<StateVector> {
    if c.n_qubits > cap {
        return Err(Error::QubitCapExceeded {
            requested: c.n_qubits,
            cap,
        });
    }
    let mut state = match initial {
        Some(s) => {
            if s.n_qubits() != c.n_qubits {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: 1 << c.n_qubits,
                });
            }
            s.clone()
        }
        None => StateVector::zero(c.n_qubits),
    };
    for gate in c.gates() {
        state.apply_gate(gate, values)?;
    }
    debug_assert!(
        (state.norm() - 1.0).abs() < 1e-10,
        "norm drift {:.3e}",
        (state.norm() - 1.0).abs()
    );
    Ok(state)
}

/// [`simulate_with_cap`] at the default 16-qubit cap.
pub fn simulate(
    c: &Circuit,
    values: &BTreeMap<String, f64>,
    initial: Option<&StateVector>,
) -> Result<StateVector> {
    simulate_with_cap(c, values, initial, DEFAULT_QUBIT_CAP)
}

/// Expectation value `⟨ψ|H|ψ⟩` of a Hermitian Pauli sum. Terms are evaluated
/// independently (in parallel under the `parallel` feature) and reduced in
/// canonical term order, so the result is bitwise deterministic.
pub fn expectation(psi: &StateVector, h: &PauliSum) -> Result<f64> {
    if !h.is_hermitian(1e-10) {
        return Err(Error::InvalidOperator(format!(
            "expectation requires a Hermitian operator (max imaginary {:.3e})",
            h.max_imag()
        )));
    }
    if let Some(max_q) = h.max_qubit() {
        if max_q >= psi.n_qubits() {
            return Err(Error::InvalidOperator(format!(
                "operator qubit {max_q} outside the {}-qubit state",
                psi.n_qubits()
            )));
        }
    }
    let terms = h.terms_vec();
    let contributions = maybe_par_map(&terms, |(p, coeff)| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, amp) in psi.amplitudes().iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let (row, phase) = pauli_string_action(p, j);
            acc += psi.amplitude(row).conj() * phase * amp;
        }
        coeff * acc
    });
    let total: Complex64 = contributions.into_iter().sum();
    if total.im.abs() > 1e-10 {
        return Err(Error::InvalidOperator(format!(
            "expectation has imaginary residual {:.3e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Squared overlap `|⟨ψ|φ⟩|²`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr())
}

/// Dense unitary of a circuit, built column-by-column through the simulator.
/// Oracle-grade: cost 4^n.
pub fn circuit_unitary(c: &Circuit, values: &BTreeMap<String, f64>) -> Result<DMatrix<Complex64>> {
    if c.n_qubits > crate::dense::DENSE_QUBIT_CAP {
        return Err(Error::QubitCapExceeded {
            requested: c.n_qubits,
            cap: crate::dense::DENSE_QUBIT_CAP,
        });
    }
    let dim = 1usize << c.n_qubits;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let input = StateVector::basis(c.n_qubits, col)?;
        let output = simulate_with_cap(c, values, Some(&input), crate::dense::DENSE_QUBIT_CAP)?;
        for row in 0..dim {
            u[(row, col)] = output.amplitude(row);
        }
    }
    Ok(u)
}

/// Spin-summed spatial reduced density matrices of a number-sector-pure
/// state: `d1[k,l] = Σ_σ ⟨a†_{kσ} a_{lσ}⟩` and
/// `d2[k,l,m,n] = Σ_{στ} ⟨a†_{kσ} a†_{mτ} a_{nτ} a_{lσ}⟩` (chemists' index
/// order, so `E = Σ h·d1 + ½ Σ g·d2 + offset`).
#[derive(Debug, Clone)]
pub struct Rdm12 {
    pub n_orbitals: usize,
    pub d1: DMatrix<f64>,
    d2: Vec<f64>,
}

impl Rdm12 {
    pub fn d2(&self, k: usize, l: usize, m: usize, n: usize) -> f64 {
        let nn = self.n_orbitals;
        self.d2[((k * nn + l) * nn + m) * nn + n]
    }

    /// Particle number from the 1-RDM trace.
    pub fn trace(&self) -> f64 {
        self.d1.trace()
    }
}

/// Compute spin-summed 1- and 2-RDMs of a sector-pure state.
pub fn rdm12(psi: &StateVector) -> Result<Rdm12> {
    if psi.n_qubits() % 2 != 0 {
        return Err(Error::InvalidOperator(format!(
            "RDMs need an even qubit count (spin modes), got {}",
            psi.n_qubits()
        )));
    }
    let n_orb = psi.n_qubits() / 2;
    // Infer the sector from the dominant amplitude: rotation cascades leave
    // ~1e-17 rounding dust on out-of-sector basis states, so the first
    // nonzero entry is not a safe witness.
    let n_elec = psi
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .map(|(i, _)| i.count_ones() as usize)
        .unwrap_or(0);
    let leakage = psi.sector_leakage(n_elec);
    if leakage > 1e-12 {
        return Err(Error::MixedSector { leakage });
    }
    let occupied: Vec<(usize, Complex64)> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, a)| i.count_ones() as usize == n_elec && a.norm_sqr() > 0.0)
        .map(|(i, a)| (i, *a))
        .collect();

    let mut d1c = vec![Complex64::new(0.0, 0.0); n_orb * n_orb];
    let mut d2c = vec![Complex64::new(0.0, 0.0); n_orb.pow(4)];
    for &(mask, amp) in &occupied {
        for k in 0..n_orb {
            for l in 0..n_orb {
                for spin in 0..2 {
                    let ops = [
                        FermionOp { mode: 2 * k + spin, dagger: true },
                        FermionOp { mode: 2 * l + spin, dagger: false },
                    ];
                    if let Some((out, sign)) =
                        crate::fermion::apply_ops_to_mask(mask as u64, &ops)
                    {
                        d1c[k * n_orb + l] +=
                            sign * psi.amplitude(out as usize).conj() * amp;
                    }
                }
            }
        }
        for k in 0..n_orb {
            for l in 0..n_orb {
                for m in 0..n_orb {
                    for q in 0..n_orb {
                        for sigma in 0..2 {
                            for tau in 0..2 {
                                let ops = [
                                    FermionOp { mode: 2 * k + sigma, dagger: true },
                                    FermionOp { mode: 2 * m + tau, dagger: true },
                                    FermionOp { mode: 2 * q + tau, dagger: false },
                                    FermionOp { mode: 2 * l + sigma, dagger: false },
                                ];
                                if let Some((out, sign)) =
                                    crate::fermion::apply_ops_to_mask(mask as u64, &ops)
                                {
                                    d2c[((k * n_orb + l) * n_orb + m) * n_orb + q] +=
                                        sign * psi.amplitude(out as usize).conj() * amp;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // For complex states the RDMs are Hermitian; with real symmetric
    // integrals only the real parts contribute to the energy (imaginary
    // parts cancel pairwise under k↔l, m↔n), so real storage is lossless
    // for the energy functional.
    Ok(Rdm12 {
        n_orbitals: n_orb,
        d1: DMatrix::from_fn(n_orb, n_orb, |k, l| d1c[k * n_orb + l].re),
        d2: d2c.into_iter().map(|c| c.re).collect(),
    })
}

/// Energy functional `E = Σ h·d1 + ½ Σ g·d2 + offset` from RDMs.
pub fn energy_from_rdms(ints: &MolecularIntegrals, rdm: &Rdm12) -> Result<f64> {
    let n = ints.n_orbitals;
    if rdm.n_orbitals != n {
        return Err(Error::DimensionMismatch {
            left: rdm.n_orbitals,
            right: n,
        });
    }
    let mut e = ints.e_offset;
    for k in 0..n {
        for l in 0..n {
            e += ints.h[(k, l)] * rdm.d1[(k, l)];
        }
    }
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for q in 0..n {
                    e += 0.5 * ints.g(k, l, m, q) * rdm.d2(k, l, m, q);
                }
            }
        }
    }
    Ok(e)
}

/// One edge of a compact pair state: its assigned spatial orbitals and the
/// `R_e − 1` cascade angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaEdge {
    pub orbitals: Vec<usize>,
    pub angles: Vec<f64>,
}

impl SpaEdge {
    /// Closed-form pair amplitudes: `A_k = cos(θ_k/2)·Π_{l<k} sin(θ_l/2)`,
    /// with the trailing amplitude carrying only the sine product. Squares
    /// sum to 1.
    pub fn amplitudes(&self) -> Vec<f64> {
        let r = self.orbitals.len();
        let mut amps = Vec::with_capacity(r);
        let mut sin_prod = 1.0;
        for k in 0..r {
            if k + 1 < r {
                amps.push(sin_prod * (self.angles[k] / 2.0).cos());
                sin_prod *= (self.angles[k] / 2.0).sin();
            } else {
                amps.push(sin_prod);
            }
        }
        amps
    }
}

/// Separable pair state in linear memory: a list of edges with disjoint
/// orbital sets; the dense state is the product of per-edge pair states.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaState {
    pub edges: Vec<SpaEdge>,
}

impl SpaState {
    fn validate(&self, n_orbitals: usize) -> Result<()> {
        let mut seen = vec![false; n_orbitals];
        for edge in &self.edges {
            if edge.orbitals.is_empty() {
                return Err(Error::InvalidAssignment("edge with no orbitals".into()));
            }
            if edge.angles.len() + 1 != edge.orbitals.len() {
                return Err(Error::InvalidAssignment(format!(
                    "edge with {} orbitals needs {} angles, got {}",
                    edge.orbitals.len(),
                    edge.orbitals.len() - 1,
                    edge.angles.len()
                )));
            }
            for &orb in &edge.orbitals {
                if orb >= n_orbitals {
                    return Err(Error::InvalidAssignment(format!(
                        "orbital {orb} out of range (n_orbitals = {n_orbitals})"
                    )));
                }
                if seen[orb] {
                    return Err(Error::InvalidAssignment(format!(
                        "orbital {orb} assigned to two edges"
                    )));
                }
                seen[orb] = true;
            }
        }
        Ok(())
    }

    /// Dense statevector over `2·n_orbitals` qubits (oracle/diagnostic path;
    /// exponential memory, unlike [`spa_energy`]).
    pub fn to_statevector(&self, n_orbitals: usize) -> Result<StateVector> {
        self.validate(n_orbitals)?;
        let n_qubits = 2 * n_orbitals;
        if n_qubits > DEFAULT_QUBIT_CAP {
            return Err(Error::QubitCapExceeded {
                requested: n_qubits,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        // Pair creators commute (each moves two fermions), so the product
        // state has nonnegative coefficients: mask per edge-orbital choice.
        let mut terms: Vec<(usize, f64)> = vec![(0, 1.0)];
        for edge in &self.edges {
            let amps = edge.amplitudes();
            let mut next = Vec::with_capacity(terms.len() * amps.len());
            for &(mask, coeff) in &terms {
                for (k, &a) in amps.iter().enumerate() {
                    let pair_mask = 0b11usize << (2 * edge.orbitals[k]);
                    next.push((mask | pair_mask, coeff * a));
                }
            }
            terms = next;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for (mask, coeff) in terms {
            amps[mask] += Complex64::new(coeff, 0.0);
        }
        StateVector::from_amplitudes(amps)
    }
}

/// Energy of a separable pair state from closed-form RDMs, never forming the
/// dense vector. Within an edge the pair structure gives
/// `E_e = Σ_k 2·h_kk·A_k² + Σ_{k,l} (kl|kl)·A_k·A_l`; across edges the
/// product structure factorizes into Coulomb-minus-half-exchange between the
/// diagonal pair densities `D_kk = 2A_k²`. Memory O(n²).
pub fn spa_energy(state: &SpaState, ints: &MolecularIntegrals) -> Result<f64> {
    state.validate(ints.n_orbitals)?;
    ints.check_finite()?;
    let mut energy = ints.e_offset;
    let mut density: Vec<(usize, f64)> = Vec::new(); // (orbital, D_kk)
    let mut edge_of: Vec<usize> = Vec::new();
    for (e_idx, edge) in state.edges.iter().enumerate() {
        let amps = edge.amplitudes();
        for (k_pos, &k) in edge.orbitals.iter().enumerate() {
            energy += 2.0 * ints.h[(k, k)] * amps[k_pos] * amps[k_pos];
            for (l_pos, &l) in edge.orbitals.iter().enumerate() {
                energy += ints.g(k, l, k, l) * amps[k_pos] * amps[l_pos];
            }
            density.push((k, 2.0 * amps[k_pos] * amps[k_pos]));
            edge_of.push(e_idx);
        }
    }
    for (i, &(k, dk)) in density.iter().enumerate() {
        for (j, &(m, dm)) in density.iter().enumerate().skip(i + 1) {
            if edge_of[i] == edge_of[j] {
                continue;
            }
            energy += dk * dm * (ints.g(k, k, m, m) - 0.5 * ints.g(k, m, m, k));
        }
    }
    Ok(energy)
}

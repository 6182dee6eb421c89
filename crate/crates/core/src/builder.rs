//! Circuit construction from chemical graphs.
//!
//! Two construction layers:
//!
//! 1. The pair ansatz: every graph edge carries an electron pair spread over
//!    its assigned spatial orbitals by a CRY cascade ([`build_spa`]).
//! 2. Motif blocks appended as `U_R · U_C · U_R†`: orbital rotators move
//!    orbitals into a frame where a pair correlator acts, then rotate back
//!    with the *same* (sign-flipped) parameters ([`build_motif`]), plus the
//!    denser correlator/rotator templates [`correlator_block_c4`] and
//!    [`rotator_block_rr`].
//!
//! Correlator parameters always start at 0, so appending a motif never
//! changes the prepared state until the optimizer moves them — energy can
//! only improve.

use nalgebra::DMatrix;

use crate::circuit::{Angle, Circuit, Gate};
use crate::fermion::{excitation_generator, Excitation};
use crate::graph::ChemicalGraph;
use crate::{Error, Result};

/// Orbitals assigned to one graph edge: the edge's atom indices and the
/// spatial orbitals its electron pair may occupy (pair rank `R_e` = length).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOrbitals {
    pub atoms: (usize, usize),
    pub orbitals: Vec<usize>,
}

/// Assignment of spatial orbitals to graph edges. Spatial orbital `k` maps
/// to qubits `(2k, 2k+1)` throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAssignment {
    pub n_orbitals: usize,
    pub edges: Vec<EdgeOrbitals>,
}

impl EdgeAssignment {
    /// Default assignment for a graph whose atoms each carry one orbital
    /// (the H/He case): edge `(a, b)` gets orbitals `[a, b]` — pair rank 2,
    /// bonding/antibonding after the orbital guess.
    pub fn default_for_graph(g: &ChemicalGraph, n_orbitals: usize) -> Result<EdgeAssignment> {
        let edges = g
            .edges
            .iter()
            .map(|&(a, b)| EdgeOrbitals {
                atoms: (a, b),
                orbitals: vec![a, b],
            })
            .collect();
        let assignment = EdgeAssignment { n_orbitals, edges };
        assignment.validate()?;
        Ok(assignment)
    }

    /// Check orbital indices are in range and edge orbital sets disjoint.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n_orbitals];
        let mut total = 0usize;
        for edge in &self.edges {
            if edge.orbitals.is_empty() {
                return Err(Error::InvalidAssignment(format!(
                    "edge {:?} has no orbitals",
                    edge.atoms
                )));
            }
            for &orb in &edge.orbitals {
                if orb >= self.n_orbitals {
                    return Err(Error::InvalidAssignment(format!(
                        "orbital {orb} out of range (n_orbitals = {})",
                        self.n_orbitals
                    )));
                }
                if seen[orb] {
                    return Err(Error::InvalidAssignment(format!(
                        "orbital {orb} assigned to two edges"
                    )));
                }
                seen[orb] = true;
            }
            total += edge.orbitals.len();
        }
        if total > self.n_orbitals {
            return Err(Error::InvalidAssignment(format!(
                "{total} orbitals assigned but only {} available",
                self.n_orbitals
            )));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_orbitals
    }
}

/// Pair-ansatz circuit: one electron pair per edge, spread over the edge's
/// orbitals by a CRY cascade. Per edge with orbitals `o_0..o_{R-1}`:
/// `X(2o_0)`, then for each cascade step `k` a CRY from qubit `2o_k` to
/// `2o_{k+1}` (the first emitted as a plain RY, since the control is then
/// known to be |1⟩) followed by `CNOT(2o_{k+1}, 2o_k)` and
/// `CNOT(2o_k, 2o_k+1)`, closing with `CNOT(2o_{R-1}, 2o_{R-1}+1)`.
/// Parameters are named `t_e{edge}_k{step}` and start at 0 (the closed-shell
/// determinant).
pub fn build_spa(g: &ChemicalGraph, assignment: &EdgeAssignment) -> Result<Circuit> {
    assignment.validate()?;
    let graph_edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    for edge in &assignment.edges {
        let key = (
            edge.atoms.0.min(edge.atoms.1),
            edge.atoms.0.max(edge.atoms.1),
        );
        if !graph_edges.contains(&key) {
            return Err(Error::InvalidAssignment(format!(
                "assignment edge {:?} is not an edge of graph {:?}",
                edge.atoms, g.label
            )));
        }
    }
    let mut circuit = Circuit::new(assignment.n_qubits());
    for (e_idx, edge) in assignment.edges.iter().enumerate() {
        let orbs = &edge.orbitals;
        circuit.push(Gate::X { qubit: 2 * orbs[0] })?;
        for k in 0..orbs.len().saturating_sub(1) {
            let angle = Angle::sym(format!("t_e{e_idx}_k{k}"));
            let (from, to) = (2 * orbs[k], 2 * orbs[k + 1]);
            if k == 0 {
                // Control is |1⟩ with certainty right after the X, so the
                // first controlled rotation reduces to a plain RY.
                circuit.push(Gate::Ry { qubit: to, angle })?;
            } else {
                circuit.push(Gate::Cry {
                    control: from,
                    target: to,
                    angle,
                })?;
            }
            circuit.push(Gate::Cnot {
                control: to,
                target: from,
            })?;
            circuit.push(Gate::Cnot {
                control: from,
                target: from + 1,
            })?;
        }
        let last = 2 * orbs[orbs.len() - 1];
        circuit.push(Gate::Cnot {
            control: last,
            target: last + 1,
        })?;
    }
    Ok(circuit)
}

/// Orbital-rotation circuit `exp(-i·φ/2 · G)` with the spin-summed single
/// excitation generator between spatial orbitals `i` and `j`. Compiles to
/// two Pauli rotations per spin sector.
pub fn orbital_rotator(i: usize, j: usize, parameter: Angle) -> Result<Circuit> {
    let generator = excitation_generator(Excitation::Single { i, j })?;
    let n_qubits = 2 * (i.max(j) + 1);
    let mut circuit = Circuit::new(n_qubits);
    for gate in crate::circuit::rotation_from_generator(&generator, parameter)? {
        circuit.push(gate)?;
    }
    Ok(circuit)
}

/// Pair-correlator circuit `exp(-i·θ/2 · G)` with the pair-double generator
/// transferring the pair `i → j`. Eight commuting weight-4 rotations.
pub fn pair_correlator(i: usize, j: usize, parameter: Angle) -> Result<Circuit> {
    let generator = excitation_generator(Excitation::PairDouble { i, j })?;
    let n_qubits = 2 * (i.max(j) + 1);
    let mut circuit = Circuit::new(n_qubits);
    for gate in crate::circuit::rotation_from_generator(&generator, parameter)? {
        circuit.push(gate)?;
    }
    Ok(circuit)
}

/// One rotator entry of a motif: orbitals mixed, parameter name, initial
/// angle (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct RotatorSpec {
    pub i: usize,
    pub j: usize,
    pub name: String,
    pub initial: f64,
}

/// One correlator entry of a motif; its parameter always starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSpec {
    pub i: usize,
    pub j: usize,
    pub name: String,
}

/// A `U_R · U_C · U_R†` block: rotators applied in order, correlators in the
/// rotated frame, then the rotators undone with shared parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Motif {
    pub rotators: Vec<RotatorSpec>,
    pub correlators: Vec<CorrelatorSpec>,
}

/// Append a motif to a base circuit. The returned circuit prepares exactly
/// the base state at the motif's initial parameter values: correlators start
/// at 0, and `U_R† = adjoint(U_R)` shares parameter symbols with negated
/// multipliers, so `U_R · 1 · U_R† = 1`. Motif parameter names must not
/// collide with existing ones.
pub fn build_motif(base: &Circuit, motif: &Motif) -> Result<Circuit> {
    let mut out = base.clone();
    let existing = base.param_names();
    let mut u_r = Circuit::new(base.n_qubits);
    for rot in &motif.rotators {
        if existing.contains(&rot.name) {
            return Err(Error::InvalidAssignment(format!(
                "motif parameter {:?} already exists in the base circuit",
                rot.name
            )));
        }
        u_r.append(&orbital_rotator(rot.i, rot.j, Angle::sym(rot.name.clone()))?)?;
        u_r.set_value(&rot.name, rot.initial)?;
    }
    let mut u_c = Circuit::new(base.n_qubits);
    for cor in &motif.correlators {
        if existing.contains(&cor.name) {
            return Err(Error::InvalidAssignment(format!(
                "motif parameter {:?} already exists in the base circuit",
                cor.name
            )));
        }
        u_c.append(&pair_correlator(cor.i, cor.j, Angle::sym(cor.name.clone()))?)?;
    }
    out.append(&u_r)?;
    out.append(&u_c)?;
    out.append(&u_r.adjoint())?;
    Ok(out)
}

/// Four-orbital correlator template: pair correlators with independent
/// parameters on the chain pairs `(0,1)`, `(2,3)`, `(1,2)`, `(0,3)` of the
/// given quadruple (in chain order). Parameters `c_{i}_{j}` start at 0.
pub fn correlator_block_c4(quad: [usize; 4]) -> Result<Circuit> {
    let mut sorted = quad;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidAssignment(format!(
            "correlator quadruple {quad:?} repeats an orbital"
        )));
    }
    let n_qubits = 2 * (sorted[3] + 1);
    let mut circuit = Circuit::new(n_qubits);
    for (a, b) in [(0, 1), (2, 3), (1, 2), (0, 3)] {
        let (i, j) = (quad[a], quad[b]);
        circuit.append(&pair_correlator(i, j, Angle::sym(format!("c_{i}_{j}")))?)?;
    }
    Ok(circuit)
}

/// Brick-wall rotator template over a chain of orbitals: `layers` alternating
/// layers of nearest-neighbor orbital rotators, even layers pairing
/// `(0,1),(2,3),…` and odd layers `(1,2),(3,4),…`, each rotator with its own
/// parameter `r_l{layer}_{i}_{j}` starting at 0.
pub fn rotator_block_rr(orbitals: &[usize], layers: usize) -> Result<Circuit> {
    if layers == 0 {
        return Err(Error::InvalidAssignment(
            "rotator block needs at least one layer".into(),
        ));
    }
    let mut sorted = orbitals.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidAssignment(format!(
            "rotator chain {orbitals:?} repeats an orbital"
        )));
    }
    if orbitals.len() < 2 {
        return Err(Error::InvalidAssignment(
            "rotator chain needs at least two orbitals".into(),
        ));
    }
    let n_qubits = 2 * (sorted[sorted.len() - 1] + 1);
    let mut circuit = Circuit::new(n_qubits);
    for layer in 0..layers {
        let start = layer % 2;
        let mut pos = start;
        while pos + 1 < orbitals.len() {
            let (i, j) = (orbitals[pos], orbitals[pos + 1]);
            circuit.append(&orbital_rotator(
                i,
                j,
                Angle::sym(format!("r_l{layer}_{i}_{j}")),
            )?)?;
            pos += 2;
        }
    }
    Ok(circuit)
}

/// Initial orbital frame from the graph: for each rank-2 edge `(a, b)` the
/// first assigned orbital becomes the bonding combination `(ψ_a + ψ_b)/√2`
/// and the second the antibonding `(ψ_a − ψ_b)/√2` over the orthonormalized
/// atomic orbitals (atom index = AO index); all other rows stay identity.
/// Rows of the returned matrix are the new orbitals.
pub fn initial_orbital_guess(assignment: &EdgeAssignment) -> Result<DMatrix<f64>> {
    assignment.validate()?;
    let n = assignment.n_orbitals;
    let mut u = DMatrix::<f64>::identity(n, n);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for edge in &assignment.edges {
        if edge.orbitals.len() != 2 {
            continue; // only rank-2 edges have a canonical two-AO guess
        }
        let (a, b) = edge.atoms;
        if a >= n || b >= n {
            return Err(Error::InvalidAssignment(format!(
                "edge atoms {:?} outside the {n}-orbital AO basis",
                edge.atoms
            )));
        }
        let (bonding, antibonding) = (edge.orbitals[0], edge.orbitals[1]);
        for row in [bonding, antibonding] {
            for col in 0..n {
                u[(row, col)] = 0.0;
            }
        }
        u[(bonding, a)] = inv_sqrt2;
        u[(bonding, b)] = inv_sqrt2;
        u[(antibonding, a)] = inv_sqrt2;
        u[(antibonding, b)] = -inv_sqrt2;
    }
    crate::integrals::require_orthogonal(&u, 1e-12)?;
    Ok(u)
}

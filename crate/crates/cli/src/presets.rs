//! Ansatz ladders derived from ranked chemical graphs.
//!
//! The named ladders build on the pair ansatz of the strongest graph:
//!
//! * the **bridging motif** ([`bridging_motif`]) promotes the second-ranked
//!   graph into a `U_R · U_C · U_R†` block — one rotator per primary edge
//!   (so the optimizer can unmix each bonding pair), plus a rotator and a
//!   pair correlator for every short bond the second graph adds;
//! * the **extended block** ([`extended_block`]) stacks two more motifs of
//!   the same shape on top, each wrapping a four-correlator chain in its own
//!   brick-wall rotator cascade, restoring full flexibility over the orbital
//!   window while staying identity at initialization.
//!
//! Both constructions append only blocks that reduce to the identity at
//! their initial parameter values, so every rung of the ladder starts from
//! the energy the previous rung reached.

use molcirc_core::builder::{
    correlator_block_c4, rotator_block_rr, CorrelatorSpec, EdgeAssignment, Motif, RotatorSpec,
};
use molcirc_core::circuit::Circuit;
use molcirc_core::graph::ChemicalGraph;
use molcirc_core::{Error, Result};

/// Bonds of the secondary graph are kept only when shorter than this factor
/// times the graph's shortest bond; longer bonds correlate next to nothing
/// and would only widen the circuit.
pub const BOND_KEEP_FACTOR: f64 = 2.0;

/// Brick-wall cascade depth around the extended block's first correlator
/// chain, and around its second. Three then two layers keep the pair under
/// the published parameter budget while reaching the exact ground state.
pub const EXTENDED_ROTATOR_LAYERS: [usize; 2] = [3, 2];

/// Look up the spatial orbital representing an atom under a rank-2
/// assignment (edge `(a, b)` carries orbitals `[o_a, o_b]` in atom order).
fn orbital_of_atom(assignment: &EdgeAssignment, atom: usize) -> Result<usize> {
    for edge in &assignment.edges {
        if edge.orbitals.len() != 2 {
            return Err(Error::InvalidAssignment(format!(
                "bridging motifs need rank-2 edges; edge {:?} carries {} orbitals",
                edge.atoms,
                edge.orbitals.len()
            )));
        }
        if edge.atoms.0 == atom {
            return Ok(edge.orbitals[0]);
        }
        if edge.atoms.1 == atom {
            return Ok(edge.orbitals[1]);
        }
    }
    Err(Error::InvalidAssignment(format!(
        "atom {atom} is not covered by any assigned edge"
    )))
}

/// Derive the bridging motif from the primary assignment and the
/// second-ranked graph.
///
/// Rotators come first for every primary edge (initial angle 0 — the block
/// is `U_R · 1 · U_R†` until the correlators move, so initial values only
/// seed the search direction), then one rotator per kept new bond; each kept
/// new bond also gets a pair correlator. A bond of the secondary graph is
/// kept when it is not already a primary edge and its length stays below
/// [`BOND_KEEP_FACTOR`] times the secondary graph's shortest bond.
pub fn bridging_motif(
    primary: &ChemicalGraph,
    assignment: &EdgeAssignment,
    secondary: &ChemicalGraph,
    prefix: &str,
) -> Result<Motif> {
    let primary_bonds: Vec<(usize, usize)> = primary
        .edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let shortest = secondary
        .edges
        .iter()
        .map(|&e| secondary.edge_length(e))
        .fold(f64::INFINITY, f64::min);
    let kept: Vec<(usize, usize)> = secondary
        .edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .filter(|&(a, b)| {
            !primary_bonds.contains(&(a, b))
                && secondary.edge_length((a, b)) < BOND_KEEP_FACTOR * shortest
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidGraph(format!(
            "graph {:?} adds no short bond beyond the primary graph; nothing to bridge",
            secondary.label
        )));
    }

    let mut rotators = Vec::new();
    for edge in &assignment.edges {
        if edge.orbitals.len() != 2 {
            return Err(Error::InvalidAssignment(format!(
                "bridging motifs need rank-2 edges; edge {:?} carries {} orbitals",
                edge.atoms,
                edge.orbitals.len()
            )));
        }
        rotators.push((edge.orbitals[0], edge.orbitals[1]));
    }
    for &(a, b) in &kept {
        rotators.push((orbital_of_atom(assignment, a)?, orbital_of_atom(assignment, b)?));
    }
    let mut correlators = Vec::new();
    for &(a, b) in &kept {
        correlators.push((orbital_of_atom(assignment, a)?, orbital_of_atom(assignment, b)?));
    }

    Ok(Motif {
        rotators: rotators
            .into_iter()
            .enumerate()
            .map(|(k, (i, j))| RotatorSpec {
                i,
                j,
                name: format!("{prefix}r{k}_{i}_{j}"),
                initial: 0.0,
            })
            .collect(),
        correlators: correlators
            .into_iter()
            .enumerate()
            .map(|(k, (i, j))| CorrelatorSpec {
                i,
                j,
                name: format!("{prefix}c{k}_{i}_{j}"),
            })
            .collect(),
    })
}

/// Orbitals of the four-orbital window the extended block acts on: the
/// assigned orbitals in ascending order. Errors below four orbitals.
pub fn extended_window(assignment: &EdgeAssignment) -> Result<Vec<usize>> {
    let mut orbitals: Vec<usize> = assignment
        .edges
        .iter()
        .flat_map(|e| e.orbitals.iter().copied())
        .collect();
    orbitals.sort_unstable();
    orbitals.dedup();
    if orbitals.len() < 4 {
        return Err(Error::InvalidAssignment(format!(
            "the extended block needs at least 4 assigned orbitals, found {}",
            orbitals.len()
        )));
    }
    Ok(orbitals)
}

/// Append the extended block to a base circuit: two stacked motifs, each a
/// brick-wall rotator cascade over the whole window, a correlator chain over
/// four window orbitals, and the cascade undone with shared parameters. The
/// first motif correlates the leading four orbitals under a three-layer
/// cascade, the second the trailing four under a two-layer cascade. The
/// correlators start at 0, so the block is the identity at initialization
/// regardless of the rotator values.
pub fn extended_block(base: &Circuit, window: &[usize]) -> Result<Circuit> {
    if window.len() < 4 {
        return Err(Error::InvalidAssignment(format!(
            "the extended block needs at least 4 orbitals, found {}",
            window.len()
        )));
    }
    let head = [window[0], window[1], window[2], window[3]];
    let n = window.len();
    let tail = [window[n - 4], window[n - 3], window[n - 2], window[n - 1]];

    let mut out = base.clone();
    for (k, (quad, layers)) in [head, tail].into_iter().zip(EXTENDED_ROTATOR_LAYERS).enumerate() {
        let prefix = format!("x{}_", k + 1);
        let cascade = rotator_block_rr(window, layers)?.with_prefixed_params(&prefix);
        let correlators = correlator_block_c4(quad)?.with_prefixed_params(&prefix);
        out.append(&cascade)?;
        out.append(&correlators)?;
        out.append(&cascade.adjoint())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use molcirc_core::builder::build_spa;
    use molcirc_core::graph::{chain, ChemicalGraph};
    use molcirc_core::sim::{simulate, StateVector};
    use approx::assert_abs_diff_eq;

    fn h4_graphs() -> (ChemicalGraph, ChemicalGraph) {
        let atoms = chain("H", 4, 1.5).unwrap();
        let primary =
            ChemicalGraph::new(atoms.clone(), vec![(0, 1), (2, 3)], vec![], "nn");
        let secondary = ChemicalGraph::new(atoms, vec![(1, 2), (0, 3)], vec![], "shift");
        (primary, secondary)
    }

    #[test]
    fn h4_bridging_motif_keeps_only_the_short_new_bond() {
        let (primary, secondary) = h4_graphs();
        let assignment = EdgeAssignment::default_for_graph(&primary, 4).unwrap();
        let motif = bridging_motif(&primary, &assignment, &secondary, "b_").unwrap();

        // Two primary-edge rotators, one bridge rotator, one correlator:
        // the (0, 3) bond is 3x the (1, 2) bond and is dropped.
        assert_eq!(motif.rotators.len(), 3);
        assert_eq!(motif.correlators.len(), 1);
        assert_eq!(
            (motif.correlators[0].i, motif.correlators[0].j),
            (1, 2)
        );
        assert_eq!((motif.rotators[2].i, motif.rotators[2].j), (1, 2));
    }

    #[test]
    fn h6_bridging_motif_keeps_both_inner_bonds() {
        let atoms = chain("H", 6, 1.0).unwrap();
        let primary = ChemicalGraph::new(
            atoms.clone(),
            vec![(0, 1), (2, 3), (4, 5)],
            vec![],
            "nn",
        );
        let secondary =
            ChemicalGraph::new(atoms, vec![(1, 2), (3, 4), (0, 5)], vec![], "shift");
        let assignment = EdgeAssignment::default_for_graph(&primary, 6).unwrap();
        let motif = bridging_motif(&primary, &assignment, &secondary, "b_").unwrap();

        // Three primary rotators + two bridge rotators; the (0, 5) wrap-around
        // bond is five bond lengths and is dropped.
        assert_eq!(motif.rotators.len(), 5);
        let bridges: Vec<(usize, usize)> =
            motif.correlators.iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(bridges, vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn extended_block_is_identity_at_initialization() {
        let (primary, _) = h4_graphs();
        let assignment = EdgeAssignment::default_for_graph(&primary, 4).unwrap();
        let spa = build_spa(&primary, &assignment).unwrap();
        let window = extended_window(&assignment).unwrap();
        let extended = extended_block(&spa, &window).unwrap();

        // 2 pair parameters + (5 + 4) and (3 + 4) per motif, the closing
        // cascades sharing their parameters with the opening ones.
        assert_eq!(extended.n_parameters(), 18);

        let base = simulate(&spa, spa.values(), None).unwrap();
        let full = simulate(&extended, extended.values(), None).unwrap();
        overlap_is_one(&base, &full);

        // Still identity when the rotators move: only correlators unlock it.
        let mut seeded = extended.clone();
        for name in seeded.param_names() {
            if name.contains("_r_l") {
                seeded.set_value(&name, 0.9).unwrap();
            }
        }
        let warm = simulate(&seeded, seeded.values(), None).unwrap();
        overlap_is_one(&base, &warm);
    }

    #[test]
    fn bridging_motif_rejects_an_all_long_secondary_graph() {
        let atoms = chain("H", 4, 1.5).unwrap();
        let primary =
            ChemicalGraph::new(atoms.clone(), vec![(0, 1), (2, 3)], vec![], "nn");
        // Only new bond is (0, 3): three bond lengths, but it IS the
        // shortest bond of its own graph, so it survives the length cut and
        // the motif builds. A graph repeating the primary edges has nothing
        // new and errors.
        let repeat = ChemicalGraph::new(atoms, vec![(0, 1), (2, 3)], vec![], "same");
        let assignment = EdgeAssignment::default_for_graph(&primary, 4).unwrap();
        assert!(bridging_motif(&primary, &assignment, &repeat, "b_").is_err());
    }

    fn overlap_is_one(a: &StateVector, b: &StateVector) {
        let overlap = a.inner(b).unwrap().norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-10);
    }
}

//! Chemical graphs: atoms, bond edges, lone pairs, and valence accounting.
//!
//! A chemical graph is the Lewis-structure abstraction driving circuit
//! construction: every atom carries `N_valence` connectors, each bond edge
//! consumes one connector at both endpoints, and each lone pair consumes two
//! connectors at its atom. Multi-edges are allowed and represent multiple
//! bonds. Graphs are ranked by how tightly they bond nearby atoms (sum of
//! inverse bond lengths), a deterministic stand-in for chemical intuition
//! that callers can always override by passing graphs in explicit order.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Element symbols for the supported atomic numbers 1..=17.
const ELEMENT_SYMBOLS: [&str; 17] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
];

/// Element symbol for an atomic number in 1..=17, if supported.
pub fn element_symbol(n_a: u32) -> Option<&'static str> {
    ELEMENT_SYMBOLS.get(n_a.wrapping_sub(1) as usize).copied()
}

/// Look up an atomic number (1..=17) from an element symbol.
pub fn atomic_number(symbol: &str) -> Result<u32> {
    ELEMENT_SYMBOLS
        .iter()
        .position(|s| s.eq_ignore_ascii_case(symbol))
        .map(|i| i as u32 + 1)
        .ok_or_else(|| Error::UnsupportedElement {
            symbol: symbol.to_string(),
            n_a: -1,
        })
}

/// Number of core (inactive) electrons for atomic number `n_a`:
/// 0 below He, 2 through F/Ne row, 10 through Cl.
pub fn core_electrons(n_a: u32) -> Result<u32> {
    match n_a {
        1 => Ok(0),
        2..=9 => Ok(2),
        10..=17 => Ok(10),
        _ => Err(Error::UnsupportedElement {
            symbol: String::new(),
            n_a: n_a as i64,
        }),
    }
}

/// Number of valence electrons: `n_a - core_electrons(n_a)`.
pub fn valence_electrons(n_a: u32) -> Result<u32> {
    Ok(n_a - core_electrons(n_a)?)
}

/// An atom: element label, atomic number, position in Ångström.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub symbol: String,
    pub atomic_number: u32,
    /// Cartesian position in Ångström.
    pub position: [f64; 3],
}

impl Atom {
    /// Build an atom from its element symbol; rejects elements outside
    /// atomic numbers 1..=17 and non-finite coordinates.
    pub fn new(symbol: &str, position: [f64; 3]) -> Result<Atom> {
        let n = atomic_number(symbol)?;
        if position.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGraph(format!(
                "non-finite position for atom {symbol:?}: {position:?}"
            )));
        }
        Ok(Atom {
            symbol: ELEMENT_SYMBOLS[(n - 1) as usize].to_string(),
            atomic_number: n,
            position,
        })
    }

    /// Distance to another atom, in Ångström.
    pub fn distance(&self, other: &Atom) -> f64 {
        let d: f64 = self
            .position
            .iter()
            .zip(&other.position)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d.sqrt()
    }
}

/// A chemical graph over a fixed atom list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChemicalGraph {
    pub atoms: Vec<Atom>,
    /// Unordered vertex-index pairs; repeated pairs model multiple bonds.
    pub edges: Vec<(usize, usize)>,
    /// Vertex indices carrying lone pairs; repeats allowed (one entry per pair).
    pub lone_pairs: Vec<usize>,
    pub label: String,
}

/// One atom whose connectors are not exactly consumed by edges + lone pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorViolation {
    pub atom: usize,
    pub expected: u32,
    pub found: u32,
}

impl std::fmt::Display for ConnectorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "atom {}: expected {} connectors, found {}",
            self.atom, self.expected, self.found
        )
    }
}

impl ChemicalGraph {
    pub fn new(
        atoms: Vec<Atom>,
        edges: Vec<(usize, usize)>,
        lone_pairs: Vec<usize>,
        label: impl Into<String>,
    ) -> ChemicalGraph {
        ChemicalGraph {
            atoms,
            edges,
            lone_pairs,
            label: label.into(),
        }
    }

    /// Index-validity check shared by validation and ranking.
    fn check_indices(&self) -> Result<()> {
        let n = self.atoms.len();
        for &(i, j) in &self.edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) references a vertex outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) is a self-loop; model lone pairs via lone_pairs"
                )));
            }
        }
        if let Some(&v) = self.lone_pairs.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidGraph(format!(
                "lone pair on vertex {v} outside 0..{n}"
            )));
        }
        Ok(())
    }

    /// Per-atom connector mismatches (empty = valid graph).
    pub fn connector_violations(&self) -> Result<Vec<ConnectorViolation>> {
        self.check_indices()?;
        let mut found = vec![0u32; self.atoms.len()];
        for &(i, j) in &self.edges {
            found[i] += 1;
            found[j] += 1;
        }
        for &v in &self.lone_pairs {
            found[v] += 2;
        }
        let mut violations = Vec::new();
        for (idx, atom) in self.atoms.iter().enumerate() {
            let expected = valence_electrons(atom.atomic_number)?;
            if found[idx] != expected {
                violations.push(ConnectorViolation {
                    atom: idx,
                    expected,
                    found: found[idx],
                });
            }
        }
        Ok(violations)
    }

    /// Length of edge `e` in Ångström.
    pub fn edge_length(&self, e: (usize, usize)) -> f64 {
        self.atoms[e.0].distance(&self.atoms[e.1])
    }

    /// Importance score: Σ over edges of 1 / bond length (Å⁻¹). Depends on
    /// geometry only; tighter bonding of close neighbors scores higher.
    pub fn score(&self) -> f64 {
        self.edges.iter().map(|&e| 1.0 / self.edge_length(e)).sum()
    }
}

/// Succeeds iff every atom's connectors are exactly consumed by incident
/// edges and lone pairs; otherwise reports every mismatching atom.
pub fn validate_graph(g: &ChemicalGraph) -> Result<()> {
    let violations = g.connector_violations()?;
    if violations.is_empty() {
        return Ok(());
    }
    let report: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    Err(Error::InvalidGraph(report.join("; ")))
}

/// Stable sort by descending importance score; ties keep input order.
/// All graphs must be validated and share the same atom list.
pub fn rank_graphs(graphs: &[ChemicalGraph]) -> Result<Vec<ChemicalGraph>> {
    if let Some(first) = graphs.first() {
        for (i, g) in graphs.iter().enumerate().skip(1) {
            if g.atoms.len() != first.atoms.len() {
                return Err(Error::MismatchedAtoms(format!(
                    "graph {} has {} atoms, graph 0 has {}",
                    i,
                    g.atoms.len(),
                    first.atoms.len()
                )));
            }
            let same = g.atoms.iter().zip(&first.atoms).all(|(a, b)| {
                a.atomic_number == b.atomic_number
                    && a.position
                        .iter()
                        .zip(&b.position)
                        .all(|(x, y)| (x - y).abs() <= 1e-12)
            });
            if !same {
                return Err(Error::MismatchedAtoms(format!(
                    "graph {i} disagrees with graph 0 on atom identities or positions"
                )));
            }
        }
    }
    for g in graphs {
        validate_graph(g)?;
    }
    let mut ranked: Vec<ChemicalGraph> = graphs.to_vec();
    // Stable sort: equal scores preserve input order.
    ranked.sort_by(|a, b| b.score().partial_cmp(&a.score()).expect("finite scores"));
    Ok(ranked)
}

/// JSON graph configuration: atom list plus one or more graphs over it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphConfig {
    pub atoms: Vec<AtomSpec>,
    pub graphs: Vec<GraphSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    pub symbol: String,
    pub xyz: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(default)]
    pub label: String,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub lone_pairs: Vec<usize>,
}

impl GraphConfig {
    pub fn parse(json: &str) -> Result<GraphConfig> {
        serde_json::from_str(json).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Materialize the shared atom list.
    pub fn atom_list(&self) -> Result<Vec<Atom>> {
        self.atoms
            .iter()
            .map(|a| Atom::new(&a.symbol, a.xyz))
            .collect()
    }

    /// Materialize all graphs (unvalidated; callers validate or rank).
    pub fn chemical_graphs(&self) -> Result<Vec<ChemicalGraph>> {
        let atoms = self.atom_list()?;
        Ok(self
            .graphs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let label = if g.label.is_empty() {
                    format!("graph-{i}")
                } else {
                    g.label.clone()
                };
                ChemicalGraph::new(
                    atoms.clone(),
                    g.edges.iter().map(|&[a, b]| (a, b)).collect(),
                    g.lone_pairs.clone(),
                    label,
                )
            })
            .collect())
    }
}

/// Convenience constructor: a uniformly spaced chain of one element along x.
pub fn chain(element: &str, count: usize, spacing: f64) -> Result<Vec<Atom>> {
    (0..count)
        .map(|i| Atom::new(element, [i as f64 * spacing, 0.0, 0.0]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_chain(count: usize, spacing: f64) -> Vec<Atom> {
        chain("H", count, spacing).unwrap()
    }

    #[test]
    fn electron_counting_matches_piecewise_rule() {
        assert_eq!(core_electrons(1).unwrap(), 0); // H
        assert_eq!(core_electrons(3).unwrap(), 2); // Li
        assert_eq!(core_electrons(6).unwrap(), 2); // C
        assert_eq!(core_electrons(17).unwrap(), 10); // Cl
        assert_eq!(valence_electrons(1).unwrap(), 1);
        assert_eq!(valence_electrons(4).unwrap(), 2); // Be
        assert_eq!(valence_electrons(8).unwrap(), 6); // O
        assert!(core_electrons(18).is_err());
        assert!(core_electrons(0).is_err());
    }

    #[test]
    fn core_plus_valence_is_total() {
        for n in 1..=17 {
            assert_eq!(core_electrons(n).unwrap() + valence_electrons(n).unwrap(), n);
        }
    }

    #[test]
    fn h2_single_edge_is_valid() {
        let g = ChemicalGraph::new(h_chain(2, 0.74), vec![(0, 1)], vec![], "H2");
        validate_graph(&g).unwrap();
    }

    #[test]
    fn h4_two_pairings_are_valid() {
        let atoms = h_chain(4, 1.5);
        let outer = ChemicalGraph::new(atoms.clone(), vec![(0, 1), (2, 3)], vec![], "outer");
        let central = ChemicalGraph::new(atoms, vec![(0, 3), (1, 2)], vec![], "central");
        validate_graph(&outer).unwrap();
        validate_graph(&central).unwrap();
    }

    #[test]
    fn double_bond_on_hydrogen_reports_both_atoms() {
        let g = ChemicalGraph::new(h_chain(2, 0.74), vec![(0, 1), (0, 1)], vec![], "bad");
        let violations = g.connector_violations().unwrap();
        assert_eq!(violations.len(), 2);
        assert_eq!(violations[0], ConnectorViolation { atom: 0, expected: 1, found: 2 });
        assert!(validate_graph(&g).is_err());
    }

    #[test]
    fn water_with_lone_pairs_is_valid() {
        // O at origin, two H's; O has 6 valence electrons: 2 bonds + 2 lone pairs.
        let atoms = vec![
            Atom::new("O", [0.0, 0.0, 0.0]).unwrap(),
            Atom::new("H", [0.96, 0.0, 0.0]).unwrap(),
            Atom::new("H", [-0.24, 0.93, 0.0]).unwrap(),
        ];
        let g = ChemicalGraph::new(atoms, vec![(0, 1), (0, 2)], vec![0, 0], "H2O");
        validate_graph(&g).unwrap();
    }

    #[test]
    fn ranking_prefers_short_bonds_and_is_stable() {
        let atoms = h_chain(4, 1.5);
        let outer = ChemicalGraph::new(atoms.clone(), vec![(0, 1), (2, 3)], vec![], "outer");
        let central = ChemicalGraph::new(atoms, vec![(0, 3), (1, 2)], vec![], "central");
        let ranked = rank_graphs(&[central.clone(), outer.clone()]).unwrap();
        assert_eq!(ranked[0].label, "outer"); // two short bonds beat one
        assert_eq!(ranked[1].label, "central");

        // A single graph ranks to itself; identical graphs keep input order.
        let single = rank_graphs(&[outer.clone()]).unwrap();
        assert_eq!(single[0].label, "outer");
        let mut relabeled = outer.clone();
        relabeled.label = "copy".into();
        let tied = rank_graphs(&[outer.clone(), relabeled]).unwrap();
        assert_eq!(tied[0].label, "outer");
        assert_eq!(tied[1].label, "copy");
    }

    #[test]
    fn ranking_rejects_mismatched_atom_lists() {
        let g2 = ChemicalGraph::new(h_chain(2, 0.74), vec![(0, 1)], vec![], "a");
        let g4 = ChemicalGraph::new(h_chain(4, 1.5), vec![(0, 1), (2, 3)], vec![], "b");
        assert!(matches!(rank_graphs(&[g2, g4]), Err(Error::MismatchedAtoms(_))));
    }

    #[test]
    fn validation_is_invariant_under_edge_relabeling() {
        let atoms = h_chain(4, 1.5);
        let g = ChemicalGraph::new(atoms.clone(), vec![(0, 1), (2, 3)], vec![], "a");
        let permuted = ChemicalGraph::new(atoms, vec![(3, 2), (1, 0)], vec![], "b");
        assert!(validate_graph(&g).is_ok());
        assert!(validate_graph(&permuted).is_ok());
        assert!((g.score() - permuted.score()).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_elements_rejected() {
        assert!(Atom::new("Ar", [0.0; 3]).is_err());
        assert!(Atom::new("Xx", [0.0; 3]).is_err());
        assert!(Atom::new("H", [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn graph_config_json_round_trip() {
        let json = r#"{
            "atoms": [
                {"symbol": "H", "xyz": [0.0, 0.0, 0.0]},
                {"symbol": "H", "xyz": [1.5, 0.0, 0.0]},
                {"symbol": "H", "xyz": [3.0, 0.0, 0.0]},
                {"symbol": "H", "xyz": [4.5, 0.0, 0.0]}
            ],
            "graphs": [
                {"label": "outer", "edges": [[0,1],[2,3]]},
                {"edges": [[0,3],[1,2]], "lone_pairs": []}
            ]
        }"#;
        let config = GraphConfig::parse(json).unwrap();
        let graphs = config.chemical_graphs().unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[0].label, "outer");
        assert_eq!(graphs[1].label, "graph-1");
        assert_eq!(graphs[1].edges, vec![(0, 3), (1, 2)]);
        for g in &graphs {
            validate_graph(g).unwrap();
        }
    }
}

//! Experiment configuration: JSON in, validated structs out.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use molcirc_core::builder::{CorrelatorSpec, Motif, RotatorSpec};
use molcirc_core::graph::{AtomSpec, GraphSpec};
use molcirc_core::{Error, Result};

/// One `U_R · U_C · U_R†` motif in config form: rotators as
/// `[orbital_i, orbital_j, initial_angle]`, correlators as
/// `[orbital_i, orbital_j]` (their parameters always start at 0).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MotifSpec {
    #[serde(default)]
    pub rotators: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub correlators: Vec<(usize, usize)>,
}

impl MotifSpec {
    /// Builder-level motif with parameter names carrying the given prefix.
    pub fn to_motif(&self, prefix: &str) -> Motif {
        Motif {
            rotators: self
                .rotators
                .iter()
                .enumerate()
                .map(|(k, &(i, j, initial))| RotatorSpec {
                    i,
                    j,
                    name: format!("{prefix}r{k}_{i}_{j}"),
                    initial,
                })
                .collect(),
            correlators: self
                .correlators
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| CorrelatorSpec {
                    i,
                    j,
                    name: format!("{prefix}c{k}_{i}_{j}"),
                })
                .collect(),
        }
    }
}

/// Ansatz selection. The named ladders derive their motifs from the ranked
/// graph list; `custom` takes motifs verbatim from the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnsatzKind {
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "SPA+")]
    SpaPlus,
    #[serde(rename = "SPA+X")]
    SpaPlusX,
    #[serde(rename = "custom")]
    Custom,
}

impl AnsatzKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AnsatzKind::Spa => "SPA",
            AnsatzKind::SpaPlus => "SPA+",
            AnsatzKind::SpaPlusX => "SPA+X",
            AnsatzKind::Custom => "custom",
        }
    }
}

/// Optimizer settings surfaced in the config file; all optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerSettings {
    pub energy_tol: f64,
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Optimize the orbital frame alongside the circuit parameters
    /// (the SPA stage); motif stages reuse the optimized frame.
    pub orbital_optimization: bool,
    pub max_outer: usize,
    /// `auto` | `pauli` | `sector`.
    pub backend: String,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            energy_tol: 1e-9,
            grad_tol: 1e-5,
            max_iters: 500,
            orbital_optimization: true,
            max_outer: 50,
            backend: "auto".into(),
        }
    }
}

/// A full experiment: geometry, graphs, ansatz, optimizer, output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Label used in report rows.
    pub system: String,
    /// Inline geometry (one of `atoms` / `fcidump`, exactly one required).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomSpec>>,
    /// Integrals from an FCIDUMP file instead of the built-in engine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fcidump: Option<String>,
    /// Total charge (inline geometries only); electrons = Σ Z − charge.
    #[serde(default)]
    pub charge: i64,
    /// Candidate chemical graphs, strongest first unless ranking reorders.
    #[serde(default)]
    pub graphs: Vec<GraphSpec>,
    pub ansatz: AnsatzKind,
    /// Motifs for `ansatz = "custom"`, one circuit block per entry,
    /// applied in graph order.
    #[serde(default)]
    pub motifs: Vec<MotifSpec>,
    /// Spatial orbitals folded into the core before anything else runs.
    #[serde(default)]
    pub frozen_orbitals: Vec<usize>,
    /// Occupied spin modes of the initial basis state. Defaults to the SPA
    /// reference; required for odd-electron systems (no SPA stage).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_occupation: Option<Vec<usize>>,
    /// Spin sector 2·S_z (defaults to `n_electrons mod 2`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_s_z: Option<i32>,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            serde_json::from_str(json).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        ExperimentConfig::from_json(&json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.atoms, &self.fcidump) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "exactly one geometry source: config sets both `atoms` and `fcidump`".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "exactly one geometry source: config sets neither `atoms` nor `fcidump`"
                        .into(),
                ))
            }
            _ => {}
        }
        if self.ansatz == AnsatzKind::Custom {
            if self.motifs.is_empty() {
                return Err(Error::InvalidConfig(
                    "custom ansatz needs at least one motif".into(),
                ));
            }
            if self.initial_occupation.is_none() && self.graphs.is_empty() {
                return Err(Error::InvalidConfig(
                    "custom ansatz needs an initial occupation or graphs for the SPA base"
                        .into(),
                ));
            }
        } else if self.graphs.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "{} ansatz derives its circuit from graphs; none given",
                self.ansatz.as_str()
            )));
        }
        if let Some(atoms) = &self.atoms {
            let n_atoms = atoms.len();
            for (gi, g) in self.graphs.iter().enumerate() {
                for &[a, b] in &g.edges {
                    if a >= n_atoms || b >= n_atoms {
                        return Err(Error::InvalidConfig(format!(
                            "graph {gi} edge [{a}, {b}] references a vertex outside 0..{n_atoms}"
                        )));
                    }
                }
            }
        }
        if let Some(occ) = &self.initial_occupation {
            let mut seen = BTreeMap::new();
            for &mode in occ {
                if seen.insert(mode, ()).is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "initial occupation repeats spin mode {mode}"
                    )));
                }
            }
        }
        match self.optimizer.backend.as_str() {
            "auto" | "pauli" | "sector" => {}
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown backend {other:?}: expected auto | pauli | sector"
                )))
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        r#"{
            "system": "H2",
            "atoms": [
                {"symbol": "H", "xyz": [0.0, 0.0, 0.0]},
                {"symbol": "H", "xyz": [0.74, 0.0, 0.0]}
            ],
            "graphs": [{"edges": [[0, 1]]}],
            "ansatz": "SPA"
        }"#
        .to_string()
    }

    #[test]
    fn minimal_config_parses_and_round_trips() {
        let config = ExperimentConfig::from_json(&minimal_json()).unwrap();
        assert_eq!(config.system, "H2");
        assert_eq!(config.ansatz, AnsatzKind::Spa);
        assert!(config.optimizer.orbital_optimization);

        let round = ExperimentConfig::from_json(&config.to_json()).unwrap();
        assert_eq!(round.system, config.system);
        assert_eq!(round.ansatz, config.ansatz);
    }

    #[test]
    fn both_geometry_sources_are_rejected() {
        let mut config = ExperimentConfig::from_json(&minimal_json()).unwrap();
        config.fcidump = Some("ints.fcidump".into());
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("exactly one geometry source"));
    }

    #[test]
    fn missing_geometry_is_rejected() {
        let mut config = ExperimentConfig::from_json(&minimal_json()).unwrap();
        config.atoms = None;
        assert!(config.validate().is_err());
    }

    #[test]
    fn custom_ansatz_requires_motifs() {
        let json = r#"{
            "system": "H3",
            "atoms": [
                {"symbol": "H", "xyz": [0.0, 0.0, 0.0]},
                {"symbol": "H", "xyz": [1.5, 0.0, 0.0]},
                {"symbol": "H", "xyz": [3.0, 0.0, 0.0]}
            ],
            "ansatz": "custom",
            "initial_occupation": [0, 1, 4]
        }"#;
        let err = ExperimentConfig::from_json(json).unwrap_err();
        assert!(err.to_string().contains("at least one motif"));
    }

    #[test]
    fn motif_spec_prefixes_parameter_names() {
        let spec = MotifSpec {
            rotators: vec![(0, 1, 0.5)],
            correlators: vec![(1, 2)],
        };
        let motif = spec.to_motif("g0_");
        assert_eq!(motif.rotators[0].name, "g0_r0_0_1");
        assert_eq!(motif.correlators[0].name, "g0_c0_1_2");
        assert_eq!(motif.rotators[0].initial, 0.5);
    }

    #[test]
    fn unknown_backend_is_rejected() {
        let mut config = ExperimentConfig::from_json(&minimal_json()).unwrap();
        config.optimizer.backend = "gpu".into();
        assert!(config.validate().is_err());
    }
}

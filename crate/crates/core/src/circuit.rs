//! Gate-level circuits with symbolic parameters.
//!
//! A [`Circuit`] is an ordered gate list over a fixed register plus a table
//! of named parameters with their current values (radians). Angles are either
//! fixed or symbolic references carrying a multiplier, so a block and its
//! adjoint can share one optimization variable with opposite signs.
//!
//! Gate order follows circuit-diagram convention: `gates[0]` acts first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fermion::{Axis, PauliString, PauliSum};
use crate::{Error, Result};

/// A gate angle: a fixed value in radians, or `mult · value(name)` for a
/// named parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Fixed(f64),
    Sym { name: String, mult: f64 },
}

impl Angle {
    /// Symbolic angle with unit multiplier.
    pub fn sym(name: impl Into<String>) -> Angle {
        Angle::Sym {
            name: name.into(),
            mult: 1.0,
        }
    }

    /// Angle with sign flipped (adjoint of the rotation).
    pub fn negated(&self) -> Angle {
        match self {
            Angle::Fixed(v) => Angle::Fixed(-v),
            Angle::Sym { name, mult } => Angle::Sym {
                name: name.clone(),
                mult: -mult,
            },
        }
    }

    /// Angle scaled by a constant factor.
    pub fn scaled(&self, factor: f64) -> Angle {
        match self {
            Angle::Fixed(v) => Angle::Fixed(v * factor),
            Angle::Sym { name, mult } => Angle::Sym {
                name: name.clone(),
                mult: mult * factor,
            },
        }
    }

    /// Parameter name, if symbolic.
    pub fn name(&self) -> Option<&str> {
        match self {
            Angle::Fixed(_) => None,
            Angle::Sym { name, .. } => Some(name),
        }
    }

    /// Numeric value under the given parameter bindings.
    pub fn resolve(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        match self {
            Angle::Fixed(v) => Ok(*v),
            Angle::Sym { name, mult } => values
                .get(name)
                .map(|v| v * mult)
                .ok_or_else(|| Error::InvalidAssignment(format!("parameter {name:?} is unbound"))),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Fixed(v) => write!(f, "{v:.6}"),
            Angle::Sym { name, mult } if *mult == 1.0 => write!(f, "{name}"),
            Angle::Sym { name, mult } => write!(f, "{mult}*{name}"),
        }
    }
}

/// Circuit gates. `CRY` and `PauliRotation` are composite: they decompose to
/// the primitive set {X, H, RX, RY, RZ, CNOT} for metrics and export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    X { qubit: usize },
    H { qubit: usize },
    Rx { qubit: usize, angle: Angle },
    Ry { qubit: usize, angle: Angle },
    Rz { qubit: usize, angle: Angle },
    Cnot { control: usize, target: usize },
    Cry { control: usize, target: usize, angle: Angle },
    PauliRotation { string: PauliString, angle: Angle },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { qubit } | Gate::H { qubit } => vec![*qubit],
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => {
                vec![*qubit]
            }
            Gate::Cnot { control, target } | Gate::Cry { control, target, .. } => {
                vec![*control, *target]
            }
            Gate::PauliRotation { string, .. } => string.iter().map(|(q, _)| q).collect(),
        }
    }

    /// The gate's angle, if parameterized.
    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Cry { angle, .. }
            | Gate::PauliRotation { angle, .. } => Some(angle),
            Gate::X { .. } | Gate::H { .. } | Gate::Cnot { .. } => None,
        }
    }

    /// Inverse gate (adjoint).
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::X { .. } | Gate::H { .. } | Gate::Cnot { .. } => self.clone(),
            Gate::Rx { qubit, angle } => Gate::Rx {
                qubit: *qubit,
                angle: angle.negated(),
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit: *qubit,
                angle: angle.negated(),
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit: *qubit,
                angle: angle.negated(),
            },
            Gate::Cry {
                control,
                target,
                angle,
            } => Gate::Cry {
                control: *control,
                target: *target,
                angle: angle.negated(),
            },
            Gate::PauliRotation { string, angle } => Gate::PauliRotation {
                string: string.clone(),
                angle: angle.negated(),
            },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X { qubit } => write!(f, "x q{qubit}"),
            Gate::H { qubit } => write!(f, "h q{qubit}"),
            Gate::Rx { qubit, angle } => write!(f, "rx({angle}) q{qubit}"),
            Gate::Ry { qubit, angle } => write!(f, "ry({angle}) q{qubit}"),
            Gate::Rz { qubit, angle } => write!(f, "rz({angle}) q{qubit}"),
            Gate::Cnot { control, target } => write!(f, "cnot q{control} q{target}"),
            Gate::Cry {
                control,
                target,
                angle,
            } => write!(f, "cry({angle}) q{control} q{target}"),
            Gate::PauliRotation { string, angle } => write!(f, "rot({angle}) [{string}]"),
        }
    }
}

/// Resource metrics of a circuit after decomposition to primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub cnot_count: usize,
    pub depth: usize,
    pub n_parameters: usize,
}

/// Ordered gate list over `n_qubits` qubits with a parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    gates: Vec<Gate>,
    /// Parameter name → current value (radians). Doubles as the initial
    /// guess for optimization.
    params: BTreeMap<String, f64>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Append one gate, validating qubit indices and angle finiteness.
    /// Symbolic parameters not yet in the table are registered at value 0.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if qubits.is_empty() {
            return Err(Error::InvalidCircuit(
                "gate must act on at least one qubit".into(),
            ));
        }
        for &q in &qubits {
            if q >= self.n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "gate {gate} uses qubit {q}, register has {} qubits",
                    self.n_qubits
                )));
            }
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCircuit(format!(
                "gate {gate} repeats a qubit index"
            )));
        }
        match gate.angle() {
            Some(Angle::Fixed(v)) if !v.is_finite() => {
                return Err(Error::InvalidCircuit("non-finite fixed angle".into()));
            }
            Some(Angle::Sym { name, mult }) => {
                if !mult.is_finite() {
                    return Err(Error::InvalidCircuit(format!(
                        "non-finite multiplier on parameter {name:?}"
                    )));
                }
                self.params.entry(name.clone()).or_insert(0.0);
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Append all gates of another circuit. Parameters with the same name are
    /// shared; a value already present in `self` wins, otherwise the appended
    /// circuit's value is adopted.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::InvalidCircuit(format!(
                "cannot append a {}-qubit circuit to a {}-qubit register",
                other.n_qubits, self.n_qubits
            )));
        }
        // Record which names pre-date the append: `push` auto-registers new
        // symbols at 0, which must not shadow the appended circuit's values.
        let pre_existing: Vec<String> = self.params.keys().cloned().collect();
        for gate in &other.gates {
            self.push(gate.clone())?;
        }
        for (name, value) in &other.params {
            if pre_existing.binary_search(name).is_err() {
                self.params.insert(name.clone(), *value);
            }
        }
        Ok(())
    }

    /// Set a parameter's current value.
    pub fn set_value(&mut self, name: &str, value: f64) -> Result<()> {
        match self.params.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InvalidAssignment(format!(
                "unknown parameter {name:?}"
            ))),
        }
    }

    /// Current parameter bindings.
    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Parameter names in sorted (deterministic) order.
    pub fn param_names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }

    pub fn n_parameters(&self) -> usize {
        self.params.len()
    }

    /// Current values in `param_names` order.
    pub fn values_vec(&self) -> Vec<f64> {
        self.params.values().copied().collect()
    }

    /// Bindings map from a flat vector in `param_names` order.
    pub fn bind_vec(&self, values: &[f64]) -> Result<BTreeMap<String, f64>> {
        if values.len() != self.params.len() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: self.params.len(),
            });
        }
        Ok(self
            .params
            .keys()
            .cloned()
            .zip(values.iter().copied())
            .collect())
    }

    /// Copy with every symbolic parameter renamed to `prefix + name`, so the
    /// same block template can be instantiated twice with independent
    /// parameters.
    pub fn with_prefixed_params(&self, prefix: &str) -> Circuit {
        let rename = |angle: &Angle| match angle {
            Angle::Fixed(v) => Angle::Fixed(*v),
            Angle::Sym { name, mult } => Angle::Sym {
                name: format!("{prefix}{name}"),
                mult: *mult,
            },
        };
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Rx { qubit, angle } => Gate::Rx {
                    qubit: *qubit,
                    angle: rename(angle),
                },
                Gate::Ry { qubit, angle } => Gate::Ry {
                    qubit: *qubit,
                    angle: rename(angle),
                },
                Gate::Rz { qubit, angle } => Gate::Rz {
                    qubit: *qubit,
                    angle: rename(angle),
                },
                Gate::Cry {
                    control,
                    target,
                    angle,
                } => Gate::Cry {
                    control: *control,
                    target: *target,
                    angle: rename(angle),
                },
                Gate::PauliRotation { string, angle } => Gate::PauliRotation {
                    string: string.clone(),
                    angle: rename(angle),
                },
                fixed => fixed.clone(),
            })
            .collect();
        Circuit {
            n_qubits: self.n_qubits,
            gates,
            params: self
                .params
                .iter()
                .map(|(name, value)| (format!("{prefix}{name}"), *value))
                .collect(),
        }
    }

    /// Adjoint circuit: reversed gate order, negated angles. Parameter table
    /// (names and values) is shared so `U·U† = 1` holds under any binding.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            params: self.params.clone(),
        }
    }

    /// Expand composite gates (CRY, Pauli rotations) into the primitive set
    /// {X, H, RX, RY, RZ, CNOT}. Parameter table is preserved.
    pub fn decompose(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_qubits);
        for gate in &self.gates {
            match gate {
                Gate::Cry {
                    control,
                    target,
                    angle,
                } => {
                    // CRY(c,t,θ) = RY(t,θ/2)·CNOT(c,t)·RY(t,−θ/2)·CNOT(c,t).
                    out.push(Gate::Ry {
                        qubit: *target,
                        angle: angle.scaled(0.5),
                    })?;
                    out.push(Gate::Cnot {
                        control: *control,
                        target: *target,
                    })?;
                    out.push(Gate::Ry {
                        qubit: *target,
                        angle: angle.scaled(-0.5),
                    })?;
                    out.push(Gate::Cnot {
                        control: *control,
                        target: *target,
                    })?;
                }
                Gate::PauliRotation { string, angle } => {
                    for g in compile_pauli_rotation(string, angle.clone())? {
                        out.push(g)?;
                    }
                }
                other => out.push(other.clone())?,
            }
        }
        // push() registers fresh symbols at 0; overwrite with the real
        // bindings rather than or_insert, which would keep the zeros.
        for (name, value) in &self.params {
            out.params.insert(name.clone(), *value);
        }
        Ok(out)
    }

    /// Resource metrics on the decomposed circuit: CNOT count, dependency-DAG
    /// depth (gates on disjoint qubits are parallel), and the number of
    /// distinct symbolic parameters.
    pub fn metrics(&self) -> Result<Metrics> {
        let flat = self.decompose()?;
        let mut cnot_count = 0;
        let mut qubit_level = vec![0usize; flat.n_qubits];
        let mut depth = 0;
        for gate in &flat.gates {
            // Fixed zero-angle rotations are the identity; they carry no
            // cost, so inserting them must leave the metrics unchanged.
            // (Symbolic angles always count: their value can change.)
            if matches!(gate.angle(), Some(Angle::Fixed(v)) if *v == 0.0) {
                continue;
            }
            if matches!(gate, Gate::Cnot { .. }) {
                cnot_count += 1;
            }
            let level = 1 + gate
                .qubits()
                .iter()
                .map(|&q| qubit_level[q])
                .max()
                .unwrap_or(0);
            for q in gate.qubits() {
                qubit_level[q] = level;
            }
            depth = depth.max(level);
        }
        Ok(Metrics {
            cnot_count,
            depth,
            n_parameters: self.n_parameters(),
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} qubits, {} gates", self.n_qubits, self.gates.len())?;
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}

/// Compile `exp(-i·θ/2 · P)` for a single Pauli string into primitives:
/// a basis-change layer (H for X, RX(+π/2) for Y), a CNOT ladder onto the
/// last string qubit, RZ(θ) there, and the mirrored uncompute (with RX(−π/2)
/// closing the Y conjugations).
pub fn compile_pauli_rotation(string: &PauliString, angle: Angle) -> Result<Vec<Gate>> {
    if string.is_identity() {
        return Err(Error::InvalidCircuit(
            "rotation about the identity is a global phase".into(),
        ));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut enter = Vec::new();
    let mut leave = Vec::new();
    for (q, axis) in string.iter() {
        match axis {
            Axis::X => {
                enter.push(Gate::H { qubit: q });
                leave.push(Gate::H { qubit: q });
            }
            Axis::Y => {
                enter.push(Gate::Rx {
                    qubit: q,
                    angle: Angle::Fixed(half_pi),
                });
                leave.push(Gate::Rx {
                    qubit: q,
                    angle: Angle::Fixed(-half_pi),
                });
            }
            Axis::Z => {}
        }
    }
    let qubits: Vec<usize> = string.iter().map(|(q, _)| q).collect();
    let last = *qubits.last().expect("non-identity string");
    let mut gates = enter;
    for w in qubits.windows(2) {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    gates.push(Gate::Rz {
        qubit: last,
        angle,
    });
    for w in qubits.windows(2).rev() {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    gates.extend(leave.into_iter().rev());
    Ok(gates)
}

/// Rotation `exp(-i·θ/2 · G)` for a Hermitian generator whose Pauli terms all
/// mutually commute: the exponential factorizes exactly into one Pauli
/// rotation per term, with the term coefficient folded into the angle
/// multiplier. Term order follows the generator's canonical ordering.
pub fn rotation_from_generator(generator: &PauliSum, angle: Angle) -> Result<Vec<Gate>> {
    if !generator.is_hermitian(1e-12) {
        return Err(Error::InvalidOperator(format!(
            "generator must be Hermitian (max imaginary coefficient {:.3e})",
            generator.max_imag()
        )));
    }
    let terms = generator.terms_vec();
    for (i, (pa, _)) in terms.iter().enumerate() {
        for (pb, _) in terms.iter().skip(i + 1) {
            if !pa.commutes_with(pb) {
                return Err(Error::InvalidOperator(format!(
                    "generator terms {pa} and {pb} do not commute; \
                     the exponential does not factorize"
                )));
            }
        }
    }
    let mut gates = Vec::with_capacity(terms.len());
    for (p, coeff) in terms {
        if p.is_identity() {
            continue; // global phase
        }
        gates.push(Gate::PauliRotation {
            angle: angle.scaled(coeff.re),
            string: p,
        });
    }
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit_with(gates: Vec<Gate>, n_qubits: usize) -> Circuit {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g).unwrap();
        }
        c
    }

    #[test]
    fn push_validates_indices_and_angles() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::X { qubit: 2 }).is_err());
        assert!(c
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(c
            .push(Gate::Ry {
                qubit: 0,
                angle: Angle::Fixed(f64::NAN)
            })
            .is_err());
        assert!(c
            .push(Gate::Cry {
                control: 0,
                target: 1,
                angle: Angle::sym("a")
            })
            .is_ok());
        assert_eq!(c.param_names(), vec!["a".to_string()]);
        assert_eq!(c.values()["a"], 0.0);
    }

    #[test]
    fn adjoint_reverses_and_negates() {
        let c = circuit_with(
            vec![
                Gate::X { qubit: 0 },
                Gate::Ry {
                    qubit: 1,
                    angle: Angle::sym("t"),
                },
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
            2,
        );
        let adj = c.adjoint();
        assert_eq!(adj.gates()[0], Gate::Cnot { control: 0, target: 1 });
        assert_eq!(
            adj.gates()[1],
            Gate::Ry {
                qubit: 1,
                angle: Angle::Sym {
                    name: "t".into(),
                    mult: -1.0
                }
            }
        );
        assert_eq!(adj.gates()[2], Gate::X { qubit: 0 });
        // Involution.
        assert_eq!(adj.adjoint(), c);
        // Empty circuit stays empty.
        assert_eq!(Circuit::new(3).adjoint().num_gates(), 0);
    }

    #[test]
    fn single_z_compiles_to_one_rz() {
        let gates =
            compile_pauli_rotation(&"Z0".parse().unwrap(), Angle::Fixed(0.4)).unwrap();
        assert_eq!(
            gates,
            vec![Gate::Rz {
                qubit: 0,
                angle: Angle::Fixed(0.4)
            }]
        );
    }

    #[test]
    fn three_qubit_rotation_structure() {
        let gates =
            compile_pauli_rotation(&"X0 Z1 Y2".parse().unwrap(), Angle::sym("t")).unwrap();
        // H, RX(π/2), CNOT(0,1), CNOT(1,2), RZ, CNOT(1,2), CNOT(0,1),
        // RX(−π/2), H.
        assert_eq!(gates.len(), 9);
        assert_eq!(gates[0], Gate::H { qubit: 0 });
        assert!(matches!(gates[1], Gate::Rx { qubit: 2, .. }));
        assert_eq!(gates[2], Gate::Cnot { control: 0, target: 1 });
        assert_eq!(gates[3], Gate::Cnot { control: 1, target: 2 });
        assert!(matches!(gates[4], Gate::Rz { qubit: 2, .. }));
        assert_eq!(gates[5], Gate::Cnot { control: 1, target: 2 });
        assert_eq!(gates[6], Gate::Cnot { control: 0, target: 1 });
        assert!(matches!(
            gates[7],
            Gate::Rx { qubit: 2, angle: Angle::Fixed(a) } if a < 0.0
        ));
        assert_eq!(gates[8], Gate::H { qubit: 0 });
        // Identity string is a global phase, not a circuit.
        assert!(compile_pauli_rotation(&PauliString::identity(), Angle::Fixed(1.0)).is_err());
    }

    #[test]
    fn cry_decomposes_to_two_cnots() {
        let c = circuit_with(
            vec![Gate::Cry {
                control: 0,
                target: 1,
                angle: Angle::sym("t"),
            }],
            2,
        );
        let flat = c.decompose().unwrap();
        assert_eq!(flat.num_gates(), 4);
        let m = c.metrics().unwrap();
        assert_eq!(m.cnot_count, 2);
        assert_eq!(m.n_parameters, 1);
        // Half-angle multipliers survive decomposition.
        assert_eq!(
            flat.gates()[0],
            Gate::Ry {
                qubit: 1,
                angle: Angle::Sym {
                    name: "t".into(),
                    mult: 0.5
                }
            }
        );
    }

    #[test]
    fn metrics_counts_dag_depth() {
        // Two disjoint X gates are parallel; the CNOT serializes them.
        let c = circuit_with(
            vec![
                Gate::X { qubit: 0 },
                Gate::X { qubit: 1 },
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
            2,
        );
        let m = c.metrics().unwrap();
        assert_eq!(m.depth, 2);
        assert_eq!(m.cnot_count, 1);
        assert_eq!(m.n_parameters, 0);
        let empty = Circuit::new(4).metrics().unwrap();
        assert_eq!((empty.cnot_count, empty.depth, empty.n_parameters), (0, 0, 0));
    }

    #[test]
    fn rotation_from_generator_requires_commuting_terms() {
        use num_complex::Complex64;
        let commuting = PauliSum::from_terms([
            ("X0 Z1 Y2".parse().unwrap(), Complex64::new(0.5, 0.0)),
            ("Y0 Z1 X2".parse().unwrap(), Complex64::new(-0.5, 0.0)),
        ]);
        let gates = rotation_from_generator(&commuting, Angle::sym("phi")).unwrap();
        assert_eq!(gates.len(), 2);
        assert!(matches!(
            &gates[0],
            Gate::PauliRotation { angle: Angle::Sym { mult, .. }, .. } if *mult == 0.5
        ));
        let clashing = PauliSum::from_terms([
            ("X0".parse().unwrap(), Complex64::new(1.0, 0.0)),
            ("Z0".parse().unwrap(), Complex64::new(1.0, 0.0)),
        ]);
        assert!(rotation_from_generator(&clashing, Angle::Fixed(0.1)).is_err());
        let skew = PauliSum::from_terms([("X0".parse().unwrap(), Complex64::new(0.0, 1.0))]);
        assert!(rotation_from_generator(&skew, Angle::Fixed(0.1)).is_err());
    }

    #[test]
    fn shared_parameters_merge_on_append() {
        let mut a = Circuit::new(2);
        a.push(Gate::Ry {
            qubit: 0,
            angle: Angle::sym("shared"),
        })
        .unwrap();
        a.set_value("shared", 0.7).unwrap();
        let mut b = Circuit::new(2);
        b.push(Gate::Rz {
            qubit: 1,
            angle: Angle::Sym {
                name: "shared".into(),
                mult: -1.0,
            },
        })
        .unwrap();
        a.append(&b).unwrap();
        assert_eq!(a.n_parameters(), 1);
        assert_eq!(a.values()["shared"], 0.7);
    }

    #[test]
    fn bind_vec_follows_sorted_name_order() {
        let mut c = Circuit::new(1);
        c.push(Gate::Ry {
            qubit: 0,
            angle: Angle::sym("b"),
        })
        .unwrap();
        c.push(Gate::Rz {
            qubit: 0,
            angle: Angle::sym("a"),
        })
        .unwrap();
        assert_eq!(c.param_names(), vec!["a".to_string(), "b".to_string()]);
        let bound = c.bind_vec(&[0.1, 0.2]).unwrap();
        assert_eq!(bound["a"], 0.1);
        assert_eq!(bound["b"], 0.2);
        assert!(c.bind_vec(&[0.1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut c = Circuit::new(3);
        c.push(Gate::X { qubit: 0 }).unwrap();
        c.push(Gate::Cry {
            control: 0,
            target: 2,
            angle: Angle::sym("theta"),
        })
        .unwrap();
        c.push(Gate::PauliRotation {
            string: "X0 Z1 Y2".parse().unwrap(),
            angle: Angle::Fixed(0.25),
        })
        .unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        // Text dump has one gate per line.
        let dump = c.to_string();
        assert_eq!(dump.lines().count(), 4);
        assert!(dump.contains("cry(theta) q0 q2"));
    }
}

//! Molecular quantum circuits from chemical graphs.
//!
//! This crate builds, simulates, and optimizes separable-pair-style
//! variational circuits for small molecules:
//!
//! - [`graph`] — chemical graphs (Lewis structures): atoms, bond edges,
//!   lone pairs, valence accounting, validation, importance ranking.
//! - [`integrals`] — molecular integrals in an orthonormal orbital basis:
//!   a built-in STO-3G s-orbital engine for H/He systems, FCIDUMP ingestion
//!   for everything else, orbital rotations, frozen-core folding.
//! - [`fermion`] — second-quantized operators, Pauli-string algebra, and the
//!   Jordan-Wigner encoding.
//! - [`circuit`] — gate-level circuits with symbolic parameters,
//!   Pauli-rotation compilation, adjoints, and resource metrics.
//! - [`builder`] — circuit construction from graphs: the pair ansatz (SPA),
//!   orbital rotators, pair correlators, and motif blocks (SPA+ / SPA+X).
//! - [`sim`] — dense statevector simulation, expectation values, reduced
//!   density matrices, fidelities, and the linear-memory SPA evaluator.
//! - [`opt`] — BFGS parameter optimization (finite-difference and
//!   parameter-shift gradients) and the orbital-optimization outer loop.
//! - [`fci`] — full-configuration-interaction reference energies and states.
//! - [`dense`] — small dense-matrix utilities backing the verification
//!   oracles (Pauli-sum matrices, unitaries of circuits, matrix exponentials).
//!
//! Conventions, fixed across the whole crate and pinned by tests:
//!
//! - Spatial orbital `k` owns spin modes `2k` (up) and `2k+1` (down).
//! - Qubit `q` stores the occupation of spin mode `q`; `|1⟩` = occupied.
//! - Statevector indices are little-endian: qubit 0 is the least significant
//!   bit, so the ket `|1100⟩` (modes 0 and 1 occupied) is basis index 3.
//! - Two-electron integrals use chemists' notation `(kl|mn)`.
//! - All energies in Hartree, all angles in radians, positions in Ångström
//!   (converted to Bohr internally where atomic units are required).

pub mod builder;
pub mod circuit;
pub mod dense;
pub mod fci;
pub mod fermion;
pub mod graph;
pub mod integrals;
pub mod opt;
pub mod parallel;
pub mod sim;

/// Bohr radius in Ångström (CODATA 2018).
pub const BOHR_RADIUS_ANGSTROM: f64 = 0.529177210903;

/// Coefficients with magnitude at or below this threshold are pruned from
/// Pauli sums, keeping term maps canonical for equality tests.
pub const COEFF_PRUNE_THRESHOLD: f64 = 1e-14;

/// Errors produced by this crate.
///
/// [`ErrorKind`] classifies each error as a configuration/input problem or a
/// numerical failure, which the CLI maps to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported element {symbol:?} (atomic number {n_a}): supported range is 1..=17")]
    UnsupportedElement { symbol: String, n_a: i64 },
    #[error(
        "no built-in basis for element {symbol:?}: the STO-3G engine covers H and He only; \
         ingest integrals for this system from an FCIDUMP file instead"
    )]
    BasisNotAvailable { symbol: String },
    #[error("graph validation failed: {0}")]
    InvalidGraph(String),
    #[error("graphs must share the same atom list: {0}")]
    MismatchedAtoms(String),
    #[error("near-linear dependence in overlap matrix: eigenvalue {eigenvalue:.3e} below 1e-8")]
    LinearDependence { eigenvalue: f64 },
    #[error("{path}:{line}: FCIDUMP parse error: {message}")]
    FcidumpParse { path: String, line: usize, message: String },
    #[error("matrix is not orthogonal: max |UᵀU - I| = {deviation:.3e}")]
    NotOrthogonal { deviation: f64 },
    #[error("invalid integrals: {0}")]
    InvalidIntegrals(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid orbital assignment: {0}")]
    InvalidAssignment(String),
    #[error("simulation requires {requested} qubits, above the cap of {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },
    #[error("state dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state is not pure in the requested particle sector: leakage {leakage:.3e}")]
    MixedSector { leakage: f64 },
    #[error("FCI sector dimension {dim} exceeds the cap of {cap}")]
    SectorCapExceeded { dim: usize, cap: usize },
    #[error("optimization produced a non-finite energy at parameters {params:?}")]
    NonFiniteEnergy { params: Vec<f64> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("eigensolver failed to converge: {0}")]
    EigenFailure(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse error classification used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: configuration, file contents, unsupported request.
    Config,
    /// Numerical or resource failure during an otherwise valid computation.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnsupportedElement { .. }
            | Error::BasisNotAvailable { .. }
            | Error::InvalidGraph(_)
            | Error::MismatchedAtoms(_)
            | Error::FcidumpParse { .. }
            | Error::InvalidIntegrals(_)
            | Error::InvalidOperator(_)
            | Error::InvalidCircuit(_)
            | Error::InvalidAssignment(_)
            | Error::InvalidConfig(_)
            | Error::DimensionMismatch { .. }
            | Error::Io { .. } => ErrorKind::Config,
            Error::LinearDependence { .. }
            | Error::NotOrthogonal { .. }
            | Error::QubitCapExceeded { .. }
            | Error::MixedSector { .. }
            | Error::SectorCapExceeded { .. }
            | Error::NonFiniteEnergy { .. }
            | Error::EigenFailure(_) => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Sparse Pauli strings and real-time Pauli-sum algebra.
//!
//! A [`PauliString`] is a product of single-qubit Pauli operators, stored as
//! a sorted sparse list of `(qubit, axis)` pairs; the empty string is the
//! identity. A [`PauliSum`] maps strings to complex coefficients and supports
//! the ring operations needed by the Jordan-Wigner encoding: addition,
//! scaling, and products with exact phase tracking. Coefficients with
//! magnitude ≤ 1e-14 are pruned so sums stay canonical for equality tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, COEFF_PRUNE_THRESHOLD};

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Axis> {
        match c {
            'X' | 'x' => Some(Axis::X),
            'Y' | 'y' => Some(Axis::Y),
            'Z' | 'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Product of two single-qubit Paulis: returns (power of i, remaining axis).
/// `None` axis means the product is the identity (equal axes).
fn axis_product(a: Axis, b: Axis) -> (u8, Option<Axis>) {
    use Axis::*;
    match (a, b) {
        (X, X) | (Y, Y) | (Z, Z) => (0, None),
        (X, Y) => (1, Some(Z)),
        (Y, Z) => (1, Some(X)),
        (Z, X) => (1, Some(Y)),
        (Y, X) => (3, Some(Z)),
        (Z, Y) => (3, Some(X)),
        (X, Z) => (3, Some(Y)),
    }
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Sparse Pauli string: sorted, duplicate-free list of `(qubit, axis)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString {
    factors: Vec<(u16, Axis)>,
}

impl PauliString {
    /// The identity string.
    pub fn identity() -> Self {
        PauliString { factors: Vec::new() }
    }

    /// Build from `(qubit, axis)` pairs; sorts by qubit, rejects duplicates.
    pub fn new(pairs: impl IntoIterator<Item = (usize, Axis)>) -> Result<Self> {
        let mut factors: Vec<(u16, Axis)> = pairs
            .into_iter()
            .map(|(q, a)| {
                u16::try_from(q)
                    .map(|q| (q, a))
                    .map_err(|_| Error::InvalidOperator(format!("qubit index {q} out of range")))
            })
            .collect::<Result<_>>()?;
        factors.sort_by_key(|&(q, _)| q);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidOperator(
                "duplicate qubit in Pauli string".into(),
            ));
        }
        Ok(PauliString { factors })
    }

    /// Single-qubit string.
    pub fn single(qubit: usize, axis: Axis) -> Self {
        PauliString {
            factors: vec![(qubit as u16, axis)],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    /// Largest qubit index acted on, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q as usize)
    }

    pub fn factors(&self) -> &[(u16, Axis)] {
        &self.factors
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        self.factors.iter().map(|&(q, a)| (q as usize, a))
    }

    /// Product `self · other` as (power of i, resulting string).
    pub fn mul(&self, other: &PauliString) -> (u8, PauliString) {
        let mut phase: u8 = 0;
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (qa, aa) = self.factors[i];
            let (qb, ab) = other.factors[j];
            if qa < qb {
                factors.push((qa, aa));
                i += 1;
            } else if qb < qa {
                factors.push((qb, ab));
                j += 1;
            } else {
                let (p, axis) = axis_product(aa, ab);
                phase = (phase + p) % 4;
                if let Some(axis) = axis {
                    factors.push((qa, axis));
                }
                i += 1;
                j += 1;
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        (phase, PauliString { factors })
    }

    /// Whether the two strings commute (they either commute or anticommute;
    /// they anticommute iff they differ on an odd number of shared qubits).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut clashes = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (qa, aa) = self.factors[i];
            let (qb, ab) = other.factors[j];
            if qa < qb {
                i += 1;
            } else if qb < qa {
                j += 1;
            } else {
                if aa != ab {
                    clashes += 1;
                }
                i += 1;
                j += 1;
            }
        }
        clashes % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (i, (q, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", a.as_char(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(PauliString::identity());
        }
        let mut pairs = Vec::new();
        for token in s.split_whitespace() {
            let mut chars = token.chars();
            let axis = chars
                .next()
                .and_then(Axis::from_char)
                .ok_or_else(|| Error::InvalidOperator(format!("bad Pauli token {token:?}")))?;
            let qubit: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidOperator(format!("bad qubit index in {token:?}")))?;
            pairs.push((qubit, axis));
        }
        PauliString::new(pairs)
    }
}

/// Weighted sum of Pauli strings with complex coefficients.
///
/// Terms are kept in a `BTreeMap` so iteration order (and hence every
/// downstream reduction and serialization) is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero() -> Self {
        PauliSum::default()
    }

    pub fn identity(coeff: Complex64) -> Self {
        let mut s = PauliSum::zero();
        s.add_term(PauliString::identity(), coeff);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut s = PauliSum::zero();
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s.prune();
        s
    }

    /// Accumulate `coeff · string` (no pruning; call [`prune`](Self::prune)
    /// after a batch of updates).
    pub fn add_term(&mut self, string: PauliString, coeff: Complex64) {
        let entry = self.terms.entry(string).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
    }

    /// Drop terms with |coeff| ≤ 1e-14.
    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > COEFF_PRUNE_THRESHOLD);
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, string: &PauliString) -> Complex64 {
        self.terms
            .get(string)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    /// Terms as an indexable slice-of-pairs snapshot (used by parallel
    /// expectation kernels that need stable indexing).
    pub fn terms_vec(&self) -> Vec<(PauliString, Complex64)> {
        self.terms.iter().map(|(p, c)| (p.clone(), *c)).collect()
    }

    /// Largest qubit index acted on by any term.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.keys().filter_map(|p| p.max_qubit()).max()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for c in self.terms.values_mut() {
            *c *= factor;
        }
        self.prune();
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_term(p.clone(), *c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &PauliSum) -> PauliSum {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product `self · other` with exact phase tracking.
    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::zero();
        for (pa, ca) in self.iter() {
            for (pb, cb) in other.iter() {
                let (phase, p) = pa.mul(pb);
                out.add_term(p, ca * cb * I_POWERS[phase as usize]);
            }
        }
        out.prune();
        out
    }

    /// Hermitian conjugate: Pauli strings are self-adjoint, so only the
    /// coefficients conjugate.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c.conj())).collect(),
        }
    }

    /// Largest |imaginary part| across coefficients (a Hermiticity measure).
    pub fn max_imag(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &PauliSum) -> PauliSum {
        self.mul(other).sub(&other.mul(self))
    }

    /// Sum of |coeff| (an upper bound on the operator norm).
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        PauliString::from_str(&s).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    string: String,
    coeff: [f64; 2],
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(p, c)| TermRepr {
                string: p.to_string(),
                coeff: [c.re, c.im],
            })
            .collect();
        reprs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let reprs = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut sum = PauliSum::zero();
        for r in &reprs {
            let p = PauliString::from_str(&r.string).map_err(D::Error::custom)?;
            sum.add_term(p, Complex64::new(r.coeff[0], r.coeff[1]));
        }
        sum.prune();
        Ok(sum)
    }
}

//! Built-in STO-3G s-orbital integral engine for hydrogen and helium.
//!
//! Each atom carries one contracted s-shell of three primitive Gaussians.
//! All four integral classes (overlap, kinetic, nuclear attraction,
//! electron repulsion) have closed forms for s-functions, with the Coulomb
//! classes reduced to the zeroth Boys function
//! `F₀(t) = ½√(π/t)·erf(√t)`, `F₀(0) = 1`, evaluated here by a Kummer
//! series below t = 35 and the asymptotic tail above (the erf correction is
//! below 1e-15 there). Integrals are returned over Löwdin-orthonormalized
//! atomic orbitals; elements beyond He have no s-only basis and are
//! rejected toward FCIDUMP ingestion.

use nalgebra::DMatrix;

use crate::graph::Atom;
use crate::{Error, Result, BOHR_RADIUS_ANGSTROM};

use super::{contract_axis, lowdin_orthonormalize, MolecularIntegrals};

/// Standard STO-3G contraction coefficients for a 1s shell (shared by H, He).
const STO3G_S_COEFFS: [f64; 3] = [0.15432897, 0.53532814, 0.44463454];
/// STO-3G 1s exponents for hydrogen (ζ = 1.24 scaling folded in).
const STO3G_H_EXPONENTS: [f64; 3] = [3.42525091, 0.62391373, 0.16885540];
/// STO-3G 1s exponents for helium.
const STO3G_HE_EXPONENTS: [f64; 3] = [6.36242139, 1.15892300, 0.31364979];

/// Zeroth Boys function `F₀(t)`.
///
/// Kummer series `e^{-t} Σ_k (2t)^k / (2k+1)!!` for `t < 35`; for larger
/// arguments the complete integral `½√(π/t)` is exact to below 1e-15.
pub fn boys_f0(t: f64) -> f64 {
    debug_assert!(t >= 0.0, "Boys argument must be non-negative");
    if t < 35.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0u32;
        while term > 1e-17 * sum {
            term *= 2.0 * t / (2 * k + 3) as f64;
            sum += term;
            k += 1;
        }
        sum * (-t).exp()
    } else {
        0.5 * (std::f64::consts::PI / t).sqrt()
    }
}

/// A contracted s-type Gaussian shell, normalized to unit self-overlap.
///
/// `center` is in Bohr; `coeffs` already include the primitive
/// normalization factors `(2α/π)^{3/4}` and the contraction rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianShell {
    pub center: [f64; 3],
    pub exponents: [f64; 3],
    pub coeffs: [f64; 3],
}

impl GaussianShell {
    /// Build a normalized shell from raw exponents and contraction
    /// coefficients at `center` (Bohr).
    pub fn new(center: [f64; 3], exponents: [f64; 3], raw_coeffs: [f64; 3]) -> GaussianShell {
        let mut coeffs = [0.0; 3];
        for i in 0..3 {
            // Primitive normalization for an s-Gaussian.
            coeffs[i] = raw_coeffs[i] * (2.0 * exponents[i] / std::f64::consts::PI).powf(0.75);
        }
        let mut shell = GaussianShell { center, exponents, coeffs };
        let self_overlap = overlap(&shell, &shell);
        for c in &mut shell.coeffs {
            *c /= self_overlap.sqrt();
        }
        shell
    }

    /// The STO-3G 1s shell for an element (H or He) at `center` (Bohr).
    pub fn sto3g(atomic_number: u32, center: [f64; 3]) -> Result<GaussianShell> {
        let exponents = match atomic_number {
            1 => STO3G_H_EXPONENTS,
            2 => STO3G_HE_EXPONENTS,
            _ => {
                return Err(Error::BasisNotAvailable {
                    symbol: crate::graph::element_symbol(atomic_number)
                        .unwrap_or("?")
                        .to_string(),
                })
            }
        };
        Ok(GaussianShell::new(center, exponents, STO3G_S_COEFFS))
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn gaussian_center(alpha: f64, a: &[f64; 3], beta: f64, b: &[f64; 3]) -> [f64; 3] {
    let p = alpha + beta;
    [
        (alpha * a[0] + beta * b[0]) / p,
        (alpha * a[1] + beta * b[1]) / p,
        (alpha * a[2] + beta * b[2]) / p,
    ]
}

/// Primitive s-overlap for unnormalized Gaussians.
fn prim_overlap(alpha: f64, a: &[f64; 3], beta: f64, b: &[f64; 3]) -> f64 {
    let p = alpha + beta;
    let mu = alpha * beta / p;
    (std::f64::consts::PI / p).powf(1.5) * (-mu * dist2(a, b)).exp()
}

/// Primitive s-kinetic integral.
fn prim_kinetic(alpha: f64, a: &[f64; 3], beta: f64, b: &[f64; 3]) -> f64 {
    let p = alpha + beta;
    let mu = alpha * beta / p;
    let r2 = dist2(a, b);
    mu * (3.0 - 2.0 * mu * r2) * (std::f64::consts::PI / p).powf(1.5) * (-mu * r2).exp()
}

/// Primitive nuclear attraction to a unit positive charge at `c`.
fn prim_nuclear(alpha: f64, a: &[f64; 3], beta: f64, b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let p = alpha + beta;
    let mu = alpha * beta / p;
    let centroid = gaussian_center(alpha, a, beta, b);
    -(2.0 * std::f64::consts::PI / p)
        * (-mu * dist2(a, b)).exp()
        * boys_f0(p * dist2(&centroid, c))
}

/// Primitive electron repulsion `(ab|cd)` in chemists' notation.
fn prim_eri(
    alpha: f64,
    a: &[f64; 3],
    beta: f64,
    b: &[f64; 3],
    gamma: f64,
    c: &[f64; 3],
    delta: f64,
    d: &[f64; 3],
) -> f64 {
    let p = alpha + beta;
    let q = gamma + delta;
    let centroid_ab = gaussian_center(alpha, a, beta, b);
    let centroid_cd = gaussian_center(gamma, c, delta, d);
    let pre = 2.0 * std::f64::consts::PI.powf(2.5) / (p * q * (p + q).sqrt());
    pre * (-alpha * beta / p * dist2(a, b)).exp()
        * (-gamma * delta / q * dist2(c, d)).exp()
        * boys_f0(p * q / (p + q) * dist2(&centroid_ab, &centroid_cd))
}

macro_rules! contract2 {
    ($a:expr, $b:expr, $f:expr) => {{
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += $a.coeffs[i] * $b.coeffs[j] * $f($a.exponents[i], $b.exponents[j]);
            }
        }
        acc
    }};
}

/// Contracted overlap ⟨a|b⟩.
pub fn overlap(a: &GaussianShell, b: &GaussianShell) -> f64 {
    contract2!(a, b, |x, y| prim_overlap(x, &a.center, y, &b.center))
}

/// Contracted kinetic energy ⟨a|-½∇²|b⟩.
pub fn kinetic(a: &GaussianShell, b: &GaussianShell) -> f64 {
    contract2!(a, b, |x, y| prim_kinetic(x, &a.center, y, &b.center))
}

/// Contracted attraction of the ⟨a|…|b⟩ density to a nucleus of `charge`
/// at `center` (Bohr); negative by convention.
pub fn nuclear_attraction(
    a: &GaussianShell,
    b: &GaussianShell,
    center: [f64; 3],
    charge: f64,
) -> f64 {
    charge * contract2!(a, b, |x, y| prim_nuclear(x, &a.center, y, &b.center, &center))
}

/// Contracted electron repulsion `(ab|cd)`, chemists' notation.
pub fn electron_repulsion(
    a: &GaussianShell,
    b: &GaussianShell,
    c: &GaussianShell,
    d: &GaussianShell,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    acc += a.coeffs[i]
                        * b.coeffs[j]
                        * c.coeffs[k]
                        * d.coeffs[l]
                        * prim_eri(
                            a.exponents[i],
                            &a.center,
                            b.exponents[j],
                            &b.center,
                            c.exponents[k],
                            &c.center,
                            d.exponents[l],
                            &d.center,
                        );
                }
            }
        }
    }
    acc
}

/// Compute STO-3G integrals for a set of H/He atoms over Löwdin-orthonormalized
/// atomic orbitals. Includes the nuclear repulsion in `e_offset`; assumes a
/// neutral system for the electron count.
pub fn compute_sto3g_integrals(atoms: &[Atom]) -> Result<MolecularIntegrals> {
    if atoms.is_empty() {
        return Err(Error::InvalidIntegrals("no atoms given".into()));
    }
    let shells: Vec<GaussianShell> = atoms
        .iter()
        .map(|a| {
            let bohr = [
                a.position[0] / BOHR_RADIUS_ANGSTROM,
                a.position[1] / BOHR_RADIUS_ANGSTROM,
                a.position[2] / BOHR_RADIUS_ANGSTROM,
            ];
            GaussianShell::sto3g(a.atomic_number, bohr)
        })
        .collect::<Result<_>>()?;
    let n = shells.len();

    let mut s = DMatrix::zeros(n, n);
    let mut h_core = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let sij = overlap(&shells[i], &shells[j]);
            let mut hij = kinetic(&shells[i], &shells[j]);
            for (k, atom) in atoms.iter().enumerate() {
                hij += nuclear_attraction(
                    &shells[i],
                    &shells[j],
                    shells[k].center,
                    atom.atomic_number as f64,
                );
            }
            s[(i, j)] = sij;
            s[(j, i)] = sij;
            h_core[(i, j)] = hij;
            h_core[(j, i)] = hij;
        }
    }

    let mut ints = MolecularIntegrals::zeros(n, atoms.iter().map(|a| a.atomic_number as usize).sum());
    // Unique (kl|mn) with kl ≥ lk, mn ≥ nm, (kl) ≥ (mn); 8-fold expansion.
    for k in 0..n {
        for l in 0..=k {
            for m in 0..=k {
                let n_max = if m == k { l } else { m };
                for nn in 0..=n_max {
                    let v = electron_repulsion(&shells[k], &shells[l], &shells[m], &shells[nn]);
                    ints.set_g_symmetric(k, l, m, nn, v);
                }
            }
        }
    }

    // Löwdin orthonormalization: new orbital i = Σ_μ X_μi χ_μ, so the
    // row-convention transform matrix is Xᵀ.
    let x = lowdin_orthonormalize(&s)?;
    let xt = x.transpose();
    ints.h = &xt * h_core * &x;
    let mut g = ints.g_flat().to_vec();
    for axis in 0..4 {
        g = contract_axis(&g, &xt, n, axis);
    }
    ints.set_g_flat(g);

    // Nuclear repulsion (positions already in Bohr inside the shells).
    let mut e_nn = 0.0;
    for i in 0..n {
        for j in 0..i {
            let r = dist2(&shells[i].center, &shells[j].center).sqrt();
            e_nn += (atoms[i].atomic_number * atoms[j].atomic_number) as f64 / r;
        }
    }
    ints.e_offset = e_nn;
    ints.check_finite()?;
    Ok(ints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn boys_endpoints_and_continuity() {
        assert_eq!(boys_f0(0.0), 1.0);
        // Continuity at the series/asymptotic switch. F₀ itself has slope
        // −F₀/(2t) ≈ −2e-3 there, so probe tightly enough that any branch
        // jump would dominate the true change.
        let below = boys_f0(35.0 - 1e-12);
        let above = boys_f0(35.0 + 1e-12);
        assert_abs_diff_eq!(below, above, epsilon = 1e-13);
        // Monotone decreasing on a coarse grid.
        let mut prev = 1.0;
        for i in 1..=500 {
            let t = i as f64 * 0.1;
            let v = boys_f0(t);
            assert!(v < prev, "F0 must decrease, failed at t = {t}");
            prev = v;
        }
    }

    #[test]
    fn shells_are_normalized() {
        for z in [1, 2] {
            let shell = GaussianShell::sto3g(z, [0.3, -0.2, 1.0]).unwrap();
            assert_abs_diff_eq!(overlap(&shell, &shell), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn lithium_directed_to_fcidump() {
        let atom = Atom::new("Li", [0.0; 3]).unwrap();
        match compute_sto3g_integrals(&[atom]) {
            Err(Error::BasisNotAvailable { symbol }) => assert_eq!(symbol, "Li"),
            other => panic!("expected basis error, got {other:?}"),
        }
    }

    #[test]
    fn single_hydrogen_atom() {
        let ints = compute_sto3g_integrals(&[Atom::new("H", [0.0; 3]).unwrap()]).unwrap();
        assert_eq!(ints.n_orbitals, 1);
        assert_eq!(ints.n_electrons, 1);
        assert_eq!(ints.e_offset, 0.0);
        assert!(ints.g(0, 0, 0, 0) > 0.0);
        // One-body part = kinetic + attraction must be negative (bound electron).
        assert!(ints.h[(0, 0)] < 0.0);
    }

    #[test]
    fn h2_integrals_have_full_symmetry() {
        let atoms = crate::graph::chain("H", 2, 0.74).unwrap();
        let ints = compute_sto3g_integrals(&atoms).unwrap();
        assert!(ints.symmetry_violation() < 1e-12);
        // Homonuclear: both diagonal elements equal.
        assert_abs_diff_eq!(ints.h[(0, 0)], ints.h[(1, 1)], epsilon = 1e-12);
        assert!(ints.e_offset > 0.0);
    }

    #[test]
    fn coincident_atoms_are_linearly_dependent() {
        let atoms = vec![
            Atom::new("H", [0.0; 3]).unwrap(),
            Atom::new("H", [0.0; 3]).unwrap(),
        ];
        assert!(matches!(
            compute_sto3g_integrals(&atoms),
            Err(Error::LinearDependence { .. })
        ));
    }
}

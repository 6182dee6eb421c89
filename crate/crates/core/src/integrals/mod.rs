//! Molecular integrals over an orthonormal orbital basis.
//!
//! [`MolecularIntegrals`] carries the one-body matrix `h`, the two-body
//! tensor `g` in chemists' notation `(kl|mn)`, a scalar energy offset
//! (nuclear repulsion plus any frozen-core energy), and the coefficient
//! matrix `C` whose rows express the current orbitals over the underlying
//! orthonormalized atomic orbitals. Spin-restricted throughout: both spins
//! share the same spatial coefficients.
//!
//! Sources: the built-in STO-3G s-orbital engine ([`compute_sto3g_integrals`],
//! H and He only) or an FCIDUMP file ([`read_fcidump`]). Transformations:
//! [`rotate_integrals`] (orbital rotation by an orthogonal matrix) and
//! [`freeze_core`] (fold doubly occupied orbitals into `h` and the offset).

mod fcidump;
mod sto3g;

pub use fcidump::{read_fcidump, write_fcidump};
pub use sto3g::{boys_f0, compute_sto3g_integrals, GaussianShell};

use nalgebra::DMatrix;

use crate::{Error, Result};

/// One- and two-body integrals plus bookkeeping for a molecular system.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    /// Number of spatial orbitals `n`.
    pub n_orbitals: usize,
    /// One-body integrals, `n × n`, symmetric, Hartree.
    pub h: DMatrix<f64>,
    /// Two-body integrals `(kl|mn)`, flattened `n⁴`, chemists' ordering.
    g: Vec<f64>,
    /// Nuclear repulsion + frozen-core energy, Hartree.
    pub e_offset: f64,
    /// `n × m` coefficients: row `i` expresses current orbital `i` over the
    /// `m` underlying orthonormal atomic orbitals.
    pub c: DMatrix<f64>,
    /// Total electron count for the (possibly frozen-core-reduced) system.
    pub n_electrons: usize,
}

impl MolecularIntegrals {
    /// All-zero integrals for `n` orbitals with `C = I`.
    pub fn zeros(n: usize, n_electrons: usize) -> MolecularIntegrals {
        MolecularIntegrals {
            n_orbitals: n,
            h: DMatrix::zeros(n, n),
            g: vec![0.0; n * n * n * n],
            e_offset: 0.0,
            c: DMatrix::identity(n, n),
            n_electrons,
        }
    }

    #[inline]
    fn g_index(&self, k: usize, l: usize, m: usize, n: usize) -> usize {
        ((k * self.n_orbitals + l) * self.n_orbitals + m) * self.n_orbitals + n
    }

    /// Two-body integral `(kl|mn)`.
    #[inline]
    pub fn g(&self, k: usize, l: usize, m: usize, n: usize) -> f64 {
        self.g[self.g_index(k, l, m, n)]
    }

    /// Set one raw slot of the two-body tensor.
    pub fn set_g(&mut self, k: usize, l: usize, m: usize, n: usize, value: f64) {
        let idx = self.g_index(k, l, m, n);
        self.g[idx] = value;
    }

    /// Set `(kl|mn)` together with its 8 permutation-symmetric images
    /// (real orbitals): kl↔lk, mn↔nm, (kl)↔(mn).
    pub fn set_g_symmetric(&mut self, k: usize, l: usize, m: usize, n: usize, value: f64) {
        for &(a, b, c, d) in &[
            (k, l, m, n),
            (l, k, m, n),
            (k, l, n, m),
            (l, k, n, m),
            (m, n, k, l),
            (n, m, k, l),
            (m, n, l, k),
            (n, m, l, k),
        ] {
            let idx = self.g_index(a, b, c, d);
            self.g[idx] = value;
        }
    }

    /// Flat view of the two-body tensor (row-major `[k][l][m][n]`).
    pub fn g_flat(&self) -> &[f64] {
        &self.g
    }

    /// Replace the whole two-body tensor (length must stay `n⁴`).
    pub(crate) fn set_g_flat(&mut self, g: Vec<f64>) {
        assert_eq!(g.len(), self.g.len(), "two-body tensor size mismatch");
        self.g = g;
    }

    /// Largest deviation from `h` symmetry and 8-fold `g` symmetry.
    pub fn symmetry_violation(&self) -> f64 {
        let n = self.n_orbitals;
        let mut worst = 0.0f64;
        for k in 0..n {
            for l in 0..n {
                worst = worst.max((self.h[(k, l)] - self.h[(l, k)]).abs());
            }
        }
        for k in 0..n {
            for l in 0..n {
                for m in 0..n {
                    for nn in 0..n {
                        let v = self.g(k, l, m, nn);
                        for w in [
                            self.g(l, k, m, nn),
                            self.g(k, l, nn, m),
                            self.g(m, nn, k, l),
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Error if any integral is NaN or infinite.
    pub fn check_finite(&self) -> Result<()> {
        let finite = self.h.iter().all(|x| x.is_finite())
            && self.g.iter().all(|x| x.is_finite())
            && self.e_offset.is_finite();
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidIntegrals("NaN or infinite integral".into()))
        }
    }
}

/// Löwdin symmetric orthonormalization: `X = S^(-1/2)` via eigendecomposition.
///
/// Errors if any overlap eigenvalue falls below 1e-8 (near-linear dependence).
pub fn lowdin_orthonormalize(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    assert_eq!(s.nrows(), s.ncols(), "overlap matrix must be square");
    let eig = s.clone().symmetric_eigen();
    if let Some(min) = eig
        .eigenvalues
        .iter()
        .cloned()
        .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
    {
        if min < 1e-8 {
            return Err(Error::LinearDependence { eigenvalue: min });
        }
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    Ok(&eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose())
}

/// Max |UᵀU - I|, the orthogonality defect.
pub fn orthogonality_defect(u: &DMatrix<f64>) -> f64 {
    let n = u.ncols();
    let gram = u.transpose() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

pub(crate) fn require_orthogonal(u: &DMatrix<f64>, tol: f64) -> Result<()> {
    let defect = orthogonality_defect(u);
    if defect > tol {
        return Err(Error::NotOrthogonal { deviation: defect });
    }
    Ok(())
}

/// One-index contraction helper for the four-index transform: contracts `u`
/// into axis `axis` of the flattened `n⁴` tensor.
pub(crate) fn contract_axis(g: &[f64], u: &DMatrix<f64>, n: usize, axis: usize) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    // Strides of axes [k, l, m, n] in the flattened tensor.
    let strides = [n * n * n, n * n, n, 1];
    let stride = strides[axis];
    // Iterate over all positions with axis index 0, then sweep the axis.
    let mut index = [0usize; 4];
    loop {
        // Flat offset with the transformed axis set to zero.
        let base: usize = index
            .iter()
            .zip(&strides)
            .enumerate()
            .map(|(ax, (i, s))| if ax == axis { 0 } else { i * s })
            .sum();
        for p in 0..n {
            let mut acc = 0.0;
            for q in 0..n {
                acc += u[(p, q)] * g[base + q * stride];
            }
            out[base + p * stride] = acc;
        }
        // Advance the three non-transformed axes.
        let mut done = true;
        for ax in (0..4).rev() {
            if ax == axis {
                continue;
            }
            index[ax] += 1;
            if index[ax] < n {
                done = false;
                break;
            }
            index[ax] = 0;
        }
        if done {
            break;
        }
    }
    out
}

/// Rotate integrals into a new orbital frame: `h̃ = U h Uᵀ`, the matching
/// four-index transform on `g`, and `C̃ = U C`. The offset is untouched.
///
/// `U` must be orthogonal to 1e-10.
pub fn rotate_integrals(ints: &MolecularIntegrals, u: &DMatrix<f64>) -> Result<MolecularIntegrals> {
    let n = ints.n_orbitals;
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::InvalidIntegrals(format!(
            "rotation is {}×{}, expected {n}×{n}",
            u.nrows(),
            u.ncols()
        )));
    }
    require_orthogonal(u, 1e-10)?;
    let h = u * &ints.h * u.transpose();
    let mut g = ints.g.clone();
    for axis in 0..4 {
        g = contract_axis(&g, u, n, axis);
    }
    Ok(MolecularIntegrals {
        n_orbitals: n,
        h,
        g,
        e_offset: ints.e_offset,
        c: u * &ints.c,
        n_electrons: ints.n_electrons,
    })
}

/// Fold doubly occupied `frozen` orbitals into the remaining active space:
///
/// - active `h̃_kl = h_kl + Σ_f (2 (kl|ff) - (kf|fl))`
/// - `e_offset += Σ_f 2 h_ff + Σ_{f,f'} (2 (ff|f'f') - (ff'|f'f))`
/// - `g`, `C` sliced to active rows; `n_electrons` drops by `2·|frozen|`.
pub fn freeze_core(ints: &MolecularIntegrals, frozen: &[usize]) -> Result<MolecularIntegrals> {
    let n = ints.n_orbitals;
    let mut frozen_sorted = frozen.to_vec();
    frozen_sorted.sort_unstable();
    if frozen_sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidIntegrals("duplicate frozen orbital index".into()));
    }
    if let Some(&f) = frozen_sorted.iter().find(|&&f| f >= n) {
        return Err(Error::InvalidIntegrals(format!(
            "frozen orbital {f} outside 0..{n}"
        )));
    }
    if 2 * frozen_sorted.len() > ints.n_electrons {
        return Err(Error::InvalidIntegrals(format!(
            "cannot freeze {} orbital pairs with only {} electrons",
            frozen_sorted.len(),
            ints.n_electrons
        )));
    }
    let active: Vec<usize> = (0..n).filter(|i| !frozen_sorted.contains(i)).collect();
    let na = active.len();

    let mut offset = ints.e_offset;
    for &f in &frozen_sorted {
        offset += 2.0 * ints.h[(f, f)];
        for &fp in &frozen_sorted {
            offset += 2.0 * ints.g(f, f, fp, fp) - ints.g(f, fp, fp, f);
        }
    }

    let mut out = MolecularIntegrals::zeros(na, ints.n_electrons - 2 * frozen_sorted.len());
    out.e_offset = offset;
    for (kidx, &k) in active.iter().enumerate() {
        for (lidx, &l) in active.iter().enumerate() {
            let mut hkl = ints.h[(k, l)];
            for &f in &frozen_sorted {
                hkl += 2.0 * ints.g(k, l, f, f) - ints.g(k, f, f, l);
            }
            out.h[(kidx, lidx)] = hkl;
        }
    }
    for (ki, &k) in active.iter().enumerate() {
        for (li, &l) in active.iter().enumerate() {
            for (mi, &m) in active.iter().enumerate() {
                for (ni, &nn) in active.iter().enumerate() {
                    out.set_g(ki, li, mi, ni, ints.g(k, l, m, nn));
                }
            }
        }
    }
    let mut c_active = DMatrix::zeros(na, ints.c.ncols());
    for (ki, &k) in active.iter().enumerate() {
        c_active.set_row(ki, &ints.c.row(k));
    }
    out.c = c_active;
    Ok(out)
}

/// Deterministic symmetric integral data for unit tests across the crate:
/// arbitrary values with the full 8-fold two-electron symmetry.
#[cfg(test)]
pub(crate) fn sample_integrals(n: usize) -> MolecularIntegrals {
    let mut ints = MolecularIntegrals::zeros(n, 2);
    for k in 0..n {
        for l in 0..=k {
            let v = 0.3 * ((k + 1) as f64).sin() + 0.1 * ((l + 2) as f64).cos();
            ints.h[(k, l)] = v;
            ints.h[(l, k)] = v;
        }
    }
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    let key = (k.min(l), k.max(l), m.min(nn), m.max(nn));
                    let (a, b) = (
                        (key.0, key.1).min((key.2, key.3)),
                        (key.0, key.1).max((key.2, key.3)),
                    );
                    let v = 0.05 * ((a.0 + 2 * a.1 + 3 * b.0 + 5 * b.1) as f64 + 1.0).ln();
                    ints.set_g(k, l, m, nn, v);
                }
            }
        }
    }
    ints.e_offset = 0.7;
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lowdin_identity_is_identity() {
        let s = DMatrix::identity(3, 3);
        let x = lowdin_orthonormalize(&s).unwrap();
        assert_abs_diff_eq!(x, DMatrix::identity(3, 3), epsilon = 1e-12);
    }

    #[test]
    fn lowdin_two_by_two_orthonormalizes() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 1.0]);
        let x = lowdin_orthonormalize(&s).unwrap();
        let metric = x.transpose() * &s * &x;
        assert_abs_diff_eq!(metric, DMatrix::identity(2, 2), epsilon = 1e-10);
        // Symmetric orthonormalization keeps X symmetric.
        assert_abs_diff_eq!(x.clone(), x.transpose(), epsilon = 1e-12);
    }

    #[test]
    fn lowdin_detects_linear_dependence() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0 - 1e-10, 1.0 - 1e-10, 1.0]);
        match lowdin_orthonormalize(&s) {
            Err(Error::LinearDependence { eigenvalue }) => assert!(eigenvalue < 1e-8),
            other => panic!("expected linear-dependence error, got {other:?}"),
        }
    }

    fn rotation_2d(n: usize, i: usize, j: usize, angle: f64) -> DMatrix<f64> {
        let mut u = DMatrix::identity(n, n);
        u[(i, i)] = angle.cos();
        u[(j, j)] = angle.cos();
        u[(i, j)] = -angle.sin();
        u[(j, i)] = angle.sin();
        u
    }

    #[test]
    fn rotation_by_identity_is_identity() {
        let ints = sample_integrals(3);
        let rotated = rotate_integrals(&ints, &DMatrix::identity(3, 3)).unwrap();
        assert_eq!(rotated, ints);
    }

    #[test]
    fn rotation_round_trip_restores_integrals() {
        let ints = sample_integrals(3);
        let u = rotation_2d(3, 0, 2, 0.83) * rotation_2d(3, 1, 2, -0.41);
        let there = rotate_integrals(&ints, &u).unwrap();
        let back = rotate_integrals(&there, &u.transpose()).unwrap();
        assert!((&back.h - &ints.h).abs().max() < 1e-10);
        let worst = back
            .g_flat()
            .iter()
            .zip(ints.g_flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-10);
        assert!((&back.c - &ints.c).abs().max() < 1e-10);
    }

    #[test]
    fn rotation_preserves_eightfold_symmetry() {
        let ints = sample_integrals(3);
        assert!(ints.symmetry_violation() < 1e-12);
        let u = rotation_2d(3, 0, 1, 0.37);
        let rotated = rotate_integrals(&ints, &u).unwrap();
        assert!(rotated.symmetry_violation() < 1e-12);
    }

    #[test]
    fn rotation_rejects_non_orthogonal() {
        let ints = sample_integrals(2);
        let u = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            rotate_integrals(&ints, &u),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn freeze_nothing_is_identity() {
        let ints = sample_integrals(3);
        let frozen = freeze_core(&ints, &[]).unwrap();
        assert_eq!(frozen, ints);
    }

    #[test]
    fn freeze_core_folds_one_body_and_offset() {
        let ints = sample_integrals(3);
        let frozen = freeze_core(&ints, &[0]).unwrap();
        assert_eq!(frozen.n_orbitals, 2);
        assert_eq!(frozen.n_electrons, 0);
        // Active (k,l) = old (1,2): h + 2(kl|00) - (k0|0l).
        let expected = ints.h[(1, 2)] + 2.0 * ints.g(1, 2, 0, 0) - ints.g(1, 0, 0, 2);
        assert_abs_diff_eq!(frozen.h[(0, 1)], expected, epsilon = 1e-14);
        let expected_offset =
            ints.e_offset + 2.0 * ints.h[(0, 0)] + 2.0 * ints.g(0, 0, 0, 0) - ints.g(0, 0, 0, 0);
        assert_abs_diff_eq!(frozen.e_offset, expected_offset, epsilon = 1e-14);
        assert_abs_diff_eq!(frozen.g(0, 1, 1, 0), ints.g(1, 2, 2, 1), epsilon = 1e-14);
    }

    #[test]
    fn freeze_core_rejects_bad_indices() {
        let ints = sample_integrals(3);
        assert!(freeze_core(&ints, &[0, 0]).is_err());
        assert!(freeze_core(&ints, &[3]).is_err());
        assert!(freeze_core(&ints, &[0, 1]).is_err()); // only 2 electrons
    }
}

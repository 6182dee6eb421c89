//! Cross-checks against an independent reference implementation.
//!
//! Every number in this file was produced by a separate integral engine and
//! determinant CI solver (NumPy, closed-form Gaussian integrals with an
//! erf-based Boys function) and frozen here.  The two code paths share no
//! arithmetic: the library evaluates the Boys function by series/asymptotics
//! and diagonalizes via its own sector solver, so agreement at these
//! tolerances is strong evidence that both are right.

use molcirc_core::fci::fci_ground_state;
use molcirc_core::graph::{chain, Atom};
use molcirc_core::integrals::{boys_f0, compute_sto3g_integrals, MolecularIntegrals};

const TOL_INTEGRAL: f64 = 1e-9;
const TOL_ENERGY: f64 = 1e-8;

fn h2_at(distance: f64) -> MolecularIntegrals {
    let atoms = vec![
        Atom::new("H", [0.0, 0.0, 0.0]).unwrap(),
        Atom::new("H", [distance, 0.0, 0.0]).unwrap(),
    ];
    compute_sto3g_integrals(&atoms).unwrap()
}

fn h_chain(count: usize) -> MolecularIntegrals {
    compute_sto3g_integrals(&chain("H", count, 1.5).unwrap()).unwrap()
}

#[test]
fn boys_function_matches_erf_reference() {
    // F0(t) = sqrt(pi/t)/2 * erf(sqrt(t)), evaluated with IEEE erf.
    let reference = [
        (0.1, 0.967_643_312_635_591_8),
        (1.0, 0.746_824_132_812_427_0),
        (5.0, 0.395_712_309_610_513_5),
        (20.0, 0.198_166_364_829_973_66),
        (34.9, 0.150_014_150_564_386_38),
        (35.1, 0.149_586_149_262_588_3),
    ];
    for (t, expected) in reference {
        let got = boys_f0(t);
        assert!(
            (got - expected).abs() < 1e-13,
            "F0({t}) = {got}, reference {expected}"
        );
    }
}

#[test]
fn h2_integrals_match_reference_at_equilibrium() {
    // H2 at 0.74 Angstrom in the symmetrically orthonormalized basis.  The
    // symmetric orthonormalizer is unique (no sign or ordering freedom), so
    // every element must match, not just invariants.
    let ints = h2_at(0.74);
    assert_eq!(ints.n_orbitals, 2);
    assert_eq!(ints.n_electrons, 2);
    assert!((ints.e_offset - 0.715_104_339_058_108_1).abs() < TOL_INTEGRAL);
    assert!((ints.h[(0, 0)] - (-0.864_189_317_709_404_8)).abs() < TOL_INTEGRAL);
    assert!((ints.h[(0, 1)] - (-0.389_120_468_922_204_2)).abs() < TOL_INTEGRAL);
    assert!((ints.h[(1, 1)] - (-0.864_189_317_709_404_8)).abs() < TOL_INTEGRAL);
    assert!((ints.g(0, 0, 0, 0) - 0.856_168_020_513_864_1).abs() < TOL_INTEGRAL);
    assert!((ints.g(0, 0, 1, 1) - 0.493_747_096_480_801_7).abs() < TOL_INTEGRAL);
    assert!((ints.g(0, 1, 0, 1) - 0.011_246_157_150_657).abs() < TOL_INTEGRAL);
    assert!((ints.g(0, 0, 0, 1) - (-0.005_723_894_419_04)).abs() < TOL_INTEGRAL);
    assert!((ints.g(1, 1, 1, 1) - 0.856_168_020_513_864).abs() < TOL_INTEGRAL);
}

#[test]
fn h2_ground_energy_matches_reference() {
    let ints = h2_at(0.74);
    let ground = fci_ground_state(&ints, 2, 0).unwrap();
    assert!(
        (ground.energy - (-1.137_283_834_488_318)).abs() < TOL_ENERGY,
        "E = {}",
        ground.energy
    );
}

#[test]
fn stretched_h2_dissociates_into_two_free_atoms() {
    let ints = h2_at(10.0);
    let ground = fci_ground_state(&ints, 2, 0).unwrap();
    assert!((ground.energy - (-0.933_163_699_114_550_9)).abs() < TOL_ENERGY);

    // At 10 Angstrom the molecule is two essentially free atoms; the energy
    // of a single hydrogen atom in this basis is just the one-electron
    // diagonal, so the total must sit within a fraction of a millihartree
    // of twice that.
    let atom = compute_sto3g_integrals(&[Atom::new("H", [0.0; 3]).unwrap()]).unwrap();
    let single = fci_ground_state(&atom, 1, 1).unwrap();
    assert!((single.energy - atom.h[(0, 0)]).abs() < 1e-12);
    assert!((ground.energy - 2.0 * single.energy).abs() < 5e-4);
}

#[test]
fn h3_chain_matches_reference() {
    let ints = h_chain(3);
    assert!((ints.e_offset - 0.881_962_018_171_666_6).abs() < TOL_INTEGRAL);
    let h_diag = [
        -0.960_735_260_888_147_3,
        -1.113_610_583_218_207_5,
        -0.960_735_260_888_146_5,
    ];
    for (k, expected) in h_diag.into_iter().enumerate() {
        assert!((ints.h[(k, k)] - expected).abs() < TOL_INTEGRAL);
    }
    assert!((ints.h[(0, 1)] - (-0.120_305_531_140_191_37)).abs() < TOL_INTEGRAL);

    // Three electrons: the doublet sector with one unpaired spin-up electron.
    let ground = fci_ground_state(&ints, 3, 1).unwrap();
    assert!(
        (ground.energy - (-1.477_271_688_869_826_5)).abs() < TOL_ENERGY,
        "E = {}",
        ground.energy
    );
}

#[test]
fn h4_chain_matches_reference() {
    let ints = h_chain(4);
    assert!((ints.e_offset - 1.528_734_164_830_888_8).abs() < TOL_INTEGRAL);
    let h_diag = [
        -1.077_587_714_684_613_8,
        -1.288_988_422_021_812_2,
        -1.288_988_422_021_811_5,
        -1.077_587_714_684_613_1,
    ];
    for (k, expected) in h_diag.into_iter().enumerate() {
        assert!((ints.h[(k, k)] - expected).abs() < TOL_INTEGRAL);
    }
    assert!((ints.h[(0, 1)] - (-0.119_338_097_384_875_93)).abs() < TOL_INTEGRAL);

    let ground = fci_ground_state(&ints, 4, 0).unwrap();
    assert!(
        (ground.energy - (-1.996_150_325_503_923)).abs() < TOL_ENERGY,
        "E = {}",
        ground.energy
    );
}

#[test]
fn h6_chain_matches_reference() {
    let ints = h_chain(6);
    assert!((ints.e_offset - 3.069_227_823_237_400_6).abs() < TOL_INTEGRAL);
    let h_diag = [
        -1.235_673_755_955_793,
        -1.494_620_878_037_907_8,
        -1.581_943_727_124_438_3,
        -1.581_943_727_124_442_3,
        -1.494_620_878_037_907_8,
        -1.235_673_755_955_792_9,
    ];
    for (k, expected) in h_diag.into_iter().enumerate() {
        assert!((ints.h[(k, k)] - expected).abs() < TOL_INTEGRAL);
    }
    assert!((ints.h[(0, 1)] - (-0.118_807_401_075_680_5)).abs() < TOL_INTEGRAL);

    let ground = fci_ground_state(&ints, 6, 0).unwrap();
    assert!(
        (ground.energy - (-2.995_565_425_809_670_7)).abs() < TOL_ENERGY,
        "E = {}",
        ground.energy
    );
}

#[test]
fn low_spectra_match_reference() {
    // First excited energies in the same sectors, from the reference dense
    // diagonalization.  Catches solvers that converge to the right ground
    // state for the wrong reason (e.g. a mislabeled sector).
    let cases: [(usize, usize, i32, f64); 3] = [
        (3, 3, 1, -1.376_374_807_755_656_1),
        (4, 4, 0, -1.925_558_513_930_139_4),
        (6, 6, 0, -2.942_994_014_775_682),
    ];
    for (count, n_elec, two_s_z, e1) in cases {
        let ints = h_chain(count);
        let h = molcirc_core::fci::SectorHamiltonian::new(&ints, n_elec, two_s_z).unwrap();
        let mut eigs: Vec<f64> = h.dense().symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(f64::total_cmp);
        assert!(
            (eigs[1] - e1).abs() < TOL_ENERGY,
            "H{count}: first excited {} vs reference {e1}",
            eigs[1]
        );
    }
}

#[test]
fn h2_dissociation_curve_matches_reference() {
    // 31-point scan, 0.5..=3.5 Angstrom in steps of 0.1.
    let reference = [
        -1.055_159_794_485_419_2,
        -1.116_286_006_876_524_4,
        -1.136_189_454_067_408,
        -1.134_147_666_674_771_8,
        -1.120_560_281_295_008,
        -1.101_150_330_225_861_4,
        -1.079_192_944_961_130_2,
        -1.056_740_746_296_696_5,
        -1.035_186_266_425_584_2,
        -1.015_468_249_279_882,
        -0.998_149_353_463_688_8,
        -0.983_472_729_026_324,
        -0.971_426_688_452_451_4,
        -0.961_816_952_787_674_1,
        -0.954_338_853_994_734_5,
        -0.948_641_112_173_027_5,
        -0.944_374_681_117_262,
        -0.941_224_033_691_368_6,
        -0.938_922_385_985_839_3,
        -0.937_254_953_008_540_4,
        -0.936_054_919_954_794_3,
        -0.935_196_030_846_872_1,
        -0.934_584_415_936_324_6,
        -0.934_151_095_670_609_8,
        -0.933_845_750_778_915_2,
        -0.933_631_844_558_330_5,
        -0.933_482_940_380_040_4,
        -0.933_379_977_348_793_4,
        -0.933_309_272_439_696_9,
        -0.933_261_057_459_562_2,
        -0.933_228_405_549_692_4,
    ];
    for (i, expected) in reference.into_iter().enumerate() {
        let r = 0.5 + 0.1 * i as f64;
        let ints = h2_at(r);
        let ground = fci_ground_state(&ints, 2, 0).unwrap();
        assert!(
            (ground.energy - expected).abs() < TOL_ENERGY,
            "R = {r}: E = {} vs reference {expected}",
            ground.energy
        );
    }
}

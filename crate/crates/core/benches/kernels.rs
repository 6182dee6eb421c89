//! Parallel-vs-sequential kernel benchmarks.
//!
//! Parallelism is a compile-time feature, so each benchmark ID carries the
//! active mode; run `cargo bench` and `cargo bench --no-default-features`
//! and compare the reports:
//!
//! ```text
//! cargo bench -p molcirc-core
//! cargo bench -p molcirc-core --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64;

use molcirc_core::fci::SectorHamiltonian;
use molcirc_core::fermion::build_qubit_hamiltonian;
use molcirc_core::integrals::MolecularIntegrals;
use molcirc_core::opt::gradient_check;
use molcirc_core::sim::{expectation, StateVector};

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

/// Deterministic dense symmetric integrals (no physical meaning; sized to
/// give the kernels realistic term counts).
fn synthetic_integrals(n: usize) -> MolecularIntegrals {
    let mut ints = MolecularIntegrals::zeros(n, n);
    for k in 0..n {
        for l in 0..=k {
            let v = 0.2 * ((3 * k + l + 1) as f64).sin();
            ints.h[(k, l)] = v;
            ints.h[(l, k)] = v;
        }
    }
    for k in 0..n {
        for l in 0..=k {
            for m in 0..n {
                for q in 0..=m {
                    let v = 0.03 / ((k + l + m + q + 2) as f64);
                    ints.set_g_symmetric(k, l, m, q, v);
                }
            }
        }
    }
    ints.e_offset = 1.1;
    ints
}

fn deterministic_state(n_qubits: usize) -> StateVector {
    let dim = 1usize << n_qubits;
    let amps: Vec<Complex64> = (0..dim)
        .map(|i| {
            let x = i as f64;
            Complex64::new((0.3 * x).sin() + 0.05, (0.7 * x).cos() * 0.2)
        })
        .collect();
    StateVector::from_amplitudes(amps).expect("nonzero deterministic state")
}

/// Term-parallel Pauli expectation on a 10-qubit molecular Hamiltonian.
fn bench_expectation(c: &mut Criterion) {
    let ints = synthetic_integrals(5);
    let h = build_qubit_hamiltonian(&ints).expect("finite integrals");
    let psi = deterministic_state(10);
    c.bench_function(&format!("expectation_10q/{}", mode()), |b| {
        b.iter(|| expectation(std::hint::black_box(&psi), std::hint::black_box(&h)).unwrap())
    });
}

/// Row-parallel sector matrix-vector product above the dense-cache cutoff
/// (C(8,4)² = 4900 determinants), the workhorse of the Lanczos solver.
fn bench_sector_matvec(c: &mut Criterion) {
    let ints = synthetic_integrals(8);
    let h = SectorHamiltonian::new(&ints, 8, 0).expect("valid sector");
    let dim = h.basis.dim();
    assert!(dim > 2000, "meant to exercise the term-driven path");
    let v: Vec<f64> = (0..dim).map(|i| ((i + 1) as f64).recip()).collect();
    c.bench_function(&format!("sector_matvec_4900/{}", mode()), |b| {
        b.iter_batched(
            || v.clone(),
            |v| h.matvec(std::hint::black_box(&v)),
            BatchSize::LargeInput,
        )
    });
}

/// Component-parallel gradient evaluation (three backends inside one check).
fn bench_gradients(c: &mut Criterion) {
    use molcirc_core::circuit::{Angle, Circuit, Gate};
    let ints = synthetic_integrals(3);
    let h = build_qubit_hamiltonian(&ints).expect("finite integrals");
    let mut circuit = Circuit::new(6);
    for q in 0..3 {
        circuit.push(Gate::X { qubit: 2 * q }).unwrap();
        circuit
            .push(Gate::Ry {
                qubit: 2 * q,
                angle: Angle::sym(format!("t{q}")),
            })
            .unwrap();
        circuit
            .push(Gate::Cnot {
                control: 2 * q,
                target: 2 * q + 1,
            })
            .unwrap();
    }
    let params = circuit.values().clone();
    c.bench_function(&format!("gradient_check_3param/{}", mode()), |b| {
        b.iter(|| gradient_check(&circuit, &h, std::hint::black_box(&params)).unwrap())
    });
}

criterion_group!(kernels, bench_expectation, bench_sector_matvec, bench_gradients);
criterion_main!(kernels);

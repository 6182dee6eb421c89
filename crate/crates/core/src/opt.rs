//! Variational optimization: BFGS over circuit parameters and the
//! orbital-rotation outer loop.
//!
//! Two gradient backends. Parameter-shift applies whenever every occurrence
//! of a parameter in the decomposed circuit is a plain rotation
//! `exp(-i·α·P/2)` with `P² = I` — which covers the whole primitive set —
//! and evaluates the exact derivative from occurrence-wise `±π/2` shifts
//! weighted by the occurrence multipliers. Central finite differences
//! (step [`FD_STEP`]) serve as fallback and as the cross-check oracle in
//! [`gradient_check`]. Gradient components are evaluated independently
//! (parallel under the `parallel` feature) and reduced in parameter order,
//! so results are bitwise deterministic.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::circuit::{Angle, Circuit, Gate};
use crate::dense::expm_antisymmetric;
use crate::fci::SectorHamiltonian;
use crate::fermion::PauliSum;
use crate::integrals::{rotate_integrals, MolecularIntegrals};
use crate::parallel::maybe_par_map;
use crate::sim::{energy_from_rdms, expectation, rdm12, simulate, StateVector};
use crate::{Error, Result};

/// Central finite-difference step (radians): balances truncation against
/// round-off at double precision.
pub const FD_STEP: f64 = 1e-4;

/// Stopping rules for [`vqe_minimize`]-style BFGS runs.
#[derive(Debug, Clone)]
pub struct VqeOptions {
    /// Converged when the energy change per accepted step falls below this…
    pub energy_tol: f64,
    /// …and the gradient 2-norm falls below this.
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Skip parameter-shift even where applicable (cross-checks).
    pub force_finite_differences: bool,
}

impl Default for VqeOptions {
    fn default() -> VqeOptions {
        VqeOptions {
            energy_tol: 1e-9,
            grad_tol: 1e-5,
            max_iters: 500,
            force_finite_differences: false,
        }
    }
}

/// Energy functional of a prepared state. Implemented by [`PauliSum`]
/// (term-wise expectation) and [`SectorHamiltonian`] (sector-projected
/// quadratic form — much faster when the ansatz conserves the sector).
/// `Sync` so gradient components can evaluate concurrently.
pub trait EnergyModel: Sync {
    fn energy(&self, psi: &StateVector) -> Result<f64>;

    /// True when the model only accepts states from a restricted domain
    /// (one particle sector, say). Gradient evaluations must then probe
    /// whole-parameter displacements, which keep a domain-conserving
    /// circuit inside the domain, never single rotation factors, which
    /// generally do not.
    fn restricted_domain(&self) -> bool {
        false
    }
}

impl EnergyModel for PauliSum {
    fn energy(&self, psi: &StateVector) -> Result<f64> {
        expectation(psi, self)
    }
}

impl EnergyModel for SectorHamiltonian {
    fn energy(&self, psi: &StateVector) -> Result<f64> {
        self.energy_of(psi)
    }

    fn restricted_domain(&self) -> bool {
        true
    }
}

/// Result of a variational minimization.
#[derive(Debug, Clone)]
pub struct VqeResult {
    pub energy: f64,
    /// Optimal parameters, name → radians.
    pub parameters: BTreeMap<String, f64>,
    /// Accepted BFGS iterations.
    pub iterations: usize,
    /// Gradient 2-norm at exit.
    pub gradient_norm: f64,
    /// Energy after the initial evaluation and each accepted step.
    pub energy_trace: Vec<f64>,
    /// Gradient 2-norm alongside each `energy_trace` entry.
    pub gradient_trace: Vec<f64>,
    /// False when the iteration cap or a line-search stall ended the run.
    pub converged: bool,
}

/// Decomposed circuit prepared for occurrence-level angle shifts.
struct ShiftPlan {
    n_qubits: usize,
    gates: Vec<Gate>,
    /// Sorted parameter names; gradient components follow this order.
    names: Vec<String>,
    /// Per parameter: (gate index, multiplier) of every occurrence.
    occurrences: Vec<Vec<(usize, f64)>>,
    /// True when every symbolic occurrence supports the ±π/2 shift rule.
    shift_ok: bool,
}

impl ShiftPlan {
    fn new(c: &Circuit) -> Result<ShiftPlan> {
        let flat = c.decompose()?;
        let names = flat.param_names();
        let mut occurrences = vec![Vec::new(); names.len()];
        let mut shift_ok = true;
        for (idx, gate) in flat.gates().iter().enumerate() {
            let Some(Angle::Sym { name, mult }) = gate.angle() else {
                continue;
            };
            let slot = names
                .binary_search(name)
                .expect("decomposed parameter is registered");
            occurrences[slot].push((idx, *mult));
            // exp(-i·α·P/2) with P² = I: all primitive rotations qualify.
            if !matches!(
                gate,
                Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. } | Gate::PauliRotation { .. }
            ) {
                shift_ok = false;
            }
        }
        Ok(ShiftPlan {
            n_qubits: flat.n_qubits,
            gates: flat.gates().to_vec(),
            names,
            occurrences,
            shift_ok,
        })
    }

    /// Simulate with one occurrence's resolved angle offset by `delta`.
    fn state(
        &self,
        values: &BTreeMap<String, f64>,
        shift: Option<(usize, f64)>,
    ) -> Result<StateVector> {
        let mut st = StateVector::zero(self.n_qubits);
        for (idx, gate) in self.gates.iter().enumerate() {
            match shift {
                Some((target, delta)) if target == idx => {
                    st.apply_gate(&shifted_gate(gate, values, delta)?, values)?;
                }
                _ => st.apply_gate(gate, values)?,
            }
        }
        Ok(st)
    }

    fn bind(&self, x: &[f64]) -> BTreeMap<String, f64> {
        self.names
            .iter()
            .cloned()
            .zip(x.iter().copied())
            .collect()
    }

    fn energy(&self, model: &dyn EnergyModel, x: &[f64]) -> Result<f64> {
        let e = model.energy(&self.state(&self.bind(x), None)?)?;
        if !e.is_finite() {
            return Err(Error::NonFiniteEnergy { params: x.to_vec() });
        }
        Ok(e)
    }

    /// Exact gradient from the parameter-shift rule: for each occurrence of
    /// the parameter with multiplier `m`, `m·(E(α+π/2) − E(α−π/2))/2`.
    fn shift_gradient(&self, model: &dyn EnergyModel, x: &[f64]) -> Result<Vec<f64>> {
        let values = self.bind(x);
        // One job per (occurrence, ±π/2) evaluation: (param, gate, shift,
        // weight). Results are reduced in job order.
        let jobs: Vec<(usize, usize, f64, f64)> = self
            .occurrences
            .iter()
            .enumerate()
            .flat_map(|(p, occs)| {
                occs.iter().flat_map(move |&(gate, mult)| {
                    let half_pi = std::f64::consts::FRAC_PI_2;
                    [
                        (p, gate, half_pi, mult / 2.0),
                        (p, gate, -half_pi, -mult / 2.0),
                    ]
                })
            })
            .collect();
        let shifted = maybe_par_map(&jobs, |&(_, gate, delta, _)| {
            self.state(&values, Some((gate, delta)))
                .and_then(|st| model.energy(&st))
        });
        let mut grad = vec![0.0; self.names.len()];
        for (&(p, _, _, weight), e) in jobs.iter().zip(shifted) {
            grad[p] += weight * e?;
        }
        Ok(grad)
    }

    fn fd_gradient(&self, model: &dyn EnergyModel, x: &[f64], step: f64) -> Result<Vec<f64>> {
        let parts = maybe_par_map(&(0..x.len()).collect::<Vec<_>>(), |&i| {
            let mut plus = x.to_vec();
            plus[i] += step;
            let mut minus = x.to_vec();
            minus[i] -= step;
            Ok::<f64, Error>((self.energy(model, &plus)? - self.energy(model, &minus)?)
                / (2.0 * step))
        });
        parts.into_iter().collect()
    }

    /// Gradient for models with a restricted domain: exact shifts for
    /// parameters with a single occurrence (shifting it is the same as
    /// evaluating the circuit at a shifted parameter, which a
    /// domain-conserving circuit keeps inside the domain) and whole-parameter
    /// central differences for parameters spread over several rotation
    /// factors, where a single-factor shift would leave it.
    fn mixed_gradient(&self, model: &dyn EnergyModel, x: &[f64]) -> Result<Vec<f64>> {
        enum Job {
            Shift { gate: usize, delta: f64, weight: f64 },
            Difference { sign: f64 },
        }
        let values = self.bind(x);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let mut jobs: Vec<(usize, Job)> = Vec::new();
        for (p, occs) in self.occurrences.iter().enumerate() {
            if let [(gate, mult)] = occs.as_slice() {
                for sign in [1.0, -1.0] {
                    jobs.push((
                        p,
                        Job::Shift {
                            gate: *gate,
                            delta: sign * half_pi,
                            weight: sign * mult / 2.0,
                        },
                    ));
                }
            } else {
                jobs.push((p, Job::Difference { sign: 1.0 }));
                jobs.push((p, Job::Difference { sign: -1.0 }));
            }
        }
        let energies = maybe_par_map(&jobs, |(p, job)| match job {
            Job::Shift { gate, delta, .. } => self
                .state(&values, Some((*gate, *delta)))
                .and_then(|st| model.energy(&st)),
            Job::Difference { sign } => {
                let mut probe = x.to_vec();
                probe[*p] += sign * FD_STEP;
                self.energy(model, &probe)
            }
        });
        let mut grad = vec![0.0; self.names.len()];
        for ((p, job), e) in jobs.iter().zip(energies) {
            let weight = match job {
                Job::Shift { weight, .. } => *weight,
                Job::Difference { sign } => sign / (2.0 * FD_STEP),
            };
            grad[*p] += weight * e?;
        }
        Ok(grad)
    }

    fn gradient(&self, model: &dyn EnergyModel, x: &[f64], force_fd: bool) -> Result<Vec<f64>> {
        if !self.shift_ok || force_fd {
            self.fd_gradient(model, x, FD_STEP)
        } else if model.restricted_domain() {
            self.mixed_gradient(model, x)
        } else {
            self.shift_gradient(model, x)
        }
    }
}

/// Rebuild a rotation gate with its angle resolved and offset by `delta`.
fn shifted_gate(gate: &Gate, values: &BTreeMap<String, f64>, delta: f64) -> Result<Gate> {
    let angle = gate
        .angle()
        .ok_or_else(|| Error::InvalidCircuit("shift target has no angle".into()))?;
    let fixed = Angle::Fixed(angle.resolve(values)? + delta);
    Ok(match gate {
        Gate::Rx { qubit, .. } => Gate::Rx {
            qubit: *qubit,
            angle: fixed,
        },
        Gate::Ry { qubit, .. } => Gate::Ry {
            qubit: *qubit,
            angle: fixed,
        },
        Gate::Rz { qubit, .. } => Gate::Rz {
            qubit: *qubit,
            angle: fixed,
        },
        Gate::Cry {
            control, target, ..
        } => Gate::Cry {
            control: *control,
            target: *target,
            angle: fixed,
        },
        Gate::PauliRotation { string, .. } => Gate::PauliRotation {
            string: string.clone(),
            angle: fixed,
        },
        other => {
            return Err(Error::InvalidCircuit(format!(
                "cannot shift angle of gate {other}"
            )))
        }
    })
}

struct BfgsOutcome {
    x: Vec<f64>,
    energy: f64,
    iterations: usize,
    grad_norm: f64,
    trace: Vec<f64>,
    grad_trace: Vec<f64>,
    converged: bool,
}

/// Textbook BFGS (inverse-Hessian update) with Armijo backtracking.
/// Converged when both the energy change and the gradient norm are small.
fn bfgs_minimize(
    f: &dyn Fn(&[f64]) -> Result<f64>,
    grad: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    x0: &[f64],
    energy_tol: f64,
    grad_tol: f64,
    max_iters: usize,
) -> Result<BfgsOutcome> {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice())?;
    if n == 0 {
        return Ok(BfgsOutcome {
            x: Vec::new(),
            energy: fx,
            iterations: 0,
            grad_norm: 0.0,
            trace: vec![fx],
            grad_trace: vec![0.0],
            converged: true,
        });
    }
    let mut g = DVector::from_vec(grad(x.as_slice())?);
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut trace = vec![fx];
    let mut grad_trace = vec![g.norm()];
    let mut iterations = 0;
    let mut converged = g.norm() < grad_tol;

    while !converged && iterations < max_iters {
        let mut d = -(&h_inv * &g);
        if g.dot(&d) >= 0.0 {
            // Curvature information went bad; restart from steepest descent.
            h_inv = DMatrix::identity(n, n);
            d = -g.clone();
        }
        let slope = g.dot(&d);

        // Armijo backtracking from the natural step.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let x_new = &x + t * &d;
            let f_new = f(x_new.as_slice())?;
            if f_new <= fx + 1e-4 * t * slope {
                accepted = Some((x_new, f_new));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            // No decrease along the quasi-Newton direction: stationary up to
            // line-search resolution.
            converged = g.norm() < grad_tol;
            break;
        };

        let g_new = DVector::from_vec(grad(x_new.as_slice())?);
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let a = DMatrix::identity(n, n) - rho * &s * y.transpose();
            h_inv = &a * h_inv * a.transpose() + rho * &s * s.transpose();
        }

        let delta_e = (fx - f_new).abs();
        x = x_new;
        fx = f_new;
        g = g_new;
        iterations += 1;
        trace.push(fx);
        grad_trace.push(g.norm());
        converged = delta_e < energy_tol && g.norm() < grad_tol;
    }

    Ok(BfgsOutcome {
        x: x.as_slice().to_vec(),
        energy: fx,
        iterations,
        grad_norm: g.norm(),
        trace,
        grad_trace,
        converged,
    })
}

/// Minimize `⟨ψ(θ)|H|ψ(θ)⟩` by BFGS against any energy backend. `initial`
/// overrides the circuit's stored parameter values by name (unknown names
/// are an error); parameters not mentioned start from the stored values.
pub fn vqe_minimize_model(
    c: &Circuit,
    model: &dyn EnergyModel,
    initial: &BTreeMap<String, f64>,
    options: &VqeOptions,
) -> Result<VqeResult> {
    let mut work = c.clone();
    for (name, value) in initial {
        work.set_value(name, *value)?;
    }
    let plan = ShiftPlan::new(&work)?;
    let x0 = work.values_vec();
    let outcome = bfgs_minimize(
        &|x| plan.energy(model, x),
        &|x| plan.gradient(model, x, options.force_finite_differences),
        &x0,
        options.energy_tol,
        options.grad_tol,
        options.max_iters,
    )?;
    Ok(VqeResult {
        energy: outcome.energy,
        parameters: plan.bind(&outcome.x),
        iterations: outcome.iterations,
        gradient_norm: outcome.grad_norm,
        energy_trace: outcome.trace,
        gradient_trace: outcome.grad_trace,
        converged: outcome.converged,
    })
}

/// [`vqe_minimize_model`] against a Hermitian Pauli-sum Hamiltonian with
/// default stopping rules.
pub fn vqe_minimize(
    c: &Circuit,
    h: &PauliSum,
    initial: &BTreeMap<String, f64>,
) -> Result<VqeResult> {
    if !h.is_hermitian(1e-10) {
        return Err(Error::InvalidOperator(format!(
            "VQE requires a Hermitian Hamiltonian (max imaginary {:.3e})",
            h.max_imag()
        )));
    }
    vqe_minimize_model(c, h, initial, &VqeOptions::default())
}

/// Compare gradient backends at the circuit's bound parameters overlaid with
/// `params`: parameter-shift (where applicable) against central differences
/// at steps 1e-3 and 1e-4, or the two difference steps against each other.
/// Returns the worst component deviation relative to the gradient's own
/// scale, `max_i |a_i − b_i| / max(1, ‖a‖_∞)`.
pub fn gradient_check(c: &Circuit, h: &PauliSum, params: &BTreeMap<String, f64>) -> Result<f64> {
    let mut work = c.clone();
    for (name, value) in params {
        work.set_value(name, *value)?;
    }
    if work.n_parameters() == 0 {
        return Err(Error::InvalidConfig(
            "gradient check needs at least one parameter".into(),
        ));
    }
    let plan = ShiftPlan::new(&work)?;
    let x = work.values_vec();
    let model: &dyn EnergyModel = h;
    let coarse = plan.fd_gradient(model, &x, 1e-3)?;
    let fine = plan.fd_gradient(model, &x, FD_STEP)?;
    let deviation = if plan.shift_ok {
        let exact = plan.shift_gradient(model, &x)?;
        relative_deviation(&exact, &coarse).max(relative_deviation(&exact, &fine))
    } else {
        relative_deviation(&fine, &coarse)
    };
    Ok(deviation)
}

fn relative_deviation(reference: &[f64], other: &[f64]) -> f64 {
    let scale = reference
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    reference
        .iter()
        .zip(other)
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs() / scale))
}

/// Hamiltonian backend selection for [`optimize_orbitals_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyBackend {
    /// Sector-projected when the ansatz conserves the sector, else Pauli.
    #[default]
    Auto,
    Pauli,
    Sector,
}

/// Options for the orbital-optimization outer loop.
#[derive(Debug, Clone)]
pub struct OrbitalOptOptions {
    /// Outer loop stops once the orbital step improves by less than this.
    pub outer_tol: f64,
    pub max_outer: usize,
    pub vqe: VqeOptions,
    pub backend: EnergyBackend,
    /// Spin sector (2·S_z) for the sector backend; defaults to `N mod 2`.
    pub two_s_z: Option<i32>,
}

impl Default for OrbitalOptOptions {
    fn default() -> OrbitalOptOptions {
        OrbitalOptOptions {
            outer_tol: 1e-7,
            max_outer: 50,
            vqe: VqeOptions::default(),
            backend: EnergyBackend::Auto,
            two_s_z: None,
        }
    }
}

/// Result of the alternating parameter/orbital optimization.
#[derive(Debug, Clone)]
pub struct OrbitalOptResult {
    /// Accumulated orbital rotation (orthogonal): final orbitals are
    /// `U ·` (input orbital frame).
    pub u: DMatrix<f64>,
    /// Integrals in the final orbital frame.
    pub integrals: MolecularIntegrals,
    /// Final variational energy.
    pub energy: f64,
    pub outer_iterations: usize,
    /// Total BFGS iterations over all inner VQE solves.
    pub inner_iterations: usize,
    /// The final inner VQE result.
    pub vqe: VqeResult,
    /// VQE energy after each outer iteration.
    pub energy_trace: Vec<f64>,
    /// Times the step-halving safeguard fired on an energy increase.
    pub halved_steps: usize,
}

/// Antisymmetric matrix from one angle per orbital pair `(i, j)`, `i < j`
/// in lexicographic order: `K[i][j] = κ_p`, `K[j][i] = −κ_p`.
pub fn antisymmetric_from_angles(kappa: &[f64], n: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(n, n);
    let mut p = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            k[(i, j)] = kappa[p];
            k[(j, i)] = -kappa[p];
            p += 1;
        }
    }
    debug_assert_eq!(p, kappa.len(), "angle count must be n(n-1)/2");
    k
}

enum Model {
    Pauli(PauliSum),
    Sector(SectorHamiltonian),
}

impl EnergyModel for Model {
    fn energy(&self, psi: &StateVector) -> Result<f64> {
        match self {
            Model::Pauli(h) => h.energy(psi),
            Model::Sector(h) => h.energy(psi),
        }
    }

    fn restricted_domain(&self) -> bool {
        matches!(self, Model::Sector(_))
    }
}

fn build_model(
    ints: &MolecularIntegrals,
    backend: EnergyBackend,
    two_s_z: i32,
    probe: &StateVector,
) -> Result<Model> {
    match backend {
        EnergyBackend::Pauli => Ok(Model::Pauli(crate::fermion::build_qubit_hamiltonian(ints)?)),
        EnergyBackend::Sector => Ok(Model::Sector(SectorHamiltonian::new(
            ints,
            ints.n_electrons,
            two_s_z,
        )?)),
        EnergyBackend::Auto => {
            match SectorHamiltonian::new(ints, ints.n_electrons, two_s_z) {
                Ok(h) if h.energy_of(probe).is_ok() => Ok(Model::Sector(h)),
                // The ansatz leaks out of the sector (or the sector is
                // unbuildable): evaluate term-wise instead.
                _ => Ok(Model::Pauli(crate::fermion::build_qubit_hamiltonian(ints)?)),
            }
        }
    }
}

/// Alternating optimization of circuit parameters and the orbital frame.
///
/// Each outer iteration (a) solves the VQE at fixed integrals, (b) minimizes
/// the RDM energy functional `E(κ) = Σ h̃(κ)·D + ½ Σ g̃(κ)·d + offset` over
/// one rotation angle per orbital pair (`U = exp(K)`), and (c) re-transforms
/// the integrals by the optimal step. Stops when an orbital step improves the
/// energy by less than `outer_tol`. A VQE energy increase beyond 1e-9
/// (possible only through inner-solver noise — the warm start makes the loop
/// structurally monotone) re-runs the last orbital step at half the angle.
pub fn optimize_orbitals_with(
    c: &Circuit,
    ints: &MolecularIntegrals,
    u0: &DMatrix<f64>,
    options: &OrbitalOptOptions,
) -> Result<OrbitalOptResult> {
    let n = ints.n_orbitals;
    if u0.nrows() != n || u0.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: u0.nrows(),
            right: n,
        });
    }
    crate::integrals::require_orthogonal(u0, 1e-10)?;
    let two_s_z = options
        .two_s_z
        .unwrap_or((ints.n_electrons % 2) as i32);

    let mut cur = rotate_integrals(ints, u0)?;
    let mut u_acc = u0.clone();
    let mut work = c.clone();
    let mut energy_prev = f64::INFINITY;
    let mut trace = Vec::new();
    let mut inner_total = 0;
    let mut halved = 0;
    let mut outer = 0;
    // Last orbital step, kept for the halving safeguard:
    // (integrals before the step, u before the step, K, params, scale).
    #[allow(clippy::type_complexity)]
    let mut last_step: Option<(
        MolecularIntegrals,
        DMatrix<f64>,
        DMatrix<f64>,
        BTreeMap<String, f64>,
        f64,
    )> = None;

    loop {
        let probe = simulate(&work, work.values(), None)?;
        let model = build_model(&cur, options.backend, two_s_z, &probe)?;
        let vqe = vqe_minimize_model(&work, &model, &BTreeMap::new(), &options.vqe)?;

        if vqe.energy > energy_prev + 1e-9 {
            if let Some((prev_ints, prev_u, k, params, scale)) = &mut last_step {
                if *scale > 1.0 / 64.0 {
                    *scale *= 0.5;
                    halved += 1;
                    let u_step = expm_antisymmetric(&(&*k * *scale))?;
                    cur = rotate_integrals(prev_ints, &u_step)?;
                    u_acc = &u_step * &*prev_u;
                    for (name, value) in params.iter() {
                        work.set_value(name, *value)?;
                    }
                    continue;
                }
            }
        }

        outer += 1;
        inner_total += vqe.iterations;
        trace.push(vqe.energy);
        for (name, value) in &vqe.parameters {
            work.set_value(name, *value)?;
        }

        // Orbital step: minimize the RDM functional over pair angles.
        let state = simulate(&work, work.values(), None)?;
        let rdm = rdm12(&state)?;
        let e_of_kappa = |kappa: &[f64]| -> Result<f64> {
            let u = expm_antisymmetric(&antisymmetric_from_angles(kappa, n))?;
            energy_from_rdms(&rotate_integrals(&cur, &u)?, &rdm)
        };
        let kappa0 = vec![0.0; n * (n - 1) / 2];
        let fd = |kappa: &[f64]| -> Result<Vec<f64>> {
            let parts = maybe_par_map(&(0..kappa.len()).collect::<Vec<_>>(), |&i| {
                let mut plus = kappa.to_vec();
                plus[i] += FD_STEP;
                let mut minus = kappa.to_vec();
                minus[i] -= FD_STEP;
                Ok::<f64, Error>((e_of_kappa(&plus)? - e_of_kappa(&minus)?) / (2.0 * FD_STEP))
            });
            parts.into_iter().collect()
        };
        let orbital = bfgs_minimize(&|x| e_of_kappa(x), &fd, &kappa0, 1e-11, 1e-7, 200)?;

        let improvement = vqe.energy - orbital.energy;
        let done = improvement.abs() < options.outer_tol || outer >= options.max_outer;
        if done {
            return Ok(OrbitalOptResult {
                u: u_acc,
                integrals: cur,
                energy: vqe.energy,
                outer_iterations: outer,
                inner_iterations: inner_total,
                vqe,
                energy_trace: trace,
                halved_steps: halved,
            });
        }

        let k = antisymmetric_from_angles(&orbital.x, n);
        let u_step = expm_antisymmetric(&k)?;
        last_step = Some((
            cur.clone(),
            u_acc.clone(),
            k,
            work.values().clone(),
            1.0,
        ));
        cur = rotate_integrals(&cur, &u_step)?;
        u_acc = &u_step * &u_acc;
        energy_prev = vqe.energy;
    }
}

/// [`optimize_orbitals_with`] under default options.
pub fn optimize_orbitals(
    c: &Circuit,
    ints: &MolecularIntegrals,
    u0: &DMatrix<f64>,
) -> Result<OrbitalOptResult> {
    optimize_orbitals_with(c, ints, u0, &OrbitalOptOptions::default())
}

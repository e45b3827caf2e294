//! First-order Krotov optimization of the two flux channels.
//!
//! Each iteration propagates a costate backward from the target, then sweeps
//! forward in time updating `f_c⁽¹⁾[j]` and `f_c⁽²⁾[j]` in turn (Gauss–Seidel)
//! with the already-updated forward propagator. The reference field of the
//! penalty is the previous iterate, so the cost is
//! `J = η + (λ/S) Σ_l Σ_j (Δf_l[j])² dt`.
//!
//! The update `Δf = (S/2λ)·Im Tr[B† ∂H X]/d` is the stationary point of `J`
//! to first order, so every accepted sweep lowers `J` by `≈ (S/4λ) Σ g² dt`.
//!
//! The overlap entering the update is evaluated at the midpoint of each step:
//! `B_mid = E_{j,½}† B[j+1]` and `X_mid = E_{j,½} X[j]`. That is the exact
//! first-order response of a piecewise-constant step to `O(dt³)`.

use std::f64::consts::PI;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::gates::{target_superoperator, GateTarget};
use crate::hamiltonian::{PulseSequence, ReducedModel};
use crate::linalg::{c, fro, hermitian_eigh, identity, inner, sandwich, CMat, I};
use crate::propagation::{commutator_generator, dissipator_generator, DecoherenceRates};
use crate::qubit_model::ReducedCoefficients;

pub use crate::gates::gate_error_eta;

/// Default `S/λ`, in units of `(rad/ns)⁻¹`. Converges every gate of the
/// reference suite to `10⁻¹⁰` within a few hundred to a few thousand sweeps.
pub const DEFAULT_SHAPE_OVER_WEIGHT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizationConfig {
    /// `S/λ`; the update step of the first-order scheme.
    pub shape_over_weight: f64,
    pub stop_error: f64,
    pub max_iterations: usize,
    pub amplitude_clamp: f64,
    /// Allowed cost increase before a sweep is rejected.
    pub cost_tolerance: f64,
    /// Halve `S/λ` and retry instead of aborting on a cost increase.
    pub halve_on_increase: bool,
    /// Stop once a sweep lowers `η` by less than this fraction.
    pub min_relative_improvement: Option<f64>,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            shape_over_weight: DEFAULT_SHAPE_OVER_WEIGHT,
            stop_error: 1e-10,
            max_iterations: 100_000,
            amplitude_clamp: 1e-3,
            cost_tolerance: 1e-12,
            halve_on_increase: false,
            min_relative_improvement: None,
        }
    }
}

impl OptimizationConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &'static str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(FluxError::param(name, "must be positive and finite"))
            }
        };
        positive(self.shape_over_weight, "shape_over_weight")?;
        positive(self.stop_error, "stop_error")?;
        positive(self.amplitude_clamp, "amplitude_clamp")?;
        if self.stop_error >= 1.0 {
            return Err(FluxError::param("stop_error", "must be below 1"));
        }
        if self.max_iterations == 0 {
            return Err(FluxError::param("max_iterations", "must be at least 1"));
        }
        if !(self.cost_tolerance >= 0.0) {
            return Err(FluxError::param("cost_tolerance", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub eta: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Termination {
    Converged,
    MaxIterations,
    Stalled,
    CostIncrease {
        iteration: usize,
        previous: f64,
        current: f64,
    },
}

#[derive(Debug, Clone)]
pub struct OptimizationRun {
    pub initial_eta: f64,
    pub history: Vec<IterationRecord>,
    pub final_pulses: PulseSequence,
    /// `U(T)` (4×4) or `G(T)` (16×16).
    pub final_propagator: CMat,
    pub converged: bool,
    pub termination: Termination,
    /// `S/λ` in effect at the end (differs from the config after halving).
    pub shape_over_weight: f64,
}

impl OptimizationRun {
    pub fn final_eta(&self) -> f64 {
        self.history.last().map_or(self.initial_eta, |r| r.eta)
    }

    /// `J(i+1) ≤ η(i) + tol` for every recorded iteration.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let mut prev = self.initial_eta;
        self.history.iter().all(|r| {
            let ok = r.cost <= prev + tol;
            prev = r.eta;
            ok
        })
    }
}

/// `J = η + (1/s) Σ (f − f_ref)² dt`.
pub fn cost_j(eta: f64, pulses: &PulseSequence, reference: &PulseSequence, config: &OptimizationConfig) -> Result<f64> {
    if !pulses.same_grid(reference) {
        return Err(FluxError::GridMismatch(format!(
            "{} steps of {} ns vs {} steps of {} ns",
            pulses.n_steps(),
            pulses.dt,
            reference.n_steps(),
            reference.dt
        )));
    }
    let sq: f64 = pulses
        .channels
        .iter()
        .zip(&reference.channels)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)))
        .sum();
    Ok(eta + sq * pulses.dt / config.shape_over_weight)
}

/// Dynamics the optimizer can drive: propagated object of dimension `d`,
/// per-step exponentials and the control derivative of the generator.
trait Dynamics: Sync {
    fn dim(&self) -> usize;
    /// Half and full step exponentials for frozen controls.
    fn exponentials(&self, fc: [f64; 2], dt: f64) -> Result<(CMat, CMat)>;
    /// `∂𝓗/∂f_l` with the other channel at `other`, where `∂𝓛 = −i ∂𝓗`.
    fn derivative(&self, channel: usize, other: f64) -> CMat;
    fn terminal_costate(&self, target: &CMat, final_state: &CMat) -> CMat;
}

struct UnitaryDynamics<'a> {
    model: &'a ReducedModel,
}

impl Dynamics for UnitaryDynamics<'_> {
    fn dim(&self) -> usize {
        4
    }

    fn exponentials(&self, fc: [f64; 2], dt: f64) -> Result<(CMat, CMat)> {
        let h = self.model.hamiltonian_at(fc[0], fc[1]);
        let (values, vectors) = hermitian_eigh(&h);
        let build = |tau: f64| {
            let mut scaled = vectors.clone();
            for (mut col, e) in scaled.column_iter_mut().zip(&values) {
                col *= (-I * e * tau).exp();
            }
            scaled * vectors.adjoint()
        };
        Ok((build(dt / 2.0), build(dt)))
    }

    fn derivative(&self, channel: usize, other: f64) -> CMat {
        self.model.drive_derivative(channel, other)
    }

    fn terminal_costate(&self, target: &CMat, _final_state: &CMat) -> CMat {
        target.clone()
    }
}

struct DissipativeDynamics<'a> {
    model: &'a ReducedModel,
    dissipator: CMat,
}

impl Dynamics for DissipativeDynamics<'_> {
    fn dim(&self) -> usize {
        16
    }

    fn exponentials(&self, fc: [f64; 2], dt: f64) -> Result<(CMat, CMat)> {
        let h = self.model.hamiltonian_at(fc[0], fc[1]);
        let gen = (commutator_generator(&h) + &self.dissipator) * c(dt / 2.0);
        let half = gen.exp();
        let full = &half * &half;
        Ok((half, full))
    }

    fn derivative(&self, channel: usize, other: f64) -> CMat {
        let d = self.model.drive_derivative(channel, other);
        let id = identity(4);
        sandwich(&d, &id) - sandwich(&id, &d)
    }

    /// `G` is not unitary, so the exact gradient of `η_D` needs `𝓞 − G(T)`.
    fn terminal_costate(&self, target: &CMat, final_state: &CMat) -> CMat {
        target - final_state
    }
}

/// Forward pass over all steps: half-step exponentials and `X(T)`.
fn forward(dynamics: &dyn Dynamics, pulses: &PulseSequence) -> Result<(Vec<CMat>, CMat)> {
    let mut x = identity(dynamics.dim());
    let mut halves = Vec::with_capacity(pulses.n_steps());
    for j in 0..pulses.n_steps() {
        let (half, full) = dynamics.exponentials(pulses.sample(j), pulses.dt)?;
        x = full * x;
        halves.push(half);
    }
    Ok((halves, x))
}

/// Midpoint costates `B_mid[j] = E_{j,½}† B[j+1]`, `B[N] = terminal`.
fn backward_midpoints(halves: &[CMat], terminal: CMat) -> Vec<CMat> {
    let mut b = terminal;
    let mut mids = vec![CMat::zeros(0, 0); halves.len()];
    for (j, half) in halves.iter().enumerate().rev() {
        let hd = half.adjoint();
        let mid = &hd * &b;
        b = &hd * &mid;
        mids[j] = mid;
    }
    mids
}

fn error_of(final_state: &CMat, target: &CMat) -> f64 {
    let d = target.nrows() as f64;
    fro(&(target - final_state)).powi(2) / (2.0 * d)
}

/// Costate at every grid point: `B[N] = O`, `B[j] = E_j† B[j+1]`.
pub fn backward_propagate_costate(target: &GateTarget, pulses: &PulseSequence, model: &ReducedModel) -> Result<Vec<CMat>> {
    let dynamics = UnitaryDynamics { model };
    let (halves, _) = forward(&dynamics, pulses)?;
    let mut out = vec![target.matrix.clone()];
    let mut b = target.matrix.clone();
    for half in halves.iter().rev() {
        let full = half * half;
        b = full.adjoint() * b;
        out.push(b.clone());
    }
    out.reverse();
    Ok(out)
}

/// `(1/d)·Im Tr[B† D X]` without forming the product.
fn response(b: &CMat, d: &CMat, x: &CMat) -> f64 {
    inner(b, &(d * x)).im / b.nrows() as f64
}

/// `dη/df_l[j]` for every step and channel (exact up to `O(dt³)` per step).
pub fn analytic_gradient(model: &ReducedModel, target: &GateTarget, pulses: &PulseSequence) -> Result<[Vec<f64>; 2]> {
    let dynamics = UnitaryDynamics { model };
    let (halves, _) = forward(&dynamics, pulses)?;
    let mids = backward_midpoints(&halves, target.matrix.clone());
    let mut x = identity(4);
    let mut grad = [vec![0.0; pulses.n_steps()], vec![0.0; pulses.n_steps()]];
    for j in 0..pulses.n_steps() {
        let x_mid = &halves[j] * &x;
        let [f1, f2] = pulses.sample(j);
        grad[0][j] = -pulses.dt * response(&mids[j], &dynamics.derivative(0, f2), &x_mid);
        grad[1][j] = -pulses.dt * response(&mids[j], &dynamics.derivative(1, f1), &x_mid);
        x = &halves[j] * &x_mid;
    }
    Ok(grad)
}

struct SweepOutcome {
    pulses: PulseSequence,
    halves: Vec<CMat>,
    final_state: CMat,
    eta: f64,
    cost: f64,
}

/// One Krotov iteration starting from the previous pulses and their costate.
fn sweep(
    dynamics: &dyn Dynamics,
    target: &CMat,
    previous: &PulseSequence,
    previous_halves: &[CMat],
    costate: &[CMat],
    step: f64,
    clamp: f64,
) -> Result<SweepOutcome> {
    let n = previous.n_steps();
    let dt = previous.dt;
    let mut next = previous.clone();
    let mut halves = Vec::with_capacity(n);
    let mut x = identity(dynamics.dim());
    let mut penalty = 0.0;
    for j in 0..n {
        let x_mid = &previous_halves[j] * &x;
        let [old1, old2] = previous.sample(j);
        let g1 = response(&costate[j], &dynamics.derivative(0, old2), &x_mid);
        let new1 = (old1 + 0.5 * step * g1).clamp(-clamp, clamp);
        let g2 = response(&costate[j], &dynamics.derivative(1, new1), &x_mid);
        let new2 = (old2 + 0.5 * step * g2).clamp(-clamp, clamp);
        if !new1.is_finite() || !new2.is_finite() {
            return Err(FluxError::NonFinite { step: j });
        }
        next.channels[0][j] = new1;
        next.channels[1][j] = new2;
        penalty += ((new1 - old1).powi(2) + (new2 - old2).powi(2)) * dt;
        let (half, full) = dynamics.exponentials([new1, new2], dt)?;
        x = full * x;
        halves.push(half);
    }
    let eta = error_of(&x, target);
    Ok(SweepOutcome {
        pulses: next,
        halves,
        final_state: x,
        eta,
        cost: eta + penalty / step,
    })
}

/// Pulses after one sweep with the given step (exposed for property tests).
pub fn krotov_sweep(
    model: &ReducedModel,
    target: &GateTarget,
    pulses: &PulseSequence,
    config: &OptimizationConfig,
) -> Result<(PulseSequence, f64, f64)> {
    let dynamics = UnitaryDynamics { model };
    let (halves, x) = forward(&dynamics, pulses)?;
    let costate = backward_midpoints(&halves, dynamics.terminal_costate(&target.matrix, &x));
    let out = sweep(
        &dynamics,
        &target.matrix,
        pulses,
        &halves,
        &costate,
        config.shape_over_weight,
        config.amplitude_clamp,
    )?;
    Ok((out.pulses, out.eta, out.cost))
}

fn optimize(
    dynamics: &dyn Dynamics,
    target: &CMat,
    config: &OptimizationConfig,
    initial: &PulseSequence,
) -> Result<OptimizationRun> {
    config.validate()?;
    if initial.n_steps() == 0 {
        return Err(FluxError::TooFewSamples { min: 1, got: 0 });
    }
    let mut pulses = initial.clone();
    for ch in pulses.channels.iter_mut() {
        for v in ch.iter_mut() {
            *v = v.clamp(-config.amplitude_clamp, config.amplitude_clamp);
        }
    }
    let (mut halves, mut x) = forward(dynamics, &pulses)?;
    let initial_eta = error_of(&x, target);
    let mut eta = initial_eta;
    let mut step = config.shape_over_weight;
    let mut history = Vec::new();
    let mut termination = Termination::MaxIterations;

    for iteration in 1..=config.max_iterations {
        if eta < config.stop_error {
            termination = Termination::Converged;
            break;
        }
        let costate = backward_midpoints(&halves, dynamics.terminal_costate(target, &x));
        let out = loop {
            let out = sweep(dynamics, target, &pulses, &halves, &costate, step, config.amplitude_clamp)?;
            if out.cost <= eta + config.cost_tolerance {
                break Some(out);
            }
            if config.halve_on_increase && step > config.shape_over_weight * 1e-6 {
                debug!("iteration {iteration}: cost rose to {:e}; halving S/λ", out.cost);
                step /= 2.0;
                continue;
            }
            termination = Termination::CostIncrease {
                iteration,
                previous: eta,
                current: out.cost,
            };
            break None;
        };
        let Some(out) = out else { break };
        let improvement = (eta - out.eta) / eta;
        history.push(IterationRecord {
            iteration,
            eta: out.eta,
            cost: out.cost,
        });
        pulses = out.pulses;
        halves = out.halves;
        x = out.final_state;
        eta = out.eta;
        if iteration % 500 == 0 {
            info!("iteration {iteration}: η = {eta:e}");
        }
        if eta < config.stop_error {
            termination = Termination::Converged;
            break;
        }
        if config.min_relative_improvement.is_some_and(|m| improvement < m) {
            termination = Termination::Stalled;
            break;
        }
    }
    Ok(OptimizationRun {
        initial_eta,
        converged: termination == Termination::Converged,
        history,
        final_pulses: pulses,
        final_propagator: x,
        termination,
        shape_over_weight: step,
    })
}

/// Minimize `η` of the reduced model against `target`.
pub fn optimize_gate(
    model: &ReducedModel,
    target: &GateTarget,
    config: &OptimizationConfig,
    initial_guess: &PulseSequence,
) -> Result<OptimizationRun> {
    optimize(&UnitaryDynamics { model }, &target.matrix, config, initial_guess)
}

/// Minimize `η_D` of the superoperator propagator.
pub fn optimize_gate_dissipative(
    model: &ReducedModel,
    target: &GateTarget,
    rates: &DecoherenceRates,
    config: &OptimizationConfig,
    initial_guess: &PulseSequence,
) -> Result<OptimizationRun> {
    rates.validate()?;
    let dynamics = DissipativeDynamics {
        model,
        dissipator: dissipator_generator(rates),
    };
    optimize(&dynamics, &target_superoperator(&target.matrix), config, initial_guess)
}

/// Run several independent optimizations on the rayon pool.
pub fn optimize_many(
    model: &ReducedModel,
    jobs: &[(GateTarget, PulseSequence)],
    config: &OptimizationConfig,
) -> Vec<Result<OptimizationRun>> {
    jobs.par_iter()
        .map(|(target, guess)| optimize_gate(model, target, config, guess))
        .collect()
}

/// Number of steps and the matching `dt` for a gate time.
pub fn time_grid(gate_time: f64, dt: f64) -> Result<(usize, f64)> {
    if !(gate_time.is_finite() && gate_time > 0.0) {
        return Err(FluxError::param("T", "gate time must be positive"));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= gate_time) {
        return Err(FluxError::param("dt", "must be positive and not exceed the gate time"));
    }
    let n = (gate_time / dt).round().max(1.0) as usize;
    Ok((n, gate_time / n as f64))
}

/// Amplitude of the default initial guess.
pub const GUESS_AMPLITUDE: f64 = 1e-4;

/// `f_l(t) = A_l sin(ω_l t + φ_l) sin²(πt/T)`.
///
/// Without a seed `A_l = 10⁻⁴` and `φ_l = 0`. A seed draws `A_l` within ±20%
/// of that and `φ_l` uniformly.
pub fn default_initial_guess(
    coeffs: &ReducedCoefficients,
    gate_time: f64,
    dt: f64,
    seed: Option<u64>,
) -> Result<PulseSequence> {
    let (n, dt) = time_grid(gate_time, dt)?;
    let (amp, phase) = match seed {
        Some(s) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
            let mut a = || GUESS_AMPLITUDE * rng.random_range(0.8..1.2);
            let amp = [a(), a()];
            let mut p = || rng.random_range(0.0..2.0 * PI);
            (amp, [p(), p()])
        }
        None => ([GUESS_AMPLITUDE; 2], [0.0; 2]),
    };
    let shape = |l: usize| {
        let w = coeffs.omega[l];
        move |t: f64| amp[l] * (w * t + phase[l]).sin() * (PI * t / gate_time).sin().powi(2)
    };
    PulseSequence::from_fn(dt, n, shape(0), shape(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{make_target, GateName};
    use crate::hamiltonian::ModelMode;
    use crate::propagation::final_unitary;
    use crate::qubit_model::tests_support::reference_coefficients;

    fn model() -> ReducedModel {
        ReducedModel::new(reference_coefficients(), ModelMode::SimplifiedOptimalPoint)
    }

    #[test]
    fn cost_examples() {
        let cfg = OptimizationConfig::default();
        let p = PulseSequence::new(1e-3, vec![0.2, 0.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(cost_j(0.3, &p, &p, &cfg).unwrap(), 0.3);
        let r = PulseSequence::new(1e-3, vec![-0.8, 0.0], vec![0.0, 0.0]).unwrap();
        let one = cost_j(0.0, &p, &r, &cfg).unwrap();
        assert!((one - 1e-3 / cfg.shape_over_weight).abs() < 1e-9 * one);
        let r2 = PulseSequence::new(1e-3, vec![-1.8, 0.0], vec![0.0, 0.0]).unwrap();
        assert!((cost_j(0.0, &p, &r2, &cfg).unwrap() / one - 4.0).abs() < 1e-12);
        let short = PulseSequence::zeros(1e-3, 1);
        assert!(matches!(cost_j(0.0, &p, &short, &cfg), Err(FluxError::GridMismatch(_))));
    }

    #[test]
    fn costate_of_zero_hamiltonian_is_the_target() {
        let k = ReducedCoefficients {
            omega: [0.0; 2],
            static_coupling: [[0.0; 2]; 2],
            ..reference_coefficients()
        };
        let m = ReducedModel::simplified(k);
        let t = make_target(GateName::X1);
        let b = backward_propagate_costate(&t, &PulseSequence::zeros(1e-3, 50), &m).unwrap();
        assert_eq!(b.len(), 51);
        assert!(b.iter().all(|bj| fro(&(bj - &t.matrix)) < 1e-14));
    }

    #[test]
    fn costate_overlap_is_time_independent() {
        let m = model();
        let t = make_target(GateName::Cnot12);
        let p = default_initial_guess(&m.coeffs, 0.5, 5e-4, Some(3)).unwrap();
        let b = backward_propagate_costate(&t, &p, &m).unwrap();
        let u = crate::propagation::propagate_unitary(&m, &p).unwrap();
        let overlap = |j: usize| inner(&b[j], &u.steps[j]).re / 4.0;
        let first = overlap(0);
        for j in (0..=p.n_steps()).step_by(50) {
            assert!((overlap(j) - first).abs() < 1e-10);
            assert!(crate::linalg::unitarity_defect(&b[j]) < 1e-10);
        }
    }

    #[test]
    fn zero_step_leaves_pulses_unchanged() {
        let m = model();
        let p = default_initial_guess(&m.coeffs, 0.3, 5e-4, None).unwrap();
        let cfg = OptimizationConfig {
            shape_over_weight: 1e-300,
            ..Default::default()
        };
        let (next, _, _) = krotov_sweep(&m, &make_target(GateName::X1), &p, &cfg).unwrap();
        for l in 0..2 {
            for (a, b) in next.channels[l].iter().zip(&p.channels[l]) {
                assert!((a - b).abs() < 1e-280);
            }
        }
    }

    #[test]
    fn static_target_converges_without_iterations() {
        let m = model();
        let p = PulseSequence::zeros(5e-4, 600);
        let u = final_unitary(&m, &p).unwrap();
        let target = GateTarget {
            name: GateName::I,
            literal: u.clone(),
            matrix: u,
        };
        let run = optimize_gate(&m, &target, &OptimizationConfig::default(), &p).unwrap();
        assert!(run.converged && run.history.is_empty());
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let m = model();
        let t = make_target(GateName::X1);
        let p = default_initial_guess(&m.coeffs, 0.4, 5e-4, Some(11)).unwrap();
        let grad = analytic_gradient(&m, &t, &p).unwrap();
        let eta = |q: &PulseSequence| crate::gates::gate_error_eta(&final_unitary(&m, q).unwrap(), &t.matrix).unwrap();
        let delta = 1e-8;
        for (l, j) in [(0, 17), (1, 123), (0, 400), (1, 799)] {
            let mut up = p.clone();
            up.channels[l][j] += delta;
            let mut down = p.clone();
            down.channels[l][j] -= delta;
            let fd = (eta(&up) - eta(&down)) / (2.0 * delta);
            assert!((fd - grad[l][j]).abs() < 0.01 * grad[l][j].abs(), "{l} {j}: {fd} vs {}", grad[l][j]);
        }
    }

    #[test]
    fn time_grid_rounds_to_whole_steps() {
        let (n, dt) = time_grid(0.8, 5e-4).unwrap();
        assert_eq!(n, 1600);
        assert!((dt - 5e-4).abs() < 1e-18);
        assert!(time_grid(0.0, 1e-3).is_err());
    }

    #[test]
    fn seeded_guesses_are_reproducible() {
        let k = reference_coefficients();
        let a = default_initial_guess(&k, 0.8, 5e-4, Some(7)).unwrap();
        let b = default_initial_guess(&k, 0.8, 5e-4, Some(7)).unwrap();
        let c = default_initial_guess(&k, 0.8, 5e-4, Some(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.max_amplitude() <= 1.2e-4);
        assert_eq!(a.channels[0][0], 0.0);
    }
}

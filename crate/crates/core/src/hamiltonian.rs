//! Time-dependent Hamiltonians of the coupled pair.
//!
//! Two families are provided:
//!
//! * [`ReducedModel`]: the 4×4 two-level Hamiltonian, either the simplified
//!   optimal-point form or the general expansion. It is affine in each control
//!   channel apart from one bilinear `f_c⁽¹⁾ f_c⁽²⁾` term, and the optimizer
//!   relies on that structure.
//! * [`MultiLevelModel`]: five levels per loop (25×25), built without the
//!   weak-amplitude expansion and including the `ḟ_c · P_P` drive.
//!
//! Basis ordering is `|q₁ q₂⟩` with qubit 1 as the major index, so the
//! computational states are `gg, ge, eg, ee`.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::linalg::{c, identity, kron, pauli_x, pauli_z, CMat};
use crate::qubit_model::{CouplingDesign, Device, QubitDesign, ReducedCoefficients, X, Z};

/// Weak-amplitude bound on `|f_c|`.
pub const AMPLITUDE_BOUND: f64 = 1e-3;

/// Default time step, ns (0.5 ps).
pub const DEFAULT_DT: f64 = 5e-4;

/// Piecewise-constant samples of the two reduced control fluxes.
///
/// Sample `j` holds over `[j·dt, (j+1)·dt)`; the sequence lasts
/// `n_steps · dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub dt: f64,
    pub channels: [Vec<f64>; 2],
}

impl PulseSequence {
    pub fn new(dt: f64, fc1: Vec<f64>, fc2: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(FluxError::param("dt", "must be positive and finite"));
        }
        if fc1.len() != fc2.len() {
            return Err(FluxError::GridMismatch(format!(
                "channel lengths {} and {}",
                fc1.len(),
                fc2.len()
            )));
        }
        if let Some(step) = fc1
            .iter()
            .zip(&fc2)
            .position(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(FluxError::NonFinite { step });
        }
        let p = Self {
            dt,
            channels: [fc1, fc2],
        };
        if p.max_amplitude() > AMPLITUDE_BOUND {
            warn!(
                "pulse amplitude {:e} exceeds the weak-amplitude bound {:e}",
                p.max_amplitude(),
                AMPLITUDE_BOUND
            );
        }
        Ok(p)
    }

    pub fn zeros(dt: f64, n_steps: usize) -> Self {
        Self {
            dt,
            channels: [vec![0.0; n_steps], vec![0.0; n_steps]],
        }
    }

    /// Sample both channels from functions of time.
    pub fn from_fn(
        dt: f64,
        n_steps: usize,
        f1: impl Fn(f64) -> f64,
        f2: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let t = |j: usize| j as f64 * dt;
        Self::new(
            dt,
            (0..n_steps).map(|j| f1(t(j))).collect(),
            (0..n_steps).map(|j| f2(t(j))).collect(),
        )
    }

    pub fn n_steps(&self) -> usize {
        self.channels[0].len()
    }

    pub fn duration(&self) -> f64 {
        self.n_steps() as f64 * self.dt
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }

    pub fn sample(&self, j: usize) -> [f64; 2] {
        [self.channels[0][j], self.channels[1][j]]
    }

    pub fn max_amplitude(&self) -> f64 {
        self.channels
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Same grid (`dt` bit-identical, same length).
    pub fn same_grid(&self, other: &PulseSequence) -> bool {
        self.dt == other.dt && self.n_steps() == other.n_steps()
    }

    /// Split into `[0, j)` and `[j, n)`.
    pub fn split_at(&self, j: usize) -> (PulseSequence, PulseSequence) {
        let part = |r: std::ops::Range<usize>| PulseSequence {
            dt: self.dt,
            channels: [
                self.channels[0][r.clone()].to_vec(),
                self.channels[1][r].to_vec(),
            ],
        };
        (part(0..j), part(j..self.n_steps()))
    }
}

/// `ḟ_c` per channel by finite differences of the samples.
///
/// Central differences in the interior; second-order one-sided differences at
/// the ends (first-order when only two samples exist).
pub fn pulse_time_derivative(pulses: &PulseSequence) -> Result<[Vec<f64>; 2]> {
    let n = pulses.n_steps();
    if n < 2 {
        return Err(FluxError::TooFewSamples { min: 2, got: n });
    }
    let dt = pulses.dt;
    let diff = |f: &[f64]| -> Vec<f64> {
        let mut d = vec![0.0; n];
        if n == 2 {
            let s = (f[1] - f[0]) / dt;
            return vec![s, s];
        }
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
        for j in 1..n - 1 {
            d[j] = (f[j + 1] - f[j - 1]) / (2.0 * dt);
        }
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
        d
    };
    Ok([diff(&pulses.channels[0]), diff(&pulses.channels[1])])
}

/// Control values in effect during one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ControlSample {
    pub fc: [f64; 2],
    pub fdot: [f64; 2],
}

/// A Hamiltonian driven by the two flux channels.
pub trait PulsedHamiltonian: Sync {
    fn dim(&self) -> usize;

    fn hamiltonian(&self, sample: &ControlSample) -> CMat;

    /// Whether [`ControlSample::fdot`] enters the Hamiltonian.
    fn uses_derivative(&self) -> bool {
        false
    }
}

/// Per-step control samples for a pulse sequence.
pub fn control_samples(model: &dyn PulsedHamiltonian, pulses: &PulseSequence) -> Result<Vec<ControlSample>> {
    let fdot = if model.uses_derivative() && pulses.n_steps() >= 2 {
        Some(pulse_time_derivative(pulses)?)
    } else {
        None
    };
    Ok((0..pulses.n_steps())
        .map(|j| ControlSample {
            fc: pulses.sample(j),
            fdot: fdot.as_ref().map_or([0.0; 2], |d| [d[0][j], d[1][j]]),
        })
        .collect())
}

fn pauli(i: usize) -> CMat {
    if i == Z {
        pauli_z()
    } else {
        pauli_x()
    }
}

/// Single-qubit operator on qubit `l` (0 or 1) of the pair.
fn on_qubit(l: usize, op: &CMat) -> CMat {
    if l == 0 {
        kron(op, &identity(2))
    } else {
        kron(&identity(2), op)
    }
}

/// `σ_i⁽ˡ⁾ σ_j⁽ᵐ⁾` with `m` the other qubit.
fn pair(l: usize, i: usize, j: usize) -> CMat {
    if l == 0 {
        kron(&pauli(i), &pauli(j))
    } else {
        kron(&pauli(j), &pauli(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelMode {
    /// Optimal-point form: parity-forbidden terms omitted.
    SimplifiedOptimalPoint,
    /// Every term of the two-level expansion.
    GeneralTwoLevel,
}

/// Reduced 4×4 Hamiltonian `H = H₀ + f₁A₁ + f₂A₂ + f₁f₂B`.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    pub coeffs: ReducedCoefficients,
    pub mode: ModelMode,
    static_part: CMat,
    linear: [CMat; 2],
    bilinear: CMat,
}

impl ReducedModel {
    pub fn new(coeffs: ReducedCoefficients, mode: ModelMode) -> Self {
        let k = &coeffs;
        let mut static_part = CMat::zeros(4, 4);
        let mut linear = [CMat::zeros(4, 4), CMat::zeros(4, 4)];
        let mut bilinear = CMat::zeros(4, 4);

        for l in 0..2 {
            static_part += on_qubit(l, &pauli_z()) * c(k.omega[l] / 2.0);
            linear[l] += on_qubit(l, &pauli_x()) * c(k.kappa_x_slope[l]);
            linear[l] -= on_qubit(l, &pauli_z()) * c(k.chi_z_slope[l]);
            linear[l] -= pair(l, Z, X) * c(k.xi_slope[l][Z][X]);
        }
        static_part += pair(0, X, X) * c(k.static_coupling[X][X]);
        bilinear += pair(0, Z, Z) * c(k.theta_slope[Z][Z]);

        if mode == ModelMode::GeneralTwoLevel {
            for l in 0..2 {
                linear[l] += on_qubit(l, &pauli_z()) * c(k.kappa_z_slope[l]);
                linear[l] -= on_qubit(l, &pauli_x()) * c(k.chi_x_slope[l]);
                for (i, j) in [(Z, Z), (X, X), (X, Z)] {
                    linear[l] -= pair(l, i, j) * c(k.xi_slope[l][i][j]);
                }
            }
            for (i, j) in [(Z, Z), (Z, X), (X, Z)] {
                static_part += pair(0, i, j) * c(k.static_coupling[i][j]);
            }
            for (i, j) in [(X, X), (Z, X), (X, Z)] {
                bilinear += pair(0, i, j) * c(k.theta_slope[i][j]);
            }
        }
        Self {
            coeffs,
            mode,
            static_part,
            linear,
            bilinear,
        }
    }

    pub fn simplified(coeffs: ReducedCoefficients) -> Self {
        Self::new(coeffs, ModelMode::SimplifiedOptimalPoint)
    }

    pub fn static_part(&self) -> &CMat {
        &self.static_part
    }

    pub fn hamiltonian_at(&self, fc1: f64, fc2: f64) -> CMat {
        if fc1.abs() > AMPLITUDE_BOUND || fc2.abs() > AMPLITUDE_BOUND {
            warn!("control flux ({fc1:e}, {fc2:e}) outside the weak-amplitude regime");
        }
        &self.static_part
            + &self.linear[0] * c(fc1)
            + &self.linear[1] * c(fc2)
            + &self.bilinear * c(fc1 * fc2)
    }

    /// `∂H/∂f_c⁽ˡ⁾` with the other channel held at `other`.
    pub fn drive_derivative(&self, channel: usize, other: f64) -> CMat {
        &self.linear[channel] + &self.bilinear * c(other)
    }
}

impl PulsedHamiltonian for ReducedModel {
    fn dim(&self) -> usize {
        4
    }

    fn hamiltonian(&self, s: &ControlSample) -> CMat {
        self.hamiltonian_at(s.fc[0], s.fc[1])
    }
}

/// The simplified optimal-point Hamiltonian at the given control values.
pub fn reduced_hamiltonian_at(model: &ReducedModel, fc1: f64, fc2: f64) -> CMat {
    model.hamiltonian_at(fc1, fc2)
}

/// The general two-level Hamiltonian at the given control values.
pub fn general_two_level_hamiltonian_at(coeffs: &ReducedCoefficients, fc1: f64, fc2: f64) -> CMat {
    ReducedModel::new(coeffs.clone(), ModelMode::GeneralTwoLevel).hamiltonian_at(fc1, fc2)
}

/// One loop truncated to its lowest levels.
#[derive(Debug, Clone)]
pub struct TruncatedQubit {
    pub design: QubitDesign,
    /// Level energies measured from the midpoint of the two lowest, rad/ns.
    pub energies: Vec<f64>,
    pub s2: CMat,
    pub c2: CMat,
    pub sym: CMat,
    pub pp: CMat,
}

/// Five levels per loop, exact in the control fluxes.
#[derive(Debug, Clone)]
pub struct MultiLevelModel {
    pub qubits: [TruncatedQubit; 2],
    pub coupling: CouplingDesign,
    levels: usize,
    static_diag: CMat,
}

pub const MULTI_LEVELS: usize = 5;

impl MultiLevelModel {
    /// Build from a device solved with at least `levels` levels per loop.
    pub fn from_device(device: &Device, levels: usize) -> Result<Self> {
        let truncate = |l: usize| -> Result<TruncatedQubit> {
            let q = &device.qubits[l];
            if q.eigen.n_levels() < levels {
                return Err(FluxError::TooManyLevels {
                    requested: levels,
                    dimension: q.eigen.n_levels(),
                });
            }
            let mid = 0.5 * (q.eigen.energies[0] + q.eigen.energies[1]);
            let cut = |m: &CMat| m.view((0, 0), (levels, levels)).into_owned();
            Ok(TruncatedQubit {
                design: q.design,
                energies: q.eigen.energies[..levels].iter().map(|e| e - mid).collect(),
                s2: cut(&q.elements.s2),
                c2: cut(&q.elements.c2),
                sym: cut(&q.elements.sym),
                pp: cut(&q.elements.pp),
            })
        };
        let qubits = [truncate(0)?, truncate(1)?];
        let diag = |q: &TruncatedQubit| {
            CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                levels,
                q.energies.iter().map(|&e| c(e)),
            ))
        };
        let id = identity(levels);
        let static_diag = kron(&diag(&qubits[0]), &id) + kron(&id, &diag(&qubits[1]));
        Ok(Self {
            qubits,
            coupling: device.coupling,
            levels,
            static_diag,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Index of `|i₁ i₂⟩` in the product basis.
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.levels + i2
    }

    /// Single-loop part: drive plus the `ḟ_c · P_P` term.
    fn local(&self, l: usize, fc: f64, fdot: f64) -> CMat {
        let q = &self.qubits[l];
        let (s, co) = (2.0 * PI * fc).sin_cos();
        let drive = q.design.alpha * q.design.ej;
        &q.c2 * c(drive * (1.0 - co))
            + &q.s2 * c(drive * s)
            + &q.pp * c(2.0 * PI * fdot * q.design.current_prefactor())
    }

    /// Loop current in units of `I₀` with the control flux applied.
    fn current(&self, l: usize, fc: f64) -> CMat {
        let q = &self.qubits[l];
        let (s, co) = (2.0 * PI * fc).sin_cos();
        (&q.sym - &q.s2 * c(co) - &q.c2 * c(s)) * c(q.design.current_prefactor())
    }

    pub fn hamiltonian_at(&self, fc1: f64, fc2: f64, fdot1: f64, fdot2: f64) -> CMat {
        let id = identity(self.levels);
        let mutual = kron(&self.current(0, fc1), &self.current(1, fc2)) * c(self.coupling.beta_m);
        &self.static_diag
            + kron(&self.local(0, fc1, fdot1), &id)
            + kron(&id, &self.local(1, fc2, fdot2))
            + mutual
    }
}

impl PulsedHamiltonian for MultiLevelModel {
    fn dim(&self) -> usize {
        self.levels * self.levels
    }

    fn hamiltonian(&self, s: &ControlSample) -> CMat {
        self.hamiltonian_at(s.fc[0], s.fc[1], s.fdot[0], s.fdot[1])
    }

    fn uses_derivative(&self) -> bool {
        true
    }
}

/// The multi-level model with the `ḟ_c · P_P` term switched off.
pub struct WithoutDerivative<'a>(pub &'a MultiLevelModel);

impl PulsedHamiltonian for WithoutDerivative<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn hamiltonian(&self, s: &ControlSample) -> CMat {
        self.0.hamiltonian_at(s.fc[0], s.fc[1], 0.0, 0.0)
    }
}

pub fn multilevel_hamiltonian_at(model: &MultiLevelModel, fc1: f64, fc2: f64, fdot1: f64, fdot2: f64) -> CMat {
    model.hamiltonian_at(fc1, fc2, fdot1, fdot2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fro, hermiticity_defect};

    pub(crate) fn synthetic_coefficients(seed: u64) -> ReducedCoefficients {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut r = || rng.random_range(-1.0..1.0);
        let mut pair2 = || [r(), r()];
        let omega = pair2();
        let kz = pair2();
        let kx = pair2();
        let cz = pair2();
        let cx = pair2();
        let rz = pair2();
        let rx = pair2();
        let um = pair2();
        let chz = pair2();
        let chx = pair2();
        let mut r = || rng.random_range(-1.0..1.0);
        let xi = [[[r(), r()], [r(), r()]], [[r(), r()], [r(), r()]]];
        let th = [[r(), r()], [r(), r()]];
        let st = [[r(), r()], [r(), r()]];
        ReducedCoefficients {
            omega,
            kappa_z_slope: kz,
            kappa_x_slope: kx,
            current_z: cz,
            current_x: cx,
            response_z: rz,
            response_x: rx,
            upsilon_mean: um,
            chi_z_slope: chz,
            chi_x_slope: chx,
            xi_slope: xi,
            theta_slope: th,
            static_coupling: st,
            beta_m: 0.5,
        }
    }

    fn zero_coefficients() -> ReducedCoefficients {
        ReducedCoefficients {
            omega: [0.0; 2],
            kappa_z_slope: [0.0; 2],
            kappa_x_slope: [0.0; 2],
            current_z: [0.0; 2],
            current_x: [0.0; 2],
            response_z: [0.0; 2],
            response_x: [0.0; 2],
            upsilon_mean: [0.0; 2],
            chi_z_slope: [0.0; 2],
            chi_x_slope: [0.0; 2],
            xi_slope: [[[0.0; 2]; 2]; 2],
            theta_slope: [[0.0; 2]; 2],
            static_coupling: [[0.0; 2]; 2],
            beta_m: 0.0,
        }
    }

    #[test]
    fn zero_coefficients_give_zero_matrix() {
        let h = general_two_level_hamiltonian_at(&zero_coefficients(), 3e-4, -2e-4);
        assert_eq!(fro(&h), 0.0);
    }

    #[test]
    fn zero_flux_leaves_the_static_part() {
        let k = synthetic_coefficients(1);
        let m = ReducedModel::simplified(k.clone());
        let h = m.hamiltonian_at(0.0, 0.0);
        let expected = on_qubit(0, &pauli_z()) * c(k.omega[0] / 2.0)
            + on_qubit(1, &pauli_z()) * c(k.omega[1] / 2.0)
            + kron(&pauli_x(), &pauli_x()) * c(k.static_coupling[X][X]);
        assert!(fro(&(h - expected)) < 1e-15);
    }

    #[test]
    fn gg_ge_element_by_hand() {
        // Expanding the simplified form by hand for ⟨gg|H|ge⟩: only the σ_x⁽²⁾
        // drive and the σ_z⁽¹⁾σ_x⁽²⁾ term reach it, and ⟨g|σ_z|g⟩ = −1.
        let k = synthetic_coefficients(2);
        let (f1, f2) = (4e-4, -7e-4);
        let h = ReducedModel::simplified(k.clone()).hamiltonian_at(f1, f2);
        let expected = k.kappa_x_slope[1] * f2 + k.xi_slope[0][Z][X] * f1;
        assert!((h[(0, 1)] - c(expected)).norm() < 1e-15);
    }

    #[test]
    fn modes_agree_when_parity_terms_vanish() {
        let mut k = synthetic_coefficients(3);
        for l in 0..2 {
            k.kappa_z_slope[l] = 0.0;
            k.chi_x_slope[l] = 0.0;
            for (i, j) in [(Z, Z), (X, X), (X, Z)] {
                k.xi_slope[l][i][j] = 0.0;
            }
        }
        for (i, j) in [(Z, Z), (Z, X), (X, Z)] {
            k.static_coupling[i][j] = 0.0;
        }
        for (i, j) in [(X, X), (Z, X), (X, Z)] {
            k.theta_slope[i][j] = 0.0;
        }
        let a = ReducedModel::new(k.clone(), ModelMode::SimplifiedOptimalPoint).hamiltonian_at(5e-4, 8e-4);
        let b = ReducedModel::new(k, ModelMode::GeneralTwoLevel).hamiltonian_at(5e-4, 8e-4);
        assert!(fro(&(a - b)) < 1e-10);
    }

    #[test]
    fn drive_terms_scale_linearly() {
        let k = synthetic_coefficients(4);
        let m = ReducedModel::new(k, ModelMode::GeneralTwoLevel);
        let h0 = m.hamiltonian_at(0.0, 0.0);
        let dyn_part = |s: f64| m.hamiltonian_at(s * 3e-4, s * 6e-4) - &h0;
        let bil = &m.bilinear * c(3e-4 * 6e-4);
        let lin1 = dyn_part(1.0) - &bil;
        let lin2 = dyn_part(2.0) - &bil * c(4.0);
        assert!(fro(&(lin2 - lin1 * c(2.0))) < 1e-14);
    }

    #[test]
    fn derivative_matches_difference() {
        let m = ReducedModel::new(synthetic_coefficients(5), ModelMode::GeneralTwoLevel);
        let (f1, f2, h) = (2e-4, -3e-4, 1e-6);
        let fd = (m.hamiltonian_at(f1 + h, f2) - m.hamiltonian_at(f1 - h, f2)) * c(0.5 / h);
        assert!(fro(&(fd - m.drive_derivative(0, f2))) < 1e-8);
        let fd = (m.hamiltonian_at(f1, f2 + h) - m.hamiltonian_at(f1, f2 - h)) * c(0.5 / h);
        assert!(fro(&(fd - m.drive_derivative(1, f1))) < 1e-8);
    }

    #[test]
    fn reduced_hamiltonians_are_hermitian() {
        for seed in 0..8 {
            let m = ReducedModel::new(synthetic_coefficients(seed), ModelMode::GeneralTwoLevel);
            assert!(hermiticity_defect(&m.hamiltonian_at(7e-4, -9e-4)) < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_and_linear_channels() {
        let dt = 1e-3;
        let p = PulseSequence::from_fn(dt, 50, |_| 4e-4, |t| 2e-4 * t).unwrap();
        let d = pulse_time_derivative(&p).unwrap();
        assert!(d[0].iter().all(|v| v.abs() < 1e-12));
        assert!(d[1].iter().all(|v| (v - 2e-4).abs() < 1e-12));
    }

    #[test]
    fn derivative_of_sine_within_taylor_bound() {
        let (dt, w, amp) = (5e-4, 2.0 * PI * 8.24, 1e-4);
        let n = 400;
        let p = PulseSequence::from_fn(dt, n, |t| amp * (w * t).sin(), |_| 0.0).unwrap();
        let d = pulse_time_derivative(&p).unwrap();
        let err = |j: usize| (d[0][j] - amp * w * (w * p.time(j)).cos()).abs();
        let bound = amp * w.powi(3) * dt * dt / 6.0;
        for j in 1..n - 1 {
            assert!(err(j) <= bound * (1.0 + 1e-6), "interior step {j}");
        }
        // Second-order one-sided stencils carry twice the central remainder.
        assert!(err(0) <= 2.0 * bound && err(n - 1) <= 2.0 * bound);
    }

    #[test]
    fn single_sample_derivative_rejected() {
        let p = PulseSequence::zeros(1e-3, 1);
        assert!(matches!(
            pulse_time_derivative(&p),
            Err(FluxError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn pulse_sequence_validation() {
        assert!(PulseSequence::new(1e-3, vec![0.0; 3], vec![0.0; 4]).is_err());
        assert!(matches!(
            PulseSequence::new(1e-3, vec![0.0, f64::NAN], vec![0.0; 2]),
            Err(FluxError::NonFinite { step: 1 })
        ));
        assert!(PulseSequence::new(0.0, vec![0.0], vec![0.0]).is_err());
    }

    fn two_level_pair() -> (ReducedModel, MultiLevelModel) {
        let dev = crate::qubit_model::tests_support::reference_device();
        let reduced = ReducedModel::new(dev.coefficients.clone(), ModelMode::GeneralTwoLevel);
        (reduced, MultiLevelModel::from_device(dev, 2).unwrap())
    }

    fn rel_diff(a: &CMat, b: &CMat) -> f64 {
        fro(&(a - b)) / fro(b)
    }

    #[test]
    fn multilevel_static_part_matches_reduced() {
        let (reduced, ml) = two_level_pair();
        let h = ml.hamiltonian_at(0.0, 0.0, 0.0, 0.0);
        assert!(rel_diff(&h, reduced.static_part()) < 1e-10);
    }

    /// `(mean, z, x)` components of a two-level block in the `(g, e)` basis.
    fn components(m: &CMat) -> [f64; 3] {
        [
            0.5 * (m[(0, 0)].re + m[(1, 1)].re),
            0.5 * (m[(1, 1)].re - m[(0, 0)].re),
            m[(1, 0)].re,
        ]
    }

    fn single(l: usize, [mean, z, x]: [f64; 3]) -> CMat {
        on_qubit(l, &identity(2)) * c(mean) + on_qubit(l, &pauli_z()) * c(z) + on_qubit(l, &pauli_x()) * c(x)
    }

    #[test]
    fn multilevel_linearization_matches_reduced() {
        // The exact first-order mutual term is −2πβ·R⁽ˡ⁾⊗I⁽ᵐ⁾/I₀ with
        // R = α/(1+2α)·C2. Besides Ξ it carries ⟨R⁽ˡ⁾⟩·I⁽ᵐ⁾ (a drive on the
        // other qubit) and R⁽ˡ⁾·⟨I⁽ᵐ⁾⟩, whereas the reduced form uses
        // R⁽ˡ⁾·⟨Υ⁽ᵐ⁾⟩ (χ). Swap those terms, then everything must agree.
        let dev = crate::qubit_model::tests_support::reference_device();
        let (reduced, ml) = two_level_pair();
        let k = &reduced.coeffs;
        let beta = dev.coupling.beta_m;
        let cut = |m: &CMat| m.view((0, 0), (2, 2)).into_owned();
        let resp = [0, 1].map(|l| components(&cut(&dev.qubits[l].elements.response())));
        let cur = [0, 1].map(|l| components(&cut(&dev.qubits[l].elements.current)));

        let f = 1e-5;
        let at = |f1: f64, f2: f64| ml.hamiltonian_at(f1, f2, 0.0, 0.0);
        for l in 0..2 {
            let m = 1 - l;
            let (fl, fm) = if l == 0 { (f, 0.0) } else { (0.0, f) };
            let slope = (at(fl, fm) - at(-fl, -fm)) * c(0.5 / f);
            let chi = single(l, [0.0, k.chi_z_slope[l], k.chi_x_slope[l]]);
            let g = -2.0 * PI * beta;
            let own = single(l, [0.0, g * resp[l][1] * cur[m][0], g * resp[l][2] * cur[m][0]]);
            let other = single(m, cur[m].map(|v| g * resp[l][0] * v));
            let exact = &reduced.linear[l] + chi + own + other;
            assert!(rel_diff(&slope, &exact) < 1e-8, "channel {l}: {:e}", rel_diff(&slope, &exact));
            // The omitted cross drive stays small against the own drive.
            assert!(rel_diff(&slope, &reduced.linear[l]) < 1e-3);
        }

        let f = 1e-4;
        let mixed = (at(f, f) - at(f, -f) - at(-f, f) + at(-f, -f)) * c(0.25 / (f * f));
        let g = (2.0 * PI).powi(2) * beta;
        let means = single(0, resp[0].map(|v| g * v * resp[1][0])) + single(1, resp[1].map(|v| g * v * resp[0][0]))
            - identity(4) * c(g * resp[0][0] * resp[1][0]);
        let exact = &reduced.bilinear + means;
        assert!(rel_diff(&mixed, &exact) < 1e-4, "bilinear: {:e}", rel_diff(&mixed, &exact));
    }

    #[test]
    fn multilevel_zero_drive_is_diagonal_plus_mutual() {
        let dev = crate::qubit_model::tests_support::reference_device();
        let ml = MultiLevelModel::from_device(dev, MULTI_LEVELS).unwrap();
        let h = ml.hamiltonian_at(0.0, 0.0, 0.0, 0.0);
        let mutual = kron(&dev.qubits[0].elements.current, &dev.qubits[1].elements.current) * c(dev.coupling.beta_m);
        assert!(fro(&(&h - &ml.static_diag - mutual)) < 1e-10 * fro(&h));
        assert!(hermiticity_defect(&h) < 1e-12);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn multilevel_hamiltonian_is_hermitian(
            f1 in -1e-3..1e-3_f64,
            f2 in -1e-3..1e-3_f64,
            d1 in -0.1..0.1_f64,
            d2 in -0.1..0.1_f64,
        ) {
            let dev = crate::qubit_model::tests_support::reference_device();
            let ml = MultiLevelModel::from_device(dev, MULTI_LEVELS).unwrap();
            let h = multilevel_hamiltonian_at(&ml, f1, f2, d1, d2);
            proptest::prop_assert!(hermiticity_defect(&h) < 1e-12 * fro(&h));
        }

        #[test]
        fn single_flux_terms_are_linear(seed in 0u64..1000, f1 in -1e-3..1e-3_f64, f2 in -1e-3..1e-3_f64) {
            let m = ReducedModel::new(synthetic_coefficients(seed), ModelMode::GeneralTwoLevel);
            let h0 = m.hamiltonian_at(0.0, 0.0);
            let part = |s: f64| m.hamiltonian_at(s * f1, s * f2) - &h0 - &m.bilinear * c(s * s * f1 * f2);
            let scale = fro(&part(1.0)).max(1e-300);
            let tol = 1e-12 * scale + 1e-14 * fro(&h0);
            proptest::prop_assert!(fro(&(part(2.0) - part(1.0) * c(2.0))) <= tol);
        }
    }
}

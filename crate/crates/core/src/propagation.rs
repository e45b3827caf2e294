//! Time-ordered propagation of unitaries, superoperators and states.
//!
//! Every step freezes the Hamiltonian at the sample value and applies its
//! exact exponential, so composition over sub-intervals is exact up to
//! rounding. Superoperators use column stacking throughout:
//! `vec(ρ)[i + d·j] = ρ[i, j]` and `vec(AρB) = (Bᵀ ⊗ A)·vec(ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::hamiltonian::{control_samples, PulseSequence, PulsedHamiltonian};
use crate::linalg::{c, expm, expm_hermitian, identity, kron, sandwich, unitarity_defect, CMat, CVec, I};

/// `exp(−i·H·dt)` for a frozen Hermitian `H`.
pub fn step_unitary(h: &CMat, dt: f64) -> Result<CMat> {
    expm_hermitian(h, dt)
}

fn check_finite(m: &CMat, step: usize) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(FluxError::NonFinite { step })
    }
}

/// `U[j]` at every grid point, `U[0] = I`.
#[derive(Debug, Clone)]
pub struct UnitaryTrajectory {
    pub dt: f64,
    pub steps: Vec<CMat>,
}

impl UnitaryTrajectory {
    pub fn final_unitary(&self) -> &CMat {
        self.steps.last().expect("trajectory holds U[0]")
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.steps.iter().map(unitarity_defect).fold(0.0, f64::max)
    }
}

/// Per-step exponentials `E_j = exp(−i H(t_j) dt)`.
pub fn step_exponentials(model: &dyn PulsedHamiltonian, pulses: &PulseSequence) -> Result<Vec<CMat>> {
    control_samples(model, pulses)?
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let h = model.hamiltonian(s);
            check_finite(&h, j)?;
            step_unitary(&h, pulses.dt)
        })
        .collect()
}

/// `U[j+1] = E_j · U[j]` from `U[0] = I`.
pub fn propagate_unitary(model: &dyn PulsedHamiltonian, pulses: &PulseSequence) -> Result<UnitaryTrajectory> {
    let d = model.dim();
    let mut steps = Vec::with_capacity(pulses.n_steps() + 1);
    steps.push(identity(d));
    for (j, e) in step_exponentials(model, pulses)?.into_iter().enumerate() {
        let next = e * steps.last().unwrap();
        check_finite(&next, j)?;
        debug_assert!(unitarity_defect(&next) < 1e-10 * d as f64);
        steps.push(next);
    }
    Ok(UnitaryTrajectory {
        dt: pulses.dt,
        steps,
    })
}

/// `U(T)` only.
pub fn final_unitary(model: &dyn PulsedHamiltonian, pulses: &PulseSequence) -> Result<CMat> {
    let mut u = identity(model.dim());
    for (j, e) in step_exponentials(model, pulses)?.into_iter().enumerate() {
        u = e * u;
        check_finite(&u, j)?;
    }
    Ok(u)
}

/// Per-qubit relaxation and pure-dephasing rates, 1/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceRates {
    pub gamma1: [f64; 2],
    pub gamma_phi: [f64; 2],
}

impl DecoherenceRates {
    pub fn zero() -> Self {
        Self {
            gamma1: [0.0; 2],
            gamma_phi: [0.0; 2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .gamma1
            .iter()
            .chain(&self.gamma_phi)
            .any(|g| !(g.is_finite() && *g >= 0.0))
        {
            return Err(FluxError::param("rates", "must be finite and non-negative"));
        }
        Ok(())
    }

    /// `Γ₂ = Γ₁/2 + Γ_φ`.
    pub fn gamma2(&self, qubit: usize) -> f64 {
        self.gamma1[qubit] / 2.0 + self.gamma_phi[qubit]
    }
}

/// Single-qubit operator lifted to the 4-dimensional pair space.
fn lift(qubit: usize, op: &CMat) -> CMat {
    if qubit == 0 {
        kron(op, &identity(2))
    } else {
        kron(&identity(2), op)
    }
}

/// `D[L]` as a column-stacked superoperator.
fn dissipator(l: &CMat) -> CMat {
    let d = l.nrows();
    let ldl = l.adjoint() * l;
    let id = identity(d);
    sandwich(l, &l.adjoint()) - (sandwich(&ldl, &id) + sandwich(&id, &ldl)) * c(0.5)
}

/// `−i(I ⊗ H − Hᵀ ⊗ I)`, the commutator part of the generator.
pub fn commutator_generator(h: &CMat) -> CMat {
    let id = identity(h.nrows());
    (sandwich(h, &id) - sandwich(&id, h)) * (-I)
}

/// Dissipative part of the generator (pulse independent).
///
/// `Σ_i Γ₁ D[σ⁻_i] + (Γ_φ/2) D[σ^z_i]`; the factor ½ makes the transverse
/// decay rate `Γ₁/2 + Γ_φ`.
pub fn dissipator_generator(rates: &DecoherenceRates) -> CMat {
    // σ⁻ = |g⟩⟨e| and σ_z = diag(−1, 1) in the (g, e) ordering.
    let lower = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    let z = crate::linalg::pauli_z();
    let mut gen = CMat::zeros(16, 16);
    for q in 0..2 {
        gen += dissipator(&lift(q, &lower)) * c(rates.gamma1[q]);
        gen += dissipator(&lift(q, &z)) * c(rates.gamma_phi[q] / 2.0);
    }
    gen
}

/// The 16×16 Liouvillian for a frozen 4×4 Hamiltonian.
pub fn build_liouvillian(h: &CMat, rates: &DecoherenceRates) -> Result<CMat> {
    if h.nrows() != 4 || h.ncols() != 4 {
        return Err(FluxError::DimensionMismatch {
            expected: 4,
            got: h.nrows(),
        });
    }
    rates.validate()?;
    Ok(commutator_generator(h) + dissipator_generator(rates))
}

/// `G[j]` at every grid point, `G[0] = I`.
#[derive(Debug, Clone)]
pub struct SuperPropagator {
    pub dt: f64,
    pub steps: Vec<CMat>,
}

impl SuperPropagator {
    pub fn final_propagator(&self) -> &CMat {
        self.steps.last().expect("trajectory holds G[0]")
    }
}

/// Per-step `exp(𝓛(t_j)·dt)`.
pub fn superoperator_steps(
    model: &dyn PulsedHamiltonian,
    pulses: &PulseSequence,
    rates: &DecoherenceRates,
) -> Result<Vec<CMat>> {
    if model.dim() != 4 {
        return Err(FluxError::DimensionMismatch {
            expected: 4,
            got: model.dim(),
        });
    }
    rates.validate()?;
    let diss = dissipator_generator(rates);
    control_samples(model, pulses)?
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let h = model.hamiltonian(s);
            check_finite(&h, j)?;
            let gen = (commutator_generator(&h) + &diss) * c(pulses.dt);
            let e = expm(&gen);
            check_finite(&e, j)?;
            Ok(e)
        })
        .collect()
}

/// `G[j+1] = exp(𝓛(t_j)·dt)·G[j]` for the 4×4 reduced model.
pub fn propagate_superoperator(
    model: &dyn PulsedHamiltonian,
    pulses: &PulseSequence,
    rates: &DecoherenceRates,
) -> Result<SuperPropagator> {
    let mut steps = Vec::with_capacity(pulses.n_steps() + 1);
    steps.push(identity(16));
    for (j, e) in superoperator_steps(model, pulses, rates)?.into_iter().enumerate() {
        let next = e * steps.last().unwrap();
        check_finite(&next, j)?;
        steps.push(next);
    }
    Ok(SuperPropagator {
        dt: pulses.dt,
        steps,
    })
}

/// Computational basis label `|q₁ q₂⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisState {
    Gg,
    Ge,
    Eg,
    Ee,
}

impl BasisState {
    pub const ALL: [BasisState; 4] = [BasisState::Gg, BasisState::Ge, BasisState::Eg, BasisState::Ee];

    /// Position in the `gg, ge, eg, ee` ordering.
    pub fn position(self) -> usize {
        self as usize
    }

    /// Excitation of each qubit (0 = g, 1 = e).
    pub fn levels(self) -> (usize, usize) {
        (self.position() / 2, self.position() % 2)
    }

    pub fn label(self) -> &'static str {
        ["gg", "ge", "eg", "ee"][self.position()]
    }
}

impl std::str::FromStr for BasisState {
    type Err = FluxError;

    fn from_str(s: &str) -> Result<Self> {
        BasisState::ALL
            .into_iter()
            .find(|b| b.label() == s.to_ascii_lowercase())
            .ok_or_else(|| FluxError::param("initial", format!("`{s}` is not one of gg, ge, eg, ee")))
    }
}

/// Computational-state populations per grid point plus the leaked remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTraces {
    pub initial: BasisState,
    pub times: Vec<f64>,
    /// `[P_gg, P_ge, P_eg, P_ee, P_leak]`.
    pub rows: Vec<[f64; 5]>,
}

impl PopulationTraces {
    pub fn final_row(&self) -> &[f64; 5] {
        self.rows.last().expect("traces include t = 0")
    }
}

/// Evolve a computational basis state and record its populations.
///
/// Works for the reduced (4) and multi-level (`levels²`) models; in the
/// latter the computational states are levels 0 and 1 of each loop.
pub fn evolve_populations(
    model: &dyn PulsedHamiltonian,
    pulses: &PulseSequence,
    initial: BasisState,
) -> Result<PopulationTraces> {
    let d = model.dim();
    let levels = (d as f64).sqrt().round() as usize;
    if levels * levels != d {
        return Err(FluxError::param("model", "dimension is not a product of two equal factors"));
    }
    let comp: Vec<usize> = BasisState::ALL
        .iter()
        .map(|b| {
            let (a, bb) = b.levels();
            a * levels + bb
        })
        .collect();
    let mut psi = CVec::zeros(d);
    psi[comp[initial.position()]] = c(1.0);

    let record = |psi: &CVec| {
        let mut row = [0.0; 5];
        for (k, &idx) in comp.iter().enumerate() {
            row[k] = psi[idx].norm_sqr();
        }
        row[4] = (1.0 - row[..4].iter().sum::<f64>()).max(0.0);
        row
    };
    let mut rows = Vec::with_capacity(pulses.n_steps() + 1);
    rows.push(record(&psi));
    for (j, e) in step_exponentials(model, pulses)?.into_iter().enumerate() {
        psi = e * psi;
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FluxError::NonFinite { step: j });
        }
        rows.push(record(&psi));
    }
    Ok(PopulationTraces {
        initial,
        times: (0..rows.len()).map(|j| pulses.time(j)).collect(),
        rows,
    })
}

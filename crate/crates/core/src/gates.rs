//! Gate targets, error metrics and the resonant π-pulse baseline.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::hamiltonian::{MultiLevelModel, PulseSequence, PulsedHamiltonian, ReducedModel};
use crate::linalg::{c, fro, identity, inner, kron, pauli_x, sandwich, CMat};
use crate::propagation::{final_unitary, DecoherenceRates};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateName {
    Z1,
    X1,
    Z2,
    X2,
    #[serde(rename = "CNOT12")]
    Cnot12,
    #[serde(rename = "CNOT21")]
    Cnot21,
    I,
}

impl GateName {
    /// The six gates of the reference study, in table order.
    pub const REFERENCE_SUITE: [GateName; 6] = [
        GateName::Z1,
        GateName::X1,
        GateName::Z2,
        GateName::X2,
        GateName::Cnot12,
        GateName::Cnot21,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Z1 => "Z1",
            GateName::X1 => "X1",
            GateName::Z2 => "Z2",
            GateName::X2 => "X2",
            GateName::Cnot12 => "CNOT12",
            GateName::Cnot21 => "CNOT21",
            GateName::I => "I",
        }
    }

    /// Gate time used in the reference study, ns.
    pub fn default_time(self) -> f64 {
        match self {
            GateName::Z1 | GateName::X1 => 0.8,
            GateName::Z2 | GateName::X2 => 0.9,
            GateName::Cnot12 | GateName::Cnot21 | GateName::I => 2.0,
        }
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateName::Cnot12 | GateName::Cnot21)
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = FluxError;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        [
            GateName::Z1,
            GateName::X1,
            GateName::Z2,
            GateName::X2,
            GateName::Cnot12,
            GateName::Cnot21,
            GateName::I,
        ]
        .into_iter()
        .find(|g| g.as_str() == up)
        .ok_or_else(|| FluxError::UnknownGate(s.to_string()))
    }
}

fn z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

fn projector(level: usize) -> CMat {
    let mut p = CMat::zeros(2, 2);
    p[(level, level)] = c(1.0);
    p
}

/// Swap of the two qubits.
pub fn swap() -> CMat {
    let mut s = CMat::zeros(4, 4);
    for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        s[(a, b)] = c(1.0);
    }
    s
}

/// A named gate: the literal matrix and the matrix the metrics compare to.
///
/// Single-qubit gates are the π rotations `R_x(π) = −iX` and `R_z(π) = −iZ`
/// on one qubit. The CNOTs use the special-unitary representative
/// `e^{−iπ/4}·CNOT`: the reduced Hamiltonian is traceless, so every reachable
/// propagator has unit determinant while `det CNOT = −1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTarget {
    pub name: GateName,
    pub literal: CMat,
    pub matrix: CMat,
}

pub fn make_target(name: GateName) -> GateTarget {
    let id = identity(2);
    let literal = match name {
        GateName::Z1 => kron(&z(), &id),
        GateName::X1 => kron(&pauli_x(), &id),
        GateName::Z2 => kron(&id, &z()),
        GateName::X2 => kron(&id, &pauli_x()),
        GateName::Cnot12 => kron(&projector(0), &id) + kron(&projector(1), &pauli_x()),
        GateName::Cnot21 => kron(&id, &projector(0)) + kron(&pauli_x(), &projector(1)),
        GateName::I => identity(4),
    };
    let phase = match name {
        GateName::Z1 | GateName::X1 | GateName::Z2 | GateName::X2 => -PI / 2.0,
        GateName::Cnot12 | GateName::Cnot21 => -PI / 4.0,
        GateName::I => 0.0,
    };
    let matrix = &literal * Complex64::from_polar(1.0, phase);
    GateTarget { name, literal, matrix }
}

/// `η = (1/2d)·Tr[(O − U)†(O − U)]`.
pub fn gate_error_eta(u: &CMat, o: &CMat) -> Result<f64> {
    if u.shape() != o.shape() {
        return Err(FluxError::DimensionMismatch {
            expected: o.nrows(),
            got: u.nrows(),
        });
    }
    let d = o.nrows() as f64;
    Ok(fro(&(o - u)).powi(2) / (2.0 * d))
}

/// `min_φ η(e^{iφ}U, O)`, a diagnostic that ignores the global phase.
pub fn phase_optimized_error(u: &CMat, o: &CMat) -> Result<f64> {
    if u.shape() != o.shape() {
        return Err(FluxError::DimensionMismatch {
            expected: o.nrows(),
            got: u.nrows(),
        });
    }
    let d = o.nrows() as f64;
    let e = fro(o).powi(2) + fro(u).powi(2) - 2.0 * inner(o, u).norm();
    Ok(e.max(0.0) / (2.0 * d))
}

/// Maps the product space of two `levels`-level loops onto `{g, e}⊗{g, e}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceProjector {
    pub levels: usize,
    pub matrix: CMat,
}

impl SubspaceProjector {
    pub fn new(levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(FluxError::param("levels", "need at least two levels per loop"));
        }
        let mut matrix = CMat::zeros(4, levels * levels);
        for (row, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            matrix[(row, a * levels + b)] = c(1.0);
        }
        Ok(Self { levels, matrix })
    }

    /// The 4×4 computational block `P·U·P†`.
    pub fn project(&self, u: &CMat) -> Result<CMat> {
        let d = self.levels * self.levels;
        if u.nrows() != d || u.ncols() != d {
            return Err(FluxError::DimensionMismatch {
                expected: d,
                got: u.nrows(),
            });
        }
        Ok(&self.matrix * u * self.matrix.adjoint())
    }
}

/// `η_P` of the projected block, `N = 4`.
pub fn projected_error_eta_p(u: &CMat, target: &GateTarget, projector: &SubspaceProjector) -> Result<f64> {
    gate_error_eta(&projector.project(u)?, &target.matrix)
}

/// `𝓞 = O ⊗ O*` in column stacking, i.e. the superoperator of `ρ ↦ OρO†`.
pub fn target_superoperator(o: &CMat) -> CMat {
    sandwich(o, &o.adjoint())
}

/// `η_D = (1/32)·Tr[(𝓞 − G)†(𝓞 − G)]`.
pub fn dissipative_error_eta_d(g: &CMat, target: &GateTarget) -> Result<f64> {
    if g.nrows() != 16 || g.ncols() != 16 {
        return Err(FluxError::DimensionMismatch {
            expected: 16,
            got: g.nrows(),
        });
    }
    gate_error_eta(g, &target_superoperator(&target.matrix))
}

/// Rates from `T₁` and `T₂` in µs; identical for both qubits.
pub fn decoherence_rates_from_t1_t2(t1_us: f64, t2_us: f64) -> Result<DecoherenceRates> {
    if !(t1_us.is_finite() && t1_us > 0.0) {
        return Err(FluxError::param("T1", "must be positive"));
    }
    if !(t2_us.is_finite() && t2_us > 0.0) {
        return Err(FluxError::param("T2", "must be positive"));
    }
    if t2_us > 2.0 * t1_us {
        return Err(FluxError::param("T2", format!("T2 = {t2_us} µs exceeds 2·T1 = {} µs", 2.0 * t1_us)));
    }
    let (t1, t2) = (t1_us * 1e3, t2_us * 1e3);
    let gamma1 = 1.0 / t1;
    let gamma_phi = (1.0 / t2 - 1.0 / (2.0 * t1)).max(0.0);
    Ok(DecoherenceRates {
        gamma1: [gamma1; 2],
        gamma_phi: [gamma_phi; 2],
    })
}

/// Smallest `n` with `ω₂ / (2n |κ_x slope₁|) ≤ 10⁻³`.
pub const BASELINE_HALF_PERIODS: u32 = 7;

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub amplitude: f64,
    pub gate_time: f64,
    pub pulses: PulseSequence,
    /// Error of the reduced propagator in the frame rotating at `ω₁` on
    /// qubit 1, global phase removed.
    pub eta: f64,
    /// The same for the projected 25-level propagator.
    pub eta_p: f64,
    /// Literal lab-frame, phase-sensitive `η` for comparison.
    pub eta_lab: f64,
}

/// Frame rotating at `ω₁` on qubit 1 only: `exp(+iω₁T σ_z/2) ⊗ I`.
fn undo_qubit1_rotation(omega1: f64, t: f64) -> CMat {
    let mut r = CMat::zeros(2, 2);
    // σ_z = diag(−1, 1) in the (g, e) ordering.
    r[(0, 0)] = Complex64::from_polar(1.0, -omega1 * t / 2.0);
    r[(1, 1)] = Complex64::from_polar(1.0, omega1 * t / 2.0);
    kron(&r, &identity(2))
}

/// Resonant π pulse on qubit 1 ignoring the coupling.
///
/// `f₁(t) = A cos(ω₁t)` with `A = ω₂ / (2n|κ_x slope₁|)`, `T = 2nπ/ω₂`,
/// `n = 7`, and `f₂ = 0`.
pub fn resonant_pi_pulse_baseline(
    model: &ReducedModel,
    multilevel: &MultiLevelModel,
    dt: f64,
) -> Result<BaselineResult> {
    let k = &model.coeffs;
    let n = f64::from(BASELINE_HALF_PERIODS);
    let (w1, w2) = (k.omega[0], k.omega[1]);
    let amplitude = w2 / (2.0 * n * k.kappa_x_slope[0].abs());
    let gate_time = 2.0 * n * PI / w2;
    let n_steps = (gate_time / dt).round() as usize;
    let dt = gate_time / n_steps as f64;
    // Sample at step midpoints so the piecewise-constant drive is centred.
    let pulses = PulseSequence::from_fn(dt, n_steps, |t| amplitude * (w1 * (t + dt / 2.0)).cos(), |_| 0.0)?;

    let target = make_target(GateName::X1);
    let frame = undo_qubit1_rotation(w1, gate_time);
    let u = final_unitary(model, &pulses)?;
    let eta = phase_optimized_error(&(&frame * &u), &target.matrix)?;
    let eta_lab = gate_error_eta(&u, &target.matrix)?;

    let projector = SubspaceProjector::new(multilevel.levels())?;
    let u25 = final_unitary(multilevel, &pulses)?;
    let eta_p = phase_optimized_error(&(&frame * projector.project(&u25)?), &target.matrix)?;
    Ok(BaselineResult {
        amplitude,
        gate_time,
        pulses,
        eta,
        eta_p,
        eta_lab,
    })
}

/// `η` of a pulse sequence on any model against a target, for the reduced
/// (4) or projected multi-level (`levels²`) propagator.
pub fn evaluate_eta(model: &dyn PulsedHamiltonian, pulses: &PulseSequence, target: &GateTarget) -> Result<f64> {
    let u = final_unitary(model, pulses)?;
    if u.nrows() == 4 {
        gate_error_eta(&u, &target.matrix)
    } else {
        let levels = (u.nrows() as f64).sqrt().round() as usize;
        projected_error_eta_p(&u, target, &SubspaceProjector::new(levels)?)
    }
}

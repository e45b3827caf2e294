//! Single three-junction flux qubit: plane-wave eigenproblem and the reduced
//! two-level coefficients of the coupled pair.
//!
//! Units throughout: `ħ = 1`, time in ns, energies as angular frequencies in
//! rad/ns. A frequency quoted in GHz is stored as `2π × value`.
//!
//! The phase coordinates are `φ_P = (φ₁ + φ₂)/2` and `φ_Q = (φ₁ − φ₂)/2`.
//! Wavefunctions periodic in the junction phases `φ₁, φ₂` expand in plane
//! waves `e^{i(m·φ_P + n·φ_Q)}` with integer `m, n` of equal parity, which is
//! the basis used here.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::linalg::{c, fro, hermitian_eigh, CMat, I};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
/// Superconducting flux quantum `h / 2e`, Wb.
pub const FLUX_QUANTUM: f64 = PI * HBAR / ELECTRON_CHARGE;

pub const MIN_CUTOFF: usize = 8;
pub const DEFAULT_CUTOFF: usize = 12;

/// Convert GHz to rad/ns.
pub fn ghz(value: f64) -> f64 {
    2.0 * PI * value
}

/// Convert rad/ns to GHz.
pub fn to_ghz(value: f64) -> f64 {
    value / (2.0 * PI)
}

/// Microscopic parameters of one qubit loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitDesign {
    /// 1 or 2.
    pub index: u8,
    /// Josephson energy of the two large junctions, rad/ns.
    pub ej: f64,
    /// `E_J / E_C` with `E_C = e²/2C_J`.
    pub ej_over_ec: f64,
    /// Area (and capacitance) ratio of the small junction.
    pub alpha: f64,
    /// Static reduced bias flux `Φ_e / Φ₀`.
    pub f_bias: f64,
}

impl QubitDesign {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.ej, self.ej_over_ec, self.alpha, self.f_bias]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(FluxError::param("qubit", "non-finite parameter"));
        }
        if self.index != 1 && self.index != 2 {
            return Err(FluxError::param("index", format!("{} is not 1 or 2", self.index)));
        }
        if self.ej <= 0.0 {
            return Err(FluxError::param("ej", "must be positive"));
        }
        if self.ej_over_ec <= 0.0 {
            return Err(FluxError::param("ej_over_ec", "must be positive"));
        }
        if self.alpha <= 0.0 {
            return Err(FluxError::param("alpha", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.f_bias) {
            return Err(FluxError::param("f_bias", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Charging energy `E_C`, rad/ns.
    pub fn ec(&self) -> f64 {
        self.ej / self.ej_over_ec
    }

    /// `α / (1 + 2α)`, the prefactor shared by the loop current and `Υ`.
    pub fn current_prefactor(&self) -> f64 {
        self.alpha / (1.0 + 2.0 * self.alpha)
    }

    /// `M_Q = 2(Φ₀/2π)² C_J` in `ħ = 1` units (ns/rad): `1 / (4 E_C)`.
    pub fn mass_q(&self) -> f64 {
        1.0 / (4.0 * self.ec())
    }

    /// `M_P = (1 + 2α) M_Q`.
    pub fn mass_p(&self) -> f64 {
        (1.0 + 2.0 * self.alpha) * self.mass_q()
    }

    /// Junction capacitance `C_J = e² / 2E_C`, farad.
    pub fn junction_capacitance(&self) -> f64 {
        ELECTRON_CHARGE.powi(2) / (2.0 * self.ec() * HBAR * 1e9)
    }

    /// Critical current `I₀ = 2π E_J / Φ₀`, ampere.
    pub fn critical_current(&self) -> f64 {
        2.0 * PI * self.ej * HBAR * 1e9 / FLUX_QUANTUM
    }
}

/// Inductive coupling between the two loops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingDesign {
    /// Mutual inductance, pH.
    pub mutual_inductance: f64,
    /// `β_M = M I₀⁽¹⁾ I₀⁽²⁾`, rad/ns.
    pub beta_m: f64,
}

impl CouplingDesign {
    pub fn new(mutual_inductance_ph: f64, q1: &QubitDesign, q2: &QubitDesign) -> Result<Self> {
        if !mutual_inductance_ph.is_finite() || mutual_inductance_ph <= 0.0 {
            return Err(FluxError::param("mutual_inductance", "must be positive and finite"));
        }
        let joules = mutual_inductance_ph * 1e-12 * q1.critical_current() * q2.critical_current();
        Ok(Self {
            mutual_inductance: mutual_inductance_ph,
            beta_m: joules / HBAR * 1e-9,
        })
    }
}

/// Plane waves `e^{i(m φ_P + n φ_Q)}` with `|m|, |n| ≤ n_max` and `m + n` even.
#[derive(Debug, Clone)]
pub struct PlaneWaveBasis {
    n_max: usize,
    states: Vec<(i32, i32)>,
    index: HashMap<(i32, i32), usize>,
}

impl PlaneWaveBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < MIN_CUTOFF {
            return Err(FluxError::CutoffTooSmall { n_max });
        }
        let k = n_max as i32;
        let states: Vec<(i32, i32)> = (-k..=k)
            .flat_map(|m| (-k..=k).map(move |n| (m, n)))
            .filter(|(m, n)| (m + n).rem_euclid(2) == 0)
            .collect();
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Self { n_max, states, index })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(i32, i32)] {
        &self.states
    }

    pub fn index_of(&self, m: i32, n: i32) -> Option<usize> {
        self.index.get(&(m, n)).copied()
    }

    /// Operator `Σ amp·|m+dm, n+dn⟩⟨m, n|`, i.e. multiplication by
    /// `amp·e^{i(dm φ_P + dn φ_Q)}`, truncated to the basis.
    fn shift(&self, dm: i32, dn: i32, amp: num_complex::Complex64) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (col, &(m, n)) in self.states.iter().enumerate() {
            if let Some(row) = self.index_of(m + dm, n + dn) {
                out[(row, col)] += amp;
            }
        }
        out
    }

    /// `sin(2φ_P + 2πf)`.
    pub fn sin_2p(&self, f: f64) -> CMat {
        let e = self.shift(2, 0, (I * 2.0 * PI * f).exp());
        (&e - e.adjoint()) * (-I * 0.5)
    }

    /// `cos(2φ_P + 2πf)`.
    pub fn cos_2p(&self, f: f64) -> CMat {
        let e = self.shift(2, 0, (I * 2.0 * PI * f).exp());
        (&e + e.adjoint()) * c(0.5)
    }

    /// `sin(φ_P + φ_Q) + sin(φ_P − φ_Q)`.
    pub fn sin_sum(&self) -> CMat {
        let a = self.shift(1, 1, c(1.0));
        let b = self.shift(1, -1, c(1.0));
        (&a - a.adjoint() + &b - b.adjoint()) * (-I * 0.5)
    }

    /// `cos φ_Q · cos φ_P`.
    pub fn cos_cos(&self) -> CMat {
        let a = self.shift(1, 1, c(1.0));
        let b = self.shift(1, -1, c(1.0));
        (&a + a.adjoint() + &b + b.adjoint()) * c(0.25)
    }

    /// Momentum conjugate to `φ_P` (`ħ = 1`): `diag(m)`.
    pub fn momentum_p(&self) -> CMat {
        let d = self.dim();
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            self.states.iter().map(|&(m, _)| c(m as f64)),
        ))
    }
}

/// `H_l` in the plane-wave basis.
pub fn build_single_qubit_hamiltonian(design: &QubitDesign, basis: &PlaneWaveBasis) -> Result<CMat> {
    design.validate()?;
    if basis.n_max() < MIN_CUTOFF {
        return Err(FluxError::CutoffTooSmall { n_max: basis.n_max() });
    }
    let ej = design.ej;
    let ec = design.ec();
    let alpha = design.alpha;

    let mut h = basis.cos_cos() * c(-2.0 * ej) - basis.cos_2p(design.f_bias) * c(alpha * ej);
    let offset = 2.0 * ej + alpha * ej;
    for (k, &(m, n)) in basis.states().iter().enumerate() {
        let (m, n) = (m as f64, n as f64);
        let kinetic = 2.0 * ec * m * m / (1.0 + 2.0 * alpha) + 2.0 * ec * n * n;
        h[(k, k)] += c(kinetic + offset);
    }
    Ok(h)
}

/// Lowest eigenpairs of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Ascending, rad/ns.
    pub energies: Vec<f64>,
    /// One eigenvector per column.
    pub states: CMat,
}

impl EigenSolution {
    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }
}

/// Diagonalize `h` and keep the `n_levels` lowest eigenpairs.
///
/// The phases are left as the solver produced them; see
/// [`fix_eigenstate_phases`].
pub fn solve_lowest_eigenstates(h: &CMat, n_levels: usize) -> Result<EigenSolution> {
    let dim = h.nrows();
    if n_levels > dim {
        return Err(FluxError::TooManyLevels {
            requested: n_levels,
            dimension: dim,
        });
    }
    let (values, vectors) = hermitian_eigh(h);
    let energies: Vec<f64> = values[..n_levels].to_vec();
    let states = vectors.columns(0, n_levels).into_owned();

    let scale = fro(h).max(f64::MIN_POSITIVE);
    let residuals: Vec<f64> = (0..n_levels)
        .map(|k| {
            let v = states.column(k);
            (h * v - v * c(energies[k])).norm()
        })
        .collect();
    if residuals.iter().any(|&r| !(r < 1e-10 * scale)) {
        return Err(FluxError::EigenNotConverged { residuals });
    }
    Ok(EigenSolution { energies, states })
}

/// Index of the largest-magnitude coefficient, lowest index among near-ties.
fn dominant_index(v: nalgebra::DVectorView<'_, num_complex::Complex64>) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0)
}

/// Fix the arbitrary eigenvector phases.
///
/// The ground state has its dominant coefficient real and positive. Every
/// excited state `k` is rotated so that `⟨k| sin(2φ_P + 2πf) |g⟩` is real and
/// non-positive; where that element vanishes (below `1e-12`), the dominant
/// coefficient is made real and positive instead.
pub fn fix_eigenstate_phases(
    sol: &EigenSolution,
    design: &QubitDesign,
    basis: &PlaneWaveBasis,
) -> EigenSolution {
    let mut states = sol.states.clone();
    let s2 = basis.sin_2p(design.f_bias);

    let normalize_dominant = |states: &mut CMat, k: usize| {
        let idx = dominant_index(states.column(k));
        let z = states[(idx, k)];
        if z.norm() > 0.0 {
            let p = z.conj() / z.norm();
            for v in states.column_mut(k).iter_mut() {
                *v *= p;
            }
        }
    };

    normalize_dominant(&mut states, 0);
    let s2_ground = &s2 * states.column(0);
    for k in 1..sol.n_levels() {
        let z = states.column(k).dotc(&s2_ground);
        if z.norm() > 1e-12 {
            let p = -z / z.norm();
            for v in states.column_mut(k).iter_mut() {
                *v *= p;
            }
        } else {
            normalize_dominant(&mut states, k);
        }
    }
    EigenSolution {
        energies: sol.energies.clone(),
        states,
    }
}

/// Operator matrices in the (phase-fixed) eigenbasis.
#[derive(Debug, Clone)]
pub struct OperatorElements {
    /// `sin(2φ_P + 2πf)`.
    pub s2: CMat,
    /// `cos(2φ_P + 2πf)`.
    pub c2: CMat,
    /// `sin(φ_P + φ_Q) + sin(φ_P − φ_Q)`.
    pub sym: CMat,
    /// Momentum conjugate to `φ_P`.
    pub pp: CMat,
    /// Loop current in units of `I₀`: `α/(1+2α)·(SYM − S2)`.
    pub current: CMat,
    /// `α/(1+2α)·C2 + current`.
    pub upsilon: CMat,
}

impl OperatorElements {
    pub fn n_levels(&self) -> usize {
        self.s2.nrows()
    }

    /// `Υ − I/I₀ = α/(1+2α)·C2`.
    pub fn response(&self) -> CMat {
        &self.upsilon - &self.current
    }
}

pub fn compute_operator_elements(
    sol: &EigenSolution,
    design: &QubitDesign,
    basis: &PlaneWaveBasis,
) -> OperatorElements {
    let v = &sol.states;
    let project = |op: &CMat| v.adjoint() * op * v;
    let a = design.current_prefactor();

    let s2 = project(&basis.sin_2p(design.f_bias));
    let c2 = project(&basis.cos_2p(design.f_bias));
    let sym = project(&basis.sin_sum());
    let pp = project(&basis.momentum_p());
    let current = (&sym - &s2) * c(a);
    let upsilon = &c2 * c(a) + &current;
    OperatorElements {
        s2,
        c2,
        sym,
        pp,
        current,
        upsilon,
    }
}

/// One solved qubit: its design, lowest levels and operator matrices.
#[derive(Debug, Clone)]
pub struct QubitSolution {
    pub design: QubitDesign,
    pub eigen: EigenSolution,
    pub elements: OperatorElements,
}

impl QubitSolution {
    /// Build, diagonalize and phase-fix `H_l`, then project the operators.
    pub fn solve(design: &QubitDesign, basis: &PlaneWaveBasis, n_levels: usize) -> Result<Self> {
        let h = build_single_qubit_hamiltonian(design, basis)?;
        let raw = solve_lowest_eigenstates(&h, n_levels)?;
        let eigen = fix_eigenstate_phases(&raw, design, basis);
        let elements = compute_operator_elements(&eigen, design, basis);
        Ok(Self {
            design: *design,
            eigen,
            elements,
        })
    }

    pub fn transition_frequency(&self) -> f64 {
        self.eigen.energies[1] - self.eigen.energies[0]
    }
}

/// Pauli-component index used by the coupling tables: `0 → σ_z`, `1 → σ_x`.
pub const Z: usize = 0;
pub const X: usize = 1;

/// Coefficients of the two-level Hamiltonian of the coupled pair.
///
/// All `*_slope` fields are per unit reduced control flux (`theta_slope` per
/// unit `f_c⁽¹⁾ f_c⁽²⁾`) and, like the frequencies, in rad/ns. Tables indexed
/// `[i][j]` use [`Z`] and [`X`] for the Pauli component on qubit 1 (or `l`)
/// and qubit 2 (or `m`) respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoefficients {
    /// Transition frequencies `ω_l`.
    pub omega: [f64; 2],
    /// `σ_z` part of the flux drive, `κ₁⁽ˡ⁾ / f_c⁽ˡ⁾`.
    pub kappa_z_slope: [f64; 2],
    /// `σ_x` part of the flux drive, `κ₂⁽ˡ⁾ / f_c⁽ˡ⁾`.
    pub kappa_x_slope: [f64; 2],
    /// `½(⟨e|I/I₀|e⟩ − ⟨g|I/I₀|g⟩)` (dimensionless, `λ₁`).
    pub current_z: [f64; 2],
    /// `⟨e|I/I₀|g⟩` (`λ₂`).
    pub current_x: [f64; 2],
    /// `½(⟨e|Υ − I/I₀|e⟩ − ⟨g|Υ − I/I₀|g⟩)` (`Ω₁`).
    pub response_z: [f64; 2],
    /// `⟨e|Υ − I/I₀|g⟩` (`Ω₂`).
    pub response_x: [f64; 2],
    /// `½(⟨e|Υ|e⟩ + ⟨g|Υ|g⟩)` (`Δ`).
    pub upsilon_mean: [f64; 2],
    /// `χ₁⁽ˡᵐ⁾ / f_c⁽ˡ⁾` indexed by `l`.
    pub chi_z_slope: [f64; 2],
    /// `χ₂⁽ˡᵐ⁾ / f_c⁽ˡ⁾` indexed by `l`.
    pub chi_x_slope: [f64; 2],
    /// `Ξ_ij⁽ˡᵐ⁾ / f_c⁽ˡ⁾` indexed `[l][i][j]`.
    pub xi_slope: [[[f64; 2]; 2]; 2],
    /// `Θ_ij / (f_c⁽¹⁾ f_c⁽²⁾)`.
    pub theta_slope: [[f64; 2]; 2],
    /// Static couplings `Λ_ij`.
    pub static_coupling: [[f64; 2]; 2],
    /// `β_M`, rad/ns.
    pub beta_m: f64,
}

/// Derive every reduced coefficient from the two solved qubits.
pub fn derive_reduced_coefficients(
    q1: &QubitSolution,
    q2: &QubitSolution,
    coupling: &CouplingDesign,
) -> Result<ReducedCoefficients> {
    let qubits = [q1, q2];
    for q in qubits {
        if q.eigen.n_levels() < 2 {
            return Err(FluxError::TooManyLevels {
                requested: 2,
                dimension: q.eigen.n_levels(),
            });
        }
    }
    let half_diff = |m: &CMat| 0.5 * (m[(1, 1)].re - m[(0, 0)].re);
    let off = |m: &CMat| m[(1, 0)].re;

    let mut omega = [0.0; 2];
    let mut kappa_z_slope = [0.0; 2];
    let mut kappa_x_slope = [0.0; 2];
    let mut current_z = [0.0; 2];
    let mut current_x = [0.0; 2];
    let mut response_z = [0.0; 2];
    let mut response_x = [0.0; 2];
    let mut upsilon_mean = [0.0; 2];

    for (l, q) in qubits.iter().enumerate() {
        let el = &q.elements;
        let drive = 2.0 * PI * q.design.alpha * q.design.ej;
        omega[l] = q.transition_frequency();
        kappa_z_slope[l] = drive * half_diff(&el.s2);
        kappa_x_slope[l] = drive * off(&el.s2);
        current_z[l] = half_diff(&el.current);
        current_x[l] = off(&el.current);
        let resp = el.response();
        response_z[l] = half_diff(&resp);
        response_x[l] = off(&resp);
        upsilon_mean[l] = 0.5 * (el.upsilon[(1, 1)].re + el.upsilon[(0, 0)].re);
    }

    let beta = coupling.beta_m;
    let current = [
        [current_z[0], current_x[0]],
        [current_z[1], current_x[1]],
    ];
    let response = [
        [response_z[0], response_x[0]],
        [response_z[1], response_x[1]],
    ];

    let mut chi_z_slope = [0.0; 2];
    let mut chi_x_slope = [0.0; 2];
    let mut xi_slope = [[[0.0; 2]; 2]; 2];
    for l in 0..2 {
        let m = 1 - l;
        chi_z_slope[l] = 2.0 * PI * beta * response[l][Z] * upsilon_mean[m];
        chi_x_slope[l] = 2.0 * PI * beta * response[l][X] * upsilon_mean[m];
        for i in 0..2 {
            for j in 0..2 {
                xi_slope[l][i][j] = 2.0 * PI * beta * response[l][i] * current[m][j];
            }
        }
    }
    let mut theta_slope = [[0.0; 2]; 2];
    let mut static_coupling = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            theta_slope[i][j] = (2.0 * PI).powi(2) * beta * response[0][i] * response[1][j];
            static_coupling[i][j] = beta * current[0][i] * current[1][j];
        }
    }

    Ok(ReducedCoefficients {
        omega,
        kappa_z_slope,
        kappa_x_slope,
        current_z,
        current_x,
        response_z,
        response_x,
        upsilon_mean,
        chi_z_slope,
        chi_x_slope,
        xi_slope,
        theta_slope,
        static_coupling,
        beta_m: beta,
    })
}

/// Both qubits solved on a common basis, plus their reduced coefficients.
#[derive(Debug, Clone)]
pub struct Device {
    pub qubits: [QubitSolution; 2],
    pub coupling: CouplingDesign,
    pub coefficients: ReducedCoefficients,
    pub n_max: usize,
}

impl Device {
    /// Solve both qubits with `n_levels` levels each (at least 2).
    pub fn derive(
        q1: &QubitDesign,
        q2: &QubitDesign,
        mutual_inductance_ph: f64,
        n_max: usize,
        n_levels: usize,
    ) -> Result<Self> {
        let basis = PlaneWaveBasis::new(n_max)?;
        let coupling = CouplingDesign::new(mutual_inductance_ph, q1, q2)?;
        let (a, b) = rayon::join(
            || QubitSolution::solve(q1, &basis, n_levels.max(2)),
            || QubitSolution::solve(q2, &basis, n_levels.max(2)),
        );
        let qubits = [a?, b?];
        let coefficients = derive_reduced_coefficients(&qubits[0], &qubits[1], &coupling)?;
        Ok(Self {
            qubits,
            coupling,
            coefficients,
            n_max,
        })
    }
}

/// The circuit used throughout the examples and acceptance suite:
/// `E_J,1/ħ = 2π × 248.72 GHz`, `E_J,2 = 2.5 E_J,1`, `E_J/E_C = 35`,
/// `α = 0.8`, both loops at `f = 0.5`, `M = 1 pH`.
pub fn reference_designs() -> (QubitDesign, QubitDesign, f64) {
    let q1 = QubitDesign {
        index: 1,
        ej: ghz(248.72),
        ej_over_ec: 35.0,
        alpha: 0.8,
        f_bias: 0.5,
    };
    let q2 = QubitDesign {
        index: 2,
        ej: 2.5 * ghz(248.72),
        ..q1
    };
    (q1, q2, 1.0)
}

impl Device {
    /// The reference circuit at the default cutoff with five levels per loop.
    pub fn reference() -> Result<Self> {
        let (q1, q2, m) = reference_designs();
        Self::derive(&q1, &q2, m, DEFAULT_CUTOFF, 5)
    }
}

/// One derived coefficient next to its published value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedComparison {
    pub quantity: String,
    /// Derived value, GHz (per unit control flux for slopes).
    pub derived_ghz: f64,
    pub published_ghz: f64,
    pub relative_deviation: f64,
    /// Acceptance bound on `relative_deviation`.
    pub tolerance: f64,
}

impl PublishedComparison {
    pub fn within_tolerance(&self) -> bool {
        self.relative_deviation <= self.tolerance
    }
}

/// Compare the reference-circuit coefficients with the published table.
pub fn compare_with_published(k: &ReducedCoefficients) -> Vec<PublishedComparison> {
    [
        ("omega_1", k.omega[0], 3.30, 0.02),
        ("omega_2", k.omega[1], 8.24, 0.02),
        ("kappa_x_slope_1", k.kappa_x_slope[0], -1.02e3, 0.05),
        ("kappa_x_slope_2", k.kappa_x_slope[1], -2.57e3, 0.05),
        ("Lambda_xx", k.static_coupling[X][X], 0.4, 0.05),
        ("chi_z_slope_1", k.chi_z_slope[0], 4.4e-3, 0.1),
        ("Xi_zx_slope_12", k.xi_slope[0][Z][X], 8.22e-2, 0.1),
        ("Theta_zz_slope", k.theta_slope[Z][Z], 1.66e-2, 0.1),
    ]
    .into_iter()
    .map(|(name, value, published, tolerance)| {
        let derived = to_ghz(value);
        PublishedComparison {
            quantity: name.to_string(),
            derived_ghz: derived,
            published_ghz: published,
            relative_deviation: ((derived - published) / published).abs(),
            tolerance,
        }
    })
    .collect()
}

#[cfg(test)]
pub(crate) mod tests_support {
    use std::sync::OnceLock;

    use super::*;

    pub fn reference_device() -> &'static Device {
        static DEVICE: OnceLock<Device> = OnceLock::new();
        DEVICE.get_or_init(|| Device::reference().unwrap())
    }

    pub fn reference_coefficients() -> ReducedCoefficients {
        reference_device().coefficients.clone()
    }
}

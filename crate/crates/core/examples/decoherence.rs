//! Gate error under relaxation and dephasing (T1 = 13 µs, T2 = 2.5 µs),
//! before and after dissipative Krotov refinement of a Z2 pulse.

use fluxgate::cli::{refine_dissipative, RefineConfig};
use fluxgate::gates::{decoherence_rates_from_t1_t2, dissipative_error_eta_d, make_target, GateName};
use fluxgate::hamiltonian::{ReducedModel, DEFAULT_DT};
use fluxgate::krotov::{default_initial_guess, optimize_gate, OptimizationConfig};
use fluxgate::propagation::propagate_superoperator;
use fluxgate::qubit_model::Device;

fn main() -> fluxgate::Result<()> {
    let device = Device::reference()?;
    let model = ReducedModel::simplified(device.coefficients.clone());
    let target = make_target(GateName::Z2);
    let rates = decoherence_rates_from_t1_t2(13.0, 2.5)?;
    println!("Γ₁ = {:.4e} /ns, Γ_φ = {:.4e} /ns", rates.gamma1[0], rates.gamma_phi[0]);

    let guess = default_initial_guess(&model.coeffs, 0.9, DEFAULT_DT, None)?;
    let unitary = optimize_gate(&model, &target, &OptimizationConfig::default(), &guess)?;
    let g = propagate_superoperator(&model, &unitary.final_pulses, &rates)?;
    println!("η = {:.3e}, η_D of the unitary optimum = {:.4e}", unitary.final_eta(), dissipative_error_eta_d(g.final_propagator(), &target)?);

    let refine = RefineConfig { max_iterations: 10, ..RefineConfig::default() };
    let run = refine_dissipative(&model, &target, &rates, &refine, &unitary.final_pulses)?;
    for r in &run.history {
        println!("  sweep {:>2}  η_D = {:.6e}", r.iteration, r.eta);
    }
    Ok(())
}

//! Apply an optimized X1 pulse to the 25-level model: projected error and
//! population lost from the computational subspace.

use fluxgate::gates::{evaluate_eta, make_target, GateName};
use fluxgate::hamiltonian::{MultiLevelModel, ReducedModel, WithoutDerivative, DEFAULT_DT, MULTI_LEVELS};
use fluxgate::krotov::{default_initial_guess, optimize_gate, OptimizationConfig};
use fluxgate::propagation::{evolve_populations, BasisState};
use fluxgate::qubit_model::Device;

fn main() -> fluxgate::Result<()> {
    let device = Device::reference()?;
    let reduced = ReducedModel::simplified(device.coefficients.clone());
    let multilevel = MultiLevelModel::from_device(&device, MULTI_LEVELS)?;
    let target = make_target(GateName::X1);

    let guess = default_initial_guess(&reduced.coeffs, 0.8, DEFAULT_DT, None)?;
    let pulses = optimize_gate(&reduced, &target, &OptimizationConfig::default(), &guess)?.final_pulses;

    println!("η   (4 levels)  = {:.3e}", evaluate_eta(&reduced, &pulses, &target)?);
    println!("η_P (25 levels) = {:.3e}", evaluate_eta(&multilevel, &pulses, &target)?);
    println!("η_P without ḟ   = {:.3e}", evaluate_eta(&WithoutDerivative(&multilevel), &pulses, &target)?);

    for b in BasisState::ALL {
        let tr = evolve_populations(&multilevel, &pulses, b)?;
        let peak = tr.rows.iter().map(|r| r[4]).fold(0.0, f64::max);
        println!("|{}⟩: final leakage {:.2e}, peak {:.2e}", b.label(), tr.final_row()[4], peak);
    }
    Ok(())
}

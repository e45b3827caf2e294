//! CNOT with qubit 2 as control (CNOT21) in 2 ns, then its truth table on
//! the reduced model.

use fluxgate::gates::{make_target, GateName};
use fluxgate::hamiltonian::{ReducedModel, DEFAULT_DT};
use fluxgate::krotov::{default_initial_guess, optimize_gate, OptimizationConfig};
use fluxgate::propagation::{evolve_populations, BasisState};
use fluxgate::qubit_model::Device;

fn main() -> fluxgate::Result<()> {
    let gate: GateName = std::env::args().nth(1).as_deref().unwrap_or("CNOT21").parse()?;
    let device = Device::reference()?;
    let model = ReducedModel::simplified(device.coefficients.clone());
    let guess = default_initial_guess(&model.coeffs, gate.default_time(), DEFAULT_DT, None)?;
    let run = optimize_gate(&model, &make_target(gate), &OptimizationConfig::default(), &guess)?;
    println!("{gate}: η = {:.3e} after {} iterations", run.final_eta(), run.history.len());

    println!("        gg        ge        eg        ee");
    for b in BasisState::ALL {
        let tr = evolve_populations(&model, &run.final_pulses, b)?;
        let p = tr.final_row();
        println!("{}  {:.6}  {:.6}  {:.6}  {:.6}", b.label(), p[0], p[1], p[2], p[3]);
    }
    Ok(())
}

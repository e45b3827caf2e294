//! Krotov synthesis of an X gate on qubit 1 in 0.8 ns.
//!
//! `cargo run --release --example optimize_single_qubit -- Z2 0.9` picks
//! another gate and time.

use fluxgate::gates::{make_target, GateName};
use fluxgate::hamiltonian::{ReducedModel, DEFAULT_DT};
use fluxgate::krotov::{default_initial_guess, optimize_gate, OptimizationConfig};
use fluxgate::qubit_model::Device;

fn main() -> fluxgate::Result<()> {
    let mut args = std::env::args().skip(1);
    let gate: GateName = args.next().as_deref().unwrap_or("X1").parse()?;
    let t: f64 = args.next().map_or(gate.default_time(), |s| s.parse().expect("gate time in ns"));

    let device = Device::reference()?;
    let model = ReducedModel::simplified(device.coefficients.clone());
    let guess = default_initial_guess(&model.coeffs, t, DEFAULT_DT, None)?;
    let run = optimize_gate(&model, &make_target(gate), &OptimizationConfig::default(), &guess)?;

    println!("{gate} in {t} ns: η₀ = {:.4e}", run.initial_eta);
    let n = run.history.len();
    for r in run.history.iter().filter(|r| r.iteration.is_power_of_two() || r.iteration == n) {
        println!("  iter {:>5}  η = {:.4e}  J = {:.4e}", r.iteration, r.eta, r.cost);
    }
    println!("termination: {:?}, max |f_c| = {:.3e}", run.termination, run.final_pulses.max_amplitude());
    Ok(())
}

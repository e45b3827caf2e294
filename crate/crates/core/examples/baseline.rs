//! The conventional resonant π pulse on qubit 1 against an optimized X1.

use fluxgate::gates::{evaluate_eta, make_target, resonant_pi_pulse_baseline, GateName, BASELINE_HALF_PERIODS};
use fluxgate::hamiltonian::{MultiLevelModel, ReducedModel, DEFAULT_DT, MULTI_LEVELS};
use fluxgate::krotov::{default_initial_guess, optimize_gate, OptimizationConfig};
use fluxgate::qubit_model::Device;

fn main() -> fluxgate::Result<()> {
    let device = Device::reference()?;
    let reduced = ReducedModel::simplified(device.coefficients.clone());
    let multilevel = MultiLevelModel::from_device(&device, MULTI_LEVELS)?;

    let b = resonant_pi_pulse_baseline(&reduced, &multilevel, DEFAULT_DT)?;
    println!(
        "resonant π pulse: n = {BASELINE_HALF_PERIODS}, f_c = {:.3e}·cos(ω₁t), T = {:.4} ns",
        b.amplitude, b.gate_time
    );
    println!("  rotating frame: η = {:.3e}, η_P = {:.3e}", b.eta, b.eta_p);

    let target = make_target(GateName::X1);
    let guess = default_initial_guess(&reduced.coeffs, 0.8, DEFAULT_DT, None)?;
    let pulses = optimize_gate(&reduced, &target, &OptimizationConfig::default(), &guess)?.final_pulses;
    let eta_p = evaluate_eta(&multilevel, &pulses, &target)?;
    println!("optimized X1 (0.8 ns): η_P = {eta_p:.3e}, {:.0}× lower", b.eta_p / eta_p);
    Ok(())
}

//! Solve both loops of the reference circuit and print the reduced
//! coefficients next to the published values.

use fluxgate::qubit_model::{compare_with_published, to_ghz, Device, X, Z};

fn main() -> fluxgate::Result<()> {
    let device = Device::reference()?;
    let k = &device.coefficients;

    for (l, q) in device.qubits.iter().enumerate() {
        let e = &q.eigen.energies;
        println!(
            "qubit {}: ω/2π = {:.4} GHz, levels (GHz) {:?}",
            l + 1,
            to_ghz(q.transition_frequency()),
            e.iter().map(|x| (to_ghz(x - e[0]) * 1e3).round() / 1e3).collect::<Vec<_>>()
        );
    }
    println!("β_M/2π = {:.4} GHz", to_ghz(k.beta_m));
    println!("Λ_zx, Λ_xz, Λ_xx (GHz): {:.3e} {:.3e} {:.4}", to_ghz(k.static_coupling[Z][X]), to_ghz(k.static_coupling[X][Z]), to_ghz(k.static_coupling[X][X]));
    println!();
    for row in compare_with_published(k) {
        println!(
            "{:<16} {:>13.5e}  published {:>10.3e}  dev {:>6.2}%",
            row.quantity,
            row.derived_ghz,
            row.published_ghz,
            100.0 * row.relative_deviation
        );
    }
    Ok(())
}

//! Fidelity after nine periods against the drive frequency.

use dualpump::dynamics::PumpConfig;
use dualpump::harness::{log_grid, run_frequency_sweep};
use dualpump::models::ModelKind;

fn main() -> dualpump::Result<()> {
    let mut config = PumpConfig::reference(ModelKind::SpinFlip);
    config.n_periods = 9;
    let omegas = log_grid(0.03, 0.6, 10);
    let sweep = run_frequency_sweep(&config, &omegas, 0.0)?;
    for p in &sweep.points {
        let bar = "#".repeat((40.0 * p.mean).round() as usize);
        println!("omega {:.3}  F = {:.4}  {bar}", p.value, p.mean);
    }
    Ok(())
}

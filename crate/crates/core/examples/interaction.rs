//! Which states survive the interaction: the lowest band keeps its quantized
//! displacement, two excitations per trimer do not.

use std::f64::consts::PI;

use dualpump::dynamics::{InitialState, PumpConfig};
use dualpump::harness::run_interaction_band_check;
use dualpump::models::ModelKind;

fn main() -> dualpump::Result<()> {
    let lowest = PumpConfig::reference(ModelKind::SpinFlip);
    let mut pair = lowest.clone();
    pair.initial = InitialState::Cells { sites: vec![1, 2] };
    pair.drive.phi0 = PI / 6.0;
    for (name, config) in [("lowest band", lowest), ("two per trimer", pair)] {
        let check = run_interaction_band_check(&config, 1.0)?;
        println!("{name}");
        println!("  K = 0  {:?}  F = {:.4}", check.baseline, check.baseline_fidelity);
        println!("  K = J  {:?}  F = {:.4}", check.displacement, check.fidelity);
        println!("  deviation {:.3}", check.deviation);
    }
    Ok(())
}

//! Pumps one excitation per trimer for three periods and prints the
//! shift of the excitations, in sites, after each period.
//!
//! cargo run --release --example pump -- cluster

use std::time::Instant;

use dualpump::dynamics::{pump_run, PumpConfig};
use dualpump::models::ModelKind;

fn main() -> dualpump::Result<()> {
    let kind: ModelKind = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "spin_flip".into())
        .parse()?;
    let start = Instant::now();
    let record = pump_run(&PumpConfig::reference(kind))?;
    println!("model              {kind}");
    println!("preparation overlap {:.6}", record.preparation_overlap);
    for (k, d) in record.displacement_per_period.iter().enumerate() {
        println!("x({}T) - x(0)       {d:+.4}", k + 1);
    }
    println!("fidelity after 3T  {:.8}", record.fidelity);
    println!("max norm drift     {:.2e}", record.trajectory.stats.max_norm_drift);
    println!("steps / matvecs    {} / {}", record.trajectory.stats.steps, record.trajectory.stats.matvecs);
    println!("wall time          {:.1?}", start.elapsed());
    Ok(())
}

//! Mean pump fidelity against disorder strength, with and without the
//! interaction. Small grid; the CLI `disorder` subcommand runs the full one.
//!
//! DUALPUMP_WORKERS=4 cargo run --release --example disorder_sweep -- G

use dualpump::dynamics::PumpConfig;
use dualpump::harness::run_disorder_sweep;
use dualpump::models::{DisorderTarget, ModelKind};

fn main() -> dualpump::Result<()> {
    let target: DisorderTarget = std::env::args().nth(1).unwrap_or_else(|| "G".into()).parse()?;
    let config = PumpConfig::reference(ModelKind::SpinFlip);
    let deltas = [0.0, 0.5, 1.0, 1.5];
    for k in [0.0, 1.0] {
        let sweep = run_disorder_sweep(&config, &deltas, target, k, 4)?;
        println!("target {target:?}, K = {k}");
        for p in &sweep.points {
            println!("  delta {:.2}  F = {:.3} +- {:.3}  ({} runs)", p.value, p.mean, p.stderr, p.count);
        }
        match sweep.crossing(0.5) {
            Some(d) => println!("  F = 0.5 at delta ~ {d:.2}"),
            None => println!("  F stays above 0.5"),
        }
    }
    Ok(())
}

//! Overlap of each analytic one-excitation-per-trimer state with the
//! closest numerical eigenstate at the reference drive.
//!
//! cargo run --release --example table1

use dualpump::dynamics::best_eigenstate;
use dualpump::models::{build_model, DriveParams, ModelKind, ModelSpec};
use dualpump::quantum_info::{analytic_state, regime_time, Regime};

fn main() -> dualpump::Result<()> {
    let p = DriveParams::reference();
    println!("{:<10} {:<5} {:>10} {:>10} {:>7}", "model", "cell", "|<a|n>|^2", "|<a|n>|", "parity");
    for kind in ModelKind::DUAL_TRIPLE {
        let h = build_model(&ModelSpec::new(kind, 1.0), &p)?;
        for regime in Regime::BOTH {
            let t = regime_time(&p, regime);
            let analytic = analytic_state(kind, regime, p.n)?;
            let best = best_eigenstate(&h.at(t), &analytic)?;
            println!(
                "{:<10} {:<5} {:>10.6} {:>10.6} {:>7}",
                kind.name(),
                regime.name(),
                best.overlap,
                best.overlap.sqrt(),
                best.x_parity.map_or("-".into(), |s| format!("{s:+}"))
            );
        }
    }
    Ok(())
}

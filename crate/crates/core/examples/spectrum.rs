//! Instantaneous one-excitation and one-per-trimer spectra of the spin-flip
//! chain over a drive period, with the anti-crossings located.

use std::time::Instant;

use dualpump::models::{build_model, DriveParams, ModelKind, ModelSpec};
use dualpump::topology::{anti_crossings, default_band_size};

fn main() -> dualpump::Result<()> {
    let p = DriveParams::reference();
    let kind = ModelKind::SpinFlip;
    let h = build_model(&ModelSpec::new(kind, 1.0), &p)?;
    let q = p.b.denom() as usize;
    for excitations in [1, p.n / q] {
        let started = Instant::now();
        let band = default_band_size(p.n, q, excitations)?;
        let crossings = anti_crossings(&h, kind, excitations, band, 60)?;
        println!("{excitations} excitation(s), lowest band of {band} level(s):");
        for c in &crossings {
            println!("  t = {:8.3} (omega t = {:6.4} pi)  gap = {:.6}", c.time, p.omega * c.time / std::f64::consts::PI, c.gap);
        }
        println!("  {:?}", started.elapsed());
    }
    Ok(())
}

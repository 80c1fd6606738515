//! Chern numbers of the Hofstadter bands and of the driven Aubry-Andre chain.
//!
//! cargo run --release --example chern -- 2/5

use dualpump::models::DriveParams;
use dualpump::topology::{band_data, AubryAndre, BlochFamily};

fn main() -> dualpump::Result<()> {
    let b = std::env::args().nth(1).unwrap_or_else(|| "1/3".into()).parse()?;
    let hofstadter = BlochFamily::Hofstadter { jx: 1.0, jy: 1.0, b };
    let driven = BlochFamily::AubryAndre(AubryAndre::from_drive(&DriveParams::reference(), 1.0));
    for (name, family) in [("Hofstadter", hofstadter), ("driven chain (b = 1/3)", driven)] {
        let data = band_data(&family, 51)?;
        println!("{name}");
        for c in &data.chern {
            println!("  band {}  C = {:+}  raw {:+.12}  min gap {:.4}", c.band, c.chern, c.raw, c.min_gap);
        }
        println!("  sum {}", data.chern_sum());
    }
    Ok(())
}

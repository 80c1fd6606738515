//! Maps operators between the three dual frames.

use dualpump::models::operators::{drive_family, driving_op};
use dualpump::models::{chain_to_spin_flip, ModelKind};
use dualpump::pauli::{kw_dualize, parse, reduce_to_single, rotate_x};

fn main() -> dualpump::Result<()> {
    let n = 6;
    // the printed duality rules, one site at a time
    for text in ["X2", "Z1 Z2", "Z0 Z1 Z2 Z3"] {
        let op = parse(text, n)?;
        println!("kw({text}) = {}", kw_dualize(&op)?);
    }
    println!("rot(Y2 Y3) = {}", rotate_x(&parse("Y2 Y3", n)?));

    for kind in [ModelKind::Kink, ModelKind::Cluster, ModelKind::HigherR(1)] {
        let n = 9;
        let chain = chain_to_spin_flip(kind, n)?;
        println!("\n{kind}: chain to spin flips {chain}");
        let drive = driving_op(kind, n, 4)?;
        println!("  D_4 = {drive}  ->  {}", chain.apply(&drive)?);
    }

    // search a rewrite chain for a family of terms
    let family = drive_family(ModelKind::Cluster, n)?;
    let found = reduce_to_single(&family, 3)?;
    println!("\nreduction of the cluster drive family: {}", found.chain);
    for (a, b) in family.iter().zip(&found.reduced).take(2) {
        println!("  {a}  ->  {b}");
    }
    Ok(())
}

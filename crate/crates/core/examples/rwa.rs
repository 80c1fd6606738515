//! Single flips of the effective XY chain are the Aubry-Andre ring; compares
//! both with the exact driven chain.

use dualpump::linalg::eigvalsh;
use dualpump::models::{build_model, effective_rwa_model, DriveParams, ModelKind, ModelSpec};
use dualpump::topology::{aa_real_space, instantaneous_band_spectrum, AubryAndre};

fn main() -> dualpump::Result<()> {
    let p = DriveParams::reference();
    let exact = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p)?;
    let rwa = effective_rwa_model(&p, 1.0)?;
    let aa = AubryAndre::from_drive(&p, 1.0);
    let times: Vec<f64> = (0..6).map(|k| k as f64 * p.period() / 6.0).collect();
    let band = |h, m| instantaneous_band_spectrum(h, ModelKind::SpinFlip, m, &times);
    let (e0, e1, r1) = (band(&exact, 0)?, band(&exact, 1)?, band(&rwa, 1)?);
    let r0 = band(&rwa, 0)?;
    for (k, &t) in times.iter().enumerate() {
        let ring = eigvalsh(&aa_real_space(p.n, t, &aa)?);
        let ring_dev = ring.iter().zip(&r1.levels[k]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let exact_dev = e1.levels[k]
            .iter()
            .zip(&r1.levels[k])
            .map(|(a, b)| ((a - e0.levels[k][0]) - (b - r0.levels[k][0])).abs())
            .fold(0.0, f64::max);
        println!("t/T = {:.3}  |XY - ring| {ring_dev:.1e}  |exact - XY| {exact_dev:.4}", t / p.period());
    }
    println!("J^2/g0 = {:.3}", 1.0 / p.g0);
    Ok(())
}

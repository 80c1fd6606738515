use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dualpump::dynamics::pump_run;
use dualpump::harness::{
    config_hash, run_disorder_sweep, run_frequency_sweep, table1_check, write_json, write_sweep_csv,
    write_trajectory_csv, HarnessConfig,
};
use dualpump::models::{build_model, chain_to_spin_flip, DisorderTarget, ModelKind, Rational};
use dualpump::models::operators::{bond_op, driving_op, interaction_op};
use dualpump::pauli::{parse, text::format_sum};
use dualpump::topology::{
    anti_crossings, band_data, chern_number, default_band_size, instantaneous_band_spectrum, BlochFamily,
};
use dualpump::{Error, Result};

/// Driven spin chains related by Kramers-Wannier duality.
#[derive(Parser)]
#[command(name = "dualpump", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML (or .json) configuration file; defaults to the reference spin-flip pump.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    g0: Option<f64>,
    #[arg(long)]
    g1: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    phi0: Option<f64>,
    #[arg(long)]
    b: Option<Rational>,
    #[arg(long = "J")]
    j: Option<f64>,
    #[arg(long = "K")]
    k: Option<f64>,
    #[arg(long)]
    n_periods: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn resolve(&self) -> Result<HarnessConfig> {
        let mut c = match &self.config {
            Some(path) => HarnessConfig::load(path)?,
            None => HarnessConfig::reference(ModelKind::SpinFlip),
        };
        let p = &mut c.pump;
        if let Some(v) = self.model {
            p.model.kind = v;
        }
        if let Some(v) = self.n {
            p.drive.n = v;
        }
        if let Some(v) = self.g0 {
            p.drive.g0 = v;
        }
        if let Some(v) = self.g1 {
            p.drive.g1 = v;
        }
        if let Some(v) = self.omega {
            p.drive.omega = v;
        }
        if let Some(v) = self.phi0 {
            p.drive.phi0 = v;
        }
        if let Some(v) = self.b {
            p.drive.b = v;
        }
        if let Some(v) = self.j {
            p.model.j = v;
        }
        if let Some(v) = self.k {
            p.model.k = v;
        }
        if let Some(v) = self.n_periods {
            p.n_periods = v;
        }
        if let Some(v) = self.dt {
            p.integrator.dt = v;
        }
        if let Some(v) = self.seed {
            p.seed = v;
        }
        if let Some(dir) = &self.out {
            c.output.dir = dir.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the lowest band, pump it and write the trajectory.
    Pump {
        #[command(flatten)]
        common: Common,
    },
    /// Fidelity after the pump against disorder strength.
    Disorder {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<DisorderTarget>>,
        /// Interaction strengths to sweep, overriding `disorder.interactions`.
        #[arg(long, value_delimiter = ',')]
        interactions: Option<Vec<f64>>,
        #[arg(long)]
        realizations: Option<usize>,
    },
    /// Fidelity after the pump against drive frequency.
    Frequency {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        omegas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        interactions: Option<Vec<f64>>,
    },
    /// Chern numbers of the Hofstadter bands.
    Chern {
        #[command(flatten)]
        common: Common,
        #[arg(long = "flux")]
        flux: Option<Rational>,
        #[arg(long)]
        band: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Instantaneous spectrum of one excitation sector over a period.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        excitations: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Print the rewrite chain of a model and the spin-flip images of its terms.
    Dualize {
        #[command(flatten)]
        common: Common,
        /// Operator to map instead of the model's own terms, e.g. `-1.0 * Z0 X1 Z2`.
        #[arg(long)]
        expr: Option<String>,
        /// Pull the expression back from the spin-flip frame instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Overlaps of the analytic one-excitation-per-trimer states.
    #[command(name = "table1-check")]
    Table1Check {
        #[command(flatten)]
        common: Common,
    },
}

fn output_dir(c: &HarnessConfig) -> Result<&Path> {
    std::fs::create_dir_all(&c.output.dir)?;
    Ok(&c.output.dir)
}

fn pump(common: &Common) -> Result<()> {
    let c = common.resolve()?;
    let started = Instant::now();
    let record = pump_run(&c.pump)?;
    let dir = output_dir(&c)?;
    write_trajectory_csv(&dir.join("trajectory.csv"), &record)?;
    let manifest = json!({
        "config": c.pump,
        "config_hash": record.config_hash,
        "seed": c.pump.seed,
        "preparation_overlap": record.preparation_overlap,
        "initial_energy": record.initial_energy,
        "x_parity": record.x_parity,
        "fidelity": record.fidelity,
        "displacement_per_period": record.displacement_per_period,
        "integrator": record.trajectory.stats,
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    write_json(&dir.join("manifest.json"), &manifest)?;
    println!(
        "pump {}: displacement per period {:?}, fidelity {:.8}, overlap {:.4} -> {}",
        c.pump.model.kind,
        record
            .displacement_per_period
            .iter()
            .map(|d| format!("{d:.4}"))
            .collect::<Vec<_>>(),
        record.fidelity,
        record.preparation_overlap,
        dir.display()
    );
    Ok(())
}

fn disorder(
    common: &Common,
    deltas: &Option<Vec<f64>>,
    targets: &Option<Vec<DisorderTarget>>,
    interactions: &Option<Vec<f64>>,
    realizations: Option<usize>,
) -> Result<()> {
    let mut c = common.resolve()?;
    if let Some(v) = deltas {
        c.disorder.deltas = v.clone();
    }
    if let Some(v) = targets {
        c.disorder.targets = v.clone();
    }
    if let Some(v) = interactions {
        c.disorder.interactions = v.clone();
    }
    if let Some(v) = realizations {
        c.disorder.realizations = v;
    }
    c.validate()?;
    let mut pump = c.pump.clone();
    pump.n_periods = c.disorder.n_periods;
    let dir = output_dir(&c)?;
    let mut summary = Vec::new();
    for &target in &c.disorder.targets {
        for &k in &c.disorder.interactions {
            let sweep = run_disorder_sweep(&pump, &c.disorder.deltas, target, k, c.disorder.realizations)?;
            let stem = format!("disorder_{target}_K{k}");
            write_sweep_csv(&dir.join(format!("{stem}.csv")), &sweep)?;
            write_json(&dir.join(format!("{stem}.json")), &sweep)?;
            println!(
                "disorder {target} K={k}: mean F {:?}, F = 0.5 crossed at delta {:?}",
                sweep.means().iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>(),
                sweep.crossing(0.5)
            );
            summary.push(sweep);
        }
    }
    write_json(
        &dir.join("disorder_manifest.json"),
        &json!({ "config": c, "config_hash": config_hash(&c)?, "sweeps": summary.len(),
                 "note": "g0 is taken from the pump drive for every sweep" }),
    )?;
    Ok(())
}

fn frequency(common: &Common, omegas: &Option<Vec<f64>>, interactions: &Option<Vec<f64>>) -> Result<()> {
    let mut c = common.resolve()?;
    if let Some(v) = omegas {
        c.frequency.omegas = v.clone();
    }
    if let Some(v) = interactions {
        c.frequency.interactions = v.clone();
    }
    c.validate()?;
    let mut pump = c.pump.clone();
    pump.n_periods = c.frequency.n_periods;
    let dir = output_dir(&c)?;
    for &k in &c.frequency.interactions {
        let sweep = run_frequency_sweep(&pump, &c.frequency.omegas, k)?;
        let stem = format!("frequency_K{k}");
        write_sweep_csv(&dir.join(format!("{stem}.csv")), &sweep)?;
        write_json(&dir.join(format!("{stem}.json")), &sweep)?;
        println!(
            "frequency K={k}: F {:?}",
            sweep
                .points
                .iter()
                .map(|p| format!("{:.3}:{:.3}", p.value, p.mean))
                .collect::<Vec<_>>()
        );
    }
    write_json(
        &dir.join("frequency_manifest.json"),
        &json!({ "config": c, "config_hash": config_hash(&c)? }),
    )?;
    Ok(())
}

fn chern(common: &Common, flux: Option<Rational>, band: Option<usize>, grid: Option<usize>) -> Result<()> {
    let mut c = common.resolve()?;
    if let Some(v) = flux {
        c.chern.b = v;
    }
    if band.is_some() {
        c.chern.band = band;
    }
    if let Some(v) = grid {
        c.chern.grid = v;
    }
    let family = BlochFamily::Hofstadter {
        jx: c.chern.jx,
        jy: c.chern.jy,
        b: c.chern.b,
    };
    let hash = config_hash(&c.chern)?;
    let value = match c.chern.band {
        Some(band) => {
            let r = chern_number(&family, band, c.chern.grid)?;
            json!({ "b": c.chern.b, "band": band, "chern": r.chern, "residual": r.residual,
                    "raw": r.raw, "min_gap": r.min_gap, "grid": c.chern.grid, "config_hash": hash })
        }
        None => {
            let data = band_data(&family, c.chern.grid)?;
            json!({ "b": c.chern.b, "bands": data.chern, "sum": data.chern_sum(),
                    "grid": c.chern.grid, "config_hash": hash })
        }
    };
    if common.out.is_some() || common.config.is_some() {
        let dir = output_dir(&c)?;
        write_json(&dir.join("chern.json"), &value)?;
    }
    println!("{value}");
    Ok(())
}

fn spectrum(common: &Common, excitations: Option<usize>, samples: Option<usize>) -> Result<()> {
    let mut c = common.resolve()?;
    if let Some(v) = excitations {
        c.spectrum.excitations = v;
    }
    if let Some(v) = samples {
        c.spectrum.samples = v;
    }
    let p = &c.pump;
    let h = build_model(&p.model, &p.drive)?;
    let m = c.spectrum.excitations;
    let times: Vec<f64> = (0..=c.spectrum.samples)
        .map(|k| h.period() * k as f64 / c.spectrum.samples as f64)
        .collect();
    let spec = instantaneous_band_spectrum(&h, p.model.kind, m, &times)?;
    let band = default_band_size(p.drive.n, p.drive.b.denom() as usize, m)?;
    let crossings = anti_crossings(&h, p.model.kind, m, band, c.spectrum.samples.clamp(3, 120))?;
    let hash = config_hash(&c)?;
    let dir = output_dir(&c)?;
    let mut w = csv::Writer::from_path(dir.join("spectrum.csv")).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let levels = spec.levels.first().map_or(0, Vec::len);
    let mut header = vec!["t".to_string()];
    header.extend((0..levels).map(|l| format!("E{l}")));
    header.push("config_hash".into());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(io)?;
    for (t, l) in spec.times.iter().zip(&spec.levels) {
        let mut row = vec![format!("{t}")];
        row.extend(l.iter().map(|e| format!("{e}")));
        row.push(hash.clone());
        w.write_record(&row).map_err(io)?;
    }
    w.flush()?;
    let min = crossings.iter().map(|c| c.gap).fold(f64::INFINITY, f64::min);
    write_json(
        &dir.join("anticrossings.json"),
        &json!({ "excitations": m, "band_size": band, "anticrossings": crossings,
                 "min_gap": min, "config": c, "config_hash": hash }),
    )?;
    println!(
        "spectrum {} ({m} excitation(s)): {} anti-crossings per period, min gap {min:.6} -> {}",
        p.model.kind,
        crossings.len(),
        dir.display()
    );
    Ok(())
}

fn dualize(common: &Common, expr: &Option<String>, inverse: bool) -> Result<()> {
    let c = common.resolve()?;
    let kind = c.pump.model.kind;
    let n = c.pump.drive.n;
    let chain = chain_to_spin_flip(kind, n)?;
    println!("chain {kind} -> spin_flip: {chain}");
    let map = |op| if inverse { chain.inverse().apply(op) } else { chain.apply(op) };
    match expr {
        Some(text) => {
            let op = parse(text, n)?;
            println!("{}  ->  {}", format_sum(&op), format_sum(&map(&op)?));
        }
        None => {
            for (name, op) in [
                ("drive D_0", driving_op(kind, n, 0)?),
                ("bond 0", bond_op(kind, n, 0)?),
                ("interaction 0", interaction_op(kind, n, 0)?),
            ] {
                println!("{name}: {}  ->  {}", format_sum(&op), format_sum(&chain.apply(&op)?));
            }
        }
    }
    Ok(())
}

fn table1(common: &Common) -> Result<bool> {
    let c = common.resolve()?;
    let report = table1_check(&c.pump.drive, c.pump.model.j)?;
    for r in &report.rows {
        println!(
            "{:<10} {:<5} overlap^2 {:.6}  |overlap| {:.6}",
            r.kind.name(),
            r.regime.name(),
            r.overlap,
            r.overlap.sqrt()
        );
    }
    let passed = report.passed();
    if common.out.is_some() || common.config.is_some() {
        let dir = output_dir(&c)?;
        write_json(
            &dir.join("table1.json"),
            &json!({ "report": report, "passed": passed, "config_hash": c.pump.hash() }),
        )?;
    }
    println!(
        "table1-check: {} (all overlap^2 > {})",
        if passed { "PASS" } else { "FAIL" },
        report.threshold
    );
    Ok(passed)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Pump { common } => pump(common)?,
        Command::Disorder {
            common,
            deltas,
            targets,
            interactions,
            realizations,
        } => disorder(common, deltas, targets, interactions, *realizations)?,
        Command::Frequency {
            common,
            omegas,
            interactions,
        } => frequency(common, omegas, interactions)?,
        Command::Chern {
            common,
            flux,
            band,
            grid,
        } => chern(common, *flux, *band, *grid)?,
        Command::Spectrum {
            common,
            excitations,
            samples,
        } => spectrum(common, *excitations, *samples)?,
        Command::Dualize { common, expr, inverse } => dualize(common, expr, *inverse)?,
        Command::Table1Check { common } => {
            if !table1(common)? {
                return Ok(ExitCode::from(5));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

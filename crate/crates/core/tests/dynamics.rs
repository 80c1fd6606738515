use dualpump::dynamics::{
    fidelity, prepare_initial_state, propagate, pump_run, IntegratorPolicy, Method, PumpConfig,
};
use dualpump::harness::{run_disorder_sweep, write_trajectory_csv};
use dualpump::linalg::eigvalsh;
use dualpump::models::{build_model, DisorderTarget, DriveParams, ModelKind};
use dualpump::topology::{
    band_data, chern_number, hh_bloch_hamiltonian, instantaneous_band_spectrum, AubryAndre, BlochFamily,
};

fn six_site(kind: ModelKind) -> PumpConfig {
    let mut c = PumpConfig::reference(kind);
    c.drive.n = 6;
    c
}

#[test]
fn norm_is_conserved_over_nine_periods() {
    for kind in [ModelKind::Kink, ModelKind::Cluster] {
        let mut c = PumpConfig::reference(kind);
        c.n_periods = 9;
        c.samples_per_period = 10;
        let r = pump_run(&c).unwrap();
        let drift = r.trajectory.norm.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "{kind}: {drift:e}");
    }
}

#[test]
fn energy_follows_the_instantaneous_ground_level_of_the_band() {
    let mut c = PumpConfig::reference(ModelKind::SpinFlip);
    c.n_periods = 1;
    c.samples_per_period = 24;
    let r = pump_run(&c).unwrap();
    let h = build_model(&c.model, &c.drive).unwrap();
    let tr = &r.trajectory;
    let spec = instantaneous_band_spectrum(&h, ModelKind::SpinFlip, 3, &tr.times).unwrap();
    for (k, levels) in spec.levels.iter().enumerate() {
        let half_gap = 0.5 * (levels[1] - levels[0]);
        assert!((tr.energy[k] - levels[0]).abs() < half_gap, "t = {}", tr.times[k]);
    }
}

#[test]
fn displacement_per_period_is_the_chern_number_of_the_band() {
    let r = pump_run(&PumpConfig::reference(ModelKind::SpinFlip)).unwrap();
    let p = DriveParams::reference();
    let family = BlochFamily::AubryAndre(AubryAndre::from_drive(&p, 1.0));
    let c = chern_number(&family, 0, 51).unwrap().chern as f64;
    let q = p.b.denom() as f64;
    for (n, d) in r.displacement_per_period.iter().enumerate() {
        // sites per filled cell, converted to cells per period
        let cells = d / q / (n + 1) as f64;
        assert!((cells - c).abs() < 0.05, "{cells} vs C = {c}");
    }
}

#[test]
fn reversed_drive_returns_to_the_initial_state() {
    let c = six_site(ModelKind::Cluster);
    let h = build_model(&c.model, &c.drive).unwrap();
    let psi0 = prepare_initial_state(&h.at(0.0), &c.reference_state().unwrap(), c.threshold)
        .unwrap()
        .state;
    let t = 0.4 * h.period();
    let policy = IntegratorPolicy::default();
    let (forward, _) = propagate(&h, &psi0, &[t], &policy, |_, _, _| Ok(())).unwrap();
    let (back, _) = propagate(&h.reversed(t), &forward, &[t], &policy, |_, _, _| Ok(())).unwrap();
    assert!(fidelity(&psi0, &forward).unwrap() < 0.999);
    assert!(1.0 - fidelity(&psi0, &back).unwrap() < 1e-9);
}

#[test]
fn midpoint_eigen_agrees_with_the_commutator_free_scheme() {
    let c = six_site(ModelKind::SpinFlip);
    let h = build_model(&c.model, &c.drive).unwrap();
    let psi0 = prepare_initial_state(&h.at(0.0), &c.reference_state().unwrap(), c.threshold)
        .unwrap()
        .state;
    let t = 0.5 * h.period();
    let cf4 = IntegratorPolicy::default();
    let midpoint = IntegratorPolicy {
        method: Method::MidpointEigen,
        dt: 0.02,
        ..cf4
    };
    let (a, _) = propagate(&h, &psi0, &[t], &cf4, |_, _, _| Ok(())).unwrap();
    let (b, _) = propagate(&h, &psi0, &[t], &midpoint, |_, _, _| Ok(())).unwrap();
    assert!(1.0 - fidelity(&a, &b).unwrap() < 1e-6);
}

#[test]
fn chern_numbers_are_grid_converged() {
    let family = BlochFamily::Hofstadter {
        jx: 1.0,
        jy: 1.0,
        b: "1/3".parse().unwrap(),
    };
    let coarse = band_data(&family, 51).unwrap();
    let fine = band_data(&family, 101).unwrap();
    for (a, b) in coarse.chern.iter().zip(&fine.chern) {
        assert_eq!(a.chern, b.chern);
        assert!(a.residual < 1e-8 && b.residual < 1e-8);
    }
}

#[test]
fn decoupled_chains_do_not_depend_on_ky() {
    let b = "1/3".parse().unwrap();
    let reference = eigvalsh(&hh_bloch_hamiltonian(0.7, 0.0, 1.0, 0.0, b).unwrap());
    for ky in [0.5, 1.9, 4.4] {
        let vals = eigvalsh(&hh_bloch_hamiltonian(0.7, ky, 1.0, 0.0, b).unwrap());
        for (x, y) in vals.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn identical_configs_write_identical_csv() {
    let mut c = six_site(ModelKind::Kink);
    c.n_periods = 1;
    c.samples_per_period = 16;
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for path in &paths {
        write_trajectory_csv(path, &pump_run(&c).unwrap()).unwrap();
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(&c.hash()));
}

#[test]
fn disorder_sweeps_are_deterministic_and_peak_without_disorder() {
    let c = six_site(ModelKind::SpinFlip);
    let deltas = [0.0, 0.75, 1.5];
    let a = run_disorder_sweep(&c, &deltas, DisorderTarget::J, 0.0, 3).unwrap();
    let b = run_disorder_sweep(&c, &deltas, DisorderTarget::J, 0.0, 3).unwrap();
    assert_eq!(a, b);
    let clean = &a.points[0];
    assert_eq!(clean.count, 3);
    for p in &a.points[1..] {
        assert!(clean.mean >= p.mean - p.stderr, "{} at {}", p.mean, p.value);
    }
    let seeds: Vec<u64> = a.points[1].realizations.iter().map(|r| r.seed).collect();
    let g = run_disorder_sweep(&c, &deltas, DisorderTarget::G, 1.0, 3).unwrap();
    let g_seeds: Vec<u64> = g.points[1].realizations.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, g_seeds);
}

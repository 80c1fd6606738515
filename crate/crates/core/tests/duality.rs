use dualpump::linalg::{eigvalsh, CMatrix, SectorBasis};
use dualpump::models::{
    bond_op, build_model, chain_to_spin_flip, excitation_number_op,
    operators::drive_family, DriveParams, ModelKind, ModelSpec,
};
use dualpump::pauli::{
    kw_dualize, parse, reduce_to_single, rotate_x, OperatorSum, Pauli, PauliString, Phase,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_matrix(p: Pauli) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Independent realization: phase times the Kronecker product in site order.
fn kron_oracle(s: &PauliString) -> CMatrix {
    let mut m = CMatrix::from_element(1, 1, c(1.0, 0.0));
    for j in 0..s.n_sites() {
        m = m.kronecker(&single_matrix(s.letter(j)));
    }
    m * s.phase().to_complex()
}

fn spectrum(op: &OperatorSum) -> Vec<f64> {
    eigvalsh(&op.to_matrix().unwrap())
}

fn assert_spectra_equal(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    let worst = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(worst < tol, "spectra differ by {worst:e}");
}

#[test]
fn three_qubit_product_against_kronecker_oracle() {
    let a = PauliString::from_word("ZZI").unwrap();
    let b = PauliString::from_word("IXX").unwrap();
    let p = a.product(&b).unwrap();
    assert_eq!(p.letters(), vec![Pauli::Z, Pauli::Y, Pauli::X]);
    // Z X = +iY on the middle site
    assert_eq!(p.phase(), Phase::I);
    let oracle = kron_oracle(&a) * kron_oracle(&b);
    assert!((kron_oracle(&p) - oracle).norm() < 1e-15);
}

#[test]
fn cluster_term_matrix_against_kronecker_oracle() {
    let op = parse("Z0 X1 Z2", 3).unwrap();
    let oracle = kron_oracle(&PauliString::from_word("ZXZ").unwrap());
    assert!((op.to_matrix().unwrap() - oracle).norm() < 1e-15);
}

#[test]
fn random_products_match_matrix_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let mut draw = || {
            let mut s = PauliString::identity(n).unwrap();
            for j in 0..n {
                let l = letters[rng.random_range(0..4)];
                s = s
                    .product(&PauliString::single(n, j as isize, l).unwrap())
                    .unwrap();
            }
            s.with_phase(Phase::from_exponent(rng.random_range(0..4)))
        };
        let a = draw();
        let b = draw();
        let lhs = OperatorSum::from_string(1.0, a.product(&b).unwrap())
            .to_matrix()
            .unwrap();
        let rhs = kron_oracle(&a) * kron_oracle(&b);
        let worst = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12);
    }
}

#[test]
fn yy_image_is_isospectral() {
    let pre = parse("-1.0 * Y2 Y3", 6).unwrap();
    let img = kw_dualize(&pre).unwrap();
    assert_eq!(img.max_weight(), 3);
    assert_spectra_equal(&spectrum(&pre), &spectrum(&img), 1e-12);
}

#[test]
fn rotation_preserves_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=6 {
        let mut text = String::from("0.3 * X0");
        for j in 0..n {
            let k = (j + 1) % n;
            text.push_str(&format!(
                " + {} * Z{j} Z{k} - {} * Y{j} + {} * X{j} Y{k}",
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0)
            ));
        }
        let h = parse(&text, n).unwrap();
        assert_spectra_equal(&spectrum(&h), &spectrum(&rotate_x(&h)), 1e-10);
    }
}

fn p6() -> DriveParams {
    DriveParams {
        n: 6,
        ..DriveParams::reference()
    }
}

#[test]
fn dual_models_are_chain_images_of_the_spin_flip_model() {
    let p = p6();
    for kind in [ModelKind::Kink, ModelKind::Cluster] {
        let chain = chain_to_spin_flip(kind, 6).unwrap();
        for t in [0.0, 17.0, 123.4] {
            let flip = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0).with_interaction(0.6), &p)
                .unwrap()
                .at(t);
            let dual = build_model(&ModelSpec::new(kind, 1.0).with_interaction(0.6), &p)
                .unwrap()
                .at(t);
            assert!(chain.apply(&dual).unwrap().approx_eq(&flip, 1e-12), "{kind}");
            assert!(chain.inverse().apply(&flip).unwrap().approx_eq(&dual, 1e-12), "{kind}");
        }
    }
}

#[test]
fn cluster_and_spin_flip_spectra_agree_on_the_full_space() {
    let p = p6();
    for t in [0.0, 40.0] {
        let flip = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap().at(t);
        let cluster = build_model(&ModelSpec::new(ModelKind::Cluster, 1.0), &p).unwrap().at(t);
        assert_spectra_equal(&spectrum(&flip), &spectrum(&cluster), 1e-9);
    }
}

#[test]
fn kink_spectrum_matches_in_the_even_parity_sector() {
    let p = p6();
    let flip = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap().at(11.0);
    let kink = build_model(&ModelSpec::new(ModelKind::Kink, 1.0), &p).unwrap().at(11.0);
    let even = SectorBasis::x_parity(6, 1).unwrap();
    let a = eigvalsh(&even.restrict(&flip).unwrap());
    let b = eigvalsh(&even.restrict(&kink).unwrap());
    assert_spectra_equal(&a, &b, 1e-9);
    // the full periodic spectra differ: the odd kink sector is the twisted ring
    let full_flip = spectrum(&flip);
    let full_kink = spectrum(&kink);
    let worst = full_flip
        .iter()
        .zip(&full_kink)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(worst > 1e-6);
}

#[test]
fn excitation_number_of_the_kink_commutes_at_zero_coupling() {
    let p = p6();
    let n_op = excitation_number_op(ModelKind::Kink, 6).unwrap();
    let h = build_model(&ModelSpec::new(ModelKind::Kink, 0.0), &p).unwrap().at(5.0);
    assert!(h.commutator(&n_op).unwrap().prune(1e-12).is_empty());
    let h1 = build_model(&ModelSpec::new(ModelKind::Kink, 1.0), &p).unwrap().at(5.0);
    assert!(!h1.commutator(&n_op).unwrap().prune(1e-12).is_empty());
}

fn bond_sum(kind: ModelKind, n: usize) -> OperatorSum {
    (0..n)
        .map(|j| bond_op(kind, n, j).unwrap())
        .fold(OperatorSum::zero(n).unwrap(), |a, b| &a + &b)
}

#[test]
fn higher_order_chains_reduce_and_pull_back_the_printed_pump_term() {
    for r in 0..=4usize {
        let kind = ModelKind::HigherR(r);
        let n = 3 * (2 * r + 5).div_ceil(3);
        let chain = chain_to_spin_flip(kind, n).unwrap();
        for (j, o) in drive_family(kind, n).unwrap().iter().enumerate() {
            let img = chain.apply(o).unwrap();
            assert_eq!(img, parse(&format!("-1.0 * X{j}"), n).unwrap(), "r = {r}");
        }
        let pulled = chain
            .inverse()
            .apply(&bond_sum(ModelKind::SpinFlip, n))
            .unwrap();
        assert!(pulled.approx_eq(&bond_sum(kind, n), 0.0), "r = {r}: {pulled}");
    }
}

#[test]
fn breadth_first_search_finds_an_equivalent_chain() {
    for r in 0..=3usize {
        let kind = ModelKind::HigherR(r);
        let n = 3 * (2 * (r + 3)).div_ceil(3);
        let family = drive_family(kind, n).unwrap();
        let red = reduce_to_single(&family, 2 * (r + 3) + 2).unwrap();
        for (j, o) in red.reduced.iter().enumerate() {
            assert_eq!(o, &parse(&format!("-1.0 * X{j}"), n).unwrap(), "r = {r}");
        }
        let pulled = red
            .chain
            .inverse()
            .apply(&bond_sum(ModelKind::SpinFlip, n))
            .unwrap();
        assert!(
            pulled.approx_eq(&bond_sum(kind, n), 0.0),
            "r = {r}: pulled back {pulled} via {}",
            red.chain
        );
    }
}

#[test]
fn wrapping_chains_are_rejected() {
    assert!(chain_to_spin_flip(ModelKind::HigherR(3), 9).is_err());
    assert!(chain_to_spin_flip(ModelKind::HigherR(2), 9).is_ok());
}

#[test]
fn higher_order_model_is_isospectral_at_six_sites() {
    let p = p6();
    let flip = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap().at(9.0);
    let h1 = build_model(&ModelSpec::new(ModelKind::HigherR(1), 1.0), &p).unwrap().at(9.0);
    let even = SectorBasis::x_parity(6, 1).unwrap();
    let a = eigvalsh(&even.restrict(&flip).unwrap());
    let b = eigvalsh(&even.restrict(&h1).unwrap());
    assert_spectra_equal(&a, &b, 1e-9);
}

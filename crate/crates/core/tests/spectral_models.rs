use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spidermoment_core::spectral::{self, SpectralModel};
use spidermoment_core::{gab_spec, JFractionF64, MeixnerParams, SpidernetParams};

fn reference_models() -> Vec<(&'static str, JFractionF64)> {
    let sp = |a, b, c| SpidernetParams::new(a, b, c).unwrap().spec();
    let mx = |p, q, a| MeixnerParams::new(p, q, a).unwrap().spec();
    vec![
        ("g23", gab_spec(2.0, 3.0)),
        ("g32", gab_spec(3.0, 2.0)),
        ("S463", sp(4, 6, 3)),
        ("S131", sp(1, 3, 1)),
        ("S231", sp(2, 3, 1)),
        ("m112", mx(1.0, 1.0, 2.0)),
        ("m432", mx(4.0, 3.0, 2.0)),
    ]
}

/// Rational in `[lo, hi]` with denominator at most 4.
fn coef(rng: &mut StdRng, lo: i32, hi: i32) -> f64 {
    let d = rng.random_range(1..=4);
    f64::from(rng.random_range(lo * d..=hi * d)) / f64::from(d)
}

fn positive(rng: &mut StdRng) -> f64 {
    loop {
        let b = coef(rng, 0, 4);
        if b > 0.0 {
            return b;
        }
    }
}

fn random_spec(rng: &mut StdRng) -> JFractionF64 {
    let head = rng.random_range(0..=3);
    let alpha_head = (0..head).map(|_| coef(rng, -3, 3)).collect();
    let alpha_tail = coef(rng, -3, 3);
    let beta_head = (0..head).map(|_| positive(rng)).collect();
    JFractionF64::new(alpha_head, alpha_tail, beta_head, positive(rng))
}

#[test]
fn reference_models_reproduce_moments() {
    for (name, spec) in reference_models() {
        let report = spectral::verify_moments(&spec, 10, 1e-6).unwrap();
        assert!(report.passed(), "{name}: max error {}", report.max_error);
    }
}

#[test]
fn mass_is_normalized() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut specs: Vec<JFractionF64> = reference_models().into_iter().map(|(_, s)| s).collect();
    specs.extend((0..20).map(|_| random_spec(&mut rng)));
    for spec in specs {
        let model = SpectralModel::new(&spec).unwrap();
        let mass = model.total_mass();
        assert!((mass - 1.0).abs() < 1e-6, "{spec}: mass {mass}");
        assert!(model.atoms().iter().all(|a| a.weight > 0.0));
        let (lo, hi) = model.support();
        assert!(model
            .atoms()
            .iter()
            .all(|a| a.location < lo || a.location > hi));
    }
}

#[test]
fn random_specs_reproduce_moments() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..20 {
        let spec = random_spec(&mut rng);
        let report = spectral::verify_moments(&spec, 8, 1e-6).unwrap();
        assert!(report.passed(), "{spec}: max error {}", report.max_error);
    }
}

#[test]
fn density_is_nonnegative_for_model_specs() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut specs: Vec<JFractionF64> = reference_models().into_iter().map(|(_, s)| s).collect();
    for _ in 0..10 {
        let (a, c) = (rng.random_range(1..=6), rng.random_range(1..=5));
        let b = rng.random_range(c + 1..=6);
        specs.push(SpidernetParams::new(a, b, c).unwrap().spec());
    }
    for spec in specs {
        let (lo, hi) = spectral::support(&spec).unwrap();
        for i in 1..=200 {
            let x = lo + (hi - lo) * f64::from(i) / 201.0;
            assert!(spectral::density(&spec, x).unwrap() >= -1e-9);
        }
    }
}

#[test]
fn s231_representation() {
    // continuous part on [−1, 3] with density √(3 + 2x − x²)/(π(4 + 2x − x²)),
    // plus one atom at 1 − √5
    let spec: JFractionF64 = SpidernetParams::new(2, 3, 1).unwrap().spec();
    let model = SpectralModel::new(&spec).unwrap();
    let sqrt5 = 5f64.sqrt();
    assert_eq!(model.atoms().len(), 1);
    assert!((model.atoms()[0].location - (1.0 - sqrt5)).abs() < 1e-6);
    assert!((model.atoms()[0].weight - 1.0 / sqrt5).abs() < 1e-6);
    for x in [-0.5f64, 0.0, 1.0, 2.0, 2.9] {
        let want =
            (3.0 + 2.0 * x - x * x).sqrt() / (std::f64::consts::PI * (4.0 + 2.0 * x - x * x));
        assert!((model.density(x).unwrap() - want).abs() < 1e-9, "x = {x}");
    }
}

#[test]
fn s463_has_no_atom_at_the_other_root() {
    let spec: JFractionF64 = SpidernetParams::new(4, 6, 3).unwrap().spec();
    let atoms = spectral::find_atoms(&spec, 50.0).unwrap();
    assert_eq!(atoms.len(), 1);
    assert!(atoms
        .iter()
        .all(|a| (a.location - (4.0 + 4.0 * 2f64.sqrt())).abs() > 1e-3));
}

#[test]
fn meixner_density_shape() {
    // p·√(4q − (x − a)²) / (2π·(p² + apx + (q − p)x²))
    let (p, q, a) = (4.0f64, 3.0f64, 2.0f64);
    let spec = MeixnerParams::new(p, q, a).unwrap().spec();
    for x in [-1.0f64, 0.5, 2.0, 4.5] {
        let want = p * (4.0 * q - (x - a) * (x - a)).sqrt()
            / (2.0 * std::f64::consts::PI * (p * p + a * p * x + (q - p) * x * x));
        let got = spectral::density(&spec, x).unwrap();
        assert!((got - want).abs() < 1e-9, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn atom_hugging_the_support_edge() {
    // pole about 1e-9 outside the right edge
    let spec = JFractionF64::new(vec![1.0, 1.0, -2.5], -1.75, vec![3.0, 1.0 / 3.0, 2.0], 0.75);
    let model = SpectralModel::new(&spec).unwrap();
    let (_, hi) = model.support();
    assert!(model
        .atoms()
        .iter()
        .any(|a| a.location > hi && a.location - hi < 1e-6));
    let report = spectral::verify_moments(&spec, 10, 1e-6).unwrap();
    assert!(report.passed(), "{}", report.max_error);
}

#[test]
fn narrow_resonance_inside_the_support() {
    // density peaks near −2.33 with height ≈ 128
    let spec = JFractionF64::new(vec![-1.75, 3.0, 2.0], 1.0, vec![3.0, 0.5, 2.0], 4.0);
    assert!(spectral::density(&spec, -2.328).unwrap() > 100.0);
    let report = spectral::verify_moments(&spec, 10, 1e-6).unwrap();
    assert!(report.atoms.is_empty());
    assert!(report.passed(), "{}", report.max_error);
}

#[test]
fn atom_at_a_rational_point() {
    // an inner level of the fold vanishes exactly at x = 3
    let spec = JFractionF64::new(vec![3.0, 1.0, 1.0], 0.5, vec![4.0 / 3.0, 2.25, 4.0], 1.0);
    let atoms = SpectralModel::new(&spec).unwrap().atoms().to_vec();
    assert!(atoms.iter().any(|a| (a.location - 3.0).abs() < 1e-9));
    assert!(spectral::verify_moments(&spec, 10, 1e-6).unwrap().passed());
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risrate::architectures::{is_feasible, passivity_gap, random_phi, Architecture};
use risrate::channel::{effective_channel, rician_matrix, Instance, SystemConfig};
use risrate::linalg::{CMatrix, CVector, C64};
use risrate::optimizer::BeamformerSet;

fn small_config(m: usize) -> SystemConfig {
    SystemConfig {
        num_tx_antennas: 3,
        num_ris_elements: m,
        num_users: 2,
        ..SystemConfig::default()
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize) -> CMatrix {
    use rand::Rng;
    CMatrix::from_fn(m, m, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

proptest! {
    #[test]
    fn effective_channel_is_linear_in_phi(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let inst = Instance::draw(&small_config(4), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let p1 = random_matrix(&mut rng, 4);
        let p2 = random_matrix(&mut rng, 4);
        let (ca, cb) = (C64::new(a, c), C64::new(b, -c));
        let f = &inst.channels.bs_ris;
        let fk = &inst.channels.ris_user[0];
        let lhs = effective_channel(f, fk, &(&p1 * ca + &p2 * cb)).unwrap();
        let rhs = effective_channel(f, fk, &p1).unwrap() * ca + effective_channel(f, fk, &p2).unwrap() * cb;
        let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn draws_are_deterministic(seed in 0u64..u64::MAX) {
        let cfg = small_config(5);
        prop_assert_eq!(Instance::draw(&cfg, seed).unwrap(), Instance::draw(&cfg, seed).unwrap());
    }

    #[test]
    fn rician_split_is_exact(seed in 0u64..1000, kappa in 0.0f64..50.0, gain in 1e-6f64..10.0, aoa in -1.5f64..1.5, aod in -1.5f64..1.5) {
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let mut r3 = ChaCha8Rng::seed_from_u64(seed);
        let h = rician_matrix(4, 3, kappa, gain, aoa, aod, &mut r1).unwrap();
        let nlos = rician_matrix(4, 3, 0.0, gain, aoa, aod, &mut r2).unwrap();
        let los = rician_matrix(4, 3, f64::INFINITY, gain, aoa, aod, &mut r3).unwrap();
        let rebuilt = los * C64::from((kappa / (1.0 + kappa)).sqrt()) + nlos * C64::from((1.0 / (1.0 + kappa)).sqrt());
        prop_assert!((h - rebuilt).norm() <= 1e-12 * gain.sqrt());
    }

    #[test]
    fn scaled_identity_gap(seed in 0u64..1000, a in 0.0f64..2.0) {
        let inst = Instance::draw(&small_config(4), seed).unwrap();
        let f = &inst.channels.bs_ris;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beams = BeamformerSet::new((0..2).map(|_| {
            let m = random_matrix(&mut rng, 3);
            CVector::from_iterator(3, m.column(0).iter().cloned())
        }).collect());
        let p_in: f64 = beams.w.iter().map(|w| (f * w).norm_squared()).sum();
        let phi = CMatrix::identity(4, 4) * C64::from(a);
        let gap = passivity_gap(&phi, f, &beams).unwrap();
        prop_assert!((gap - (a * a - 1.0) * p_in).abs() <= 1e-10 * p_in.max(1e-300));
    }
}

#[test]
fn random_phase_surface_is_feasible_for_every_architecture() {
    let inst = Instance::draw(&small_config(6), 3).unwrap();
    let beams = BeamformerSet::new(vec![CVector::from_element(3, C64::new(0.5, 0.1)); 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for arch in [Architecture::LpDiagonal, Architecture::GpDiagonal, Architecture::GpBeyondDiagonal, Architecture::Random] {
        let state = random_phi(arch, 6, &mut rng).unwrap();
        let rep = is_feasible(&state, &inst.channels.bs_ris, &beams, 1e-6);
        assert!(rep.feasible, "{arch}: {rep}");
    }
}

#[test]
fn fixture_file_round_trip() {
    let inst = Instance::draw(&small_config(3), 11).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance.json");
    std::fs::write(&path, inst.to_json().unwrap()).unwrap();
    let back = Instance::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, inst);
}

#[test]
fn truncation_keeps_leading_elements() {
    let inst = Instance::draw(&small_config(8), 5).unwrap();
    let t = inst.channels.truncated(3);
    assert_eq!(t.num_ris(), 3);
    assert_eq!(t.bs_ris.rows(0, 3), inst.channels.bs_ris.rows(0, 3));
    assert_eq!(t.ris_user[1].rows(0, 3), inst.channels.ris_user[1].rows(0, 3));
    assert_eq!(t.direct, inst.channels.direct);
}

#[test]
fn blockage_only_touches_the_direct_link() {
    let mut a = small_config(4);
    let mut b = a.clone();
    a.path_loss.direct_blockage_db = 0.0;
    b.path_loss.direct_blockage_db = 20.0;
    let ia = Instance::draw(&a, 2).unwrap();
    let ib = Instance::draw(&b, 2).unwrap();
    assert_eq!(ia.channels.bs_ris, ib.channels.bs_ris);
    assert_eq!(ia.channels.ris_user, ib.channels.ris_user);
    for (ga, gb) in ia.channels.direct.iter().zip(&ib.channels.direct) {
        assert!((gb.norm_squared() / ga.norm_squared() - 0.01).abs() < 1e-12);
    }
}

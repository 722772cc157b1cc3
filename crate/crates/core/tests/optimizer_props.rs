use nalgebra::{DMatrix, DVector};
use risrate::architectures::Architecture;
use risrate::channel::{Instance, SystemConfig};
use risrate::linalg::{CVector, C64};
use risrate::optimizer::{
    ao_solve, ao_solve_from, certify, gda_loop, initialize, OptimizerConfig, OutcomeStatus, Setup,
};
use risrate::subproblem::{Operating, PhiBlock};

fn config(n: usize, m: usize, k: usize) -> SystemConfig {
    SystemConfig {
        num_tx_antennas: n,
        num_ris_elements: m,
        num_users: k,
        ..SystemConfig::default()
    }
    .normalized()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Max-min downlink SINR under a sum-power budget through its uplink dual:
/// balance MMSE uplink SINRs by the normalized fixed point `q ← q / SINR(q)`.
fn uplink_dual_max_min(rows: &[CVector], power: f64, noise: f64) -> f64 {
    let k = rows.len();
    let n = rows[0].len();
    let a: Vec<DVector<C64>> = rows.iter().map(|h| h.map(|c| c.conj())).collect();
    let mut q = vec![power / k as f64; k];
    let mut balanced = 0.0;
    for _ in 0..5000 {
        let sinr: Vec<f64> = (0..k)
            .map(|j| {
                let mut cov = DMatrix::<C64>::identity(n, n) * C64::from(noise);
                for i in (0..k).filter(|&i| i != j) {
                    cov += &a[i] * a[i].adjoint() * C64::from(q[i]);
                }
                let x = cov.lu().solve(&a[j]).unwrap();
                q[j] * a[j].dotc(&x).re
            })
            .collect();
        let lo = sinr.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sinr.iter().cloned().fold(0.0, f64::max);
        balanced = lo;
        if hi - lo <= 1e-12 * hi {
            break;
        }
        for j in 0..k {
            q[j] /= sinr[j];
        }
        let s: f64 = q.iter().sum();
        q.iter_mut().for_each(|v| *v *= power / s);
    }
    balanced
}

#[test]
fn single_user_without_surface_is_matched_filter() {
    let sys = config(4, 4, 1);
    for seed in 0..3 {
        let inst = Instance::draw(&sys, seed).unwrap();
        let setup = Setup::new(&inst.channels, &sys).unwrap();
        let out = ao_solve(&setup, Architecture::None, &OptimizerConfig::default()).unwrap();
        let oracle = sys.power_budget * inst.channels.direct[0].norm_squared() / sys.noise_power;
        assert!(rel(out.min_sinr, oracle) < 1e-3, "{} vs {oracle}", out.min_sinr);
    }
}

#[test]
fn single_element_single_user_closed_form() {
    let sys = config(3, 1, 1);
    let inst = Instance::draw(&sys, 4).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    let f = inst.channels.ris_user[0][0].norm_sqr();
    let oracle = sys.power_budget * f * inst.channels.bs_ris.row(0).norm_squared() / sys.noise_power;
    for arch in [Architecture::LpDiagonal, Architecture::GpDiagonal, Architecture::GpBeyondDiagonal] {
        let out = ao_solve(&setup, arch, &OptimizerConfig::default()).unwrap();
        assert!(rel(out.min_sinr, oracle) < 1e-3, "{arch}: {} vs {oracle}", out.min_sinr);
        assert!(certify(&out, &setup).is_empty());
    }
}

#[test]
fn random_surface_single_user_is_matched_filter_on_its_channel() {
    let sys = config(3, 6, 1);
    let inst = Instance::draw(&sys, 8).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    let cfg = OptimizerConfig { seed: 21, ..Default::default() };
    let out = ao_solve(&setup, Architecture::Random, &cfg).unwrap();
    let (_, state) = initialize(&setup, Architecture::Random, 21).unwrap();
    assert_eq!(out.ris.phi, state.phi);
    let h = risrate::channel::effective_channel(&inst.channels.bs_ris, &inst.channels.ris_user[0], &state.phi).unwrap();
    let oracle = sys.power_budget * h.norm_squared() / sys.noise_power;
    assert!(rel(out.min_sinr, oracle) < 1e-3);
}

#[test]
fn no_surface_max_min_matches_uplink_dual() {
    for (n, k, seed) in [(2, 2, 1), (2, 2, 2), (4, 3, 3)] {
        let sys = config(n, 2, k);
        let inst = Instance::draw(&sys, seed).unwrap();
        let setup = Setup::new(&inst.channels, &sys).unwrap();
        let cfg = OptimizerConfig { max_outer: 200, outer_tol: 1e-7, ..Default::default() };
        let out = ao_solve(&setup, Architecture::None, &cfg).unwrap();
        let oracle = uplink_dual_max_min(&inst.channels.direct, sys.power_budget, sys.noise_power);
        assert!(out.min_sinr <= oracle * (1.0 + 1e-6), "seed {seed}: {} above optimum {oracle}", out.min_sinr);
        assert!(rel(out.min_sinr, oracle) < 1e-3, "seed {seed}: {} vs {oracle}", out.min_sinr);
        let sinrs = &out.sinrs;
        assert!(sinrs.iter().all(|g| rel(*g, out.min_sinr) < 1e-2), "unbalanced {sinrs:?}");
    }
}

#[test]
fn runs_are_deterministic() {
    let sys = config(3, 4, 2);
    let inst = Instance::draw(&sys, 5).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    for arch in [Architecture::GpDiagonal, Architecture::GpBeyondDiagonal] {
        let a = ao_solve(&setup, arch, &OptimizerConfig::default()).unwrap();
        let b = ao_solve(&setup, arch, &OptimizerConfig::default()).unwrap();
        assert!(a.trace.same_iterates(&b.trace));
        assert_eq!(a.sinrs, b.sinrs);
        assert_eq!(a.ris.phi, b.ris.phi);
    }
}

#[test]
fn dinkelbach_and_outer_sequences_do_not_decrease() {
    let sys = config(3, 4, 2);
    for seed in 0..4 {
        let inst = Instance::draw(&sys, seed).unwrap();
        let setup = Setup::new(&inst.channels, &sys).unwrap();
        for arch in [Architecture::LpDiagonal, Architecture::GpDiagonal, Architecture::GpBeyondDiagonal] {
            let out = ao_solve(&setup, arch, &OptimizerConfig::default()).unwrap();
            for seq in out.trace.mu_sequences() {
                for w in seq.windows(2) {
                    assert!(w[1] >= w[0] * (1.0 - 1e-9), "{arch} seed {seed}: {seq:?}");
                }
            }
            let outer = out.trace.outer_min_sinrs();
            if out.status != OutcomeStatus::InfeasibleInstance {
                for w in outer.windows(2) {
                    assert!(w[1] >= w[0] * (1.0 - 1e-6), "{arch} seed {seed}: {outer:?}");
                }
            }
        }
    }
}

#[test]
fn symmetric_block_dominates_diagonal_block_at_same_point() {
    let sys = config(3, 4, 2);
    let cfg = OptimizerConfig::default();
    for seed in 0..4 {
        let inst = Instance::draw(&sys, seed).unwrap();
        let setup = Setup::new(&inst.channels, &sys).unwrap();
        let (beams, state) = initialize(&setup, Architecture::GpDiagonal, seed).unwrap();
        let op = Operating {
            channels: &inst.channels,
            phi: &state.phi,
            beams: &beams,
            noise: sys.noise_power,
            power: sys.power_budget,
        };
        let weights = [0.5, 0.5];
        let d = PhiBlock::default().build(Architecture::GpDiagonal, &op).unwrap();
        let bd = PhiBlock::default().build(Architecture::GpBeyondDiagonal, &op).unwrap();
        let rd = gda_loop(&d, &weights, None, &cfg, (1, "phi")).unwrap();
        let rbd = gda_loop(&bd, &weights, None, &cfg, (1, "phi")).unwrap();
        let (md, mbd) = (*rd.mus.last().unwrap(), *rbd.mus.last().unwrap());
        assert!(mbd >= md * (1.0 - 1e-4), "seed {seed}: bd {mbd} < d {md}");
    }
}

#[test]
fn warm_start_from_diagonal_solution_never_loses() {
    let sys = config(3, 4, 2);
    for seed in 0..3 {
        let inst = Instance::draw(&sys, seed).unwrap();
        let setup = Setup::new(&inst.channels, &sys).unwrap();
        let cfg = OptimizerConfig::default();
        let d = ao_solve(&setup, Architecture::GpDiagonal, &cfg).unwrap();
        if d.is_infeasible() {
            continue;
        }
        let bd = ao_solve_from(&setup, Architecture::GpBeyondDiagonal, &cfg, d.beams.clone(), d.ris.phi.clone()).unwrap();
        assert!(bd.min_sinr >= d.min_sinr * (1.0 - 1e-6));
        assert!(certify(&bd, &setup).is_empty());
    }
}

#[test]
fn heavy_noise_is_reported_infeasible() {
    let mut sys = config(3, 4, 2);
    sys.noise_power = 1e6;
    let inst = Instance::draw(&sys, 1).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    let out = ao_solve(&setup, Architecture::GpDiagonal, &OptimizerConfig { warmup_cap: 3, ..Default::default() }).unwrap();
    assert!(out.is_infeasible());
    assert_eq!(out.outer_iterations, 0);
    assert!(out.min_sinr < setup.gamma_bar);
    assert!(certify(&out, &setup).is_empty());
}

#[test]
fn initialization_spends_the_whole_budget() {
    let sys = config(3, 5, 3);
    let inst = Instance::draw(&sys, 2).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    for arch in Architecture::ALL {
        let (beams, state) = initialize(&setup, arch, 7).unwrap();
        assert!(rel(beams.total_power(), sys.power_budget) < 1e-12);
        for w in &beams.w {
            assert!(rel(w.norm_squared(), sys.power_budget / 3.0) < 1e-12);
        }
        if matches!(arch, Architecture::LpDiagonal | Architecture::Random) {
            assert!(state.phi.diagonal().iter().all(|c| (c.norm() - 1.0).abs() < 1e-12));
        }
    }
}

#[test]
fn profile_weights_are_validated() {
    let sys = config(3, 4, 2);
    let inst = Instance::draw(&sys, 1).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    let cfg = OptimizerConfig { weights: Some(vec![0.7, 0.7]), ..Default::default() };
    assert!(ao_solve(&setup, Architecture::GpDiagonal, &cfg).is_err());
}

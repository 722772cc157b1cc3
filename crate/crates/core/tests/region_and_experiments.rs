use risrate::architectures::Architecture;
use risrate::channel::{Instance, SystemConfig};
use risrate::experiments::{
    aggregate_and_emit, read_csv, run_experiment, write_csv, ExperimentSpec, OutputFormat, SweepVar, CSV_HEADER,
};
use risrate::fbl::fbl_rate;
use risrate::optimizer::{OptimizerConfig, Setup};
use risrate::region::{boundary_distance, boundary_distance_on_overlap, rate_profile_point, rate_region_boundary, simplex_grid};

fn small_system() -> SystemConfig {
    SystemConfig {
        num_tx_antennas: 2,
        num_ris_elements: 4,
        num_users: 2,
        ..SystemConfig::default()
    }
    .normalized()
}

fn tiny_spec() -> ExperimentSpec {
    let mut spec = ExperimentSpec::maxmin_vs_power();
    spec.name = "tiny".into();
    spec.system = small_system();
    spec.grid = vec![5.0, 10.0];
    spec.trials = 2;
    spec.architectures = vec![Architecture::None, Architecture::Random, Architecture::GpDiagonal];
    spec
}

#[test]
fn rate_profile_points_meet_their_profile() {
    let sys = small_system();
    let fbl = sys.fbl_params().unwrap();
    let inst = Instance::draw(&sys, 3).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    for alpha in simplex_grid(2, 3).unwrap() {
        let p = rate_profile_point(&alpha, &setup, Architecture::GpDiagonal, &OptimizerConfig::default(), &fbl).unwrap();
        if p.below_threshold {
            continue;
        }
        for (k, &g) in p.sinrs.iter().enumerate() {
            let r = fbl_rate(g, &fbl);
            assert!(r >= alpha[k] * p.objective * (1.0 - 1e-6), "alpha {alpha:?}: r{k} = {r}, target {}", p.objective);
        }
    }
}

#[test]
fn sinr_sweep_boundary_is_pareto_and_close_to_rate_sweep() {
    let sys = small_system();
    let fbl = sys.fbl_params().unwrap();
    let inst = Instance::draw(&sys, 4).unwrap();
    let setup = Setup::new(&inst.channels, &sys).unwrap();
    let cfg = OptimizerConfig::default();
    let a = rate_region_boundary(&setup, Architecture::None, 7, &cfg, &fbl).unwrap();
    assert!(!a.is_empty());
    for p in &a {
        for q in &a {
            let dominates = q.rates.iter().zip(&p.rates).all(|(x, y)| x >= y) && q.rates != p.rates;
            assert!(!dominates);
        }
    }
    let b = risrate::region::rate_profile_boundary(&setup, Architecture::None, 7, &cfg, &fbl).unwrap();
    let pa: Vec<Vec<f64>> = a.iter().filter(|p| !p.below_threshold).map(|p| p.rates.clone()).collect();
    let pb: Vec<Vec<f64>> = b.iter().filter(|p| !p.below_threshold).map(|p| p.rates.clone()).collect();
    let d = boundary_distance_on_overlap(&pa, &pb);
    assert!(d < 0.02, "{d}");
    assert!(boundary_distance(&pa, &pb) >= d);
}

#[test]
fn experiment_artifacts_are_reproducible() {
    let spec = tiny_spec();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let r1 = run_experiment(&spec).unwrap();
    let r2 = run_experiment(&spec).unwrap();
    assert_eq!(r1, r2);
    let f1 = aggregate_and_emit(&r1, d1.path(), OutputFormat::CsvSvg).unwrap();
    let f2 = aggregate_and_emit(&r2, d2.path(), OutputFormat::CsvSvg).unwrap();
    assert_eq!(f1.len(), f2.len());
    for (a, b) in f1.iter().zip(&f2) {
        assert_eq!(a.file_name(), b.file_name());
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{}", a.display());
    }
    assert_eq!(r1.rows.len(), spec.grid.len() * spec.architectures.len());
    for row in &r1.rows {
        assert_eq!(row.trials + row.failures, spec.trials);
        assert!(row.mean_maxmin_rate_nats >= 0.0);
    }
}

#[test]
fn csv_round_trip_and_header() {
    let r = run_experiment(&ExperimentSpec { grid: vec![10.0], ..tiny_spec() }).unwrap();
    let mut buf = Vec::new();
    write_csv(&r.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(read_csv(buf.as_slice()).unwrap(), r.rows);

    let mut empty = Vec::new();
    write_csv(&[], &mut empty).unwrap();
    assert_eq!(String::from_utf8(empty).unwrap().trim_end(), CSV_HEADER.join(","));
}

#[test]
fn gains_need_the_baseline() {
    let mut spec = tiny_spec();
    spec.grid = vec![10.0];
    spec.trials = 1;
    spec.architectures = vec![Architecture::Random];
    let r = run_experiment(&spec).unwrap();
    assert!(r.gains.is_empty());
    assert!(r.rows.iter().all(|row| row.mean_gain_pct.is_none()));
    assert!(risrate::experiments::run_gain_vs_epsilon(&tiny_spec()).is_err());
    assert_eq!(tiny_spec().sweep, SweepVar::PowerDb);
}

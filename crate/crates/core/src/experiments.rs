//! Monte Carlo sweeps over power, reliability, block length and surface size.
//!
//! Every trial draws one channel realization and solves all requested
//! architectures on it. Within a trial the optimized architectures are chained:
//! the locally passive diagonal solution seeds the globally passive diagonal
//! solve, which seeds the symmetric one, and along a power or size sweep each
//! point starts from the previous point's solution. A trial whose solve errors
//! for any architecture at a grid point is dropped at that point for all of
//! them. An instance on which the threshold `γ̄` is unreachable is not a
//! failure: it counts with rate zero and is flagged in the trial records.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::architectures::Architecture;
use crate::channel::{Instance, SystemConfig};
use crate::fbl::fbl_rate;
use crate::linalg::{CMatrix, C64};
use crate::optimizer::{ao_solve, ao_solve_from, AoOutcome, BeamformerSet, OptimizerConfig, Setup};
use crate::region::xml_escape;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    /// Power budget in dB.
    PowerDb,
    Epsilon,
    BlockLength,
    /// Number of surface elements.
    Elements,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::PowerDb => "power_db",
            SweepVar::Epsilon => "epsilon",
            SweepVar::BlockLength => "block_length",
            SweepVar::Elements => "elements",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub sweep: SweepVar,
    pub grid: Vec<f64>,
    pub architectures: Vec<Architecture>,
    pub trials: usize,
    pub base_seed: u64,
    pub system: SystemConfig,
    pub optimizer: OptimizerConfig,
}

impl ExperimentSpec {
    fn base(name: &str, sweep: SweepVar, grid: Vec<f64>, system: SystemConfig) -> Self {
        Self {
            name: name.into(),
            sweep,
            grid,
            architectures: Architecture::ALL.to_vec(),
            trials: 20,
            base_seed: 1,
            system,
            optimizer: OptimizerConfig::default(),
        }
    }

    /// Max-min rate versus power: N = 6, K = 5, M = 20, n = 256, ε = 1e-5.
    pub fn maxmin_vs_power() -> Self {
        let system = SystemConfig {
            num_tx_antennas: 6,
            num_users: 5,
            num_ris_elements: 20,
            block_length: 256,
            error_prob: 1e-5,
            ..SystemConfig::default()
        };
        Self::base("maxmin_vs_power", SweepVar::PowerDb, vec![0.0, 5.0, 10.0, 15.0], system)
    }

    /// Gain versus ε: N = 3, K = 3, M = 20, P = 10 dB, n = 256.
    pub fn gain_vs_epsilon() -> Self {
        Self::base(
            "gain_vs_epsilon",
            SweepVar::Epsilon,
            vec![1e-7, 1e-6, 1e-5, 1e-4, 1e-3],
            Self::small_system(),
        )
    }

    /// Gain versus block length: N = 3, K = 3, M = 20, P = 10 dB, ε = 1e-5.
    pub fn gain_vs_blocklength() -> Self {
        Self::base(
            "gain_vs_blocklength",
            SweepVar::BlockLength,
            vec![128.0, 256.0, 512.0, 1024.0],
            Self::small_system(),
        )
    }

    /// Rates versus surface size: N = 6, K = 5, P = 10 dB.
    pub fn vs_elements() -> Self {
        let system = SystemConfig {
            num_tx_antennas: 6,
            num_users: 5,
            ..SystemConfig::default()
        };
        Self::base("vs_elements", SweepVar::Elements, vec![16.0, 32.0, 64.0], system)
    }

    fn small_system() -> SystemConfig {
        SystemConfig {
            num_tx_antennas: 3,
            num_users: 3,
            num_ris_elements: 20,
            ..SystemConfig::default()
        }
        .with_power_db(10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("experiment.grid", "must not be empty"));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("experiment.grid", "must be strictly increasing"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("experiment.trials", "must be at least 1"));
        }
        if self.architectures.is_empty() {
            return Err(Error::invalid("experiment.architectures", "must not be empty"));
        }
        for &v in &self.grid {
            self.system_at(v)?.validate()?;
        }
        self.optimizer.validate(self.system.num_users)
    }

    /// System configuration at one grid value.
    pub fn system_at(&self, value: f64) -> Result<SystemConfig> {
        let mut s = self.system.clone();
        match self.sweep {
            SweepVar::PowerDb => s = s.with_power_db(value),
            SweepVar::Epsilon => s.error_prob = value,
            SweepVar::BlockLength => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::invalid("experiment.grid", format!("block length {value} is not a positive integer")));
                }
                s.block_length = value as u32;
            }
            SweepVar::Elements => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::invalid("experiment.grid", format!("element count {value} is not a positive integer")));
                }
                s.num_ris_elements = value as usize;
            }
        }
        Ok(s)
    }

    /// First 16 hex digits of the SHA-256 of the spec's JSON encoding.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// One architecture on one trial at one grid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub sweep_value: f64,
    pub trial: usize,
    pub seed: u64,
    pub architecture: Architecture,
    pub min_sinr: f64,
    /// The threshold `γ̄` was out of reach; the rate is then zero.
    pub below_threshold: bool,
    /// Max-min rate in nats, clamped at zero.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub sweep_value: f64,
    pub trial: usize,
    pub seed: u64,
    pub architecture: Architecture,
    pub reason: String,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub architecture: Architecture,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_maxmin_rate_nats: f64,
    pub stderr: f64,
    /// Ratio of means against the no-surface baseline on the same trials, in percent.
    pub mean_gain_pct: Option<f64>,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub config_hash: String,
    pub code_version: String,
    pub gain_definition: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainEstimate {
    pub architecture: Architecture,
    pub sweep_value: f64,
    pub gain_pct: f64,
    /// Delta-method standard error of the ratio of means.
    pub stderr_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub rows: Vec<ResultRow>,
    pub gains: Vec<GainEstimate>,
    /// `(sweep value, relative improvement of gp-bd over gp-d)`.
    pub bd_over_d: Vec<(f64, f64)>,
    pub trials: Vec<TrialRecord>,
    pub failures: Vec<FailureRecord>,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn row(&self, architecture: Architecture, sweep_value: f64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.architecture == architecture && r.sweep_value == sweep_value)
    }

    pub fn gain(&self, architecture: Architecture, sweep_value: f64) -> Option<&GainEstimate> {
        self.gains
            .iter()
            .find(|g| g.architecture == architecture && g.sweep_value == sweep_value)
    }

    /// Per-trial rates of one architecture at one grid value, by trial index.
    pub fn rates(&self, architecture: Architecture, sweep_value: f64) -> Vec<(usize, f64)> {
        self.trials
            .iter()
            .filter(|t| t.architecture == architecture && t.sweep_value == sweep_value)
            .map(|t| (t.trial, t.rate))
            .collect()
    }
}

type Solution = (BeamformerSet, CMatrix);

fn better(a: AoOutcome, b: Option<AoOutcome>) -> AoOutcome {
    match b {
        Some(b) if !b.is_infeasible() && (a.is_infeasible() || b.objective > a.objective) => b,
        _ => a,
    }
}

/// Pads a surface to `m` elements with zeros, or with unit coefficients when
/// `unit` is set.
fn pad_phi(phi: &CMatrix, m: usize, unit: bool) -> CMatrix {
    let mut out = CMatrix::zeros(m, m);
    let old = phi.nrows().min(m);
    out.view_mut((0, 0), (old, old)).copy_from(&phi.view((0, 0), (old, old)));
    if unit {
        for i in old..m {
            out[(i, i)] = C64::new(1.0, 0.0);
        }
    }
    out
}

enum ArchOutcome {
    Solved(AoOutcome),
    Failed(String),
}

/// Solves every requested architecture on one trial across the whole grid.
fn run_trial(spec: &ExperimentSpec, trial: usize) -> Result<Vec<(f64, Architecture, ArchOutcome)>> {
    let seed = spec.base_seed.wrapping_add(trial as u64);
    let draw_system = match spec.sweep {
        SweepVar::Elements => {
            let m = spec.grid.iter().cloned().fold(0.0f64, f64::max) as usize;
            SystemConfig {
                num_ris_elements: m,
                ..spec.system.clone()
            }
        }
        _ => spec.system.clone(),
    };
    let instance = Instance::draw(&draw_system, seed)?;
    let chain_across_grid = matches!(spec.sweep, SweepVar::PowerDb | SweepVar::Elements);
    let mut previous: std::collections::HashMap<Architecture, Solution> = Default::default();
    let mut out = Vec::new();
    for &value in &spec.grid {
        let system = spec.system_at(value)?;
        let channels = if spec.sweep == SweepVar::Elements {
            instance.channels.truncated(system.num_ris_elements)
        } else {
            instance.channels.clone()
        };
        let setup = Setup::new(&channels, &system)?;
        let opt = OptimizerConfig {
            seed,
            ..spec.optimizer.clone()
        };
        let mut solved: std::collections::HashMap<Architecture, AoOutcome> = Default::default();
        let order = [
            Architecture::None,
            Architecture::Random,
            Architecture::LpDiagonal,
            Architecture::GpDiagonal,
            Architecture::GpBeyondDiagonal,
        ];
        for arch in order {
            if !spec.architectures.contains(&arch) {
                continue;
            }
            let mut candidates: Vec<Solution> = Vec::new();
            // the random surface is redrawn from the trial seed at every grid value
            if chain_across_grid && arch != Architecture::Random {
                if let Some((b, phi)) = previous.get(&arch) {
                    let scale = (system.power_budget / b.total_power().max(f64::MIN_POSITIVE)).sqrt().min(
                        if spec.sweep == SweepVar::PowerDb { f64::INFINITY } else { 1.0 },
                    );
                    let beams = BeamformerSet::new(b.w.iter().map(|w| w * C64::new(scale, 0.0)).collect());
                    let unit = arch == Architecture::LpDiagonal;
                    candidates.push((beams, pad_phi(phi, channels.num_ris(), unit)));
                }
            }
            let colder = match arch {
                Architecture::GpDiagonal => Some(Architecture::LpDiagonal),
                Architecture::GpBeyondDiagonal => Some(Architecture::GpDiagonal),
                _ => None,
            };
            if let Some(c) = colder.and_then(|c| solved.get(&c)) {
                candidates.push((c.beams.clone(), c.ris.phi.clone()));
            }
            let result = if candidates.is_empty() {
                ao_solve(&setup, arch, &opt)
            } else {
                let mut best: Option<AoOutcome> = None;
                let mut err = None;
                for (b, phi) in candidates {
                    match ao_solve_from(&setup, arch, &opt, b, phi) {
                        Ok(o) => {
                            best = Some(match best {
                                None => o,
                                Some(prev) => better(prev, Some(o)),
                            })
                        }
                        Err(e) => err = Some(e),
                    }
                }
                match (best, err) {
                    (Some(b), _) => Ok(b),
                    (None, Some(e)) => Err(e),
                    (None, None) => unreachable!("at least one candidate"),
                }
            };
            match result {
                Ok(o) => {
                    previous.insert(arch, (o.beams.clone(), o.ris.phi.clone()));
                    solved.insert(arch, o.clone());
                    out.push((value, arch, ArchOutcome::Solved(o)));
                }
                Err(e) => out.push((value, arch, ArchOutcome::Failed(e.to_string()))),
            }
        }
    }
    Ok(out)
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ratio of means `x̄ / ȳ` in percent with its delta-method standard error.
pub fn ratio_of_means(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let (mx, _) = mean_and_stderr(x);
    let (my, _) = mean_and_stderr(y);
    if my == 0.0 {
        return None;
    }
    let r = mx / my;
    if x.len() < 2 {
        return Some((100.0 * r, 0.0));
    }
    let cov = |a: &[f64], ma: f64, b: &[f64], mb: f64| {
        a.iter().zip(b).map(|(p, q)| (p - ma) * (q - mb)).sum::<f64>() / (n - 1.0)
    };
    let var = (cov(x, mx, x, mx) - 2.0 * r * cov(x, mx, y, my) + r * r * cov(y, my, y, my)) / (n * my * my);
    Some((100.0 * r, 100.0 * var.max(0.0).sqrt()))
}

/// Runs any sweep described by `spec`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let per_trial = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t))
        .collect::<Result<Vec<_>>>()?;
    let hash = spec.config_hash();
    let mut trials = Vec::new();
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut gains = Vec::new();
    let mut bd_over_d = Vec::new();
    for &value in &spec.grid {
        // a trial counts at this grid value only if every architecture succeeded
        let mut ok_trials = Vec::new();
        for (t, outcomes) in per_trial.iter().enumerate() {
            let seed = spec.base_seed.wrapping_add(t as u64);
            let mut ok = true;
            for (v, arch, o) in outcomes.iter().filter(|(v, _, _)| *v == value) {
                if let ArchOutcome::Failed(reason) = o {
                    ok = false;
                    failures.push(FailureRecord {
                        sweep_value: *v,
                        trial: t,
                        seed,
                        architecture: *arch,
                        reason: reason.clone(),
                    });
                }
            }
            if ok {
                ok_trials.push(t);
            }
        }
        let system = spec.system_at(value)?;
        let fbl = system.fbl_params()?;
        let mut rates_by_arch: std::collections::HashMap<Architecture, Vec<f64>> = Default::default();
        for &t in &ok_trials {
            let seed = spec.base_seed.wrapping_add(t as u64);
            for (_, arch, o) in per_trial[t].iter().filter(|(v, _, _)| *v == value) {
                if let ArchOutcome::Solved(o) = o {
                    let rate = if o.is_infeasible() {
                        0.0
                    } else {
                        fbl_rate(o.min_sinr, &fbl).max(0.0)
                    };
                    rates_by_arch.entry(*arch).or_default().push(rate);
                    trials.push(TrialRecord {
                        sweep_value: value,
                        trial: t,
                        seed,
                        architecture: *arch,
                        min_sinr: o.min_sinr,
                        below_threshold: o.is_infeasible(),
                        rate,
                    });
                }
            }
        }
        let n_fail = spec.trials - ok_trials.len();
        let baseline = rates_by_arch.get(&Architecture::None).cloned();
        for arch in Architecture::ALL.into_iter().filter(|a| spec.architectures.contains(a)) {
            let rates = rates_by_arch.get(&arch).cloned().unwrap_or_default();
            let (mean, se) = mean_and_stderr(&rates);
            let gain = baseline.as_ref().and_then(|b| ratio_of_means(&rates, b));
            if let Some((g, gse)) = gain {
                gains.push(GainEstimate {
                    architecture: arch,
                    sweep_value: value,
                    gain_pct: g,
                    stderr_pct: gse,
                });
            }
            rows.push(ResultRow {
                experiment: spec.name.clone(),
                architecture: arch,
                sweep_var: spec.sweep.as_str().into(),
                sweep_value: value,
                trials: rates.len(),
                failures: n_fail,
                mean_maxmin_rate_nats: mean,
                stderr: se,
                mean_gain_pct: gain.map(|g| g.0),
                config_hash: hash.clone(),
                seed: spec.base_seed,
            });
        }
        if let (Some(bd), Some(d)) = (
            rates_by_arch.get(&Architecture::GpBeyondDiagonal),
            rates_by_arch.get(&Architecture::GpDiagonal),
        ) {
            let (mb, _) = mean_and_stderr(bd);
            let (md, _) = mean_and_stderr(d);
            if md > 0.0 {
                bd_over_d.push((value, (mb - md) / md));
            }
        }
    }
    Ok(ExperimentResult {
        spec: spec.clone(),
        rows,
        gains,
        bd_over_d,
        trials,
        failures,
        provenance: Provenance {
            seed: spec.base_seed,
            config_hash: hash,
            code_version: env!("CARGO_PKG_VERSION").into(),
            gain_definition: "ratio of paired-trial means, architecture over no surface, in percent".into(),
        },
    })
}

fn expect_sweep(spec: &ExperimentSpec, sweep: SweepVar) -> Result<()> {
    if spec.sweep != sweep {
        return Err(Error::invalid(
            "experiment.sweep",
            format!("expected {}, got {}", sweep.as_str(), spec.sweep.as_str()),
        ));
    }
    Ok(())
}

pub fn run_maxmin_vs_power(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    expect_sweep(spec, SweepVar::PowerDb)?;
    run_experiment(spec)
}

pub fn run_gain_vs_epsilon(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    expect_sweep(spec, SweepVar::Epsilon)?;
    if !spec.architectures.contains(&Architecture::None) {
        return Err(Error::invalid("experiment.architectures", "gain needs the no-surface baseline"));
    }
    run_experiment(spec)
}

pub fn run_gain_vs_blocklength(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    expect_sweep(spec, SweepVar::BlockLength)?;
    if !spec.architectures.contains(&Architecture::None) {
        return Err(Error::invalid("experiment.architectures", "gain needs the no-surface baseline"));
    }
    run_experiment(spec)
}

pub fn run_vs_elements(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    expect_sweep(spec, SweepVar::Elements)?;
    run_experiment(spec)
}

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "architecture",
    "sweep_var",
    "sweep_value",
    "trials",
    "failures",
    "mean_maxmin_rate_nats",
    "stderr",
    "mean_gain_pct",
    "config_hash",
    "seed",
];

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.architecture.to_string(),
            r.sweep_var.clone(),
            r.sweep_value.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            r.mean_maxmin_rate_nats.to_string(),
            r.stderr.to_string(),
            r.mean_gain_pct.map(|g| g.to_string()).unwrap_or_default(),
            r.config_hash.clone(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .map_err(|e| Error::invalid("csv", format!("column {}: {e}", CSV_HEADER[i])))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse::<u64>()
                .map_err(|e| Error::invalid("csv", format!("column {}: {e}", CSV_HEADER[i])))
        };
        rows.push(ResultRow {
            experiment: field(0).into(),
            architecture: field(1).parse()?,
            sweep_var: field(2).into(),
            sweep_value: num(3)?,
            trials: int(4)? as usize,
            failures: int(5)? as usize,
            mean_maxmin_rate_nats: num(6)?,
            stderr: num(7)?,
            mean_gain_pct: if field(8).is_empty() { None } else { Some(num(8)?) },
            config_hash: field(9).into(),
            seed: int(10)?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    CsvSvg,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "csv+svg" => Ok(OutputFormat::CsvSvg),
            other => Err(Error::invalid("format", format!("`{other}` is not csv or csv+svg"))),
        }
    }
}

/// Line plot of mean rate (or gain, for the reliability sweeps) with ±1 standard-error bars.
pub fn results_svg(result: &ExperimentResult) -> String {
    let use_gain = matches!(result.spec.sweep, SweepVar::Epsilon | SweepVar::BlockLength);
    let log_x = matches!(result.spec.sweep, SweepVar::Epsilon | SweepVar::BlockLength | SweepVar::Elements);
    let xf = |v: f64| if log_x { v.log10() } else { v };
    let series: Vec<(Architecture, Vec<(f64, f64, f64)>)> = Architecture::ALL
        .into_iter()
        .filter(|a| result.spec.architectures.contains(a))
        .filter(|a| !(use_gain && *a == Architecture::None))
        .map(|a| {
            let pts = result
                .spec
                .grid
                .iter()
                .filter_map(|&v| {
                    if use_gain {
                        result.gain(a, v).map(|g| (xf(v), g.gain_pct, g.stderr_pct))
                    } else {
                        result
                            .row(a, v)
                            .filter(|r| r.mean_maxmin_rate_nats.is_finite())
                            .map(|r| (xf(v), r.mean_maxmin_rate_nats, r.stderr))
                    }
                })
                .collect();
            (a, pts)
        })
        .collect();
    let all: Vec<&(f64, f64, f64)> = series.iter().flat_map(|(_, p)| p.iter()).collect();
    let xmin = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ymin = all.iter().map(|p| p.1 - p.2).fold(f64::INFINITY, f64::min).min(0.0);
    let ymax = all.iter().map(|p| p.1 + p.2).fold(f64::NEG_INFINITY, f64::max);
    let (xmin, xmax) = if xmin.is_finite() && xmax > xmin { (xmin, xmax) } else { (0.0, 1.0) };
    let (ymin, ymax) = if ymax.is_finite() && ymax > ymin { (ymin, ymax * 1.05) } else { (0.0, 1.0) };
    let (w, h, m) = (560.0, 420.0, 60.0);
    let sx = |x: f64| m + (x - xmin) / (xmax - xmin) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - ymin) / (ymax - ymin) * (h - 2.0 * m);
    let colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#7f7f7f"];
    let ylabel = if use_gain { "gain over no surface [%]" } else { "max-min rate [nats]" };
    let xlabel = match result.spec.sweep {
        SweepVar::PowerDb => "P [dB]",
        SweepVar::Epsilon => "log10 epsilon",
        SweepVar::BlockLength => "log10 n",
        SweepVar::Elements => "log10 M",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{} (hash {})</text>",
        w / 2.0,
        xml_escape(&result.spec.name),
        result.provenance.config_hash
    );
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/><line x1=\"{m}\" y1=\"{}\" x2=\"{m}\" y2=\"{m}\" stroke=\"black\"/>",
        h - m,
        w - m,
        h - m,
        h - m
    );
    for i in 0..=4 {
        let fx = xmin + (xmax - xmin) * i as f64 / 4.0;
        let fy = ymin + (ymax - ymin) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{:.3}</text>",
            sx(fx),
            h - m + 15.0,
            fx
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{:.3}</text>",
            m - 5.0,
            sy(fy) + 3.0,
            fy
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{xlabel}</text>",
        w / 2.0,
        h - 20.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{ylabel}</text>",
        h / 2.0,
        h / 2.0
    );
    for (idx, (arch, pts)) in series.iter().enumerate() {
        let color = colors[idx % colors.len()];
        let poly: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            poly.join(" ")
        );
        for p in pts {
            let _ = writeln!(
                s,
                "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"{color}\"/><circle cx=\"{0:.2}\" cy=\"{3:.2}\" r=\"3\" fill=\"{color}\"/>",
                sx(p.0),
                sy(p.1 - p.2),
                sy(p.1 + p.2),
                sy(p.1)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{arch}</text>",
            w - m + 5.0,
            m + 14.0 * idx as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `<name>.csv`, `<name>.json` and, for `csv+svg`, `<name>.svg` into `dir`.
pub fn aggregate_and_emit(result: &ExperimentResult, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv_path = dir.join(format!("{}.csv", result.spec.name));
    write_csv(&result.rows, std::fs::File::create(&csv_path)?)?;
    written.push(csv_path);
    let json_path = dir.join(format!("{}.json", result.spec.name));
    std::fs::write(&json_path, serde_json::to_string_pretty(result)?)?;
    written.push(json_path);
    if format == OutputFormat::CsvSvg {
        let svg_path = dir.join(format!("{}.svg", result.spec.name));
        std::fs::write(&svg_path, results_svg(result))?;
        written.push(svg_path);
    }
    Ok(written)
}

//! Alternating optimization of beamformers and surface.
//!
//! Each outer iteration relinearizes the SINR numerators at the current point
//! and runs a Dinkelbach loop on the beamformer block, then on the surface
//! block. A block result is kept only if it does not lower the weighted
//! minimum SINR `min_k γ_k / λ_k`, so the outer sequence is monotone.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::architectures::{is_feasible, passivity_gap, random_phi, Architecture, RisState, DEFAULT_FEASIBILITY_TOL};
use crate::channel::{effective_channel, ChannelSet, SystemConfig};
use crate::linalg::{cvecs_serde, dot, CMatrix, CVector, C64};
use crate::subproblem::{
    BarrierSolver, BdFormulation, BlockProblem, BlockValue, ConicSolver, Dinkelbach, Operating, PhiBlock,
    SolveStatus, SolverOptions, SubgradientSolver, WBlock,
};
use crate::{Error, Result};

/// Per-user transmit beamformers `w_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamformerSet {
    #[serde(with = "cvecs_serde")]
    pub w: Vec<CVector>,
}

impl BeamformerSet {
    pub fn new(w: Vec<CVector>) -> Self {
        Self { w }
    }

    pub fn num_users(&self) -> usize {
        self.w.len()
    }

    /// `Σ_k ‖w_k‖²` in watts.
    pub fn total_power(&self) -> f64 {
        self.w.iter().map(|w| w.norm_squared()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Barrier,
    /// Projected subgradient; only meaningful for the diagonal surface blocks.
    Subgradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Profile weights on the open simplex; equal weights when absent.
    pub weights: Option<Vec<f64>>,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Relative change of the weighted minimum SINR that ends the outer loop.
    pub outer_tol: f64,
    /// Relative change of `μ` that ends a Dinkelbach loop.
    pub inner_tol: f64,
    pub warmup_cap: usize,
    /// Initial `δ` in the linearized unit-modulus bound `2Re{φ_ref* φ} − 1 ≥ 1 − δ`.
    pub lp_modulus_slack: f64,
    pub bd_formulation: BdFormulation,
    pub solver: SolverKind,
    pub solver_tol: f64,
    pub solver_max_iters: usize,
    /// Seed for the random initial surface.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            weights: None,
            max_outer: 50,
            max_inner: 20,
            outer_tol: 1e-4,
            inner_tol: 1e-5,
            warmup_cap: 10,
            lp_modulus_slack: 0.2,
            bd_formulation: BdFormulation::Reduced,
            solver: SolverKind::Barrier,
            solver_tol: 1e-8,
            solver_max_iters: 200,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self, num_users: usize) -> Result<()> {
        if let Some(w) = &self.weights {
            check_simplex(w, num_users)?;
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::invalid("optimizer.max_outer", "iteration caps must be at least 1"));
        }
        if !(self.outer_tol > 0.0 && self.inner_tol > 0.0) {
            return Err(Error::invalid("optimizer.outer_tol", "tolerances must be positive"));
        }
        if !(self.lp_modulus_slack > 0.0 && self.lp_modulus_slack <= 2.0) {
            return Err(Error::invalid("optimizer.lp_modulus_slack", "must lie in (0, 2]"));
        }
        if !(self.solver_tol > 0.0) || self.solver_max_iters == 0 {
            return Err(Error::invalid("optimizer.solver_tol", "solver settings must be positive"));
        }
        Ok(())
    }

    pub fn profile(&self, num_users: usize) -> Vec<f64> {
        self.weights
            .clone()
            .unwrap_or_else(|| vec![1.0 / num_users as f64; num_users])
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.solver_tol,
            max_iters: self.solver_max_iters,
            ..Default::default()
        }
    }
}

/// Checks that `w` has `k` positive entries summing to one.
pub fn check_simplex(w: &[f64], k: usize) -> Result<()> {
    if w.len() != k {
        return Err(Error::Dimension(format!("{} weights for {k} users", w.len())));
    }
    if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::invalid("weights", "every weight must be positive"));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("weights", format!("weights sum to {s}, expected 1")));
    }
    Ok(())
}

/// Channels with the noise level, power budget and SINR threshold they are solved under.
#[derive(Debug, Clone, Copy)]
pub struct Setup<'a> {
    pub channels: &'a ChannelSet,
    pub noise: f64,
    pub power: f64,
    pub gamma_bar: f64,
}

impl<'a> Setup<'a> {
    pub fn new(channels: &'a ChannelSet, config: &SystemConfig) -> Result<Self> {
        Ok(Self {
            channels,
            noise: config.noise_power,
            power: config.power_budget,
            gamma_bar: config.fbl_params()?.gamma_bar,
        })
    }
}

/// Per-user row channels `h_k` (length N) under `architecture`.
pub fn user_channels(channels: &ChannelSet, architecture: Architecture, phi: &CMatrix) -> Result<Vec<CVector>> {
    if architecture.uses_surface() {
        channels
            .ris_user
            .iter()
            .map(|f| effective_channel(&channels.bs_ris, f, phi))
            .collect()
    } else {
        Ok(channels.direct.clone())
    }
}

/// `γ_k = |h_k w_k|² / (σ² + Σ_{i≠k} |h_k w_i|²)`.
pub fn sinrs(rows: &[CVector], beams: &BeamformerSet, noise: f64) -> Vec<f64> {
    rows.iter()
        .enumerate()
        .map(|(k, h)| {
            let signal = dot(h, &beams.w[k]).norm_sqr();
            let interference: f64 = beams
                .w
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, w)| dot(h, w).norm_sqr())
                .sum();
            signal / (noise + interference)
        })
        .collect()
}

fn weighted_min(sinrs: &[f64], weights: &[f64]) -> f64 {
    sinrs
        .iter()
        .zip(weights)
        .map(|(g, l)| g / l)
        .fold(f64::INFINITY, f64::min)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Random unit-modulus surface and matched filters at equal power split.
pub fn initialize(setup: &Setup, architecture: Architecture, seed: u64) -> Result<(BeamformerSet, RisState)> {
    setup.channels.validate()?;
    let m = setup.channels.num_ris();
    let k = setup.channels.num_users();
    if k == 0 {
        return Err(Error::invalid("num_users", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = random_phi(architecture, m.max(1), &mut rng)?;
    let phi = if m == 0 { CMatrix::zeros(0, 0) } else { state.phi.clone() };
    let rows = user_channels(setup.channels, architecture, &phi)?;
    let amp = (setup.power / k as f64).sqrt();
    let mut w = Vec::with_capacity(k);
    for (user, h) in rows.iter().enumerate() {
        let norm = h.norm();
        if !(norm > 0.0) {
            return Err(Error::ZeroChannel { user });
        }
        w.push(h.map(|c| c.conj()) * C64::new(amp / norm, 0.0));
    }
    let beams = BeamformerSet::new(w);
    let state = RisState::new(phi, architecture, &setup.channels.bs_ris, &beams)?;
    Ok((beams, state))
}

/// `μ = min_k d_k / (λ_k D_k)`.
pub fn gda_update_mu(numerators: &[f64], weights: &[f64], denominators: &[f64]) -> Result<f64> {
    if numerators.len() != weights.len() || numerators.len() != denominators.len() {
        return Err(Error::Dimension("numerators, weights and denominators differ in length".into()));
    }
    let mut mu = f64::INFINITY;
    for (user, ((&d, &l), &den)) in numerators.iter().zip(weights).zip(denominators).enumerate() {
        if !(den > 0.0) {
            return Err(Error::NonPositiveDenominator { user, value: den });
        }
        if !(l > 0.0) {
            return Err(Error::invalid("weights", format!("weight {user} is {l}")));
        }
        mu = mu.min(d / (l * den));
    }
    Ok(mu)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub outer_iter: usize,
    /// `0` is the value on entry to a Dinkelbach loop.
    pub inner_iter: usize,
    /// `w`, `phi`, their warm-up variants, or `outer` for end-of-iteration summaries.
    pub block: String,
    pub mu: f64,
    pub min_sinr: f64,
    pub passivity_gap: f64,
    pub solver_status: String,
    pub ms_elapsed: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub records: Vec<TraceRecord>,
}

impl OptimizerTrace {
    pub fn push(&mut self, r: TraceRecord) {
        self.records.push(r);
    }

    /// `μ` sequences of every Dinkelbach loop, in order.
    pub fn mu_sequences(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for r in &self.records {
            if r.block == "outer" {
                continue;
            }
            if r.inner_iter == 0 {
                out.push(Vec::new());
            }
            if let Some(last) = out.last_mut() {
                last.push(r.mu);
            }
        }
        out
    }

    /// Minimum SINR at the end of each outer iteration, starting with the value after warm-up.
    pub fn outer_min_sinrs(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.block == "outer")
            .map(|r| r.min_sinr)
            .collect()
    }

    /// Equality ignoring wall-clock columns.
    pub fn same_iterates(&self, other: &Self) -> bool {
        self.records.len() == other.records.len()
            && self.records.iter().zip(&other.records).all(|(a, b)| {
                a.outer_iter == b.outer_iter
                    && a.inner_iter == b.inner_iter
                    && a.block == b.block
                    && a.mu.to_bits() == b.mu.to_bits()
                    && a.min_sinr.to_bits() == b.min_sinr.to_bits()
                    && a.passivity_gap.to_bits() == b.passivity_gap.to_bits()
                    && a.solver_status == b.solver_status
            })
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "outer_iter",
            "inner_iter",
            "mu",
            "min_sinr",
            "passivity_gap",
            "solver_status",
            "ms_elapsed",
            "block",
        ])?;
        for r in &self.records {
            w.write_record([
                r.outer_iter.to_string(),
                r.inner_iter.to_string(),
                r.mu.to_string(),
                r.min_sinr.to_string(),
                r.passivity_gap.to_string(),
                r.solver_status.clone(),
                format!("{:.3}", r.ms_elapsed),
                r.block.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeStatus {
    Converged,
    /// Outer iteration cap reached before the tolerance.
    MaxOuter,
    /// Warm-up could not lift every user to the SINR threshold.
    InfeasibleInstance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AoOutcome {
    pub beams: BeamformerSet,
    pub ris: RisState,
    pub sinrs: Vec<f64>,
    pub min_sinr: f64,
    /// `min_k γ_k / λ_k`.
    pub objective: f64,
    pub status: OutcomeStatus,
    pub outer_iterations: usize,
    pub trace: OptimizerTrace,
}

impl AoOutcome {
    pub fn is_infeasible(&self) -> bool {
        self.status == OutcomeStatus::InfeasibleInstance
    }
}

/// Result of one Dinkelbach loop on a block.
#[derive(Debug, Clone)]
pub struct GdaResult {
    pub x: nalgebra::DVector<f64>,
    pub mus: Vec<f64>,
    /// True minimum SINR at each accepted iterate, aligned with `mus`.
    pub min_sinrs: Vec<f64>,
    pub statuses: Vec<SolveStatus>,
    pub elapsed_ms: Vec<f64>,
}

/// Solve-then-update-μ on a fixed linearization until `μ` settles.
///
/// `μ` starts at its value at the reference point; a solution that would
/// lower `μ` (possible only through solver error) ends the loop unaccepted.
pub fn gda_loop(
    block: &BlockProblem,
    weights: &[f64],
    gamma_bar: Option<f64>,
    config: &OptimizerConfig,
    meta: (usize, &str),
) -> Result<GdaResult> {
    let opts = config.solver_options();
    let x0 = block.reference.clone();
    let mut mu = gda_update_mu(
        &block.linearized_numerators(x0.as_slice()),
        weights,
        &block.denominators(x0.as_slice()),
    )?
    .max(0.0);
    let mut out = GdaResult {
        x: x0.clone(),
        mus: vec![mu],
        min_sinrs: vec![min_of(&block.sinrs(x0.as_slice()))],
        statuses: Vec::new(),
        elapsed_ms: Vec::new(),
    };
    for m in 1..=config.max_inner {
        let start = Instant::now();
        let scales: Vec<f64> = block
            .denominators(out.x.as_slice())
            .iter()
            .zip(weights)
            .map(|(d, l)| d * l)
            .collect();
        let mut problem = block.problem(&Dinkelbach {
            mu,
            weights,
            gamma_bar,
            scales: Some(&scales),
        });
        problem.meta.outer_iter = meta.0;
        problem.meta.inner_iter = m;
        problem.meta.block = meta.1.to_string();
        let sol = match config.solver {
            SolverKind::Barrier => BarrierSolver.solve(&problem, &opts),
            SolverKind::Subgradient if problem.equalities.is_empty() => {
                SubgradientSolver::default().solve(&problem, &opts)
            }
            SolverKind::Subgradient => BarrierSolver.solve(&problem, &opts),
        };
        out.elapsed_ms.push(start.elapsed().as_secs_f64() * 1e3);
        out.statuses.push(sol.status);
        let usable = matches!(sol.status, SolveStatus::Optimal | SolveStatus::MaxIters)
            && problem.max_violation(sol.x.as_slice()) <= 1e-9;
        if !usable {
            break;
        }
        let next = gda_update_mu(
            &block.linearized_numerators(sol.x.as_slice()),
            weights,
            &block.denominators(sol.x.as_slice()),
        )?;
        if next < mu {
            break;
        }
        out.min_sinrs.push(min_of(&block.sinrs(sol.x.as_slice())));
        out.x = sol.x;
        out.mus.push(next);
        let rel = (next - mu) / mu.abs().max(1e-12);
        mu = next;
        if rel < config.inner_tol {
            break;
        }
    }
    Ok(out)
}

struct Runner<'a> {
    setup: Setup<'a>,
    architecture: Architecture,
    config: &'a OptimizerConfig,
    trace: OptimizerTrace,
    beams: BeamformerSet,
    phi: CMatrix,
    clock: Instant,
}

impl Runner<'_> {
    fn sinrs_at(&self, phi: &CMatrix, beams: &BeamformerSet) -> Result<Vec<f64>> {
        let rows = user_channels(self.setup.channels, self.architecture, phi)?;
        Ok(sinrs(&rows, beams, self.setup.noise))
    }

    fn gap(&self, phi: &CMatrix, beams: &BeamformerSet) -> f64 {
        if self.architecture.uses_surface() {
            passivity_gap(phi, &self.setup.channels.bs_ris, beams).unwrap_or(f64::NAN)
        } else {
            0.0
        }
    }

    fn operating(&self) -> Operating<'_> {
        Operating {
            channels: self.setup.channels,
            phi: &self.phi,
            beams: &self.beams,
            noise: self.setup.noise,
            power: self.setup.power,
        }
    }

    fn record(&mut self, outer: usize, block: &str, res: &GdaResult) {
        for (m, &mu) in res.mus.iter().enumerate() {
            let status = if m == 0 {
                "start".to_string()
            } else {
                res.statuses[m - 1].to_string()
            };
            self.trace.push(TraceRecord {
                outer_iter: outer,
                inner_iter: m,
                block: block.to_string(),
                mu,
                min_sinr: res.min_sinrs[m],
                passivity_gap: f64::NAN,
                solver_status: status,
                ms_elapsed: if m == 0 { 0.0 } else { res.elapsed_ms[m - 1] },
            });
        }
        // a rejected last solve is still reported
        if res.statuses.len() >= res.mus.len() {
            let m = res.statuses.len();
            self.trace.push(TraceRecord {
                outer_iter: outer,
                inner_iter: m,
                block: block.to_string(),
                mu: *res.mus.last().expect("nonempty"),
                min_sinr: f64::NAN,
                passivity_gap: f64::NAN,
                solver_status: format!("{}-rejected", res.statuses[m - 1]),
                ms_elapsed: res.elapsed_ms[m - 1],
            });
        }
    }

    /// Runs one block and keeps the result if the weighted minimum SINR does not drop.
    fn step(&mut self, outer: usize, surface: bool, weights: &[f64], gamma_bar: Option<f64>, tag: &str) -> Result<()> {
        let before = weighted_min(&self.sinrs_at(&self.phi, &self.beams)?, weights);
        let accept_floor = before - 1e-8 * before.abs().max(1.0);
        if !surface {
            let block = WBlock::build(self.architecture, &self.operating())?;
            let res = gda_loop(&block, weights, gamma_bar, self.config, (outer, tag))?;
            self.record(outer, tag, &res);
            if let BlockValue::Beams(b) = block.decode(res.x.as_slice()) {
                let after = weighted_min(&self.sinrs_at(&self.phi, &b)?, weights);
                if after >= accept_floor && self.passive_enough(&self.phi, &b) {
                    self.beams = b;
                }
            }
            return Ok(());
        }
        let mut slack = self.config.lp_modulus_slack;
        for _attempt in 0..4 {
            let builder = PhiBlock {
                formulation: self.config.bd_formulation,
                lp_modulus_slack: slack,
            };
            let block = builder.build(self.architecture, &self.operating())?;
            let res = gda_loop(&block, weights, gamma_bar, self.config, (outer, tag))?;
            self.record(outer, tag, &res);
            let BlockValue::Phi(mut phi) = block.decode(res.x.as_slice()) else {
                unreachable!("surface block decodes to a matrix")
            };
            if self.architecture == Architecture::LpDiagonal {
                for i in 0..phi.nrows() {
                    let c = phi[(i, i)];
                    let r = c.norm();
                    phi[(i, i)] = if r > 0.0 { c / r } else { self.phi[(i, i)] };
                }
            }
            let sinrs = self.sinrs_at(&phi, &self.beams)?;
            let after = weighted_min(&sinrs, weights);
            let thresholds_ok = gamma_bar.is_none_or(|g| min_of(&sinrs) >= g - 1e-9);
            if after >= accept_floor && thresholds_ok && self.passive_enough(&phi, &self.beams) {
                self.phi = phi;
                return Ok(());
            }
            if self.architecture != Architecture::LpDiagonal {
                break;
            }
            slack *= 0.5;
        }
        Ok(())
    }

    fn passive_enough(&self, phi: &CMatrix, beams: &BeamformerSet) -> bool {
        if !self.architecture.globally_passive() {
            return true;
        }
        let p_in: f64 = beams.w.iter().map(|w| (&self.setup.channels.bs_ris * w).norm_squared()).sum();
        self.gap(phi, beams) <= 1e-9 * p_in.max(f64::MIN_POSITIVE) + 1e-300
    }

    fn summary(&mut self, outer: usize) -> Result<f64> {
        let s = self.sinrs_at(&self.phi, &self.beams)?;
        let gap = self.gap(&self.phi, &self.beams);
        self.trace.push(TraceRecord {
            outer_iter: outer,
            inner_iter: 0,
            block: "outer".into(),
            mu: f64::NAN,
            min_sinr: min_of(&s),
            passivity_gap: gap,
            solver_status: "-".into(),
            ms_elapsed: self.clock.elapsed().as_secs_f64() * 1e3,
        });
        Ok(min_of(&s))
    }
}

/// Lifts every user to `γ̄` by max-min iterations without the threshold rows.
///
/// Returns the best point found and whether the threshold was reached.
pub fn warmup(
    setup: &Setup,
    architecture: Architecture,
    config: &OptimizerConfig,
    beams: BeamformerSet,
    phi: CMatrix,
) -> Result<(BeamformerSet, CMatrix, bool, OptimizerTrace)> {
    let mut runner = Runner {
        setup: *setup,
        architecture,
        config,
        trace: OptimizerTrace::default(),
        beams,
        phi,
        clock: Instant::now(),
    };
    let reached = run_warmup(&mut runner)?;
    Ok((runner.beams, runner.phi, reached, runner.trace))
}

fn run_warmup(runner: &mut Runner) -> Result<bool> {
    let k = runner.setup.channels.num_users();
    let equal = vec![1.0 / k as f64; k];
    let gbar = runner.setup.gamma_bar;
    let reached = |r: &Runner| -> Result<bool> { Ok(min_of(&r.sinrs_at(&r.phi, &r.beams)?) >= gbar) };
    if gbar <= 0.0 || reached(runner)? {
        return Ok(true);
    }
    for it in 1..=runner.config.warmup_cap {
        runner.step(it, false, &equal, None, "warmup-w")?;
        if reached(runner)? {
            return Ok(true);
        }
        if runner.architecture.optimizes_surface() {
            runner.step(it, true, &equal, None, "warmup-phi")?;
            if reached(runner)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Full alternating optimization from the default initialization.
pub fn ao_solve(setup: &Setup, architecture: Architecture, config: &OptimizerConfig) -> Result<AoOutcome> {
    let (beams, state) = initialize(setup, architecture, config.seed)?;
    ao_solve_from(setup, architecture, config, beams, state.phi)
}

/// Alternating optimization from a given feasible starting point.
pub fn ao_solve_from(
    setup: &Setup,
    architecture: Architecture,
    config: &OptimizerConfig,
    beams: BeamformerSet,
    phi: CMatrix,
) -> Result<AoOutcome> {
    let k = setup.channels.num_users();
    config.validate(k)?;
    if beams.w.len() != k {
        return Err(Error::Dimension(format!("{} beamformers for {k} users", beams.w.len())));
    }
    let weights = config.profile(k);
    let mut runner = Runner {
        setup: *setup,
        architecture,
        config,
        trace: OptimizerTrace::default(),
        beams,
        phi,
        clock: Instant::now(),
    };
    let feasible = run_warmup(&mut runner)?;
    let gamma_rows = (setup.gamma_bar > 0.0).then_some(setup.gamma_bar);
    let mut status = OutcomeStatus::InfeasibleInstance;
    let mut outer_iterations = 0;
    let mut current = weighted_min(&runner.sinrs_at(&runner.phi, &runner.beams)?, &weights);
    runner.summary(0)?;
    if feasible {
        status = OutcomeStatus::MaxOuter;
        for t in 1..=config.max_outer {
            outer_iterations = t;
            runner.step(t, false, &weights, gamma_rows, "w")?;
            if architecture.optimizes_surface() {
                runner.step(t, true, &weights, gamma_rows, "phi")?;
            }
            runner.summary(t)?;
            let next = weighted_min(&runner.sinrs_at(&runner.phi, &runner.beams)?, &weights);
            let rel = (next - current) / current.abs().max(1e-12);
            current = current.max(next);
            if rel < config.outer_tol {
                status = OutcomeStatus::Converged;
                break;
            }
        }
    }
    let sinrs = runner.sinrs_at(&runner.phi, &runner.beams)?;
    let ris = RisState::new(runner.phi.clone(), architecture, &setup.channels.bs_ris, &runner.beams)?;
    Ok(AoOutcome {
        min_sinr: min_of(&sinrs),
        objective: weighted_min(&sinrs, &weights),
        sinrs,
        beams: runner.beams,
        ris,
        status,
        outer_iterations,
        trace: runner.trace,
    })
}

/// Checks an outcome against its architecture's constraints, the power budget and the threshold.
pub fn certify(outcome: &AoOutcome, setup: &Setup) -> Vec<String> {
    let mut issues = Vec::new();
    if outcome.ris.architecture.uses_surface() {
        let rep = is_feasible(&outcome.ris, &setup.channels.bs_ris, &outcome.beams, DEFAULT_FEASIBILITY_TOL);
        if !rep.feasible {
            issues.push(rep.to_string());
        }
    }
    let p = outcome.beams.total_power();
    if p > setup.power + 1e-9 {
        issues.push(format!("power {p} exceeds budget {}", setup.power));
    }
    if !outcome.is_infeasible() {
        for (k, &g) in outcome.sinrs.iter().enumerate() {
            if g < setup.gamma_bar - 1e-6 {
                issues.push(format!("user {k} SINR {g} below threshold {}", setup.gamma_bar));
            }
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_update_examples() {
        assert_eq!(gda_update_mu(&[2.0], &[1.0], &[1.0]).unwrap(), 2.0);
        assert_eq!(gda_update_mu(&[3.0, 2.0], &[1.0, 1.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(gda_update_mu(&[1.0, 2.0], &[0.5, 0.5], &[1.0, 2.0]).unwrap(), 2.0);
        assert!(matches!(
            gda_update_mu(&[1.0], &[1.0], &[0.0]),
            Err(Error::NonPositiveDenominator { user: 0, .. })
        ));
    }

    #[test]
    fn scalar_sinr() {
        let h = vec![CVector::from_element(1, C64::new(1.0, 0.0))];
        let beams = BeamformerSet::new(vec![
            CVector::from_element(1, C64::new(2f64.sqrt(), 0.0)),
            CVector::from_element(1, C64::new(1.0, 0.0)),
        ]);
        let rows = vec![h[0].clone(), h[0].clone()];
        let g = sinrs(&rows, &beams, 1.0);
        assert!((g[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_check() {
        assert!(check_simplex(&[0.5, 0.5], 2).is_ok());
        assert!(check_simplex(&[1.0, 0.0], 2).is_err());
        assert!(check_simplex(&[0.6, 0.6], 2).is_err());
        assert!(check_simplex(&[1.0], 2).is_err());
    }
}

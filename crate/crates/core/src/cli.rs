//! Command-line front end.
//!
//! Configuration is a TOML file; every key is optional and falls back to the
//! default listed in `configs/README.md`. `--set section.key=value` overrides
//! are applied to the parsed document before it is checked, so an override
//! wins over the file. Values in `--set` are read as TOML (`fbl.n=512`,
//! `experiment.grid=[0,5]`) and fall back to a plain string.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::architectures::{is_feasible, Architecture};
use crate::channel::{db_to_linear, dbm_to_watts, Geometry, Instance, PathLoss, SystemConfig};
use crate::experiments::{self, ExperimentSpec, OutputFormat, SweepVar};
use crate::fbl::{fbl_rate, FblParams};
use crate::optimizer::{ao_solve, ao_solve_from, certify, AoOutcome, OptimizerConfig, Setup};
use crate::region;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "risrate", version, about = "Max-min rates and rate regions for RIS-aided downlinks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize one channel realization and write its trace.
    Solve(CommonArgs),
    /// Trace a two- or three-user rate-region boundary.
    Region(CommonArgs),
    /// Run a Monte Carlo sweep.
    Experiment(CommonArgs),
    /// Run the built-in self-test battery.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `section.key=value`, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// lp-d, gp-d, gp-bd, rand, none or all.
    #[arg(long)]
    pub arch: Option<String>,
    /// csv or csv+svg.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub tx_antennas: usize,
    pub ris_elements: usize,
    pub users: usize,
    pub power_db: f64,
    pub noise_dbm: f64,
    pub rician_factor: f64,
    /// Used by `solve` and `region`.
    pub architecture: String,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            tx_antennas: 6,
            ris_elements: 20,
            users: 4,
            power_db: 10.0,
            noise_dbm: -90.0,
            rician_factor: 10.0,
            architecture: "gp-bd".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FblSection {
    pub n: u32,
    pub epsilon: f64,
}

impl Default for FblSection {
    fn default() -> Self {
        Self { n: 256, epsilon: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    /// maxmin_vs_power, gain_vs_epsilon, gain_vs_blocklength or vs_elements.
    pub preset: String,
    /// Overrides the preset grid.
    pub grid: Option<Vec<f64>>,
    pub trials: usize,
    pub architectures: Vec<String>,
    /// When true the preset's system parameters replace `[system]` and `[fbl]`.
    pub use_preset_system: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            preset: "maxmin_vs_power".into(),
            grid: None,
            trials: 20,
            architectures: vec!["all".into()],
            use_preset_system: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSection {
    /// Points per simplex edge.
    pub grid: usize,
    /// sinr, rate or both.
    pub mode: String,
}

impl Default for RegionSection {
    fn default() -> Self {
        Self {
            grid: 21,
            mode: "sinr".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: u64,
    pub system: SystemSection,
    pub fbl: FblSection,
    pub geometry: Geometry,
    pub path_loss: PathLoss,
    pub optimizer: OptimizerConfig,
    pub experiment: ExperimentSection,
    pub region: RegionSection,
}

fn config_err(key: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Applies one `a.b.c=value` override to a TOML document.
pub fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| config_err(spec, "override must look like section.key=value"))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(config_err(key, "empty key segment"));
    }
    let mut table = doc;
    for p in &parts[..parts.len() - 1] {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| config_err(key, format!("`{p}` is not a section")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), parse_override_value(raw.trim()));
    Ok(())
}

/// Parses a TOML document, applies overrides and checks every range.
pub fn load_config(text: &str, overrides: &[String]) -> Result<FileConfig> {
    let mut doc: toml::Table = toml::from_str(text).map_err(|e| config_err("<file>", e.message().to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: FileConfig = toml::Value::Table(doc)
        .try_into()
        .map_err(|e: toml::de::Error| config_err("<file>", e.message().to_string()))?;
    cfg.check()?;
    Ok(cfg)
}

impl FileConfig {
    pub fn system_config(&self) -> SystemConfig {
        SystemConfig {
            num_tx_antennas: self.system.tx_antennas,
            num_ris_elements: self.system.ris_elements,
            num_users: self.system.users,
            power_budget: db_to_linear(self.system.power_db),
            noise_power: dbm_to_watts(self.system.noise_dbm),
            block_length: self.fbl.n,
            error_prob: self.fbl.epsilon,
            rician_factor: self.system.rician_factor,
            geometry: self.geometry,
            path_loss: self.path_loss,
            rng_seed: self.seed,
        }
    }

    fn check(&self) -> Result<()> {
        let range = |key: &str, ok: bool, bound: &str| {
            if ok {
                Ok(())
            } else {
                Err(config_err(key, format!("must be {bound}")))
            }
        };
        range("fbl.epsilon", self.fbl.epsilon > 0.0 && self.fbl.epsilon < 0.5, "in (0, 0.5)")?;
        range("fbl.n", self.fbl.n >= 1, ">= 1")?;
        range("system.tx_antennas", self.system.tx_antennas >= 1, ">= 1")?;
        range("system.ris_elements", self.system.ris_elements >= 1, ">= 1")?;
        range("system.users", self.system.users >= 1, ">= 1")?;
        range("system.power_db", self.system.power_db.is_finite(), "finite")?;
        range("system.noise_dbm", self.system.noise_dbm.is_finite(), "finite")?;
        range("system.rician_factor", self.system.rician_factor >= 0.0, ">= 0")?;
        range("experiment.trials", self.experiment.trials >= 1, ">= 1")?;
        range("region.grid", self.region.grid >= 1, ">= 1")?;
        range(
            "region.mode",
            matches!(self.region.mode.as_str(), "sinr" | "rate" | "both"),
            "sinr, rate or both",
        )?;
        parse_arch_list(&self.system.architecture).map_err(|e| config_err("system.architecture", e.to_string()))?;
        for a in &self.experiment.architectures {
            parse_arch_list(a).map_err(|e| config_err("experiment.architectures", e.to_string()))?;
        }
        preset(&self.experiment.preset)?;
        self.system_config().validate().map_err(as_config)?;
        self.optimizer.validate(self.system.users).map_err(as_config)?;
        Ok(())
    }

    /// The experiment described by `[experiment]` on top of its preset.
    pub fn experiment_spec(&self) -> Result<ExperimentSpec> {
        let mut spec = preset(&self.experiment.preset)?;
        if !self.experiment.use_preset_system {
            spec.system = self.system_config();
            if spec.sweep == SweepVar::PowerDb {
                spec.system.power_budget = db_to_linear(0.0);
            }
        } else {
            spec.system.geometry = self.geometry;
            spec.system.path_loss = self.path_loss;
        }
        if let Some(g) = &self.experiment.grid {
            spec.grid = g.clone();
        }
        spec.trials = self.experiment.trials;
        spec.base_seed = self.seed;
        spec.optimizer = self.optimizer.clone();
        let mut archs = Vec::new();
        for a in &self.experiment.architectures {
            for x in parse_arch_list(a)? {
                if !archs.contains(&x) {
                    archs.push(x);
                }
            }
        }
        spec.architectures = archs;
        spec.validate().map_err(as_config)?;
        Ok(spec)
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => config_err(name, reason),
        other => other,
    }
}

fn preset(name: &str) -> Result<ExperimentSpec> {
    match name {
        "maxmin_vs_power" => Ok(ExperimentSpec::maxmin_vs_power()),
        "gain_vs_epsilon" => Ok(ExperimentSpec::gain_vs_epsilon()),
        "gain_vs_blocklength" => Ok(ExperimentSpec::gain_vs_blocklength()),
        "vs_elements" => Ok(ExperimentSpec::vs_elements()),
        other => Err(config_err(
            "experiment.preset",
            format!("`{other}` is not one of maxmin_vs_power, gain_vs_epsilon, gain_vs_blocklength, vs_elements"),
        )),
    }
}

/// `all` or a single architecture name.
pub fn parse_arch_list(s: &str) -> Result<Vec<Architecture>> {
    if s == "all" {
        Ok(Architecture::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

fn hash_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn load(args: &CommonArgs) -> Result<FileConfig> {
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| config_err("--config", format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let mut overrides = args.overrides.clone();
    if let Some(s) = args.seed {
        overrides.push(format!("seed={s}"));
    }
    if let Some(t) = args.trials {
        overrides.push(format!("experiment.trials={t}"));
    }
    if let Some(a) = &args.arch {
        parse_arch_list(a).map_err(|e| config_err("--arch", e.to_string()))?;
        overrides.push(format!("system.architecture=\"{a}\""));
        overrides.push(format!("experiment.architectures=[\"{a}\"]"));
    }
    load_config(&text, &overrides)
}

fn output_format(args: &CommonArgs) -> Result<OutputFormat> {
    match &args.format {
        None => Ok(OutputFormat::CsvSvg),
        Some(f) => f.parse().map_err(|e: Error| config_err("--format", e.to_string())),
    }
}

#[derive(Debug, Serialize)]
struct SolveSummary<'a> {
    architecture: Architecture,
    seed: u64,
    config_hash: String,
    status: String,
    outer_iterations: usize,
    min_sinr: f64,
    max_min_rate_nats: f64,
    sinrs: &'a [f64],
    certification_issues: Vec<String>,
    config: &'a FileConfig,
}

fn cmd_solve(args: &CommonArgs) -> Result<i32> {
    let cfg = load(args)?;
    let system = cfg.system_config();
    let fbl = system.fbl_params()?;
    let instance = Instance::draw(&system, cfg.seed)?;
    let setup = Setup::new(&instance.channels, &system)?;
    let hash = hash_hex(toml::to_string(&cfg).map_err(|e| Error::Solver(e.to_string()))?.as_bytes());
    std::fs::create_dir_all(&args.out)?;
    let opt = OptimizerConfig {
        seed: cfg.seed,
        ..cfg.optimizer.clone()
    };
    let mut failed = false;
    for arch in parse_arch_list(&cfg.system.architecture)? {
        let out = ao_solve(&setup, arch, &opt)?;
        let issues = certify(&out, &setup);
        let rate = fbl_rate(out.min_sinr, &fbl).max(0.0);
        if args.verbose {
            for r in &out.trace.records {
                eprintln!(
                    "{arch} outer={} inner={} block={} mu={:.6e} min_sinr={:.6e} status={}",
                    r.outer_iter, r.inner_iter, r.block, r.mu, r.min_sinr, r.solver_status
                );
            }
        }
        out.trace
            .write_csv(std::fs::File::create(args.out.join(format!("trace_{arch}.csv")))?)?;
        let summary = SolveSummary {
            architecture: arch,
            seed: cfg.seed,
            config_hash: hash.clone(),
            status: format!("{:?}", out.status),
            outer_iterations: out.outer_iterations,
            min_sinr: out.min_sinr,
            max_min_rate_nats: rate,
            sinrs: &out.sinrs,
            certification_issues: issues.clone(),
            config: &cfg,
        };
        std::fs::write(
            args.out.join(format!("solve_{arch}.json")),
            serde_json::to_string_pretty(&summary)?,
        )?;
        println!(
            "{arch}: status={:?} outer={} min_sinr={:.6e} rate={:.6} nats hash={hash} seed={}",
            out.status, out.outer_iterations, out.min_sinr, rate, cfg.seed
        );
        if out.is_infeasible() || !issues.is_empty() {
            for i in &issues {
                eprintln!("error: kind=certification arch={arch} detail={i:?}");
            }
            failed = true;
        }
    }
    Ok(if failed { EXIT_RUNTIME } else { EXIT_OK })
}

fn cmd_region(args: &CommonArgs) -> Result<i32> {
    let cfg = load(args)?;
    let system = cfg.system_config();
    if !(2..=3).contains(&system.num_users) {
        return Err(config_err("system.users", "region tracing needs 2 or 3 users"));
    }
    let fbl = system.fbl_params()?;
    let instance = Instance::draw(&system, cfg.seed)?;
    let setup = Setup::new(&instance.channels, &system)?;
    std::fs::create_dir_all(&args.out)?;
    let opt = OptimizerConfig {
        seed: cfg.seed,
        ..cfg.optimizer.clone()
    };
    let format = output_format(args)?;
    for arch in parse_arch_list(&cfg.system.architecture)? {
        let mut runs = Vec::new();
        if matches!(cfg.region.mode.as_str(), "sinr" | "both") {
            runs.push(("sinr", region::rate_region_boundary(&setup, arch, cfg.region.grid, &opt, &fbl)?));
        }
        if matches!(cfg.region.mode.as_str(), "rate" | "both") {
            runs.push(("rate", region::rate_profile_boundary(&setup, arch, cfg.region.grid, &opt, &fbl)?));
        }
        for (mode, points) in runs {
            let stem = format!("region_{mode}_{arch}");
            region::write_region_csv(&points, std::fs::File::create(args.out.join(format!("{stem}.csv")))?)?;
            if format == OutputFormat::CsvSvg {
                let title = format!("{arch} {mode} profile, seed {}", cfg.seed);
                std::fs::write(args.out.join(format!("{stem}.svg")), region::region_svg(&points, &title))?;
            }
            println!("{arch} {mode}: {} boundary points", points.len());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_experiment(args: &CommonArgs) -> Result<i32> {
    let cfg = load(args)?;
    let spec = cfg.experiment_spec()?;
    let format = output_format(args)?;
    let result = experiments::run_experiment(&spec)?;
    let files = experiments::aggregate_and_emit(&result, &args.out, format)?;
    let mut stdout = std::io::stdout().lock();
    for r in &result.rows {
        writeln!(
            stdout,
            "{} {}={} {}: rate={:.6} se={:.6} trials={} failures={}",
            r.experiment, r.sweep_var, r.sweep_value, r.architecture, r.mean_maxmin_rate_nats, r.stderr, r.trials, r.failures
        )?;
    }
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(EXIT_OK)
}

/// One self-test outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn canned_system() -> SystemConfig {
    SystemConfig {
        num_tx_antennas: 3,
        num_ris_elements: 4,
        num_users: 2,
        ..SystemConfig::default()
    }
    .normalized()
}

fn threshold_check() -> Check {
    let mut worst = 0.0f64;
    for &(n, eps) in &[(64u32, 1e-9), (256, 1e-5), (1024, 1e-3), (4096, 0.3)] {
        let p = FblParams::new(n, eps).expect("valid parameters");
        let f = |g: f64| fbl_rate(g, &p);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let a = lo + (hi - lo) / 3.0;
            let b = hi - (hi - lo) / 3.0;
            if f(a) < f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let closed = 0.5 * ((1.0 + 2.0 * p.c * p.c).sqrt() - 1.0);
        worst = worst.max((0.5 * (lo + hi) - closed).abs()).max((p.gamma_bar - closed).abs());
    }
    Check {
        name: "threshold_formula",
        passed: worst < 1e-6,
        detail: format!("max deviation {worst:.3e}"),
    }
}

fn solve_checks() -> Result<Vec<Check>> {
    let system = canned_system();
    let instance = Instance::draw(&system, 7)?;
    let setup = Setup::new(&instance.channels, &system)?;
    let opt = OptimizerConfig::default();
    let lp = ao_solve(&setup, Architecture::LpDiagonal, &opt)?;
    let gpd = ao_solve_from(&setup, Architecture::GpDiagonal, &opt, lp.beams.clone(), lp.ris.phi.clone())?;
    let gpbd = ao_solve_from(&setup, Architecture::GpBeyondDiagonal, &opt, gpd.beams.clone(), gpd.ris.phi.clone())?;
    let mut checks = Vec::new();
    let mut feas = Vec::new();
    for o in [&lp, &gpd, &gpbd] {
        let report = is_feasible(&o.ris, &instance.channels.bs_ris, &o.beams, 1e-6);
        if !report.feasible {
            feas.push(format!("{}: {report}", o.ris.architecture));
        }
        feas.extend(certify(o, &setup));
    }
    checks.push(Check {
        name: "passivity_and_constraints",
        passed: feas.is_empty(),
        detail: if feas.is_empty() { "all three solutions feasible".into() } else { feas.join("; ") },
    });
    let tol = 1e-6;
    checks.push(Check {
        name: "feasible_set_nesting",
        passed: gpd.min_sinr >= lp.min_sinr - tol && gpbd.min_sinr >= gpd.min_sinr - tol,
        detail: format!("lp-d {:.6e} gp-d {:.6e} gp-bd {:.6e}", lp.min_sinr, gpd.min_sinr, gpbd.min_sinr),
    });
    let ascent = |o: &AoOutcome| {
        let mu_ok = o
            .trace
            .mu_sequences()
            .iter()
            .all(|s| s.windows(2).all(|w| w[1] >= w[0] - 1e-8 * w[0].abs().max(1.0)));
        let outer = o.trace.outer_min_sinrs();
        let outer_ok = outer.windows(2).all(|w| w[1] >= w[0] - 1e-6 * w[0].abs().max(1.0));
        mu_ok && outer_ok
    };
    checks.push(Check {
        name: "dinkelbach_ascent",
        passed: [&lp, &gpd, &gpbd].iter().all(|o| ascent(o)),
        detail: "inner mu and outer min-SINR sequences nondecreasing".into(),
    });
    Ok(checks)
}

/// The self-test battery behind `validate`.
pub fn self_tests() -> Vec<Check> {
    let mut checks = vec![threshold_check()];
    match solve_checks() {
        Ok(c) => checks.extend(c),
        Err(e) => checks.push(Check {
            name: "canned_solve",
            passed: false,
            detail: e.to_string(),
        }),
    }
    checks
}

fn cmd_validate(args: &CommonArgs) -> Result<i32> {
    load(args)?;
    let checks = self_tests();
    let mut ok = true;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        ok &= c.passed;
    }
    Ok(if ok { EXIT_OK } else { EXIT_RUNTIME })
}

/// Exit code for an error: configuration problems are 2, everything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::InvalidParameter { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

/// One machine-parsable line: `error: kind=<config|runtime> key=<key> message=<quoted>`.
pub fn error_line(e: &Error) -> String {
    let kind = if exit_code(e) == EXIT_CONFIG { "config" } else { "runtime" };
    let key = match e {
        Error::Config { key, .. } => key.clone(),
        Error::InvalidParameter { name, .. } => name.to_string(),
        _ => "-".into(),
    };
    format!("error: kind={kind} key={key} message={:?}", e.to_string())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Region(a) => cmd_region(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

/// Parses `argv` and runs it; clap usage errors map to exit code 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

/// Reads a config file the same way the binary does.
pub fn load_config_file(path: &Path, overrides: &[String]) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err("--config", format!("{}: {e}", path.display())))?;
    load_config(&text, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = load_config("", &[]).unwrap();
        assert_eq!(cfg, FileConfig::default());
        let s = cfg.system_config();
        assert_eq!((s.num_tx_antennas, s.num_ris_elements, s.block_length), (6, 20, 256));
    }

    #[test]
    fn override_beats_file() {
        let cfg = load_config("[fbl]\nn = 128\n", &["fbl.n=512".into()]).unwrap();
        assert_eq!(cfg.fbl.n, 512);
    }

    #[test]
    fn epsilon_out_of_range_is_config_error() {
        let e = load_config("[fbl]\nepsilon = 0.7\n", &[]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONFIG);
        assert!(error_line(&e).contains("key=fbl.epsilon"), "{}", error_line(&e));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = load_config("[system]\nantennas = 3\n", &[]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONFIG);
        assert!(e.to_string().contains("antennas"));
    }

    #[test]
    fn string_override_falls_back() {
        let cfg = load_config("", &["system.architecture=lp-d".into()]).unwrap();
        assert_eq!(cfg.system.architecture, "lp-d");
    }
}

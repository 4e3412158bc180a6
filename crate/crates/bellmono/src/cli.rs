//! Command-line driver. Sites and qubits are 1-based on the command line.
//!
//! Exit status: 0 on success, 1 when a computation or input file fails a
//! check, 2 when the arguments are unusable.

use std::path::PathBuf;
use std::sync::Arc;

use bellmono_core::chsh::{self, horodecki_max, oracle_max};
use bellmono_core::qstate::{correlation_matrix, TwoQubitState};
use bellmono_core::random::{random_pure_state, EnsembleKind, RandomEnsemble};
use bellmono_core::sampling::{
    convergence_table, decade_checkpoints, run_sampling, SamplingConfig,
};
use bellmono_core::spinchain::{
    ground_state, sweep, uniform_grid, ChainSpec, SectorBasis, SolverKind, SolverOptions,
    SweepOptions,
};
use bellmono_core::{Complex64, BOUND_TOL, TSIRELSON};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::io::{self, FormatError};
use crate::Pool;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid --{flag}: {detail}")]
    Usage { flag: &'static str, detail: String },
    #[error(transparent)]
    Domain(#[from] bellmono_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("verification failed: {}", .0.join(", "))]
    Verify(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

fn usage(flag: &'static str, detail: impl ToString) -> CliError {
    CliError::Usage {
        flag,
        detail: detail.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bellmono",
    version,
    about = "Maximal CHSH correlations, Bell monogamy and dimerized Heisenberg rings"
)]
pub struct Cli {
    /// Worker threads for the parallel kernels (default: one per CPU).
    #[arg(long, global = true, env = "BELLMONO_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep J2/J1 on a dimerized ring and emit B12, B23 and their sum of squares as CSV.
    Sweep(SweepArgs),
    /// Maximal Bell value of one pair, from a chain ground state or a state file.
    Bell(BellArgs),
    /// Sample random pure states and accumulate the summed squared Bell values.
    Random(RandomArgs),
    /// Running means of the summed squared Bell values for several N.
    Table1(Table1Args),
    /// Direction-search maximum of a two-qubit state file.
    Oracle(OracleArgs),
    /// Run the cross-module property checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverChoice {
    Auto,
    Power,
    Lanczos,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverChoice,
    /// Residual norm ‖Hv − Ev‖ required for convergence.
    #[arg(long, default_value_t = 1e-8)]
    pub residual_tol: f64,
    /// Operator-application budget per ground state.
    #[arg(long, default_value_t = 200_000)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions, CliError> {
        let opts = SolverOptions {
            kind: match self.solver {
                SolverChoice::Auto => SolverKind::Auto,
                SolverChoice::Power => SolverKind::Power,
                SolverChoice::Lanczos => SolverKind::Lanczos,
            },
            residual_tol: self.residual_tol,
            max_iter: self.max_iter,
            ..SolverOptions::default()
        };
        opts.validate()
            .map_err(|e| usage("residual-tol/max-iter", e))?;
        Ok(opts)
    }
}

/// `lo:hi:count`, inclusive and evenly spaced.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.lo, self.hi, self.count).expect("validated on parse")
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(format!("expected lo:hi:count, got {s:?}"));
    };
    let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    let count: usize = count.trim().parse().map_err(|e| format!("count: {e}"))?;
    uniform_grid(lo, hi, count).map_err(|e| e.to_string())?;
    Ok(GridSpec { lo, hi, count })
}

/// `i,j` with 1-based indices.
fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let i: usize = i.trim().parse().map_err(|e| format!("i: {e}"))?;
    let j: usize = j.trim().parse().map_err(|e| format!("j: {e}"))?;
    if i == 0 || j == 0 {
        return Err("indices are 1-based".into());
    }
    if i == j {
        return Err(format!("the two indices must differ (both {i})"));
    }
    Ok((i - 1, j - 1))
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of sites (even, 4..=24).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "-1:3:161", value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Solve every point from the Néel start instead of the previous point.
    #[arg(long)]
    pub cold: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["n", "state"])))]
pub struct BellArgs {
    /// Number of ring sites.
    #[arg(long, requires_all = ["j2", "pair"])]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub j2: Option<f64>,
    /// Sites `i,j`, 1-based.
    #[arg(long, value_parser = parse_pair)]
    pub pair: Option<(usize, usize)>,
    /// Two-qubit state JSON instead of a chain.
    #[arg(long, conflicts_with_all = ["n", "j2", "pair"])]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleChoice {
    Complex,
    Real,
}

impl From<EnsembleChoice> for EnsembleKind {
    fn from(e: EnsembleChoice) -> Self {
        match e {
            EnsembleChoice::Complex => EnsembleKind::ComplexHaar,
            EnsembleChoice::Real => EnsembleKind::RealOrthogonal,
        }
    }
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    /// Number of qubits (3..=8).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, value_enum, default_value = "complex")]
    pub ensemble: EnsembleChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Histogram CSV path.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// Summary JSON path (stdout when absent).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleSet {
    Both,
    Complex,
    Real,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Samples per N; running means are taken at 100, 1000, ... and here.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value = "both")]
    pub ensemble: EnsembleSet,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = chsh::ORACLE_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = chsh::ORACLE_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random states per N and ensemble for the monogamy check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => io::write_atomic(path, contents.as_bytes())?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn pool(workers: Option<usize>) -> Result<Pool, CliError> {
    if workers == Some(0) {
        return Err(usage("workers", "must be at least 1"));
    }
    Pool::new(workers).map_err(|e| usage("workers", e))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sweep(a) => run_sweep(a, cli.workers),
        Command::Bell(a) => run_bell(a, cli.workers),
        Command::Random(a) => run_random(a, cli.workers),
        Command::Table1(a) => run_table1(a, cli.workers),
        Command::Oracle(a) => run_oracle(a),
        Command::Verify(a) => run_verify(a, cli.workers),
    }
}

fn run_sweep(a: &SweepArgs, workers: Option<usize>) -> Result<(), CliError> {
    ChainSpec::new(a.n, 1.0, 0.0).map_err(|e| usage("n", e))?;
    let opts = SweepOptions {
        solver: a.solver.options()?,
        warm_start: !a.cold,
    };
    let exec = pool(workers)?;
    let result = sweep(a.n, &a.grid.points(), &opts, &exec)?;
    let flagged = result
        .points
        .iter()
        .filter(|p| p.flag_label() != "ok")
        .count();
    if flagged > 0 {
        eprintln!("bellmono: {flagged} grid point(s) flagged, see the flags column");
    }
    emit(a.out.as_ref(), &io::sweep_csv(&result))
}

fn run_bell(a: &BellArgs, workers: Option<usize>) -> Result<(), CliError> {
    let value = if let Some(path) = &a.state {
        let state = io::read_state(path)?;
        horodecki_max(&correlation_matrix(&state)?)
    } else {
        let (n, j2, (i, j)) = (
            a.n.expect("clap group"),
            a.j2.expect("requires"),
            a.pair.expect("requires"),
        );
        let spec = ChainSpec::new(n, a.j1, j2).map_err(|e| usage("n/j1/j2", e))?;
        if i.max(j) >= n {
            return Err(usage("pair", format!("sites must be in 1..={n}")));
        }
        let opts = a.solver.options()?;
        let exec = pool(workers)?;
        let basis = Arc::new(SectorBasis::new(n)?);
        let gs = ground_state(spec, basis, &opts, &exec, None)?;
        if gs.flags.max_iter_exceeded {
            eprintln!(
                "bellmono: ground state did not converge (residual {:e})",
                gs.residual
            );
        }
        if gs.flags.possibly_degenerate {
            eprintln!("bellmono: ground state possibly degenerate, correlators depend on the start vector");
        }
        gs.pair_bell(i, j)?
    };
    emit(a.out.as_ref(), &io::bell_to_json(&value))
}

fn sampling_config(
    n: usize,
    samples: u64,
    kind: EnsembleKind,
    seed: u64,
    bins: usize,
) -> Result<SamplingConfig, CliError> {
    let cfg = SamplingConfig {
        bins,
        ..SamplingConfig::new(n, samples, kind, seed)
    };
    cfg.validate().map_err(|e| usage("n/samples/bins", e))?;
    Ok(cfg)
}

fn run_random(a: &RandomArgs, workers: Option<usize>) -> Result<(), CliError> {
    let cfg = sampling_config(a.n, a.samples, a.ensemble.into(), a.seed, a.bins)?;
    let exec = pool(workers)?;
    let stats = run_sampling(&cfg, &exec)?;
    if let Some(path) = &a.histogram {
        io::write_atomic(path, io::histogram_csv(&stats).as_bytes())?;
    }
    emit(a.summary.as_ref(), &io::summary_json(&stats))
}

fn run_table1(a: &Table1Args, workers: Option<usize>) -> Result<(), CliError> {
    if a.n.is_empty() {
        return Err(usage("n", "at least one qubit count"));
    }
    for &n in &a.n {
        sampling_config(n, a.samples, EnsembleKind::ComplexHaar, a.seed, 100)?;
    }
    let kinds: &[EnsembleKind] = match a.ensemble {
        EnsembleSet::Both => &[EnsembleKind::ComplexHaar, EnsembleKind::RealOrthogonal],
        EnsembleSet::Complex => &[EnsembleKind::ComplexHaar],
        EnsembleSet::Real => &[EnsembleKind::RealOrthogonal],
    };
    let mut checkpoints: Vec<u64> = decade_checkpoints(a.samples)
        .into_iter()
        .filter(|&c| c >= 100)
        .collect();
    if checkpoints.last() != Some(&a.samples) {
        checkpoints.push(a.samples);
    }
    let exec = pool(workers)?;
    let tables = kinds
        .iter()
        .map(|&k| {
            convergence_table(
                &a.n,
                &checkpoints,
                RandomEnsemble::new(k, a.seed),
                100,
                &exec,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    emit(a.out.as_ref(), &io::convergence_csv(&tables))
}

fn run_oracle(a: &OracleArgs) -> Result<(), CliError> {
    if a.restarts == 0 {
        return Err(usage("restarts", "must be at least 1"));
    }
    if !(a.tol > 0.0) {
        return Err(usage("tol", "must be positive"));
    }
    let state = io::read_state(&a.state)?;
    let outcome = oracle_max(&correlation_matrix(&state)?, a.restarts, a.tol, a.seed)?;
    if !outcome.converged {
        eprintln!(
            "bellmono: oracle hit the iteration cap after {} iterations, reporting the best value found",
            outcome.iterations
        );
    }
    emit(a.out.as_ref(), &io::bell_to_json(&outcome.bell))
}

#[derive(Debug, Serialize)]
struct CheckResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    passed: bool,
    failures: Vec<&'static str>,
    checks: Vec<CheckResult>,
}

fn check(name: &'static str, outcome: Result<(bool, String), bellmono_core::Error>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Mixture `0.5 ψ₁ + 0.3 ψ₂ + 0.2 ψ₃` of three random two-qubit pure states.
pub fn random_mixed_state(
    ensemble: &RandomEnsemble,
    index: u64,
) -> bellmono_core::Result<TwoQubitState> {
    let pure = |k: u64| -> bellmono_core::Result<TwoQubitState> {
        let s = random_pure_state(2, ensemble, 3 * index + k)?;
        let a = s.amplitudes();
        let psi: [Complex64; 4] = [a[0], a[1], a[2], a[3]];
        TwoQubitState::pure(psi)
    };
    let (p0, p1, p2) = (pure(0)?, pure(1)?, pure(2)?);
    TwoQubitState::mixture(&[(0.5, &p0), (0.3, &p1), (0.2, &p2)])
}

fn verify_oracle(seed: u64) -> bellmono_core::Result<(bool, String)> {
    let ens = RandomEnsemble::new(EnsembleKind::ComplexHaar, seed);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let t = correlation_matrix(&random_mixed_state(&ens, k)?)?;
        let oracle = oracle_max(
            &t,
            chsh::ORACLE_RESTARTS,
            chsh::ORACLE_TOL,
            seed.wrapping_add(k),
        )?;
        worst = worst.max((oracle.bell.value - horodecki_max(&t).value).abs());
    }
    let singlet = TwoQubitState::pure([
        Complex64::new(0.0, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, 0.0),
    ])?;
    let t = correlation_matrix(&singlet)?;
    let closed = horodecki_max(&t).value;
    let oracle = oracle_max(&t, chsh::ORACLE_RESTARTS, chsh::ORACLE_TOL, seed)?
        .bell
        .value;
    let singlet_gap = (closed - TSIRELSON).abs().max((oracle - TSIRELSON).abs());
    Ok((
        worst <= 1e-5 && singlet_gap <= 1e-6,
        format!("max |oracle - closed form| = {worst:e} over 100 mixed states; singlet off 2√2 by {singlet_gap:e}"),
    ))
}

fn verify_monogamy(samples: u64, seed: u64, exec: &Pool) -> bellmono_core::Result<(bool, String)> {
    let mut min_slack = f64::INFINITY;
    for kind in [EnsembleKind::ComplexHaar, EnsembleKind::RealOrthogonal] {
        for n in 3..=6 {
            let stats = run_sampling(&SamplingConfig::new(n, samples, kind, seed), exec)?;
            min_slack = min_slack.min(stats.bound - stats.max);
        }
    }
    Ok((
        min_slack >= -BOUND_TOL,
        format!("{samples} states per N in 3..=6 per ensemble, smallest slack {min_slack:e}"),
    ))
}

fn verify_uniform_ring(exec: &Pool) -> bellmono_core::Result<(bool, String)> {
    let mut ok = true;
    let mut witness: f64 = 0.0;
    let mut detail = Vec::new();
    for n in [8, 12] {
        let spec = ChainSpec::new(n, 1.0, 1.0)?;
        let gs = ground_state(
            spec,
            Arc::new(SectorBasis::new(n)?),
            &SolverOptions::default(),
            exec,
            None,
        )?;
        let report = gs.distance_scan(true)?;
        ok &= report.passed();
        let worst = report
            .entries
            .iter()
            .filter(|e| e.asserted)
            .map(|e| e.value)
            .fold(f64::NEG_INFINITY, f64::max);
        witness = report
            .entries
            .iter()
            .filter(|e| e.asserted && e.within_bound)
            .map(|e| e.concurrence)
            .fold(witness, f64::max);
        detail.push(format!("N={n}: max B = {}", io::fmt_sig(worst)));
    }
    Ok((
        ok && witness > 0.05,
        format!(
            "{}; largest concurrence of a local pair {}",
            detail.join(", "),
            io::fmt_sig(witness)
        ),
    ))
}

fn verify_sweep(exec: &Pool) -> bellmono_core::Result<((bool, String), (bool, String))> {
    let grid = uniform_grid(-1.0, 3.0, 41)?;
    let result = sweep(8, &grid, &SweepOptions::default(), exec)?;
    let max_bs = result.max_bs();
    let max_gap = result
        .points
        .iter()
        .map(|p| p.closed_form_gap)
        .fold(0.0, f64::max);
    let flagged = result.points.iter().filter(|p| p.error.is_some()).count();
    Ok((
        (
            result.monogamy_holds(),
            format!(
                "N=8, 41 points on [-1, 3]: max B12² + B23² = {}",
                io::fmt_sig(max_bs)
            ),
        ),
        (
            flagged == 0 && max_gap <= bellmono_core::spinchain::CLOSED_FORM_TOL,
            format!("max |2√2|tzz| - general| = {max_gap:e}"),
        ),
    ))
}

fn run_verify(a: &VerifyArgs, workers: Option<usize>) -> Result<(), CliError> {
    if a.samples == 0 {
        return Err(usage("samples", "must be at least 1"));
    }
    let exec = pool(workers)?;
    let mut checks = vec![
        check("oracle-equivalence", verify_oracle(a.seed)),
        check(
            "random-state-monogamy",
            verify_monogamy(a.samples, a.seed, &exec),
        ),
        check("uniform-ring-scan", verify_uniform_ring(&exec)),
    ];
    match verify_sweep(&exec) {
        Ok((mono, closed)) => {
            checks.push(check("chain-sweep-monogamy", Ok(mono)));
            checks.push(check("chain-closed-form", Ok(closed)));
        }
        Err(e) => {
            checks.push(check("chain-sweep-monogamy", Err(e.clone())));
            checks.push(check("chain-closed-form", Err(e)));
        }
    }
    let failures: Vec<&'static str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let report = VerifyReport {
        passed: failures.is_empty(),
        failures: failures.clone(),
        checks,
    };
    emit(
        a.out.as_ref(),
        &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"),
    )?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(
            failures.into_iter().map(String::from).collect(),
        ))
    }
}

/// Parses `std::env::args`, runs the command and returns the exit status.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bellmono: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_pair_parsing() {
        assert_eq!(
            parse_grid("-1:3:161").unwrap(),
            GridSpec {
                lo: -1.0,
                hi: 3.0,
                count: 161
            }
        );
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:x").is_err());
        assert_eq!(parse_pair("1,2").unwrap(), (0, 1));
        assert!(parse_pair("0,2").is_err());
        assert!(parse_pair("3,3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

//! Experiment driver: runs a problems-by-solvers grid under a shared
//! evaluation budget and writes traces, data profiles and gain tables.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::bench::problems::{standard_suite, TestProblem};
use crate::bench::profile::{
    data_profile, evals_to_converge, DataProfile, FiveNumberSummary, ProfileTable,
};
use crate::bench::svg;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::solver::{eta, solve_accelerated, solve_base, FamilySpec};
use crate::surrogate::nn::Activation;
use crate::surrogate::rbf::RbfKernel;
use crate::trace::SolverTrace;

/// The five comparable solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Base,
    RbfSobolev,
    RbfPlain,
    NnSobolev,
    NnPlain,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Base,
        SolverKind::RbfSobolev,
        SolverKind::RbfPlain,
        SolverKind::NnSobolev,
        SolverKind::NnPlain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Base => "base",
            SolverKind::RbfSobolev => "rbf-sobolev",
            SolverKind::RbfPlain => "rbf-plain",
            SolverKind::NnSobolev => "nn-sobolev",
            SolverKind::NnPlain => "nn-plain",
        }
    }

    pub fn is_accelerated(self) -> bool {
        !matches!(self, SolverKind::Base)
    }

    fn family(self, kernel: RbfKernel, activation: Activation) -> Option<FamilySpec> {
        match self {
            SolverKind::Base => None,
            SolverKind::RbfSobolev => Some(FamilySpec::Rbf {
                kernel,
                sobolev: true,
            }),
            SolverKind::RbfPlain => Some(FamilySpec::Rbf {
                kernel,
                sobolev: false,
            }),
            SolverKind::NnSobolev => Some(FamilySpec::Nn {
                activation,
                sobolev: true,
            }),
            SolverKind::NnPlain => Some(FamilySpec::Nn {
                activation,
                sobolev: false,
            }),
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown solver '{s}'")))
    }
}

/// Full experiment specification.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Problem names to run; empty means the whole standard suite.
    pub problems: Vec<String>,
    pub solvers: Vec<SolverKind>,
    /// Per-problem budget in simplex gradients (`budget_simplex * (n + 1)`
    /// evaluations).
    pub budget_simplex: usize,
    pub seed: u64,
    pub tau: f64,
    pub kernel: RbfKernel,
    pub activation: Activation,
    /// Overrides applied on top of `SolverConfig::for_dimension`.
    pub sigma0: Option<f64>,
    pub sigma_min: Option<f64>,
    pub epsilon: Option<f64>,
    pub rho: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub cap_values: Option<usize>,
    pub cap_grads: Option<usize>,
    pub max_inner_halvings: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problems: Vec::new(),
            solvers: SolverKind::ALL.to_vec(),
            budget_simplex: 100,
            seed: 42,
            tau: 1e-4,
            kernel: RbfKernel::Gaussian,
            activation: Activation::Softplus,
            sigma0: None,
            sigma_min: None,
            epsilon: None,
            rho: None,
            gamma: None,
            lambda: None,
            cap_values: None,
            cap_grads: None,
            max_inner_halvings: None,
        }
    }
}

impl ExperimentConfig {
    /// Parses the flat `key = value` configuration format. `#` starts a
    /// comment; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidConfig(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidConfig(format!("line {}: bad {what} '{value}'", lineno + 1))
            };
            match key {
                "problems" => {
                    cfg.problems = if value == "all" {
                        Vec::new()
                    } else {
                        value.split(',').map(|s| s.trim().to_string()).collect()
                    };
                }
                "solvers" => {
                    cfg.solvers = value
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<Vec<_>>>()?;
                }
                "budget_simplex" => {
                    cfg.budget_simplex = value.parse().map_err(|_| bad("integer"))?
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad("integer"))?,
                "tau" => cfg.tau = value.parse().map_err(|_| bad("number"))?,
                "kernel" => cfg.kernel = value.parse()?,
                "activation" => cfg.activation = value.parse()?,
                "sigma0" => cfg.sigma0 = Some(value.parse().map_err(|_| bad("number"))?),
                "sigma_min" => cfg.sigma_min = Some(value.parse().map_err(|_| bad("number"))?),
                "epsilon" => cfg.epsilon = Some(value.parse().map_err(|_| bad("number"))?),
                "rho" => cfg.rho = Some(value.parse().map_err(|_| bad("number"))?),
                "gamma" => cfg.gamma = Some(value.parse().map_err(|_| bad("number"))?),
                "lambda" => cfg.lambda = Some(value.parse().map_err(|_| bad("number"))?),
                "cap_values" => {
                    cfg.cap_values = Some(value.parse().map_err(|_| bad("integer"))?)
                }
                "cap_grads" => cfg.cap_grads = Some(value.parse().map_err(|_| bad("integer"))?),
                "max_inner_halvings" => {
                    cfg.max_inner_halvings = Some(value.parse().map_err(|_| bad("integer"))?)
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )));
                }
            }
        }
        if cfg.solvers.is_empty() {
            return Err(Error::InvalidConfig("no solvers selected".into()));
        }
        if cfg.budget_simplex == 0 {
            return Err(Error::InvalidConfig("budget_simplex must be positive".into()));
        }
        if !(cfg.tau > 0.0 && cfg.tau < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tau must be in (0, 1), got {}",
                cfg.tau
            )));
        }
        Ok(cfg)
    }

    fn solver_config(&self, n: usize) -> SolverConfig {
        let mut sc = SolverConfig::for_dimension(n);
        if let Some(v) = self.sigma0 {
            sc.sigma0 = v;
        }
        if let Some(v) = self.sigma_min {
            sc.sigma_min = v;
        }
        if let Some(v) = self.epsilon {
            sc.epsilon = v;
        }
        if let Some(v) = self.rho {
            sc.rho = v;
        }
        if let Some(v) = self.gamma {
            sc.gamma = v;
        }
        if let Some(v) = self.lambda {
            sc.lambda = v;
        }
        if let Some(v) = self.cap_values {
            sc.cap_values = v;
        }
        if let Some(v) = self.cap_grads {
            sc.cap_grads = v;
        }
        if let Some(v) = self.max_inner_halvings {
            sc.max_inner_halvings = v;
        }
        sc
    }

    /// Resolves the selected problem names against the standard suite.
    pub fn resolve_problems(&self) -> Result<Vec<TestProblem>> {
        let suite = standard_suite();
        if self.problems.is_empty() {
            return Ok(suite);
        }
        self.problems
            .iter()
            .map(|name| {
                suite
                    .iter()
                    .find(|p| p.name == name)
                    .cloned()
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown problem '{name}'")))
            })
            .collect()
    }
}

/// One (problem, solver) run.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub problem: String,
    pub dim: usize,
    pub solver: SolverKind,
    pub history: Vec<f64>,
    pub trace: SolverTrace,
    pub evals_to_converge: Option<usize>,
}

/// Per-(problem, solver) surrogate gain.
#[derive(Debug, Clone)]
pub struct GainRecord {
    pub problem: String,
    pub solver: SolverKind,
    pub mean_successes: f64,
    pub eta: f64,
}

/// Everything a run produces, before and independent of file output.
#[derive(Debug, Clone)]
pub struct ExperimentArtifacts {
    pub cells: Vec<CellResult>,
    pub profiles: Vec<DataProfile>,
    pub gains: Vec<GainRecord>,
    pub gain_summaries: Vec<(SolverKind, FiveNumberSummary)>,
    pub budget_simplex: usize,
}

impl ExperimentArtifacts {
    pub fn profile_for(&self, solver: SolverKind) -> Option<&DataProfile> {
        self.profiles.iter().find(|p| p.solver == solver.name())
    }

    pub fn gain_summary_for(&self, solver: SolverKind) -> Option<&FiveNumberSummary> {
        self.gain_summaries
            .iter()
            .find(|(k, _)| *k == solver)
            .map(|(_, s)| s)
    }
}

/// Stable per-cell seed derived from the experiment seed and grid indices.
fn cell_seed(seed: u64, problem_idx: usize, solver_idx: usize) -> u64 {
    let mut z = seed
        ^ ((problem_idx as u64) << 32)
        ^ (solver_idx as u64)
        ^ 0x9e3779b97f4a7c15;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Runs the grid and, when `out_dir` is given, writes `traces/*.csv`,
/// `profiles.csv`, `profiles.svg`, `gains.csv` and `gain_summary.csv` there.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: Option<&Path>,
) -> Result<ExperimentArtifacts> {
    let problems = cfg.resolve_problems()?;
    if cfg.solvers.is_empty() {
        return Err(Error::InvalidConfig("no solvers selected".into()));
    }

    let grid: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..cfg.solvers.len()).map(move |s| (p, s)))
        .collect();

    let mut cells: Vec<CellResult> = grid
        .par_iter()
        .map(|&(p_idx, s_idx)| {
            let problem = &problems[p_idx];
            let kind = cfg.solvers[s_idx];
            let solver_cfg = cfg.solver_config(problem.dim);
            let budget = cfg.budget_simplex * (problem.dim + 1);
            let objective = problem.objective();
            let mut oracle =
                Oracle::with_budget(problem.dim, budget, move |x: &[f64]| objective(x));
            let result = match kind.family(cfg.kernel, cfg.activation) {
                None => solve_base(&mut oracle, &problem.x0, &solver_cfg),
                Some(spec) => solve_accelerated(
                    &mut oracle,
                    &problem.x0,
                    &solver_cfg,
                    spec,
                    cell_seed(cfg.seed, p_idx, s_idx),
                ),
            }
            .expect("suite problems and configs are valid");
            CellResult {
                problem: problem.name.to_string(),
                dim: problem.dim,
                solver: kind,
                history: oracle.history().to_vec(),
                trace: result.trace,
                evals_to_converge: None,
            }
        })
        .collect();

    // Convergence is judged against the best value found by any solver.
    for (p_idx, problem) in problems.iter().enumerate() {
        let slice = p_idx * cfg.solvers.len()..(p_idx + 1) * cfg.solvers.len();
        let f_best = cells[slice.clone()]
            .iter()
            .flat_map(|c| c.history.iter().cloned())
            .fold(f64::INFINITY, f64::min);
        for cell in &mut cells[slice] {
            cell.evals_to_converge = evals_to_converge(&cell.history, f_best, cfg.tau);
        }
        debug_assert_eq!(problem.dim, cells[p_idx * cfg.solvers.len()].dim);
    }

    let tables: Vec<ProfileTable> = cfg
        .solvers
        .iter()
        .enumerate()
        .map(|(s_idx, kind)| ProfileTable {
            solver: kind.name().to_string(),
            entries: (0..problems.len())
                .map(|p_idx| {
                    let cell = &cells[p_idx * cfg.solvers.len() + s_idx];
                    (cell.dim, cell.evals_to_converge)
                })
                .collect(),
        })
        .collect();
    let profiles = data_profile(&tables)?;

    let mut gains = Vec::new();
    for cell in &cells {
        if !cell.solver.is_accelerated() || cell.trace.num_iterations() == 0 {
            continue;
        }
        let t = cell.trace.num_iterations();
        let s = cell.trace.mean_successes(t)?;
        gains.push(GainRecord {
            problem: cell.problem.clone(),
            solver: cell.solver,
            mean_successes: s,
            eta: eta(s, cell.dim),
        });
    }
    let gain_summaries: Vec<(SolverKind, FiveNumberSummary)> = cfg
        .solvers
        .iter()
        .filter(|k| k.is_accelerated())
        .filter_map(|kind| {
            let etas: Vec<f64> = gains
                .iter()
                .filter(|g| g.solver == *kind)
                .map(|g| g.eta)
                .collect();
            FiveNumberSummary::of(&etas).map(|s| (*kind, s))
        })
        .collect();

    let artifacts = ExperimentArtifacts {
        cells,
        profiles,
        gains,
        gain_summaries,
        budget_simplex: cfg.budget_simplex,
    };
    if let Some(dir) = out_dir {
        write_artifacts(&artifacts, dir)?;
    }
    Ok(artifacts)
}

fn io_err(path: &Path, err: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| io_err(path, e))
}

fn write_artifacts(artifacts: &ExperimentArtifacts, dir: &Path) -> Result<()> {
    let traces_dir = dir.join("traces");
    fs::create_dir_all(&traces_dir).map_err(|e| io_err(&traces_dir, e))?;

    for cell in &artifacts.cells {
        let path = traces_dir.join(format!("{}_{}.csv", cell.problem, cell.solver.name()));
        let mut buf = Vec::new();
        cell.trace
            .write_csv(&mut buf)
            .map_err(|e| io_err(&path, e))?;
        write_file(&path, std::str::from_utf8(&buf).expect("ascii csv"))?;
    }

    let mut profiles_csv = String::from("solver,alpha,fraction\n");
    for profile in &artifacts.profiles {
        for alpha in 0..=artifacts.budget_simplex {
            profiles_csv.push_str(&format!(
                "{},{},{}\n",
                profile.solver,
                alpha,
                profile.fraction_at(alpha as f64)
            ));
        }
    }
    write_file(&dir.join("profiles.csv"), &profiles_csv)?;

    let mut gains_csv = String::from("problem,solver,S,eta\n");
    for g in &artifacts.gains {
        gains_csv.push_str(&format!(
            "{},{},{},{}\n",
            g.problem,
            g.solver.name(),
            g.mean_successes,
            g.eta
        ));
    }
    write_file(&dir.join("gains.csv"), &gains_csv)?;

    let mut summary_csv = String::from("solver,min,q1,median,q3,max\n");
    for (kind, s) in &artifacts.gain_summaries {
        summary_csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            kind.name(),
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max
        ));
    }
    write_file(&dir.join("gain_summary.csv"), &summary_csv)?;

    let svg = svg::render_profiles(&artifacts.profiles, artifacts.budget_simplex);
    write_file(&dir.join("profiles.svg"), &svg)
}

//! Experiment configuration files (TOML).
//!
//! Every key except `algorithm` is optional:
//!
//! ```toml
//! algorithm = "ms2pso"          # canonical | ldiw | tvac | 2spso | tvac-2spso | ms2pso
//! population_size = 40
//! t_max = 125
//! seeds = [1, 2]
//! output_dir = "runs"
//! parallelism = "auto"          # or a thread count
//! record_particles = false      # per-particle fitness in every history record
//! objective = "sphere"          # or a table, see below
//!
//! [objective]
//! name = "rastrigin"            # sphere | rastrigin | rosenbrock | ackley | griewank | well_proxy
//! dimension = 30                # benchmarks default to 10; well_proxy is always 90
//! bounds = [-5.12, 5.12]        # benchmarks only; defaults to the conventional domain
//! fixture = "proxy.txt"         # well_proxy only; defaults to the bundled coefficients
//!
//! [schedule]                    # defaults to the algorithm preset
//! kind = "tvac"
//! omega_max = 0.9
//!
//! [[stage_plan]]                # defaults to the algorithm preset
//! swarm_count = 8
//! iterations = 25
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ms2pso_core::objectives::WELL_PROXY_NAME;
use ms2pso_core::{Benchmark, Problem, ScheduleSpec, SearchSpace, StagePlan, WellProxyModel};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const DEFAULT_POPULATION: usize = 40;
pub const DEFAULT_T_MAX: usize = 125;
pub const DEFAULT_SEEDS: [u64; 2] = [1, 2];
pub const DEFAULT_BENCHMARK_DIMENSION: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "canonical")]
    Canonical,
    #[serde(rename = "ldiw")]
    Ldiw,
    #[serde(rename = "tvac")]
    Tvac,
    #[serde(rename = "2spso")]
    TwoStage,
    #[serde(rename = "tvac-2spso")]
    TvacTwoStage,
    #[serde(rename = "ms2pso")]
    MultiStage,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Canonical,
        Algorithm::Ldiw,
        Algorithm::Tvac,
        Algorithm::TwoStage,
        Algorithm::TvacTwoStage,
        Algorithm::MultiStage,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Canonical => "canonical",
            Algorithm::Ldiw => "ldiw",
            Algorithm::Tvac => "tvac",
            Algorithm::TwoStage => "2spso",
            Algorithm::TvacTwoStage => "tvac-2spso",
            Algorithm::MultiStage => "ms2pso",
        }
    }

    pub fn schedule(&self) -> ScheduleSpec {
        match self {
            Algorithm::Canonical | Algorithm::TwoStage => ScheduleSpec::constant(),
            Algorithm::Ldiw => ScheduleSpec::ldiw(),
            Algorithm::Tvac | Algorithm::TvacTwoStage | Algorithm::MultiStage => {
                ScheduleSpec::tvac()
            }
        }
    }

    /// Default staging for a run of `t_max` iterations. The first fifth of
    /// the run is the first stage; for 125 iterations this gives 5 swarms for
    /// 25 iterations (two-stage) or 8/4/2 swarms for 25 each and one swarm
    /// for the last 50 (multi-stage).
    pub fn stage_plan(&self, t_max: usize) -> Option<StagePlan> {
        let fifth = t_max / 5;
        match self {
            Algorithm::Canonical | Algorithm::Ldiw | Algorithm::Tvac => {
                (t_max >= 1).then(|| StagePlan::single(t_max))
            }
            Algorithm::TwoStage | Algorithm::TvacTwoStage => {
                let first = fifth.max(1);
                (t_max > first).then(|| StagePlan::from_pairs(&[(5, first), (1, t_max - first)]))
            }
            Algorithm::MultiStage => (fifth >= 1).then(|| {
                StagePlan::from_pairs(&[(8, fifth), (4, fifth), (2, fifth), (1, t_max - 3 * fifth)])
            }),
        }
    }

    fn plan_violation(&self, plan: &StagePlan, t_max: usize) -> Option<String> {
        let ok = match self {
            Algorithm::Canonical | Algorithm::Ldiw | Algorithm::Tvac => {
                *plan == StagePlan::single(t_max)
            }
            Algorithm::TwoStage | Algorithm::TvacTwoStage => plan.len() == 2,
            Algorithm::MultiStage => plan.len() >= 3,
        };
        let need = match self {
            Algorithm::Canonical | Algorithm::Ldiw | Algorithm::Tvac => "a single one-swarm stage",
            Algorithm::TwoStage | Algorithm::TvacTwoStage => "exactly 2 stages",
            Algorithm::MultiStage => "at least 3 stages",
        };
        (!ok).then(|| {
            format!(
                "algorithm/stage_plan mismatch: {} requires {need}, got {} stage(s)",
                self.as_str(),
                plan.len()
            )
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Worker thread count for runs and evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ParallelismRepr", into = "ParallelismRepr")]
pub enum Parallelism {
    #[default]
    Auto,
    Threads(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParallelismRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<ParallelismRepr> for Parallelism {
    type Error = String;
    fn try_from(r: ParallelismRepr) -> std::result::Result<Self, String> {
        match r {
            ParallelismRepr::Count(n) => Ok(Parallelism::Threads(n)),
            ParallelismRepr::Word(w) => w.parse(),
        }
    }
}

impl From<Parallelism> for ParallelismRepr {
    fn from(p: Parallelism) -> Self {
        match p {
            Parallelism::Auto => ParallelismRepr::Word("auto".into()),
            Parallelism::Threads(n) => ParallelismRepr::Count(n),
        }
    }
}

impl FromStr for Parallelism {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Parallelism::Auto);
        }
        s.parse::<usize>()
            .map(Parallelism::Threads)
            .map_err(|_| format!("parallelism must be \"auto\" or a thread count, got {s:?}"))
    }
}

impl Parallelism {
    pub fn threads(&self) -> usize {
        match self {
            Parallelism::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
            Parallelism::Threads(n) => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveConfig {
    pub name: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<PathBuf>,
}

impl ObjectiveConfig {
    pub fn benchmark(name: &str, dimension: usize) -> Self {
        Self {
            name: name.to_string(),
            dimension,
            bounds: None,
            fixture: None,
        }
    }

    pub fn is_well_proxy(&self) -> bool {
        self.name == WELL_PROXY_NAME
    }

    /// Builds the objective; relative fixture paths resolve against `base`.
    pub fn build(&self, base: &Path) -> std::result::Result<Problem, String> {
        if self.is_well_proxy() {
            let model = match &self.fixture {
                Some(p) => {
                    WellProxyModel::from_fixture_path(&base.join(p)).map_err(|e| e.to_string())?
                }
                None => WellProxyModel::default_fixture(),
            };
            return Ok(Problem::well_proxy(model));
        }
        let bench = Benchmark::from_name(&self.name).map_err(|_| {
            format!(
                "objective.name: unknown objective {:?} (expected sphere, rastrigin, rosenbrock, ackley, griewank or {WELL_PROXY_NAME})",
                self.name
            )
        })?;
        let (lo, hi) = self
            .bounds
            .map_or_else(|| bench.bounds(), |[lo, hi]| (lo, hi));
        let space = SearchSpace::uniform(self.dimension, lo, hi)
            .map_err(|e| format!("objective.bounds: {e}"))?;
        Problem::benchmark_in(bench.name(), space).map_err(|e| e.to_string())
    }

    fn violations(&self, base: &Path) -> Vec<String> {
        let mut out = Vec::new();
        if self.dimension == 0 {
            out.push("objective.dimension must be at least 1".into());
        }
        if self.is_well_proxy() {
            if self.dimension != 90 {
                out.push(format!(
                    "objective.dimension: well_proxy has 90 variables, got {}",
                    self.dimension
                ));
            }
            if self.bounds.is_some() {
                out.push("objective.bounds: well_proxy variables are fixed to [0, 1]".into());
            }
        } else if self.fixture.is_some() {
            out.push("objective.fixture is only valid for well_proxy".into());
        }
        if out.is_empty() {
            if let Err(e) = self.build(base) {
                out.push(e);
            }
        }
        out
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub t_max: usize,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub parallelism: Parallelism,
    pub record_particles: bool,
    pub objective: ObjectiveConfig,
    pub schedule: ScheduleSpec,
    pub stage_plan: StagePlan,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ObjectiveField {
    Name(String),
    Table(RawObjective),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObjective {
    name: String,
    dimension: Option<usize>,
    bounds: Option<[f64; 2]>,
    fixture: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algorithm: Algorithm,
    population_size: Option<usize>,
    t_max: Option<usize>,
    seeds: Option<Vec<u64>>,
    output_dir: Option<PathBuf>,
    parallelism: Option<Parallelism>,
    record_particles: Option<bool>,
    objective: Option<ObjectiveField>,
    schedule: Option<ScheduleSpec>,
    stage_plan: Option<StagePlan>,
}

impl ExperimentConfig {
    /// The preset for `algorithm` with the default protocol: 40 particles,
    /// 125 iterations, two seeds, 10-d sphere.
    pub fn preset(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            population_size: DEFAULT_POPULATION,
            t_max: DEFAULT_T_MAX,
            seeds: DEFAULT_SEEDS.to_vec(),
            output_dir: PathBuf::from("runs"),
            parallelism: Parallelism::Auto,
            record_particles: false,
            objective: ObjectiveConfig::benchmark("sphere", DEFAULT_BENCHMARK_DIMENSION),
            schedule: algorithm.schedule(),
            stage_plan: algorithm
                .stage_plan(DEFAULT_T_MAX)
                .expect("presets fit the default budget"),
        }
    }

    /// Same preset on another objective and budget.
    pub fn with_budget(mut self, population_size: usize, t_max: usize) -> Self {
        self.population_size = population_size;
        self.t_max = t_max;
        if let Some(plan) = self.algorithm.stage_plan(t_max) {
            self.stage_plan = plan;
        }
        self
    }

    fn from_raw(raw: RawConfig) -> std::result::Result<Self, Vec<String>> {
        let t_max = raw.t_max.unwrap_or(DEFAULT_T_MAX);
        let objective = match raw.objective {
            None => ObjectiveConfig::benchmark("sphere", DEFAULT_BENCHMARK_DIMENSION),
            Some(ObjectiveField::Name(name)) => ObjectiveConfig {
                dimension: default_dimension(&name),
                name,
                bounds: None,
                fixture: None,
            },
            Some(ObjectiveField::Table(t)) => ObjectiveConfig {
                dimension: t.dimension.unwrap_or_else(|| default_dimension(&t.name)),
                name: t.name,
                bounds: t.bounds,
                fixture: t.fixture,
            },
        };
        let stage_plan = match raw.stage_plan {
            Some(plan) => plan,
            None => raw.algorithm.stage_plan(t_max).ok_or_else(|| {
                vec![format!(
                    "t_max = {t_max} is too short for the {} preset stage plan",
                    raw.algorithm
                )]
            })?,
        };
        Ok(Self {
            algorithm: raw.algorithm,
            population_size: raw.population_size.unwrap_or(DEFAULT_POPULATION),
            t_max,
            seeds: raw.seeds.unwrap_or_else(|| DEFAULT_SEEDS.to_vec()),
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("runs")),
            parallelism: raw.parallelism.unwrap_or_default(),
            record_particles: raw.record_particles.unwrap_or(false),
            objective,
            schedule: raw.schedule.unwrap_or_else(|| raw.algorithm.schedule()),
            stage_plan,
        })
    }

    /// Every violated rule. Relative fixture paths resolve against `base`.
    pub fn violations(&self, base: &Path) -> Vec<String> {
        let mut out = Vec::new();
        if self.population_size == 0 {
            out.push("population_size must be at least 1".into());
        }
        if self.t_max == 0 {
            out.push("t_max must be at least 1".into());
        }
        if self.seeds.is_empty() {
            out.push("seeds must list at least one seed".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            out.push("seeds must be distinct".into());
        }
        if self.seeds.iter().any(|&s| s > i64::MAX as u64) {
            out.push(format!("seeds must not exceed {}", i64::MAX));
        }
        if self.parallelism == Parallelism::Threads(0) {
            out.push("parallelism must be \"auto\" or at least 1".into());
        }
        out.extend(self.schedule.violations());
        out.extend(
            self.stage_plan
                .violations(self.population_size, Some(self.t_max)),
        );
        out.extend(self.algorithm.plan_violation(&self.stage_plan, self.t_max));
        out.extend(self.objective.violations(base));
        out
    }

    pub fn validate(&self, base: &Path) -> Result<()> {
        match self.violations(base) {
            v if v.is_empty() => Ok(()),
            v => Err(HarnessError::Invalid(v)),
        }
    }

    /// Non-fatal advice.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.seeds.len() < 2 {
            out.push("only one seed configured; at least two runs are recommended".to_string());
        }
        out
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }
}

fn default_dimension(name: &str) -> usize {
    if name == WELL_PROXY_NAME {
        90
    } else {
        DEFAULT_BENCHMARK_DIMENSION
    }
}

/// Parses and defaults a config without validating it.
pub fn parse_config(text: &str, path: &Path) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    ExperimentConfig::from_raw(raw).map_err(HarnessError::Invalid)
}

/// Reads, defaults and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let config = parse_config(&text, path)?;
    config.validate(path.parent().unwrap_or(Path::new(".")))?;
    Ok(config)
}

pub fn write_config(config: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, config.to_toml()).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        parse_config(text, Path::new("test.toml"))
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse("algorithm = \"canonical\"\nobjective = \"sphere\"\nseeds = [7]\n").unwrap();
        assert_eq!(c.population_size, 40);
        assert_eq!(c.t_max, 125);
        assert_eq!(c.stage_plan, StagePlan::single(125));
        assert_eq!(c.schedule, ScheduleSpec::constant());
        assert_eq!(c.objective.dimension, 10);
        assert!(c.violations(Path::new(".")).is_empty());
        assert_eq!(c.warnings().len(), 1);
    }

    #[test]
    fn staged_preset_is_valid() {
        let c = parse(
            "algorithm = \"ms2pso\"\nstage_plan = [{swarm_count = 8, iterations = 25}, {swarm_count = 4, iterations = 25}, {swarm_count = 2, iterations = 25}, {swarm_count = 1, iterations = 50}]\n",
        )
        .unwrap();
        assert!(c.violations(Path::new(".")).is_empty());
        assert_eq!(c.stage_plan, Algorithm::MultiStage.stage_plan(125).unwrap());
    }

    #[test]
    fn two_stage_with_three_stages_is_rejected() {
        let c = parse(
            "algorithm = \"2spso\"\n[[stage_plan]]\nswarm_count = 4\niterations = 25\n[[stage_plan]]\nswarm_count = 2\niterations = 50\n[[stage_plan]]\nswarm_count = 1\niterations = 50\n",
        )
        .unwrap();
        let v = c.violations(Path::new("."));
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("algorithm/stage_plan mismatch"));
    }

    #[test]
    fn every_violation_is_listed() {
        let c = parse(
            "algorithm = \"canonical\"\npopulation_size = 0\nseeds = []\nparallelism = 0\n[objective]\nname = \"nope\"\n[schedule]\nomega_const = -1.0\n",
        )
        .unwrap();
        let v = c.violations(Path::new("."));
        assert!(v.len() >= 5, "{v:?}");
        assert!(v.iter().any(|m| m.contains("objective.name")));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse("algorithm = \"canonical\"\npopulation_size = \"forty\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert_eq!(err.exit_code(), 2);
        assert!(parse("algorithm = \"pso9000\"\n").is_err());
        assert!(parse("algorithm = \"canonical\"\ncolour = 1\n").is_err());
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for a in Algorithm::ALL {
            let c = ExperimentConfig::preset(a);
            assert!(c.violations(Path::new(".")).is_empty(), "{a}");
            assert_eq!(parse(&c.to_toml()).unwrap(), c);
        }
    }

    #[test]
    fn parallelism_forms() {
        assert_eq!("auto".parse::<Parallelism>().unwrap(), Parallelism::Auto);
        assert_eq!("8".parse::<Parallelism>().unwrap(), Parallelism::Threads(8));
        assert!("many".parse::<Parallelism>().is_err());
        let c = parse("algorithm = \"tvac\"\nparallelism = 3\n").unwrap();
        assert_eq!(c.parallelism, Parallelism::Threads(3));
    }

    #[test]
    fn well_proxy_rules() {
        let c = parse("algorithm = \"tvac\"\nobjective = \"well_proxy\"\n").unwrap();
        assert_eq!(c.objective.dimension, 90);
        assert!(c.violations(Path::new(".")).is_empty());
        let c = parse("algorithm = \"tvac\"\n[objective]\nname = \"well_proxy\"\ndimension = 10\nbounds = [0.0, 2.0]\n").unwrap();
        assert_eq!(c.violations(Path::new(".")).len(), 2);
        let c = parse(
            "algorithm = \"tvac\"\n[objective]\nname = \"well_proxy\"\nfixture = \"missing.txt\"\n",
        )
        .unwrap();
        assert_eq!(c.violations(Path::new(".")).len(), 1);
    }

    #[test]
    fn short_budgets_have_no_staged_preset() {
        assert!(Algorithm::MultiStage.stage_plan(4).is_none());
        assert!(Algorithm::TwoStage.stage_plan(1).is_none());
        assert_eq!(
            Algorithm::TwoStage.stage_plan(50).unwrap(),
            StagePlan::from_pairs(&[(5, 10), (1, 40)])
        );
        assert!(parse("algorithm = \"ms2pso\"\nt_max = 3\n").is_err());
    }
}

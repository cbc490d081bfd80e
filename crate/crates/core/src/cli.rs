//! Command-line front end.
//!
//! Every flag can also be given in a TOML config (`--config`), using the flag
//! name with dashes replaced by underscores; flags on the command line win.
//! Finite instances live under an `[instance]` table of the config.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::audit::{audit_ic, DEFAULT_TOLERANCE};
use crate::continuous::{self, discretize, Distribution, DistributionSpec, Regime};
use crate::error::{Error, Result};
use crate::finite::{
    derandomize_decision_rules, evaluate_mechanism, monotone_rebalance, read_mechanism_table, reduce_to_score_based,
    solve_instance, write_mechanism_table, RuleDraw,
};
use crate::instances::college;
use crate::lpcore::SolveMode;
use crate::model::{CostFamily, CostModel, FiniteInstance, FiniteMechanism, ScoreBasedRule};
use crate::num::{self, fmt_real, format_rational, Rational};

#[derive(Debug, Parser)]
#[command(name = "semihard", version, about = "Optimal mechanisms under costly score falsification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the design LP of a finite instance.
    SolveFinite(CommonArgs),
    /// Closed-form binary-approval solution for a continuum of types.
    SolveContinuous(CommonArgs),
    /// Check a mechanism table for incentive compatibility.
    Audit(CommonArgs),
    /// Derandomize, rebalance or reduce a mechanism to a score-based rule.
    Canonicalize(CanonArgs),
    /// Run a built-in instance.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    College,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Float,
    Sparse,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SolveMode::Exact,
            ModeArg::Float => SolveMode::Float,
            ModeArg::Sparse => SolveMode::Sparse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostArg {
    Linear,
    Quadratic,
    Table,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config mirroring these flags (plus `[instance]` for finite commands).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub cost: Option<CostArg>,
    /// `uniform:<a>,<b>`, `exp:<rate>,<a>,<b>`, `tri:<a>,<mode>,<b>` or `grid:<path>`.
    #[arg(long)]
    pub dist: Option<String>,
    /// Discretize the continuous instance and cross-check with the LP.
    #[arg(long)]
    pub grid_types: Option<usize>,
    #[arg(long)]
    pub grid_scores: Option<usize>,
    /// Rows of the continuous solution table.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Mechanism table to audit or canonicalize.
    #[arg(long)]
    pub mechanism: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CanonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// TOML lottery over (rule, score) per type to collapse.
    #[arg(long)]
    pub derandomize: Option<PathBuf>,
    /// Make approval probabilities nondecreasing in the score.
    #[arg(long)]
    pub rebalance: bool,
    /// Reduce to a score-based rule (two outcomes, deterministic recommendations).
    #[arg(long)]
    pub score_based: bool,
}

/// Flag values from a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<ModeArg>,
    pub gamma: Option<f64>,
    pub cost: Option<CostArg>,
    pub dist: Option<String>,
    pub grid_types: Option<usize>,
    pub grid_scores: Option<usize>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub mechanism: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub instance: Option<FiniteInstance>,
}

/// Flags merged with the config file.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub mode: Option<ModeArg>,
    pub gamma: Option<f64>,
    pub cost: Option<CostArg>,
    pub dist: Option<String>,
    pub grid_types: Option<usize>,
    pub grid_scores: Option<usize>,
    pub samples: usize,
    pub tol: f64,
    pub mechanism: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub instance: Option<FiniteInstance>,
    /// Directory relative paths in the config resolve against.
    base: PathBuf,
}

impl RunConfig {
    pub fn load(args: &CommonArgs) -> Result<Self> {
        let (file, base) = match &args.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let cfg: FileConfig = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                (cfg, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        let rebase = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        let cfg = RunConfig {
            mode: args.mode.or(file.mode),
            gamma: args.gamma.or(file.gamma),
            cost: args.cost.or(file.cost),
            dist: args.dist.clone().or(file.dist.clone()),
            grid_types: args.grid_types.or(file.grid_types),
            grid_scores: args.grid_scores.or(file.grid_scores),
            samples: args.samples.or(file.samples).unwrap_or(301),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOLERANCE),
            mechanism: args.mechanism.clone().or(file.mechanism.map(rebase)),
            out: args.out.clone().or(file.out.map(|p| if p.is_relative() { base.join(p) } else { p })),
            instance: file.instance,
            base: base.clone(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if let Some(g) = self.gamma {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::Config(format!("gamma must be positive, got {g}")));
            }
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Config(format!("tol must be nonnegative, got {}", self.tol)));
        }
        if self.samples < 2 {
            return Err(Error::Config("samples must be at least 2".into()));
        }
        for (name, v) in [("grid-types", self.grid_types), ("grid-scores", self.grid_scores)] {
            if v.is_some_and(|n| n < 2) {
                return Err(Error::Config(format!("{name} must be at least 2")));
            }
        }
        Ok(())
    }

    fn instance(&self) -> Result<FiniteInstance> {
        let inst = self
            .instance
            .clone()
            .ok_or_else(|| Error::Config("config has no [instance] table".into()))?;
        inst.validate().into_result().map_err(|e| Error::Config(e.to_string()))?;
        Ok(inst)
    }

    fn mechanism(&self, inst: &FiniteInstance) -> Result<FiniteMechanism> {
        let path = self.mechanism.as_ref().ok_or_else(|| Error::Config("--mechanism is required".into()))?;
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        read_mechanism_table(&inst.space, &text)
    }

    fn distribution(&self) -> Result<Distribution> {
        let spec = self.dist.as_deref().unwrap_or("uniform:-2,1");
        parse_distribution(spec, &self.base)
    }
}

/// Parses `--dist`.
pub fn parse_distribution(spec: &str, base: &Path) -> Result<Distribution> {
    let bad = || Error::Config(format!("cannot parse distribution '{spec}'"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums = || -> Result<Vec<f64>> { rest.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect() };
    let spec = match kind {
        "uniform" => match nums()?[..] {
            [lo, hi] => DistributionSpec::Uniform { lo, hi },
            _ => return Err(bad()),
        },
        "exp" => match nums()?[..] {
            [rate, lo, hi] => DistributionSpec::TruncatedExponential { rate, lo, hi },
            _ => return Err(bad()),
        },
        "tri" => match nums()?[..] {
            [lo, mode, hi] => DistributionSpec::Triangular { lo, mode, hi },
            _ => return Err(bad()),
        },
        "grid" => {
            let path = base.join(rest);
            let text = fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let (nodes, density) = parse_density_grid(&text)?;
            DistributionSpec::Tabulated { nodes, density }
        }
        _ => return Err(bad()),
    };
    Distribution::new(spec).map_err(|e| Error::Config(e.to_string()))
}

/// Two numeric columns `t,density`; a non-numeric first line is a header.
fn parse_density_grid(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut nodes, mut density) = (Vec::new(), Vec::new());
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(format!("density grid: {e}")))?;
        let parsed: Option<(f64, f64)> = match (rec.get(0), rec.get(1)) {
            (Some(a), Some(b)) => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((t, f)) => {
                nodes.push(t);
                density.push(f);
            }
            None if i == 0 => {}
            None => return Err(Error::Config(format!("density grid: bad row {}", i + 1))),
        }
    }
    Ok((nodes, density))
}

/// Result of one command: text for stdout and files for `--out`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: BTreeMap<String, String>,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::SolveFinite(args) => finish(RunConfig::load(args)?, solve_finite),
        Command::SolveContinuous(args) => finish(RunConfig::load(args)?, solve_continuous),
        Command::Audit(args) => finish(RunConfig::load(args)?, audit),
        Command::Canonicalize(args) => {
            let cfg = RunConfig::load(&args.common)?;
            finish(cfg, |c| canonicalize(c, args))
        }
        Command::Example { name: ExampleName::College, common } => finish(RunConfig::load(common)?, example_college),
    }
}

fn finish(cfg: RunConfig, f: impl FnOnce(&RunConfig) -> Result<Outcome>) -> Result<Outcome> {
    let out = f(&cfg)?;
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        for (name, body) in &out.files {
            fs::write(dir.join(name), body)?;
        }
    }
    Ok(out)
}

fn solve_finite(cfg: &RunConfig) -> Result<Outcome> {
    let inst = cfg.instance()?;
    let mode: SolveMode = cfg.mode.unwrap_or(ModeArg::Exact).into();
    let sol = solve_instance(&inst, mode)?;
    let report = audit_ic(&inst.space, &inst.costs, &sol.mechanism, &inst.outside(), cfg.tol)?;
    let eval = evaluate_mechanism(&inst.space, &inst.costs, &inst.payoff, &sol.mechanism)?;
    let mut summary = String::new();
    writeln!(summary, "mode = {}", mode_name(mode)).unwrap();
    writeln!(summary, "value = {}", fmt_real(num::to_f64(&sol.value))).unwrap();
    if mode == SolveMode::Exact {
        writeln!(summary, "value_exact = {}", format_rational(&sol.value)).unwrap();
    }
    writeln!(summary, "evaluated_value = {}", fmt_real(num::to_f64(&eval.designer_value))).unwrap();
    for (t, u) in eval.utility.iter().enumerate() {
        writeln!(summary, "U[{}] = {}", inst.space.type_name(t), format_value(u, mode)).unwrap();
    }
    writeln!(summary, "audit_passes = {}", report.passes).unwrap();
    writeln!(summary, "max_tt_violation = {}", fmt_real(report.max_tt_violation)).unwrap();
    writeln!(summary, "max_pc_violation = {}", fmt_real(report.max_pc_violation)).unwrap();
    let mut files = BTreeMap::new();
    files.insert("mechanism.csv".into(), write_mechanism_table(&inst.space, &sol.mechanism)?);
    files.insert("audit.toml".into(), report.to_toml()?);
    files.insert("summary.txt".into(), summary.clone());
    Ok(Outcome { stdout: summary, files })
}

fn format_value(x: &Rational, mode: SolveMode) -> String {
    match mode {
        SolveMode::Exact => format_rational(x),
        _ => fmt_real(num::to_f64(x)),
    }
}

fn mode_name(m: SolveMode) -> &'static str {
    match m {
        SolveMode::Exact => "exact",
        SolveMode::Float => "float",
        SolveMode::Sparse => "sparse",
    }
}

fn solve_continuous(cfg: &RunConfig) -> Result<Outcome> {
    let dist = cfg.distribution()?;
    let family = match cfg.cost.unwrap_or(CostArg::Quadratic) {
        CostArg::Linear => CostFamily::Linear,
        CostArg::Quadratic => CostFamily::Quadratic,
        CostArg::Table => return Err(Error::Config("solve-continuous needs --cost linear or quadratic".into())),
    };
    let gamma = cfg.gamma.ok_or_else(|| Error::Config("--gamma is required".into()))?;
    let (lo, hi) = dist.support();
    let costs = CostModel::parametric(family, gamma, [lo, hi]);
    let sol = continuous::solve(&dist, &costs)?;

    let mut summary = String::new();
    writeln!(summary, "regime = {}", sol.regime).unwrap();
    writeln!(summary, "cost = {family}").unwrap();
    writeln!(summary, "gamma = {}", fmt_real(gamma)).unwrap();
    writeln!(summary, "t0 = {}", fmt_real(sol.t0)).unwrap();
    writeln!(summary, "t_star = {}", fmt_real(sol.t_star)).unwrap();
    match sol.t_dagger {
        Some(d) => writeln!(summary, "t_dagger = {}", fmt_real(d)).unwrap(),
        None => writeln!(summary, "t_dagger = none").unwrap(),
    }
    writeln!(summary, "p_star = {}", fmt_real(sol.p_star)).unwrap();
    if sol.regime == Regime::FirstBest {
        writeln!(summary, "first_best_target = {}", fmt_real(sol.first_best_target.unwrap_or(hi))).unwrap();
    }
    writeln!(summary, "designer_value = {}", fmt_real(sol.designer_value())).unwrap();

    let mut files = BTreeMap::new();
    if let Some(n_types) = cfg.grid_types {
        let n_scores = cfg.grid_scores.unwrap_or(2);
        let inst = discretize(&dist, &costs, n_types, n_scores)?;
        let mode: SolveMode = cfg.mode.unwrap_or(ModeArg::Sparse).into();
        let lp = solve_instance(&inst, mode)?;
        writeln!(summary, "grid_types = {n_types}").unwrap();
        writeln!(summary, "grid_lp_value = {}", fmt_real(num::to_f64(&lp.value))).unwrap();
        files.insert("grid_mechanism.csv".into(), write_mechanism_table(&inst.space, &lp.mechanism)?);
    }

    let mut table = String::from("t,a_star,Q_star,C,U,cost\n");
    for s in sol.sample(cfg.samples) {
        writeln!(
            table,
            "{},{},{},{},{},{}",
            fmt_real(s.t),
            fmt_real(s.a_star),
            fmt_real(s.q_star),
            fmt_real(s.c),
            fmt_real(s.u),
            fmt_real(s.cost)
        )
        .unwrap();
    }
    files.insert("solution.csv".into(), table);
    files.insert("summary.txt".into(), summary.clone());
    Ok(Outcome { stdout: summary, files })
}

fn audit(cfg: &RunConfig) -> Result<Outcome> {
    let inst = cfg.instance()?;
    let mech = cfg.mechanism(&inst)?;
    let report = audit_ic(&inst.space, &inst.costs, &mech, &inst.outside(), cfg.tol)?;
    let text = report.to_toml()?;
    let mut files = BTreeMap::new();
    files.insert("audit.toml".into(), text.clone());
    Ok(Outcome { stdout: text, files })
}

/// One atom of a `--derandomize` lottery file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawEntry {
    #[serde(rename = "type")]
    type_name: String,
    score: String,
    #[serde(with = "num::serde_rational")]
    weight: Rational,
    /// `rule[a][x]` over all scores
    #[serde(with = "num::serde_rational_matrix")]
    rule: Vec<Vec<Rational>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LotteryFile {
    draw: Vec<DrawEntry>,
}

fn canonicalize(cfg: &RunConfig, args: &CanonArgs) -> Result<Outcome> {
    let inst = cfg.instance()?;
    let space = &inst.space;
    let mut mech = match &args.derandomize {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let lottery: LotteryFile = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let mut per_type: Vec<Vec<RuleDraw>> = vec![Vec::new(); space.n_types()];
            for d in lottery.draw {
                let t = space.type_index(&d.type_name).ok_or_else(|| Error::Config(format!("unknown type '{}'", d.type_name)))?;
                let a = space.score_index(&d.score).ok_or_else(|| Error::Config(format!("unknown score '{}'", d.score)))?;
                per_type[t].push(RuleDraw { rule: ScoreBasedRule { decision: d.rule }, score: a, weight: d.weight });
            }
            derandomize_decision_rules(space.n_scores(), &per_type)?
        }
        None => cfg.mechanism(&inst)?,
    };
    if args.rebalance {
        if space.n_outcomes() != 2 {
            return Err(Error::Precondition("rebalancing needs two outcomes".into()));
        }
        let scores = space.score_values()?;
        let c = inst.costs.table_for(space)?;
        for t in 0..space.n_types() {
            let alpha: Vec<Rational> = (0..space.n_scores())
                .map(|a| mech.decision[t][a].as_ref().map_or_else(num::zero, |q| q[1].clone()))
                .collect();
            let new = monotone_rebalance(&scores, &mech.recommendation[t], &alpha, &c[t])?;
            for (a, p) in new.into_iter().enumerate() {
                if let Some(q) = mech.decision[t][a].as_mut() {
                    *q = vec![num::one() - &p, p];
                }
            }
        }
    }
    let mut files = BTreeMap::new();
    let mut stdout = String::new();
    let eval = evaluate_mechanism(space, &inst.costs, &inst.payoff, &mech)?;
    writeln!(stdout, "designer_value = {}", format_rational(&eval.designer_value)).unwrap();
    if args.score_based {
        let (rule, target) = reduce_to_score_based(space, &inst.costs, &inst.payoff, &mech)?;
        let mut table = String::from("score,approval\n");
        for (a, row) in rule.decision.iter().enumerate() {
            writeln!(table, "{},{}", space.scores[a].id, format_rational(&row[1])).unwrap();
        }
        for (t, a) in target.iter().enumerate() {
            writeln!(stdout, "submit[{}] = {}", space.type_name(t), space.scores[*a].id).unwrap();
        }
        files.insert("score_rule.csv".into(), table);
    }
    files.insert("mechanism.csv".into(), write_mechanism_table(space, &mech)?);
    Ok(Outcome { stdout, files })
}

fn example_college(cfg: &RunConfig) -> Result<Outcome> {
    let mode: SolveMode = cfg.mode.unwrap_or(ModeArg::Exact).into();
    let mut stdout = String::new();
    let mut files = BTreeMap::new();
    for (k, loss) in [(1, false), (2, true)] {
        let inst = college(loss);
        let sol = solve_instance(&inst, mode)?;
        writeln!(stdout, "scenario{k} value = {}", fmt_real(num::to_f64(&sol.value))).unwrap();
        if mode == SolveMode::Exact {
            writeln!(stdout, "scenario{k} value_exact = {}", format_rational(&sol.value)).unwrap();
        }
        files.insert(format!("scenario{k}_mechanism.csv"), write_mechanism_table(&inst.space, &sol.mechanism)?);
    }
    Ok(Outcome { stdout, files })
}

/// Machine-readable error line for stderr.
pub fn diagnostic(e: &Error) -> String {
    serde_json::json!({
        "error": e.category(),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    })
    .to_string()
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", diagnostic(&e));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("semihard").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn example_college_prints_both_values() {
        let (code, out, _) = run_args(&["example", "college"]);
        assert_eq!(code, 0);
        assert!(out.contains("scenario1 value = 2.25"));
        assert!(out.contains("scenario2 value = 2.20833333333"));
        assert!(out.contains("scenario2 value_exact = 53/24"));
    }

    #[test]
    fn continuous_summary_lines() {
        let (code, out, _) = run_args(&["solve-continuous", "--cost", "quadratic", "--gamma", "4", "--dist", "uniform:-2,1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("regime = interior"));
        assert!(out.contains("t_dagger = -0.333333333333"));
        assert!(out.contains("p_star = 0.6079"));
        let (_, out, _) = run_args(&["solve-continuous", "--cost", "quadratic", "--gamma", "1"]);
        assert!(out.contains("regime = first_best"));
    }

    #[test]
    fn bad_input_gives_json_diagnostic_and_exit_code() {
        let (code, _, err) = run_args(&["solve-continuous", "--cost", "linear", "--gamma=-1"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "config");
        let (code, _, err) = run_args(&["solve-continuous", "--cost", "linear", "--gamma", "4", "--dist", "uniform:-1,2"]);
        assert_eq!(code, 3, "{err}");
        let (code, _, _) = run_args(&["solve-continuous", "--gamma", "4", "--dist", "beta:1,2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn distribution_specs() {
        let base = Path::new(".");
        assert!(parse_distribution("uniform:-2,1", base).is_ok());
        assert!(parse_distribution("exp:1,-2,1", base).is_ok());
        assert!(parse_distribution("tri:-2,-1,1", base).is_ok());
        assert!(parse_distribution("uniform:1", base).is_err());
        let (n, f) = parse_density_grid("t,f\n-1,1\n0,2\n1,1\n").unwrap();
        assert_eq!((n.len(), f[1]), (3, 2.0));
    }
}

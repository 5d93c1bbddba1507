//! The `robustpac` command line.
//!
//! Every subcommand accepts `--config FILE` holding `key = value` lines with
//! the same names as the long flags; flags given on the command line win.
//! JSON reports embed the resolved configuration, so writing a report's
//! `config` object back out as such a file reproduces the report exactly.
//!
//! Exit codes: 0 success, 2 validation or parse error, 3 exact-oracle cap
//! exceeded, 4 sample not realizable.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::concepts::{parse_concept, AnyConcept, Concept};
use crate::distributions::{Distribution, LabeledSample};
use crate::error::{Error, Result};
use crate::expansion::{
    log_radius, s_rho, theorem1_constants, verify_theorem1_on_instance, ConstantsBundle,
    ConstantsVariant, ExpansionMode, ExpansionReport, Theorem1Check,
};
use crate::learners::{
    learn_monotone_conjunction, robust_learn, training_errors, LearnMode, LearnOutcome,
    LearnerConfig,
};
use crate::lowerbound::{run_lowerbound_experiment, AttackedLearner, LowerBoundConfig};
use crate::report;
use crate::risk::{
    constant_in_ball_risk_exact, robust_risk_exact, robust_risk_mc, standard_risk, McConfig,
    RiskReport, DEFAULT_SEARCH_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_REALIZABILITY: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Realizability(_) => EXIT_REALIZABILITY,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "robustpac",
    version,
    about = "Robust PAC learning laboratory on the Boolean hypercube"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Robust risk of a hypothesis against a target.
    #[command(args_override_self = true)]
    Risk(RiskArgs),
    /// Standard risk Pr[h(x) ≠ c(x)].
    #[command(args_override_self = true)]
    StandardRisk(StandardRiskArgs),
    /// Expansion-bound constants, both variants side by side.
    #[command(args_override_self = true)]
    Constants(ConstantsArgs),
    /// S_0 and S_ρ of a CNF formula, optionally checked against the bound.
    #[command(args_override_self = true)]
    Expansion(ExpansionArgs),
    /// Learn a hypothesis from a labeled sample.
    #[command(args_override_self = true)]
    Learn(LearnArgs),
    /// The disjoint-conjunction lower-bound experiment.
    #[command(args_override_self = true)]
    Lowerbound(LowerboundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// `key = value` defaults for any long flag.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Uniform,
    Product,
    Table,
}

#[derive(Args, Debug, Serialize)]
pub struct DistArgs {
    #[arg(long, value_enum, default_value_t = DistKind::Uniform)]
    pub dist: DistKind,
    /// Comma-separated means for `--dist product`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub means: Option<String>,
    /// `point,probability` CSV for `--dist table`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

impl DistArgs {
    fn build(&self, n: usize) -> Result<Distribution> {
        match self.dist {
            DistKind::Uniform => Distribution::uniform(n),
            DistKind::Product => {
                let raw = self
                    .means
                    .as_deref()
                    .ok_or_else(|| Error::invalid("--dist product requires --means"))?;
                let means = raw
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::invalid(format!("invalid mean {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if means.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        actual: means.len(),
                    });
                }
                Distribution::product(means)
            }
            DistKind::Table => {
                let path = self
                    .table
                    .as_deref()
                    .ok_or_else(|| Error::invalid("--dist table requires --table"))?;
                let d = Distribution::from_csv(&read(path)?)?;
                if d.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        actual: d.dim(),
                    });
                }
                Ok(d)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoMode {
    /// `ρ = ⌊log₂ n⌋`.
    Logn,
}

#[derive(Args, Debug, Serialize)]
pub struct RadiusArgs {
    #[arg(long, conflicts_with = "rho_mode")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_mode: Option<RhoMode>,
}

impl RadiusArgs {
    fn resolve(&self, n: usize) -> Result<usize> {
        let r = match (self.rho, self.rho_mode) {
            (Some(r), _) => r,
            (None, Some(RhoMode::Logn)) => log_radius(n),
            (None, None) => {
                return Err(Error::invalid(
                    "one of --rho or --rho-mode logn is required",
                ))
            }
        };
        if r > n {
            return Err(Error::invalid(format!("rho {r} exceeds dimension {n}")));
        }
        Ok(r)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct McArgs {
    /// Monte-Carlo estimation instead of the exact oracle.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ball points examined per Monte-Carlo draw.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig {
            budget: self.budget,
            ..McConfig::new(self.trials, self.delta, self.seed)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    /// Some `z` in the ball with `h(z) ≠ c(z)`.
    Exact,
    /// Some `z` in the ball with `h(z) ≠ c(x)`.
    Constant,
}

#[derive(Args, Debug, Serialize)]
pub struct RiskArgs {
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub radius: RadiusArgs,
    #[arg(long, value_enum, default_value_t = BallKind::Exact)]
    pub ball: BallKind,
    /// Exact oracle (the default).
    #[arg(long, conflicts_with = "mc")]
    pub exact: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct StandardRiskArgs {
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// With `--n`, also report `log₂` of the threshold.
    #[arg(long, requires = "n")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, requires = "epsilon")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Exact,
    Closed,
}

impl From<VariantArg> for ConstantsVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Exact => ConstantsVariant::ExactRecurrence,
            VariantArg::Closed => ConstantsVariant::DominatingClosedForm,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ExpansionArgs {
    /// A CNF, conjunction, monotone conjunction or constant.
    #[arg(long)]
    pub formula: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub radius: RadiusArgs,
    /// Also check the expansion bound at this ε.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = VariantArg::Exact)]
    pub variant: VariantArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerArg {
    Dl,
    Monconj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Theory,
    Direct,
}

#[derive(Args, Debug, Serialize)]
pub struct LearnArgs {
    /// `point,label` CSV. Alternatively draw `--m` points labeled by `--target`.
    #[arg(long, required_unless_present = "target")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<PathBuf>,
    #[arg(long, requires = "target")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = LearnerArg::Dl)]
    pub learner: LearnerArg,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Radius for the exact robust risk against `--target`.
    #[command(flatten)]
    #[serde(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct LowerboundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub rho: usize,
    #[arg(long, default_value_t = 1.5)]
    pub kappa: f64,
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    /// `monconj`, `dl<k>`, `oracle` or `bayes`.
    #[arg(long, default_value = "monconj")]
    pub learner: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_concept(path: &Path) -> Result<AnyConcept> {
    parse_concept(&read(path)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn load_pair(h: &Path, c: &Path) -> Result<(AnyConcept, AnyConcept)> {
    let h = load_concept(h)?;
    let c = load_concept(c)?;
    if h.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: h.dim(),
        });
    }
    Ok((h, c))
}

fn render<C: Serialize, R: Serialize>(
    command: &str,
    seed: Option<u64>,
    args: &C,
    result: &R,
    format: Format,
) -> Result<String> {
    match format {
        Format::Json => report::to_json(command, seed, args, result),
        Format::Csv => report::to_flat_csv(result),
    }
}

#[derive(Serialize)]
struct RiskResult {
    risk: &'static str,
    rho: usize,
    #[serde(flatten)]
    report: RiskReport,
}

fn cmd_risk(a: &RiskArgs) -> Result<String> {
    let (h, c) = load_pair(&a.hypothesis, &a.target)?;
    let n = c.dim();
    let rho = a.radius.resolve(n)?;
    let d = a.dist.build(n)?;
    let report = match (a.ball, a.mc.mc) {
        (BallKind::Exact, false) => robust_risk_exact(&h, &c, rho, &d)?,
        (BallKind::Exact, true) => robust_risk_mc(&h, &c, rho, &d, &a.mc.config())?,
        (BallKind::Constant, false) => constant_in_ball_risk_exact(&h, &c, rho, &d)?,
        (BallKind::Constant, true) => {
            return Err(Error::invalid(
                "--ball constant supports only the exact oracle",
            ))
        }
    };
    let result = RiskResult {
        risk: match a.ball {
            BallKind::Exact => "exact-in-ball",
            BallKind::Constant => "constant-in-ball",
        },
        rho,
        report,
    };
    render(
        "risk",
        a.mc.mc.then_some(a.mc.seed),
        a,
        &result,
        a.out.format,
    )
}

fn cmd_standard_risk(a: &StandardRiskArgs) -> Result<String> {
    let (h, c) = load_pair(&a.hypothesis, &a.target)?;
    let d = a.dist.build(c.dim())?;
    let report = standard_risk(&h, &c, &d)?;
    render("standard-risk", None, a, &report, a.out.format)
}

#[derive(Serialize)]
struct ConstantsView {
    /// `C₁` when representable as a normal double.
    c1: Option<f64>,
    #[serde(flatten)]
    bundle: ConstantsBundle,
    c3_eta_c4_invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    log2_threshold: Option<f64>,
}

#[derive(Serialize)]
struct ConstantsResult {
    exact: ConstantsView,
    closed_form: ConstantsView,
    closed_form_dominates: bool,
}

fn constants_view(b: ConstantsBundle, eps_n: Option<(f64, usize)>) -> Result<ConstantsView> {
    Ok(ConstantsView {
        c1: (b.log2_c1 >= -1022.0).then(|| b.log2_c1.exp2()),
        c3_eta_c4_invariant: b.satisfies_c3_c4_invariant(),
        log2_threshold: eps_n.map(|(e, n)| b.log_threshold(e, n)).transpose()?,
        bundle: b,
    })
}

fn cmd_constants(a: &ConstantsArgs) -> Result<String> {
    let eps_n = a.epsilon.zip(a.n);
    let ex = theorem1_constants(a.k, a.alpha, ConstantsVariant::ExactRecurrence)?;
    let cf = theorem1_constants(a.k, a.alpha, ConstantsVariant::DominatingClosedForm)?;
    let dominates = cf.log2_c1 <= ex.log2_c1 && cf.c2 >= ex.c2 && cf.c3 >= ex.c3 && cf.c4 >= ex.c4;
    let result = ConstantsResult {
        exact: constants_view(ex, eps_n)?,
        closed_form: constants_view(cf, eps_n)?,
        closed_form_dominates: dominates,
    };
    render("constants", None, a, &result, a.out.format)
}

#[derive(Serialize)]
struct ExpansionResult {
    #[serde(flatten)]
    report: ExpansionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem1: Option<Theorem1Check>,
}

fn cmd_expansion(a: &ExpansionArgs) -> Result<String> {
    let concept = load_concept(&a.formula)?;
    let phi = concept
        .to_cnf()
        .ok_or_else(|| Error::invalid(format!("{} is not a CNF formula", concept.kind())))?;
    let n = phi.dim();
    let rho = a.radius.resolve(n)?;
    let d = a.dist.build(n)?;
    let mode = if a.mc.mc {
        ExpansionMode::MonteCarlo(a.mc.config())
    } else {
        ExpansionMode::Exact
    };
    let mut report = s_rho(&phi, rho, &d, mode)?;
    let theorem1 = match a.epsilon {
        Some(eps) => {
            let check = verify_theorem1_on_instance(&phi, &d, eps, Some(rho), a.variant.into())?;
            report.a_bound = Some(check.a_bound.log2_bound);
            Some(check)
        }
        None => None,
    };
    let result = ExpansionResult { report, theorem1 };
    render(
        "expansion",
        a.mc.mc.then_some(a.mc.seed),
        a,
        &result,
        a.out.format,
    )
}

#[derive(Serialize)]
struct LearnResult {
    learner: LearnerArg,
    n: usize,
    hypothesis: String,
    sample_size: usize,
    training_errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<LearnOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    standard_risk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    robust_risk: Option<f64>,
}

fn cmd_learn(a: &LearnArgs) -> Result<String> {
    let target = a.target.as_deref().map(load_concept).transpose()?;
    let (sample, n) = match (&a.sample, &target) {
        (Some(path), _) => {
            let s = LabeledSample::from_csv(&read(path)?)?;
            let n = match (s.dim(), &target) {
                (Some(d), _) => d,
                (None, Some(c)) => c.dim(),
                (None, None) => {
                    return Err(Error::invalid("empty sample and no --target to fix n"))
                }
            };
            (s, n)
        }
        (None, Some(c)) => {
            let m =
                a.m.ok_or_else(|| Error::invalid("--target without --sample requires --m"))?;
            let d = a.dist.build(c.dim())?;
            (LabeledSample::draw(&d, c, m, a.seed)?, c.dim())
        }
        (None, None) => return Err(Error::invalid("one of --sample or --target is required")),
    };
    if let Some(c) = &target {
        if c.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: c.dim(),
                actual: n,
            });
        }
    }
    let (h, outcome) = match a.learner {
        LearnerArg::Monconj => (
            AnyConcept::Monotone(learn_monotone_conjunction(&sample, n)?),
            None,
        ),
        LearnerArg::Dl => {
            let cfg = LearnerConfig {
                k: a.k,
                epsilon: a.epsilon,
                delta: a.delta,
                alpha: a.alpha,
                mode: match a.mode {
                    ModeArg::Theory => LearnMode::Theory,
                    ModeArg::Direct => LearnMode::Direct,
                },
                seed: a.seed,
            };
            let out = robust_learn(&sample, n, &cfg)?;
            (out.hypothesis.clone(), Some(out))
        }
    };
    let (mut standard, mut rho, mut robust) = (None, None, None);
    if let Some(c) = &target {
        let d = a.dist.build(n)?;
        standard = Some(standard_risk(&h, c, &d)?.value);
        if a.radius.rho.is_some() || a.radius.rho_mode.is_some() {
            let r = a.radius.resolve(n)?;
            rho = Some(r);
            robust = Some(robust_risk_exact(&h, c, r, &d)?.value);
        }
    }
    let result = LearnResult {
        learner: a.learner,
        n,
        hypothesis: h.to_text(),
        sample_size: sample.len(),
        training_errors: training_errors(&h, &sample),
        outcome,
        standard_risk: standard,
        rho,
        robust_risk: robust,
    };
    render("learn", Some(a.seed), a, &result, a.out.format)
}

fn cmd_lowerbound(a: &LowerboundArgs) -> Result<String> {
    let cfg = LowerBoundConfig {
        n: a.n,
        rho: a.rho,
        kappa: a.kappa,
        trials: a.trials,
        learner: a.learner.parse::<AttackedLearner>()?,
        seed: a.seed,
    };
    let rep = run_lowerbound_experiment(&cfg)?;
    match a.out.format {
        Format::Json => report::to_json("lowerbound", Some(a.seed), a, &rep),
        Format::Csv => Ok(rep.to_csv()),
    }
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Risk(a) => &a.out,
        Command::StandardRisk(a) => &a.out,
        Command::Constants(a) => &a.out,
        Command::Expansion(a) => &a.out,
        Command::Learn(a) => &a.out,
        Command::Lowerbound(a) => &a.out,
    }
}

pub fn dispatch(c: &Command) -> Result<String> {
    match c {
        Command::Risk(a) => cmd_risk(a),
        Command::StandardRisk(a) => cmd_standard_risk(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Expansion(a) => cmd_expansion(a),
        Command::Learn(a) => cmd_learn(a),
        Command::Lowerbound(a) => cmd_lowerbound(a),
    }
}

/// Parses a `key = value` config file into long-flag arguments. `true`
/// becomes a bare flag and `false` is dropped.
pub fn config_args(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(i + 1, "expected `key = value`"))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(Error::parse(i + 1, format!("invalid key {:?}", k.trim())));
        }
        match v.trim() {
            "false" => {}
            "true" => out.push(format!("--{key}")),
            val => {
                out.push(format!("--{key}"));
                out.push(val.to_string());
            }
        }
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices config-file flags in front of the explicit ones, so explicit
/// flags override them.
fn expand_config(mut args: Vec<String>) -> Result<Vec<String>> {
    if args.len() < 2 {
        return Ok(args);
    }
    if let Some(path) = config_path(&args[2..]) {
        let injected = config_args(&read(&path)?)?;
        args.splice(2..2, injected);
    }
    Ok(args)
}

/// Runs the CLI, writing the report to `--output` or `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let text = match dispatch(&cli.command) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &output_args(&cli.command).output {
        Some(path) => fs::write(path, text.as_bytes()).map_err(Error::from),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

//! Command-line driver for dictionary-constrained channel codes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod report;
pub mod simulate;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dictcode::io;
use dictcode::{
    build_probable_sets, exact_error_probability, greedy_disjoint_code, greedy_gv_construct,
    rate_curve, theorem1_pipeline, theorem3_pipeline, two_stage_decode, DecodeOutcome,
    DictSelector, DictionarySource, Dmc, ProbableSetStrategy, ThresholdBase,
};

pub use report::Report;
pub use simulate::{simulate, wilson_interval, Interval, SimulationReport, Z95};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] dictcode::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(dictcode::Error::Parse { .. }) => 1,
            CliError::Infeasible(_) | CliError::Core(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dictcode",
    version,
    about = "Codes constrained to a dictionary"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo trials per codeword.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy code with minimum distance d inside a dictionary.
    ConstructGv {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Two-stage decoding of received words with erasures.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        received: PathBuf,
    },
    /// Monte Carlo error estimate of a code over a noise profile.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Binary substitution/erasure pipeline: d = t + 1, greedy code, rates.
    Theorem1(Theorem1Args),
    /// Typical-set dictionary with a conflict-set code on top.
    Theorem3(Theorem3Args),
    /// Rate curves 1 - alpha0(p, delta) of the binary asymmetric channel.
    Figure1(Figure1Args),
    /// Probable sets, admissible size and a disjoint code for one channel.
    ConflictBuild(ConflictArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct Theorem1Args {
    #[arg(long, group = "source")]
    pub dict: Option<PathBuf>,
    /// Use every binary word of the profile's length.
    #[arg(long, group = "source")]
    pub full_space: bool,
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Also write the constructed code here.
    #[arg(long)]
    pub code_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SelectorArg {
    Canonical,
    Seeded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BaseArg {
    /// Logarithms to the input alphabet size.
    Alphabet,
    Natural,
}

impl From<BaseArg> for ThresholdBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Alphabet => ThresholdBase::AlphabetSize,
            BaseArg::Natural => ThresholdBase::Natural,
        }
    }
}

#[derive(Debug, Args)]
pub struct Theorem3Args {
    #[arg(long)]
    pub channel: PathBuf,
    /// Comma-separated input distribution (uniform when absent).
    #[arg(long, value_delimiter = ',')]
    pub px: Option<Vec<f64>>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    /// Dictionary exponent (H(X) when absent).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = SelectorArg::Canonical)]
    pub selector: SelectorArg,
    #[arg(long, value_enum, default_value_t = BaseArg::Alphabet)]
    pub base: BaseArg,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.025, 0.05, 0.1])]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub p_start: f64,
    #[arg(long, default_value_t = 0.001)]
    pub p_step: f64,
    #[arg(long, default_value_t = 251)]
    pub p_count: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    GreedyMass,
    FullRow,
}

#[derive(Debug, Args)]
pub struct ConflictArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::GreedyMass)]
    pub strategy: StrategyArg,
    /// Code size (largest admissible when absent).
    #[arg(long)]
    pub m: Option<usize>,
}

/// What a command produced: the primary output, extra files, and notes for
/// stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
    pub warnings: Vec<String>,
    /// Set when the report was produced but the parameters are infeasible.
    pub infeasible: Option<String>,
}

impl Outcome {
    fn text(text: String) -> Self {
        Self {
            text,
            ..Self::default()
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> dictcode::Result<T>) -> Result<T, CliError> {
    parse(&read_file(path)?).map_err(|e| match e {
        dictcode::Error::Parse { line, message } => CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => CliError::Core(other),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::ConstructGv { dict, d } => construct_gv(dict, *d),
        Command::Decode { code, received } => decode(code, received),
        Command::Simulate { code, profile } => {
            let cf = load(code, io::parse_code)?;
            let profile = load(profile, io::parse_profile::<f64>)?;
            let report = simulate(&cf.code, cf.d, &profile, cli.trials, cli.seed)?;
            let mut outcome = Outcome::text(report.render());
            outcome
                .warnings
                .push(format!("wall_time_ms={}", report.wall_time.as_millis()));
            Ok(outcome)
        }
        Command::Theorem1(args) => theorem1(args),
        Command::Theorem3(args) => theorem3(args, cli.seed),
        Command::Figure1(args) => figure1(args),
        Command::ConflictBuild(args) => conflict_build(args),
    }
}

fn construct_gv(dict: &Path, d: usize) -> Result<Outcome, CliError> {
    let dict = load(dict, io::parse_dictionary)?;
    if d > dict.word_len() {
        return Err(CliError::Infeasible(format!(
            "d = {d} > n = {}",
            dict.word_len()
        )));
    }
    let report = greedy_gv_construct(&dict, d)?;
    let notes = vec![
        format!("dictionary_size={}", dict.len()),
        format!("guarantee={}", report.guarantee),
        format!("achieved_size={}", report.achieved_size),
    ];
    Ok(Outcome::text(io::write_code(&report.code, d, &notes)))
}

fn decode(code: &Path, received: &Path) -> Result<Outcome, CliError> {
    let cf = load(code, io::parse_code)?;
    let alphabet = cf.code.alphabet().clone();
    let n = cf.code.word_len();
    let ys = load(received, |t| io::parse_received(t, &alphabet, n))?;
    let mut out = String::new();
    for y in &ys {
        match two_stage_decode(&cf.code, cf.d, y)? {
            DecodeOutcome::Decoded(x) => out.push_str(&alphabet.render_word(&x)),
            DecodeOutcome::DecodingError(kind) => {
                out.push_str("error:");
                out.push_str(kind.as_str());
            }
        }
        out.push('\n');
    }
    Ok(Outcome::text(out))
}

fn theorem1(args: &Theorem1Args) -> Result<Outcome, CliError> {
    let profile = load(&args.profile, io::parse_profile::<f64>)?;
    let source = match &args.dict {
        Some(path) => DictionarySource::Explicit(load(path, io::parse_dictionary)?),
        None => DictionarySource::FullSpace { n: profile.len() },
    };
    let result = theorem1_pipeline(&source, &profile, args.eps)?;
    let s = &result.stats;
    let mut r = Report::new();
    r.put("n", s.n)
        .put("eps", s.eps)
        .put("mu_f", s.mu_f)
        .put("mu_e", s.mu_e)
        .put("p_eff", s.p_eff)
        .put("t", s.t)
        .put("d", result.d)
        .put("alpha", result.alpha)
        .put_opt("target_rate", result.target_rate);
    match &result.construction {
        Some(c) => {
            r.put("code_size", c.achieved_size)
                .put("guarantee", &c.guarantee)
                .put("meets_guarantee", c.meets_guarantee());
        }
        None => {
            r.put("code_size", "none");
        }
    }
    r.put_opt("achieved_rate", result.achieved_rate);
    for issue in &result.issues {
        r.put("issue", issue.describe());
    }
    let mut outcome = Outcome::text(r.render());
    if let (Some(path), Some(c)) = (&args.code_out, &result.construction) {
        outcome
            .files
            .push((path.clone(), io::write_code(&c.code, c.d, &[])));
    }
    for issue in &result.issues {
        if issue.blocks_construction() {
            outcome.infeasible.get_or_insert_with(|| issue.describe());
        } else {
            outcome.warnings.push(format!(
                "warning: {}; the rate guarantee does not apply",
                issue.describe()
            ));
        }
    }
    Ok(outcome)
}

fn theorem3(args: &Theorem3Args, seed: u64) -> Result<Outcome, CliError> {
    let channel: Dmc<f64> = load(&args.channel, io::parse_channel)?;
    let p_x = args
        .px
        .clone()
        .unwrap_or_else(|| vec![1.0 / channel.inputs() as f64; channel.inputs()]);
    let selector = match args.selector {
        SelectorArg::Canonical => DictSelector::Canonical,
        SelectorArg::Seeded => DictSelector::Seeded(seed),
    };
    let base: ThresholdBase = args.base.into();
    let t3 = theorem3_pipeline(&p_x, &channel, args.n, args.eps, args.alpha, selector, base)?;
    let h = t3.sets.entropies();
    let mut r = Report::new();
    r.put("n", args.n)
        .put("eps", args.eps)
        .put("base", base.name())
        .put("alpha", t3.alpha)
        .put("H_X", h.h_x)
        .put("H_Y", h.h_y)
        .put("H_XY", h.h_xy)
        .put("H_Y_given_X", h.h_y_given_x)
        .put("H_X_given_Y", h.h_x_given_y)
        .put("A1_size", t3.sets.a1().len())
        .put("A2_size", t3.sets.a2().len())
        .put("P_typical", t3.sets.prob_typical())
        .put("B_size", t3.sets.b().len())
        .put("B_size_target", t3.b_size_target)
        .put("dict_target", t3.dict_target)
        .put("N0", t3.dictionary.len())
        .put("shortfall", t3.shortfall)
        .put("d_L", t3.d_l())
        .put("d_L_bound", t3.d_l_bound)
        .put("d_R", t3.d_r())
        .put("d_R_bound", t3.d_r_bound)
        .put("M_admissible", t3.m_admissible)
        .put("below_threshold", t3.below_threshold)
        .put("M", t3.code.len())
        .put_opt("achieved_rate", t3.achieved_rate)
        .put("target_rate", t3.target_rate)
        .put_opt("max_error", t3.errors.as_ref().map(|e| e.max));
    let mut outcome = Outcome::text(r.render());
    if t3.shortfall {
        outcome.warnings.push(format!(
            "warning: B_n has {} words, fewer than the dictionary target {}",
            t3.sets.b().len(),
            t3.dict_target
        ));
    }
    if t3.below_threshold && !t3.code.is_empty() {
        outcome.warnings.push(format!(
            "warning: no M >= 1 satisfies M d_L d_R < N0 ({} * {} vs {}); kept one word",
            t3.d_l(),
            t3.d_r(),
            t3.dictionary.len()
        ));
    }
    Ok(outcome)
}

fn figure1(args: &Figure1Args) -> Result<Outcome, CliError> {
    if args.p_count == 0 || !(args.p_step > 0.0) {
        return Err(CliError::Infeasible(
            "the p grid needs p_count >= 1 and p_step > 0".into(),
        ));
    }
    let grid = dictcode::entropy::uniform_grid(args.p_start, args.p_step, args.p_count);
    Ok(Outcome::text(emit_figure1(&args.delta, &grid)?))
}

/// CSV `p,delta,rate` with one block of grid rows per `delta`.
pub fn emit_figure1(deltas: &[f64], grid: &[f64]) -> Result<String, CliError> {
    let mut points = Vec::with_capacity(grid.len() * deltas.len());
    for &delta in deltas {
        points.extend(rate_curve(delta, grid)?);
    }
    let mut buf = Vec::new();
    dictcode::entropy::write_rate_csv(&points, &mut buf).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

fn conflict_build(args: &ConflictArgs) -> Result<Outcome, CliError> {
    let channel: Dmc<f64> = load(&args.channel, io::parse_channel)?;
    let strategy = match args.strategy {
        StrategyArg::GreedyMass => ProbableSetStrategy::GreedyMass,
        StrategyArg::FullRow => ProbableSetStrategy::FullRow,
    };
    let family = build_probable_sets(&channel, args.eps, strategy)?;
    let admissible = family.max_admissible_size();
    let m = args.m.unwrap_or(admissible);
    let degree = family.d_l() * family.d_r();
    if m == 0 || m.saturating_mul(degree) >= family.inputs() {
        return Err(CliError::Infeasible(format!(
            "M d_L d_R < #X0 fails: M = {m}, d_L = {}, d_R = {}, #X0 = {}",
            family.d_l(),
            family.d_r(),
            family.inputs()
        )));
    }
    let code = greedy_disjoint_code(&family, m)?;
    let errors = exact_error_probability(&channel, &family, &code)?;
    let mut r = Report::new();
    r.put("inputs", family.inputs())
        .put("outputs", family.outputs())
        .put("eps", args.eps)
        .put("d_L", family.d_l())
        .put("d_R", family.d_r())
        .put("M_admissible", admissible)
        .put("M", code.len());
    let members: Vec<String> = code.members().iter().map(ToString::to_string).collect();
    r.put("code", members.join(","));
    r.put("max_error", errors.max);
    for (x, e) in code.members().iter().zip(&errors.per_word) {
        r.put(format!("error[{x}]"), e);
    }
    Ok(Outcome::text(r.render()))
}

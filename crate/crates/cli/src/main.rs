//! Command-line front end for the model-checking toolkit.
//!
//! Exit codes: 0 means the property holds (or the command succeeded),
//! 1 means violated (or a fuzz disagreement), 2 means a usage or parse
//! error, 3 means an internal invariant failed. Verdicts and generated
//! text go to stdout; statistics go to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ltlfmc_core::{
    certify_counterexample, check_nonterminating, check_terminating, enumerate_traces, evaluate,
    gen_phi_n, gen_tm_instance, ltlf_to_dfa, ltlf_to_nfa, ltlf_to_nfa_over, moore_to_ts,
    nfa_accepts, parse_formula, parse_moore, parse_tm, parse_ts, prefix_dba, random_formula,
    render_aut, render_cex, render_formula, render_ts, to_dot, translate_fragment, AutAutomaton,
    CheckError, Dialect, Formula, Restrict, TsKind, Verdict,
};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_HOLDS: u8 = 0;
const EXIT_VIOLATED: u8 = 1;

enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "error: {msg}"),
            Failure::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal(e: impl fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

#[derive(Parser)]
#[command(
    name = "ltlfmc",
    version,
    about = "Model checking of terminating and nonterminating systems against LTLf formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system against a formula
    Check(CheckArgs),
    /// Compile a formula to an automaton
    Compile(CompileArgs),
    /// Translate a fragment formula into an equivalent LTL formula
    Translate(TranslateArgs),
    /// Generate stress instances
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Cross-check the compiler against the trace evaluator on random formulas
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct FormulaInput {
    /// Formula text
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// Read the formula from a file instead
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

impl FormulaInput {
    fn read(&self) -> Result<Formula, Failure> {
        let text = match (&self.formula, &self.formula_file) {
            (Some(text), None) => text.clone(),
            (None, Some(path)) => read_file(path)?,
            _ => {
                return Err(Failure::Usage(
                    "provide exactly one of --formula or --formula-file".into(),
                ))
            }
        };
        parse_formula(&text, Dialect::Ltlf).map_err(usage)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Terminating,
    Nonterminating,
}

#[derive(Args)]
struct CheckArgs {
    /// Transition system file (`ts` format)
    #[arg(long, conflicts_with = "moore")]
    system: Option<PathBuf>,
    /// Moore machine file (`moore` format), converted before checking
    #[arg(long)]
    moore: Option<PathBuf>,
    #[command(flatten)]
    formula: FormulaInput,
    /// Which semantics to use; `auto` follows the system header
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Write the counterexample here when the verdict is `violated`
    #[arg(long)]
    cex: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Nfa,
    Dfa,
    PrefixDba,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Aut,
    Dot,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    formula: FormulaInput,
    /// Automaton to build
    #[arg(long, value_enum)]
    target: Target,
    /// Output syntax
    #[arg(long, value_enum, default_value_t = Emit::Aut)]
    emit: Emit,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    formula: FormulaInput,
}

#[derive(Subcommand)]
enum GenWhat {
    /// Turing machine acceptance as a nonterminating checking instance
    Tm(GenTmArgs),
    /// The quadratic formula family with doubly exponential prefix automata
    Phin(GenPhinArgs),
}

#[derive(Args)]
struct GenTmArgs {
    /// Machine description (`tm` format)
    #[arg(long)]
    machine: PathBuf,
    /// Input word, one symbol name per character
    #[arg(long)]
    input: String,
    /// Directory for instance.ts and instance.ltlf
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenPhinArgs {
    /// Family index (1..=4)
    #[arg(long)]
    n: usize,
    /// Directory for phi_<n>.ltlf
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FuzzArgs {
    /// Base seed; trial i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum formula size per trial
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Number of propositions (1..=8), named a, b, ...
    #[arg(long, default_value_t = 2)]
    props: usize,
    /// Number of random formulas to try
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => run_check(args),
        Command::Compile(args) => run_compile(args),
        Command::Translate(args) => run_translate(args),
        Command::Gen { what } => match what {
            GenWhat::Tm(args) => run_gen_tm(args),
            GenWhat::Phin(args) => run_gen_phin(args),
        },
        Command::Fuzz(args) => run_fuzz(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::WrongKind { .. } | CheckError::Compile(_) => usage(e),
        other => internal(other),
    }
}

fn report_stats(verdict: &Verdict) {
    eprintln!("explored: {}", verdict.stats.explored);
    eprintln!("peak_frontier: {}", verdict.stats.peak_frontier);
    eprintln!("wall_ms: {}", verdict.stats.wall.as_millis());
    if verdict.vacuous {
        eprintln!("vacuous: true");
    }
}

fn run_check(args: CheckArgs) -> Result<u8, Failure> {
    let system = match (&args.system, &args.moore) {
        (Some(path), None) => parse_ts(&read_file(path)?).map_err(usage)?,
        (None, Some(path)) => {
            let moore = parse_moore(&read_file(path)?).map_err(usage)?;
            moore_to_ts(&moore).map_err(usage)?
        }
        _ => {
            return Err(Failure::Usage(
                "provide exactly one of --system or --moore".into(),
            ))
        }
    };
    let formula = args.formula.read()?;
    let kind = match args.mode {
        Mode::Auto => system.kind(),
        Mode::Terminating => TsKind::Terminating,
        Mode::Nonterminating => TsKind::NonTerminating,
    };
    let verdict = match kind {
        TsKind::Terminating => check_terminating(&system, &formula),
        TsKind::NonTerminating => check_nonterminating(&system, &formula),
    }
    .map_err(check_failure)?;
    report_stats(&verdict);
    match &verdict.counterexample {
        None => {
            println!("holds");
            Ok(EXIT_HOLDS)
        }
        Some(cex) => {
            certify_counterexample(&system, &formula, cex).map_err(internal)?;
            let text = render_cex(&system, cex);
            if let Some(path) = &args.cex {
                write_file(path, &text)?;
            }
            println!("violated");
            print!("{text}");
            Ok(EXIT_VIOLATED)
        }
    }
}

fn run_compile(args: CompileArgs) -> Result<u8, Failure> {
    let formula = args.formula.read()?;
    let automaton = match args.target {
        Target::Nfa => AutAutomaton::Nfa(ltlf_to_nfa(&formula).map_err(usage)?),
        Target::Dfa => AutAutomaton::Dfa(ltlf_to_dfa(&formula).map_err(usage)?),
        Target::PrefixDba => AutAutomaton::Dba(prefix_dba(&formula).map_err(usage)?),
    };
    eprintln!("states: {}", automaton.state_count());
    let text = match args.emit {
        Emit::Aut => render_aut(&automaton),
        Emit::Dot => to_dot(&automaton),
    };
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_HOLDS)
}

fn run_translate(args: TranslateArgs) -> Result<u8, Failure> {
    let formula = args.formula.read()?;
    let translated = translate_fragment(&formula).map_err(|_| {
        Failure::Usage(
            "formula is outside the translatable fragment: R, W, ->, and <-> are \
             excluded; !, | must stay propositional; and N may not appear inside \
             an F or on the right side of a U"
                .into(),
        )
    })?;
    println!("{}", render_formula(&translated, Dialect::Ltl));
    Ok(EXIT_HOLDS)
}

fn run_gen_tm(args: GenTmArgs) -> Result<u8, Failure> {
    let tm = parse_tm(&read_file(&args.machine)?).map_err(usage)?;
    let input: Vec<String> = args.input.chars().map(String::from).collect();
    let instance = gen_tm_instance(&tm, &input, tm.c).map_err(usage)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.out.display())))?;
    write_file(&args.out.join("instance.ts"), &render_ts(&instance.system))?;
    let mut formula_text = render_formula(&instance.formula, Dialect::Ltlf);
    formula_text.push('\n');
    write_file(&args.out.join("instance.ltlf"), &formula_text)?;
    eprintln!("states: {}", instance.system.state_count());
    eprintln!("formula_size: {}", instance.formula.size());
    eprintln!("cn: {}", instance.cn);
    Ok(EXIT_HOLDS)
}

fn run_gen_phin(args: GenPhinArgs) -> Result<u8, Failure> {
    if !(1..=4).contains(&args.n) {
        return Err(Failure::Usage("--n must be between 1 and 4".into()));
    }
    let formula = gen_phi_n(args.n);
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.out.display())))?;
    let mut text = render_formula(&formula, Dialect::Ltlf);
    text.push('\n');
    write_file(&args.out.join(format!("phi_{}.ltlf", args.n)), &text)?;
    eprintln!("formula_size: {}", formula.size());
    Ok(EXIT_HOLDS)
}

fn run_fuzz(args: FuzzArgs) -> Result<u8, Failure> {
    if !(1..=8).contains(&args.props) {
        return Err(Failure::Usage("--props must be between 1 and 8".into()));
    }
    let props: Vec<String> = (0..args.props)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let traces = enumerate_traces(&props, 4).map_err(internal)?;
    let mut checks = 0usize;
    for trial in 0..args.trials {
        let seed = args.seed.wrapping_add(trial as u64);
        let formula = random_formula(seed, args.max_size, &props, Restrict::Full)
            .map_err(usage)?;
        let nfa = ltlf_to_nfa_over(&formula, &props).map_err(internal)?;
        for trace in &traces {
            let compiled = nfa_accepts(&nfa, trace).map_err(internal)?;
            let direct = evaluate(&formula, trace).map_err(internal)?;
            if compiled != direct {
                println!(
                    "disagreement at seed {seed}: {}",
                    render_formula(&formula, Dialect::Ltlf)
                );
                return Ok(EXIT_VIOLATED);
            }
            checks += 1;
        }
    }
    println!("{} trials, {checks} checks, all agree", args.trials);
    Ok(EXIT_HOLDS)
}

//! `sl1`: satisfiability checking, translation and structure tools for
//! separation logic with one selector field.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sl1::contraction::{contract, frontier_sets, restrict, segment};
use sl1::reductions::{emit_fo, fo_to_sl, infinite_to_finite, sl_to_fo, Format, Mode};
use sl1::semantics::{eval_fo, eval_sl, Env};
use sl1::solver::{
    check_finite_sat, check_infinite_sat, fuzz_compare, oracle_sat, FuzzConfig, SatResult,
    SolverConfig, Status,
};
use sl1::structure::{corresponds, parse_structure, Loc, SlStructure};
use sl1::syntax::{flatten_fo, parse, Dialect, FoFormula, Formula, SlFormula, Var};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNKNOWN: u8 = 30;
const EXIT_ERROR: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 2;

/// Environment variable holding the solver's worker thread count.
const WORKERS_VAR: &str = "SL1_WORKERS";

#[derive(Parser)]
#[command(name = "sl1", version, about = "Satisfiability toolkit for SL(1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a closed sentence.
    Check(CheckArgs),
    /// Translate between SL and first-order logic.
    Translate(TranslateArgs),
    /// Evaluate a formula on a structure.
    Modelcheck(ModelcheckArgs),
    /// Print the frontier sets and segments of a structure.
    Frontier(SurgeryArgs),
    /// Shorten the heap segments of a structure.
    Contract(ContractArgs),
    /// Keep only the locations reachable from the given variables and locations.
    Restrict(SurgeryArgs),
    /// Compare the solver with the brute-force oracle on generated sentences.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Sl,
    Fo,
}

#[derive(Args)]
struct FormulaInput {
    /// A formula file, `-` for standard input, or the formula text itself.
    input: String,
    /// Formula language; defaults to `fo` for `.fo` files and `sl` otherwise.
    #[arg(long, value_enum)]
    logic: Option<Logic>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    formula: FormulaInput,
    /// Look for finite models (the default).
    #[arg(long, conflicts_with = "infinite")]
    finite: bool,
    /// Look for infinite models.
    #[arg(long)]
    infinite: bool,
    /// Use the brute-force oracle up to this universe size.
    #[arg(long, value_name = "N")]
    oracle_bound: Option<usize>,
    /// Evaluation step budget.
    #[arg(long, value_name = "STEPS", default_value_t = 200_000_000)]
    effort: u64,
    /// Write the witness structure to this file.
    #[arg(long, value_name = "FILE")]
    witness_out: Option<String>,
    /// Report wall-clock time.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Smtlib2,
    Tptp,
    Native,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    formula: FormulaInput,
    /// SL test-formula combination to first-order logic.
    #[arg(long, group = "direction")]
    to_fo: bool,
    /// First-order logic to SL, preserving finite models.
    #[arg(long, group = "direction")]
    from_fo_finite: bool,
    /// First-order logic to SL, preserving infinite models.
    #[arg(long, group = "direction")]
    from_fo_infinite: bool,
    /// Infinite satisfiability of an SL sentence to finite satisfiability.
    #[arg(long, group = "direction")]
    to_finite: bool,
    /// Output syntax for first-order results.
    #[arg(long, value_enum, default_value = "native")]
    format: OutputFormat,
    /// Flatten nested function terms before translating from FO.
    #[arg(long)]
    flatten: bool,
    /// Write the result to this file instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Args)]
struct ModelcheckArgs {
    /// Formula file, `-`, or formula text.
    #[arg(long)]
    formula: String,
    /// Structure file.
    #[arg(long)]
    structure: String,
    /// Formula language; FO formulae are evaluated on the corresponding
    /// FO structure.
    #[arg(long, value_enum)]
    logic: Option<Logic>,
}

#[derive(Args)]
struct SurgeryArgs {
    /// Structure file.
    #[arg(long)]
    structure: String,
    /// Comma-separated variables.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Comma-separated locations.
    #[arg(long, value_delimiter = ',')]
    locs: Vec<Loc>,
}

#[derive(Args)]
struct ContractArgs {
    #[command(flatten)]
    surgery: SurgeryArgs,
    /// Maximal number of cells kept after each segment start.
    #[arg(long)]
    bound: usize,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Largest number of quantifiers.
    #[arg(long, default_value_t = 3)]
    quantifiers: usize,
    /// Largest number of matrix nodes.
    #[arg(long, default_value_t = 12)]
    nodes: usize,
    /// Largest cardinality constant.
    #[arg(long, default_value_t = 2)]
    constants: u32,
    /// Step budget for each solver and oracle run.
    #[arg(long, value_name = "STEPS", default_value_t = 5_000_000)]
    effort: u64,
    /// List every sentence with both verdicts.
    #[arg(long)]
    verbose: bool,
    /// Report wall-clock time.
    #[arg(long)]
    timing: bool,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Translate(a) => translate(a),
        Command::Modelcheck(a) => modelcheck(a),
        Command::Frontier(a) => frontier(a),
        Command::Contract(a) => contraction(a),
        Command::Restrict(a) => restriction(a),
        Command::Fuzz(a) => fuzz(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read_text(input: &str) -> CliResult<String> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(text)
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))
    } else {
        Ok(input.to_string())
    }
}

fn dialect(input: &str, logic: Option<Logic>) -> Dialect {
    match logic {
        Some(Logic::Sl) => Dialect::Sl,
        Some(Logic::Fo) => Dialect::Fo,
        None if input.ends_with(".fo") && Path::new(input).is_file() => Dialect::Fo,
        None => Dialect::Sl,
    }
}

fn read_formula(input: &str, logic: Option<Logic>) -> CliResult<Formula> {
    let text = read_text(input)?;
    parse(&text, dialect(input, logic)).map_err(|e| format!("{input}: {e}"))
}

fn read_sl(input: &FormulaInput) -> CliResult<SlFormula> {
    match read_formula(&input.input, input.logic)? {
        Formula::Sl(phi) => Ok(phi),
        Formula::Fo(_) => Err("expected an SL formula".into()),
    }
}

fn read_fo(input: &FormulaInput) -> CliResult<FoFormula> {
    match read_formula(&input.input, Some(input.logic.unwrap_or(Logic::Fo)))? {
        Formula::Fo(phi) => Ok(phi),
        Formula::Sl(_) => Err("expected a first-order formula".into()),
    }
}

fn read_structure(path: &str) -> CliResult<SlStructure> {
    let text = read_text(path)?;
    parse_structure(&text).map_err(|e| format!("{path}: {e}"))
}

fn workers() -> CliResult<usize> {
    match std::env::var(WORKERS_VAR) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{WORKERS_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(1),
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::BoundedUnknown => EXIT_UNKNOWN,
    }
}

fn check(a: CheckArgs) -> CliResult<u8> {
    let formula = read_formula(&a.formula.input, a.formula.logic)?;
    let config = SolverConfig {
        max_steps: a.effort,
        workers: workers()?,
        ..SolverConfig::default()
    };
    let result: SatResult = match (&formula, a.oracle_bound) {
        (_, Some(b)) if !a.infinite => oracle_sat(&formula, b, a.effort),
        (Formula::Fo(_), _) => {
            return Err("first-order input is checked with --oracle-bound N (finite models only)".into())
        }
        (Formula::Sl(phi), _) if a.infinite => check_infinite_sat(phi, &config),
        (Formula::Sl(phi), _) => check_finite_sat(phi, &config),
    }
    .map_err(|e| e.to_string())?;
    print!("{}", result.render());
    if a.timing {
        println!("time {:.3}s", result.stats.elapsed.as_secs_f64());
    }
    if let (Some(path), Some(w)) = (&a.witness_out, &result.witness) {
        std::fs::write(path, w.to_string()).map_err(|e| format!("writing {path}: {e}"))?;
    }
    Ok(exit_for(result.status))
}

fn translate(a: TranslateArgs) -> CliResult<u8> {
    let format = match a.format {
        OutputFormat::Smtlib2 => Format::SmtLib2,
        OutputFormat::Tptp => Format::Tptp,
        OutputFormat::Native => Format::Native,
    };
    let text = if a.to_fo {
        let phi = read_sl(&a.formula)?;
        emit_fo(&sl_to_fo(&phi).map_err(|e| e.to_string())?, format)
    } else if a.from_fo_finite || a.from_fo_infinite {
        let mut phi = read_fo(&a.formula)?;
        if a.flatten {
            phi = flatten_fo(&phi);
        }
        let mode = if a.from_fo_finite {
            Mode::Finite
        } else {
            Mode::Infinite
        };
        format!("{}\n", fo_to_sl(&phi, mode).map_err(|e| e.to_string())?)
    } else if a.to_finite {
        let phi = read_sl(&a.formula)?;
        format!("{}\n", infinite_to_finite(&phi).map_err(|e| e.to_string())?)
    } else {
        return Err(
            "choose one of --to-fo, --from-fo-finite, --from-fo-infinite, --to-finite".into(),
        );
    };
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {path}: {e}"))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn modelcheck(a: ModelcheckArgs) -> CliResult<u8> {
    let s = read_structure(&a.structure)?;
    let holds = match read_formula(&a.formula, a.logic)? {
        Formula::Sl(phi) => eval_sl(&s, &phi, &Env::new()),
        Formula::Fo(phi) => eval_fo(&corresponds(&s), &phi, &Env::new()),
    }
    .map_err(|e| e.to_string())?;
    println!("{holds}");
    Ok(0)
}

fn surgery_inputs(a: &SurgeryArgs) -> CliResult<(SlStructure, BTreeSet<Var>, BTreeSet<Loc>)> {
    let s = read_structure(&a.structure)?;
    let vars = a.vars.iter().map(Var::new).collect();
    let locs = a.locs.iter().copied().collect();
    Ok((s, vars, locs))
}

fn set(locs: &BTreeSet<Loc>) -> String {
    let items: Vec<String> = locs.iter().map(Loc::to_string).collect();
    format!("{{{}}}", items.join(" "))
}

fn frontier(a: SurgeryArgs) -> CliResult<u8> {
    let (s, vars, locs) = surgery_inputs(&a)?;
    let sets = frontier_sets(&s, &vars, &locs).map_err(|e| e.to_string())?;
    println!("V {}", set(&sets.v));
    println!("Vbar {}", set(&sets.vbar));
    println!("W {}", set(&sets.w));
    for &l in &sets.w {
        if s.heap.contains(l) {
            let seg = segment(&s, l, &sets, None).map_err(|e| e.to_string())?;
            let items: Vec<String> = seg.iter().map(Loc::to_string).collect();
            println!("segment {}", items.join(" "));
        }
    }
    Ok(0)
}

fn contraction(a: ContractArgs) -> CliResult<u8> {
    let (s, vars, locs) = surgery_inputs(&a.surgery)?;
    let c = contract(&s, a.bound, &vars, &locs).map_err(|e| e.to_string())?;
    print!("{c}");
    Ok(0)
}

fn restriction(a: SurgeryArgs) -> CliResult<u8> {
    let (s, vars, locs) = surgery_inputs(&a)?;
    let r = restrict(&s, &vars, &locs).map_err(|e| e.to_string())?;
    print!("{r}");
    Ok(0)
}

fn fuzz(a: FuzzArgs) -> CliResult<u8> {
    let mut config = FuzzConfig::default();
    config.gen.max_quantifiers = a.quantifiers;
    config.gen.max_nodes = a.nodes;
    config.gen.max_const = a.constants;
    config.solver.max_steps = a.effort;
    config.solver.workers = workers()?;
    config.oracle_steps = a.effort;
    config.timing = a.timing;
    let report = fuzz_compare(a.seed, a.count, &config).map_err(|e| e.to_string())?;
    print!("{}", report.render(a.verbose));
    Ok(if report.is_clean() { 0 } else { EXIT_DISAGREEMENT })
}

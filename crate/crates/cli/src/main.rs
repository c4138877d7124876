use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use omega_weights::algebra::{plus_from_star, LawReport, Monoid, DEFAULT_SEED};
use omega_weights::automata::{
    automaton_to_json, compile, finitary_coeff, infinitary_coeff, parse_automaton, ProductAnalysis,
};
use omega_weights::instances::{make_instance, Bool, InstanceParams, Lattice, MinPlus, Nat, SelfPair};
use omega_weights::matrix::{group_identity_check, omega_group_identity_check, star_group_identity_check, GroupTable};
use omega_weights::ratexpr::{eval_in, parse, EvalResult, Expr};
use omega_weights::series::{coeff, Alphabet, Coefficients, Estimate, OmegaCoefficients, OmegaWord, Word};
use omega_weights::valuation::{
    counterexample_product_omega, counterexample_regroup_avg, counterexample_regroup_liminf, make_valuation_instance,
    CounterexampleTrace, FromComplete, RealValuation, Schedule, ValuationInstance, ValuationParams, AVG_TOLERANCE,
    DEFAULT_DOUBLING_BLOCKS, VALUATION_NAMES,
};

#[derive(Parser)]
#[command(name = "omega-weights", version, about = "Law checks, coefficients and automata over weighted words")]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, env = "OMEGA_WEIGHTS_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Instance name: bool, nat, minplus, lattice, or a valuation (sup, limsup,
    /// liminf, disc, limsup-avg, lattice-inf, from-complete).
    #[arg(long)]
    instance: String,
    /// Discount factor for `disc`.
    #[arg(long)]
    lambda: Option<f64>,
    /// Number of atoms of the lattice instances.
    #[arg(long)]
    lattice_base: Option<u8>,
    /// Underlying hemiring of `from-complete`: bool or lattice.
    #[arg(long)]
    hemiring: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a law suite and print the JSON report.
    Laws {
        #[command(flatten)]
        instance: InstanceArgs,
        /// conway-semiring, conway-hemiring, hemimodule, multi-hemiring,
        /// omega-valuation or complete-omega-hemiring.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Coefficient of an expression at a finite word or a lasso `u(v)^w`.
    Coeff {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        word: String,
    },
    /// Compile an expression to an automaton in JSON.
    Compile {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        expr: String,
        /// Letters of the alphabet; defaults to the letters of the expression.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Behavior of an automaton (JSON file) at a finite word or a lasso.
    Behavior {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        aut: std::path::PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Plus, star and omega group identities for one group.
    GroupCheck {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Reproduce a regrouping counterexample as a per-depth trace.
    Counterexample {
        /// 13.8c, 13.8e or 13.10.
        #[arg(long)]
        name: String,
        /// Doubling blocks for 13.8e, product depth for 13.10.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Power4)]
        schedule: ScheduleArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Power4,
    Superexponential,
}

/// Instances that answer coefficient and behavior queries.
enum CoeffInstance {
    Bool(Bool),
    Nat(Nat),
    MinPlus(MinPlus),
    Lattice(Lattice),
    Real(RealValuation),
    CompleteBool(FromComplete<Bool>),
    CompleteLattice(FromComplete<Lattice>),
}

macro_rules! dispatch {
    ($inst:expr, $c:ident => $finitary:expr, omega: $omega:expr) => {
        match $inst {
            CoeffInstance::Bool($c) => $omega,
            CoeffInstance::Real($c) => $omega,
            CoeffInstance::CompleteBool($c) => $omega,
            CoeffInstance::CompleteLattice($c) => $omega,
            CoeffInstance::Nat($c) => $finitary,
            CoeffInstance::MinPlus($c) => $finitary,
            CoeffInstance::Lattice($c) => $finitary,
        }
    };
}

fn valuation_params(args: &InstanceArgs) -> ValuationParams {
    ValuationParams { lambda: args.lambda, lattice_base: args.lattice_base, hemiring: args.hemiring.clone() }
}

fn instance_params(args: &InstanceArgs) -> InstanceParams {
    InstanceParams { lattice_base: args.lattice_base, ..Default::default() }
}

fn coeff_instance(args: &InstanceArgs) -> Result<CoeffInstance> {
    if VALUATION_NAMES.contains(&args.instance.as_str()) || args.instance == "avg" {
        return Ok(match make_valuation_instance(&args.instance, &valuation_params(args))? {
            ValuationInstance::Real(c) => CoeffInstance::Real(c),
            ValuationInstance::CompleteBool(c) => CoeffInstance::CompleteBool(c),
            ValuationInstance::CompleteLattice(c) => CoeffInstance::CompleteLattice(c),
        });
    }
    Ok(match args.instance.as_str() {
        "bool" => CoeffInstance::Bool(Bool),
        "nat" => CoeffInstance::Nat(Nat),
        "minplus" => CoeffInstance::MinPlus(MinPlus::default()),
        "lattice" => CoeffInstance::Lattice(Lattice::new(args.lattice_base.unwrap_or(3))?),
        other => bail!("instance `{other}` has no coefficient semantics"),
    })
}

#[derive(Serialize)]
struct ValueJson {
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_bound: Option<f64>,
}

fn value_json<C: Monoid>(c: &C, e: Estimate<C::Elem>) -> ValueJson {
    ValueJson { value: c.render(&e.value), error_bound: e.error_bound }
}

/// Letters of an expression, skipping the `w` of `^w`.
fn expr_letters(text: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    let mut prev = ' ';
    for ch in text.chars() {
        if ch.is_ascii_lowercase() && prev != '^' && !out.contains(&ch) {
            out.push(ch);
        }
        prev = ch;
    }
    out.sort_unstable();
    out.into_iter().collect()
}

enum Query {
    Finite(Word),
    Lasso(OmegaWord),
}

fn parse_query(word: &str) -> Result<Query> {
    if word.contains("^w") {
        return Ok(Query::Lasso(OmegaWord::parse(word)?));
    }
    let w = Word::parse(word)?;
    if w.is_empty() {
        bail!("coefficients are only defined on nonempty words");
    }
    Ok(Query::Finite(w))
}

fn coeff_finitary<C: Coefficients>(c: &C, expr: &Expr, alphabet: &Alphabet, query: &Query) -> Result<ValueJson> {
    match (eval_in(c, expr, alphabet)?, query) {
        (EvalResult::Fin(f), Query::Finite(w)) => Ok(value_json(c, Estimate::exact(coeff(c, &f, w.letters())))),
        (EvalResult::Fin(_), Query::Lasso(_)) => bail!("a finitary expression needs a finite word"),
        (EvalResult::Omega(_), _) => bail!("an omega expression needs a lasso `u(v)^w` and an instance with infinitary coefficients"),
    }
}

fn coeff_any<C: OmegaCoefficients>(c: &C, expr: &Expr, alphabet: &Alphabet, query: &Query) -> Result<ValueJson> {
    match (eval_in(c, expr, alphabet)?, query) {
        (EvalResult::Omega(v), Query::Lasso(w)) => Ok(value_json(c, c.omega_coeff(&v, w)?)),
        (EvalResult::Omega(_), Query::Finite(_)) => bail!("an omega expression needs a lasso `u(v)^w`"),
        (EvalResult::Fin(_), _) => coeff_finitary(c, expr, alphabet, query),
    }
}

fn alphabet_of(texts: &[&str]) -> Alphabet {
    let letters = expr_letters(&texts.concat());
    Alphabet::from_str(&letters)
}

fn cmd_coeff(args: &InstanceArgs, expr: &str, word: &str) -> Result<(String, bool)> {
    let e = parse(expr)?;
    let query = parse_query(word)?;
    let alphabet = alphabet_of(&[expr, word]);
    let inst = coeff_instance(args)?;
    let out = dispatch!(&inst, c => coeff_finitary(c, &e, &alphabet, &query)?, omega: coeff_any(c, &e, &alphabet, &query)?);
    eprintln!("{} at {word} in {}: {}", expr, args.instance, out.value);
    Ok((serde_json::to_string(&out)?, true))
}

fn compile_json<C: Coefficients>(c: &C, e: &Expr, alphabet: &Alphabet) -> Result<String> {
    let a = compile(c, e, alphabet)?;
    eprintln!("compiled to {} states, {} repeated, {} transitions", a.n, a.k, a.transitions.len());
    Ok(serde_json::to_string_pretty(&automaton_to_json(c, &a))?)
}

fn cmd_compile(args: &InstanceArgs, expr: &str, alphabet: Option<&str>) -> Result<(String, bool)> {
    let e = parse(expr)?;
    let alphabet = match alphabet {
        Some(a) => Alphabet::from_str(a),
        None => alphabet_of(&[expr]),
    };
    let inst = coeff_instance(args)?;
    let out = dispatch!(&inst, c => compile_json(c, &e, &alphabet)?, omega: compile_json(c, &e, &alphabet)?);
    Ok((out, true))
}

fn behavior_finitary<C: Coefficients>(c: &C, text: &str, query: &Query) -> Result<ValueJson> {
    let a = parse_automaton(c, text)?;
    match query {
        Query::Finite(w) => Ok(value_json(c, Estimate::exact(finitary_coeff(c, &a, w.letters())?))),
        Query::Lasso(_) => bail!("this instance has no infinitary behavior"),
    }
}

fn behavior_any<C: ProductAnalysis>(c: &C, text: &str, query: &Query) -> Result<ValueJson> {
    let a = parse_automaton(c, text)?;
    match query {
        Query::Finite(w) => Ok(value_json(c, Estimate::exact(finitary_coeff(c, &a, w.letters())?))),
        Query::Lasso(w) => Ok(value_json(c, infinitary_coeff(c, &a, w)?)),
    }
}

fn cmd_behavior(args: &InstanceArgs, path: &std::path::Path, word: &str) -> Result<(String, bool)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let query = parse_query(word)?;
    let inst = coeff_instance(args)?;
    let out = dispatch!(&inst, c => behavior_finitary(c, &text, &query)?, omega: behavior_any(c, &text, &query)?);
    eprintln!("behavior at {word} in {}: {}", args.instance, out.value);
    Ok((serde_json::to_string(&out)?, true))
}

fn report_output(report: LawReport) -> (String, bool) {
    eprintln!("{}: {} trials, {} failures", report.suite, report.trials, report.failures.len());
    for f in report.failures.iter().take(5) {
        eprintln!("  {}: {} != {}", f.law, f.lhs, f.rhs);
    }
    if report.failures.len() > 5 {
        eprintln!("  ... {} more in the JSON report", report.failures.len() - 5);
    }
    let passed = report.passed();
    (report.to_json(), passed)
}

fn cmd_laws(args: &InstanceArgs, suite: &str, samples: usize, seed: u64) -> Result<(String, bool)> {
    if VALUATION_NAMES.contains(&args.instance.as_str()) || args.instance == "avg" {
        let v = make_valuation_instance(&args.instance, &valuation_params(args))?;
        let report = match suite {
            "multi-hemiring" => v.multi_hemiring_laws(seed, samples),
            "omega-valuation" => v.omega_valuation_laws(seed, samples),
            "complete-omega-hemiring" => v.complete_omega_hemiring_laws(seed, samples),
            other => bail!("suite `{other}` does not apply to valuation `{}`", args.instance),
        };
        return Ok(report_output(report));
    }
    let inst = make_instance(&args.instance, &instance_params(args))?;
    Ok(report_output(inst.run_suite(suite, samples, seed)?))
}

fn cmd_group_check(args: &InstanceArgs, group: &str, samples: usize, seed: u64) -> Result<(String, bool)> {
    let g = GroupTable::by_name(group)?;
    let mut report = LawReport::new(format!("group identities ({})", g.name));
    match args.instance.as_str() {
        "bool" => {
            let s = Bool.sampler();
            report.absorb(group_identity_check(&g, &plus_from_star(Bool), &s, samples));
            report.absorb(star_group_identity_check(&g, &Bool, &s, samples));
            report.absorb(omega_group_identity_check(&g, &SelfPair(Bool), &s, samples));
        }
        "minplus" => {
            let m = MinPlus::default();
            let s = m.sampler(seed);
            report.absorb(group_identity_check(&g, &plus_from_star(m), &s, samples));
            report.absorb(star_group_identity_check(&g, &m, &s, samples));
            report.absorb(omega_group_identity_check(&g, &SelfPair(m), &s, samples));
        }
        "lattice" => {
            let l = Lattice::new(args.lattice_base.unwrap_or(3))?;
            let s = l.random_sampler(seed);
            report.absorb(group_identity_check(&g, &plus_from_star(l), &s, samples));
            report.absorb(star_group_identity_check(&g, &l, &s, samples));
            report.absorb(omega_group_identity_check(&g, &SelfPair(l), &s, samples));
        }
        other => bail!("group checks run on bool, minplus or lattice, not `{other}`"),
    }
    Ok(report_output(report))
}

fn trace_output(t: CounterexampleTrace, differ: bool) -> Result<(String, bool)> {
    eprintln!("{}: {} = {}, {} = {}", t.name, t.first_label, t.first, t.second_label, t.second);
    if differ {
        eprintln!("the two sides differ: the identity fails");
    }
    Ok((t.to_json(), !differ))
}

fn cmd_counterexample(name: &str, depth: Option<usize>, schedule: ScheduleArg) -> Result<(String, bool)> {
    match name {
        "13.8c" => {
            let t = counterexample_regroup_liminf();
            let differ = t.first != t.second;
            trace_output(t, differ)
        }
        "13.8e" => {
            let t = counterexample_regroup_avg(depth.unwrap_or(DEFAULT_DOUBLING_BLOCKS));
            let differ = (t.first - t.second).abs() > AVG_TOLERANCE;
            trace_output(t, differ)
        }
        "13.10" => {
            let schedule = match schedule {
                ScheduleArg::Power4 => Schedule::Power4,
                ScheduleArg::Superexponential => Schedule::Superexponential,
            };
            let t = counterexample_product_omega(depth.unwrap_or(8), schedule)?;
            let differ = (t.first - t.second).abs() > AVG_TOLERANCE;
            trace_output(t, differ)
        }
        other => bail!("unknown counterexample `{other}`; expected 13.8c, 13.8e or 13.10"),
    }
}

fn run(cli: Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::Laws { instance, suite, samples } => cmd_laws(instance, suite, *samples, cli.seed),
        Command::Coeff { instance, expr, word } => cmd_coeff(instance, expr, word),
        Command::Compile { instance, expr, alphabet } => cmd_compile(instance, expr, alphabet.as_deref()),
        Command::Behavior { instance, aut, word } => cmd_behavior(instance, aut, word),
        Command::GroupCheck { instance, group, samples } => cmd_group_check(instance, group, *samples, cli.seed),
        Command::Counterexample { name, depth, schedule } => cmd_counterexample(name, *depth, *schedule),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((json, passed)) => {
            // A closed pipe downstream is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{json}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! Command-line front end for the Blotto solver suite: instance and strategy
//! file I/O, solver invocation, verification reports, and the desk-scale
//! reproduction benchmarks.
//!
//! Reports are JSON documents on stdout (the benchmark subcommand prints
//! plain pass/fail lines) with every rational rendered as an exact `p/q`
//! string. Exit codes: 0 on success, 1 when an instance is infeasible for the
//! requested target or an algorithm precondition fails (a report is still
//! printed), 2 on malformed input, 3 when an enumeration cap is exceeded.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use blotto::continuous::{self, Feasibility};
use blotto::core::guaranteed_probability;
use blotto::{approx, bestresp, oracle, ratio};
use blotto::{Caps, Error, GameInstance, MixedStrategy, PureStrategy, Rational, StrategyMode};

/// Exact solvers for the Colonel Blotto game with bounded-support strategies.
#[derive(Parser)]
#[command(name = "blotto", version, about, max_term_width = 100)]
struct Cli {
    /// Number of worker threads for parallel solver phases (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive ground-truth oracles (small instances only).
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Player 2's best response against a strategy file.
    BestResponse {
        /// Response model: against one pure strategy, a revealed pair, or in
        /// expectation against the whole mixture.
        #[arg(long, value_enum, default_value_t = ResponseMode::Pure)]
        mode: ResponseMode,
        /// Instance file.
        instance: String,
        /// Strategy file.
        strategy: String,
    },
    /// Approximation solvers with exactly certified guarantees.
    Solve {
        #[command(subcommand)]
        command: SolveCommand,
    },
    /// Continuous-troop feasibility solvers for 2-strategies.
    Continuous {
        #[command(subcommand)]
        command: ContinuousCommand,
    },
    /// Verifies a strategy file against an instance at a target level.
    Verify {
        /// Instance file.
        instance: String,
        /// Strategy file.
        strategy: String,
        /// Target payoff level (exact rational; integer for discrete strategies).
        #[arg(long)]
        u: String,
    },
    /// Reproduction benchmarks on the shipped fixtures.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact maxmin probability of securing level u with a c-strategy.
    Maxmin {
        /// Support size bound.
        #[arg(long)]
        c: usize,
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Instance file.
        instance: String,
    },
    /// Exact pure maximin value and witness.
    Pure {
        /// Instance file.
        instance: String,
    },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Pure-strategy approximation scheme: certified ≥ (1−ε)u when a pure
    /// strategy guaranteeing u exists.
    PurePtas {
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Approximation parameter in (0, 1).
        #[arg(long)]
        eps: String,
        /// Instance file.
        instance: String,
    },
    /// 2-strategy with certified level ≥ ⌈u/3⌉ at probability 1/2.
    Third {
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Instance file.
        instance: String,
    },
    /// 2-strategy targeting level (1−ε)u at probability 1/2.
    TwoEps {
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Approximation parameter in (0, 1).
        #[arg(long)]
        eps: String,
        /// Instance file.
        instance: String,
    },
}

#[derive(Subcommand)]
enum ContinuousCommand {
    /// Exact continuous 2-strategy feasibility on uniform weights.
    Uniform {
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Instance file.
        instance: String,
    },
    /// Continuous 2-strategy feasibility on general weights (requires
    /// 2n ≥ (1+ε)m).
    General {
        /// Target payoff level.
        #[arg(long)]
        u: String,
        /// Rounding parameter in (0, 1).
        #[arg(long)]
        eps: String,
        /// Instance file.
        instance: String,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Reproduces the two published desk-scale tables and prints pass/fail.
    Tables,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ResponseMode {
    /// Best response to a single pure strategy.
    Pure,
    /// Best simultaneous response to a revealed pair of pure strategies.
    Two,
    /// Best expected response to the whole mixed strategy.
    Expected,
}

/// A command's outcome: the report text and whether the run counts as a
/// success (exit 0) or an infeasibility/precondition report (exit 1).
struct Report {
    text: String,
    success: bool,
}

impl Report {
    fn success(value: Value) -> Self {
        Report {
            text: pretty(&value),
            success: true,
        }
    }

    fn graded(value: Value, success: bool) -> Self {
        Report {
            text: pretty(&value),
            success,
        }
    }
}

/// A failed run: exit code plus a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::Internal(_) => 1,
            Error::CapExceeded { .. } => 3,
            Error::DimensionMismatch { .. }
            | Error::BudgetViolation { .. }
            | Error::InvalidStrategy(_)
            | Error::Malformed(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn malformed(message: String) -> Failure {
    Failure { code: 2, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(report) => {
            // Tolerate a downstream reader (head, grep -m1, ...) closing the
            // pipe early; the verdict was already decided.
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{}", report.text);
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Oracle { command } => match command {
            OracleCommand::Maxmin { c, u, instance } => oracle_maxmin(c, &u, &instance),
            OracleCommand::Pure { instance } => oracle_pure(&instance),
        },
        Command::BestResponse {
            mode,
            instance,
            strategy,
        } => best_response(mode, &instance, &strategy),
        Command::Solve { command } => match command {
            SolveCommand::PurePtas { u, eps, instance } => solve_pure_ptas(&u, &eps, &instance),
            SolveCommand::Third { u, instance } => solve_third(&u, &instance),
            SolveCommand::TwoEps { u, eps, instance } => solve_two_eps(&u, &eps, &instance),
        },
        Command::Continuous { command } => match command {
            ContinuousCommand::Uniform { u, instance } => continuous_uniform(&u, &instance),
            ContinuousCommand::General { u, eps, instance } => {
                continuous_general(&u, &eps, &instance)
            }
        },
        Command::Verify {
            instance,
            strategy,
            u,
        } => verify(&instance, &strategy, &u),
        Command::Bench { command } => match command {
            BenchCommand::Tables => bench_tables(),
        },
    }
}

// ---------------------------------------------------------------------------
// File formats and exact-rational plumbing.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: u32,
    m: u32,
    weights: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyFile {
    mode: String,
    support: Vec<Vec<String>>,
    probs: Vec<String>,
}

/// Parses an exact rational from `p` or `p/q` notation.
fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let text = s.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let n: BigInt = numer
        .parse()
        .map_err(|_| malformed(format!("`{s}` is not an exact rational")))?;
    let d: BigInt = match denom {
        Some(d) => d
            .parse()
            .map_err(|_| malformed(format!("`{s}` is not an exact rational")))?,
        None => BigInt::from(1),
    };
    if d == BigInt::from(0) {
        return Err(malformed(format!("`{s}` has denominator zero")));
    }
    Ok(Rational::new(n, d))
}

/// Parses a target level that must be a non-negative integer.
fn parse_level(s: &str) -> Result<u64, Failure> {
    let r = parse_rational(s)?;
    if !r.is_integer() {
        return Err(malformed(format!("level `{s}` must be an integer")));
    }
    r.to_integer()
        .try_into()
        .map_err(|_| malformed(format!("level `{s}` is out of range")))
}

fn rational_from_u64(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

fn load_instance(path: &str) -> Result<GameInstance, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| malformed(format!("cannot read `{path}`: {e}")))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| malformed(format!("instance file `{path}`: {e}")))?;
    Ok(GameInstance::new(file.n, file.m, file.weights)?)
}

fn load_strategy(path: &str, inst: &GameInstance) -> Result<MixedStrategy, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| malformed(format!("cannot read `{path}`: {e}")))?;
    let file: StrategyFile = serde_json::from_str(&text)
        .map_err(|e| malformed(format!("strategy file `{path}`: {e}")))?;
    let mode = match file.mode.as_str() {
        "discrete" => StrategyMode::Discrete,
        "continuous" => StrategyMode::Continuous,
        other => {
            return Err(malformed(format!(
                "strategy mode must be `discrete` or `continuous`, got `{other}`"
            )))
        }
    };
    let mut support = Vec::with_capacity(file.support.len());
    for row in &file.support {
        let entries = row
            .iter()
            .map(|e| parse_rational(e))
            .collect::<Result<Vec<_>, _>>()?;
        support.push(PureStrategy::from_rationals(mode, entries)?);
    }
    let probs = file
        .probs
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<Vec<_>, _>>()?;
    let s = MixedStrategy::new(support, probs)?;
    s.validate(inst, inst.n())?;
    Ok(s)
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn allocation_json(p: &PureStrategy) -> Value {
    Value::Array(
        p.entries()
            .iter()
            .map(|e| Value::String(e.to_string()))
            .collect(),
    )
}

/// Renders a mixed strategy in the strategy-file schema so reports can be
/// saved and fed back to `verify` unchanged.
fn strategy_json(s: &MixedStrategy) -> Value {
    json!({
        "mode": s.support()[0].mode().to_string(),
        "support": s.support().iter().map(allocation_json).collect::<Vec<_>>(),
        "probs": s.probs().iter().map(rational_json).collect::<Vec<_>>(),
    })
}

fn half_half(x: PureStrategy, xp: PureStrategy) -> Result<MixedStrategy, Failure> {
    Ok(MixedStrategy::new(
        vec![x, xp],
        vec![ratio(1, 2), ratio(1, 2)],
    )?)
}

// ---------------------------------------------------------------------------
// Subcommand handlers.

fn oracle_maxmin(c: usize, u: &str, instance: &str) -> Result<Report, Failure> {
    let caps = Caps::from_env()?;
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let (p_star, strategy) = oracle::exact_maxmin_up(&inst, c, u, None, &caps)?;
    Ok(Report::success(json!({
        "c": c,
        "u": u,
        "p_star": rational_json(&p_star),
        "strategy": strategy_json(&strategy),
    })))
}

fn oracle_pure(instance: &str) -> Result<Report, Failure> {
    let caps = Caps::from_env()?;
    let inst = load_instance(instance)?;
    let (value, witness) = oracle::exact_pure_maximin(&inst, &caps)?;
    Ok(Report::success(json!({
        "value": value,
        "strategy": strategy_json(&MixedStrategy::pure(witness)),
    })))
}

fn best_response(mode: ResponseMode, instance: &str, strategy: &str) -> Result<Report, Failure> {
    let caps = Caps::from_env()?;
    let inst = load_instance(instance)?;
    let s = load_strategy(strategy, &inst)?;
    match mode {
        ResponseMode::Pure => {
            if s.support_size() != 1 {
                return Err(malformed(
                    "mode `pure` needs a strategy file with exactly one support entry".into(),
                ));
            }
            let (y, value) = bestresp::pure_best_response_dp(&inst, &s.support()[0])?;
            Ok(Report::success(json!({
                "mode": "pure",
                "value": value,
                "response": allocation_json(&y),
            })))
        }
        ResponseMode::Two => {
            if s.support_size() != 2 {
                return Err(malformed(
                    "mode `two` needs a strategy file with exactly two support entries".into(),
                ));
            }
            let (x, xp) = (&s.support()[0], &s.support()[1]);
            let level = bestresp::certified_pair_level(x, xp, &inst, &caps)?;
            let (reachable, witness) =
                bestresp::two_strategy_prevent_dp_capped(x, xp, &inst, level, level, &caps)?;
            if !reachable {
                return Err(Failure {
                    code: 1,
                    message: "internal error: certified level has no witness response".into(),
                });
            }
            let y = witness.expect("reachable prevention state carries a witness");
            Ok(Report::success(json!({
                "mode": "two",
                "certified_pair_level": level,
                "value": inst.total_weight() - level,
                "response": allocation_json(&y),
            })))
        }
        ResponseMode::Expected => {
            let (y, value) = bestresp::expected_best_response_dp(&inst, &s)?;
            Ok(Report::success(json!({
                "mode": "expected",
                "value": rational_json(&value),
                "response": allocation_json(&y),
            })))
        }
    }
}

fn solve_pure_ptas(u: &str, eps: &str, instance: &str) -> Result<Report, Failure> {
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let eps = parse_rational(eps)?;
    let (strategy, certified) = approx::pure_ptas(&inst, u, &eps)?;
    let bound = (rational_from_u64(1) - &eps) * rational_from_u64(u);
    let met = rational_from_u64(certified) >= bound;
    Ok(Report::graded(
        json!({
            "u": u,
            "epsilon": rational_json(&eps),
            "certified": certified,
            "bound": rational_json(&bound),
            "meets_bound": met,
            "strategy": strategy_json(&MixedStrategy::pure(strategy)),
        }),
        met,
    ))
}

fn solve_third(u: &str, instance: &str) -> Result<Report, Failure> {
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let (strategy, certified) = approx::third_approx_2strategy(&inst, u)?;
    let bound = u.div_ceil(3);
    let met = certified >= bound;
    Ok(Report::graded(
        json!({
            "u": u,
            "certified": certified,
            "bound": bound,
            "meets_bound": met,
            "strategy": strategy_json(&strategy),
        }),
        met,
    ))
}

fn solve_two_eps(u: &str, eps: &str, instance: &str) -> Result<Report, Failure> {
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let eps = parse_rational(eps)?;
    let (strategy, certified) = approx::eps_approx_2strategy(&inst, u, &eps)?;
    let bound = (rational_from_u64(1) - &eps) * rational_from_u64(u);
    let met = rational_from_u64(certified) >= bound;
    Ok(Report::graded(
        json!({
            "u": u,
            "epsilon": rational_json(&eps),
            "certified": certified,
            "bound": rational_json(&bound),
            "meets_bound": met,
            "strategy": strategy_json(&strategy),
        }),
        met,
    ))
}

fn feasibility_report(
    u: u64,
    extra: Option<(&str, Value)>,
    feasibility: Feasibility<(PureStrategy, PureStrategy)>,
) -> Result<Report, Failure> {
    let strategy = match feasibility.witness {
        Some((x, xp)) => strategy_json(&half_half(x, xp)?),
        None => Value::Null,
    };
    let mut body = json!({
        "u": u,
        "feasible": feasibility.ok,
        "margin": feasibility.margin.as_ref().map(rational_json).unwrap_or(Value::Null),
        "strategy": strategy,
    });
    if let Some((key, value)) = extra {
        body.as_object_mut()
            .expect("feasibility report is an object")
            .insert(key.to_string(), value);
    }
    let ok = feasibility.ok;
    Ok(Report::graded(body, ok))
}

fn continuous_uniform(u: &str, instance: &str) -> Result<Report, Failure> {
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let feasibility = continuous::solve_uniform_c2(&inst, u)?;
    feasibility_report(u, None, feasibility)
}

fn continuous_general(u: &str, eps: &str, instance: &str) -> Result<Report, Failure> {
    let inst = load_instance(instance)?;
    let u = parse_level(u)?;
    let eps = parse_rational(eps)?;
    let feasibility = continuous::solve_general_c2(&inst, u, &eps)?;
    feasibility_report(u, Some(("epsilon", rational_json(&eps))), feasibility)
}

fn verify(instance: &str, strategy: &str, u: &str) -> Result<Report, Failure> {
    let caps = Caps::from_env()?;
    let inst = load_instance(instance)?;
    let s = load_strategy(strategy, &inst)?;
    match s.support()[0].mode() {
        StrategyMode::Discrete => {
            let u = parse_level(u)?;
            let p = guaranteed_probability(&s, u, &inst, &caps)?;
            Ok(Report::success(json!({
                "mode": "discrete",
                "u": u,
                "guaranteed_probability": rational_json(&p),
            })))
        }
        StrategyMode::Continuous => {
            let u = parse_rational(u)?;
            let (x, xp) = match s.support_size() {
                1 => (&s.support()[0], &s.support()[0]),
                2 => (&s.support()[0], &s.support()[1]),
                _ => {
                    return Err(malformed(
                        "continuous verification needs one or two support entries".into(),
                    ))
                }
            };
            let (ok, tuple) = continuous::verify_2strategy(&inst, x, xp, &u)?;
            let violated = match tuple {
                Some(t) => json!({ "l1": t.l1, "l2": t.l2, "l12": t.l12 }),
                None => Value::Null,
            };
            Ok(Report::graded(
                json!({
                    "mode": "continuous",
                    "u": rational_json(&u),
                    "ok": ok,
                    "violated_tuple": violated,
                }),
                ok,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Desk-scale reproduction benchmarks.

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn allocation_text(p: &PureStrategy) -> String {
    let parts: Vec<String> = p.entries().iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn bench_tables() -> Result<Report, Failure> {
    let caps = Caps::from_env()?;
    let mut lines = Vec::new();
    let mut all = true;

    // Table 1: the published four-strategy on (4, 6, (5, 5, 5, 10)) secures
    // level 10 with probability exactly 2/5.
    let inst1 = GameInstance::new(4, 6, vec![5, 5, 5, 10])?;
    let support = vec![
        PureStrategy::discrete(vec![0, 0, 0, 4]),
        PureStrategy::discrete(vec![1, 1, 2, 0]),
        PureStrategy::discrete(vec![1, 2, 1, 0]),
        PureStrategy::discrete(vec![2, 1, 1, 0]),
    ];
    let probs = vec![ratio(2, 5), ratio(1, 5), ratio(1, 5), ratio(1, 5)];
    let mixed = MixedStrategy::new(support, probs)?;
    let p = guaranteed_probability(&mixed, 10, &inst1, &caps)?;
    let ok1 = p == ratio(2, 5);
    all &= ok1;
    lines.push(format!(
        "table 1: four-strategy on (4, 6, (5, 5, 5, 10)) secures u=10 with probability {p}, expected 2/5 ... {}",
        pass(ok1)
    ));

    // Table 2: the pure maximin of (5, 2, (10, 8, 7, 5)) is 15, and the
    // published allocation (2, 2, 1, 0) attains it.
    let inst2 = GameInstance::new(5, 2, vec![10, 8, 7, 5])?;
    let (value, witness) = oracle::exact_pure_maximin(&inst2, &caps)?;
    let ok2 = value == 15;
    all &= ok2;
    lines.push(format!(
        "table 2: exact pure maximin of (5, 2, (10, 8, 7, 5)) is {value} with witness {}, expected 15 ... {}",
        allocation_text(&witness),
        pass(ok2)
    ));
    let published = PureStrategy::discrete(vec![2, 2, 1, 0]);
    let (_, conceded) = bestresp::pure_best_response_dp(&inst2, &published)?;
    let secured = inst2.total_weight() - conceded;
    let ok3 = secured == 15;
    all &= ok3;
    lines.push(format!(
        "table 2: published allocation (2, 2, 1, 0) secures {secured}, expected 15 ... {}",
        pass(ok3)
    ));

    Ok(Report {
        text: lines.join("\n"),
        success: all,
    })
}

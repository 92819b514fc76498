mod args;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, ConstructCmd, VerifyCmd};
use output::Outcome;
use zsweight::constructions::{self, QuarticParams, Rational};
use zsweight::davenport::{davenport_with, max_davenport_over_size};
use zsweight::fd::{fd_with, FdConfig, FdStatus};
use zsweight::random_lab::{linear_grid, threshold_sweep, SweepConfig};
use zsweight::verify;
use zsweight::{parse_weight_list, Error, GroupSpec, SearchConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted { .. } | Error::CapExceeded { .. } => EXIT_UNKNOWN,
        Error::VerificationFailed(_) | Error::ConstructionFailed(_) => EXIT_VIOLATED,
        _ => EXIT_USAGE,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn run_davenport(a: &args::DavenportArgs) -> zsweight::Result<Outcome> {
    let g: GroupSpec = a.group.parse()?;
    let w = parse_weight_list(&a.weights, g.exponent())?;
    let input = json!({ "group": g.invariant_factors(), "weights": w.residues(), "cap": a.cap, "budget_nodes": a.budget_nodes });
    let cfg = SearchConfig::with_max_nodes(a.budget_nodes);
    match davenport_with(&g, &w, a.cap, &cfg) {
        Ok(r) => Ok(Outcome::new(input, to_value(&r))),
        Err(e @ (Error::BudgetExhausted { .. } | Error::CapExceeded { .. })) => {
            let nodes = match e {
                Error::BudgetExhausted { nodes, .. } => Some(nodes),
                _ => None,
            };
            Ok(Outcome::new(input, json!({ "status": "UNKNOWN", "reason": e.to_string(), "nodes_explored": nodes }))
                .exit(EXIT_UNKNOWN))
        }
        Err(e) => Err(e),
    }
}

fn run_fd(a: &args::FdArgs) -> zsweight::Result<Outcome> {
    let g: GroupSpec = a.group.parse()?;
    let input = json!({ "group": g.invariant_factors(), "k": a.k, "budget_nodes": a.budget_nodes });
    let r = fd_with(&g, a.k, &FdConfig::with_max_nodes(a.budget_nodes))?;
    let code = if r.status == FdStatus::Unknown { EXIT_UNKNOWN } else { EXIT_OK };
    Ok(Outcome::new(input, to_value(&r)).exit(code))
}

fn run_construct(c: &ConstructCmd) -> zsweight::Result<Outcome> {
    let (input, report) = match c {
        ConstructCmd::Singer { q } => {
            let d = zsweight::gf::singer_difference_set(*q)?;
            let census = zsweight::gf::difference_census(d.v(), d.elements());
            let out = json!({ "v": d.v(), "elements": d.elements(), "census_exact": census[1..].iter().all(|&c| c == 1) });
            return Ok(Outcome::new(json!({ "construction": "singer", "q": q }), out));
        }
        ConstructCmd::SingerWeights { p } => (json!({ "construction": "singer-weights", "p": p }), constructions::singer_weight_set(*p)?),
        ConstructCmd::Interval { p } => (json!({ "construction": "interval", "p": p }), constructions::interval_weight_set(*p)?),
        ConstructCmd::Symmetric { n, r } => (
            json!({ "construction": "symmetric", "n": n, "r": r }),
            constructions::symmetric_range_weight_set(*n, *r)?,
        ),
        ConstructCmd::Complement { p, r } => (
            json!({ "construction": "complement", "p": p, "r": r }),
            constructions::complement_weight_set(*p, *r)?,
        ),
        ConstructCmd::Quartic { p, c0, s, seed, budget_nodes } => {
            let c0: Rational = c0.parse()?;
            let s: Rational = s.parse()?;
            let params = QuarticParams {
                c0,
                s_num: s.num,
                s_den: s.den,
                seed: *seed,
                picks: None,
                max_nodes: *budget_nodes,
            };
            let input = json!({ "construction": "quartic", "p": p, "c0": c0.to_string(), "s": s.to_string(), "seed": seed, "budget_nodes": budget_nodes });
            let r = constructions::quartic_weight_set(*p, &params)?;
            let code = if r.verified_bound.is_some() || *p > constructions::QUARTIC_EXHAUSTIVE_LIMIT {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            };
            return Ok(Outcome::new(input, to_value(&r)).exit(code).seed(*seed));
        }
    };
    Ok(Outcome::new(input, to_value(&report)))
}

fn parse_theta(s: &str) -> zsweight::Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("--theta expects A:B:STEPS, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let steps: usize = steps.parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(bad());
    }
    Ok(linear_grid(a, b, steps))
}

fn run_sweep(a: &args::SweepArgs) -> zsweight::Result<Outcome> {
    let cfg = SweepConfig {
        p: a.p,
        k: a.k,
        theta_grid: parse_theta(&a.theta)?,
        trials: a.trials,
        seed: a.seed,
        omega: a.omega,
        max_nodes: a.budget_nodes,
    };
    let report = threshold_sweep(&cfg)?;
    if let Some(path) = &a.out {
        output::write_csv(path, &report.rows)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    }
    let code = if report.partial { EXIT_UNKNOWN } else { EXIT_OK };
    Ok(Outcome::new(to_value(&cfg), to_value(&report)).exit(code).seed(a.seed))
}

pub const DUAL_MAX_CASES: [(u64, u64); 6] = [(5, 2), (7, 2), (7, 3), (11, 2), (11, 3), (13, 2)];

fn run_verify(v: &VerifyCmd) -> zsweight::Result<Outcome> {
    let (input, report) = match v {
        VerifyCmd::KnownFormulas { max_n } => (json!({ "suite": "known-formulas", "max_n": max_n }), verify::known_formulas(*max_n)?),
        VerifyCmd::Singer { q } => (json!({ "suite": "singer", "q": q }), verify::singer_suite(q)?),
        VerifyCmd::Intervals { p_max } => (json!({ "suite": "intervals", "p_max": p_max }), verify::intervals_suite(*p_max)?),
        VerifyCmd::Relations { p, m, k } => match (p, m, k) {
            (Some(p), Some(m), Some(k)) => (
                json!({ "suite": "relations", "p": p, "m": m, "k": k }),
                verify::relations_suite(*p, *m, *k)?,
            ),
            _ => (json!({ "suite": "relations" }), verify::standard_relations()?),
        },
        VerifyCmd::DualMax { p, k } => {
            let cases: Vec<(u64, u64)> = match (p, k) {
                (Some(p), Some(k)) => vec![(*p, *k)],
                _ => DUAL_MAX_CASES.to_vec(),
            };
            (json!({ "suite": "dual-max", "cases": cases }), verify::dual_max_suite(&cases)?)
        }
        VerifyCmd::PairLemma { n_max } => (json!({ "suite": "pair-lemma", "n_max": n_max }), verify::pair_lemma_suite(*n_max)?),
        VerifyCmd::Complement { p } => (json!({ "suite": "complement", "p": p }), verify::complement_suite(p)?),
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATED };
    for bad in report.failures() {
        eprintln!("violated: {} (expected {}, computed {})", bad.name, bad.expected, bad.computed);
    }
    Ok(Outcome::new(input, to_value(&report)).exit(code))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Davenport(_) => "davenport",
        Command::DavenportMax(_) => "davenport-max",
        Command::Fd(_) => "fd",
        Command::Construct(_) => "construct",
        Command::Sweep(_) => "sweep",
        Command::Verify(_) => "verify",
    }
}

fn dispatch(c: &Command) -> zsweight::Result<Outcome> {
    match c {
        Command::Davenport(a) => run_davenport(a),
        Command::DavenportMax(a) => {
            let r = max_davenport_over_size(a.p, a.k)?;
            Ok(Outcome::new(json!({ "p": a.p, "k": a.k }), to_value(&r)))
        }
        Command::Fd(a) => run_fd(a),
        Command::Construct(c) => run_construct(c),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(v) => run_verify(v),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_USAGE {
                eprintln!("run `zsweight {name} --help` for usage");
            }
            return ExitCode::from(code);
        }
    };
    let threads = rayon::current_num_threads();
    if let Some(path) = &cli.log {
        let record = outcome.record(name, threads, start.elapsed().as_millis());
        if let Err(e) = output::append_record(path, &record) {
            eprintln!("error: cannot append to {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if cli.pretty {
        print!("{}", output::pretty(&outcome.result));
    } else {
        println!("{}", outcome.result);
    }
    ExitCode::from(outcome.code)
}

//! Command-line front end: parses operator expressions and boundary-problem
//! JSON, runs the requested library operation, and prints the result as
//! text or structured JSON. Exit codes: 0 success, 1 computation failure
//! or FAIL, 2 parse/usage error.

use clap::{Parser, Subcommand};
use idop::boundary::{self, BoundaryProblem};
use idop::funcalg::EvalPoint;
use num::Zero;
use idop::opalg::IntDiffOp;
use idop::singular::GeneralizedBoundaryProblem;
use idop::text;
use idop::{Error, Result};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "idop", about = "Exact integro-differential operator algebra")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(clap::Args)]
struct Inputs {
    /// File paths or inline expressions/JSON.
    args: Vec<String>,
    /// Inline input (repeatable), appended after the positional inputs.
    #[arg(short = 'e', long = "expr")]
    exprs: Vec<String>,
    /// Emit structured JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Re-derive every operator product through the rewrite system.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse an operator expression and print its normal form.
    Normalize(Inputs),
    /// Apply an operator to a function: `apply OP F`.
    Apply(Inputs),
    /// Multiply operators left to right.
    Mul(Inputs),
    /// Add operators.
    Add(Inputs),
    /// Green's operator of a regular boundary problem.
    Greens(Inputs),
    /// Green's function of a regular two-point problem on [0, b].
    Greensfn {
        #[command(flatten)]
        inputs: Inputs,
        /// Right endpoint b (default: taken from the conditions, else 1).
        #[arg(long)]
        endpoint: Option<String>,
    },
    /// Compose two boundary problems.
    Compose(Inputs),
    /// Factor a problem along T = T1.T2, or a differential operator alone.
    Factor(Inputs),
    /// Compatibility conditions of a (possibly singular) problem.
    Compat(Inputs),
    /// Projector onto the admissible forcing functions.
    Project(Inputs),
    /// Embed a generalized problem into a regular one.
    Embed(Inputs),
    /// Generalized Green's operator.
    Gengreens(Inputs),
    /// Verify a problem: regularity, T.G identity, condition annihilation.
    Check(Inputs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let inputs = match &cli.verb {
        Verb::Normalize(i)
        | Verb::Apply(i)
        | Verb::Mul(i)
        | Verb::Add(i)
        | Verb::Greens(i)
        | Verb::Compose(i)
        | Verb::Factor(i)
        | Verb::Compat(i)
        | Verb::Project(i)
        | Verb::Embed(i)
        | Verb::Gengreens(i)
        | Verb::Check(i) => i,
        Verb::Greensfn { inputs, .. } => inputs,
    };
    if inputs.oracle {
        idop::opalg::set_oracle_check(true);
    }
    let outcome = std::panic::catch_unwind(|| run(&cli));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::Schema(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
        Err(_) => {
            eprintln!("error: internal consistency check failed");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.verb {
        Verb::Normalize(i) => {
            let op = text::parse_operator(&one_input(i)?)?;
            emit_operator(&op, i.json);
        }
        Verb::Apply(i) => {
            let (a, b) = two_inputs(i)?;
            let op = text::parse_operator(&a)?;
            let f = text::parse_function(&b)?;
            let res = op.apply(&f);
            if i.json {
                println!("{}", json!({ "function": text::print_function(&res) }));
            } else {
                println!("{}", text::print_function(&res));
            }
        }
        Verb::Mul(i) => {
            let ops = all_operators(i)?;
            let mut acc = IntDiffOp::one();
            for op in &ops {
                acc = &acc * op;
            }
            emit_operator(&acc, i.json);
        }
        Verb::Add(i) => {
            let ops = all_operators(i)?;
            let mut acc = IntDiffOp::zero();
            for op in &ops {
                acc = &acc + op;
            }
            emit_operator(&acc, i.json);
        }
        Verb::Greens(i) => {
            let p = parse_problem(&one_input(i)?)?;
            let g = match p {
                Problem::Regular(bp) => bp.greens_operator()?,
                Problem::Generalized(gp) => gp.greens_operator()?,
            };
            emit_operator(&g, i.json);
        }
        Verb::Greensfn { inputs: i, endpoint } => {
            let p = parse_problem(&one_input(i)?)?;
            let bp = match p {
                Problem::Regular(bp) => bp,
                Problem::Generalized(_) => {
                    return Err(Error::Schema(
                        "greensfn expects a regular boundary problem".into(),
                    ))
                }
            };
            let b = match endpoint {
                Some(s) => text::parse_point(s)?,
                None => infer_endpoint(bp.conditions()),
            };
            let gf = boundary::greens_function(&bp, &b)?;
            let lower = text::print_bivar(&gf.lower);
            let upper = text::print_bivar(&gf.upper);
            if i.json {
                println!(
                    "{}",
                    json!({
                        "interval": ["0", text::print_point(&gf.b)],
                        "lower": lower,
                        "upper": upper,
                    })
                );
            } else {
                println!("lower: {lower}");
                println!("upper: {upper}");
            }
        }
        Verb::Compose(i) => {
            let (a, b) = two_inputs(i)?;
            let p1 = regular_problem(&a)?;
            let p2 = regular_problem(&b)?;
            let c = boundary::compose(&p1, &p2)?;
            emit_problem(&c, i.json);
        }
        Verb::Factor(i) => {
            let texts = gather(i)?;
            match texts.len() {
                1 => {
                    let t = text::parse_operator(&texts[0])?;
                    let factors = boundary::factor_diffop(&t)?;
                    if i.json {
                        let v: Vec<String> =
                            factors.iter().map(text::print_operator).collect();
                        println!("{}", json!({ "factors": v }));
                    } else {
                        for f in &factors {
                            println!("{}", text::print_operator(f));
                        }
                    }
                }
                3 => {
                    let p = regular_problem(&texts[0])?;
                    let t1 = text::parse_operator(&texts[1])?;
                    let t2 = text::parse_operator(&texts[2])?;
                    let (f1, f2) = boundary::factor_problem(&p, &t1, &t2)?;
                    if i.json {
                        println!(
                            "{}",
                            json!({ "left": problem_json(&f1), "right": problem_json(&f2) })
                        );
                    } else {
                        print_problem(&f1);
                        print_problem(&f2);
                    }
                }
                n => {
                    return Err(Error::Schema(format!(
                        "factor takes a problem plus two operators, or one operator ({n} inputs given)"
                    )))
                }
            }
        }
        Verb::Compat(i) => {
            let p = parse_problem(&one_input(i)?)?;
            let conds = match p {
                Problem::Regular(bp) => {
                    GeneralizedBoundaryProblem::new(
                        bp.operator().clone(),
                        bp.conditions().to_vec(),
                        vec![],
                    )?
                    .compatibility_conditions()?
                }
                Problem::Generalized(gp) => gp.compatibility_conditions()?,
            };
            if i.json {
                let v: Vec<String> = conds.iter().map(text::print_operator).collect();
                println!("{}", json!({ "compatibility": v }));
            } else if conds.is_empty() {
                println!("none");
            } else {
                for c in &conds {
                    println!("{}", text::print_operator(c));
                }
            }
        }
        Verb::Project(i) => {
            let q = match parse_problem(&one_input(i)?)? {
                Problem::Regular(_) => IntDiffOp::one(),
                Problem::Generalized(gp) => gp.projector_q()?,
            };
            emit_operator(&q, i.json);
        }
        Verb::Embed(i) => {
            let gp = generalized_problem(&one_input(i)?)?;
            let bp = gp.embed_regular()?;
            emit_problem(&bp, i.json);
        }
        Verb::Gengreens(i) => {
            let gp = generalized_problem(&one_input(i)?)?;
            emit_operator(&gp.greens_operator()?, i.json);
        }
        Verb::Check(i) => {
            return check(&one_input(i)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

// -- input plumbing ---------------------------------------------------------

fn gather(i: &Inputs) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for a in i.args.iter().chain(i.exprs.iter()) {
        if std::path::Path::new(a).is_file() {
            out.push(std::fs::read_to_string(a).map_err(|e| Error::Schema(e.to_string()))?);
        } else {
            out.push(a.clone());
        }
    }
    Ok(out)
}

fn one_input(i: &Inputs) -> Result<String> {
    let mut v = gather(i)?;
    if v.len() != 1 {
        return Err(Error::Schema(format!("expected one input, got {}", v.len())));
    }
    Ok(v.remove(0))
}

fn two_inputs(i: &Inputs) -> Result<(String, String)> {
    let mut v = gather(i)?;
    if v.len() != 2 {
        return Err(Error::Schema(format!("expected two inputs, got {}", v.len())));
    }
    let b = v.remove(1);
    Ok((v.remove(0), b))
}

fn all_operators(i: &Inputs) -> Result<Vec<IntDiffOp>> {
    let texts = gather(i)?;
    if texts.is_empty() {
        return Err(Error::Schema("expected at least one operator".into()));
    }
    texts.iter().map(|t| text::parse_operator(t)).collect()
}

enum Problem {
    Regular(BoundaryProblem),
    Generalized(GeneralizedBoundaryProblem),
}

fn parse_problem(input: &str) -> Result<Problem> {
    let v: Value = serde_json::from_str(input)
        .map_err(|e| Error::Schema(format!("invalid problem JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("problem must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "T" | "conditions" | "exceptional" | "system") {
            return Err(Error::Schema(format!("unknown field \"{key}\"")));
        }
    }
    let t = text::parse_operator(
        obj.get("T")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema("missing string field \"T\"".into()))?,
    )?;
    let conds = str_array(obj.get("conditions"), "conditions")?
        .iter()
        .map(|s| text::parse_operator(s))
        .collect::<Result<Vec<_>>>()?;
    let system = match obj.get("system") {
        Some(s) => Some(
            str_array(Some(s), "system")?
                .iter()
                .map(|s| text::parse_function(s))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    match obj.get("exceptional") {
        Some(e) => {
            let exc = str_array(Some(e), "exceptional")?
                .iter()
                .map(|s| text::parse_function(s))
                .collect::<Result<Vec<_>>>()?;
            let mut gp = GeneralizedBoundaryProblem::new(t, conds, exc)?;
            if let Some(basis) = system {
                gp = gp.with_system(basis)?;
            }
            Ok(Problem::Generalized(gp))
        }
        None => {
            let mut bp = BoundaryProblem::new(t, conds)?;
            if let Some(basis) = system {
                bp = bp.with_system(basis)?;
            }
            Ok(Problem::Regular(bp))
        }
    }
}

fn str_array(v: Option<&Value>, field: &str) -> Result<Vec<String>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema(format!("missing array field \"{field}\"")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Schema(format!("\"{field}\" entries must be strings")))
        })
        .collect()
}

fn regular_problem(input: &str) -> Result<BoundaryProblem> {
    match parse_problem(input)? {
        Problem::Regular(bp) => Ok(bp),
        Problem::Generalized(_) => {
            Err(Error::Schema("expected a problem without \"exceptional\"".into()))
        }
    }
}

fn generalized_problem(input: &str) -> Result<GeneralizedBoundaryProblem> {
    match parse_problem(input)? {
        Problem::Generalized(gp) => Ok(gp),
        Problem::Regular(bp) => GeneralizedBoundaryProblem::new(
            bp.operator().clone(),
            bp.conditions().to_vec(),
            vec![],
        ),
    }
}

/// The nonzero evaluation point of a two-point condition set, default 1.
fn infer_endpoint(conds: &[IntDiffOp]) -> EvalPoint {
    for c in conds {
        for at in c.bound_part().keys() {
            if !(at.rat.is_zero() && at.pi_mult.is_zero()) {
                return at.clone();
            }
        }
    }
    EvalPoint::one()
}

// -- output -----------------------------------------------------------------

fn operator_json(op: &IntDiffOp) -> Value {
    let diff: Vec<String> = op
        .diff_part()
        .iter()
        .map(text::print_function)
        .collect();
    let int: Vec<Value> = op
        .int_part()
        .iter()
        .map(|(k, f)| {
            json!({
                "coeff": text::print_function(f),
                "kernel": text::print_function(&k.to_poly()),
            })
        })
        .collect();
    let bound: Vec<Value> = op
        .bound_part()
        .iter()
        .map(|(at, ba)| {
            let local: Vec<Value> = ba
                .local
                .iter()
                .map(|(ord, f)| json!({ "order": ord, "coeff": text::print_function(f) }))
                .collect();
            let global: Vec<Value> = ba
                .global
                .iter()
                .map(|(k, f)| {
                    json!({
                        "coeff": text::print_function(f),
                        "kernel": text::print_function(&k.to_poly()),
                    })
                })
                .collect();
            json!({
                "point": text::print_point(at),
                "local": local,
                "global": global,
            })
        })
        .collect();
    json!({
        "text": text::print_operator(op),
        "diff": diff,
        "int": int,
        "boundary": bound,
    })
}

fn emit_operator(op: &IntDiffOp, as_json: bool) {
    if as_json {
        println!("{}", operator_json(op));
    } else {
        println!("{}", text::print_operator(op));
    }
}

fn problem_json(p: &BoundaryProblem) -> Value {
    let conds: Vec<String> = p.conditions().iter().map(text::print_operator).collect();
    json!({ "T": text::print_operator(p.operator()), "conditions": conds })
}

fn print_problem(p: &BoundaryProblem) {
    println!("T: {}", text::print_operator(p.operator()));
    println!("conditions:");
    for c in p.conditions() {
        println!("  {}", text::print_operator(c));
    }
}

fn emit_problem(p: &BoundaryProblem, as_json: bool) {
    if as_json {
        println!("{}", problem_json(p));
    } else {
        print_problem(p);
    }
}

// -- check pipeline ---------------------------------------------------------

fn check(input: &str) -> Result<ExitCode> {
    let mut ok = true;
    let mut report = |label: &str, pass: bool| {
        println!("{} {}", if pass { "PASS" } else { "FAIL" }, label);
        ok &= pass;
    };
    match parse_problem(input)? {
        Problem::Regular(bp) => {
            let regular = bp.is_regular()?;
            report("regular", regular);
            if regular {
                let g = bp.greens_operator()?;
                let tg = bp.operator() * &g;
                report("T.G = 1", tg.equiv(&IntDiffOp::one()));
                for (k, c) in bp.conditions().iter().enumerate() {
                    report(&format!("b[{}].G = 0", k + 1), (c * &g).is_zero());
                }
            }
        }
        Problem::Generalized(gp) => {
            let regular = gp.is_regular()?;
            report("regular (generalized)", regular);
            if regular {
                let q = gp.projector_q()?;
                report("Q^2 = Q", (&q * &q).equiv(&q));
                for (k, c) in gp.compatibility_conditions()?.iter().enumerate() {
                    report(&format!("k[{}].Q = 0", k + 1), (c * &q).is_zero());
                }
                let g = gp.greens_operator()?;
                let tg = gp.operator() * &g;
                report("T.G = Q", tg.equiv(&q));
                for (k, c) in gp.conditions().iter().enumerate() {
                    report(&format!("b[{}].G = 0", k + 1), (c * &g).is_zero());
                }
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

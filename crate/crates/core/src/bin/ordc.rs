//! `ordc`: command-line access to the term system, hierarchies and Goodstein runs.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use ordinal_goodstein::checks::{run_suite, CheckConfig, Suite};
use ordinal_goodstein::classical::{classical_base_change, classical_goodstein, hereditary};
use ordinal_goodstein::enumerate::enumerate_quotient;
use ordinal_goodstein::fundseq::{expand, fund_seq, support};
use ordinal_goodstein::goodstein::{base_change, run_partial, Quotient};
use ordinal_goodstein::hierarchy::{
    h_k, hardy, pred_with_budget, slow_growing, takeuti_approx, HardyConvention, StepBudget,
    DEFAULT_MAX_BITS, DEFAULT_MAX_STEPS,
};
use ordinal_goodstein::inversion::{imc, invert_all, member_inductive, member_quotient, member_tk};
use ordinal_goodstein::term::{chi, compare, degree, localization, star};
use ordinal_goodstein::{format_term, parse, parse_strict, OrdinalError, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "ordc", version, about = "Ordinal terms below the Takeuti ordinal and generalized Goodstein processes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Print ω, Ωᵢ and ε₀ with their short names.
    #[arg(long, global = true)]
    sugar: bool,
    /// Reject sums that are not already in normal form.
    #[arg(long, global = true)]
    strict: bool,
    /// Use the classical hereditary base-k machinery instead.
    #[arg(long, global = true)]
    classical: bool,
    /// Hardy limit convention.
    #[arg(long, global = true, default_value = "shifted")]
    convention: HardyConvention,
    /// Step budget for evaluations.
    #[arg(long, global = true, env = "ORD_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and print in canonical form.
    Parse { term: String },
    /// Reformat a term.
    Fmt { term: String },
    /// Compare two terms: prints <, = or >.
    Cmp { a: String, b: String },
    /// The fundamental sequence element a[z].
    Fundseq { term: String, zeta: String },
    /// The descent a, a[k], a[k][k], ...
    Expand {
        term: String,
        k: u64,
        #[arg(default_value_t = 20)]
        steps: usize,
    },
    /// The ⋆ᵢ operation.
    Star { i: u32, term: String },
    /// The characteristic function χ^{Ω_{i+1}}.
    Chi { i: u32, term: String },
    /// Cofinality degree.
    Degree { term: String },
    /// The support term.
    Support { term: String },
    /// The Ωᵢ-localization of a principal term.
    Localize { term: String },
    /// Iterative maximal coefficient.
    Imc { term: String },
    /// All witnesses a = b[z].
    Invert { term: String },
    /// Membership in T°[k] (or T/k with --quotient).
    Member {
        term: String,
        k: u64,
        /// Test T/k rather than T°[k].
        #[arg(long)]
        quotient: bool,
        /// Use the inductive definition.
        #[arg(long)]
        inductive: bool,
    },
    /// Slow-growing G_k.
    Gk { k: u64, term: String },
    /// Predecessor P_k.
    Pk { k: u64, term: String },
    /// Hardy function H_a(x).
    Hardy { term: String, x: BigUint },
    /// Goodstein length function h_k.
    Hk { k: u64, term: String },
    /// The n-th Takeuti approximation.
    Takeuti { n: u32 },
    /// Successor within T°[k].
    Succ { term: String, k: u64 },
    /// G_k⁻¹(n).
    Ginv { n: BigUint, k: u64 },
    /// N[k ↦ l].
    Basechange { n: BigUint, k: u64, l: u64 },
    /// Run the Goodstein process from seed n at base k.
    Goodstein {
        n: BigUint,
        k: u64,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// The first members of T°[k].
    Enumerate { k: u64, count: usize },
    /// Run a property suite over generated terms.
    Check {
        #[arg(long, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 5)]
        nodes: u64,
        #[arg(long, env = "ORD_MAX_INDEX", default_value_t = 2)]
        index: u32,
    },
}

enum Out {
    Line(String, Value),
    Lines(Vec<String>, Value),
    /// Output already printed; a nonzero code still applies.
    Fail(String, Value),
}

fn line(text: impl Into<String>, value: Value) -> Out {
    Out::Line(text.into(), value)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(out) => emit(&cli, out),
        Err(e) => {
            let code = if e.is_budget() { 2 } else { 1 };
            match cli.format {
                Format::Json => println!("{}", json!({ "error": e.to_string(), "budget": e.is_budget() })),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}

fn emit(cli: &Cli, out: Out) -> ExitCode {
    let (text, value, code) = match out {
        Out::Line(t, v) => (t, v, 0),
        Out::Lines(ls, v) => (ls.join("\n"), v, 0),
        Out::Fail(t, v) => (t, v, 1),
    };
    match cli.format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
    ExitCode::from(code)
}

fn dispatch(cli: &Cli) -> Result<Out, OrdinalError> {
    let term = |s: &str| if cli.strict { parse_strict(s) } else { parse(s) };
    let show = |t: &Term| format_term(t, cli.sugar);
    let budget = || StepBudget::new(cli.max_steps, DEFAULT_MAX_BITS);
    Ok(match &cli.verb {
        Verb::Parse { term: s } => {
            let a = term(s)?;
            line(show(&a), json!({ "term": show(&a), "size": a.size(), "limit": a.is_limit() }))
        }
        Verb::Fmt { term: s } => {
            let a = term(s)?;
            line(show(&a), json!({ "term": show(&a) }))
        }
        Verb::Cmp { a, b } => {
            let sym = match compare(&term(a)?, &term(b)?) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            line(sym, json!({ "order": sym }))
        }
        Verb::Fundseq { term: s, zeta } => {
            let r = fund_seq(&term(s)?, &term(zeta)?)?;
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Expand { term: s, k, steps } => {
            let chain: Vec<String> = expand(&term(s)?, *k, *steps)?.iter().map(show).collect();
            let v = json!({ "chain": chain });
            Out::Lines(chain, v)
        }
        Verb::Star { i, term: s } => {
            let r = star(*i, &term(s)?);
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Chi { i, term: s } => {
            let r = chi(*i, &term(s)?);
            line(u8::from(r).to_string(), json!({ "chi": u8::from(r) }))
        }
        Verb::Degree { term: s } => {
            let d = degree(&term(s)?);
            line(d.to_string(), json!({ "degree": d }))
        }
        Verb::Support { term: s } => {
            let r = support(&term(s)?)?;
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Localize { term: s } => {
            let a = term(s)?;
            let i = a
                .as_principal()
                .ok_or_else(|| OrdinalError::NotPrincipal(show(&a)))?
                .index();
            let chain: Vec<String> = localization(i, &a)?.chain.iter().map(show).collect();
            let v = json!({ "index": i, "chain": chain });
            line(chain.join(" < "), v)
        }
        Verb::Imc { term: s } => {
            let n = imc(&term(s)?)?;
            line(n.to_string(), json!({ "imc": n }))
        }
        Verb::Invert { term: s } => {
            let cs = invert_all(&term(s)?)?;
            let rows: Vec<String> = cs
                .iter()
                .map(|c| format!("{}\t{}\t{}", show(&c.beta), show(&c.zeta), c.case))
                .collect();
            let v: Vec<Value> = cs
                .iter()
                .map(|c| json!({ "beta": show(&c.beta), "zeta": show(&c.zeta), "case": c.case.to_string() }))
                .collect();
            Out::Lines(rows, json!({ "candidates": v }))
        }
        Verb::Member { term: s, k, quotient, inductive } => {
            let a = term(s)?;
            let r = match (quotient, inductive) {
                (false, _) => member_tk(&a, *k)?,
                (true, false) => member_quotient(&a, *k)?,
                (true, true) => member_inductive(&a, *k)?,
            };
            line(r.to_string(), json!({ "member": r }))
        }
        Verb::Gk { k, term: s } => {
            let v = slow_growing(*k, &term(s)?, &mut budget())?;
            line(v.to_string(), json!({ "value": v.to_string() }))
        }
        Verb::Pk { k, term: s } => {
            let r = pred_with_budget(*k, &term(s)?, &mut budget())?;
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Hardy { term: s, x } => {
            let v = hardy(&term(s)?, x, cli.convention, &mut budget())?;
            line(v.to_string(), json!({ "value": v.to_string(), "convention": cli.convention.to_string() }))
        }
        Verb::Hk { k, term: s } => {
            let v = h_k(*k, &term(s)?, &mut budget())?;
            line(v.to_string(), json!({ "value": v.to_string() }))
        }
        Verb::Takeuti { n } => {
            let t = takeuti_approx(*n);
            line(show(&t), json!({ "term": show(&t) }))
        }
        Verb::Succ { term: s, k } => {
            let a = term(s)?;
            if !member_tk(&a, *k)? {
                return Err(OrdinalError::Domain(format!("{} is not in T°[{k}]", show(&a))));
            }
            let r = ordinal_goodstein::goodstein::succ_in_quotient(&a, *k)?;
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Ginv { n, k } => {
            if cli.classical {
                let r = hereditary(n, *k)?.to_string();
                return Ok(line(r.clone(), json!({ "term": r })));
            }
            let r = Quotient::new(*k)?.g_inverse(n, &mut budget())?;
            line(show(&r), json!({ "term": show(&r) }))
        }
        Verb::Basechange { n, k, l } => {
            let v = if cli.classical {
                classical_base_change(n, *k, *l)?
            } else {
                base_change(n, *k, *l, &mut budget())?
            };
            line(v.to_string(), json!({ "value": v.to_string() }))
        }
        Verb::Goodstein { n, k, steps } => {
            let mut b = budget();
            let (trace, err) = if cli.classical {
                (classical_goodstein(n, *k, *steps, &b)?, None)
            } else {
                run_partial(n, *k, *steps, &mut b)
            };
            match err {
                Some(e) if !e.is_budget() => return Err(e),
                _ => {}
            }
            let v = serde_json::to_value(&trace).expect("serializable");
            line(trace.to_text().trim_end(), v)
        }
        Verb::Enumerate { k, count } => {
            let ts: Vec<String> = enumerate_quotient(*k, *count)?.iter().map(show).collect();
            let v = json!({ "base": k, "terms": ts });
            Out::Lines(ts, v)
        }
        Verb::Check { suite, nodes, index } => {
            let cfg = CheckConfig::new(*nodes, *index);
            let suites = if suite.is_empty() { Suite::ALL.to_vec() } else { suite.clone() };
            let mut reports = Vec::new();
            for s in suites {
                reports.extend(run_suite(s, &cfg)?);
            }
            let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            let v = json!({ "nodes": nodes, "index": index, "reports": reports });
            if reports.iter().all(|r| r.passed()) {
                line(text, v)
            } else {
                Out::Fail(text, v)
            }
        }
    })
}

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ratgroup::core::cycles::{self, analyze_cycles, is_oblivious, lipschitz_report};
use ratgroup::core::{minimize, Element, Expr, Transducer, Word};
use ratgroup::gen::{Generator, GeneratorSpec};
use ratgroup::verify::{run_all, Suite, SuiteConfig};
use ratgroup::{dot, expr, format};

#[derive(Parser)]
#[command(
    name = "ratgroup",
    version,
    about = "Asynchronous binary transducers and the rational group"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Element,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Print the output prefix determined by a finite input word.
    Eval { expr: String, word: String },
    /// Print the canonical machine and its number of restrictions.
    Canon { expr: String },
    /// Exit 0 when both arguments induce the same map, 1 otherwise.
    Equal { a: String, b: String },
    /// Cycle structure, obliviousness and cycle output ratios.
    Analyze {
        expr: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Graphviz rendering of the realized machine.
    Dot { expr: String },
    /// Run a property suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        p: Option<u64>,
        /// Element depth of generated cases.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Print a reproducible random element or machine.
    Gen {
        #[arg(value_enum, default_value_t = GenKind::Element)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        states: usize,
    },
}

type CliResult = Result<ExitCode, String>;

macro_rules! out {
    ($o:expr, $($arg:tt)*) => {{
        let _ = writeln!($o, $($arg)*);
    }};
}

/// A machine file path or an expression.
struct Input {
    element: Element,
    names: Option<Vec<String>>,
}

fn load(arg: &str) -> Result<Input, String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        let (machine, names) = format::parse_named(&text).map_err(|e| format!("{arg}: {e}"))?;
        return Ok(Input {
            element: Element::raw(arg, machine, None),
            names: Some(names),
        });
    }
    let element = expr::parse(arg).map_err(|e| format!("`{arg}`: {e}"))?;
    Ok(Input {
        element,
        names: None,
    })
}

fn print_json(o: &mut String, v: &serde_json::Value) {
    out!(
        o,
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn eval(o: &mut String, fmt: OutputFormat, e: &str, word: &str) -> CliResult {
    let input = load(e)?;
    let w = Word::parse(word).map_err(|e| format!("bad word `{word}`: {e}"))?;
    let out = input.element.eval_prefix(&w);
    match fmt {
        OutputFormat::Text => out!(o, "{out}"),
        OutputFormat::Json => print_json(
            o,
            &json!({ "input": w.to_string(), "output": out.to_string() }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn canon(o: &mut String, fmt: OutputFormat, e: &str) -> CliResult {
    let input = load(e)?;
    let c = minimize(input.element.forward()).map_err(|e| e.to_string())?;
    let m = c.machine();
    match fmt {
        OutputFormat::Text => {
            out!(o, "states: {}", m.num_states());
            out!(o, "restrictions: {}", c.restriction_count());
            out!(o, "{}", format::serialize(m));
        }
        OutputFormat::Json => print_json(
            o,
            &json!({
                "states": m.num_states(),
                "restrictions": c.restriction_count(),
                "machine": format::to_json_value(m),
            }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn equal(o: &mut String, fmt: OutputFormat, a: &str, b: &str) -> CliResult {
    let (x, y) = (load(a)?, load(b)?);
    let same = x.element.equals(&y.element).map_err(|e| e.to_string())?;
    match fmt {
        OutputFormat::Text => out!(o, "{}", if same { "equal" } else { "not equal" }),
        OutputFormat::Json => print_json(o, &json!({ "equal": same })),
    }
    Ok(if same {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// What the machine tells us about the element: one oblivious machine is a
/// witness; a non-oblivious machine settles nothing except for `f_p` itself.
fn element_verdict(e: &Element, machine_oblivious: bool, p: u64) -> &'static str {
    if machine_oblivious {
        "oblivious (witnessed by this machine)"
    } else if matches!(e.expr(), Expr::Fp(q) if *q == p) {
        "not oblivious (f_p is never oblivious to p)"
    } else {
        "undetermined (another machine might be oblivious)"
    }
}

fn analyze(o: &mut String, fmt: OutputFormat, e: &str, p: Option<u64>) -> CliResult {
    let input = load(e)?;
    let machine: Transducer = match minimize(input.element.forward()) {
        Ok(c) => c.into_machine(),
        Err(_) => input.element.forward().clone(),
    };
    let report = analyze_cycles(&machine);
    let lip = lipschitz_report(&machine);
    let oblivious = match p {
        Some(p) => Some((
            p,
            is_oblivious(&machine, p).map_err(|e| format!("{} is not prime", e.0))?,
        )),
        None => None,
    };
    match fmt {
        OutputFormat::Text => {
            out!(o, "states: {}", machine.num_states());
            out!(o, "accessible: {}", report.accessible_count);
            for (i, scc) in report.sccs.iter().enumerate() {
                let states: Vec<String> = scc.states.iter().map(|s| s.to_string()).collect();
                let min = scc.min_output_per_cycle;
                out!(
                    o,
                    "scc {i}: states {{{}}} period {} min-cycle-output {min}",
                    states.join(", "),
                    scc.period
                );
            }
            out!(
                o,
                "empty-output cycle: {}",
                if report.has_empty_output_cycle() {
                    "yes"
                } else {
                    "no"
                }
            );
            match (&lip.min_ratio, &lip.max_ratio, lip.truncated) {
                (_, _, true) => out!(o, "cycle output ratios: cycle enumeration truncated"),
                (Some(lo), Some(hi), false) => out!(o, "cycle output ratios: {lo} .. {hi}"),
                _ => out!(o, "cycle output ratios: no cycles"),
            }
            if let Some((p, obl)) = oblivious {
                out!(
                    o,
                    "machine oblivious to {p}: {}",
                    if obl { "yes" } else { "no" }
                );
                out!(o, "element: {}", element_verdict(&input.element, obl, p));
            }
        }
        OutputFormat::Json => {
            let sccs: Vec<_> = report
                .sccs
                .iter()
                .map(|scc| {
                    json!({
                        "states": scc.states.iter().map(|s| s.index()).collect::<Vec<_>>(),
                        "period": scc.period,
                        "min_output_per_cycle": scc.min_output_per_cycle,
                        "has_empty_output_cycle": scc.has_empty_output_cycle,
                    })
                })
                .collect();
            let mut v = json!({
                "states": machine.num_states(),
                "accessible": report.accessible_count,
                "sccs": sccs,
                "has_empty_output_cycle": report.has_empty_output_cycle(),
                "min_ratio": lip.min_ratio.map(|r| r.to_string()),
                "max_ratio": lip.max_ratio.map(|r| r.to_string()),
                "cycles_truncated": lip.truncated,
            });
            if let Some((p, obl)) = oblivious {
                v["p"] = json!(p);
                v["machine_oblivious"] = json!(obl);
                v["element"] = json!(element_verdict(&input.element, obl, p));
            }
            print_json(o, &v);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dot_cmd(o: &mut String, e: &str) -> CliResult {
    let input = load(e)?;
    let text = match &input.names {
        Some(names) => dot::to_dot_named(input.element.forward(), names),
        None => dot::to_dot(input.element.forward()),
    };
    o.push_str(&text);
    Ok(ExitCode::SUCCESS)
}

fn verify(o: &mut String, fmt: OutputFormat, suite: &str, cfg: SuiteConfig) -> CliResult {
    let suites = Suite::parse_selection(suite).map_err(|e| e.to_string())?;
    if let Some(p) = cfg.p {
        if !cycles::is_prime(p) {
            return Err(format!("--p {p} is not prime"));
        }
    }
    let reports = run_all(&suites, &cfg);
    let passed = reports.iter().all(|r| r.passed());
    match fmt {
        OutputFormat::Text => {
            for r in &reports {
                o.push_str(&r.to_string());
            }
        }
        OutputFormat::Json => print_json(
            o,
            &serde_json::to_value(&reports).expect("reports serialize"),
        ),
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn gen(o: &mut String, fmt: OutputFormat, kind: GenKind, spec: GeneratorSpec) -> CliResult {
    let mut g = Generator::new(spec.clone());
    match kind {
        GenKind::Element => {
            let e = g.element(spec.depth);
            match fmt {
                OutputFormat::Text => out!(o, "{e}"),
                OutputFormat::Json => print_json(
                    o,
                    &json!({
                        "expr": e.to_string(),
                        "machine": format::to_json_value(e.forward()),
                    }),
                ),
            }
        }
        GenKind::Machine => {
            let m = g.machine();
            match fmt {
                OutputFormat::Text => out!(o, "{}", format::serialize(&m)),
                OutputFormat::Json => print_json(o, &format::to_json_value(&m)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(o: &mut String, cli: Cli) -> CliResult {
    let fmt = cli.format;
    match cli.command {
        Command::Eval { expr, word } => eval(o, fmt, &expr, &word),
        Command::Canon { expr } => canon(o, fmt, &expr),
        Command::Equal { a, b } => equal(o, fmt, &a, &b),
        Command::Analyze { expr, p } => analyze(o, fmt, &expr, p),
        Command::Dot { expr } => dot_cmd(o, &expr),
        Command::Verify {
            suite,
            seed,
            p,
            depth,
            cases,
        } => verify(
            o,
            fmt,
            &suite,
            SuiteConfig {
                seed,
                cases,
                p,
                element_depth: depth,
                ..Default::default()
            },
        ),
        Command::Gen {
            kind,
            seed,
            depth,
            states,
        } => gen(
            o,
            fmt,
            kind,
            GeneratorSpec {
                seed,
                depth,
                max_states: states,
                ..Default::default()
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut o = String::new();
    let result = run(&mut o, cli);
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().write_all(o.as_bytes());
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

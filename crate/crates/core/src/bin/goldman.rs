use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use goldman::bracket::{BracketEngine, FormalSum, ParseError};
use goldman::cayley::{default_sample_length, estimate_growth, EnumerationError, BUDGET_ENV};
use goldman::hyperbolic::translation_length;
use goldman::lift::{systole_estimate, LiftError};
use goldman::probe::{default_max_len, probe_center};
use goldman::surface::{SurfaceError, SurfaceGroup};
use goldman::svg::{render, Overlays};
use goldman::verify::{run_suite, Suite, VerifyError};
use goldman::word::Word;

/// `println!` that stops quietly when the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

#[derive(Parser)]
#[command(
    name = "goldman",
    version,
    about = "Goldman brackets and intersection numbers on hyperbolic surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Surface inspection.
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Bracket of two classes, `[α^power, β]`.
    Bracket {
        /// Preset name or path to a surface JSON file.
        surface: String,
        alpha: String,
        beta: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Geometric intersection number of two classes.
    Intersect {
        surface: String,
        alpha: String,
        beta: String,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Brackets a candidate sum against every class up to a word length.
    ProbeCenter {
        surface: String,
        /// Formal sum such as `2*<ab> - <a>`.
        candidate: String,
        /// Defaults to 3 on closed surfaces and 5 otherwise.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Runs seeded invariant suites.
    Verify {
        surface: String,
        /// Comma-separated subset of axes, skew, jacobi, noncancel, peripheral.
        #[arg(long, value_delimiter = ',', default_value = "axes,skew,jacobi,noncancel,peripheral")]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Writes a Poincaré disk SVG of axes and overlays.
    ExportDisk {
        surface: String,
        words: Vec<String>,
        #[arg(long)]
        svg: PathBuf,
        /// Also draw translates by group elements within this radius of the basepoint.
        #[arg(long)]
        translates: Option<f64>,
        /// Lift overlay for a pair, as `alpha,beta`. Repeatable.
        #[arg(long)]
        lift: Vec<String>,
        /// Window overlay, as `alpha,beta,m`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum SurfaceAction {
    Show {
        surface: String,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
}

enum CliError {
    Usage(String),
    Budget(String),
    SuiteFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::SuiteFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        CliError::Usage(format!("surface: {e}"))
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(format!("parse: {e}"))
    }
}

impl From<EnumerationError> for CliError {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::RadiusTooLargeForBudget { .. } => {
                CliError::Budget(format!("enumeration: {e} (raise {BUDGET_ENV} to allow more)"))
            }
            EnumerationError::Surface(s) => s.into(),
            other => CliError::Usage(format!("enumeration: {other}")),
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::Enumeration(e) => e.into(),
            other => CliError::Usage(format!("lift: {other}")),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Enumeration(e) => e.into(),
            VerifyError::Lift(e) => e.into(),
        }
    }
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json output"));
}

fn word(g: &SurfaceGroup, s: &str) -> Result<Word, CliError> {
    g.parse_word(s).map_err(|e| CliError::Usage(format!("parse: {e}")))
}

fn pair(g: &SurfaceGroup, s: &str) -> Result<(Word, Word), CliError> {
    match s.split(',').collect::<Vec<_>>()[..] {
        [a, b] => Ok((word(g, a)?, word(g, b)?)),
        _ => Err(CliError::Usage(format!("parse: expected 'alpha,beta', got '{s}'"))),
    }
}

fn surface_show(g: &SurfaceGroup, out: Out) -> Result<(), CliError> {
    let growth = estimate_growth(g, default_sample_length(g));
    let gens: Vec<Value> = (0..g.rank())
        .map(|i| {
            let m = g.generator(i);
            json!({
                "name": g.generator_names[i],
                "matrix": [[m.a, m.b], [m.c, m.d]],
                "trace": m.trace(),
                "translation_length": translation_length(&m).ok(),
            })
        })
        .collect();
    let words = |ws: &[Word]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    let systole = systole_estimate(g);
    let v = json!({
        "name": g.name,
        "kind": g.kind,
        "generators": gens,
        "relators": words(&g.relators),
        "peripherals": words(&g.peripherals),
        "designated_simple": words(&g.designated_simple),
        "basepoint": [g.basepoint.x, g.basepoint.y],
        "systole": systole,
        "growth": { "c1": growth.c1, "c2": growth.c2, "sample_length": growth.sample_length },
    });
    match out {
        Out::Json => print_json(&v),
        Out::Text => {
            out!("surface {} ({:?})", g.name, g.kind);
            for (i, gen) in gens.iter().enumerate() {
                let m = g.generator(i);
                out!(
                    "  {} = [[{:.12}, {:.12}], [{:.12}, {:.12}]]  trace {:.12}",
                    g.generator_names[i],
                    m.a,
                    m.b,
                    m.c,
                    m.d,
                    gen["trace"].as_f64().unwrap_or(f64::NAN)
                );
            }
            out!("  relators: {}", words(&g.relators).join(" "));
            out!("  peripherals: {}", words(&g.peripherals).join(" "));
            out!("  designated simple: {}", words(&g.designated_simple).join(" "));
            out!("  systole estimate: {systole:.12}");
            out!("  growth: d(g.o, o) >= {:.6} * |g| - {:.6}", growth.c1, growth.c2);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Surface {
            action: SurfaceAction::Show { surface, out },
        } => {
            let g = SurfaceGroup::open(&surface)?;
            surface_show(&g, out)
        }
        Command::Bracket {
            surface,
            alpha,
            beta,
            power,
            out,
        } => {
            let e = BracketEngine::new(SurfaceGroup::open(&surface)?);
            let (a, b) = (word(&e.group, &alpha)?, word(&e.group, &beta)?);
            let s = e.power_bracket(&a, power, &b)?;
            match out {
                Out::Text => out!("{s}"),
                Out::Json => print_json(&json!({
                    "alpha": a.to_string(),
                    "beta": b.to_string(),
                    "power": power,
                    "bracket": s.to_string(),
                    "terms": s.to_json(),
                })),
            }
            Ok(())
        }
        Command::Intersect {
            surface,
            alpha,
            beta,
            out,
        } => {
            let e = BracketEngine::new(SurfaceGroup::open(&surface)?);
            let (a, b) = (word(&e.group, &alpha)?, word(&e.group, &beta)?);
            let n = e.intersection_number(&a, &b)?;
            match out {
                Out::Text => out!("{n}"),
                Out::Json => {
                    let data = e.intersection_data(&a, &b)?;
                    print_json(&json!({
                        "alpha": a.to_string(),
                        "beta": b.to_string(),
                        "intersection": n,
                        "crossings": data,
                    }))
                }
            }
            Ok(())
        }
        Command::ProbeCenter {
            surface,
            candidate,
            max_len,
            out,
        } => {
            let e = BracketEngine::new(SurfaceGroup::open(&surface)?);
            let cand = FormalSum::parse(&e.group, &candidate)?;
            let max_len = max_len.unwrap_or_else(|| default_max_len(&e));
            let r = probe_center(&e, &cand, max_len)?;
            match out {
                Out::Json => print_json(&r.to_json()),
                Out::Text => {
                    out!("candidate: {}", r.candidate);
                    out!("tested classes: {} (word length <= {})", r.tested_classes, r.max_len);
                    if let Some(w) = &r.witness {
                        out!("witness: {} with bracket {}", w.class, w.bracket);
                    }
                    if let Some(terms) = &r.peripheral_terms {
                        for (c, p) in terms {
                            out!("term {c}: {}", if *p { "peripheral" } else { "not peripheral" });
                        }
                    }
                    let verdict = r.to_json()["verdict"].as_str().unwrap_or_default().to_string();
                    out!("verdict: {verdict}");
                }
            }
            Ok(())
        }
        Command::Verify {
            surface,
            mut suites,
            samples,
            seed,
            out,
        } => {
            let e = BracketEngine::new(SurfaceGroup::open(&surface)?);
            suites.sort();
            suites.dedup();
            let mut reports = Vec::new();
            for s in suites {
                reports.push(run_suite(&e, s, samples, seed)?);
            }
            let all = reports.iter().all(|r| r.pass);
            match out {
                Out::Json => print_json(&json!({ "pass": all, "seed": seed, "suites": reports })),
                Out::Text => {
                    for r in &reports {
                        out!(
                            "{:<10} {} cases={} failures={} worst_residual={:e}",
                            r.suite.to_string(),
                            if r.pass { "PASS" } else { "FAIL" },
                            r.cases,
                            r.failures,
                            r.worst_residual
                        );
                        for ex in &r.examples {
                            out!("    {ex}");
                        }
                    }
                }
            }
            if all {
                Ok(())
            } else {
                Err(CliError::SuiteFailed)
            }
        }
        Command::ExportDisk {
            surface,
            words,
            svg,
            translates,
            lift,
            window,
            out,
        } => {
            let e = BracketEngine::new(SurfaceGroup::open(&surface)?);
            let ws = words.iter().map(|w| word(&e.group, w)).collect::<Result<Vec<_>, _>>()?;
            let lifts = lift.iter().map(|s| pair(&e.group, s)).collect::<Result<Vec<_>, _>>()?;
            let window = match window {
                None => None,
                Some(s) => match s.rsplit_once(',') {
                    Some((ab, m)) => {
                        let m: u32 = m
                            .parse()
                            .map_err(|_| CliError::Usage(format!("parse: bad power in '{s}'")))?;
                        let (a, b) = pair(&e.group, ab)?;
                        Some((a, b, m))
                    }
                    None => return Err(CliError::Usage(format!("parse: expected 'alpha,beta,m', got '{s}'"))),
                },
            };
            let picture = render(
                &e,
                &ws,
                &Overlays {
                    translates,
                    lifts,
                    window,
                },
            )?;
            fs::write(&svg, &picture).map_err(|err| CliError::Usage(format!("io: {}: {err}", svg.display())))?;
            match out {
                Out::Text => out!("wrote {}", svg.display()),
                Out::Json => print_json(&json!({ "svg": svg.display().to_string(), "bytes": picture.len() })),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) | CliError::Budget(m) => eprintln!("error: {m}"),
                CliError::SuiteFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.code())
        }
    }
}

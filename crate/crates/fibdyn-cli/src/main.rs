//! Command-line front end: decompose the space under a Fibonacci
//! polynomial, classify its cycles at a level, run the verification
//! suites, or walk a conjectural seed sequence. JSON output is
//! deterministic: identical arguments give byte-identical reports.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fibdyn::catalog::{
    catalog_decompose, compare_with_engine, g_sequence, Agreement, CatalogError, SeedCase,
    Truncation,
};
use fibdyn::engine::{analyze_cycle, cycles_at_level, decompose, FibMap};
use fibdyn::report::{catalog_records, engine_records, ComponentRecord, SCHEMA_VERSION};
use fibdyn::verify::{run_suite, SuiteParams, SuiteResult, SUITES};

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_UNRESOLVED: u8 = 4;

#[derive(Parser)]
#[command(name = "fibdyn", version, about = "2-adic dynamics of Fibonacci polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads (overrides FIBDYN_WORKERS; 1 forces sequential).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Source {
    Catalog,
    Engine,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose Z_2 under F_m into periodic points, minimal
    /// components, and basin regions.
    Decompose {
        #[arg(long)]
        m: u64,
        /// Truncation level K: residues are resolved mod 2^K.
        #[arg(long, default_value_t = 10)]
        level: u32,
        /// Families indexed by n expand for n <= max_n.
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = Source::Both)]
        source: Source,
        /// Fail (exit 4) if the engine leaves more than this many
        /// cycles unresolved at the truncation level.
        #[arg(long)]
        fail_on_unresolved: Option<usize>,
    },
    /// List every cycle of F_m mod 2^level with its classification.
    Classify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        level: u32,
    },
    /// Run named verification suites (all by default).
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_l: u32,
        #[arg(long, default_value_t = 28)]
        m: u64,
        #[arg(long, default_value_t = 8)]
        level: u32,
    },
    /// Walk a conjectural seed sequence, certifying each level.
    Conjecture {
        /// Index class: 4 for m = 4+12(2+64d), 8 for m = 8+12(61+64d).
        #[arg(long, value_parser = clap::value_parser!(u8))]
        case: u8,
        #[arg(long, default_value_t = 0)]
        d: u64,
        #[arg(long, default_value_t = 14)]
        max_level: u32,
    },
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct DecomposeBody {
    m: u64,
    level: u32,
    max_n: u32,
    source: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    catalog: Option<CatalogBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine: Option<EngineBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<Agreement>,
}

#[derive(Serialize)]
struct CatalogBody {
    case: String,
    identity_map: bool,
    conditional: bool,
    components: Vec<ComponentRecord>,
}

#[derive(Serialize)]
struct EngineBody {
    unresolved_cycles: usize,
    components: Vec<ComponentRecord>,
}

#[derive(Serialize)]
struct CycleBody {
    elements: Vec<u64>,
    length: usize,
    a_mod_4: u8,
    b_mod_2: u8,
    behavior: String,
}

#[derive(Serialize)]
struct ClassifyBody {
    m: u64,
    level: u32,
    cycles: Vec<CycleBody>,
}

#[derive(Serialize)]
struct VerifyBody {
    all_passed: bool,
    suites: Vec<SuiteResult>,
}

#[derive(Serialize)]
struct ConjectureBody {
    case: u8,
    d: u64,
    m: u64,
    max_level: u32,
    holds_up_to_max_level: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<fibdyn::catalog::GEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    broken_dichotomy_at_level: Option<u32>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn bad_input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Failure {
        let code = match e {
            CatalogError::UnsupportedM(_)
            | CatalogError::IdentityTooDeep(_)
            | CatalogError::DigitFunctionUndefined(_) => EXIT_BAD_INPUT,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli
        .output
        .workers
        .or_else(|| std::env::var("FIBDYN_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = workers {
        if n == 0 {
            eprintln!("error: --workers must be >= 1");
            return ExitCode::from(EXIT_BAD_INPUT);
        }
        configure_workers(n);
    }
    match run(cli.command, &cli.output) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_workers(n: usize) {
    if n == 1 {
        fibdyn::exec::set_parallelism(fibdyn::exec::Parallelism::Sequential);
    } else {
        // ignore "already initialized": first configuration wins
        let _ = rayon_pool(n);
    }
}

#[cfg(feature = "parallel")]
fn rayon_pool(n: usize) -> Result<(), impl std::error::Error> {
    fibdyn::exec::set_parallelism(fibdyn::exec::Parallelism::Rayon);
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()
}

#[cfg(not(feature = "parallel"))]
fn configure_workers(_n: usize) {}

fn run(command: Command, output: &OutputArgs) -> Result<ExitCode, Failure> {
    match command {
        Command::Decompose {
            m,
            level,
            max_n,
            source,
            fail_on_unresolved,
        } => cmd_decompose(m, level, max_n, source, fail_on_unresolved, output),
        Command::Classify { m, level } => cmd_classify(m, level, output),
        Command::Verify {
            suite,
            max_l,
            m,
            level,
        } => cmd_verify(suite, max_l, m, level, output),
        Command::Conjecture { case, d, max_level } => cmd_conjecture(case, d, max_level, output),
    }
}

fn cmd_decompose(
    m: u64,
    level: u32,
    max_n: u32,
    source: Source,
    fail_on_unresolved: Option<usize>,
    output: &OutputArgs,
) -> Result<ExitCode, Failure> {
    if m < 2 {
        return Err(Failure::bad_input(format!("m must be >= 2, got {m}")));
    }
    if !(3..=24).contains(&level) {
        return Err(Failure::bad_input("level must be between 3 and 24"));
    }
    if max_n < 1 || max_n + 4 > 62 {
        return Err(Failure::bad_input("max_n must be between 1 and 58"));
    }
    let trunc = Truncation { k: level, max_n };
    let mut body = DecomposeBody {
        m,
        level,
        max_n,
        source,
        catalog: None,
        engine: None,
        agreement: None,
    };
    if matches!(source, Source::Catalog | Source::Both) {
        let dec = catalog_decompose(m, trunc)?;
        body.catalog = Some(CatalogBody {
            case: dec.case.clone(),
            identity_map: dec.identity_map,
            conditional: dec.conditional,
            components: catalog_records(&dec)
                .map_err(|e| Failure::bad_input(e.to_string()))?,
        });
    }
    let mut unresolved = 0;
    if matches!(source, Source::Engine | Source::Both) {
        let report = decompose(&FibMap { m }, level, 1)
            .map_err(|e| Failure { code: 1, message: e.to_string() })?;
        unresolved = report.unresolved.len();
        body.engine = Some(EngineBody {
            unresolved_cycles: unresolved,
            components: engine_records(&report)
                .map_err(|e| Failure::bad_input(e.to_string()))?,
        });
    }
    if source == Source::Both {
        body.agreement = Some(compare_with_engine(m, level)?);
    }
    let agree = body.agreement.as_ref().map(|a| a.agree);
    emit(
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: "decompose",
            body: &body,
        },
        |t| {
            let mut s = String::new();
            let _ = writeln!(s, "decomposition of Z_2 under F_{m} mod 2^{level}");
            if let Some(c) = &t.body.catalog {
                let _ = writeln!(s, "catalog case: {}", c.case);
                let _ = writeln!(s, "catalog components: {}", c.components.len());
            }
            if let Some(e) = &t.body.engine {
                let _ = writeln!(
                    s,
                    "engine components: {} ({} unresolved cycles)",
                    e.components.len(),
                    e.unresolved_cycles
                );
            }
            if let Some(a) = &t.body.agreement {
                let _ = writeln!(s, "agreement: {}", a.agree);
            }
            s
        },
        output,
    )?;
    if agree == Some(false) {
        return Ok(ExitCode::from(EXIT_DISAGREEMENT));
    }
    if let Some(cap) = fail_on_unresolved {
        if unresolved > cap {
            return Ok(ExitCode::from(EXIT_UNRESOLVED));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(m: u64, level: u32, output: &OutputArgs) -> Result<ExitCode, Failure> {
    if !(1..=20).contains(&level) {
        return Err(Failure::bad_input("level must be between 1 and 20"));
    }
    let f = FibMap { m };
    let cycles = cycles_at_level(&f, level);
    let body = ClassifyBody {
        m,
        level,
        cycles: cycles
            .iter()
            .map(|c| {
                let a = analyze_cycle(&f, c);
                CycleBody {
                    elements: c
                        .elements
                        .iter()
                        .map(|e| e.to_u64_digits().first().copied().unwrap_or(0))
                        .collect(),
                    length: c.len(),
                    a_mod_4: a.a,
                    b_mod_2: a.b,
                    behavior: format!("{:?}", a.behavior),
                }
            })
            .collect(),
    };
    emit(
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: "classify",
            body: &body,
        },
        |t| {
            let mut s = String::new();
            let _ = writeln!(s, "cycles of F_{m} mod 2^{level}: {}", t.body.cycles.len());
            for c in &t.body.cycles {
                let _ = writeln!(
                    s,
                    "  {:?} (len {}) a={} b={} {}",
                    c.elements, c.length, c.a_mod_4, c.b_mod_2, c.behavior
                );
            }
            s
        },
        output,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    suite: Option<String>,
    max_l: u32,
    m: u64,
    level: u32,
    output: &OutputArgs,
) -> Result<ExitCode, Failure> {
    let params = SuiteParams { max_l, m, level };
    let names: Vec<&str> = match &suite {
        Some(s) => {
            if !SUITES.contains(&s.as_str()) {
                return Err(Failure::bad_input(format!(
                    "unknown suite '{s}'; available: {}",
                    SUITES.join(", ")
                )));
            }
            vec![s.as_str()]
        }
        None => SUITES.to_vec(),
    };
    let suites: Vec<SuiteResult> = names
        .iter()
        .map(|n| run_suite(n, params).unwrap())
        .collect();
    let all_passed = suites.iter().all(|s| s.passed());
    let body = VerifyBody { all_passed, suites };
    emit(
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            body: &body,
        },
        |t| {
            let mut s = String::new();
            for suite in &t.body.suites {
                let _ = writeln!(
                    s,
                    "{}: {} ({} checks)",
                    suite.suite,
                    if suite.passed() { "pass" } else { "FAIL" },
                    suite.checks.len()
                );
                for c in suite.checks.iter().filter(|c| !c.pass) {
                    let _ = writeln!(s, "  FAIL {} -- {:?}", c.name, c.counterexample);
                }
            }
            s
        },
        output,
    )?;
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_conjecture(
    case: u8,
    d: u64,
    max_level: u32,
    output: &OutputArgs,
) -> Result<ExitCode, Failure> {
    let seed_case = match case {
        4 => SeedCase::FourMod12,
        8 => SeedCase::EightMod12,
        _ => return Err(Failure::bad_input("case must be 4 or 8")),
    };
    if !(11..=24).contains(&max_level) {
        return Err(Failure::bad_input("max-level must be between 11 and 24"));
    }
    let m = seed_case.m(d);
    let (body, failed) = match g_sequence(seed_case, d, max_level) {
        Ok(seq) => (
            ConjectureBody {
                case,
                d,
                m,
                max_level,
                holds_up_to_max_level: true,
                entries: Some(seq.entries),
                broken_dichotomy_at_level: None,
            },
            false,
        ),
        Err(CatalogError::BrokenDichotomy { level }) => (
            ConjectureBody {
                case,
                d,
                m,
                max_level,
                holds_up_to_max_level: false,
                entries: None,
                broken_dichotomy_at_level: Some(level),
            },
            true,
        ),
        Err(e) => return Err(e.into()),
    };
    emit(
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: "conjecture",
            body: &body,
        },
        |t| {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "seed sequence for m = {} (case {case}, d = {d}) up to level {max_level}",
                t.body.m
            );
            match (&t.body.entries, t.body.broken_dichotomy_at_level) {
                (Some(entries), _) => {
                    for e in entries {
                        let _ = writeln!(
                            s,
                            "  level {:>2}: g = {:>8}, g' = {:>8}, certified = {}",
                            e.level, e.g, e.g_prime, e.certified
                        );
                    }
                }
                (None, Some(l)) => {
                    let _ = writeln!(s, "  BROKEN DICHOTOMY at level {l}");
                }
                _ => {}
            }
            s
        },
        output,
    )?;
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn emit<T: Serialize>(
    envelope: Envelope<T>,
    text: impl Fn(&Envelope<T>) -> String,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let rendered = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => text(&envelope),
    };
    match &output.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

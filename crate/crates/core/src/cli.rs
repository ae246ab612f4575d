//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 unreadable or malformed
//! input, 3 emulation certificate failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::decomposition::Strategy;
use crate::dot::{decomposition_dot, semigroupoid_dot};
use crate::format::{emit_sgd, emit_ts, load_fun, load_sgd, FormatError, FunctorSpec, SgdDocument};
use crate::pipeline::{decompose, Decomposition, PipelineError};
use crate::relational::validate_relational_morphism_ts;
use crate::transformation::{pad_with_identities, sink_completion, TransformationSemigroupoid};
use crate::verify::random_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pad,
    Sink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Sets,
    Objects,
    None,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Sets => Strategy::Sets,
            StrategyArg::Objects => Strategy::Objects,
            StrategyArg::None => Strategy::None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sgpoid",
    version,
    about = "Finite semigroupoids and their pinhole cascade decompositions"
)]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a semigroupoid (.sgd) or functor (.fun) file.
    Validate { path: PathBuf },
    /// Close a set of generators under composition.
    Generate {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose along a surjective functor into top level, kernel and cascade.
    Decompose {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Objects)]
        strategy: StrategyArg,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Render a semigroupoid, or the two levels of a decomposition, as Graphviz.
    Dot {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Objects)]
        strategy: StrategyArg,
    },
    /// Report what the naive single-semigroup completions add.
    Diagnose {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Run the exact pipeline checks on seeded random functors.
    VerifyRandom {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Overrides SGPOID_SEED.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// A failed command: exit code and message for standard error.
struct Failure(i32, String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure(EXIT_PARSE, format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

struct Output {
    stdout: String,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            code: EXIT_OK,
        }
    }
}

fn json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn is_functor_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "fun")
}

fn validate(path: &Path, format: OutputFormat) -> Result<Output, Failure> {
    let (kind, problems, summary) = if is_functor_file(path) {
        let loaded = load_fun(path)?;
        let mut problems: Vec<String> = Vec::new();
        for (side, doc) in [("source", &loaded.source), ("target", &loaded.target)] {
            problems.extend(
                doc.validate()
                    .iter()
                    .map(|v| format!("{side}: {}", v.describe(doc.semigroupoid()))),
            );
        }
        let summary = match &loaded.spec {
            FunctorSpec::Abstract(phi) => {
                problems.extend(phi.validate().iter().map(|v| v.describe(phi)));
                let c = phi.classify();
                json!({"surjective": c.surjective, "injective": c.injective})
            }
            FunctorSpec::Morphism(m) => {
                let violations = validate_relational_morphism_ts(m)
                    .map_err(|e| Failure(EXIT_INVALID, e.to_string()))?;
                problems.extend(violations.iter().map(|v| v.describe(m)));
                json!({"states": m.state_rel.len(), "arrows": m.arrow_rel.len()})
            }
        };
        ("functor", problems, summary)
    } else {
        let doc = load_sgd(path)?;
        if format == OutputFormat::Dot {
            return Ok(Output::ok(semigroupoid_dot(doc.semigroupoid())));
        }
        let s = doc.semigroupoid();
        let problems = doc.validate().iter().map(|v| v.describe(s)).collect();
        let summary = json!({
            "objects": s.object_count(),
            "arrows": s.arrow_count(),
            "concrete": doc.concrete().is_some(),
        });
        ("semigroupoid", problems, summary)
    };
    let valid = problems.is_empty();
    let stdout = match format {
        OutputFormat::Json => json_text(&json!({
            "kind": kind,
            "valid": valid,
            "summary": summary,
            "violations": problems,
        })),
        _ => {
            let mut out = format!("{kind}: {}\n", if valid { "valid" } else { "INVALID" });
            if let Some(map) = summary.as_object() {
                for (k, v) in map {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
            }
            for p in &problems {
                out.push_str(&format!("violation: {p}\n"));
            }
            out
        }
    };
    Ok(Output {
        stdout,
        code: if valid { EXIT_OK } else { EXIT_INVALID },
    })
}

fn require_concrete(doc: SgdDocument, path: &Path) -> Result<TransformationSemigroupoid, Failure> {
    match doc {
        SgdDocument::Concrete(ts) => Ok(ts),
        SgdDocument::Abstract(_) => Err(Failure(
            EXIT_INVALID,
            format!("{}: arrows need state mappings", path.display()),
        )),
    }
}

fn closure_of(ts: &TransformationSemigroupoid) -> Result<TransformationSemigroupoid, Failure> {
    let generators = (0..ts.arrow_count())
        .map(|a| (ts.label(a).to_string(), ts.transformation(a).clone()))
        .collect();
    TransformationSemigroupoid::generate_closure(ts.state_sets().to_vec(), generators)
        .map_err(|e| Failure(EXIT_INVALID, e.to_string()))
}

fn generate(path: &Path, out: Option<&Path>, format: OutputFormat) -> Result<Output, Failure> {
    let closure = closure_of(&require_concrete(load_sgd(path)?, path)?)?;
    let text = emit_ts(&closure);
    let stdout = match (out, format) {
        (_, OutputFormat::Dot) => semigroupoid_dot(closure.abstract_()),
        (_, OutputFormat::Json) => json_text(&json!({
            "arrows": closure.arrow_count(),
            "labels": (0..closure.arrow_count()).map(|a| closure.label(a)).collect::<Vec<_>>(),
        })),
        (Some(_), OutputFormat::Text) => format!("{} arrows\n", closure.arrow_count()),
        (None, OutputFormat::Text) => text.clone(),
    };
    if let Some(out) = out {
        write_file(out, &text)?;
    }
    Ok(Output::ok(stdout))
}

fn write_decomposition(run: &Decomposition, dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let report = run.report();
    let (bottom, concrete) = run.bottom();
    let kernel_text = match &concrete {
        Some(ts) => emit_ts(ts),
        None => emit_sgd(&bottom),
    };
    let files = [
        ("kernel.sgd", kernel_text),
        ("cascade.sgd", emit_sgd(&run.cascade.product.semigroupoid)),
        ("top.sgd", emit_sgd(run.functor.target())),
        ("codec.txt", run.render_codec()),
        ("rules.txt", run.cascade.rule_table().render(&run.cascade)),
        ("report.txt", report.render()),
        ("report.json", json_text(&report)),
        (
            "decomposition.dot",
            decomposition_dot(run.functor.target(), &bottom),
        ),
    ];
    for (name, text) in files {
        write_file(&dir.join(name), &text)?;
    }
    Ok(())
}

fn decompose_cmd(
    path: &Path,
    strategy: Strategy,
    out_dir: Option<&Path>,
    format: OutputFormat,
) -> Result<Output, Failure> {
    let run = decompose(&load_fun(path)?, strategy)?;
    if let Some(dir) = out_dir {
        write_decomposition(&run, dir)?;
    }
    let report = run.report();
    let stdout = match format {
        OutputFormat::Text => report.render(),
        OutputFormat::Json => json_text(&report),
        OutputFormat::Dot => decomposition_dot(run.functor.target(), &run.bottom().0),
    };
    let code = if report.certificate.valid {
        EXIT_OK
    } else {
        EXIT_CERTIFICATE
    };
    Ok(Output { stdout, code })
}

fn dot(path: &Path, out: Option<&Path>, strategy: Strategy) -> Result<Output, Failure> {
    let text = if is_functor_file(path) {
        let run = decompose(&load_fun(path)?, strategy)?;
        decomposition_dot(run.functor.target(), &run.bottom().0)
    } else {
        let doc = load_sgd(path)?;
        let s = doc.semigroupoid();
        if let Some(v) = doc.validate().first() {
            return Err(Failure(EXIT_INVALID, v.describe(s)));
        }
        semigroupoid_dot(s)
    };
    match out {
        Some(out) => {
            write_file(out, &text)?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

fn diagnose(path: &Path, mode: Mode, format: OutputFormat) -> Result<Output, Failure> {
    // Generator-only files are closed first, so that originals are all arrows.
    let ts = closure_of(&require_concrete(load_sgd(path)?, path)?)?;
    let (completed, report) = match mode {
        Mode::Pad => pad_with_identities(&ts),
        Mode::Sink => sink_completion(&ts),
    };
    let stdout = match format {
        OutputFormat::Json => json_text(&report),
        OutputFormat::Dot => semigroupoid_dot(completed.abstract_()),
        OutputFormat::Text => report.render(&completed),
    };
    Ok(Output::ok(stdout))
}

fn verify_random(cases: usize, seed: Option<u64>, format: OutputFormat) -> Result<Output, Failure> {
    let summary = random_suite(seed.unwrap_or_else(crate::random::seed_from_env), cases);
    let stdout = match format {
        OutputFormat::Json => json_text(&summary),
        _ => summary.render(),
    };
    Ok(Output {
        stdout,
        code: if summary.passed() {
            EXIT_OK
        } else {
            EXIT_INVALID
        },
    })
}

/// Runs one invocation, writing reports to `stdout` and errors to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let format = cli.format;
    let result = match &cli.command {
        Command::Validate { path } => validate(path, format),
        Command::Generate { path, out } => generate(path, out.as_deref(), format),
        Command::Decompose {
            path,
            strategy,
            out_dir,
        } => decompose_cmd(path, (*strategy).into(), out_dir.as_deref(), format),
        Command::Dot {
            path,
            out,
            strategy,
        } => dot(path, out.as_deref(), (*strategy).into()),
        Command::Diagnose { path, mode } => diagnose(path, *mode, format),
        Command::VerifyRandom { cases, seed } => verify_random(*cases, *seed, format),
    };
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            out.code
        }
        Err(Failure(code, message)) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

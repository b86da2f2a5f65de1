use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use immersion_core::immersion::{
    compare_modes, decide_immersion, explain, explain_comparison, model_document,
    parse_problem_with, ImmersionProblem, ParseOptions,
};
use immersion_core::mono::{build_mono_model, DifferentialMode, MonoModelSpec};

/// Decide whether a map of manifolds is homotopic to an immersion, from
/// rational characteristic-class data.
#[derive(Parser)]
#[command(name = "immersion-decider", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Use the linear differential dγ_k = β_k − α_k / α_k instead of the
    /// dual-class differential.
    #[arg(long, global = true)]
    paper_literal_differential: bool,
    /// Degree cutoff for free cohomology models.
    #[arg(long, global = true, value_name = "D")]
    max_degree: Option<u32>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the verdict. Exit code 0 for YES, 1 for NO.
    Decide {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the verdict with every obstruction class.
    Explain {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run both differential modes and report whether they disagree.
    Compare {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the relative model for the given dimensions as JSON.
    DumpModel {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Validate a problem file without deciding it.
    Check {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn mode(common: &Common) -> DifferentialMode {
    if common.paper_literal_differential {
        DifferentialMode::PaperLiteral
    } else {
        DifferentialMode::DualClass
    }
}

fn load(path: &Path, common: &Common) -> anyhow::Result<ImmersionProblem> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let problem = parse_problem_with(
        &text,
        ParseOptions {
            max_degree: common.max_degree,
        },
    )
    .with_context(|| format!("in {}", path.display()))?;
    Ok(problem)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

macro_rules! say {
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))?
    };
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Decide { file, common } => {
            let verdict = decide_immersion(&load(&file, &common)?, mode(&common))?;
            if common.json {
                say!("{}", verdict.to_json());
            } else {
                say!("{}", verdict.answer());
                if let Some(row) = verdict.failing() {
                    say!(
                        "obstruction: d({}) is not exact in degree {}",
                        row.name,
                        row.degree
                    );
                }
            }
            Ok(if verdict.immersible {
                EXIT_YES
            } else {
                EXIT_NO
            })
        }
        Command::Explain { file, common } => {
            let verdict = decide_immersion(&load(&file, &common)?, mode(&common))?;
            if common.json {
                say!("{}", verdict.to_json());
            } else {
                emit(&explain(&verdict))?;
            }
            Ok(if verdict.immersible {
                EXIT_YES
            } else {
                EXIT_NO
            })
        }
        Command::Compare { file, common } => {
            let c = compare_modes(&load(&file, &common)?)?;
            if common.json {
                say!(
                    "{{\"diverges\": {}, \"dual_class\": {}, \"paper_literal\": {}}}",
                    c.diverges(),
                    c.dual_class.to_json(),
                    c.paper_literal.to_json()
                );
            } else {
                emit(&explain_comparison(&c))?;
            }
            Ok(EXIT_YES)
        }
        Command::DumpModel { m, n, common } => {
            let spec = MonoModelSpec::with_mode(m, n, mode(&common))?;
            let model = build_mono_model(&spec)?;
            say!(
                "{}",
                serde_json::to_string_pretty(&model_document(&spec, &model))?
            );
            Ok(EXIT_YES)
        }
        Command::Check { file, common } => {
            let p = load(&file, &common)?;
            if common.json {
                say!("{{\"valid\": true, \"m\": {}, \"n\": {}}}", p.m, p.n);
            } else {
                say!("ok: m = {}, n = {}", p.m, p.n);
            }
            Ok(EXIT_YES)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

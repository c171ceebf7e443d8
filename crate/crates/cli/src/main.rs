use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistkit::frontend::{
    execute, parse_problem, render_report, Format, ProblemDocument, Task, TaskKind,
};

#[derive(Parser)]
#[command(name = "twistkit", version, about = "Exact checks for twisted symmetries, gauge maps and coverings")]
struct Cli {
    /// Prolongation or truncation order.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Seed for the random-evaluation zero test.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Include per-task wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Standard,
    Lambda,
    Mu,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Lambda => "lambda",
            Mode::Mu => "mu",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Structured,
}

#[derive(Args)]
struct Twisting {
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a problem file.
    Run { file: PathBuf },
    /// Prolong a field, optionally twisted.
    Prolong {
        file: PathBuf,
        #[arg(long)]
        field: String,
        #[command(flatten)]
        twist: Twisting,
    },
    /// Check that a field is a (twisted) symmetry of an equation.
    CheckSymmetry {
        file: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long)]
        equation: String,
        #[command(flatten)]
        twist: Twisting,
    },
    /// Cross-derivative compatibility of a covering.
    CheckCovering {
        file: PathBuf,
        #[arg(long)]
        covering: String,
    },
    /// Zero-curvature check of a matrix covering.
    CheckMatrixCovering {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Horizontal Maurer-Cartan check of a matrix one-form.
    CheckMch {
        file: PathBuf,
        #[arg(long)]
        mu: String,
    },
    /// Compare the two paths around the gauge square.
    GaugeDiagram {
        file: PathBuf,
        #[arg(long)]
        gauge: String,
        #[arg(long)]
        field: String,
    },
    /// Recover a twisted symmetry from a symmetry of a covering.
    Reconstruct {
        file: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long)]
        covering: String,
        /// Matrix G(w) for the mu pipeline.
        #[arg(long)]
        gauge: Option<String>,
    },
}

fn single(kind: TaskKind, params: &[(&str, Option<&String>)]) -> Task {
    params
        .iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .fold(Task::new(kind), |t, (k, v)| t.with(k, v))
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Run { file }
            | Command::Prolong { file, .. }
            | Command::CheckSymmetry { file, .. }
            | Command::CheckCovering { file, .. }
            | Command::CheckMatrixCovering { file, .. }
            | Command::CheckMch { file, .. }
            | Command::GaugeDiagram { file, .. }
            | Command::Reconstruct { file, .. } => file,
        }
    }

    /// The task a subcommand stands for; `None` for `run`.
    fn task(&self) -> Option<Task> {
        Some(match self {
            Command::Run { .. } => return None,
            Command::Prolong { field, twist, .. } => single(
                TaskKind::Prolong,
                &[("field", Some(field)), ("lambda", twist.lambda.as_ref()), ("mu", twist.mu.as_ref())],
            ),
            Command::CheckSymmetry { field, equation, twist, .. } => single(
                TaskKind::CheckSymmetry,
                &[
                    ("field", Some(field)),
                    ("equation", Some(equation)),
                    ("lambda", twist.lambda.as_ref()),
                    ("mu", twist.mu.as_ref()),
                ],
            ),
            Command::CheckCovering { covering, .. } => {
                single(TaskKind::CheckCovering, &[("covering", Some(covering))])
            }
            Command::CheckMatrixCovering { name, .. } => {
                single(TaskKind::CheckMatrixCovering, &[("name", Some(name))])
            }
            Command::CheckMch { mu, .. } => single(TaskKind::CheckMch, &[("mu", Some(mu))]),
            Command::GaugeDiagram { gauge, field, .. } => single(
                TaskKind::GaugeDiagram,
                &[("gauge", Some(gauge)), ("field", Some(field))],
            ),
            Command::Reconstruct { field, covering, gauge, .. } => single(
                TaskKind::Reconstruct,
                &[("field", Some(field)), ("covering", Some(covering)), ("gauge", gauge.as_ref())],
            ),
        })
    }
}

fn prepare(cli: &Cli, mut doc: ProblemDocument) -> Result<ProblemDocument, String> {
    if let Some(task) = cli.command.task() {
        doc.validate_task(&task).map_err(|e| e.to_string())?;
        doc.tasks = vec![task];
    }
    // Global flags fill in whatever a task leaves unset.
    for t in &mut doc.tasks {
        if let Some(n) = cli.order {
            t.params.entry("order".into()).or_insert(n.to_string());
        }
        if let Some(m) = cli.mode {
            t.params.entry("mode".into()).or_insert(m.name().into());
        }
    }
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.command.file();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("twistkit: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let doc = match parse_problem(&src).map_err(|e| e.to_string()).and_then(|d| prepare(&cli, d)) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("twistkit: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let report = execute(&doc, cli.seed);
    let format = match cli.format {
        OutputFormat::Human => Format::Human,
        OutputFormat::Structured => Format::Structured,
    };
    print!("{}", render_report(&report, format, cli.timing));
    ExitCode::from(report.exit_code() as u8)
}

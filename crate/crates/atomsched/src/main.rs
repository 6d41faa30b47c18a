use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use atomsched::cli::{
    cmd_compile, cmd_generate, cmd_report, cmd_verify, parse_family, CliError, CompileConfig,
    ReportFormat, TableFormat,
};
use atomsched::hardware::Mode;

#[derive(Parser)]
#[command(name = "atomsched", version, about = "Movement-schedule compiler for zoned neutral-atom hardware")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark circuit as JSON.
    Generate(GenerateArgs),
    /// Compile a circuit into a schedule and a fidelity report.
    Compile(CompileArgs),
    /// Replay a schedule file and re-check all invariants.
    Verify {
        /// Schedule JSON produced by `compile`.
        schedule: PathBuf,
    },
    /// Tabulate report files as CSV or markdown.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family: vqe, qft, bv, qsim, qaoa-random, or qaoa-regular<d>.
    #[arg(long)]
    bench: String,
    #[arg(long)]
    qubits: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Probability knob for qaoa-random (default 0.5) and qsim (default 0.3).
    #[arg(long)]
    prob: Option<f64>,
    /// Pauli strings per qsim circuit.
    #[arg(long, default_value_t = 10)]
    strings: u32,
    /// Output circuit path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompileArgs {
    /// Circuit JSON to compile.
    circuit: PathBuf,
    /// with-storage or non-storage.
    #[arg(long, value_enum, default_value_t = ModeArg::WithStorage)]
    mode: ModeArg,
    /// Number of independent AOD arrays.
    #[arg(long, default_value_t = 1)]
    aods: u32,
    /// Stage-ordering weight for qubits entering the computation zone.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Hardware config JSON (defaults: stock parameters, square geometry).
    #[arg(long)]
    hw: Option<PathBuf>,
    /// Fold the single-qubit fidelity factor and layer time into the report.
    #[arg(long)]
    include_1q: bool,
    /// Record the measured compile time in the report file (makes reruns
    /// differ byte-wise).
    #[arg(long)]
    emit_timing: bool,
    /// Report file format.
    #[arg(long, value_enum, default_value_t = CompileFormatArg::Json)]
    format: CompileFormatArg,
    /// Output schedule path.
    #[arg(short, long)]
    out: PathBuf,
    /// Output report path (default: schedule path with .report.json).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CompileFormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct ReportArgs {
    /// Report JSON files from `compile`.
    reports: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write the table here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    WithStorage,
    NonStorage,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Md,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => {
            let family = parse_family(&a.bench, a.prob, a.strings)?;
            cmd_generate(family, a.qubits, a.seed, &a.out)
        }
        Command::Compile(a) => {
            if !(a.alpha > 0.0 && a.alpha < 1.0) {
                return Err(CliError::Input(format!(
                    "--alpha must lie in (0, 1), got {}",
                    a.alpha
                )));
            }
            if a.aods < 1 {
                return Err(CliError::Input("--aods must be at least 1".into()));
            }
            let config = CompileConfig {
                mode: match a.mode {
                    ModeArg::WithStorage => Mode::WithStorage,
                    ModeArg::NonStorage => Mode::NonStorage,
                },
                n_aods: a.aods,
                alpha: a.alpha,
                hw_path: a.hw,
                include_1q: a.include_1q,
                emit_timing: a.emit_timing,
                report_format: match a.format {
                    CompileFormatArg::Json => ReportFormat::Json,
                    CompileFormatArg::Csv => ReportFormat::Csv,
                },
            };
            let report = a
                .report
                .unwrap_or_else(|| a.out.with_extension("report.json"));
            cmd_compile(&a.circuit, &config, &a.out, &report)
        }
        Command::Verify { schedule } => cmd_verify(&schedule),
        Command::Report(a) => {
            let format = match a.format {
                FormatArg::Csv => TableFormat::Csv,
                FormatArg::Md => TableFormat::Md,
            };
            cmd_report(&a.reports, format, a.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hpt_core::io::report::{exit, Report};
use hpt_core::io::Mode;
use hpt_core::symmetric::Side;

pub const WEIGHT_ENV: &str = "HPT_MAX_WEIGHT";

#[derive(Parser)]
#[command(name = "hpt", version, about = "Exact homological perturbation over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex, the contraction and the codifferential of a problem file.
    Validate {
        /// Problem file, or `builtin:NAME`.
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
        /// Where the codifferential criterion is checked.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run a perturbation or L-infinity transfer and report the result.
    Transfer {
        /// Problem file, or `builtin:NAME`.
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// The sl2 demonstration: bracket table, both codifferential criteria and a transfer.
    #[command(name = "demo-sl2")]
    DemoSl2 {
        #[command(flatten)]
        opts: Options,
    },
    /// Print a problem file in canonical form.
    Format {
        /// Problem file, or `builtin:NAME`.
        file: PathBuf,
    },
}

#[derive(Args, Clone, Debug)]
pub struct Options {
    /// Truncation weight of the tensor coalgebra [default: file setting, then $HPT_MAX_WEIGHT, then 3].
    #[arg(long)]
    pub max_weight: Option<usize>,
    /// Iteration cap for every perturbation series [default: file setting, then 100].
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub output: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Ordinary,
    Relative,
    Linfty,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Ordinary => Mode::Ordinary,
            ModeArg::Relative => Mode::Relative,
            ModeArg::Linfty => Mode::Linfty,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SideArg {
    Symmetric,
    Tensor,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Symmetric => Side::Symmetric,
            SideArg::Tensor => Side::Tensor,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Machine,
}

fn emit(report: &Report, output: Output) -> ExitCode {
    match output {
        Output::Text => print!("{}", report.to_text()),
        Output::Machine => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match cli.command {
        Command::Validate { file, opts, side } => {
            let r = commands::validate(&file, &opts, side.map(Side::from));
            emit(&r, opts.output)
        }
        Command::Transfer { file, opts } => {
            let r = commands::transfer(&file, &opts);
            emit(&r, opts.output)
        }
        Command::DemoSl2 { opts } => {
            let r = commands::demo_sl2(&opts);
            emit(&r, opts.output)
        }
        Command::Format { file } => match commands::format(&file) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(r) => {
                eprint!("{}", r.to_text());
                ExitCode::from(exit::INPUT_ERROR as u8)
            }
        },
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    code
}

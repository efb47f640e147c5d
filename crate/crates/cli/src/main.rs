//! `eqclass`: exact equivariant Hirzebruch classes and χ_y-genera from the
//! command line.
//!
//! Exit status is 0 on success, 1 when a computation fails and 2 for bad
//! input. Failures print a JSON error object on stdout.

mod job;
mod render;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use job::{CommandKind, Failure, Format, InputSpec, JobSpec};

#[derive(Parser)]
#[command(
    name = "eqclass",
    version,
    about = "Exact equivariant Hirzebruch classes and chi_y-genera"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    /// Diagonal Z/N action on P^n (`--weights`, `--conductor`, optional `--n`).
    ProjectiveSpace,
    /// The G(w) cover of the weighted projective space P^n(w) (`--weights`).
    WprojCover,
    /// Exterior product of `--factor` inputs given as inline JSON.
    Product,
    /// A localization datum read from `--input`.
    Raw,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, value_enum)]
    builder: Option<Builder>,
    /// Comma-separated integer weights.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
    /// Dimension of P^n; defaults to one less than the number of weights.
    #[arg(long)]
    n: Option<usize>,
    /// Order N of the cyclic group.
    #[arg(long)]
    conductor: Option<u32>,
    /// A product factor as input JSON, e.g. '{"wproj":{"weights":[1,2]}}'.
    #[arg(long)]
    factor: Vec<String>,
    /// JSON file with a localization datum.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl InputArgs {
    fn spec(self) -> Result<InputSpec, Failure> {
        let builder = match (self.builder, &self.input) {
            (Some(b), _) => b,
            (None, Some(_)) => Builder::Raw,
            (None, None) => return Err(Failure::input("usage", "give --builder or --input")),
        };
        match builder {
            Builder::ProjectiveSpace => {
                let conductor = self
                    .conductor
                    .ok_or_else(|| Failure::input("usage", "projective-space needs --conductor"))?;
                Ok(InputSpec::ProjectiveSpace {
                    n: self.n,
                    weights: self.weights,
                    conductor,
                })
            }
            Builder::WprojCover => Ok(InputSpec::Wproj { weights: self.weights }),
            Builder::Product => self
                .factor
                .iter()
                .map(|f| serde_json::from_str(f).map_err(|e| Failure::input("parse", format!("factor `{f}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()
                .map(InputSpec::Product),
            Builder::Raw => self
                .input
                .map(InputSpec::File)
                .ok_or_else(|| Failure::input("usage", "raw input needs --input")),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ElementArg {
    /// Group element label, or `all`.
    #[arg(long, default_value = "all")]
    element: String,
}

#[derive(Args)]
struct YArg {
    /// Evaluate at this rational value of y.
    #[arg(long = "y", allow_hyphen_values = true)]
    y: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Equivariant chi_y-genus chi_y(X; g).
    Genus {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        element: ElementArg,
        #[command(flatten)]
        y: YArg,
        /// JSON file with twist bundles, one per fixed component.
        #[arg(long)]
        twist: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Localized Atiyah-Singer classes on each fixed component.
    Class {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        twist: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// chi_y-genus of the global quotient X/G.
    QuotientGenus {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        y: YArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Pulled-back Hirzebruch class of a weighted projective space.
    WprojClass {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        y: YArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Isolated fixed point defect sum.
    Defect {
        /// JSON file with the defect datum.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        y: YArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the built-in verification suite.
    Verify {
        /// `all` or comma-separated check names.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Euler, Todd and signature values, or the genus at `--y`.
    Specialize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        element: ElementArg,
        #[command(flatten)]
        y: YArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print the canonical JSON of an input datum.
    Datum {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a job described by a JSON file.
    Run {
        #[arg(long)]
        job: PathBuf,
    },
}

fn job_of(cmd: Cmd) -> Result<JobSpec, Failure> {
    let with_out = |mut j: JobSpec, out: OutputArgs| {
        j.output = out.output;
        j.format = out.format;
        j
    };
    Ok(match cmd {
        Cmd::Genus {
            input,
            element,
            y,
            twist,
            out,
        } => {
            let mut j = JobSpec::new(CommandKind::Genus);
            j.input = Some(input.spec()?);
            j.element = Some(element.element);
            j.y_value = y.y;
            j.twist = twist;
            with_out(j, out)
        }
        Cmd::Class {
            input,
            element,
            normalized,
            twist,
            out,
        } => {
            let mut j = JobSpec::new(CommandKind::Class);
            j.input = Some(input.spec()?);
            j.element = Some(element.element);
            j.normalized = normalized;
            j.twist = twist;
            with_out(j, out)
        }
        Cmd::QuotientGenus { input, y, out } => {
            let mut j = JobSpec::new(CommandKind::QuotientGenus);
            j.input = Some(input.spec()?);
            j.y_value = y.y;
            with_out(j, out)
        }
        Cmd::WprojClass {
            weights,
            normalized,
            y,
            out,
        } => {
            let mut j = JobSpec::new(CommandKind::WprojClass);
            j.input = Some(InputSpec::Wproj { weights });
            j.normalized = normalized;
            j.y_value = y.y;
            with_out(j, out)
        }
        Cmd::Defect { input, y, out } => {
            let mut j = JobSpec::new(CommandKind::Defect);
            j.input = Some(InputSpec::File(input));
            j.y_value = y.y;
            with_out(j, out)
        }
        Cmd::Verify { suite, out } => {
            let mut j = JobSpec::new(CommandKind::Verify);
            j.suite = suite;
            with_out(j, out)
        }
        Cmd::Specialize { input, element, y, out } => {
            let mut j = JobSpec::new(CommandKind::Specialize);
            j.input = Some(input.spec()?);
            j.element = Some(element.element);
            j.y_value = y.y;
            with_out(j, out)
        }
        Cmd::Datum { input, output } => {
            let mut j = JobSpec::new(CommandKind::Datum);
            j.input = Some(input.spec()?);
            j.output = output;
            j
        }
        Cmd::Run { job } => {
            let mut j: JobSpec = job::read_json(&job)?;
            if let Some(dir) = job.parent() {
                j.rebase(dir);
            }
            j
        }
    })
}

fn execute(cmd: Cmd) -> Result<u8, Failure> {
    let job = job_of(cmd)?;
    let report = run::run(&job)?;
    let text = report.render(job.format);
    match &job.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input("io", format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(report.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            print!("{}", run::error_json(&f));
            ExitCode::from(f.code)
        }
    }
}

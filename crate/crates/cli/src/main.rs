//! `opforge`: prepare, train, generate, evolve, score and report.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use thiserror::Error;

use opforge_core::neural::NeuralError;
use opforge_core::pipeline::PipelineError;
use opforge_core::properties::PropertyError;
use opforge_core::report::ReportError;

use config::{resolve, RunConfig, KEYS};

/// Failure classes, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn csv_is_io(e: &csv::Error) -> bool {
    matches!(e.kind(), csv::ErrorKind::Io(_))
}

impl From<NeuralError> for CliError {
    fn from(e: NeuralError) -> Self {
        match e {
            NeuralError::IoFailure { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<PropertyError> for CliError {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::IoFailure { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::IoFailure { .. } => CliError::Io(e.to_string()),
            PipelineError::Csv { ref source, .. } if csv_is_io(source) => CliError::Io(e.to_string()),
            PipelineError::Neural(n) => n.into(),
            PipelineError::Property(p) => p.into(),
            PipelineError::UnknownFormat(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::IoFailure { .. } => CliError::Io(e.to_string()),
            ReportError::Csv(ref c) if csv_is_io(c) => CliError::Io(e.to_string()),
            ReportError::Pipeline(p) => p.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

const SUBCOMMANDS: [(&str, &str); 6] = [
    ("prepare", "Load a corpus, keep molecules above the QED threshold, write .smi"),
    ("train", "Train a model on a corpus and write a checkpoint"),
    ("generate", "Grow one batch of molecules from the seed and write records CSV"),
    ("evolve", "Run the generate, filter and fine-tune loop and write stats CSV"),
    ("score", "Compute descriptors and QED for a .smi file and write CSV"),
    ("report", "Summarise records with docking and property files; CSV and SVG"),
];

fn cli() -> Command {
    let flags: Vec<Arg> = std::iter::once(
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("flat `key = value` config file; flags override it"),
    )
    .chain(KEYS.iter().map(|(key, default, help)| {
        let help = if default.is_empty() {
            help.to_string()
        } else {
            format!("{help} [default: {default}]")
        };
        Arg::new(*key)
            .long(*key)
            .value_name("VALUE")
            .action(ArgAction::Set)
            .help(help)
    }))
    .collect();
    Command::new("opforge")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Fragment-seeded molecule generation and scoring")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommands(
            SUBCOMMANDS
                .iter()
                .map(|(name, about)| Command::new(*name).about(*about).args(flags.clone())),
        )
}

fn flag_values(m: &ArgMatches) -> Vec<(String, String)> {
    KEYS.iter()
        .filter_map(|(k, _, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn init_logging() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format(|buf, record| {
            writeln!(
                buf,
                "{} {} {}",
                buf.timestamp_millis(),
                record.level().as_str().to_ascii_lowercase(),
                record.args()
            )
        })
        .target(env_logger::Target::Stderr)
        .try_init()
        .ok();
}

/// Parses `args` and runs the subcommand; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging();
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let file = sub.get_one::<String>("config").map(std::path::PathBuf::from);
    let result = resolve(file.as_deref(), &flag_values(sub))
        .and_then(|values| commands::dispatch(name, &RunConfig::new(values)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("opforge {name}: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        cli().debug_assert();
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run(["opforge", "frobnicate"]), 1);
        assert_eq!(run(["opforge"]), 1);
        assert_eq!(run(["opforge", "score", "--no-such-flag", "x"]), 1);
    }

    #[test]
    fn error_classes() {
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        let e: CliError = PipelineError::IoFailure { path: "x".into(), source: io }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = PipelineError::SeedMissingRequiredElements("P".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = ReportError::NoPlottableData.into();
        assert_eq!(e.exit_code(), 2);
    }
}

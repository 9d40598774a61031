//! Command-line workbench over `delta-core`: subcommands, deterministic
//! reports and the fixture corpus.

pub mod cli;
pub mod commands;
pub mod exec;
pub mod fixtures;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use crate::cli::{Cli, Command};
use crate::commands::Ctx;
use crate::exec::Threads;
use crate::report::Report;

/// Exit status and rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&argv) {
        Ok(cli) => {
            let (code, report) = execute(&cli);
            Outcome {
                code,
                stdout: report.render(cli.json),
                stderr: String::new(),
            }
        }
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => Outcome {
            code: EXIT_OK,
            stdout: e.to_string(),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("{}\n{}", e.render(), flag_help(&argv)),
        },
    }
}

/// Help for the subcommand named in `argv`, else the top-level help.
fn flag_help(argv: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let name = argv
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find(|a| cmd.find_subcommand(a).is_some())
        .map(str::to_string);
    match name.and_then(|n| cmd.find_subcommand_mut(&n).map(|c| c.render_help())) {
        Some(h) => h.to_string(),
        None => cmd.render_help().to_string(),
    }
}

pub(crate) fn execute_args(argv: &[&str]) -> (i32, Report) {
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let mut r = Report::new("usage");
            r.result = serde_json::json!({ "error": { "kind": "Usage", "message": e.to_string() } });
            (EXIT_USAGE, r)
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> (i32, Report) {
    let ctx = Ctx {
        window: cli.window,
        threshold: cli.threshold,
        seed: cli.seed,
        exec: Threads { parallel: !cli.serial },
    };
    let name = match &cli.command {
        Command::Delta(_) => "delta",
        Command::Iterate(_) => "iterate",
        Command::Cover(_) => "cover",
        Command::DeltaLarge(_) => "delta-large",
        Command::Partition(_) => "partition",
        Command::BuildY(_) => "build-y",
        Command::Classify(_) => "classify",
        Command::Reproduce(_) => "reproduce",
    };
    let mut r = Report::new(name);
    let outcome = match &cli.command {
        Command::Delta(a) => commands::delta(&ctx, a, &mut r),
        Command::Iterate(a) => commands::iterate(&ctx, a, &mut r),
        Command::Cover(a) => commands::cover(&ctx, a, &mut r),
        Command::DeltaLarge(a) => commands::delta_large(&ctx, a, &mut r),
        Command::Partition(a) => commands::partition(&ctx, a, &mut r),
        Command::BuildY(a) => commands::build_y(&ctx, a, &mut r),
        Command::Classify(a) => commands::classify(&ctx, a, &mut r),
        Command::Reproduce(a) => Ok(fixtures::reproduce(a, cli.serial, &mut r)),
    };
    match outcome {
        Ok(true) => (EXIT_OK, r),
        Ok(false) => (EXIT_DOMAIN, r),
        Err(e) => {
            r.result = serde_json::json!({ "error": report::error(&e) });
            (EXIT_DOMAIN, r)
        }
    }
}
